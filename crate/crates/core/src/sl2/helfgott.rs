//! The map `a -> a g a^-1` and its fibers.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

use super::element::ModMat2;
use super::set::GroupSet;

#[derive(Debug, Clone, PartialEq)]
pub struct HelfgottReport {
    pub g: ModMat2,
    pub size: usize,
    /// Size of the trace fiber of `g`, which is its conjugacy class.
    pub conj_size: u64,
    /// `|Conj(g) ∩ A g A^-1|`.
    pub conj_hits: usize,
    /// Number of distinct `a g a^-1`.
    pub images: usize,
    /// Elements `a_0` whose fiber is large enough.
    pub a0: Vec<ModMat2>,
    /// `min |Centr(g) ∩ a_0^-1 A|` over `A_0`.
    pub min_centralizer_hits: usize,
    /// Every `a_0` in `A_0` has `|A| <= 2 conj_hits |Centr(g) ∩ a_0^-1 A|`.
    pub inequality_holds: bool,
    /// `|A_0| >= ceil(|A| / 2)`.
    pub a0_large: bool,
}

impl HelfgottReport {
    pub fn holds(&self) -> bool {
        self.inequality_holds && self.a0_large
    }
}

/// Number of elements of `SL_2(F_p)` with the same trace as a regular `g`.
pub fn conjugacy_class_size(g: &ModMat2) -> Result<u64> {
    if !g.is_special() {
        return Err(Error::InvalidParameter("g must lie in SL_2".into()));
    }
    if !g.is_regular() {
        return Err(Error::NotRegular);
    }
    let p = g.modulus() as u64;
    let t = g.trace() as u64;
    // a + d = t, ad - bc = 1: count (a, b, c) per a
    let mut n = 0u64;
    for a in 0..p {
        let d = (t + p - a) % p;
        let bc = (a * d % p + p - 1) % p;
        n += if bc == 0 { 2 * p - 1 } else { p - 1 };
    }
    Ok(n)
}

pub fn commutes(x: &ModMat2, y: &ModMat2) -> bool {
    x.mul_unchecked(y) == y.mul_unchecked(x)
}

pub fn helfgott_inequality(a: &GroupSet, g: &ModMat2) -> Result<HelfgottReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.modulus() != g.modulus() {
        return Err(Error::ModulusMismatch(a.modulus(), g.modulus()));
    }
    let conj_size = conjugacy_class_size(g)?;
    let t = g.trace();

    let ag: Vec<ModMat2> = a.iter().map(|x| x.mul_unchecked(g)).collect();
    let inv = a.inverse_set();
    let mut conj: HashSet<u64> = HashSet::new();
    for x in &ag {
        for y in &inv {
            let z = x.mul_unchecked(y);
            if z.trace() == t {
                conj.insert(z.index());
            }
        }
    }
    let conj_hits = conj.len();

    let mut fibers: HashMap<u64, Vec<ModMat2>> = HashMap::new();
    for (x, xg) in a.iter().zip(&ag) {
        fibers
            .entry(xg.mul_unchecked(&x.inverse()).index())
            .or_default()
            .push(*x);
    }
    let n = a.len();
    let mut a0: Vec<ModMat2> = fibers
        .values()
        .filter(|f| 2 * f.len() * conj_hits >= n)
        .flatten()
        .copied()
        .collect();
    a0.sort_by_key(|x| x.index());

    let mut min_hits = usize::MAX;
    let mut inequality_holds = true;
    for x0 in &a0 {
        let x0i = x0.inverse();
        let hits = a
            .iter()
            .filter(|y| commutes(&x0i.mul_unchecked(y), g))
            .count();
        min_hits = min_hits.min(hits);
        inequality_holds &= 2 * conj_hits * hits >= n;
    }
    Ok(HelfgottReport {
        g: *g,
        size: n,
        conj_size,
        conj_hits,
        images: fibers.len(),
        a0_large: 2 * a0.len() >= n,
        a0,
        min_centralizer_hits: if min_hits == usize::MAX { 0 } else { min_hits },
        inequality_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_class(g: &ModMat2) -> u64 {
        GroupSet::full(g.modulus() as u64)
            .unwrap()
            .iter()
            .filter(|h| is_conjugate(g, h))
            .count() as u64
    }

    fn is_conjugate(g: &ModMat2, h: &ModMat2) -> bool {
        let p = g.modulus() as u64;
        GroupSet::full(p)
            .unwrap()
            .iter()
            .any(|x| x.mul_unchecked(g).mul_unchecked(&x.inverse()) == *h)
    }

    #[test]
    fn trace_fiber_is_the_class_for_regular_elements() {
        let p = 5u64;
        for g in GroupSet::full(p).unwrap().iter().filter(|g| g.is_regular()).take(6) {
            assert_eq!(conjugacy_class_size(g).unwrap(), brute_class(g), "{g}");
        }
        let e = ModMat2::identity(5).unwrap();
        assert_eq!(conjugacy_class_size(&e), Err(Error::NotRegular));
    }

    #[test]
    fn full_group_gives_class_equation() {
        let p = 7u64;
        let full = GroupSet::full(p).unwrap();
        let g = ModMat2::new(1, 2, 1, 3, p).unwrap();
        let r = helfgott_inequality(&full, &g).unwrap();
        assert_eq!(r.conj_hits as u64, r.conj_size);
        assert_eq!(r.conj_size * r.min_centralizer_hits as u64, full.len() as u64);
        assert_eq!(r.a0.len(), full.len());
        assert!(r.holds());
    }

    #[test]
    fn singleton() {
        let x = ModMat2::new(2, 1, 1, 1, 7).unwrap();
        let g = ModMat2::new(1, 2, 1, 3, 7).unwrap();
        let r = helfgott_inequality(&GroupSet::singleton(x), &g).unwrap();
        assert_eq!((r.conj_hits, r.min_centralizer_hits), (1, 1));
        assert!(r.holds());
    }

    #[test]
    fn random_sets_mod_7() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = GroupSet::random(7, 50, &mut rng).unwrap();
        let regular: Vec<ModMat2> = GroupSet::full(7)
            .unwrap()
            .iter()
            .filter(|g| g.is_regular())
            .step_by(7)
            .take(20)
            .copied()
            .collect();
        assert_eq!(regular.len(), 20);
        for g in &regular {
            let r = helfgott_inequality(&a, g).unwrap();
            assert!(r.holds(), "{g}");
            assert!(r.images <= r.conj_hits);
        }
    }

    #[test]
    fn rejects_non_regular() {
        let a = GroupSet::identity(5).unwrap();
        let u = ModMat2::new(1, 1, 0, 1, 5).unwrap();
        assert_eq!(helfgott_inequality(&a, &u), Err(Error::NotRegular));
    }
}
