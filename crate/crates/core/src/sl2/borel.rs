//! How sets meet Borel subgroups and their cosets.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::arith::check_modulus;
use crate::error::{Error, Result};

use super::combinatorics::ratio_f64;
use super::element::{group_order, ModMat2};
use super::projective::{BorelSpec, ProjPoint};
use super::set::{GroupSet, PowerLayers};

/// Representation counts of `B g B` for one `g` outside `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleCosetCounts {
    /// `max_x r_{BgB}(x)`.
    pub max_representations: u64,
    /// `|BgB|`.
    pub size: u64,
    /// `BgB` misses `B` and has `p^3 - p^2` elements.
    pub is_complement: bool,
}

/// `r_{BgB}` for the standard Borel `B`; rejects `g` in `B`.
pub fn double_coset_counts(g: &ModMat2) -> Result<DoubleCosetCounts> {
    if !g.is_special() {
        return Err(Error::InvalidParameter("g must lie in SL_2".into()));
    }
    if g.is_upper_triangular() {
        return Err(Error::InBorel);
    }
    let borel = BorelSpec::standard(g.modulus()).elements();
    Ok(double_coset_counts_with(g, &borel))
}

fn double_coset_counts_with(g: &ModMat2, borel: &GroupSet) -> DoubleCosetCounts {
    let p = g.modulus();
    let order = group_order(p) as usize;
    let mut counts = vec![0u32; order];
    let right: Vec<ModMat2> = borel.iter().map(|b| g.mul_unchecked(b)).collect();
    for b1 in borel {
        for gb in &right {
            counts[b1.mul_unchecked(gb).index() as usize] += 1;
        }
    }
    let mut max = 0u64;
    let mut size = 0u64;
    let mut meets_borel = false;
    for (i, &c) in counts.iter().enumerate() {
        if c > 0 {
            size += 1;
            max = max.max(c as u64);
            if ModMat2::from_index(i as u64, p).is_upper_triangular() {
                meets_borel = true;
            }
        }
    }
    let p64 = p as u64;
    DoubleCosetCounts {
        max_representations: max,
        size,
        is_complement: !meets_borel && size == p64 * p64 * p64 - p64 * p64,
    }
}

/// Summary of the double-coset check over every `g` outside the standard Borel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosetReport {
    pub p: u32,
    pub checked: usize,
    /// `max_g max_x r_{BgB}(x)`.
    pub max_representations: u64,
    pub bound: u64,
    pub min_size: u64,
    pub max_size: u64,
    /// Elements `g` violating either the bound or the complement property.
    pub violations: usize,
}

impl DoubleCosetReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Exhaustive check of `r_{BgB}(x) <= p - 1` and `BgB = G \ B`.
pub fn verify_double_coset(p: u64) -> Result<DoubleCosetReport> {
    let p32 = check_modulus(p)?;
    if p < 3 {
        return Err(Error::InvalidParameter("double-coset check needs p >= 3".into()));
    }
    let borel = BorelSpec::standard(p32).elements();
    let outside: Vec<ModMat2> = (0..group_order(p32))
        .map(|i| ModMat2::from_index(i, p32))
        .filter(|g| !g.is_upper_triangular())
        .collect();
    let bound = p - 1;
    let results: Vec<DoubleCosetCounts> = outside
        .par_iter()
        .map(|g| double_coset_counts_with(g, &borel))
        .collect();
    let violations = results
        .iter()
        .filter(|r| r.max_representations > bound || !r.is_complement)
        .count();
    Ok(DoubleCosetReport {
        p: p32,
        checked: outside.len(),
        max_representations: results.iter().map(|r| r.max_representations).max().unwrap_or(0),
        bound,
        min_size: results.iter().map(|r| r.size).min().unwrap_or(0),
        max_size: results.iter().map(|r| r.size).max().unwrap_or(0),
        violations,
    })
}

/// Intersections of a set with every Borel subgroup and every coset `gB*`.
#[derive(Debug, Clone, PartialEq)]
pub struct BorelIntersectionReport {
    pub size: usize,
    /// `|A ∩ B*|` per Borel, indexed by its line.
    pub per_borel: Vec<(ProjPoint, usize)>,
    pub max_intersection: usize,
    pub argmax: ProjPoint,
    /// `|A ∩ l_gamma|` for `gamma = 1..p-1` (standard Borel).
    pub line_counts: Vec<(u32, usize)>,
    /// `2 p K^{5/3} |A|^{1/3}`.
    pub lemma_bound: f64,
    /// `max |A ∩ B*| <= 2 p K^{5/3} |A|^{1/3}`, decided exactly.
    pub lemma_holds: bool,
    /// `max |A ∩ g B*|` over all Borels and all `g` outside them.
    pub max_coset_intersection: usize,
    /// `max |A ∩ gB*|^2 / ((p - 1) K |A|)`.
    pub coset_ratio: f64,
    /// `K |A| >= |A ∩ gB*|^2 / (p - 1)` for every coset, decided exactly.
    pub coset_holds: bool,
}

pub fn borel_intersections(a: &GroupSet, k: Ratio<u64>) -> Result<BorelIntersectionReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = a.modulus();
    let n = a.len();
    let mut per_borel = Vec::with_capacity(p as usize + 1);
    let mut max_coset = 0usize;
    for line in ProjPoint::all(p) {
        // a lies in the coset hB* with h.line = a.line
        let mut counts = vec![0usize; p as usize + 1];
        for g in a {
            counts[g.act(line).index()] += 1;
        }
        per_borel.push((line, counts[line.index()]));
        for (i, &c) in counts.iter().enumerate() {
            if i != line.index() {
                max_coset = max_coset.max(c);
            }
        }
    }
    let (argmax, max_intersection) = per_borel
        .iter()
        .copied()
        .max_by_key(|&(pt, c)| (c, std::cmp::Reverse(pt)))
        .expect("p + 1 Borels");

    let mut line_counts: Vec<(u32, usize)> = (1..p).map(|gamma| (gamma, 0)).collect();
    for g in a.iter().filter(|g| g.is_upper_triangular() && g.is_special()) {
        line_counts[g.a() as usize - 1].1 += 1;
    }

    let (kn, kd) = (BigUint::from(*k.numer()), BigUint::from(*k.denom()));
    let pb = BigUint::from(p);
    let nb = BigUint::from(n);
    // x^3 kd^5 <= 8 p^3 kn^5 n
    let x = BigUint::from(max_intersection);
    let lemma_holds = x.pow(3) * kd.pow(5) <= BigUint::from(8u32) * pb.pow(3) * kn.pow(5) * &nb;
    // y^2 kd <= (p - 1) kn n
    let y = BigUint::from(max_coset);
    let coset_holds = y.pow(2) * &kd <= BigUint::from(p - 1) * &kn * &nb;

    let kf = ratio_f64(k);
    Ok(BorelIntersectionReport {
        size: n,
        per_borel,
        max_intersection,
        argmax,
        line_counts,
        lemma_bound: 2.0 * p as f64 * kf.powf(5.0 / 3.0) * (n as f64).cbrt(),
        lemma_holds,
        max_coset_intersection: max_coset,
        coset_ratio: (max_coset as f64).powi(2) / ((p - 1) as f64 * kf * n as f64),
        coset_holds,
    })
}

/// `max{|AB|, |BA|}` against `p^{3/2} |A|^{1/2}` and `|A|^2 / p^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumProductReport {
    pub ab: usize,
    pub ba: usize,
    pub max: usize,
    pub growth_term: f64,
    pub quadratic_term: f64,
    /// `max / min(growth_term, quadratic_term)`.
    pub ratio: f64,
}

/// Uses the coset structure: `AB` is a union of left cosets `aB`, one per
/// point `a.(1:0)`, and `BA` a union of right cosets `Ba`, one per bottom
/// row `(c : d)`.
pub fn borel_sumproduct_ratio(a: &GroupSet) -> Result<SumProductReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = a.modulus();
    let borel_size = p as usize * (p as usize - 1);
    let inf = ProjPoint::infinity(p);
    let left: HashSet<ProjPoint> = a.iter().map(|g| g.act(inf)).collect();
    let right: HashSet<ProjPoint> = a
        .iter()
        .map(|g| ProjPoint::from_homogeneous(g.c(), g.d(), p))
        .collect();
    let ab = left.len() * borel_size;
    let ba = right.len() * borel_size;
    let max = ab.max(ba);
    let n = a.len() as f64;
    let pf = p as f64;
    let growth_term = pf.powf(1.5) * n.sqrt();
    let quadratic_term = n * n / (pf * pf);
    Ok(SumProductReport {
        ab,
        ba,
        max,
        growth_term,
        quadratic_term,
        ratio: max as f64 / growth_term.min(quadratic_term),
    })
}

/// Outcome of testing `A^n ∩ B` against the size threshold
/// `|A| >= 4 p^{2 + 4/(3n - 2)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub n: u32,
    pub size: usize,
    pub threshold: f64,
    pub hypothesis_holds: bool,
    /// The threshold exceeds `|SL_2(F_p)|`, so no set can meet it.
    pub vacuous: bool,
    /// Factors `a_1 .. a_n` whose product is upper triangular, when searched.
    pub witness: Option<Vec<ModMat2>>,
    /// The hypothesis held but `A^n` missed `B`.
    pub violated: bool,
}

impl ThresholdReport {
    pub fn witness_product(&self) -> Option<ModMat2> {
        let w = self.witness.as_ref()?;
        Some(w[1..].iter().fold(w[0], |acc, x| acc.mul_unchecked(x)))
    }
}

pub fn power_borel_threshold(a: &GroupSet, n: u32) -> Result<ThresholdReport> {
    if n < 3 {
        return Err(Error::InvalidParameter("threshold needs n >= 3".into()));
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = a.modulus();
    let e = 3 * n - 2;
    // |A|^{3n-2} >= 4^{3n-2} p^{6n}
    let pb = BigUint::from(p);
    let rhs = BigUint::from(4u32).pow(e) * pb.pow(6 * n);
    let hypothesis_holds = BigUint::from(a.len()).pow(e) >= rhs;
    let vacuous = BigUint::from(group_order(p)).pow(e) < rhs;
    let threshold = 4.0 * (p as f64).powf(2.0 + 4.0 / e as f64);

    let mut witness = None;
    let mut violated = false;
    if hypothesis_holds {
        witness = find_in_power(a, n, |g| g.is_upper_triangular())?;
        violated = witness.is_none();
    }
    Ok(ThresholdReport {
        n,
        size: a.len(),
        threshold,
        hypothesis_holds,
        vacuous,
        witness,
        violated,
    })
}

/// Factors of some element of `A^n` (exactly `n` factors) satisfying `pred`.
pub fn find_in_power(
    a: &GroupSet,
    n: u32,
    pred: impl Fn(&ModMat2) -> bool,
) -> Result<Option<Vec<ModMat2>>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut layers = PowerLayers::new(a)?;
    if n == 1 {
        return Ok(layers.find(&pred).map(|g| vec![g]));
    }
    while layers.exponent() + 1 < n as usize {
        layers.advance(None);
    }
    let hit = layers.advance(Some(&pred));
    Ok(hit.and_then(|g| layers.factorize(&g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::projective::standard_borel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn double_coset_small_primes() {
        let r = verify_double_coset(3).unwrap();
        assert_eq!(r.checked, 18);
        assert!(r.holds());
        assert!(r.max_representations <= 2);
        let r = verify_double_coset(5).unwrap();
        assert!(r.holds());
        assert_eq!((r.min_size, r.max_size), (100, 100));
        assert_eq!(r.max_representations, 4);
    }

    #[test]
    fn double_coset_rejects_borel_elements() {
        let g = ModMat2::new(2, 1, 0, 3, 5).unwrap();
        assert_eq!(double_coset_counts(&g), Err(Error::InBorel));
        let w = ModMat2::new(0, 4, 1, 0, 5).unwrap();
        assert!(double_coset_counts(&w).unwrap().is_complement);
    }

    #[test]
    fn borel_meets_itself() {
        // Lemma bound with K = 1: 8 p^3 |B| >= |B|^3 iff 8p >= (p - 1)^2.
        for p in [3u64, 5, 7, 11, 13] {
            let b = standard_borel(p).unwrap();
            let r = borel_intersections(&b, Ratio::from_integer(1)).unwrap();
            assert_eq!(r.max_intersection, b.len());
            assert!(r.argmax.is_infinity());
            assert_eq!(r.lemma_holds, 8 * p >= (p - 1) * (p - 1), "p={p}");
            // B meets each other Borel in a torus of size p - 1
            assert!(r.per_borel.iter().filter(|(pt, _)| !pt.is_infinity()).all(|&(_, c)| c as u64 == p - 1));
            assert!(r.coset_holds);
        }
    }

    #[test]
    fn singleton_meets_at_most_once() {
        // trace 4 mod 7: irreducible characteristic polynomial, no fixed line
        let a = GroupSet::singleton(ModMat2::new(1, 2, 1, 3, 7).unwrap());
        let r = borel_intersections(&a, Ratio::from_integer(1)).unwrap();
        assert_eq!(r.max_intersection, 0);
        assert!(r.lemma_holds && r.coset_holds);
        let a = GroupSet::singleton(ModMat2::new(1, 1, 0, 1, 7).unwrap());
        let r = borel_intersections(&a, Ratio::from_integer(1)).unwrap();
        assert_eq!(r.max_intersection, 1);
        assert!(r.argmax.is_infinity());
    }

    #[test]
    fn line_counts_sum_to_borel_intersection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = GroupSet::random(7, 120, &mut rng).unwrap();
        let r = borel_intersections(&a, Ratio::from_integer(2)).unwrap();
        let std_count = r.per_borel.iter().find(|(pt, _)| pt.is_infinity()).unwrap().1;
        assert_eq!(r.line_counts.iter().map(|&(_, c)| c).sum::<usize>(), std_count);
        let b = standard_borel(7).unwrap();
        assert_eq!(a.intersection(&b).unwrap().len(), std_count);
    }

    #[test]
    fn sumproduct_matches_direct_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let b = standard_borel(7).unwrap();
        for size in [1usize, 5, 30] {
            let a = GroupSet::random(7, size, &mut rng).unwrap();
            let r = borel_sumproduct_ratio(&a).unwrap();
            assert_eq!(r.ab, a.product_set(&b).unwrap().len());
            assert_eq!(r.ba, b.product_set(&a).unwrap().len());
        }
        let r = borel_sumproduct_ratio(&b).unwrap();
        assert_eq!(r.max, b.len());
        let r = borel_sumproduct_ratio(&GroupSet::identity(7).unwrap()).unwrap();
        assert_eq!(r.max, b.len());
    }

    #[test]
    fn threshold_vacuous_for_small_primes() {
        // 4 p^{18/7} > p^3 - p exactly when p <= 23
        for p in crate::arith::primes_up_to(40).into_iter().filter(|&p| p >= 3) {
            let a = GroupSet::identity(p).unwrap();
            let r = power_borel_threshold(&a, 3).unwrap();
            assert_eq!(r.vacuous, p <= 23, "p={p}");
            assert!(!r.hypothesis_holds);
            assert!(r.witness.is_none());
        }
    }

    #[test]
    fn threshold_full_group_witness_is_identity() {
        let g = GroupSet::full(5).unwrap();
        for n in [3u32, 4] {
            let r = power_borel_threshold(&g, n).unwrap();
            assert!(!r.hypothesis_holds); // vacuous at p = 5
            let w = find_in_power(&g, n, |x| x.is_upper_triangular()).unwrap().unwrap();
            assert_eq!(w.len(), n as usize);
            let prod = w[1..].iter().fold(w[0], |acc, x| acc.mul_unchecked(x));
            assert!(prod.is_identity());
        }
    }
}
