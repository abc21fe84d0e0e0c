//! Fourier transforms on `SL_2(F_q)` through the permutation action on the
//! `q + 1` points of the projective line, which splits as trivial plus
//! Steinberg.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{check_modulus, is_prime};
use crate::error::{Error, Result};
use crate::sl2::{group_order, BorelSpec, GroupSet, ModMat2, ProjPoint};

use super::linalg::{exact_sqrt, lambda_max_bracket, rank_one_eigenvalue, to_f64, RatMatrix};

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn perm_action(g: &ModMat2, pt: ProjPoint) -> Result<ProjPoint> {
    if g.modulus() != pt.modulus() {
        return Err(Error::ModulusMismatch(g.modulus(), pt.modulus()));
    }
    Ok(g.act(pt))
}

/// `sigma[j] = g . j` on point indices.
pub fn permutation(g: &ModMat2) -> Vec<usize> {
    ProjPoint::all(g.modulus()).map(|pt| g.act(pt).index()).collect()
}

/// `P(g)` with `P[g.j][j] = 1`.
pub fn perm_matrix(g: &ModMat2) -> RatMatrix {
    let sigma = permutation(g);
    let n = sigma.len();
    RatMatrix::from_fn(n, n, |i, j| if sigma[j] == i { BigRational::one() } else { BigRational::zero() })
}

/// `I - J / n`, the projection away from constants.
pub fn projector(n: usize) -> RatMatrix {
    let c = BigRational::new(1.into(), (n as u64).into());
    RatMatrix::from_fn(n, n, |i, j| {
        if i == j {
            BigRational::one() - &c
        } else {
            -c.clone()
        }
    })
}

/// `sum_g f(g) P(g)` for a finitely supported `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierImage {
    pub q: u32,
    pub matrix: RatMatrix,
    /// `sum_g f(g)`, the transform at the trivial representation.
    pub total: BigRational,
}

pub fn fourier(q: u64, f: impl IntoIterator<Item = (ModMat2, BigRational)>) -> Result<FourierImage> {
    let q32 = check_modulus(q)?;
    let n = q32 as usize + 1;
    let mut matrix = RatMatrix::zeros(n, n);
    let mut total = BigRational::zero();
    for (g, c) in f {
        if g.modulus() != q32 {
            return Err(Error::ModulusMismatch(q32, g.modulus()));
        }
        if !g.is_special() {
            return Err(Error::InvalidParameter(format!("{g} is not in SL_2")));
        }
        for (j, i) in permutation(&g).into_iter().enumerate() {
            *matrix.get_mut(i, j) += &c;
        }
        total += c;
    }
    Ok(FourierImage { q: q32, matrix, total })
}

/// Transform of the indicator function of a set.
pub fn fourier_indicator(a: &GroupSet) -> Result<FourierImage> {
    fourier(a.modulus() as u64, a.iter().map(|g| (*g, BigRational::one())))
}

impl FourierImage {
    pub fn trivial_scalar(&self) -> &BigRational {
        &self.total
    }

    /// `Q F Q` with `Q = I - J/(q+1)`.
    pub fn steinberg_block(&self) -> RatMatrix {
        let proj = projector(self.matrix.rows());
        &(&proj * &self.matrix) * &proj
    }

    pub fn norms(&self) -> NormReport {
        NormReport::of_block(&self.steinberg_block(), &self.total, self.q)
    }

    /// `tr(P(g^-1) M)` for the Steinberg block `M`.
    fn steinberg_trace_at_inverse(&self, st: &RatMatrix, g: &ModMat2) -> BigRational {
        let h = permutation(&g.inverse());
        (0..h.len()).map(|k| st.get(k, h[k])).sum()
    }

    /// `f(g)` rebuilt from the trivial and Steinberg blocks only.
    pub fn invert_two_block(&self, g: &ModMat2) -> BigRational {
        let st = self.steinberg_block();
        self.invert_with(&st, g)
    }

    fn invert_with(&self, st: &RatMatrix, g: &ModMat2) -> BigRational {
        let order = rat(group_order(self.q));
        (&self.total + rat(self.q) * self.steinberg_trace_at_inverse(st, g)) / order
    }
}

/// Norms of the Steinberg block of a transform.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub hs_norm: f64,
    pub op_norm: f64,
    pub rank: usize,
    /// `(|sum f| + q ||St||_HS) / |G|`.
    pub wiener_contrib: f64,
    pub hs_sq: BigRational,
    /// Exact `||St||_op^2` when the block has rank one.
    pub op_sq_exact: Option<BigRational>,
    /// Exact `||St||_HS` when it is rational.
    pub hs_exact: Option<BigRational>,
    pub wiener_exact: Option<BigRational>,
}

impl NormReport {
    fn of_block(st: &RatMatrix, total: &BigRational, q: u32) -> NormReport {
        let hs_sq = st.frobenius_sq();
        let gram = st.gram();
        let rank = st.rank();
        let op_sq_exact = if rank == 1 { rank_one_eigenvalue(&gram) } else { None };
        let op_norm = match &op_sq_exact {
            Some(x) => to_f64(x).sqrt(),
            None if rank == 0 => 0.0,
            None => {
                let (lo, hi) = lambda_max_bracket(&gram, 40);
                ((to_f64(&lo) + to_f64(&hi)) / 2.0).sqrt()
            }
        };
        let order = rat(group_order(q));
        let hs_exact = exact_sqrt(&hs_sq);
        let wiener_exact = hs_exact
            .as_ref()
            .map(|hs| (total.abs() + rat(q) * hs) / &order);
        let hs_norm = to_f64(&hs_sq).sqrt();
        NormReport {
            hs_norm,
            op_norm,
            rank,
            wiener_contrib: (to_f64(&total.abs()) + q as f64 * hs_norm) / to_f64(&order),
            hs_sq,
            op_sq_exact,
            hs_exact,
            wiener_exact,
        }
    }
}

/// `sum |f|^2` against the trivial and Steinberg terms of the Plancherel sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsevalReport {
    pub lhs: BigRational,
    /// `(|sum f|^2 + q ||St||_HS^2) / |G|`.
    pub two_block: BigRational,
}

impl ParsevalReport {
    /// Only the trivial and Steinberg representations see `f`.
    pub fn holds(&self) -> bool {
        self.lhs == self.two_block
    }
}

pub fn parseval_two_block(q: u64, f: &[(ModMat2, BigRational)]) -> Result<ParsevalReport> {
    let img = fourier(q, f.iter().cloned())?;
    let mut merged: HashMap<ModMat2, BigRational> = HashMap::new();
    for (g, c) in f {
        *merged.entry(*g).or_insert_with(BigRational::zero) += c;
    }
    let lhs = merged.values().map(|c| c * c).sum();
    let st = img.steinberg_block();
    let two_block = (&img.total * &img.total + rat(img.q) * st.frobenius_sq()) / rat(group_order(img.q));
    Ok(ParsevalReport { lhs, two_block })
}

/// Exact statements about the indicator of the standard Borel.
#[derive(Debug, Clone, PartialEq)]
pub struct BorelCertificate {
    pub q: u32,
    pub group_order: u64,
    pub borel_size: u64,
    pub norms: NormReport,
    pub hs_matches: bool,
    pub op_matches: bool,
    pub rank_one: bool,
    /// `sum 1_B^2 = |B|^2 (1 + q) / |G|`.
    pub parseval: bool,
    pub wiener_is_one: bool,
    /// `1_B` is recovered from the two blocks at every group element.
    pub inversion: bool,
}

impl BorelCertificate {
    pub fn all_hold(&self) -> bool {
        self.hs_matches && self.op_matches && self.rank_one && self.parseval && self.wiener_is_one && self.inversion
    }
}

fn check_odd_prime(q: u64) -> Result<u32> {
    if q % 2 == 0 || !is_prime(q) {
        return Err(Error::InvalidParameter(format!("{q} is not an odd prime")));
    }
    check_modulus(q)
}

pub fn borel_certificates(q: u64) -> Result<BorelCertificate> {
    let q32 = check_odd_prime(q)?;
    let borel = BorelSpec::standard(q32).elements();
    let img = fourier_indicator(&borel)?;
    let norms = img.norms();
    let b = borel.len() as u64;
    let order = group_order(q32);
    let b_rat = rat(b);
    let b_sq = &b_rat * &b_rat;
    let parseval_rhs = &b_sq * rat(1 + q) / rat(order);
    let st = img.steinberg_block();
    let inversion = GroupSet::full(q)?.iter().all(|g| {
        let want = if g.is_upper_triangular() { BigRational::one() } else { BigRational::zero() };
        img.invert_with(&st, g) == want
    });
    let two_block = parseval_two_block(q, &borel.iter().map(|g| (*g, BigRational::one())).collect::<Vec<_>>())?;
    Ok(BorelCertificate {
        q: q32,
        group_order: order,
        borel_size: b,
        hs_matches: norms.hs_sq == b_sq,
        op_matches: norms.op_sq_exact.as_ref() == Some(&b_sq),
        rank_one: norms.rank == 1,
        parseval: b_rat == parseval_rhs && two_block.holds(),
        wiener_is_one: norms.wiener_exact == Some(BigRational::one()),
        inversion,
        norms,
    })
}

/// `sum d^2` over the irreducible representations of `SL_2(F_q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inventory {
    pub q: u64,
    /// `(family, how many, dimension)`.
    pub families: Vec<(&'static str, u128, u128)>,
    pub sum: u128,
    pub order: u128,
    pub nontrivial: u128,
    pub d_min: u128,
}

impl Inventory {
    pub fn holds(&self) -> bool {
        self.sum == self.order
    }
}

pub fn dimension_inventory(q: u64) -> Result<Inventory> {
    if q < 3 || q % 2 == 0 || !is_prime(q) {
        return Err(Error::InvalidParameter(format!("{q} is not an odd prime")));
    }
    let q = q as u128;
    let families = vec![
        ("trivial", 1, 1),
        ("principal series", (q - 3) / 2, q + 1),
        ("steinberg", 1, q),
        ("half principal", 2, (q + 1) / 2),
        ("half discrete", 2, (q - 1) / 2),
        ("discrete series", (q - 1) / 2, q - 1),
    ];
    let sum = families.iter().map(|&(_, n, d)| n * d * d).sum();
    let nontrivial = families.iter().skip(1).map(|&(_, n, _)| n).sum();
    Ok(Inventory {
        q: q as u64,
        families,
        sum,
        order: q * q * q - q,
        nontrivial,
        d_min: (q - 1) / 2,
    })
}

/// The spectral-gap bound on the Steinberg block and the mixing estimate
/// it gives for `A^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub q: u32,
    pub size: usize,
    pub n: u32,
    pub op_norm: f64,
    /// `sqrt(|A| |G| / d_min)`.
    pub bound: f64,
    /// `||St||_op^2 < |A| |G| / d_min`, decided exactly.
    pub below_bound: bool,
    /// `|A| >= 2 (q+1)^2 q^{2/n}`.
    pub hypothesis_holds: bool,
    /// `ln(|A|^n / |G|) - ln(bound^{n-2} |A|)`.
    pub log_margin: f64,
    /// `|A|^n / |G| > bound^{n-2} |A|`, decided exactly.
    pub mixing_positive: bool,
    /// `A^n = SL_2(F_q)` by direct powering, when it was run.
    pub power_is_full: Option<bool>,
}

pub fn spectral_gap_check(a: &GroupSet, n: u32, verify_power: bool) -> Result<GapReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if n < 2 {
        return Err(Error::InvalidParameter("n must be >= 2".into()));
    }
    let q = a.modulus();
    let inv = dimension_inventory(q as u64)?;
    let d_min = inv.d_min as u64;
    let order = group_order(q);
    let size = a.len() as u64;

    let img = fourier_indicator(a)?;
    let st = img.steinberg_block();
    let norms = NormReport::of_block(&st, &img.total, q);
    let t = BigRational::new((BigUint::from(size) * order).into(), d_min.into());
    let below_bound = st.gram().shifted_neg(&t).is_pd();

    let (sz, ob, qb) = (BigUint::from(size), BigUint::from(order), BigUint::from(q));
    // |A|^n >= 2^n (q+1)^{2n} q^2
    let hypothesis_holds = sz.pow(n) >= BigUint::from(2u32).pow(n) * (&qb + 1u32).pow(2 * n) * &qb * &qb;
    // squared: |A|^{2n-2} d_min^{n-2} > |G|^2 (|A| |G|)^{n-2}
    let mixing_positive = sz.pow(2 * n - 2) * BigUint::from(d_min).pow(n - 2)
        > ob.pow(2) * (&sz * &ob).pow(n - 2);
    let (sf, of) = (size as f64, order as f64);
    let log_t = (sf * of / d_min as f64).ln();
    let log_margin = n as f64 * sf.ln() - of.ln() - ((n - 2) as f64 / 2.0 * log_t + sf.ln());

    let power_is_full = if verify_power && mixing_positive {
        Some(a.power(n)?.is_full_group())
    } else {
        None
    };
    Ok(GapReport {
        q,
        size: a.len(),
        n,
        op_norm: norms.op_norm,
        bound: (sf * of / d_min as f64).sqrt(),
        below_bound,
        hypothesis_holds,
        log_margin,
        mixing_positive,
        power_is_full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(q: u64, rng: &mut impl Rng) -> ModMat2 {
        ModMat2::from_index(rng.random_range(0..group_order(q as u32)), q as u32)
    }

    fn sparse(q: u64, k: usize, rng: &mut impl Rng) -> Vec<(ModMat2, BigRational)> {
        (0..k)
            .map(|_| (random_element(q, rng), rat(rng.random_range(-5i64..=5))))
            .collect()
    }

    #[test]
    fn action_basics() {
        let e = ModMat2::identity(3).unwrap();
        assert!(ProjPoint::all(3).all(|pt| perm_action(&e, pt).unwrap() == pt));
        let u = ModMat2::new(1, 1, 0, 1, 3).unwrap();
        assert_eq!(ProjPoint::all(3).filter(|&pt| u.act(pt) == pt).count(), 1);
        assert!(perm_action(&u, ProjPoint::infinity(5)).is_err());
    }

    #[test]
    fn homomorphism_exhaustive_mod_3() {
        let g = GroupSet::full(3).unwrap();
        for x in &g {
            let px = perm_matrix(x);
            for y in &g {
                assert_eq!(perm_matrix(&x.mul_unchecked(y)), &px * &perm_matrix(y));
            }
        }
    }

    #[test]
    fn homomorphism_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in [5u64, 7, 11] {
            for _ in 0..1000 {
                let (x, y) = (random_element(q, &mut rng), random_element(q, &mut rng));
                let (sx, sy) = (permutation(&x), permutation(&y));
                let composed: Vec<usize> = sy.iter().map(|&j| sx[j]).collect();
                assert_eq!(permutation(&x.mul_unchecked(&y)), composed);
            }
        }
    }

    #[test]
    fn delta_and_full_group() {
        let e = ModMat2::identity(5).unwrap();
        let img = fourier(5, [(e, BigRational::one())]).unwrap();
        assert_eq!(img.matrix, RatMatrix::identity(6));
        let full = fourier_indicator(&GroupSet::full(5).unwrap()).unwrap();
        let c = rat(120 / 6);
        assert!((0..6).all(|i| (0..6).all(|j| *full.matrix.get(i, j) == c)));
        assert!(full.steinberg_block().is_zero());
        assert!(full.matrix.column_sums().iter().all(|s| *s == rat(120)));
    }

    #[test]
    fn convolution_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for q in [5u64, 7] {
            let f = sparse(q, 6, &mut rng);
            let g = sparse(q, 6, &mut rng);
            let mut conv: HashMap<ModMat2, BigRational> = HashMap::new();
            for (x, a) in &f {
                for (y, b) in &g {
                    *conv.entry(x.mul_unchecked(y)).or_insert_with(BigRational::zero) += a * b;
                }
            }
            let lhs = fourier(q, conv).unwrap().matrix;
            let rhs = &fourier(q, f).unwrap().matrix * &fourier(q, g).unwrap().matrix;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn borel_certificates_hold() {
        for q in [3u64, 5, 7] {
            let c = borel_certificates(q).unwrap();
            assert!(c.all_hold(), "{c:?}");
            assert_eq!(c.norms.hs_exact, Some(rat(q * (q - 1))));
        }
        assert!(borel_certificates(4).is_err());
        assert!(borel_certificates(2).is_err());
    }

    #[test]
    fn parseval_on_borel_supported_functions() {
        let q = 7u64;
        let borel = BorelSpec::standard(7).elements();
        let scaled: Vec<_> = borel.iter().map(|g| (*g, rat(3))).collect();
        assert!(parseval_two_block(q, &scaled).unwrap().holds());
        let h = ModMat2::new(0, 6, 1, 3, q).unwrap();
        let coset: Vec<_> = borel.iter().map(|g| (h.mul_unchecked(g), BigRational::one())).collect();
        assert!(parseval_two_block(q, &coset).unwrap().holds());
        // a point mass on B sees every representation
        let e = ModMat2::identity(q).unwrap();
        assert!(!parseval_two_block(q, &[(e, BigRational::one())]).unwrap().holds());
    }

    #[test]
    fn inventory() {
        assert_eq!(dimension_inventory(3).unwrap().sum, 24);
        assert_eq!(dimension_inventory(5).unwrap().sum, 120);
        assert_eq!(dimension_inventory(7).unwrap().sum, 336);
        let inv = dimension_inventory(11).unwrap();
        assert!(inv.holds());
        assert_eq!(inv.nontrivial, 14);
        for bad in [2u64, 9, 15] {
            assert!(dimension_inventory(bad).is_err());
        }
    }

    #[test]
    fn gap_for_full_group_and_borel() {
        let full = GroupSet::full(5).unwrap();
        let r = spectral_gap_check(&full, 3, true).unwrap();
        assert_eq!(r.op_norm, 0.0);
        assert!(r.below_bound);
        for q in [5u64, 7] {
            let b = standard_borel(q);
            let r = spectral_gap_check(&b, 3, false).unwrap();
            assert_eq!(r.op_norm, (q * (q - 1)) as f64);
            assert!(r.below_bound);
        }
    }

    fn standard_borel(q: u64) -> GroupSet {
        BorelSpec::standard(q as u32).elements()
    }
}
