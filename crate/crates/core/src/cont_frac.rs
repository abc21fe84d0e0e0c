//! Finite continued fractions, continuants and their 2x2 matrix form.
//!
//! A rational `a/q` in `(0, 1)` is written `[0; b_1, ..., b_s]` with every
//! `b_j >= 1`. The canonical expansion ends in `b_s >= 2`; every such rational
//! also has a twin `[0; b_1, ..., b_s - 1, 1]`.
//!
//! The matrix attached to an expansion is the product
//! `(0 1 | 1 b_1) ... (0 1 | 1 b_s) = (p_{s-1} p_s | q_{s-1} q_s)`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A reduced fraction `num/den` with `0 <= num <= den`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    num: BigUint,
    den: BigUint,
}

impl Fraction {
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num > den {
            return Err(Error::OutOfRange {
                num: num.to_string(),
                den: den.to_string(),
            });
        }
        if !num.gcd(&den).is_one() {
            return Err(Error::NotCoprime {
                num: num.to_string(),
                den: den.to_string(),
            });
        }
        Ok(Fraction { num, den })
    }

    /// Builds a fraction from parts the caller already knows to be reduced.
    pub(crate) fn from_reduced(num: BigUint, den: BigUint) -> Self {
        debug_assert!(!den.is_zero() && num <= den && num.gcd(&den).is_one());
        Fraction { num, den }
    }

    pub fn zero() -> Self {
        Fraction {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    pub fn one() -> Self {
        Fraction {
            num: BigUint::one(),
            den: BigUint::one(),
        }
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    /// True for `0/1` and `1/1`.
    pub fn is_endpoint(&self) -> bool {
        self.num.is_zero() || self.num == self.den
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::InvalidParameter(format!("expected u/v, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<BigUint>()
                .map_err(|_| Error::InvalidParameter(format!("not a non-negative integer: {t:?}")))
        };
        Fraction::new(parse(n)?, parse(d)?)
    }
}

/// Partial quotients `b_1..b_s` of `[0; b_1, ..., b_s]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CFExpansion {
    quotients: Vec<u64>,
}

impl CFExpansion {
    pub fn new(quotients: Vec<u64>) -> Result<Self> {
        if let Some(i) = quotients.iter().position(|&b| b == 0) {
            return Err(Error::ZeroQuotient(i));
        }
        Ok(CFExpansion { quotients })
    }

    pub(crate) fn from_unchecked(quotients: Vec<u64>) -> Self {
        debug_assert!(quotients.iter().all(|&b| b >= 1));
        CFExpansion { quotients }
    }

    /// The expansion of `0/1`.
    pub fn empty() -> Self {
        CFExpansion::default()
    }

    /// Reserved marker for `1/1`, the one-quotient expansion `[1]`.
    pub fn unit() -> Self {
        CFExpansion { quotients: vec![1] }
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.quotients == [1]
    }

    /// Empty, the unit marker, or ending in a quotient `>= 2`.
    pub fn is_canonical(&self) -> bool {
        match self.quotients.last() {
            None => true,
            Some(&b) => b >= 2 || self.is_unit(),
        }
    }

    pub fn max_quotient(&self) -> Option<u64> {
        self.quotients.iter().copied().max()
    }

    pub fn bounded_by(&self, m: u64) -> bool {
        self.quotients.iter().all(|&b| b <= m)
    }

    /// The other expansion of the same rational: `[.., b]` with `b >= 2`
    /// becomes `[.., b - 1, 1]` and `[.., c, 1]` becomes `[.., c + 1]`.
    /// The empty expansion and the unit marker have no twin.
    pub fn twin(&self) -> Option<CFExpansion> {
        let (&last, init) = self.quotients.split_last()?;
        if last >= 2 {
            let mut q = self.quotients.clone();
            *q.last_mut().unwrap() = last - 1;
            q.push(1);
            Some(CFExpansion { quotients: q })
        } else {
            let (&prev, rest) = init.split_last()?;
            let mut q = rest.to_vec();
            q.push(prev.checked_add(1)?);
            Some(CFExpansion { quotients: q })
        }
    }

    /// Concatenation of two quotient sequences (the matrix of the result is
    /// the product of the two matrices).
    pub fn concat(&self, other: &CFExpansion) -> CFExpansion {
        let mut q = self.quotients.clone();
        q.extend_from_slice(&other.quotients);
        CFExpansion { quotients: q }
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0;")?;
        for (i, b) in self.quotients.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for CFExpansion {
    type Err = Error;

    /// Accepts `[0;1,2,2]`, `[1,2,2]` or `1,2,2`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let body = body.strip_prefix("0;").unwrap_or(body).trim();
        if body.is_empty() {
            return Ok(CFExpansion::empty());
        }
        let quotients = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad partial quotient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CFExpansion::new(quotients)
    }
}

/// `(p_prev p_cur | q_prev q_cur)`, the matrix of a continued fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub p_prev: BigInt,
    pub p_cur: BigInt,
    pub q_prev: BigInt,
    pub q_cur: BigInt,
}

impl Mat2 {
    pub fn new(
        p_prev: impl Into<BigInt>,
        p_cur: impl Into<BigInt>,
        q_prev: impl Into<BigInt>,
        q_cur: impl Into<BigInt>,
    ) -> Self {
        Mat2 {
            p_prev: p_prev.into(),
            p_cur: p_cur.into(),
            q_prev: q_prev.into(),
            q_cur: q_cur.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    /// `(0 1 | 1 b)`.
    pub fn step(b: u64) -> Self {
        Mat2::new(0, 1, 1, b)
    }

    pub fn det(&self) -> BigInt {
        &self.p_prev * &self.q_cur - &self.p_cur * &self.q_prev
    }

    pub fn trace(&self) -> BigInt {
        &self.p_prev + &self.q_cur
    }

    /// Entries in row-major order `(a, b, c, d)`.
    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.p_prev, &self.p_cur, &self.q_prev, &self.q_cur]
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            p_prev: &self.p_prev * &rhs.p_prev + &self.p_cur * &rhs.q_prev,
            p_cur: &self.p_prev * &rhs.p_cur + &self.p_cur * &rhs.q_cur,
            q_prev: &self.q_prev * &rhs.p_prev + &self.q_cur * &rhs.q_prev,
            q_cur: &self.q_prev * &rhs.p_cur + &self.q_cur * &rhs.q_cur,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} {} | {} {})",
            self.p_prev, self.p_cur, self.q_prev, self.q_cur
        )
    }
}

/// Canonical expansion of `f` by the Euclidean algorithm.
///
/// `0/1` maps to the empty expansion and `1/1` to [`CFExpansion::unit`].
pub fn expand(f: &Fraction) -> Result<CFExpansion> {
    if f.num.is_zero() {
        return Ok(CFExpansion::empty());
    }
    if f.num == f.den {
        return Ok(CFExpansion::unit());
    }
    let mut quotients = Vec::new();
    let (mut a, mut b) = (f.den.clone(), f.num.clone());
    while !b.is_zero() {
        let (q, r) = a.div_rem(&b);
        quotients.push(q.to_u64().ok_or(Error::QuotientOverflow)?);
        a = b;
        b = r;
    }
    Ok(CFExpansion { quotients })
}

/// Exact value of `[0; b_1, ..., b_s]` in lowest terms.
pub fn evaluate(cf: &CFExpansion) -> Fraction {
    // Forward convergent recurrence; consecutive convergents are coprime.
    let (mut p_prev, mut p_cur) = (BigUint::one(), BigUint::zero());
    let (mut q_prev, mut q_cur) = (BigUint::zero(), BigUint::one());
    for &b in &cf.quotients {
        let p_next = &p_cur * b + &p_prev;
        let q_next = &q_cur * b + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
    }
    Fraction::from_reduced(p_cur, q_cur)
}

/// The continuant `K(b_1..b_n)`: `K() = 1`, `K(b_1) = b_1`,
/// `K(b_1..b_n) = b_n K(b_1..b_{n-1}) + K(b_1..b_{n-2})`.
pub fn continuant(b: &[u64]) -> BigUint {
    let (mut prev, mut cur) = (BigUint::zero(), BigUint::one());
    for &x in b {
        let next = &cur * x + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Product of the matrices `(0 1 | 1 b_j)` from left to right.
pub fn cf_to_matrix(cf: &CFExpansion) -> Result<Mat2> {
    if cf.is_empty() {
        return Err(Error::EmptyExpansion);
    }
    let mut m = Mat2::identity();
    for &b in &cf.quotients {
        // Right-multiplying by (0 1 | 1 b) shifts columns and applies the recurrence.
        let p_next = &m.p_cur * b + &m.p_prev;
        let q_next = &m.q_cur * b + &m.q_prev;
        m.p_prev = std::mem::replace(&mut m.p_cur, p_next);
        m.q_prev = std::mem::replace(&mut m.q_cur, q_next);
    }
    Ok(m)
}

/// The cyclical continuant `q_s + p_{s-1}`, the trace of [`cf_to_matrix`].
pub fn cyclic_trace(cf: &CFExpansion) -> Result<BigInt> {
    Ok(cf_to_matrix(cf)?.trace())
}

/// How the quotient bound treats the two expansions of a rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Only the canonical expansion (last quotient `>= 2`) is tested.
    #[default]
    Canonical,
    /// Either the canonical expansion or its twin may satisfy the bound.
    Twin,
}

impl Convention {
    /// Whether `f` has all partial quotients `<= m` under this convention.
    /// The endpoints `0/1` and `1/1` always qualify.
    pub fn admits(self, f: &Fraction, m: u64) -> Result<bool> {
        let cf = expand(f)?;
        Ok(self.admits_expansion(&cf, m))
    }

    /// Same as [`Convention::admits`] for an already canonical expansion.
    pub fn admits_expansion(self, cf: &CFExpansion, m: u64) -> bool {
        if cf.is_empty() || cf.is_unit() || cf.bounded_by(m) {
            return true;
        }
        match self {
            Convention::Canonical => false,
            Convention::Twin => cf.twin().is_some_and(|t| t.bounded_by(m)),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Canonical => "canonical",
            Convention::Twin => "twin",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Convention::Canonical),
            "twin" => Ok(Convention::Twin),
            _ => Err(Error::InvalidParameter(format!("unknown convention {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frac(n: u64, d: u64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn cf(q: &[u64]) -> CFExpansion {
        CFExpansion::new(q.to_vec()).unwrap()
    }

    // Independent oracle: walk the Stern-Brocot tree, recording run lengths.
    fn stern_brocot_expansion(n: u64, d: u64) -> Vec<u64> {
        // x = n/d in (0,1); represent d/n = [b_1; b_2, ...] via the tree path.
        let (mut l, mut r) = ((0u64, 1u64), (1u64, 0u64));
        let target = (d, n); // value d/n > 1
        let mut runs: Vec<(bool, u64)> = Vec::new();
        loop {
            let m = (l.0 + r.0, l.1 + r.1);
            let cmp = (target.0 as u128 * m.1 as u128).cmp(&(m.0 as u128 * target.1 as u128));
            let right = match cmp {
                std::cmp::Ordering::Equal => break,
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
            };
            if right {
                l = m;
            } else {
                r = m;
            }
            match runs.last_mut() {
                Some((dir, k)) if *dir == right => *k += 1,
                _ => runs.push((right, 1)),
            }
        }
        // d/n > 1, so the path starts rightward and the runs are the
        // quotients, except that the last run is one short.
        let mut out: Vec<u64> = runs.iter().map(|&(_, k)| k).collect();
        *out.last_mut().unwrap() += 1;
        out
    }

    fn fold_bottom_up(q: &[u64]) -> (u64, u64) {
        // value = num/den, folding 1/(b + value) from the last quotient.
        let (mut num, mut den) = (0u64, 1u64);
        for &b in q.iter().rev() {
            let (n2, d2) = (den, b * den + num);
            num = n2;
            den = d2;
        }
        (num, den)
    }

    #[test]
    fn fraction_validation() {
        assert_eq!(Fraction::new(1u32, 0u32), Err(Error::ZeroDenominator));
        assert!(matches!(Fraction::new(2u32, 4u32), Err(Error::NotCoprime { .. })));
        assert!(matches!(Fraction::new(3u32, 2u32), Err(Error::OutOfRange { .. })));
        assert_eq!("5/7".parse::<Fraction>().unwrap(), frac(5, 7));
        assert!("5:7".parse::<Fraction>().is_err());
    }

    #[test]
    fn oracle_agrees_on_examples() {
        assert_eq!(stern_brocot_expansion(1, 2), vec![2]);
        assert_eq!(stern_brocot_expansion(2, 5), vec![2, 2]);
        assert_eq!(stern_brocot_expansion(5, 7), vec![1, 2, 2]);
        assert_eq!(fold_bottom_up(&[2, 2]), (2, 5));
        assert_eq!(fold_bottom_up(&[1, 2, 2]), (5, 7));
    }

    #[test]
    fn expand_examples() {
        assert_eq!(expand(&frac(1, 2)).unwrap(), cf(&[2]));
        assert_eq!(expand(&frac(2, 5)).unwrap(), cf(&[2, 2]));
        assert_eq!(expand(&frac(5, 7)).unwrap(), cf(&[1, 2, 2]));
        assert_eq!(expand(&Fraction::zero()).unwrap(), CFExpansion::empty());
        assert!(expand(&Fraction::one()).unwrap().is_unit());
    }

    #[test]
    fn expand_matches_stern_brocot_oracle() {
        for d in 2..=200u64 {
            for n in 1..d {
                if num_integer::gcd(n, d) != 1 {
                    continue;
                }
                let got = expand(&frac(n, d)).unwrap();
                assert_eq!(got.quotients(), stern_brocot_expansion(n, d), "{n}/{d}");
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&CFExpansion::empty()), Fraction::zero());
        assert_eq!(evaluate(&cf(&[2, 2])), frac(2, 5));
        assert_eq!(evaluate(&cf(&[1, 2, 2])), frac(5, 7));
        assert_eq!(evaluate(&CFExpansion::unit()), Fraction::one());
        // twins evaluate to the same value
        assert_eq!(evaluate(&cf(&[1, 2, 1])), frac(3, 4));
        assert_eq!(evaluate(&cf(&[1, 3])), frac(3, 4));
    }

    #[test]
    fn continuant_examples() {
        assert_eq!(continuant(&[]), BigUint::one());
        assert_eq!(continuant(&[1, 2]), BigUint::from(3u32));
        assert_eq!(continuant(&[1, 2, 2]), BigUint::from(7u32));
        assert_eq!(continuant(&[5]), BigUint::from(5u32));
    }

    #[test]
    fn matrix_examples() {
        let m = cf_to_matrix(&cf(&[1, 2])).unwrap();
        assert_eq!(m, Mat2::new(1, 2, 1, 3));
        assert_eq!(m.det(), BigInt::one());
        let m = cf_to_matrix(&cf(&[2, 2])).unwrap();
        assert_eq!(m, Mat2::new(1, 2, 2, 5));
        assert_eq!(m.det(), BigInt::one());
        let m = cf_to_matrix(&cf(&[2])).unwrap();
        assert_eq!(m, Mat2::new(0, 1, 1, 2));
        assert_eq!(m.det(), -BigInt::one());
        assert_eq!(cf_to_matrix(&CFExpansion::empty()), Err(Error::EmptyExpansion));
    }

    #[test]
    fn matrix_is_product_of_steps() {
        let e = cf(&[3, 1, 4, 1, 5]);
        let direct = e
            .quotients()
            .iter()
            .fold(Mat2::identity(), |acc, &b| &acc * &Mat2::step(b));
        assert_eq!(cf_to_matrix(&e).unwrap(), direct);
    }

    #[test]
    fn cyclic_trace_examples() {
        assert_eq!(cyclic_trace(&cf(&[1, 2])).unwrap(), BigInt::from(4));
        assert_eq!(cyclic_trace(&cf(&[2, 2])).unwrap(), BigInt::from(6));
        assert_eq!(cyclic_trace(&cf(&[2])).unwrap(), BigInt::from(2));
    }

    #[test]
    fn twins() {
        assert_eq!(cf(&[1, 3]).twin(), Some(cf(&[1, 2, 1])));
        assert_eq!(cf(&[1, 2, 1]).twin(), Some(cf(&[1, 3])));
        assert_eq!(cf(&[2]).twin(), Some(cf(&[1, 1])));
        assert_eq!(CFExpansion::unit().twin(), None);
        assert_eq!(CFExpansion::empty().twin(), None);
    }

    #[test]
    fn conventions() {
        // 1/3 = [3] = [2, 1]
        assert!(!Convention::Canonical.admits(&frac(1, 3), 2).unwrap());
        assert!(Convention::Twin.admits(&frac(1, 3), 2).unwrap());
        // Fibonacci ratios only qualify for M = 1 through their twin.
        assert!(!Convention::Canonical.admits(&frac(3, 5), 1).unwrap());
        assert!(Convention::Twin.admits(&frac(3, 5), 1).unwrap());
        assert!(Convention::Canonical.admits(&Fraction::one(), 1).unwrap());
        assert!(Convention::Canonical.admits(&Fraction::zero(), 1).unwrap());
    }

    #[test]
    fn parse_and_display() {
        let e: CFExpansion = "[0;1,2,2]".parse().unwrap();
        assert_eq!(e, cf(&[1, 2, 2]));
        assert_eq!(e.to_string(), "[0;1,2,2]");
        assert_eq!("1, 2".parse::<CFExpansion>().unwrap(), cf(&[1, 2]));
        assert_eq!("[0;]".parse::<CFExpansion>().unwrap(), CFExpansion::empty());
        assert_eq!("1,0".parse::<CFExpansion>(), Err(Error::ZeroQuotient(1)));
    }

    #[test]
    fn large_fraction_roundtrip() {
        let ones = vec![1u64; 200];
        let f = Fraction::new(continuant(&ones[1..]), continuant(&ones)).unwrap();
        let mut want = vec![1u64; 198];
        want.push(2);
        let e = expand(&f).unwrap();
        assert_eq!(e.quotients(), &want[..]);
        assert_eq!(evaluate(&e), f);
        let huge = BigUint::from(2u32).pow(70);
        let f = Fraction::new(BigUint::one(), huge).unwrap();
        assert_eq!(expand(&f), Err(Error::QuotientOverflow));
    }

    proptest! {
        #[test]
        fn continuant_mirror(b in proptest::collection::vec(1u64..=4, 0..=8)) {
            let mut r = b.clone();
            r.reverse();
            prop_assert_eq!(continuant(&b), continuant(&r));
        }

        #[test]
        fn evaluate_matches_fold(b in proptest::collection::vec(1u64..=6, 1..=10)) {
            let (n, d) = fold_bottom_up(&b);
            let f = evaluate(&CFExpansion::new(b).unwrap());
            prop_assert_eq!(f, frac(n, d));
        }

        #[test]
        fn matrix_entries_are_continuants(b in proptest::collection::vec(1u64..=5, 1..=9)) {
            let m = cf_to_matrix(&CFExpansion::new(b.clone()).unwrap()).unwrap();
            prop_assert_eq!(m.q_cur.clone(), BigInt::from(continuant(&b)));
            prop_assert_eq!(m.p_cur.clone(), BigInt::from(continuant(&b[1..])));
            let sign = if b.len() % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(m.det(), BigInt::from(sign));
        }
    }
}
