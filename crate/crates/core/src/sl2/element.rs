use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{check_modulus, inv_mod, neg_mod};
use crate::cont_frac::Mat2;
use crate::error::{Error, Result};

use super::projective::{BorelSpec, ProjPoint};

/// A 2x2 matrix over `F_p` with determinant `+1` or `-1`.
///
/// Elements of `SL_2(F_p)` have determinant `+1`; the `-1` class holds the
/// matrices of odd-length continued fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModMat2 {
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    p: u32,
}

impl ModMat2 {
    /// Reduces the entries mod `p` and checks `p` prime and `ad - bc = +-1`.
    pub fn new(a: i64, b: i64, c: i64, d: i64, p: u64) -> Result<Self> {
        let p = check_modulus(p)?;
        let r = |x: i64| x.rem_euclid(p as i64) as u32;
        Self::from_residues(r(a), r(b), r(c), r(d), p)
    }

    fn from_residues(a: u32, b: u32, c: u32, d: u32, p: u32) -> Result<Self> {
        let g = ModMat2 { a, b, c, d, p };
        let det = g.det();
        if det != 1 % p && det != p - 1 {
            return Err(Error::NotUnimodular { a, b, c, d, p });
        }
        Ok(g)
    }

    /// Assumes reduced entries, a valid prime and unit determinant.
    #[inline]
    pub(crate) fn raw(a: u32, b: u32, c: u32, d: u32, p: u32) -> Self {
        ModMat2 { a, b, c, d, p }
    }

    /// Reduction of an exact integer matrix.
    pub fn from_mat2(m: &Mat2, p: u64) -> Result<Self> {
        let p32 = check_modulus(p)?;
        let modp = BigInt::from(p32);
        let r = |x: &BigInt| -> u32 {
            let v = ((x % &modp) + &modp) % &modp;
            v.to_u32().expect("residue below modulus")
        };
        Self::from_residues(r(&m.p_prev), r(&m.p_cur), r(&m.q_prev), r(&m.q_cur), p32)
    }

    pub fn identity(p: u64) -> Result<Self> {
        Self::new(1, 0, 0, 1, p)
    }

    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn a(&self) -> u32 {
        self.a
    }
    pub fn b(&self) -> u32 {
        self.b
    }
    pub fn c(&self) -> u32 {
        self.c
    }
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn det(&self) -> u32 {
        let p = self.p as u64;
        let ad = self.a as u64 * self.d as u64 % p;
        let bc = self.b as u64 * self.c as u64 % p;
        ((ad + p - bc) % p) as u32
    }

    /// Determinant `+1`, i.e. membership in `SL_2(F_p)`.
    pub fn is_special(&self) -> bool {
        self.det() == 1 % self.p
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1 % self.p && self.b == 0 && self.c == 0 && self.d == 1 % self.p
    }

    #[inline]
    pub fn trace(&self) -> u32 {
        ((self.a as u64 + self.d as u64) % self.p as u64) as u32
    }

    /// Trace outside `{0, 2, -2}`.
    pub fn is_regular(&self) -> bool {
        let t = self.trace();
        let p = self.p;
        t != 0 && t != 2 % p && t != neg_mod(2 % p, p)
    }

    pub fn try_mul(&self, rhs: &ModMat2) -> Result<ModMat2> {
        if self.p != rhs.p {
            return Err(Error::ModulusMismatch(self.p, rhs.p));
        }
        Ok(self.mul_unchecked(rhs))
    }

    /// Product without the modulus check; both factors must share `p`.
    #[inline]
    pub fn mul_unchecked(&self, rhs: &ModMat2) -> ModMat2 {
        debug_assert_eq!(self.p, rhs.p);
        let p = self.p as u64;
        let (a, b, c, d) = (self.a as u64, self.b as u64, self.c as u64, self.d as u64);
        let (e, f, g, h) = (rhs.a as u64, rhs.b as u64, rhs.c as u64, rhs.d as u64);
        ModMat2 {
            a: ((a * e + b * g) % p) as u32,
            b: ((a * f + b * h) % p) as u32,
            c: ((c * e + d * g) % p) as u32,
            d: ((c * f + d * h) % p) as u32,
            p: self.p,
        }
    }

    pub fn inverse(&self) -> ModMat2 {
        let p = self.p;
        if self.is_special() {
            ModMat2::raw(self.d, neg_mod(self.b, p), neg_mod(self.c, p), self.a, p)
        } else {
            ModMat2::raw(neg_mod(self.d, p), self.b, self.c, neg_mod(self.a, p), p)
        }
    }

    /// `(1 u | 0 1)`.
    pub fn is_unipotent_upper(&self) -> bool {
        self.a == 1 % self.p && self.c == 0 && self.d == 1 % self.p
    }

    /// `(l 0 | 0 l^-1)`.
    pub fn is_diagonal(&self) -> bool {
        self.b == 0 && self.c == 0 && self.is_special()
    }

    /// Upper triangular, i.e. in the standard Borel subgroup.
    pub fn is_upper_triangular(&self) -> bool {
        self.c == 0
    }

    /// Whether `self` fixes the line of `borel`.
    pub fn in_borel(&self, borel: &BorelSpec) -> bool {
        self.act(borel.line()) == borel.line()
    }

    /// Fractional-linear action on the projective line.
    #[inline]
    pub fn act(&self, pt: ProjPoint) -> ProjPoint {
        let p = self.p as u64;
        let (x, y) = pt.homogeneous();
        let nx = (self.a as u64 * x as u64 + self.b as u64 * y as u64) % p;
        let ny = (self.c as u64 * x as u64 + self.d as u64 * y as u64) % p;
        ProjPoint::from_homogeneous(nx as u32, ny as u32, self.p)
    }

    /// Position in a fixed enumeration of `{det = +-1}`: `SL_2` elements take
    /// `0..p^3-p`, the `-1` class the next `p^3-p` slots.
    #[inline]
    pub fn index(&self) -> u64 {
        let p = self.p;
        if self.is_special() {
            special_index(self.a, self.b, self.c, self.d, p)
        } else {
            // (a, -b, c, -d) has determinant +1.
            group_order(p) + special_index(self.a, neg_mod(self.b, p), self.c, neg_mod(self.d, p), p)
        }
    }

    /// Inverse of [`ModMat2::index`].
    pub fn from_index(idx: u64, p: u32) -> ModMat2 {
        let order = group_order(p);
        if idx >= order {
            let g = special_from_index(idx - order, p);
            ModMat2::raw(g.a, neg_mod(g.b, p), g.c, neg_mod(g.d, p), p)
        } else {
            special_from_index(idx, p)
        }
    }
}

/// `|SL_2(F_p)| = p^3 - p`.
pub fn group_order(p: u32) -> u64 {
    let p = p as u64;
    p * p * p - p
}

#[inline]
fn special_index(a: u32, b: u32, c: u32, d: u32, p: u32) -> u64 {
    let pp = p as u64;
    if a != 0 {
        (a as u64 - 1) * pp * pp + b as u64 * pp + c as u64
    } else {
        (pp - 1) * pp * pp + (c as u64 - 1) * pp + d as u64
    }
}

fn special_from_index(idx: u64, p: u32) -> ModMat2 {
    let pp = p as u64;
    let split = (pp - 1) * pp * pp;
    if idx < split {
        let a = (idx / (pp * pp) + 1) as u32;
        let b = ((idx / pp) % pp) as u32;
        let c = (idx % pp) as u32;
        // d = (1 + bc) / a
        let num = (1 + b as u64 * c as u64) % pp;
        let d = (num * inv_mod(a, p) as u64 % pp) as u32;
        ModMat2::raw(a, b, c, d, p)
    } else {
        let r = idx - split;
        let c = (r / pp + 1) as u32;
        let d = (r % pp) as u32;
        let b = neg_mod(inv_mod(c, p), p);
        ModMat2::raw(0, b, c, d, p)
    }
}

impl fmt::Display for ModMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} | {} {}) mod {}", self.a, self.b, self.c, self.d, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64, p: u64) -> ModMat2 {
        ModMat2::new(a, b, c, d, p).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(
            ModMat2::new(1, 1, 1, 1, 5),
            Err(Error::NotUnimodular { .. })
        ));
        assert_eq!(ModMat2::new(1, 0, 0, 1, 4), Err(Error::NotPrime(4)));
        assert!(m(0, 1, 1, 2, 5).det() == 4);
        assert!(!m(0, 1, 1, 2, 5).is_special());
    }

    #[test]
    fn identity_is_not_regular() {
        let e = ModMat2::identity(5).unwrap();
        assert_eq!(e.trace(), 2);
        assert!(!e.is_regular());
        let g = m(1, 2, 1, 3, 5);
        assert_eq!(e.try_mul(&g).unwrap(), g);
        assert_eq!(g.try_mul(&e).unwrap(), g);
    }

    #[test]
    fn sample_element_mod_5() {
        let g = m(1, 2, 1, 3, 5);
        assert_eq!(g.trace(), 4);
        assert!(g.is_regular());
        assert!(!g.is_upper_triangular());
        assert!(g.try_mul(&g.inverse()).unwrap().is_identity());
    }

    #[test]
    fn modulus_mismatch() {
        let g = m(1, 1, 0, 1, 5);
        let h = m(1, 1, 0, 1, 7);
        assert_eq!(g.try_mul(&h), Err(Error::ModulusMismatch(5, 7)));
    }

    #[test]
    fn index_is_a_bijection() {
        for p in [2u32, 3, 5, 7] {
            // For p = 2 the two determinant classes coincide.
            let n = if p == 2 { group_order(p) } else { 2 * group_order(p) };
            let mut seen = std::collections::HashSet::new();
            for i in 0..n {
                let g = ModMat2::from_index(i, p);
                assert!(g.det() == 1 % p || g.det() == p - 1);
                assert_eq!(g.index(), i, "p={p} g={g}");
                seen.insert(g);
            }
            assert_eq!(seen.len() as u64, n);
        }
    }

    #[test]
    fn inverse_of_odd_class() {
        let g = m(0, 1, 1, 2, 7);
        assert!(g.try_mul(&g.inverse()).unwrap().is_identity());
        assert!(g.inverse().try_mul(&g).unwrap().is_identity());
    }

    #[test]
    fn from_exact_matrix() {
        let x = Mat2::new(11, 30, 15, 41);
        let g = ModMat2::from_mat2(&x, 5).unwrap();
        assert!(g.is_identity());
        let y = Mat2::new(-1, 0, 0, -1);
        assert_eq!(ModMat2::from_mat2(&y, 5).unwrap().entries(), [4, 0, 0, 4]);
    }
}
