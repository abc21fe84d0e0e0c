use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{check_modulus, inv_mod, neg_mod};
use crate::error::{Error, Result};

use super::element::ModMat2;
use super::set::GroupSet;

/// A point `(x : y)` of the projective line over `F_p`, stored as `(x : 1)`
/// or `(1 : 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    // x for affine points, p for the point at infinity
    idx: u32,
    p: u32,
}

impl ProjPoint {
    pub fn affine(x: u32, p: u32) -> Self {
        ProjPoint { idx: x % p, p }
    }

    pub fn infinity(p: u32) -> Self {
        ProjPoint { idx: p, p }
    }

    /// Canonicalizes a nonzero homogeneous pair.
    ///
    /// # Panics
    /// On `(0 : 0)`.
    #[inline]
    pub fn from_homogeneous(x: u32, y: u32, p: u32) -> Self {
        if y == 0 {
            assert!(x != 0, "(0 : 0) is not a projective point");
            ProjPoint::infinity(p)
        } else {
            let v = x as u64 * inv_mod(y, p) as u64 % p as u64;
            ProjPoint { idx: v as u32, p }
        }
    }

    pub fn try_from_homogeneous(x: i64, y: i64, p: u64) -> Result<Self> {
        let p = check_modulus(p)?;
        let r = |v: i64| v.rem_euclid(p as i64) as u32;
        let (x, y) = (r(x), r(y));
        if x == 0 && y == 0 {
            return Err(Error::InvalidParameter("(0 : 0) is not a projective point".into()));
        }
        Ok(ProjPoint::from_homogeneous(x, y, p))
    }

    /// `0..p` for affine points, `p` for infinity.
    pub fn index(&self) -> usize {
        self.idx as usize
    }

    pub fn from_index(idx: usize, p: u32) -> Self {
        debug_assert!(idx <= p as usize);
        ProjPoint { idx: idx as u32, p }
    }

    pub fn is_infinity(&self) -> bool {
        self.idx == self.p
    }

    pub fn homogeneous(&self) -> (u32, u32) {
        if self.is_infinity() {
            (1, 0)
        } else {
            (self.idx, 1)
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// All `p + 1` points, affine first.
    pub fn all(p: u32) -> impl Iterator<Item = ProjPoint> {
        (0..=p).map(move |i| ProjPoint { idx: i, p })
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.homogeneous();
        write!(f, "({x}:{y})")
    }
}

/// A Borel subgroup, identified with the line it stabilizes.
/// The standard (upper triangular) Borel is the stabilizer of `(1 : 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BorelSpec {
    line: ProjPoint,
}

impl BorelSpec {
    pub fn new(line: ProjPoint) -> Self {
        BorelSpec { line }
    }

    pub fn standard(p: u32) -> Self {
        BorelSpec {
            line: ProjPoint::infinity(p),
        }
    }

    pub fn line(&self) -> ProjPoint {
        self.line
    }

    pub fn is_standard(&self) -> bool {
        self.line.is_infinity()
    }

    /// All `p + 1` Borel subgroups.
    pub fn all(p: u32) -> impl Iterator<Item = BorelSpec> {
        ProjPoint::all(p).map(BorelSpec::new)
    }

    /// A matrix sending `(1 : 0)` to this line, so that this Borel is
    /// `h B h^-1` for the standard `B`.
    pub fn conjugator(&self) -> ModMat2 {
        let p = self.line.modulus();
        if self.line.is_infinity() {
            ModMat2::raw(1 % p, 0, 0, 1 % p, p)
        } else {
            // (x -1 | 1 0)
            let (x, _) = self.line.homogeneous();
            ModMat2::raw(x, neg_mod(1 % p, p), 1 % p, 0, p)
        }
    }

    /// The `p(p - 1)` elements of this Borel subgroup.
    pub fn elements(&self) -> GroupSet {
        let p = self.line.modulus();
        let h = self.conjugator();
        let h_inv = h.inverse();
        let standard = standard_borel_elements(p);
        if self.is_standard() {
            return GroupSet::from_unique_unsorted(p, standard);
        }
        let conj = standard
            .iter()
            .map(|b| h.mul_unchecked(b).mul_unchecked(&h_inv))
            .collect();
        GroupSet::from_unique_unsorted(p, conj)
    }
}

/// `(l u | 0 l^-1)` with the identity first.
fn standard_borel_elements(p: u32) -> Vec<ModMat2> {
    let mut out = Vec::with_capacity((p as usize) * (p as usize - 1));
    for lambda in 1..p {
        let li = inv_mod(lambda, p);
        for u in 0..p {
            out.push(ModMat2::raw(lambda, u, 0, li, p));
        }
    }
    out
}

/// The unipotent subgroup `{(1 u | 0 1)}`.
pub fn unipotent(p: u64) -> Result<GroupSet> {
    let p = check_modulus(p)?;
    let elems = (0..p).map(|u| ModMat2::raw(1 % p, u, 0, 1 % p, p)).collect();
    Ok(GroupSet::from_unique_unsorted(p, elems))
}

/// The diagonal subgroup `{(l 0 | 0 l^-1)}`.
pub fn diagonal(p: u64) -> Result<GroupSet> {
    let p = check_modulus(p)?;
    let elems = (1..p)
        .map(|l| ModMat2::raw(l, 0, 0, inv_mod(l, p), p))
        .collect();
    Ok(GroupSet::from_unique_unsorted(p, elems))
}

/// The standard Borel subgroup of upper triangular matrices.
pub fn standard_borel(p: u64) -> Result<GroupSet> {
    let p = check_modulus(p)?;
    Ok(BorelSpec::standard(p).elements())
}

/// The "line" `{(g u | 0 g^-1) : u in F_p}` inside the standard Borel.
pub fn borel_line(p: u64, gamma: u32) -> Result<GroupSet> {
    let p = check_modulus(p)?;
    if gamma % p == 0 {
        return Err(Error::InvalidParameter("gamma must be nonzero".into()));
    }
    let g = gamma % p;
    let gi = inv_mod(g, p);
    let elems = (0..p).map(|u| ModMat2::raw(g, u, 0, gi, p)).collect();
    Ok(GroupSet::from_unique_unsorted(p, elems))
}
