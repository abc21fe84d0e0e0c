use std::collections::{HashMap, HashSet};
use std::io::{self, Write};

use rand::seq::index;
use rand::Rng;

use crate::arith::check_modulus;
use crate::error::{Error, Result};

use super::element::{group_order, ModMat2};

/// A finite deduplicated set of matrices over one `F_p`, kept sorted by
/// [`ModMat2::index`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSet {
    p: u32,
    elems: Vec<ModMat2>,
}

/// Dense marking is used for product sets while the universe stays below this.
const DENSE_LIMIT: u64 = 1 << 27;

impl GroupSet {
    pub fn new(p: u64, elems: impl IntoIterator<Item = ModMat2>) -> Result<Self> {
        let p = check_modulus(p)?;
        let mut v = Vec::new();
        for g in elems {
            if g.modulus() != p {
                return Err(Error::ModulusMismatch(p, g.modulus()));
            }
            v.push(g);
        }
        v.sort_unstable_by_key(|g| g.index());
        v.dedup();
        Ok(GroupSet { p, elems: v })
    }

    /// Elements already known to be distinct and to share `p`.
    pub(crate) fn from_unique_unsorted(p: u32, mut elems: Vec<ModMat2>) -> Self {
        elems.sort_unstable_by_key(|g| g.index());
        debug_assert!(elems.windows(2).all(|w| w[0] != w[1]));
        GroupSet { p, elems }
    }

    pub fn empty(p: u64) -> Result<Self> {
        Ok(GroupSet {
            p: check_modulus(p)?,
            elems: Vec::new(),
        })
    }

    pub fn singleton(g: ModMat2) -> Self {
        GroupSet {
            p: g.modulus(),
            elems: vec![g],
        }
    }

    pub fn identity(p: u64) -> Result<Self> {
        Ok(GroupSet::singleton(ModMat2::identity(p)?))
    }

    /// All of `SL_2(F_p)`.
    pub fn full(p: u64) -> Result<Self> {
        let p = check_modulus(p)?;
        let elems = (0..group_order(p))
            .map(|i| ModMat2::from_index(i, p))
            .collect();
        Ok(GroupSet { p, elems })
    }

    /// A uniformly random `size`-subset of `SL_2(F_p)`.
    pub fn random<R: Rng + ?Sized>(p: u64, size: usize, rng: &mut R) -> Result<Self> {
        let p = check_modulus(p)?;
        let order = group_order(p) as usize;
        if size > order {
            return Err(Error::InvalidParameter(format!(
                "cannot draw {size} elements from a group of order {order}"
            )));
        }
        let elems = index::sample(rng, order, size)
            .into_iter()
            .map(|i| ModMat2::from_index(i as u64, p))
            .collect();
        Ok(GroupSet::from_unique_unsorted(p, elems))
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ModMat2> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[ModMat2] {
        &self.elems
    }

    pub fn contains(&self, g: &ModMat2) -> bool {
        g.modulus() == self.p
            && self
                .elems
                .binary_search_by_key(&g.index(), |h| h.index())
                .is_ok()
    }

    /// Whether every element lies in `SL_2(F_p)`.
    pub fn is_special(&self) -> bool {
        self.elems.iter().all(|g| g.is_special())
    }

    /// Equal to the whole of `SL_2(F_p)`.
    pub fn is_full_group(&self) -> bool {
        self.len() as u64 == group_order(self.p) && self.is_special()
    }

    /// `A^-1`.
    pub fn inverse_set(&self) -> GroupSet {
        let inv = self.elems.iter().map(|g| g.inverse()).collect();
        GroupSet::from_unique_unsorted(self.p, inv)
    }

    pub fn intersection(&self, other: &GroupSet) -> Result<GroupSet> {
        self.check_same(other)?;
        let elems = self
            .elems
            .iter()
            .filter(|g| other.contains(g))
            .copied()
            .collect();
        Ok(GroupSet { p: self.p, elems })
    }

    pub fn filter(&self, mut keep: impl FnMut(&ModMat2) -> bool) -> GroupSet {
        GroupSet {
            p: self.p,
            elems: self.elems.iter().copied().filter(|g| keep(g)).collect(),
        }
    }

    fn check_same(&self, other: &GroupSet) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Largest size a product of `self` and `other` can reach.
    fn product_capacity(&self, other: &GroupSet) -> u64 {
        let classes = |s: &GroupSet| {
            let special = s.elems.iter().any(|g| g.is_special());
            let odd = s.elems.iter().any(|g| !g.is_special());
            (special, odd)
        };
        let (xs, xo) = classes(self);
        let (ys, yo) = classes(other);
        let to_special = (xs && ys) || (xo && yo);
        let to_odd = (xs && yo) || (xo && ys);
        let n = to_special as u64 + to_odd as u64;
        if self.p == 2 {
            group_order(2)
        } else {
            n * group_order(self.p)
        }
    }

    /// `XY = {xy}`.
    pub fn product_set(&self, other: &GroupSet) -> Result<GroupSet> {
        self.check_same(other)?;
        let cap = self.product_capacity(other);
        let mut acc = Accumulator::new(self.p);
        'outer: for x in &self.elems {
            for y in &other.elems {
                acc.insert(x.mul_unchecked(y));
                // saturation: nothing more can be added
                if acc.len() as u64 == cap {
                    break 'outer;
                }
            }
        }
        Ok(acc.finish())
    }

    /// `A^n` for `n >= 1`; stops multiplying once the power is all of
    /// `SL_2(F_p)` and `A` is special, since it cannot change afterwards.
    pub fn power(&self, n: u32) -> Result<GroupSet> {
        if n == 0 {
            return Err(Error::InvalidParameter("power requires n >= 1".into()));
        }
        let mut cur = self.clone();
        let special = self.is_special();
        for _ in 1..n {
            if special && cur.is_full_group() {
                break;
            }
            cur = cur.product_set(self)?;
        }
        Ok(cur)
    }

    /// Sorted `a,b,c,d` lines, for diffing against other tools.
    pub fn write_sorted_tuples<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "a,b,c,d")?;
        let mut rows: Vec<[u32; 4]> = self.elems.iter().map(|g| g.entries()).collect();
        rows.sort_unstable();
        for [a, b, c, d] in rows {
            writeln!(w, "{a},{b},{c},{d}")?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a GroupSet {
    type Item = &'a ModMat2;
    type IntoIter = std::slice::Iter<'a, ModMat2>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// Collects distinct matrices, densely when the universe is small.
struct Accumulator {
    p: u32,
    seen: Seen,
    out: Vec<ModMat2>,
}

enum Seen {
    Dense(Vec<bool>),
    Sparse(HashSet<u64>),
}

impl Accumulator {
    fn new(p: u32) -> Self {
        let universe = 2 * group_order(p);
        let seen = if universe <= DENSE_LIMIT {
            Seen::Dense(vec![false; universe as usize])
        } else {
            Seen::Sparse(HashSet::new())
        };
        Accumulator {
            p,
            seen,
            out: Vec::new(),
        }
    }

    #[inline]
    fn insert(&mut self, g: ModMat2) -> bool {
        let i = g.index();
        let fresh = match &mut self.seen {
            Seen::Dense(v) => !std::mem::replace(&mut v[i as usize], true),
            Seen::Sparse(s) => s.insert(i),
        };
        if fresh {
            self.out.push(g);
        }
        fresh
    }

    fn len(&self) -> usize {
        self.out.len()
    }

    fn finish(self) -> GroupSet {
        GroupSet::from_unique_unsorted(self.p, self.out)
    }
}

/// Successive powers `A, A^2, ...` with enough bookkeeping to write any
/// element of `A^k` as a product of `k` elements of `A`.
pub struct PowerLayers<'a> {
    base: &'a GroupSet,
    // layer k-1 maps element index -> (index in layer k-2, position in base)
    parents: Vec<HashMap<u64, (u64, u32)>>,
    current: GroupSet,
}

impl<'a> PowerLayers<'a> {
    pub fn new(base: &'a GroupSet) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(PowerLayers {
            base,
            parents: vec![HashMap::new()],
            current: base.clone(),
        })
    }

    /// Exponent of the current layer.
    pub fn exponent(&self) -> usize {
        self.parents.len()
    }

    pub fn current(&self) -> &GroupSet {
        &self.current
    }

    /// Moves to the next power. When `stop` is given, stops at the first new
    /// element satisfying it (the layer is then partial) and returns it.
    pub fn advance(&mut self, stop: Option<&dyn Fn(&ModMat2) -> bool>) -> Option<ModMat2> {
        let cap = self.current.product_capacity(self.base);
        let mut acc = Accumulator::new(self.base.p);
        let mut parents = HashMap::new();
        let mut hit = None;
        'outer: for x in &self.current.elems {
            for (pos, y) in self.base.elems.iter().enumerate() {
                let z = x.mul_unchecked(y);
                if acc.insert(z) {
                    parents.insert(z.index(), (x.index(), pos as u32));
                    if stop.is_some_and(|f| f(&z)) {
                        hit = Some(z);
                        break 'outer;
                    }
                    if acc.len() as u64 == cap {
                        break 'outer;
                    }
                }
            }
        }
        self.parents.push(parents);
        self.current = acc.finish();
        hit
    }

    /// First element of the current layer (in index order) satisfying `pred`.
    pub fn find(&self, pred: impl Fn(&ModMat2) -> bool) -> Option<ModMat2> {
        self.current.iter().copied().find(|g| pred(g))
    }

    /// Writes `g` (an element of the current layer) as a product of base
    /// elements, leftmost factor first.
    pub fn factorize(&self, g: &ModMat2) -> Option<Vec<ModMat2>> {
        let p = self.base.p;
        let mut factors = Vec::with_capacity(self.exponent());
        let mut idx = g.index();
        for layer in self.parents[1..].iter().rev() {
            let &(prev, pos) = layer.get(&idx)?;
            factors.push(self.base.elems[pos as usize]);
            idx = prev;
        }
        let first = ModMat2::from_index(idx, p);
        if !self.base.contains(&first) {
            return None;
        }
        factors.push(first);
        factors.reverse();
        Some(factors)
    }
}
