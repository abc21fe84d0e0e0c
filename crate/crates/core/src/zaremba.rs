//! The sets `F_M(Q)` of fractions `u/v`, `v <= Q`, with all partial
//! quotients at most `M`.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::check_modulus;
use crate::cont_frac::{CFExpansion, Convention, Fraction, Mat2};
use crate::error::{Error, Result};
use crate::sl2::{GroupSet, ModMat2};

/// A node of the continuant tree: the matrix `(p_prev p_cur | q_prev q_cur)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Node {
    pub p_prev: u64,
    pub p_cur: u64,
    pub q_prev: u64,
    pub q_cur: u64,
}

impl Node {
    pub(crate) const ROOT: Node = Node {
        p_prev: 1,
        p_cur: 0,
        q_prev: 0,
        q_cur: 1,
    };

    /// Right multiplication by `(0 1 | 1 b)`; `None` once `q` leaves `u64`.
    #[inline]
    pub(crate) fn child(&self, b: u64) -> Option<Node> {
        let q = b.checked_mul(self.q_cur)?.checked_add(self.q_prev)?;
        let p = b.checked_mul(self.p_cur)?.checked_add(self.p_prev)?;
        Some(Node {
            p_prev: self.p_cur,
            p_cur: p,
            q_prev: self.q_cur,
            q_cur: q,
        })
    }

    pub(crate) fn to_mat2(self) -> Mat2 {
        Mat2::new(self.p_prev, self.p_cur, self.q_prev, self.q_cur)
    }
}

/// Depth-first walk over every nonempty expansion with quotients in `1..=m`
/// and denominator `<= q_max`, below the node reached by `path`.
fn walk<F: FnMut(&[u64], &Node)>(m: u64, q_max: u64, path: &mut Vec<u64>, node: Node, visit: &mut F) {
    for b in 1..=m {
        let Some(child) = node.child(b) else { break };
        if child.q_cur > q_max {
            break;
        }
        path.push(b);
        visit(path, &child);
        walk(m, q_max, path, child, visit);
        path.pop();
    }
}

/// Whether the tree node `path` is a member of `F_M(Q)` other than an endpoint.
#[inline]
fn is_member(path: &[u64], m: u64, convention: Convention) -> bool {
    let s = path.len();
    let last = path[s - 1];
    if last >= 2 {
        return true;
    }
    // [.., M, 1] is the twin of [.., M + 1]
    convention == Convention::Twin && s >= 2 && path[s - 2] == m
}

fn check_params(m: u64, q: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be >= 1".into()));
    }
    if q == 0 {
        return Err(Error::InvalidParameter("Q must be >= 1".into()));
    }
    Ok(())
}

/// Runs `walk` in parallel over the first quotient and combines per-branch results.
fn par_branches<T, F>(m: u64, q: u64, branch: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut Vec<u64>, Node) -> T + Sync,
{
    (1..=m)
        .into_par_iter()
        .filter_map(|b| {
            let child = Node::ROOT.child(b)?;
            (child.q_cur <= q).then(|| {
                let mut path = vec![b];
                branch(&mut path, child)
            })
        })
        .collect()
}

/// `|F_M(Q)|` without materializing the set.
pub fn count_fractions(m: u64, q: u64, convention: Convention) -> Result<u64> {
    check_params(m, q)?;
    let partial = par_branches(m, q, |path, node| {
        let mut n = 0u64;
        let mut overflow = false;
        let mut visit = |path: &[u64], _: &Node| {
            if is_member(path, m, convention) {
                match n.checked_add(1) {
                    Some(v) => n = v,
                    None => overflow = true,
                }
            }
        };
        visit(path, &node);
        walk(m, q, path, node, &mut visit);
        (!overflow).then_some(n)
    });
    partial
        .into_iter()
        .try_fold(2u64, |acc, n| n.and_then(|n| acc.checked_add(n)))
        .ok_or(Error::CountOverflow)
}

/// The set `F_M(Q)`, sorted by denominator then numerator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZarembaSet {
    pub m: u64,
    pub q: u64,
    pub convention: Convention,
    members: Vec<(u64, u64)>,
}

impl ZarembaSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `(u, v)` pairs.
    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.members
    }

    pub fn fractions(&self) -> impl Iterator<Item = Fraction> + '_ {
        self.members
            .iter()
            .map(|&(u, v)| Fraction::new(u, v).expect("members are reduced"))
    }

    pub fn contains(&self, u: u64, v: u64) -> bool {
        self.members
            .binary_search_by(|&(a, b)| (b, a).cmp(&(v, u)))
            .is_ok()
    }

    /// `u,v` rows under a header, in sorted order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "u,v")?;
        for (u, v) in &self.members {
            writeln!(w, "{u},{v}")?;
        }
        Ok(())
    }
}

pub fn enumerate_fractions(m: u64, q: u64, convention: Convention) -> Result<ZarembaSet> {
    check_params(m, q)?;
    let branches = par_branches(m, q, |path, node| {
        let mut out = Vec::new();
        let mut visit = |path: &[u64], n: &Node| {
            if is_member(path, m, convention) {
                out.push((n.p_cur, n.q_cur));
            }
        };
        visit(path, &node);
        walk(m, q, path, node, &mut visit);
        out
    });
    let mut members = vec![(0, 1), (1, 1)];
    members.extend(branches.into_iter().flatten());
    members.sort_unstable_by_key(|&(u, v)| (v, u));
    Ok(ZarembaSet {
        m,
        q,
        convention,
        members,
    })
}

/// Like [`enumerate_fractions`], refusing when `|F_M(Q)|` exceeds `cap`.
pub fn enumerate_fractions_capped(
    m: u64,
    q: u64,
    convention: Convention,
    cap: u64,
) -> Result<ZarembaSet> {
    if count_fractions(m, q, convention)? > cap {
        return Err(Error::ResourceCap { cap });
    }
    enumerate_fractions(m, q, convention)
}

/// Optional restrictions on the matrices produced by [`split_parity`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityFilter {
    /// Drop matrices with an entry `0 mod p`.
    pub nonzero_entries: bool,
    /// Drop matrices whose trace is `0` or `+-2 mod p`.
    pub regular_trace: bool,
}

impl ParityFilter {
    fn keep(&self, g: &ModMat2) -> bool {
        (!self.nonzero_entries || g.entries().iter().all(|&x| x != 0))
            && (!self.regular_trace || g.is_regular())
    }
}

/// Canonical expansions of one parity with their matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityClass {
    pub expansions: Vec<CFExpansion>,
    pub matrices: Vec<Mat2>,
    /// The matrices reduced mod `p`, deduplicated.
    pub set: GroupSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParitySplit {
    pub p: u32,
    pub even: ParityClass,
    pub odd: ParityClass,
}

pub fn split_parity(m: u64, q: u64, p: u64, filter: ParityFilter) -> Result<ParitySplit> {
    check_params(m, q)?;
    let p32 = check_modulus(p)?;
    let mut nodes: Vec<(Vec<u64>, Node)> = Vec::new();
    let mut path = Vec::new();
    walk(m, q, &mut path, Node::ROOT, &mut |path, n| {
        if path[path.len() - 1] >= 2 {
            nodes.push((path.to_vec(), *n));
        }
    });
    nodes.sort_unstable_by(|a, b| (a.1.q_cur, a.1.p_cur).cmp(&(b.1.q_cur, b.1.p_cur)));

    let mut classes: [(Vec<CFExpansion>, Vec<Mat2>, Vec<ModMat2>); 2] = Default::default();
    for (quotients, node) in nodes {
        let mat = node.to_mat2();
        let g = ModMat2::from_mat2(&mat, p)?;
        if !filter.keep(&g) {
            continue;
        }
        let c = &mut classes[quotients.len() % 2];
        c.0.push(CFExpansion::from_unchecked(quotients));
        c.1.push(mat);
        c.2.push(g);
    }
    let [even, odd] = classes.map(|(expansions, matrices, elems)| ParityClass {
        expansions,
        matrices,
        set: GroupSet::new(p, elems).expect("valid modulus"),
    });
    Ok(ParitySplit { p: p32, even, odd })
}

/// Least-squares fit of `ln |F_M(Q)|` against `2 ln Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub m: u64,
    pub sample_qs: Vec<u64>,
    pub counts: Vec<u64>,
    pub w_hat: f64,
    pub intercept: f64,
    /// Root mean square of the fit residuals.
    pub residual: f64,
}

impl DimensionEstimate {
    /// `(Q, count(2Q) / count(Q))` for consecutive samples that double.
    pub fn doubling_ratios(&self) -> Vec<(u64, f64)> {
        self.sample_qs
            .windows(2)
            .zip(self.counts.windows(2))
            .filter(|(q, _)| q[1] == 2 * q[0])
            .map(|(q, c)| (q[0], c[1] as f64 / c[0] as f64))
            .collect()
    }
}

pub fn estimate_dimension(m: u64, qs: &[u64], convention: Convention) -> Result<DimensionEstimate> {
    if qs.len() < 3 {
        return Err(Error::InvalidParameter("need at least 3 sample points".into()));
    }
    if qs.iter().any(|&q| q < 16) {
        return Err(Error::InvalidParameter("every sample Q must be >= 16".into()));
    }
    if qs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("sample Qs must increase".into()));
    }
    let counts = qs
        .iter()
        .map(|&q| count_fractions(m, q, convention))
        .collect::<Result<Vec<u64>>>()?;
    if counts.iter().all(|&c| c == counts[0]) {
        return Err(Error::DegenerateRegression);
    }
    let xs: Vec<f64> = qs.iter().map(|&q| 2.0 * (q as f64).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let w_hat = sxy / sxx;
    let intercept = my - w_hat * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - w_hat * x).powi(2))
        .sum();
    Ok(DimensionEstimate {
        m,
        sample_qs: qs.to_vec(),
        counts,
        w_hat,
        intercept,
        residual: (sse / n).sqrt(),
    })
}

/// `2^lo, 2^(lo+1), .., 2^hi`.
pub fn dyadic(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|k| 1u64 << k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cont_frac::{cf_to_matrix, cyclic_trace, expand};
    use crate::sl2::trace_spectrum;
    use num_integer::Integer;
    use proptest::prelude::*;
    use std::collections::HashSet;

    // every coprime pair filtered through Euclid
    fn brute(m: u64, q: u64, convention: Convention) -> Vec<(u64, u64)> {
        let mut out = vec![(0, 1)];
        for v in 1..=q {
            for u in 1..=v {
                if u.gcd(&v) == 1 && convention.admits(&Fraction::new(u, v).unwrap(), m).unwrap() {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable_by_key(|&(u, v)| (v, u));
        out
    }

    fn fib_count(q: u64) -> u64 {
        // 0/1, 1/1 and F_k/F_{k+1} for 2 <= F_{k+1} <= Q
        let (mut a, mut b) = (1u64, 2u64);
        let mut n = 2;
        while b <= q {
            n += 1;
            (a, b) = (b, a + b);
        }
        n
    }

    #[test]
    fn small_examples() {
        let z = enumerate_fractions(2, 3, Convention::Canonical).unwrap();
        assert_eq!(z.pairs(), &[(0, 1), (1, 1), (1, 2), (2, 3)]);
        for m in 1..5 {
            assert_eq!(enumerate_fractions(m, 1, Convention::Twin).unwrap().pairs(), &[(0, 1), (1, 1)]);
            assert_eq!(count_fractions(m, 1, Convention::Canonical).unwrap(), 2);
        }
        let z = enumerate_fractions(1, 8, Convention::Twin).unwrap();
        assert_eq!(z.pairs(), &[(0, 1), (1, 1), (1, 2), (2, 3), (3, 5), (5, 8)]);
        assert_eq!(count_fractions(2, 3, Convention::Canonical).unwrap(), 4);
        assert_eq!(count_fractions(1, 8, Convention::Twin).unwrap(), 6);
        assert_eq!(count_fractions(2, 7, Convention::Canonical).unwrap(), 7);
        assert_eq!(count_fractions(2, 3, Convention::Twin).unwrap(), 5);
    }

    #[test]
    fn agrees_with_brute_force() {
        for m in 1..=4 {
            for q in [1u64, 2, 7, 30, 64, 97] {
                for conv in [Convention::Canonical, Convention::Twin] {
                    let z = enumerate_fractions(m, q, conv).unwrap();
                    assert_eq!(z.pairs(), &brute(m, q, conv)[..], "m={m} q={q} {conv}");
                    assert_eq!(count_fractions(m, q, conv).unwrap(), z.len() as u64);
                }
            }
        }
    }

    #[test]
    fn fibonacci_counts() {
        for k in 1..60 {
            let q = 1u64 << k;
            assert_eq!(count_fractions(1, q, Convention::Twin).unwrap(), fib_count(q));
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(count_fractions(0, 5, Convention::Canonical).is_err());
        assert!(enumerate_fractions(2, 0, Convention::Canonical).is_err());
        assert_eq!(
            enumerate_fractions_capped(2, 1000, Convention::Canonical, 10),
            Err(Error::ResourceCap { cap: 10 })
        );
        assert!(enumerate_fractions_capped(2, 7, Convention::Canonical, 7).is_ok());
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        enumerate_fractions(2, 3, Convention::Canonical).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "u,v\n0,1\n1,1\n1,2\n2,3\n");
    }

    #[test]
    fn parity_split_example() {
        let s = split_parity(2, 7, 101, ParityFilter::default()).unwrap();
        let cfs = |c: &ParityClass| c.expansions.iter().map(|e| e.quotients().to_vec()).collect::<HashSet<_>>();
        assert_eq!(cfs(&s.even), HashSet::from([vec![1, 2], vec![2, 2]]));
        assert_eq!(cfs(&s.odd), HashSet::from([vec![2], vec![1, 1, 2], vec![1, 2, 2]]));
        assert_eq!((s.even.set.len(), s.odd.set.len()), (2, 3));
        assert!(s.even.set.is_special());
        assert!(s.odd.set.iter().all(|g| !g.is_special()));

        let s3 = split_parity(2, 7, 3, ParityFilter::default()).unwrap();
        let reduced: HashSet<ModMat2> = s.even.matrices.iter().map(|x| ModMat2::from_mat2(x, 3).unwrap()).collect();
        assert_eq!(s3.even.set.len(), reduced.len());
        assert!(s3.even.set.len() <= 2);
    }

    #[test]
    fn parity_split_partitions() {
        for (m, q) in [(2u64, 50u64), (3, 40), (4, 30)] {
            let s = split_parity(m, q, 1009, ParityFilter::default()).unwrap();
            let n = s.even.expansions.len() + s.odd.expansions.len();
            assert_eq!(n as u64, count_fractions(m, q, Convention::Canonical).unwrap() - 2);
            for (c, sign) in [(&s.even, 1i64), (&s.odd, -1)] {
                for (e, x) in c.expansions.iter().zip(&c.matrices) {
                    assert_eq!(&cf_to_matrix(e).unwrap(), x);
                    assert_eq!(x.det(), sign.into());
                }
            }
        }
    }

    #[test]
    fn parity_filters() {
        let f = ParityFilter {
            nonzero_entries: true,
            regular_trace: true,
        };
        let s = split_parity(2, 200, 11, f).unwrap();
        for g in s.even.set.iter().chain(s.odd.set.iter()) {
            assert!(g.entries().iter().all(|&x| x != 0));
            assert!(g.is_regular());
        }
        let raw = split_parity(2, 200, 11, ParityFilter::default()).unwrap();
        assert!(s.even.expansions.len() < raw.even.expansions.len());
    }

    #[test]
    fn even_traces_are_cyclic_continuants() {
        let s = split_parity(2, 200, 11, ParityFilter::default()).unwrap();
        let oracle: HashSet<u32> = s
            .even
            .expansions
            .iter()
            .map(|e| {
                let t = cyclic_trace(e).unwrap();
                let r = ((t % 11) + 11) % 11;
                u32::try_from(r).unwrap()
            })
            .collect();
        assert_eq!(trace_spectrum(&s.even.set, 2).unwrap().distinct, oracle.len());
    }

    #[test]
    fn dimension_estimates() {
        let qs = dyadic(4, 14);
        let d2 = estimate_dimension(2, &qs, Convention::Canonical).unwrap();
        assert!((0.50..=0.56).contains(&d2.w_hat), "{}", d2.w_hat);
        let d4 = estimate_dimension(4, &qs, Convention::Canonical).unwrap();
        assert!(d4.w_hat > d2.w_hat);
        assert!(d2.counts.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(d2.doubling_ratios().len(), qs.len() - 1);
    }

    #[test]
    fn dimension_errors() {
        assert!(estimate_dimension(2, &[16, 32], Convention::Canonical).is_err());
        assert!(estimate_dimension(2, &[8, 16, 32], Convention::Canonical).is_err());
        assert!(estimate_dimension(2, &[32, 16, 64], Convention::Canonical).is_err());
        // F_1 under the canonical convention is only the endpoints
        assert_eq!(
            estimate_dimension(1, &dyadic(4, 8), Convention::Canonical),
            Err(Error::DegenerateRegression)
        );
    }

    proptest! {
        #[test]
        fn members_expand_within_bound(m in 1u64..=5, q in 1u64..400) {
            for conv in [Convention::Canonical, Convention::Twin] {
                for f in enumerate_fractions(m, q, conv).unwrap().fractions() {
                    let e = expand(&f).unwrap();
                    prop_assert!(conv.admits_expansion(&e, m));
                }
            }
        }

        #[test]
        fn count_is_monotone(m in 1u64..=4, q in 1u64..2000) {
            let a = count_fractions(m, q, Convention::Canonical).unwrap();
            let b = count_fractions(m, q + 1, Convention::Canonical).unwrap();
            prop_assert!(a <= b);
        }
    }
}
