//! Denominators divisible by a prime with bounded partial quotients.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{check_modulus, is_prime};
use crate::cont_frac::{cf_to_matrix, CFExpansion, Mat2};
use crate::error::{Error, Result};
use crate::sl2::{find_in_power, ModMat2};
use crate::zaremba::{split_parity, Node, ParityFilter};

/// A fraction `a/q` with `p | q` and all partial quotients `<= M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub p: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub q: u64,
    pub a: u64,
    pub cf: CFExpansion,
    /// `ln q / ln p`.
    pub exponent: f64,
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SearchOutcome {
    Found(SearchRecord),
    Exhausted { p: u64, nodes_explored: u64 },
}

impl SearchOutcome {
    pub fn record(&self) -> Option<&SearchRecord> {
        match self {
            SearchOutcome::Found(r) => Some(r),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    pub fn p(&self) -> u64 {
        match self {
            SearchOutcome::Found(r) => r.p,
            SearchOutcome::Exhausted { p, .. } => *p,
        }
    }
}

/// `p^4`, saturating.
pub fn default_cap(p: u64) -> u64 {
    p.saturating_mul(p).saturating_mul(p).saturating_mul(p)
}

/// Smallest `q <= cap` with `p | q` and some `a/q` whose canonical expansion
/// has all quotients `<= m`; among those, the smallest `a`.
///
/// Nodes of the continuant tree leave a min-heap in order of `(q, a)`, and
/// `q` never decreases along a branch, so the first hit is minimal.
pub fn min_modular_denominator(p: u64, m: u64, cap: u64) -> Result<SearchOutcome> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("M must be >= 1".into()));
    }
    // arena of (parent, quotient, node)
    let mut arena: Vec<(usize, u64, Node)> = vec![(usize::MAX, 0, Node::ROOT)];
    let mut heap: BinaryHeap<Reverse<(u64, u64, usize)>> = BinaryHeap::new();
    let push_children = |id: usize, arena: &mut Vec<(usize, u64, Node)>, heap: &mut BinaryHeap<_>| {
        let node = arena[id].2;
        for b in 1..=m {
            match node.child(b) {
                Some(c) if c.q_cur <= cap => {
                    arena.push((id, b, c));
                    heap.push(Reverse((c.q_cur, c.p_cur, arena.len() - 1)));
                }
                _ => break,
            }
        }
    };
    push_children(0, &mut arena, &mut heap);
    let mut explored = 0u64;
    while let Some(Reverse((q, a, id))) = heap.pop() {
        explored += 1;
        let last = arena[id].1;
        if last >= 2 && q % p == 0 {
            let mut quotients = Vec::new();
            let mut cur = id;
            while cur != 0 {
                quotients.push(arena[cur].1);
                cur = arena[cur].0;
            }
            quotients.reverse();
            return Ok(SearchOutcome::Found(SearchRecord {
                p,
                m,
                q,
                a,
                cf: CFExpansion::from_unchecked(quotients),
                exponent: (q as f64).ln() / (p as f64).ln(),
                nodes_explored: explored,
            }));
        }
        push_children(id, &mut arena, &mut heap);
    }
    Ok(SearchOutcome::Exhausted {
        p,
        nodes_explored: explored,
    })
}

/// One search per prime, sorted by `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentTable {
    #[serde(rename = "M")]
    pub m: u64,
    pub rows: Vec<SearchOutcome>,
}

impl ExponentTable {
    pub fn all_found(&self) -> bool {
        self.rows.iter().all(|r| r.record().is_some())
    }

    /// The record with the largest exponent.
    pub fn max_exponent(&self) -> Option<&SearchRecord> {
        self.rows
            .iter()
            .filter_map(SearchOutcome::record)
            .max_by(|x, y| x.exponent.total_cmp(&y.exponent))
    }

    pub fn exhausted(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.iter().filter(|r| r.record().is_none()).map(|r| r.p())
    }
}

/// `cap = None` uses [`default_cap`] per prime.
pub fn exponent_table(primes: &[u64], m: u64, cap: Option<u64>) -> Result<ExponentTable> {
    if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::NotPrime(p));
    }
    let mut rows = primes
        .par_iter()
        .map(|&p| min_modular_denominator(p, m, cap.unwrap_or_else(|| default_cap(p))))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(SearchOutcome::p);
    rows.dedup_by_key(|r| r.p());
    Ok(ExponentTable { m, rows })
}

/// A product of `n` even-length factors that lands in the standard Borel.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerWitness {
    pub n: u32,
    pub set_size: usize,
    pub factors: Vec<ModMat2>,
    pub factor_expansions: Vec<CFExpansion>,
    pub product: ModMat2,
    /// The concatenation `b_1 .. b_S` of the factor expansions.
    pub expansion: CFExpansion,
    /// Exact product of the factor matrices.
    pub exact: Mat2,
    /// `u / v = p_{S-1} / q_{S-1}`, so `p | v`.
    pub u: BigUint,
    pub v: BigUint,
    /// `q_S`.
    pub q_last: BigUint,
    /// The canonical expansion of `u/v` has all quotients `<= M`.
    pub canonical_bounded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PowerOutcome {
    Found(Box<PowerWitness>),
    NotFound { n_max: u32, set_size: usize },
}

/// Smallest `n <= n_max` with `A^n` meeting the standard Borel, where `A`
/// holds the even-length matrices of `F_M(p - 1)` mod `p`.
pub fn power_intersect_search(p: u64, m: u64, n_max: u32) -> Result<PowerOutcome> {
    check_modulus(p)?;
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    let split = split_parity(m, p.saturating_sub(1).max(1), p, ParityFilter::default())?;
    let even = split.even;
    if even.set.is_empty() {
        return Err(Error::EmptySet);
    }
    // first expansion reducing to each element
    let mut source: HashMap<ModMat2, usize> = HashMap::new();
    for (i, x) in even.matrices.iter().enumerate() {
        source.entry(ModMat2::from_mat2(x, p)?).or_insert(i);
    }
    for n in 1..=n_max {
        let Some(factors) = find_in_power(&even.set, n, |g| g.is_upper_triangular())? else {
            continue;
        };
        let idx: Vec<usize> = factors.iter().map(|g| source[g]).collect();
        let factor_expansions: Vec<CFExpansion> = idx.iter().map(|&i| even.expansions[i].clone()).collect();
        let expansion = factor_expansions
            .iter()
            .fold(CFExpansion::empty(), |acc, e| acc.concat(e));
        let exact = idx[1..]
            .iter()
            .fold(even.matrices[idx[0]].clone(), |acc, &i| &acc * &even.matrices[i]);
        debug_assert_eq!(exact, cf_to_matrix(&expansion)?);
        let product = factors[1..].iter().fold(factors[0], |acc, g| acc.mul_unchecked(g));
        let to_u = |x: &num_bigint::BigInt| x.to_biguint().expect("continuants are positive");
        let (u, v) = (to_u(&exact.p_prev), to_u(&exact.q_prev));
        let s = expansion.len();
        let head = &expansion.quotients()[..s - 1];
        let canonical_bounded = head.last().is_some_and(|&b| b >= 2) && head.iter().all(|&b| b <= m);
        return Ok(PowerOutcome::Found(Box::new(PowerWitness {
            n,
            set_size: even.set.len(),
            factors,
            factor_expansions,
            product,
            expansion,
            q_last: to_u(&exact.q_cur),
            u,
            v,
            exact,
            canonical_bounded,
        })));
    }
    Ok(PowerOutcome::NotFound {
        n_max,
        set_size: even.set.len(),
    })
}

impl PowerWitness {
    /// `p | v`, checked on the exact integers.
    pub fn v_divisible(&self, p: u64) -> bool {
        (&self.v % BigUint::from(p)).is_zero()
    }

    pub fn v_u64(&self) -> Option<u64> {
        self.v.to_u64()
    }
}

/// The two lower bounds on `n` as functions of `w = w_M` and `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub w: f64,
    pub alpha: f64,
    /// `(w(28 + 12a) - 6) / (w(14 + 6a) - 13 - 6a)`.
    pub n1: f64,
    /// `(2/3) (w(20 + 20a) - 6a) / (w(10 + 10a) - 10 - 9a)`.
    pub n2: f64,
    pub n1_infinite: bool,
    pub n2_infinite: bool,
    pub alpha_star: f64,
}

/// Positive root of `18a^2 + 19a - 20`.
pub fn alpha_star() -> f64 {
    (-19.0 + 1801f64.sqrt()) / 36.0
}

pub fn evaluate_n_bounds(w: f64, alpha: f64) -> Result<BoundEvaluation> {
    if !w.is_finite() || !alpha.is_finite() {
        return Err(Error::InvalidParameter("w and alpha must be finite".into()));
    }
    let d1 = w * (14.0 + 6.0 * alpha) - 13.0 - 6.0 * alpha;
    let d2 = w * (10.0 + 10.0 * alpha) - 10.0 - 9.0 * alpha;
    let n1_infinite = d1 <= 0.0;
    let n2_infinite = d2 <= 0.0;
    let n1 = if n1_infinite {
        f64::INFINITY
    } else {
        (w * (28.0 + 12.0 * alpha) - 6.0) / d1
    };
    let n2 = if n2_infinite {
        f64::INFINITY
    } else {
        2.0 / 3.0 * (w * (20.0 + 20.0 * alpha) - 6.0 * alpha) / d2
    };
    Ok(BoundEvaluation {
        w,
        alpha,
        n1,
        n2,
        n1_infinite,
        n2_infinite,
        alpha_star: alpha_star(),
    })
}

/// Coefficients `(c2, c1, c0)` of the quadratic in `alpha` whose roots
/// balance `n1 = n2` at a given `w`; at `w = 1` it is `18a^2 + 19a - 20`.
pub fn balance_quadratic(w: f64) -> (f64, f64, f64) {
    let w2 = w * w;
    (
        60.0 * w2 - 6.0 * w - 36.0,
        200.0 * w2 - 184.0 * w + 3.0,
        140.0 * w2 - 250.0 * w + 90.0,
    )
}

/// Smallest root in `[0, 1]` of [`balance_quadratic`].
pub fn optimal_alpha(w: f64) -> Option<f64> {
    let (a, b, c) = balance_quadratic(w);
    let mut roots = Vec::new();
    if a.abs() < 1e-12 {
        if b.abs() > 1e-12 {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let s = disc.sqrt();
            roots.push((-b + s) / (2.0 * a));
            roots.push((-b - s) / (2.0 * a));
        }
    }
    roots
        .into_iter()
        .filter(|r| (0.0..=1.0).contains(r))
        .min_by(|x, y| x.total_cmp(y))
}
