//! Product-set statistics: common energy, tripling constants, the Ruzsa
//! triangle inequality and trace spectra.

use std::collections::{HashMap, HashSet};

use num_rational::Ratio;

use crate::error::{Error, Result};

use super::set::GroupSet;

/// `E(A, B) = sum_x r_{A^-1 B}(x)^2` together with `|A^-1 B|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyReport {
    pub value: u64,
    pub left_quotient_size: usize,
    pub size_a: usize,
    pub size_b: usize,
}

impl EnergyReport {
    /// `E(A,B) |A^-1 B| >= |A|^2 |B|^2`.
    pub fn cauchy_schwarz_holds(&self) -> bool {
        let lhs = self.value as u128 * self.left_quotient_size as u128;
        let rhs = (self.size_a as u128).pow(2) * (self.size_b as u128).pow(2);
        lhs >= rhs
    }
}

/// Representation function of `X Y`: how often each product occurs.
pub fn representation_counts(x: &GroupSet, y: &GroupSet) -> Result<HashMap<u64, u64>> {
    if x.modulus() != y.modulus() {
        return Err(Error::ModulusMismatch(x.modulus(), y.modulus()));
    }
    let mut r: HashMap<u64, u64> = HashMap::new();
    for a in x {
        for b in y {
            *r.entry(a.mul_unchecked(b).index()).or_default() += 1;
        }
    }
    Ok(r)
}

pub fn energy(a: &GroupSet, b: &GroupSet) -> Result<EnergyReport> {
    let r = representation_counts(&a.inverse_set(), b)?;
    let value = r.values().try_fold(0u64, |acc, &c| {
        c.checked_mul(c)
            .and_then(|sq| acc.checked_add(sq))
            .ok_or(Error::CountOverflow)
    })?;
    Ok(EnergyReport {
        value,
        left_quotient_size: r.len(),
        size_a: a.len(),
        size_b: b.len(),
    })
}

/// Both sides of `|C| |AB| <= |AC| |C^-1 B|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuzsaReport {
    pub lhs: u128,
    pub rhs: u128,
}

impl RuzsaReport {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn ruzsa_triangle(a: &GroupSet, b: &GroupSet, c: &GroupSet) -> Result<RuzsaReport> {
    let ab = a.product_set(b)?.len() as u128;
    let ac = a.product_set(c)?.len() as u128;
    let cib = c.inverse_set().product_set(b)?.len() as u128;
    Ok(RuzsaReport {
        lhs: c.len() as u128 * ab,
        rhs: ac * cib,
    })
}

/// `K = |AAA| / |A|` and `K~ = |AA| / |A|` as exact ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tripling {
    pub size: usize,
    pub size_aa: usize,
    pub size_aaa: usize,
    pub k: Ratio<u64>,
    pub k_tilde: Ratio<u64>,
}

impl Tripling {
    /// `alpha` with `K~ = K^alpha`; `None` when `K = 1`.
    pub fn alpha(&self) -> Option<f64> {
        let k = ratio_f64(self.k);
        (k > 1.0).then(|| ratio_f64(self.k_tilde).ln() / k.ln())
    }
}

pub(crate) fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn tripling(a: &GroupSet) -> Result<Tripling> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let aa = a.product_set(a)?;
    let aaa = aa.product_set(a)?;
    let n = a.len() as u64;
    Ok(Tripling {
        size: a.len(),
        size_aa: aa.len(),
        size_aaa: aaa.len(),
        k: Ratio::new(aaa.len() as u64, n),
        k_tilde: Ratio::new(aa.len() as u64, n),
    })
}

/// Number of distinct traces of a set and the normalized ratio
/// `#traces * M^3 * p / |A|`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSpectrum {
    pub distinct: usize,
    pub size: usize,
    pub normalized: f64,
    pub traces: Vec<u32>,
}

pub fn trace_spectrum(a: &GroupSet, m: u64) -> Result<TraceSpectrum> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let set: HashSet<u32> = a.iter().map(|g| g.trace()).collect();
    let mut traces: Vec<u32> = set.into_iter().collect();
    traces.sort_unstable();
    let distinct = traces.len();
    let normalized = distinct as f64 * (m as f64).powi(3) * a.modulus() as f64 / a.len() as f64;
    Ok(TraceSpectrum {
        distinct,
        size: a.len(),
        normalized,
        traces,
    })
}
