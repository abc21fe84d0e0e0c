use rand::Rng;
use serde::Serialize;

use zlab_core::sl2::{
    borel_intersections, borel_sumproduct_ratio, energy as common_energy, helfgott_inequality, power_borel_threshold,
    standard_borel, tripling as tripling_report, verify_double_coset, GroupSet, ModMat2,
};
use zlab_core::zaremba::{split_parity, ParityFilter};

use super::{pass_if, single, verdict};
use crate::args::{Format, SetParams, SetSource};
use crate::report::Table;
use crate::{Report, RunError, Status};

fn build_set<R: Rng>(p: u64, s: &SetParams, rng: &mut R) -> Result<GroupSet, RunError> {
    Ok(match s.source {
        SetSource::Zaremba => {
            let q = s.q.unwrap_or(p.saturating_sub(1).max(1));
            let set = split_parity(s.m, q, p, ParityFilter::default())?.even.set;
            if set.is_empty() {
                return Err(zlab_core::Error::EmptySet.into());
            }
            set
        }
        SetSource::Random => GroupSet::random(p, s.size, rng)?,
        SetSource::Borel => standard_borel(p)?,
        SetSource::Full => GroupSet::full(p)?,
    })
}

fn source_name(s: &SetParams) -> String {
    serde_json::to_value(s.source)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn ratio(r: num_rational::Ratio<u64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Serialize)]
struct BgbRow {
    p: u32,
    checked: usize,
    max_representations: u64,
    bound: u64,
    min_size: u64,
    max_size: u64,
    violations: usize,
}

pub fn verify_bgb(p: u64) -> Result<Report, RunError> {
    let r = verify_double_coset(p)?;
    let text = vec![format!(
        "p={}: {} elements g outside B, max r = {} <= {} {}, |BgB| in [{}, {}], {} violations",
        r.p,
        r.checked,
        r.max_representations,
        r.bound,
        verdict(r.max_representations <= r.bound),
        r.min_size,
        r.max_size,
        r.violations
    )];
    let row = BgbRow {
        p: r.p,
        checked: r.checked,
        max_representations: r.max_representations,
        bound: r.bound,
        min_size: r.min_size,
        max_size: r.max_size,
        violations: r.violations,
    };
    single(
        "sl2 verify-bgb",
        &["p", "checked", "max_representations", "bound", "min_size", "max_size", "violations"],
        &row,
        text,
        pass_if(r.holds()),
    )
}

#[derive(Serialize)]
struct EnergyRow {
    trial: usize,
    size_a: usize,
    size_b: usize,
    energy: u64,
    left_quotient_size: usize,
    cauchy_schwarz: bool,
}

pub fn energy<R: Rng>(p: u64, size_a: usize, size_b: usize, trials: usize, rng: &mut R) -> Result<Report, RunError> {
    let mut table = Table::new(&["trial", "size_a", "size_b", "energy", "left_quotient_size", "cauchy_schwarz"]);
    let mut ok = true;
    for trial in 0..trials {
        let a = GroupSet::random(p, size_a, rng)?;
        let b = GroupSet::random(p, size_b, rng)?;
        let e = common_energy(&a, &b)?;
        ok &= e.cauchy_schwarz_holds();
        table.push(&EnergyRow {
            trial,
            size_a: e.size_a,
            size_b: e.size_b,
            energy: e.value,
            left_quotient_size: e.left_quotient_size,
            cauchy_schwarz: e.cauchy_schwarz_holds(),
        })?;
    }
    let text = table.render(Format::Text)?.lines().map(String::from).collect();
    Ok(Report {
        name: "sl2 energy",
        text,
        table,
        status: pass_if(ok),
    })
}

#[derive(Serialize)]
struct TriplingRow {
    p: u64,
    source: String,
    size: usize,
    size_aa: usize,
    size_aaa: usize,
    #[serde(rename = "K")]
    k: String,
    #[serde(rename = "K_tilde")]
    k_tilde: String,
    alpha: Option<f64>,
}

pub fn tripling<R: Rng>(p: u64, set: &SetParams, rng: &mut R) -> Result<Report, RunError> {
    let a = build_set(p, set, rng)?;
    let t = tripling_report(&a)?;
    let alpha = t.alpha();
    let text = vec![format!(
        "|A| = {}, |AA| = {}, |AAA| = {}, K = {}, K~ = {}, alpha = {}",
        t.size,
        t.size_aa,
        t.size_aaa,
        ratio(t.k),
        ratio(t.k_tilde),
        alpha.map_or("undefined".into(), |x| format!("{x:.6}"))
    )];
    let row = TriplingRow {
        p,
        source: source_name(set),
        size: t.size,
        size_aa: t.size_aa,
        size_aaa: t.size_aaa,
        k: ratio(t.k),
        k_tilde: ratio(t.k_tilde),
        alpha,
    };
    single(
        "sl2 tripling",
        &["p", "source", "size", "size_aa", "size_aaa", "K", "K_tilde", "alpha"],
        &row,
        text,
        Status::Pass,
    )
}

#[derive(Serialize)]
struct BorelRow {
    p: u64,
    source: String,
    size: usize,
    #[serde(rename = "K")]
    k: String,
    max_intersection: usize,
    argmax: String,
    lemma_bound: f64,
    lemma_holds: bool,
    max_coset_intersection: usize,
    coset_ratio: f64,
    coset_holds: bool,
    sumproduct_max: usize,
    sumproduct_ratio: f64,
}

pub fn borel<R: Rng>(p: u64, set: &SetParams, rng: &mut R) -> Result<Report, RunError> {
    let a = build_set(p, set, rng)?;
    let t = tripling_report(&a)?;
    let r = borel_intersections(&a, t.k)?;
    let sp = borel_sumproduct_ratio(&a)?;
    let text = vec![
        format!("|A| = {}, K = {}", r.size, ratio(t.k)),
        format!(
            "max |A ∩ B*| = {} at line {}, bound {:.6} {}",
            r.max_intersection,
            r.argmax,
            r.lemma_bound,
            verdict(r.lemma_holds)
        ),
        format!(
            "max coset intersection {}, ratio {:.6} {}",
            r.max_coset_intersection,
            r.coset_ratio,
            verdict(r.coset_holds)
        ),
        format!(
            "standard B: |AB| = {}, |BA| = {}, max / min(p^1.5 |A|^0.5, |A|^2 / p^2) = {:.6}",
            sp.ab, sp.ba, sp.ratio
        ),
    ];
    let row = BorelRow {
        p,
        source: source_name(set),
        size: r.size,
        k: ratio(t.k),
        max_intersection: r.max_intersection,
        argmax: r.argmax.to_string(),
        lemma_bound: r.lemma_bound,
        lemma_holds: r.lemma_holds,
        max_coset_intersection: r.max_coset_intersection,
        coset_ratio: r.coset_ratio,
        coset_holds: r.coset_holds,
        sumproduct_max: sp.max,
        sumproduct_ratio: sp.ratio,
    };
    single(
        "sl2 borel",
        &[
            "p",
            "source",
            "size",
            "K",
            "max_intersection",
            "argmax",
            "lemma_bound",
            "lemma_holds",
            "max_coset_intersection",
            "coset_ratio",
            "coset_holds",
            "sumproduct_max",
            "sumproduct_ratio",
        ],
        &row,
        text,
        pass_if(r.lemma_holds && r.coset_holds),
    )
}

#[derive(Serialize)]
struct HelfgottRow {
    g: String,
    trace: u32,
    conj_size: u64,
    conj_hits: usize,
    images: usize,
    a0_size: usize,
    min_centralizer_hits: usize,
    holds: bool,
}

pub fn helfgott<R: Rng>(p: u64, size: usize, count: usize, rng: &mut R) -> Result<Report, RunError> {
    let a = GroupSet::random(p, size, rng)?;
    let regular: Vec<ModMat2> = GroupSet::full(p)?.iter().copied().filter(ModMat2::is_regular).collect();
    if regular.is_empty() {
        return Err(RunError::Input(format!("SL2(F_{p}) has no regular elements")));
    }
    let picks = rand::seq::index::sample(rng, regular.len(), count.min(regular.len()));
    let mut table = Table::new(&[
        "g",
        "trace",
        "conj_size",
        "conj_hits",
        "images",
        "a0_size",
        "min_centralizer_hits",
        "holds",
    ]);
    let mut failures = 0;
    for i in picks.iter() {
        let g = &regular[i];
        let r = helfgott_inequality(&a, g)?;
        if !r.holds() {
            failures += 1;
        }
        table.push(&HelfgottRow {
            g: g.to_string(),
            trace: g.trace(),
            conj_size: r.conj_size,
            conj_hits: r.conj_hits,
            images: r.images,
            a0_size: r.a0.len(),
            min_centralizer_hits: r.min_centralizer_hits,
            holds: r.holds(),
        })?;
    }
    let mut text: Vec<String> = table.render(Format::Text)?.lines().map(String::from).collect();
    text.push(format!("|A| = {}, {} of {} elements g fail", a.len(), failures, table.rows.len()));
    Ok(Report {
        name: "sl2 helfgott",
        text,
        table,
        status: pass_if(failures == 0),
    })
}

#[derive(Serialize)]
struct ThresholdRow {
    p: u64,
    n: u32,
    source: String,
    size: usize,
    threshold: f64,
    hypothesis_holds: bool,
    vacuous: bool,
    witness: Option<String>,
    violated: bool,
}

pub fn threshold<R: Rng>(p: u64, n: u32, set: &SetParams, rng: &mut R) -> Result<Report, RunError> {
    let a = build_set(p, set, rng)?;
    let r = power_borel_threshold(&a, n)?;
    let product = r.witness_product();
    let mut text = vec![format!(
        "|A| = {}, threshold {:.6}{}: hypothesis {}",
        r.size,
        r.threshold,
        if r.vacuous { " (exceeds |G|)" } else { "" },
        if r.hypothesis_holds { "holds" } else { "fails" }
    )];
    if let (Some(w), Some(g)) = (&r.witness, &product) {
        let parts: Vec<String> = w.iter().map(ModMat2::to_string).collect();
        text.push(format!("A^{n} meets B: {} = {g}", parts.join(" * ")));
    } else if r.violated {
        text.push(format!("A^{n} misses B"));
    }
    let row = ThresholdRow {
        p,
        n,
        source: source_name(set),
        size: r.size,
        threshold: r.threshold,
        hypothesis_holds: r.hypothesis_holds,
        vacuous: r.vacuous,
        witness: product.map(|g| g.to_string()),
        violated: r.violated,
    };
    single(
        "sl2 threshold",
        &["p", "n", "source", "size", "threshold", "hypothesis_holds", "vacuous", "witness", "violated"],
        &row,
        text,
        pass_if(!r.violated),
    )
}
