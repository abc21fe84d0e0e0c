use serde::Serialize;

use zlab_core::arith::primes_up_to;
use zlab_core::search::{
    alpha_star, default_cap, evaluate_n_bounds, exponent_table, min_modular_denominator, power_intersect_search,
    PowerOutcome,
};
use zlab_core::SearchOutcome;

use super::{pass_if, single, verdict};
use crate::args::Format;
use crate::report::Table;
use crate::{Report, RunError, Status};

const MINQ_COLUMNS: &[&str] = &["p", "M", "q", "a", "cf", "exponent", "nodes_explored"];

#[derive(Serialize)]
struct MinqRow {
    p: u64,
    #[serde(rename = "M")]
    m: u64,
    q: Option<u64>,
    a: Option<u64>,
    cf: Option<String>,
    exponent: Option<f64>,
    nodes_explored: u64,
}

fn minq_row(o: &SearchOutcome, m: u64) -> MinqRow {
    match o {
        SearchOutcome::Found(r) => MinqRow {
            p: r.p,
            m: r.m,
            q: Some(r.q),
            a: Some(r.a),
            cf: Some(r.cf.to_string()),
            exponent: Some(r.exponent),
            nodes_explored: r.nodes_explored,
        },
        SearchOutcome::Exhausted { p, nodes_explored } => MinqRow {
            p: *p,
            m,
            q: None,
            a: None,
            cf: None,
            exponent: None,
            nodes_explored: *nodes_explored,
        },
    }
}

pub fn minq(p: u64, m: u64, cap: Option<u64>) -> Result<Report, RunError> {
    let cap = cap.unwrap_or_else(|| default_cap(p));
    let o = min_modular_denominator(p, m, cap)?;
    let (text, status) = match &o {
        SearchOutcome::Found(r) => (
            format!(
                "p={} M={} q={} a={} cf={} exponent={:.6} nodes_explored={}",
                r.p, r.m, r.q, r.a, r.cf, r.exponent, r.nodes_explored
            ),
            Status::Pass,
        ),
        SearchOutcome::Exhausted { nodes_explored, .. } => (
            format!("p={p} M={m}: no q <= {cap} (nodes_explored={nodes_explored})"),
            Status::CapExhausted,
        ),
    };
    single("search minq", MINQ_COLUMNS, &minq_row(&o, m), vec![text], status)
}

pub fn table(p_max: Option<u64>, primes: &[u64], m: u64, cap: Option<u64>) -> Result<Report, RunError> {
    let primes: Vec<u64> = match p_max {
        Some(b) => primes_up_to(b),
        None if !primes.is_empty() => primes.to_vec(),
        None => return Err(RunError::Input("give --p-max or --primes".into())),
    };
    let t = exponent_table(&primes, m, cap)?;
    let mut table = Table::new(MINQ_COLUMNS);
    for o in &t.rows {
        table.push(&minq_row(o, m))?;
    }
    let mut text: Vec<String> = table.render(Format::Text)?.lines().map(String::from).collect();
    if let Some(r) = t.max_exponent() {
        text.push(format!("max exponent {:.6} at p={} (q={})", r.exponent, r.p, r.q));
    }
    let exhausted: Vec<String> = t.exhausted().map(|p| p.to_string()).collect();
    let status = if exhausted.is_empty() {
        text.push(format!("found for all {} primes", t.rows.len()));
        Status::Pass
    } else {
        text.push(format!("cap exhausted for p = {}", exhausted.join(", ")));
        Status::CapExhausted
    };
    Ok(Report {
        name: "search table",
        text,
        table,
        status,
    })
}

#[derive(Serialize)]
struct PowerRow {
    p: u64,
    #[serde(rename = "M")]
    m: u64,
    set_size: usize,
    n: Option<u32>,
    expansion: Option<String>,
    u: Option<String>,
    v: Option<String>,
    q_last: Option<String>,
    p_divides_v: Option<bool>,
    canonical_bounded: Option<bool>,
}

pub fn power(p: u64, m: u64, n_max: u32) -> Result<Report, RunError> {
    let columns = &[
        "p", "M", "set_size", "n", "expansion", "u", "v", "q_last", "p_divides_v", "canonical_bounded",
    ];
    match power_intersect_search(p, m, n_max)? {
        PowerOutcome::Found(w) => {
            let divides = w.v_divisible(p);
            let row = PowerRow {
                p,
                m,
                set_size: w.set_size,
                n: Some(w.n),
                expansion: Some(w.expansion.to_string()),
                u: Some(w.u.to_string()),
                v: Some(w.v.to_string()),
                q_last: Some(w.q_last.to_string()),
                p_divides_v: Some(divides),
                canonical_bounded: Some(w.canonical_bounded),
            };
            let mut text = vec![format!("|A| = {}, A^{} meets B", w.set_size, w.n)];
            for (g, e) in w.factors.iter().zip(&w.factor_expansions) {
                text.push(format!("  {g}  from {e}"));
            }
            text.push(format!("product {}", w.product));
            text.push(format!("expansion {}", w.expansion));
            text.push(format!("u/v = {}/{}, p | v {}", w.u, w.v, verdict(divides)));
            text.push(format!("canonical expansion of u/v bounded by {m}: {}", w.canonical_bounded));
            super::single("search power", columns, &row, text, pass_if(divides))
        }
        PowerOutcome::NotFound { n_max, set_size } => {
            let row = PowerRow {
                p,
                m,
                set_size,
                n: None,
                expansion: None,
                u: None,
                v: None,
                q_last: None,
                p_divides_v: None,
                canonical_bounded: None,
            };
            let text = vec![format!("|A| = {set_size}, A^n misses B for every n <= {n_max}")];
            single("search power", columns, &row, text, Status::Fail)
        }
    }
}

#[derive(Serialize)]
struct BoundsRow {
    w: f64,
    alpha: f64,
    n1: Option<f64>,
    n2: Option<f64>,
    alpha_star: f64,
}

pub fn bounds(w: f64, alpha: Option<f64>) -> Result<Report, RunError> {
    let b = evaluate_n_bounds(w, alpha.unwrap_or_else(alpha_star))?;
    let show = |x: f64, inf: bool| if inf { "infinite".to_string() } else { format!("{x:.6}") };
    let text = vec![format!(
        "w={:.6} alpha={:.6}: n1 = {}, n2 = {} (alpha* = {:.12})",
        b.w,
        b.alpha,
        show(b.n1, b.n1_infinite),
        show(b.n2, b.n2_infinite),
        b.alpha_star
    )];
    let row = BoundsRow {
        w: b.w,
        alpha: b.alpha,
        n1: (!b.n1_infinite).then_some(b.n1),
        n2: (!b.n2_infinite).then_some(b.n2),
        alpha_star: b.alpha_star,
    };
    single("search bounds", &["w", "alpha", "n1", "n2", "alpha_star"], &row, text, Status::Pass)
}
