use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use zlab_core::repr::{borel_certificates, dimension_inventory, spectral_gap_check};
use zlab_core::sl2::GroupSet;

use super::{pass_if, single, verdict};
use crate::{Report, RunError};

fn exact(x: &Option<BigRational>) -> String {
    x.as_ref().map_or_else(|| "irrational".to_string(), ToString::to_string)
}

#[derive(Serialize)]
struct CertRow {
    q: u32,
    group_order: u64,
    borel_size: u64,
    hs_norm: String,
    op_norm_sq: String,
    rank: usize,
    wiener: String,
    parseval: bool,
    inversion: bool,
    all_hold: bool,
}

pub fn certify(q: u64) -> Result<Report, RunError> {
    let c = borel_certificates(q)?;
    let n = &c.norms;
    let text = vec![
        format!("q={}: |G| = {}, |B| = {}", c.q, c.group_order, c.borel_size),
        format!("||St||_HS = {} {}", exact(&n.hs_exact), verdict(c.hs_matches)),
        format!(
            "||St||_op^2 = {}, rank {} {}",
            exact(&n.op_sq_exact),
            n.rank,
            verdict(c.op_matches && c.rank_one)
        ),
        format!("Parseval {}", verdict(c.parseval)),
        format!("Wiener contribution = {} {}", exact(&n.wiener_exact), verdict(c.wiener_is_one)),
        format!("inversion {}", verdict(c.inversion)),
    ];
    let row = CertRow {
        q: c.q,
        group_order: c.group_order,
        borel_size: c.borel_size,
        hs_norm: exact(&n.hs_exact),
        op_norm_sq: exact(&n.op_sq_exact),
        rank: n.rank,
        wiener: exact(&n.wiener_exact),
        parseval: c.parseval,
        inversion: c.inversion,
        all_hold: c.all_hold(),
    };
    single(
        "rep certify",
        &[
            "q",
            "group_order",
            "borel_size",
            "hs_norm",
            "op_norm_sq",
            "rank",
            "wiener",
            "parseval",
            "inversion",
            "all_hold",
        ],
        &row,
        text,
        pass_if(c.all_hold()),
    )
}

#[derive(Serialize)]
struct InventoryRow {
    q: u64,
    sum: String,
    order: String,
    nontrivial: String,
    d_min: String,
    holds: bool,
}

pub fn inventory(q: u64) -> Result<Report, RunError> {
    let inv = dimension_inventory(q)?;
    let mut text: Vec<String> = inv
        .families
        .iter()
        .map(|(name, count, dim)| format!("{count} x dim {dim}  {name}"))
        .collect();
    text.push(format!("{} = {} {}", inv.sum, inv.order, verdict(inv.holds())));
    let row = InventoryRow {
        q: inv.q,
        sum: inv.sum.to_string(),
        order: inv.order.to_string(),
        nontrivial: inv.nontrivial.to_string(),
        d_min: inv.d_min.to_string(),
        holds: inv.holds(),
    };
    single(
        "rep inventory",
        &["q", "sum", "order", "nontrivial", "d_min", "holds"],
        &row,
        text,
        pass_if(inv.holds()),
    )
}

#[derive(Serialize)]
struct GapRow {
    q: u32,
    size: usize,
    n: u32,
    op_norm: f64,
    bound: f64,
    below_bound: bool,
    hypothesis_holds: bool,
    log_margin: f64,
    mixing_positive: bool,
    power_is_full: Option<bool>,
}

pub fn gap<R: Rng>(q: u64, size: usize, n: u32, verify_power: bool, rng: &mut R) -> Result<Report, RunError> {
    let a = GroupSet::random(q, size, rng)?;
    let r = spectral_gap_check(&a, n, verify_power)?;
    let mut text = vec![
        format!("|A| = {}, n = {}", r.size, r.n),
        format!("||St||_op = {:.6} < {:.6} {}", r.op_norm, r.bound, verdict(r.below_bound)),
        format!(
            "size hypothesis {}, mixing estimate {} (log margin {:.6})",
            if r.hypothesis_holds { "holds" } else { "fails" },
            if r.mixing_positive { "positive" } else { "not positive" },
            r.log_margin
        ),
    ];
    if let Some(full) = r.power_is_full {
        text.push(format!("A^{} = SL2(F_{}) {}", r.n, r.q, verdict(full)));
    }
    let ok = r.below_bound && r.power_is_full != Some(false);
    let row = GapRow {
        q: r.q,
        size: r.size,
        n: r.n,
        op_norm: r.op_norm,
        bound: r.bound,
        below_bound: r.below_bound,
        hypothesis_holds: r.hypothesis_holds,
        log_margin: r.log_margin,
        mixing_positive: r.mixing_positive,
        power_is_full: r.power_is_full,
    };
    single(
        "rep gap",
        &[
            "q",
            "size",
            "n",
            "op_norm",
            "bound",
            "below_bound",
            "hypothesis_holds",
            "log_margin",
            "mixing_positive",
            "power_is_full",
        ],
        &row,
        text,
        pass_if(ok),
    )
}
