use serde::Serialize;

use zlab_core::zaremba::{count_fractions, dyadic, enumerate_fractions_capped, estimate_dimension};
use zlab_core::{Convention, Error};

use super::single;
use crate::args::ZsetParams;
use crate::report::Table;
use crate::{Report, RunError, Status};

#[derive(Serialize)]
struct Member {
    u: u64,
    v: u64,
}

pub fn enumerate(params: &ZsetParams, cap: u64) -> Result<Report, RunError> {
    let conv: Convention = params.convention.into();
    let mut table = Table::new(&["u", "v"]);
    match enumerate_fractions_capped(params.m, params.q, conv, cap) {
        Ok(z) => {
            let mut text = Vec::with_capacity(z.len());
            for &(u, v) in z.pairs() {
                table.push(&Member { u, v })?;
                text.push(format!("{u}/{v}"));
            }
            Ok(Report {
                name: "zset enum",
                text,
                table,
                status: Status::Pass,
            })
        }
        Err(Error::ResourceCap { cap }) => Ok(Report {
            name: "zset enum",
            text: vec![format!("F_{}({}) has more than {cap} members; raise --cap or use zset count", params.m, params.q)],
            table,
            status: Status::CapExhausted,
        }),
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct CountRow {
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "Q")]
    q: u64,
    convention: String,
    count: u64,
}

pub fn count(params: &ZsetParams) -> Result<Report, RunError> {
    let conv: Convention = params.convention.into();
    let n = count_fractions(params.m, params.q, conv)?;
    let row = CountRow {
        m: params.m,
        q: params.q,
        convention: conv.to_string(),
        count: n,
    };
    let text = vec![format!("|F_{}({})| = {n} ({conv})", params.m, params.q)];
    single("zset count", &["M", "Q", "convention", "count"], &row, text, Status::Pass)
}

#[derive(Serialize)]
struct DimRow {
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "Q")]
    q: u64,
    count: u64,
    doubling_ratio: Option<f64>,
    w_hat: f64,
}

pub fn dim(m: u64, lo: u32, hi: u32, conv: Convention) -> Result<Report, RunError> {
    if lo > hi || hi > 62 {
        return Err(RunError::Input("need lo <= hi <= 62".into()));
    }
    let e = estimate_dimension(m, &dyadic(lo, hi), conv)?;
    let ratios = e.doubling_ratios();
    let mut table = Table::new(&["M", "Q", "count", "doubling_ratio", "w_hat"]);
    let mut text = Vec::new();
    for (i, (&q, &count)) in e.sample_qs.iter().zip(&e.counts).enumerate() {
        let ratio = i.checked_sub(1).map(|j| ratios[j].1);
        table.push(&DimRow {
            m,
            q,
            count,
            doubling_ratio: ratio,
            w_hat: e.w_hat,
        })?;
    }
    text.extend(table.render(crate::args::Format::Text)?.lines().map(String::from));
    text.push(format!(
        "w_hat = {:.6}  intercept = {:.6}  residual = {:.6}",
        e.w_hat, e.intercept, e.residual
    ));
    Ok(Report {
        name: "zset dim",
        text,
        table,
        status: Status::Pass,
    })
}
