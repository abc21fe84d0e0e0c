use serde::Serialize;

use zlab_core::{evaluate, expand as expand_fraction, CFExpansion, Fraction};

use super::single;
use crate::{Report, RunError, Status};

#[derive(Serialize)]
struct Row {
    frac: String,
    cf: String,
    length: usize,
}

const COLUMNS: &[&str] = &["frac", "cf", "length"];

pub fn expand(frac: &str) -> Result<Report, RunError> {
    let f: Fraction = frac.parse()?;
    let cf = expand_fraction(&f)?;
    row("cf expand", f, cf, true)
}

pub fn eval(cf: &str) -> Result<Report, RunError> {
    let cf: CFExpansion = cf.parse()?;
    let f = evaluate(&cf);
    row("cf eval", f, cf, false)
}

fn row(name: &'static str, f: Fraction, cf: CFExpansion, show_cf: bool) -> Result<Report, RunError> {
    let text = if show_cf { cf.to_string() } else { f.to_string() };
    let r = Row {
        frac: f.to_string(),
        cf: cf.to_string(),
        length: cf.len(),
    };
    single(name, COLUMNS, &r, vec![text], Status::Pass)
}
