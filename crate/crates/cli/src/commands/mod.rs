mod cf;
mod rep;
mod search;
mod sl2;
mod zset;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{CfCommand, Command, RepCommand, SearchCommand, Sl2Command, ZsetCommand};
use crate::report::Table;
use crate::{Report, RunError, Status};

pub fn run(cmd: &Command, seed: u64) -> Result<Report, RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match cmd {
        Command::Cf(CfCommand::Expand { frac }) => cf::expand(frac),
        Command::Cf(CfCommand::Eval { cf }) => cf::eval(cf),
        Command::Zset(ZsetCommand::Enum { params, cap }) => zset::enumerate(params, *cap),
        Command::Zset(ZsetCommand::Count { params }) => zset::count(params),
        Command::Zset(ZsetCommand::Dim { m, lo, hi, convention }) => zset::dim(*m, *lo, *hi, (*convention).into()),
        Command::Search(SearchCommand::Minq { p, m, cap }) => search::minq(*p, *m, *cap),
        Command::Search(SearchCommand::Table { p_max, primes, m, cap }) => search::table(*p_max, primes, *m, *cap),
        Command::Search(SearchCommand::Power { p, m, n_max }) => search::power(*p, *m, *n_max),
        Command::Search(SearchCommand::Bounds { w, alpha }) => search::bounds(*w, *alpha),
        Command::Sl2(Sl2Command::VerifyBgb { p }) => sl2::verify_bgb(*p),
        Command::Sl2(Sl2Command::Energy { p, size_a, size_b, trials }) => {
            sl2::energy(*p, *size_a, *size_b, *trials, &mut rng)
        }
        Command::Sl2(Sl2Command::Tripling { p, set }) => sl2::tripling(*p, set, &mut rng),
        Command::Sl2(Sl2Command::Borel { p, set }) => sl2::borel(*p, set, &mut rng),
        Command::Sl2(Sl2Command::Helfgott { p, size, count }) => sl2::helfgott(*p, *size, *count, &mut rng),
        Command::Sl2(Sl2Command::Threshold { p, n, set }) => sl2::threshold(*p, *n, set, &mut rng),
        Command::Rep(RepCommand::Certify { q }) => rep::certify(*q),
        Command::Rep(RepCommand::Inventory { q }) => rep::inventory(*q),
        Command::Rep(RepCommand::Gap { q, size, n, verify_power }) => rep::gap(*q, *size, *n, *verify_power, &mut rng),
    }
}

/// A one-row report whose text is `text`.
fn single<R: Serialize>(
    name: &'static str,
    columns: &[&str],
    row: &R,
    text: Vec<String>,
    status: Status,
) -> Result<Report, RunError> {
    let mut table = Table::new(columns);
    table.push(row)?;
    Ok(Report {
        name,
        text,
        table,
        status,
    })
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "OK"
    } else {
        "FAIL"
    }
}
