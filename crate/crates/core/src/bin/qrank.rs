//! `qrank`: verify the stored dissection identities, scan congruences, and
//! expand q-series targets. JSON lines go to stdout, a readable table to stderr.
//!
//! Exit codes: 0 all checks pass, 1 a refutation, 2 usage or parse error,
//! 3 a resource limit stopped a check.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qrank::partitions::{Oracle, Stat};
use qrank::theorems::{scan, table_for, Combination, ScanOutcome};
use qrank::verify::{
    exit_code_for, expand_target, load_db, named_check, named_ids, named_scan, parse_weights,
    scan_ids, select, verify_records, PathChoice, RunReport, VerifyOptions,
};
use qrank::Error;

#[derive(Parser)]
#[command(
    name = "qrank",
    version,
    about = "Rank/crank dissection identities over exact q-series"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check database rows and named identities.
    Verify {
        /// Only rows at this prime.
        #[arg(long)]
        p: Option<i64>,
        /// Row labels such as `N7(2,4)`, or named ids; repeatable.
        #[arg(long)]
        id: Vec<String>,
        /// Compare through this exponent instead of the per-row default.
        #[arg(long)]
        order: Option<i64>,
        /// Worker threads (0 = rayon default).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Largest partition size the count tables may reach.
        #[arg(long, default_value_t = qrank::partitions::GF_LIMIT)]
        max_n: usize,
        /// `enumeration` or `gf-dp`.
        #[arg(long)]
        oracle: Option<Oracle>,
        /// Identity database (JSON); defaults to the shipped one.
        #[arg(long, env = "QRANK_DB")]
        db: Option<PathBuf>,
        /// `combinatorial`, `modular` or `both`.
        #[arg(long, default_value = "both")]
        path: PathChoice,
        /// Leave timings out so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Scan a congruence or vanishing combination over `n = 0..=n_max`.
    Scan {
        /// A named scan (`nt-mod5`, `nt7-mod7`).
        #[arg(long)]
        id: Option<String>,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Modulus of the residue classes for a custom combination.
        #[arg(long)]
        modulus: Option<i64>,
        /// Residue of the arithmetic progression `modulus * n + k`.
        #[arg(long)]
        k: Option<i64>,
        /// `N`, `M`, `NT` or `Mw`.
        #[arg(long, default_value = "NT")]
        stat: String,
        /// One weight per residue class `0..modulus`, comma separated.
        #[arg(long)]
        weights: Option<String>,
        /// Required divisor; 0 asks for vanishing.
        #[arg(long, default_value_t = 0)]
        divisor: i64,
    },
    /// Print a q-series target as `exponent<TAB>coefficient` lines.
    Expand {
        target: String,
        /// Coefficients below `q^order`.
        #[arg(long, default_value_t = 20)]
        order: i64,
    },
    /// A fast run over the p = 5 rows, the named identities and the scans.
    Selftest {
        #[arg(long)]
        no_timing: bool,
    },
}

fn parse_stat(s: &str) -> Result<Stat, Error> {
    Stat::ALL
        .into_iter()
        .find(|st| st.name() == s)
        .ok_or_else(|| Error::Parse(format!("unknown statistic '{s}'")))
}

fn print_scans(outs: &[ScanOutcome]) -> i32 {
    for o in outs {
        println!("{}", serde_json::to_string(o).expect("scan serializes"));
        let verdict = match o.witness {
            None => "holds".to_string(),
            Some(n) => format!("fails at n = {n}"),
        };
        eprintln!("{} (divisor {}): {verdict}", o.label, o.divisor);
    }
    i32::from(!outs.iter().all(ScanOutcome::holds))
}

fn emit(report: &RunReport, timing: bool) -> i32 {
    print!("{}", report.to_jsonl(timing));
    eprint!("{}", report.table());
    report.exit_code()
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    p: Option<i64>,
    ids: Vec<String>,
    order: Option<i64>,
    jobs: usize,
    max_n: usize,
    oracle: Option<Oracle>,
    db: Option<PathBuf>,
    path: PathChoice,
    no_timing: bool,
) -> Result<i32, Error> {
    let records = load_db(db.as_deref())?;
    let (named, rows): (Vec<String>, Vec<String>) = ids
        .into_iter()
        .partition(|id| named_ids().contains(&id.as_str()));
    let (chosen, run_named) = if rows.is_empty() && named.is_empty() {
        // no ids: every row at the prime, and the named checks when no prime is given
        let all = if p.is_none() {
            named_ids().iter().map(|s| s.to_string()).collect()
        } else {
            Vec::new()
        };
        (select(&records, p, &[])?, all)
    } else if rows.is_empty() {
        (Vec::new(), named)
    } else {
        (select(&records, p, &rows)?, named)
    };
    let chosen: Vec<_> = chosen.into_iter().cloned().collect();
    let opts = VerifyOptions {
        jobs,
        paths: path,
        through: order,
        max_n,
        oracle,
    };
    let mut report = verify_records(&chosen, &opts);
    for id in &run_named {
        let n = order
            .map(|o| o.max(0) as usize)
            .unwrap_or(if id == "nt7-eta-quotient" { 25 } else { 12 });
        report.reports.push(named_check(id, n)?);
    }
    Ok(emit(&report, !no_timing))
}

fn run_scan(
    id: Option<String>,
    n_max: usize,
    modulus: Option<i64>,
    k: Option<i64>,
    stat: &str,
    weights: Option<String>,
    divisor: i64,
) -> Result<i32, Error> {
    if let Some(id) = id {
        return Ok(print_scans(&named_scan(&id, n_max)?));
    }
    let (Some(m), Some(k), Some(w)) = (modulus, k, weights) else {
        return Err(Error::Parse(format!(
            "scan needs --id ({}) or --modulus, --k and --weights",
            scan_ids().join(", ")
        )));
    };
    let w = parse_weights(&w)?;
    if w.len() as i64 != m {
        return Err(Error::Parse(format!("{} weights for modulus {m}", w.len())));
    }
    let st = parse_stat(stat)?;
    let terms = w
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 0)
        .map(|(r, &w)| (st, r as i64, w))
        .collect();
    let comb = Combination::new(&format!("weighted {} at {m}n+{k}", st.name()), m, k, terms)?;
    let out = scan(&table_for(&comb, n_max)?, &comb, n_max, divisor)?;
    Ok(print_scans(&[out]))
}

fn selftest(no_timing: bool) -> Result<i32, Error> {
    let records: Vec<_> = load_db(None)?.into_iter().filter(|r| r.p == 5).collect();
    let mut report = verify_records(&records, &VerifyOptions::default());
    for id in named_ids() {
        let n = if *id == "nt7-eta-quotient" { 25 } else { 12 };
        report.reports.push(named_check(id, n)?);
    }
    let code = emit(&report, !no_timing);
    let mut scans = Vec::new();
    for id in scan_ids() {
        scans.extend(named_scan(id, 12)?);
    }
    Ok(code.max(print_scans(&scans)))
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Verify {
            p,
            id,
            order,
            jobs,
            max_n,
            oracle,
            db,
            path,
            no_timing,
        } => run_verify(p, id, order, jobs, max_n, oracle, db, path, no_timing),
        Cmd::Scan {
            id,
            n_max,
            modulus,
            k,
            stat,
            weights,
            divisor,
        } => run_scan(id, n_max, modulus, k, &stat, weights, divisor),
        Cmd::Expand { target, order } => {
            print!("{}", expand_target(&target, order)?.dump());
            Ok(0)
        }
        Cmd::Selftest { no_timing } => selftest(no_timing),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    ExitCode::from(code as u8)
}
