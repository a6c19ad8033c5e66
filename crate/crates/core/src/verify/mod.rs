//! Identity database, verification runs and their reports, named checks, and
//! the series targets the command-line tool can expand.

mod expand;
mod named;

pub use expand::expand_target;
pub use named::{named_check, named_ids, named_scan, scan_ids};

use std::collections::BTreeMap;
use std::path::Path as FsPath;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, rat_int};
use crate::partitions::Oracle;
use crate::theorems::{modularize, t_poly_expand, IdentityRecord, PartEngine, Path};

/// The shipped representations at p = 5 (20 rows) and p = 7 (42 rows).
pub const DEFAULT_DB: &str = include_str!("../../data/identities.json");

pub fn parse_db(text: &str) -> Result<Vec<IdentityRecord>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("identity database: {e}")))
}

/// Reads the database at `path`, or the shipped one.
pub fn load_db(path: Option<&FsPath>) -> Result<Vec<IdentityRecord>> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            parse_db(&text)
        }
        None => parse_db(DEFAULT_DB),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Verified,
    /// `first_mismatch` is the first exponent where the two sides differ.
    Refuted {
        first_mismatch: String,
        detail: String,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub id: String,
    #[serde(flatten)]
    pub status: Status,
    /// Valence bound for the row; empty for checks that are not modular identities.
    pub check_bound: String,
    pub checked_through: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl IdentityReport {
    pub fn new(
        id: impl Into<String>,
        status: Status,
        check_bound: String,
        checked_through: i64,
    ) -> Self {
        IdentityReport {
            id: id.into(),
            status,
            check_bound,
            checked_through,
            paths_agree: None,
            millis: None,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub verified: usize,
    pub refuted: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub reports: Vec<IdentityReport>,
}

impl RunReport {
    pub fn summary(&self) -> Summary {
        let mut s = Summary {
            total: self.reports.len(),
            ..Default::default()
        };
        for r in &self.reports {
            match r.status {
                Status::Verified => s.verified += 1,
                Status::Refuted { .. } => s.refuted += 1,
                Status::Skipped { .. } => s.skipped += 1,
            }
        }
        s
    }

    pub fn all_verified(&self) -> bool {
        let s = self.summary();
        s.verified == s.total
    }

    /// 0 when everything verified, 1 on any refutation, 3 when only skips remain.
    pub fn exit_code(&self) -> i32 {
        let s = self.summary();
        if s.refuted > 0 {
            1
        } else if s.skipped > 0 {
            3
        } else {
            0
        }
    }

    /// One JSON object per identity followed by a summary object.
    pub fn to_jsonl(&self, timing: bool) -> String {
        let mut out = String::new();
        for r in &self.reports {
            let mut r = r.clone();
            if !timing {
                r.millis = None;
            }
            out.push_str(&serde_json::to_string(&r).expect("report serializes"));
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "summary": self.summary() }).to_string());
        out.push('\n');
        out
    }

    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<22} {:<9} {:>8} {:>7} {:>6} {:>8}\n",
            "id", "status", "bound", "through", "paths", "ms"
        );
        for r in &self.reports {
            let status = match &r.status {
                Status::Verified => "verified".to_string(),
                Status::Refuted { first_mismatch, .. } => format!("refuted@{first_mismatch}"),
                Status::Skipped { .. } => "skipped".to_string(),
            };
            let paths = match r.paths_agree {
                Some(true) => "agree",
                Some(false) => "DIFFER",
                None => "-",
            };
            let ms = r
                .millis
                .map(|m| m.to_string())
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{:<22} {:<9} {:>8} {:>7} {:>6} {:>8}\n",
                r.id, status, r.check_bound, r.checked_through, paths, ms
            ));
        }
        let s = self.summary();
        out.push_str(&format!(
            "{} checked: {} verified, {} refuted, {} skipped\n",
            s.total, s.verified, s.refuted, s.skipped
        ));
        out
    }
}

/// Which computation paths a verification runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathChoice {
    Combinatorial,
    Modular,
    /// Both, and they must agree exactly.
    Both,
}

impl std::str::FromStr for PathChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(PathChoice::Both),
            other => match other.parse::<Path>()? {
                Path::Combinatorial => Ok(PathChoice::Combinatorial),
                Path::Modular => Ok(PathChoice::Modular),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub jobs: usize,
    pub paths: PathChoice,
    /// Check through this exponent instead of the default for the prime.
    pub through: Option<i64>,
    /// Largest partition size the count tables may reach.
    pub max_n: usize,
    /// Count oracle; `None` picks enumeration for small tables.
    pub oracle: Option<Oracle>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            jobs: 0,
            paths: PathChoice::Both,
            through: None,
            max_n: crate::partitions::GF_LIMIT,
            oracle: None,
        }
    }
}

/// Exponent through which a row is compared: the valence bound, raised to the
/// traditional `q^7` at p = 5 and `q^25` at p = 7.
pub fn default_through(rec: &IdentityRecord) -> Result<i64> {
    let bound = rec.check_bound()?;
    let floor = bound.floor().to_integer();
    let floor =
        i64::try_from(floor).map_err(|_| Error::ResourceLimit("check bound too large".into()))?;
    Ok(match rec.p {
        5 => floor.max(7),
        7 => floor.max(25),
        _ => floor,
    })
}

/// Checks one row against a prepared engine.
pub fn verify_record(
    engine: &PartEngine,
    rec: &IdentityRecord,
    through: i64,
    paths: PathChoice,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let bound = rec.check_bound()?;
    let need = rat_int(through + 1);
    let kind = rec.statistic;
    let reference = match paths {
        PathChoice::Modular => Path::Modular,
        _ => Path::Combinatorial,
    };
    let part = engine.part(kind, rec.s, rec.k, reference)?;
    let mut paths_agree = None;
    if paths == PathChoice::Both {
        let other = engine.part(kind, rec.s, rec.k, Path::Modular)?;
        paths_agree = Some(other == part);
    }
    let lhs = modularize(&part, rec.p, rec.k)?;
    let id = rec.label();
    let bound_s = fmt_rat(&bound);
    let known = lhs.order().unwrap_or_else(|| need.clone());
    let status = if known < need {
        Status::Skipped {
            reason: format!("series known below q^{} only", fmt_rat(&known)),
        }
    } else if paths_agree == Some(false) {
        let other = engine.part(kind, rec.s, rec.k, Path::Modular)?;
        let e = part
            .first_difference(&other, None)
            .map(|e| fmt_rat(&e))
            .unwrap_or_default();
        Status::Refuted {
            first_mismatch: e,
            detail: "combinatorial and modular paths differ".into(),
        }
    } else {
        let rhs = t_poly_expand(rec.p, &rec.rhs_poly, &need)?;
        match lhs.first_difference(&rhs, Some(&need)) {
            None => Status::Verified,
            Some(e) => Status::Refuted {
                first_mismatch: fmt_rat(&e),
                detail: format!("lhs {} vs rhs {}", lhs.coeff(&e)?, rhs.coeff(&e)?),
            },
        }
    };
    let mut r = IdentityReport::new(id, status, bound_s, through);
    r.paths_agree = paths_agree;
    r.millis = Some(start.elapsed().as_millis() as u64);
    Ok(r)
}

fn run_in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Verifies every record, sharing one engine per prime. Report order follows
/// the input order.
pub fn verify_records(records: &[IdentityRecord], opts: &VerifyOptions) -> RunReport {
    let mut plan: Vec<(usize, i64)> = Vec::with_capacity(records.len());
    let mut needed: BTreeMap<i64, i64> = BTreeMap::new();
    let mut reports: Vec<Option<IdentityReport>> = vec![None; records.len()];
    for (i, rec) in records.iter().enumerate() {
        match opts.through.map(Ok).unwrap_or_else(|| default_through(rec)) {
            Ok(t) => {
                plan.push((i, t));
                let e = needed.entry(rec.p).or_insert(t);
                *e = (*e).max(t);
            }
            Err(e) => reports[i] = Some(error_report(rec, e)),
        }
    }
    // the modularizing prefactor starts at q^{-1}, so two spare terms cover it
    let mut engines: BTreeMap<i64, std::result::Result<PartEngine, String>> = BTreeMap::new();
    for (&p, &t) in &needed {
        let terms = (t + 3) as usize;
        let size = PartEngine::table_size(p, terms);
        let eng = if size > opts.max_n {
            Err(format!(
                "needs partitions up to {size} > --max-n {}",
                opts.max_n
            ))
        } else {
            match opts.oracle {
                Some(o) => PartEngine::with_oracle(p, terms, o),
                None => PartEngine::new(p, terms),
            }
            .map_err(|e| e.to_string())
        };
        engines.insert(p, eng);
    }
    let done: Vec<(usize, IdentityReport)> = run_in_pool(opts.jobs, || {
        plan.par_iter()
            .map(|&(i, t)| {
                let rec = &records[i];
                let r = match &engines[&rec.p] {
                    Err(reason) => IdentityReport::new(
                        rec.label(),
                        Status::Skipped {
                            reason: reason.clone(),
                        },
                        String::new(),
                        t,
                    ),
                    Ok(eng) => verify_record(eng, rec, t, opts.paths)
                        .unwrap_or_else(|e| error_report(rec, e)),
                };
                (i, r)
            })
            .collect()
    });
    for (i, r) in done {
        reports[i] = Some(r);
    }
    RunReport {
        reports: reports
            .into_iter()
            .map(|r| r.expect("every record reported"))
            .collect(),
    }
}

fn error_report(rec: &IdentityRecord, e: Error) -> IdentityReport {
    let status = match e {
        Error::ResourceLimit(_) | Error::TruncationEmpty => Status::Skipped {
            reason: e.to_string(),
        },
        other => Status::Refuted {
            first_mismatch: String::new(),
            detail: other.to_string(),
        },
    };
    IdentityReport::new(rec.label(), status, String::new(), 0)
}

/// Records matching the optional prime and id filters. Unknown ids are an error.
pub fn select<'a>(
    records: &'a [IdentityRecord],
    p: Option<i64>,
    ids: &[String],
) -> Result<Vec<&'a IdentityRecord>> {
    for id in ids {
        if !records.iter().any(|r| &r.label() == id) {
            return Err(Error::Parse(format!("no identity '{id}' in the database")));
        }
    }
    Ok(records
        .iter()
        .filter(|r| p.map_or(true, |p| r.p == p))
        .filter(|r| ids.is_empty() || ids.contains(&r.label()))
        .collect())
}

/// Comma-separated integer weights.
pub fn parse_weights(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|w| {
            w.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("weight '{w}': {e}")))
        })
        .collect()
}

/// Maps a library error to the command-line exit code.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Domain(_) => 2,
        Error::ResourceLimit(_) | Error::TruncationEmpty => 3,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_db_shape() {
        let db = load_db(None).unwrap();
        assert_eq!(db.len(), 62);
        assert_eq!(db.iter().filter(|r| r.p == 5).count(), 20);
        for r in &db {
            let (lo, hi) = r.exponent_range();
            assert!(lo >= -2 && hi <= 4, "{}", r.label());
        }
        let first = &db[0];
        assert_eq!(first.label(), "N5(1,0)");
    }

    #[test]
    fn five_rows_verify() {
        let db = load_db(None).unwrap();
        let rows: Vec<_> = db.into_iter().filter(|r| r.p == 5).collect();
        let rep = verify_records(&rows, &VerifyOptions::default());
        assert!(rep.all_verified(), "{}", rep.table());
        assert_eq!(rep.exit_code(), 0);
        assert!(rep
            .reports
            .iter()
            .all(|r| r.paths_agree == Some(true) && r.checked_through >= 7));
    }

    #[test]
    fn wrong_coefficient_is_refuted() {
        let mut rec = load_db(None).unwrap().remove(0);
        rec.rhs_poly.insert(0, crate::exact::rat(-3, 10));
        let rep = verify_records(&[rec], &VerifyOptions::default());
        assert_eq!(rep.exit_code(), 1);
        assert!(matches!(rep.reports[0].status, Status::Refuted { .. }));
    }

    #[test]
    fn resource_guard_skips() {
        let rec = load_db(None).unwrap().remove(0);
        let opts = VerifyOptions {
            max_n: 10,
            ..Default::default()
        };
        let rep = verify_records(&[rec], &opts);
        assert_eq!(rep.exit_code(), 3);
    }

    #[test]
    fn report_is_deterministic_without_timing() {
        let rows: Vec<_> = load_db(None).unwrap().into_iter().take(3).collect();
        let a = verify_records(&rows, &VerifyOptions::default()).to_jsonl(false);
        let b = verify_records(
            &rows,
            &VerifyOptions {
                jobs: 2,
                ..Default::default()
            },
        )
        .to_jsonl(false);
        assert_eq!(a, b);
        assert!(a.lines().last().unwrap().contains("\"verified\":3"));
    }

    #[test]
    fn bad_db_is_a_parse_error() {
        assert!(matches!(parse_db("[{\"p\": 5}]"), Err(Error::Parse(_))));
        assert!(matches!(
            select(&load_db(None).unwrap(), None, &["X9(1,1)".into()]),
            Err(Error::Parse(_))
        ));
    }
}
