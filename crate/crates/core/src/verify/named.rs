use std::time::Instant;

use super::{IdentityReport, Status};
use crate::error::{Error, Result};
use crate::exact::fmt_rat;
use crate::theorems::{
    mw_antisymmetric_sum, mw_eleven, nt_mw_five, nt_residue_sums_five, scan, seven_nt_combination,
    table_for, Combination, ScanOutcome, SevenIdentity,
};

const NAMED: [&str; 5] = [
    "nt7-eta-quotient",
    "nt-mw-5",
    "mw-11-at-6",
    "mw-antisym-5",
    "mw-antisym-7",
];
const SCANS: [&str; 2] = ["nt-mod5", "nt7-mod7"];

/// Identities checked outside the polynomial database.
pub fn named_ids() -> &'static [&'static str] {
    &NAMED
}

/// Congruence scans with a fixed divisor.
pub fn scan_ids() -> &'static [&'static str] {
    &SCANS
}

fn vanishing(id: &str, comb: Combination, n_max: usize, from: usize) -> Result<IdentityReport> {
    let out = scan(&table_for(&comb, n_max)?, &comb, n_max, 0)?;
    let first_bad = out
        .values
        .iter()
        .enumerate()
        .skip(from)
        .find(|(_, v)| v.as_str() != "0");
    let status = match first_bad {
        None => Status::Verified,
        Some((n, v)) => Status::Refuted {
            first_mismatch: n.to_string(),
            detail: format!("value {v}"),
        },
    };
    Ok(IdentityReport::new(id, status, String::new(), n_max as i64))
}

/// Runs one named identity. `n_max` bounds the `n` range of the
/// count-vanishing checks; the eta-quotient identity is checked through `q^{n_max}`.
pub fn named_check(id: &str, n_max: usize) -> Result<IdentityReport> {
    let start = Instant::now();
    let mut r = match id {
        "nt7-eta-quotient" => {
            let ident = SevenIdentity::compute(n_max + 1)?;
            let status = match ident.first_failure() {
                None => Status::Verified,
                Some(e) => Status::Refuted {
                    first_mismatch: fmt_rat(&e),
                    detail: "eta-quotient form".into(),
                },
            };
            IdentityReport::new(id, status, String::new(), n_max as i64)
        }
        "nt-mw-5" => vanishing(id, nt_mw_five(), n_max, 0)?,
        // the partitions of 6 are the only range the enumeration reaches cheaply
        "mw-11-at-6" => vanishing(id, mw_eleven(), 0, 0)?,
        "mw-antisym-5" => vanishing(id, mw_antisymmetric_sum(5)?, n_max, 1)?,
        "mw-antisym-7" => vanishing(id, mw_antisymmetric_sum(7)?, n_max, 1)?,
        _ => return Err(Error::Parse(format!("unknown identity '{id}'"))),
    };
    r.millis = Some(start.elapsed().as_millis() as u64);
    Ok(r)
}

/// Runs a named congruence scan over `n = 0..=n_max`.
pub fn named_scan(id: &str, n_max: usize) -> Result<Vec<ScanOutcome>> {
    let (combs, divisor) = match id {
        "nt-mod5" => (nt_residue_sums_five(), 5),
        "nt7-mod7" => (vec![seven_nt_combination()], 7),
        _ => return Err(Error::Parse(format!("unknown scan '{id}'"))),
    };
    combs
        .iter()
        .map(|c| scan(&table_for(c, n_max)?, c, n_max, divisor))
        .collect()
}
