//! Partition statistics (rank, crank, number of parts, number of ones) counted
//! by residue class, with two independent oracles, and the rank/crank
//! deviation series built from them.

mod closed_forms;
mod gf;

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat_int, Rat};
use crate::qseries::PSeries;

pub use closed_forms::{
    crank_deviation_closed_form, expand_terms, rank_deviation_closed_form, ClosedTerm,
};

/// Largest `n_max` accepted by the enumeration oracle.
pub const ENUMERATION_LIMIT: usize = 100;
/// Largest `n_max` accepted by the generating-function oracle.
pub const GF_LIMIT: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stat {
    /// Partitions counted by rank.
    N,
    /// Partitions counted by crank.
    M,
    /// Parts, summed over partitions, by rank.
    NT,
    /// Ones, summed over partitions, by crank.
    #[serde(rename = "Mw")]
    MW,
}

impl Stat {
    pub const ALL: [Stat; 4] = [Stat::N, Stat::M, Stat::NT, Stat::MW];

    pub fn name(self) -> &'static str {
        match self {
            Stat::N => "N",
            Stat::M => "M",
            Stat::NT => "NT",
            Stat::MW => "Mw",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    Enumeration,
    GfDp,
}

impl std::str::FromStr for Oracle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumeration" => Ok(Oracle::Enumeration),
            "gf-dp" => Ok(Oracle::GfDp),
            _ => Err(Error::Parse(format!("unknown oracle '{s}'"))),
        }
    }
}

/// rank = largest part - number of parts.
pub fn rank(parts: &[u32]) -> i64 {
    let largest = parts.iter().copied().max().unwrap_or(0) as i64;
    largest - parts.len() as i64
}

/// crank: the largest part when there are no ones, else the number of parts
/// larger than the number of ones minus the number of ones.
pub fn crank(parts: &[u32]) -> i64 {
    let ones = parts.iter().filter(|&&p| p == 1).count() as i64;
    if ones == 0 {
        parts.iter().copied().max().unwrap_or(0) as i64
    } else {
        parts.iter().filter(|&&p| p as i64 > ones).count() as i64 - ones
    }
}

/// p(n) for n <= n_max by Euler's pentagonal recurrence.
pub fn partition_numbers(n_max: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n_max + 1];
    p[0] = BigInt::from(1);
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign_pos = k % 2 == 1;
            for g in [g1, k * (3 * k + 1) / 2] {
                if g <= n {
                    if sign_pos {
                        acc += &p[n - g];
                    } else {
                        acc -= &p[n - g];
                    }
                }
            }
        }
        p[n] = acc;
    }
    p
}

/// Counts of the four statistics by residue class mod `modulus`, n <= n_max.
#[derive(Clone, Debug)]
pub struct StatTable {
    modulus: usize,
    n_max: usize,
    // counts[stat][n][residue]
    counts: [Vec<Vec<BigInt>>; 4],
    pn: Vec<BigInt>,
}

impl StatTable {
    pub fn build(modulus: u32, n_max: usize, oracle: Oracle) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        let m = modulus as usize;
        let counts = match oracle {
            Oracle::Enumeration => {
                if n_max > ENUMERATION_LIMIT {
                    return Err(Error::ResourceLimit(format!(
                        "enumeration oracle supports n <= {ENUMERATION_LIMIT}, asked for {n_max}"
                    )));
                }
                enumerate(m, n_max)
            }
            Oracle::GfDp => {
                if n_max > GF_LIMIT {
                    return Err(Error::ResourceLimit(format!(
                        "generating-function oracle supports n <= {GF_LIMIT}, asked for {n_max}"
                    )));
                }
                gf::tables(m, n_max)
            }
        };
        Ok(StatTable {
            modulus: m,
            n_max,
            counts,
            pn: partition_numbers(n_max),
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus as u32
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Count for `stat` at residue `r` (any integer) and weight `n`.
    pub fn get(&self, stat: Stat, r: i64, n: usize) -> &BigInt {
        assert!(n <= self.n_max, "n = {n} beyond table limit {}", self.n_max);
        &self.counts[stat.index()][n][r.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn p(&self, n: usize) -> &BigInt {
        &self.pn[n]
    }

    /// CSV with header `stat,modulus,residue,n,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("stat,modulus,residue,n,count\n");
        for stat in Stat::ALL {
            for n in 0..=self.n_max {
                for r in 0..self.modulus {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        stat.name(),
                        self.modulus,
                        r,
                        n,
                        self.counts[stat.index()][n][r]
                    )
                    .unwrap();
                }
            }
        }
        out
    }

    fn check_len(&self, last: usize) -> Result<()> {
        if last > self.n_max {
            Err(Error::ResourceLimit(format!(
                "need n = {last}, table holds n <= {}",
                self.n_max
            )))
        } else {
            Ok(())
        }
    }

    /// `sum_{n < order} f(M n + k) q^n` for the residue-class selector `f`.
    fn dissected<F: Fn(usize) -> Rat>(&self, k: usize, order: usize, f: F) -> Result<PSeries> {
        if order == 0 {
            return Ok(PSeries::zero_to(&Rat::zero()));
        }
        self.check_len(self.modulus * (order - 1) + k)?;
        let terms = (0..order).map(|n| (rat_int(n as i64), f(self.modulus * n + k)));
        Ok(PSeries::from_terms(terms, Some(&rat_int(order as i64))))
    }

    fn deviation(&self, stat: Stat, a: i64, n: usize) -> Rat {
        Rat::from_integer(self.get(stat, a, n).clone())
            - Rat::new(self.pn[n].clone(), BigInt::from(self.modulus))
    }

    /// Crank count as read off the crank generating function
    /// `prod (1-q^n)/((1-zq^n)(1-q^n/z))`, which at n = 1 gives
    /// `z^{-1} - 1 + z` instead of the single partition of crank -1.
    pub fn crank_gf_count(&self, r: i64, n: usize) -> BigInt {
        let mut c = self.get(Stat::M, r, n).clone();
        if n == 1 && self.modulus > 1 {
            let m = self.modulus as i64;
            if r.rem_euclid(m) == 1 {
                c += 1;
            }
            if r.rem_euclid(m) == 0 {
                c -= 1;
            }
        }
        c
    }

    fn gf_deviation(&self, a: i64, n: usize) -> Rat {
        Rat::from_integer(self.crank_gf_count(a, n))
            - Rat::new(self.pn[n].clone(), BigInt::from(self.modulus))
    }

    /// [`Self::dc_series`] with the generating-function crank counts.
    pub fn dc_gf_series(&self, a: i64, order: usize) -> Result<PSeries> {
        if order == 0 {
            return Ok(PSeries::zero_to(&Rat::zero()));
        }
        self.check_len(order - 1)?;
        let terms = (0..order).map(|n| (rat_int(n as i64), self.gf_deviation(a, n)));
        Ok(PSeries::from_terms(terms, Some(&rat_int(order as i64))))
    }

    /// M-dissection component of [`Self::dc_gf_series`].
    pub fn dc_gf_series_k(&self, a: i64, k: usize, order: usize) -> Result<PSeries> {
        self.dissected(k, order, |n| self.gf_deviation(a, n))
    }

    /// `D(a, M) = sum (N(a, M, n) - p(n)/M) q^n`, known below `q^order`.
    pub fn d_series(&self, a: i64, order: usize) -> Result<PSeries> {
        self.d_series_k_with(Stat::N, a, 0, order, 1)
    }

    /// k-th M-dissection component of `D(a, M)`.
    pub fn d_series_k(&self, a: i64, k: usize, order: usize) -> Result<PSeries> {
        self.d_series_k_with(Stat::N, a, k, order, self.modulus)
    }

    /// Crank analogue of [`Self::d_series`].
    pub fn dc_series(&self, a: i64, order: usize) -> Result<PSeries> {
        self.d_series_k_with(Stat::M, a, 0, order, 1)
    }

    pub fn dc_series_k(&self, a: i64, k: usize, order: usize) -> Result<PSeries> {
        self.d_series_k_with(Stat::M, a, k, order, self.modulus)
    }

    fn d_series_k_with(
        &self,
        stat: Stat,
        a: i64,
        k: usize,
        order: usize,
        step: usize,
    ) -> Result<PSeries> {
        if step == 1 {
            if order == 0 {
                return Ok(PSeries::zero_to(&Rat::zero()));
            }
            self.check_len(order - 1)?;
            let terms = (0..order).map(|n| (rat_int(n as i64), self.deviation(stat, a, n)));
            return Ok(PSeries::from_terms(terms, Some(&rat_int(order as i64))));
        }
        self.dissected(k, order, |n| self.deviation(stat, a, n))
    }

    fn diff(&self, stat: Stat, s: i64, n: usize) -> Rat {
        let m = self.modulus as i64;
        Rat::from_integer(self.get(stat, s, n) - self.get(stat, m - s, n))
    }

    /// `sum (NT(s, p, n) - NT(p - s, p, n)) q^n`.
    pub fn nt_diff_series(&self, s: i64, order: usize) -> Result<PSeries> {
        self.diff_series(Stat::NT, s, None, order)
    }

    pub fn nt_diff_k(&self, s: i64, k: usize, order: usize) -> Result<PSeries> {
        self.diff_series(Stat::NT, s, Some(k), order)
    }

    /// `sum (M_w(s, p, n) - M_w(p - s, p, n)) q^n`.
    pub fn mw_diff_series(&self, s: i64, order: usize) -> Result<PSeries> {
        self.diff_series(Stat::MW, s, None, order)
    }

    pub fn mw_diff_k(&self, s: i64, k: usize, order: usize) -> Result<PSeries> {
        self.diff_series(Stat::MW, s, Some(k), order)
    }

    fn diff_series(&self, stat: Stat, s: i64, k: Option<usize>, order: usize) -> Result<PSeries> {
        match k {
            Some(k) => self.dissected(k, order, |n| self.diff(stat, s, n)),
            None => {
                if order == 0 {
                    return Ok(PSeries::zero_to(&Rat::zero()));
                }
                self.check_len(order - 1)?;
                let terms = (0..order).map(|n| (rat_int(n as i64), self.diff(stat, s, n)));
                Ok(PSeries::from_terms(terms, Some(&rat_int(order as i64))))
            }
        }
    }
}

/// Ascending-composition generator (accel_asc); calls `f` with each
/// partition of `n >= 1` as a nondecreasing slice.
fn for_each_partition<F: FnMut(&[u32])>(n: usize, mut f: F) {
    let mut a = vec![0u32; n + 1];
    let mut k = 1usize;
    let mut y = n as u32 - 1;
    while k != 0 {
        let mut x = a[k - 1] + 1;
        k -= 1;
        while 2 * x <= y {
            a[k] = x;
            y -= x;
            k += 1;
        }
        let l = k + 1;
        while x <= y {
            a[k] = x;
            a[l] = y;
            f(&a[..k + 2]);
            x += 1;
            y -= 1;
        }
        a[k] = x + y;
        y = x + y - 1;
        f(&a[..k + 1]);
    }
}

fn enumerate(m: usize, n_max: usize) -> [Vec<Vec<BigInt>>; 4] {
    let rows: Vec<[Vec<i64>; 4]> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut c: [Vec<i64>; 4] = std::array::from_fn(|_| vec![0i64; m]);
            if n == 0 {
                c[Stat::N.index()][0] = 1;
                c[Stat::M.index()][0] = 1;
                return c;
            }
            for_each_partition(n, |parts| {
                // parts is nondecreasing
                let len = parts.len() as i64;
                let largest = *parts.last().unwrap() as i64;
                let ones = parts.iter().take_while(|&&p| p == 1).count() as i64;
                let r = (largest - len).rem_euclid(m as i64) as usize;
                let cr = if ones == 0 {
                    largest
                } else {
                    let bigger = parts.len() - parts.partition_point(|&p| (p as i64) <= ones);
                    bigger as i64 - ones
                };
                let cr = cr.rem_euclid(m as i64) as usize;
                c[Stat::N.index()][r] += 1;
                c[Stat::NT.index()][r] += len;
                c[Stat::M.index()][cr] += 1;
                c[Stat::MW.index()][cr] += ones;
            });
            c
        })
        .collect();
    std::array::from_fn(|s| {
        rows.iter()
            .map(|row| row[s].iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    })
}

/// Convenience for tests and reports.
pub fn to_i64(b: &BigInt) -> i64 {
    b.to_i64().expect("count exceeds i64")
}
