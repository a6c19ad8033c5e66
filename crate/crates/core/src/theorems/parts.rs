use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::cases::{case_select, epsilon_p, script_l, shifted_lp, CaseData};
use crate::appell::{fps_crank_series, fps_series};
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, Rat};
use crate::modular::upk;
use crate::partitions::{Oracle, StatTable, ENUMERATION_LIMIT};
use crate::qseries::PSeries;

/// Which difference statistic the part belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartKind {
    /// `N_p(s, k)`, from the number-of-parts difference.
    NT,
    /// `M_p(s, k)`, from the number-of-ones difference.
    #[serde(rename = "Mw")]
    MW,
}

impl PartKind {
    pub fn name(self) -> &'static str {
        match self {
            PartKind::NT => "N",
            PartKind::MW => "M",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Path {
    /// Partition counts minus the rank/crank deviations and the `L_p` term.
    Combinatorial,
    /// `q^{-k/p} U_{p,k}` of the Appell-side generating function.
    Modular,
}

impl std::str::FromStr for Path {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "combinatorial" => Ok(Path::Combinatorial),
            "modular" => Ok(Path::Modular),
            _ => Err(Error::Parse(format!("unknown path '{s}'"))),
        }
    }
}

/// Shared state for computing `N_p(s,k)` / `M_p(s,k)` at one prime to a fixed
/// number of dissected terms: the count table and the undissected generating
/// functions are built once.
pub struct PartEngine {
    p: i64,
    terms: usize,
    table: Arc<StatTable>,
    fps: Mutex<HashMap<(PartKind, i64), Arc<PSeries>>>,
}

impl PartEngine {
    /// Parts known for `q^0 .. q^{terms-1}` (plus any negative exponents).
    pub fn new(p: i64, terms: usize) -> Result<Self> {
        let n_max = Self::table_size(p, terms);
        let oracle = if n_max <= ENUMERATION_LIMIT {
            Oracle::Enumeration
        } else {
            Oracle::GfDp
        };
        Self::with_oracle(p, terms, oracle)
    }

    /// Largest `n` whose counts the engine needs.
    pub fn table_size(p: i64, terms: usize) -> usize {
        p as usize * terms + p as usize
    }

    pub fn with_oracle(p: i64, terms: usize, oracle: Oracle) -> Result<Self> {
        case_select(p, 1, 0)?;
        let n_max = Self::table_size(p, terms);
        let table = StatTable::build(p as u32, n_max, oracle)?;
        Ok(PartEngine {
            p,
            terms,
            table: Arc::new(table),
            fps: Mutex::new(HashMap::new()),
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn table(&self) -> &StatTable {
        &self.table
    }

    fn order(&self) -> Rat {
        rat_int(self.terms as i64)
    }

    fn generating_function(&self, kind: PartKind, s: i64) -> Result<Arc<PSeries>> {
        if let Some(f) = self.fps.lock().unwrap().get(&(kind, s)) {
            return Ok(f.clone());
        }
        let order = rat_int(self.p * self.terms as i64);
        let f = Arc::new(match kind {
            PartKind::NT => fps_series(self.p, s, &order)?,
            PartKind::MW => fps_crank_series(self.p, s, &order)?,
        });
        self.fps.lock().unwrap().insert((kind, s), f.clone());
        Ok(f)
    }

    /// `sum_r (p - 2r)/2p D(r - s, p, k)` (rank or crank deviations).
    pub fn deviation_sum(&self, kind: PartKind, s: i64, k: i64) -> Result<PSeries> {
        let p = self.p;
        let mut acc = PSeries::zero_to(&self.order());
        for r in 1..p {
            let d = match kind {
                PartKind::NT => self.table.d_series_k(r - s, k as usize, self.terms)?,
                PartKind::MW => self.table.dc_gf_series_k(r - s, k as usize, self.terms)?,
            };
            acc = acc.add(&d.scale_rat(&rat(p - 2 * r, 2 * p)));
        }
        Ok(acc)
    }

    /// `sum_n (X(s, p, pn + k) - X(p - s, p, pn + k)) q^n` for the NT or M_w counts.
    pub fn difference(&self, kind: PartKind, s: i64, k: i64) -> Result<PSeries> {
        match kind {
            PartKind::NT => self.table.nt_diff_k(s, k as usize, self.terms),
            PartKind::MW => self.table.mw_diff_k(s, k as usize, self.terms),
        }
    }

    /// The `L_p` correction term `sign * q^{c(k,v)} L_p(v)` (zero for M_w and
    /// in the third case). On the modular path it is assembled from the
    /// Appell-side function plus `eps_p(v)`.
    pub fn correction(&self, kind: PartKind, cd: &CaseData, path: Path) -> Result<PSeries> {
        let order = self.order();
        let (Some(v), PartKind::NT) = (cd.v, kind) else {
            return Ok(PSeries::zero_to(&order));
        };
        let shift = rat(-cd.k, self.p);
        let inner = &order - &shift;
        let base = match path {
            Path::Combinatorial => shifted_lp(self.p, v, &inner)?,
            Path::Modular => script_l(self.p, v, &inner)?.add(&epsilon_p(self.p, v)),
        };
        Ok(base.shift(&shift).scale_rat(&rat_int(cd.correction_sign())))
    }

    /// `N_p(s,k)` or `M_p(s,k)`, known below `q^terms`.
    pub fn part(&self, kind: PartKind, s: i64, k: i64, path: Path) -> Result<PSeries> {
        let cd = case_select(self.p, s, k)?;
        let order = self.order();
        let corr = self.correction(kind, &cd, path)?;
        let main = match path {
            Path::Combinatorial => self
                .difference(kind, s, k)?
                .sub(&self.deviation_sum(kind, s, k)?),
            Path::Modular => {
                let f = self.generating_function(kind, s)?;
                upk(&f, self.p, k)?.shift(&rat(-k, self.p))
            }
        };
        let out = main.sub(&corr).truncate(&order);
        settle(out, &order)
    }
}

/// Re-truncates an integral-exponent series to exactly `order`.
fn settle(s: PSeries, order: &Rat) -> Result<PSeries> {
    if s.iter().any(|(e, _)| !e.is_integer()) {
        return Err(Error::ExponentDomain(
            "part has non-integral exponents".into(),
        ));
    }
    let known = s.order().ok_or(Error::TruncationEmpty)?;
    // every integer below `order` must be below the known range
    if &known <= &(order - rat_int(1)) {
        return Err(Error::TruncationEmpty);
    }
    Ok(PSeries::from_terms(
        s.iter().map(|(e, c)| (e, c.clone())),
        Some(order),
    ))
}
