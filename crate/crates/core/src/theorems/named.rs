use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat_int, Rat};
use crate::modular::s_p;
use crate::partitions::{Oracle, Stat, StatTable, ENUMERATION_LIMIT};
use crate::qseries::{EtaSpec, PSeries};

/// `sum w * X(r, p, p n + k)` over `(X, r, w)` terms, as a function of `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Combination {
    pub label: String,
    pub p: i64,
    pub k: i64,
    pub terms: Vec<(Stat, i64, i64)>,
}

impl Combination {
    pub fn new(label: &str, p: i64, k: i64, terms: Vec<(Stat, i64, i64)>) -> Result<Self> {
        if p < 2 || !(0..p).contains(&k) {
            return Err(Error::Domain(format!(
                "need p >= 2 and 0 <= k < p, got p={p}, k={k}"
            )));
        }
        Ok(Combination {
            label: label.to_string(),
            p,
            k,
            terms,
        })
    }

    /// `sum_m m * X(m, p, .)` for `m = 1..p-1`.
    pub fn residue_weighted(label: &str, stat: Stat, p: i64, k: i64) -> Result<Self> {
        Self::new(label, p, k, (1..p).map(|m| (stat, m, m)).collect())
    }

    /// `sum_{m <= (p-1)/2} m (X(m, p, .) - X(p - m, p, .))`.
    pub fn antisymmetric(label: &str, stat: Stat, p: i64, k: i64) -> Result<Self> {
        let terms = (1..=(p - 1) / 2)
            .flat_map(|m| [(stat, m, m), (stat, p - m, -m)])
            .collect();
        Self::new(label, p, k, terms)
    }

    /// Largest `p n + k` needed to scan `n = 0..=n_max`.
    pub fn top(&self, n_max: usize) -> usize {
        self.p as usize * n_max + self.k as usize
    }

    pub fn eval(&self, table: &StatTable, n: usize) -> Result<BigInt> {
        if table.modulus() as i64 != self.p {
            return Err(Error::Domain(format!(
                "table is mod {}, combination is mod {}",
                table.modulus(),
                self.p
            )));
        }
        let m = self.p as usize * n + self.k as usize;
        if m > table.n_max() {
            return Err(Error::ResourceLimit(format!(
                "{} needs n = {m} > table limit {}",
                self.label,
                table.n_max()
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|&(st, r, w)| table.get(st, r, m) * BigInt::from(w))
            .sum())
    }
}

/// Values of a combination over `n = 0..=n_max` and the first `n` where it is
/// not divisible by `divisor` (`divisor = 0` asks for exact vanishing).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub label: String,
    pub divisor: i64,
    pub values: Vec<String>,
    pub witness: Option<usize>,
}

impl ScanOutcome {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

pub fn scan(
    table: &StatTable,
    comb: &Combination,
    n_max: usize,
    divisor: i64,
) -> Result<ScanOutcome> {
    let mut values = Vec::with_capacity(n_max + 1);
    let mut witness = None;
    for n in 0..=n_max {
        let v = comb.eval(table, n)?;
        let ok = if divisor == 0 {
            v.is_zero()
        } else {
            v.is_multiple_of(&BigInt::from(divisor))
        };
        if !ok && witness.is_none() {
            witness = Some(n);
        }
        values.push(v.to_string());
    }
    Ok(ScanOutcome {
        label: comb.label.clone(),
        divisor,
        values,
        witness,
    })
}

/// Builds a table large enough for `comb` at `n_max`.
pub fn table_for(comb: &Combination, n_max: usize) -> Result<StatTable> {
    let top = comb.top(n_max);
    let oracle = if top <= ENUMERATION_LIMIT {
        Oracle::Enumeration
    } else {
        Oracle::GfDp
    };
    StatTable::build(comb.p as u32, top, oracle)
}

/// `sum_m m NT(m, 5, 5n+1)` and `sum_m m NT(m, 5, 5n+4)`, both `0 (mod 5)`.
pub fn nt_residue_sums_five() -> Vec<Combination> {
    vec![
        Combination::residue_weighted("sum m NT(m,5,5n+1)", Stat::NT, 5, 1).unwrap(),
        Combination::residue_weighted("sum m NT(m,5,5n+4)", Stat::NT, 5, 4).unwrap(),
    ]
}

/// `NT(1,7,7n+5) - NT(6,7,7n+5) + 3 NT(2,7,7n+5) - 3 NT(5,7,7n+5)`.
pub fn seven_nt_combination() -> Combination {
    let terms = vec![
        (Stat::NT, 1, 1),
        (Stat::NT, 6, -1),
        (Stat::NT, 2, 3),
        (Stat::NT, 5, -3),
    ];
    Combination::new("NT(1)-NT(6)+3NT(2)-3NT(5) at 7n+5", 7, 5, terms).unwrap()
}

/// `NT(2,5,5n+1) - NT(3,5,5n+1) - M_w(2,5,5n+1) + M_w(3,5,5n+1)`, identically zero.
pub fn nt_mw_five() -> Combination {
    let terms = vec![
        (Stat::NT, 2, 1),
        (Stat::NT, 3, -1),
        (Stat::MW, 2, -1),
        (Stat::MW, 3, 1),
    ];
    Combination::new("NT(2)-NT(3)-Mw(2)+Mw(3) at 5n+1", 5, 1, terms).unwrap()
}

/// `sum_m m (M_w(m, p, p n - s_p) - M_w(p - m, p, p n - s_p))`, indexed from `n = 1`.
pub fn mw_antisymmetric_sum(p: i64) -> Result<Combination> {
    let k = (-s_p(p)).rem_euclid(p);
    Combination::antisymmetric(
        &format!("sum m (Mw(m)-Mw({p}-m)) at {p}n-{}", s_p(p)),
        Stat::MW,
        p,
        k,
    )
}

/// `sum_m m (M_w(m, 11, 11n+6) - M_w(11 - m, 11, 11n+6))`.
pub fn mw_eleven() -> Combination {
    Combination::antisymmetric("sum m (Mw(m)-Mw(11-m)) at 11n+6", Stat::MW, 11, 6).unwrap()
}

/// `t = q J_{7,1}^3 / (J_{7,2}^2 J_{7,3})`'s companion `J_{7,1} J_{7,3}^2 / J_{7,2}^3`, claimed to be `1 - t`.
pub fn one_minus_t_seven() -> EtaSpec {
    EtaSpec::one().jka(7, 1, 1).jka(7, 3, 2).jka(7, 2, -3)
}

/// `-7 (q^7;q^7)^e (q^3,q^4;q^7) / ((q,q^6;q^7)(q^2,q^5;q^7)^2)` without the `-7`.
/// The enumerated counts match `e = 3`.
pub fn seven_product(e: i64) -> EtaSpec {
    // (q^a, q^{7-a}; q^7) = J_{7,a} / J_7
    EtaSpec::one()
        .j(7, e + 2)
        .jka(7, 3, 1)
        .jka(7, 1, -1)
        .jka(7, 2, -2)
}

/// Both sides of the mod-7 identity and its pieces, known below `q^order`.
pub struct SevenIdentity {
    pub counts: PSeries,
    pub product: PSeries,
    pub t_form: PSeries,
    pub one_minus_t: PSeries,
    pub one_minus_t_quotient: PSeries,
}

impl SevenIdentity {
    pub fn compute(order: usize) -> Result<Self> {
        let o = rat_int(order as i64);
        let comb = seven_nt_combination();
        let table = table_for(&comb, order)?;
        let counts = table
            .nt_diff_k(1, 5, order)?
            .add(&table.nt_diff_k(2, 5, order)?.scale_rat(&rat_int(3)));
        let seven = rat_int(-7);
        let product = seven_product(3).expand(&o)?.scale_rat(&seven);
        let t = super::hauptmodul(7)?.expand(&o)?;
        let one_minus_t = PSeries::one().truncate(&o).sub(&t);
        let sq = one_minus_t.mul(&one_minus_t);
        let base = EtaSpec::one()
            .j(7, 5)
            .jka(7, 2, 10)
            .jka(7, 1, -5)
            .jka(7, 3, -7)
            .expand(&o)?;
        let t_form = base.mul(&sq.mul(&sq)).scale_rat(&seven);
        let one_minus_t_quotient = one_minus_t_seven().expand(&o)?;
        Ok(SevenIdentity {
            counts,
            product,
            t_form,
            one_minus_t,
            one_minus_t_quotient,
        })
    }

    /// First exponent where any of the claimed equalities fails.
    pub fn first_failure(&self) -> Option<Rat> {
        [
            self.counts.first_difference(&self.product, None),
            self.counts.first_difference(&self.t_form, None),
            self.one_minus_t
                .first_difference(&self.one_minus_t_quotient, None),
        ]
        .into_iter()
        .flatten()
        .min()
    }
}
