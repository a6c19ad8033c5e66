use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::parts::PartKind;
use crate::error::{Error, Result};
use crate::exact::{fmt_rat, rat_int, Rat};
use crate::modular::{eta_div_ledger, poly_cusp_bounds, s_p, valence_bound};
use crate::qseries::{EtaSpec, PSeries};

/// `P = J_{p,1}^2 / (q J_p^5)`.
pub fn prefactor_p(p: i64) -> EtaSpec {
    EtaSpec::one().jka(p, 1, 2).j(p, -5).qpow(rat_int(-1))
}

/// `G_p = (q^{(p-1)/2}, q^{(p+1)/2}; q^p) / (q^{(p-3)/2}, q^{(p+3)/2}; q^p)`.
pub fn g_p(p: i64) -> EtaSpec {
    EtaSpec::one()
        .jka(p, (p - 1) / 2, 1)
        .jka(p, (p - 3) / 2, -1)
}

/// `P * G_p^{k + s_p + 1}`, the factor making the part modular on `Gamma_1(p)`.
pub fn modular_prefactor(p: i64, k: i64) -> EtaSpec {
    prefactor_p(p).mul(&g_p(p).pow(k + s_p(p) + 1))
}

/// The Hauptmodul-like eta quotient used for the polynomial representations:
/// `q J_{5,1}^5 / J_{5,2}^5` at p = 5 and `q J_{7,1}^3 / (J_{7,2}^2 J_{7,3})` at p = 7.
pub fn hauptmodul(p: i64) -> Result<EtaSpec> {
    match p {
        5 => Ok(EtaSpec::one().qpow(rat_int(1)).jka(5, 1, 5).jka(5, 2, -5)),
        7 => Ok(EtaSpec::one()
            .qpow(rat_int(1))
            .jka(7, 1, 3)
            .jka(7, 2, -2)
            .jka(7, 3, -1)),
        _ => Err(Error::Domain(format!("no t-function stored for p = {p}"))),
    }
}

/// Multiplies a part by its modularizing prefactor.
pub fn modularize(f: &PSeries, p: i64, k: i64) -> Result<PSeries> {
    let order = f
        .order()
        .ok_or_else(|| Error::Domain("modularize needs a truncated series".into()))?;
    let spec = modular_prefactor(p, k);
    let lead = spec.leading_exponent()?;
    let val = f.valuation().unwrap_or_else(|| order.clone());
    let pf = spec.expand(&(&order - &val + &lead))?;
    Ok(f.mul(&pf))
}

/// Coefficients `c_j` (`lo <= j <= hi`) with `f = sum c_j t^j` through `q^{check}`.
///
/// `t = q + O(q^2)` makes the system unitriangular, so the coefficients are
/// peeled off from the lowest power upward.
pub fn t_poly_fit(
    f: &PSeries,
    p: i64,
    lo: i64,
    hi: i64,
    check: &Rat,
) -> Result<BTreeMap<i64, Rat>> {
    let t = hauptmodul(p)?;
    let order = check + rat_int(1);
    let known = f.order().unwrap_or_else(|| order.clone());
    if known < order {
        return Err(Error::TruncationEmpty);
    }
    let mut residual = f.truncate(&order);
    let mut out = BTreeMap::new();
    if let Some(v) = residual.valuation() {
        if v < rat_int(lo) {
            return Err(Error::FitFailed {
                exponent: fmt_rat(&v),
            });
        }
    }
    for j in lo..=hi {
        let c = residual.coeff(&rat_int(j))?;
        if c.is_zero() {
            continue;
        }
        let tj = t.pow(j).expand(&order)?;
        residual = residual.sub(&tj.scale_rat(&c));
        out.insert(j, c);
    }
    match residual.valuation() {
        Some(e) => Err(Error::FitFailed {
            exponent: fmt_rat(&e),
        }),
        None => Ok(out),
    }
}

/// `sum_j c_j t^j` known below `order`.
pub fn t_poly_expand(p: i64, poly: &BTreeMap<i64, Rat>, order: &Rat) -> Result<PSeries> {
    let t = hauptmodul(p)?;
    let mut acc = PSeries::zero_to(order);
    for (&j, c) in poly {
        acc = acc.add(&t.pow(j).expand(order)?.scale_rat(c));
    }
    Ok(acc)
}

/// Number of leading coefficients that decide an identity `P G^e X_p(s,k) = poly(t)`:
/// the valence bound with cusp bounds taken from the t-exponent range.
pub fn check_bound(p: i64, k: i64, lo: i64, hi: i64) -> Result<Rat> {
    let ledger = eta_div_ledger(&hauptmodul(p)?, p)?;
    let mut e = poly_cusp_bounds(&ledger, lo.min(0), hi.max(0));
    // the cusp at infinity is where the coefficients are compared
    e.retain(|c, _| !(c.c == p && c.a == 1));
    valence_bound(p, k, &e)
}

/// One stored representation `P G^{k+s_p+1} X_p(s,k) = sum c_j t^j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub p: i64,
    pub s: i64,
    pub k: i64,
    pub statistic: PartKind,
    /// `t`-exponent to coefficient, coefficients as `a/b` strings.
    #[serde(with = "poly_serde")]
    pub rhs_poly: BTreeMap<i64, Rat>,
}

impl IdentityRecord {
    pub fn label(&self) -> String {
        format!("{}{}({},{})", self.statistic.name(), self.p, self.s, self.k)
    }

    pub fn exponent_range(&self) -> (i64, i64) {
        let lo = self.rhs_poly.keys().next().copied().unwrap_or(0);
        let hi = self.rhs_poly.keys().last().copied().unwrap_or(0);
        (lo, hi)
    }

    pub fn rhs_prefactor(&self) -> EtaSpec {
        modular_prefactor(self.p, self.k)
    }

    /// The coefficient bound for this row, never less than the bound for the
    /// shipped exponent shape `[-2, 4]`.
    pub fn check_bound(&self) -> Result<Rat> {
        let (lo, hi) = self.exponent_range();
        check_bound(self.p, self.k, lo.min(-2), hi.max(4))
    }
}

mod poly_serde {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact::{fmt_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(m: &BTreeMap<i64, Rat>, s: S) -> Result<S::Ok, S::Error> {
        let v: BTreeMap<String, String> =
            m.iter().map(|(k, c)| (k.to_string(), fmt_rat(c))).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, Rat>, D::Error> {
        let v = BTreeMap::<String, String>::deserialize(d)?;
        v.into_iter()
            .map(|(k, c)| {
                let k = k.parse::<i64>().map_err(serde::de::Error::custom)?;
                let c = parse_rat(&c).map_err(serde::de::Error::custom)?;
                Ok((k, c))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::theorems::{PartEngine, Path};

    #[test]
    fn bounds_match_worked_estimates() {
        for k in 0..5 {
            assert!(check_bound(5, k, -2, 0).unwrap() <= rat_int(7));
        }
        for k in 0..7 {
            assert!(check_bound(7, k, -2, 4).unwrap() <= rat(101, 4));
        }
    }

    #[test]
    fn zero_fits_to_empty() {
        let z = PSeries::zero_to(&rat_int(9));
        assert!(t_poly_fit(&z, 5, -2, 4, &rat_int(7)).unwrap().is_empty());
    }

    #[test]
    fn five_rows() {
        let eng = PartEngine::new(5, 10).unwrap();
        let f = modularize(
            &eng.part(PartKind::NT, 1, 1, Path::Combinatorial).unwrap(),
            5,
            1,
        )
        .unwrap();
        let fit = t_poly_fit(&f, 5, -2, 4, &rat_int(7)).unwrap();
        assert_eq!(fit, BTreeMap::from([(-1, rat(-3, 10)), (0, rat(-11, 10))]));
        let f = modularize(
            &eng.part(PartKind::NT, 2, 4, Path::Combinatorial).unwrap(),
            5,
            4,
        )
        .unwrap();
        let fit = t_poly_fit(&f, 5, -2, 4, &rat_int(7)).unwrap();
        assert_eq!(
            fit,
            BTreeMap::from([(-2, rat(5, 12)), (-1, rat(1, 2)), (0, rat(5, 12))])
        );
        let f = modularize(
            &eng.part(PartKind::MW, 2, 4, Path::Combinatorial).unwrap(),
            5,
            4,
        )
        .unwrap();
        let fit = t_poly_fit(&f, 5, -2, 4, &rat_int(7)).unwrap();
        assert_eq!(fit, BTreeMap::from([(-1, rat_int(-2))]));
    }

    #[test]
    fn record_round_trip() {
        let r = IdentityRecord {
            p: 5,
            s: 1,
            k: 0,
            statistic: PartKind::NT,
            rhs_poly: BTreeMap::from([(-1, rat(-3, 10)), (0, rat(-1, 10))]),
        };
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<IdentityRecord>(&js).unwrap(), r);
        assert_eq!(r.label(), "N5(1,0)");
    }
}
