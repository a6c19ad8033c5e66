use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::appell::{appell_series, appell_series_skipping, lp_series, AppellPart};
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, Rat};
use crate::modular::s_p;
use crate::qseries::{e2_expand, pochhammer, PSeries};

/// Which congruence of the three-way split holds for `(p, s, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// `6k + s^2 - s = 0 (mod p)`: the correction uses `v_{s-1}` with sign `+chi12`.
    Minus,
    /// `6k + s^2 + s = 0 (mod p)`: the correction uses `v_s` with sign `-chi12`.
    Plus,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseData {
    pub p: i64,
    pub s: i64,
    pub k: i64,
    pub case: Case,
    /// `v_{s-1}` or `v_s`; absent in the `Neither` case.
    pub v: Option<i64>,
    pub chi12: i64,
    /// `c(k, v) = 3v(p-v)/2p - (k + s_p)/p`.
    #[serde(with = "crate::exact::serde_rat_opt")]
    pub c_exponent: Option<Rat>,
}

impl CaseData {
    /// Sign in front of `q^{c} L_p(v)` in the dissection formula.
    pub fn correction_sign(&self) -> i64 {
        match self.case {
            Case::Minus => self.chi12,
            Case::Plus => -self.chi12,
            Case::Neither => 0,
        }
    }
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `0 <= v_m < p` with `2m + 6 v_m + 1 = 0 (mod p)`.
pub fn v_index(p: i64, m: i64) -> i64 {
    (0..p)
        .find(|v| (2 * m + 6 * v + 1).rem_euclid(p) == 0)
        .expect("p prime to 6")
}

/// `chi12(p) = 1` for `p = 1, 11 (mod 12)`, else `-1`.
pub fn chi12(p: i64) -> i64 {
    if matches!(p.rem_euclid(12), 1 | 11) {
        1
    } else {
        -1
    }
}

pub fn c_exponent(p: i64, k: i64, v: i64) -> Rat {
    rat(3 * v * (p - v), 2 * p) - rat(k + s_p(p), p)
}

pub fn case_select(p: i64, s: i64, k: i64) -> Result<CaseData> {
    if p < 5 || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not a prime >= 5")));
    }
    if s <= 0 || 2 * s >= p || !(0..p).contains(&k) {
        return Err(Error::Domain(format!(
            "need 0 < s < p/2 and 0 <= k < p, got s={s}, k={k}"
        )));
    }
    let minus = (6 * k + s * s - s).rem_euclid(p) == 0;
    let plus = (6 * k + s * s + s).rem_euclid(p) == 0;
    let (case, v) = match (minus, plus) {
        (true, false) => (Case::Minus, Some(v_index(p, s - 1))),
        (false, true) => (Case::Plus, Some(v_index(p, s))),
        (false, false) => (Case::Neither, None),
        (true, true) => {
            return Err(Error::Domain(format!(
                "both congruences hold at p={p}, s={s}, k={k}"
            )))
        }
    };
    Ok(CaseData {
        p,
        s,
        k,
        case,
        v,
        chi12: chi12(p),
        c_exponent: v.map(|v| c_exponent(p, k, v)),
    })
}

/// `eps_p(v)`: the constant separating the Appell-side `L`-function from the
/// shifted `L_p(v)` series. Exact (possibly zero) monomial.
pub fn epsilon_p(p: i64, v: i64) -> PSeries {
    let sign = if v % 2 == 0 { 1 } else { -1 };
    let sp = s_p(p);
    if 6 * v < p {
        PSeries::monomial(
            rat(sign * (p - 6 * v), 2),
            &rat(v * (p - 3 * v) - 2 * sp, 2 * p),
        )
    } else if 6 * v > 5 * p {
        PSeries::monomial(
            rat(sign * (5 * p - 6 * v), 2),
            &rat((p - v) * (3 * v - 2 * p) - 2 * sp, 2 * p),
        )
    } else {
        PSeries::zero()
    }
}

/// Exponent `(3v(p-v) - 2 s_p)/2p` with `q^{that} L_p(v) = script_l(p, v) + eps_p(v)`.
pub fn l_shift(p: i64, v: i64) -> Rat {
    rat(3 * v * (p - v) - 2 * s_p(p), 2 * p)
}

/// The Appell-side function
/// `(-1)^v q^{(-3v^2 - 2 s_p)/2p} / (q^p;q^p) * (p dA_3(u + v tau; p tau) - 3v A_3(v tau; p tau))`
/// for `0 < v < p`, and for `v = 0`
/// `p q^{-s_p/p} / (q^p;q^p) * (dA_3(u; p tau) without its n = 0 pole term - E_2(p tau)/8 - 11/24)`.
pub fn script_l(p: i64, v: i64, order: &Rat) -> Result<PSeries> {
    if p < 5 || !is_prime(p) || !(0..p).contains(&v) {
        return Err(Error::Domain(format!(
            "need prime p >= 5 and 0 <= v < p, got p={p}, v={v}"
        )));
    }
    let sp = s_p(p);
    let zero = Rat::zero();
    let pp = rat_int(p);
    if v == 0 {
        let lead = rat(-sp, p);
        let inner = &(order - &lead);
        let d = appell_series_skipping(
            3,
            (&zero, &zero),
            (&zero, &zero),
            p,
            inner,
            AppellPart::DerivU,
            Some(0),
        )?
        .collapse()?;
        let e2 = e2_expand(p, inner).scale_rat(&rat(-1, 8));
        let body = d
            .add(&e2)
            .add(&PSeries::constant(rat(-11, 24)).truncate(inner));
        let inv = pochhammer(&pp, &pp, inner)?.inv_to(Some(inner))?;
        return Ok(body.mul(&inv).scale_rat(&pp).shift(&lead));
    }
    let lead = rat(-3 * v * v - 2 * sp, 2 * p);
    let inner = &(order - &lead);
    let vr = rat_int(v);
    let d = appell_series(
        3,
        (&vr, &zero),
        (&zero, &zero),
        p,
        inner,
        AppellPart::DerivU,
    )?
    .collapse()?;
    let a =
        appell_series(3, (&vr, &zero), (&zero, &zero), p, inner, AppellPart::Value)?.collapse()?;
    let body = d.scale_rat(&pp).sub(&a.scale_rat(&rat_int(3 * v)));
    let inv = pochhammer(&pp, &pp, inner)?.inv_to(Some(inner))?;
    let sign = if v % 2 == 0 { Rat::one() } else { -Rat::one() };
    Ok(body.mul(&inv).scale_rat(&sign).shift(&lead))
}

/// `q^{l_shift} L_p(v)` from the explicit series definition.
pub fn shifted_lp(p: i64, v: i64, order: &Rat) -> Result<PSeries> {
    let sh = l_shift(p, v);
    Ok(lp_series(p, v, &(order - &sh))?.shift(&sh))
}
