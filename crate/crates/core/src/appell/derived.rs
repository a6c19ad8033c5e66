//! `L_p(v)` and the Appell-side generating functions of the NT / M_w differences.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::lerch::d_appell_at;
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, Cyc, Rat};
use crate::qseries::{pochhammer, PSeries};

fn check_prime(p: i64) -> Result<()> {
    if p < 5 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(Error::Domain(format!("{p} is not a prime >= 5")));
    }
    Ok(())
}

/// `(q^p; q^p)_inf^{-1}` known below `q^order`.
fn inv_euler(p: i64, order: &Rat) -> Result<PSeries> {
    let pp = rat_int(p);
    pochhammer(&pp, &pp, order)?.inv_to(Some(order))
}

/// `sum_n (-1)^n q^{3pn(n+1)/2} / (1 - q^{pn+v})^k` for k in {1, 2}, skipping n with pn+v = 0.
fn lerch_pole_sum(p: i64, v: i64, power: u32, order: &Rat) -> PSeries {
    let base = |n: i64| rat_int(3 * p * n * (n + 1) / 2);
    let mut terms = Vec::new();
    for n in super::lerch::quadratic_range(&rat(-1, 2), order, base) {
        let e = p * n + v;
        if e == 0 {
            continue;
        }
        let b = base(n);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        // e > 0: sum_{m >= 0} binom(m + k - 1, k - 1) q^{e m}
        // e < 0, f = q^{-e}: 1/(1 - 1/f) = -sum_{m >= 1} f^m, 1/(1 - 1/f)^2 = sum_{m >= 2} (m - 1) f^m
        let step = e.abs();
        let mut m = match (e > 0, power) {
            (true, _) => 0i64,
            (false, 1) => 1,
            (false, _) => 2,
        };
        loop {
            let ex = &b + rat_int(step * m);
            if &ex >= order {
                break;
            }
            let w = match (e > 0, power) {
                (true, 1) => 1,
                (true, _) => m + 1,
                (false, 1) => -1,
                (false, _) => m - 1,
            };
            terms.push((ex, rat_int(sign * w)));
            m += 1;
        }
    }
    PSeries::from_terms(terms, Some(order))
}

/// Polar part `l_p(v)` of `L_p(v)`.
pub fn lp_polar(p: i64, v: i64) -> PSeries {
    let sign = if v % 2 == 0 { 1 } else { -1 };
    if 6 * v < p && v > 0 {
        PSeries::monomial(rat(sign * (p - 6 * v), 2), &rat_int(-v))
    } else if 6 * v > 5 * p && v < p {
        PSeries::monomial(rat(sign * (5 * p - 6 * v), 2), &rat_int(v - p))
    } else {
        PSeries::zero()
    }
}

/// `L_p(v; q)` known below `q^order`.
///
/// For `0 < v < p`:
/// `l_p(v) + (-1)^v/(q^p;q^p) (p sum (-1)^n q^{3pn(n+1)/2}/(1-q^{pn+v})^2
///   + (p/2 - 3v) sum (-1)^n q^{3pn(n+1)/2}/(1-q^{pn+v}))`.
///
/// For `v = 0`:
/// `p/(q^p;q^p) (sum_{n != 0} (-1)^n q^{3pn(n+1)/2}/(1-q^{pn})^2 + 3 sum n q^{pn}/(1-q^{pn}) - 1/12)`.
pub fn lp_series(p: i64, v: i64, order: &Rat) -> Result<PSeries> {
    check_prime(p)?;
    if !(0..p).contains(&v) {
        return Err(Error::Domain(format!("v = {v} outside 0..{p}")));
    }
    let inv = inv_euler(p, order)?;
    if v == 0 {
        let mut bracket = lerch_pole_sum(p, 0, 2, order);
        let mut div = Vec::new();
        let mut n = 1i64;
        while rat_int(p * n) < *order {
            let sigma: i64 = (1..=n).filter(|d| n % d == 0).sum();
            div.push((rat_int(p * n), rat_int(3 * sigma)));
            n += 1;
        }
        bracket = bracket.add(&PSeries::from_terms(div, Some(order)));
        bracket = bracket.add(&PSeries::constant(rat(-1, 12)).truncate(order));
        return Ok(bracket.mul(&inv).scale_rat(&rat_int(p)));
    }
    let sign = rat_int(if v % 2 == 0 { 1 } else { -1 });
    let s2 = lerch_pole_sum(p, v, 2, order).scale_rat(&rat_int(p));
    let s1 = lerch_pole_sum(p, v, 1, order).scale_rat(&(rat(p, 2) - rat_int(3 * v)));
    let main = s2.add(&s1).mul(&inv).scale_rat(&sign);
    Ok(main.add(&lp_polar(p, v).truncate(order)))
}

/// `sum_j zeta_p^{j(s-1/2)} (1 - zeta_p^j)/p * (1/2 pi i) d/du A_l(u - j/p)` over `j = 1..p-1`,
/// collapsed to rational coefficients.
fn appell_j_sum(level: u32, p: i64, s: i64, order: &Rat) -> Result<PSeries> {
    let parts: Vec<Result<PSeries<Cyc>>> = (1..p)
        .into_par_iter()
        .map(|j| {
            let c = &Cyc::zeta_pow(2 * p as u32, j * (2 * s - 1))
                * &(&Cyc::one() - &Cyc::zeta_pow(p as u32, j));
            let d = d_appell_at(level, &rat(j, p), order)?;
            Ok(d.scale(&c.scale(&rat(1, p))))
        })
        .collect();
    let mut acc = PSeries::<Cyc>::zero_to(order);
    for part in parts {
        acc = acc.add(&part?);
    }
    acc.collapse()
}

fn check_ps(p: i64, s: i64) -> Result<()> {
    check_prime(p)?;
    if s <= 0 || 2 * s >= p {
        return Err(Error::Domain(format!("s = {s} outside 0 < s < {p}/2")));
    }
    Ok(())
}

/// `F_{p,s} = delta_{s,1}/2 + sum_j zeta_p^{j(s-1/2)} (1-zeta_p^j) / (2 p pi i (q)_inf)
///   d/du A_3(u - j/p; tau)|_{u=0}`.
pub fn fps_series(p: i64, s: i64, order: &Rat) -> Result<PSeries> {
    check_ps(p, s)?;
    let sum = appell_j_sum(3, p, s, order)?;
    let euler = pochhammer(&Rat::one(), &Rat::one(), order)?;
    let mut f = sum.div(&euler)?;
    if s == 1 {
        f = f.add(&PSeries::constant(rat(1, 2)).truncate(order));
    }
    Ok(f)
}

/// Crank analogue of [`fps_series`]: the same j-sum with `A_1` and no constant.
pub fn fps_crank_series(p: i64, s: i64, order: &Rat) -> Result<PSeries> {
    check_ps(p, s)?;
    let sum = appell_j_sum(1, p, s, order)?;
    let euler = pochhammer(&Rat::one(), &Rat::one(), order)?;
    sum.div(&euler)
}

/// `sum_{j=1}^{p-1} zeta_p^{j(s-1)} (1 - zeta_p^j)`.
pub fn aux_delta_sum(p: i64, s: i64) -> Cyc {
    let mut acc = Cyc::zero();
    for j in 1..p {
        let t =
            &Cyc::zeta_pow(p as u32, j * (s - 1)) * &(&Cyc::one() - &Cyc::zeta_pow(p as u32, j));
        acc = &acc + &t;
    }
    acc
}

/// `g_k = sum_{j=1}^{p-1} zeta_p^{jk} / (1 - zeta_p^j)`.
pub fn aux_g(p: i64, k: i64) -> Result<Cyc> {
    let mut acc = Cyc::zero();
    for j in 1..p {
        let den = (&Cyc::one() - &Cyc::zeta_pow(p as u32, j)).inv()?;
        acc = &acc + &(&Cyc::zeta_pow(p as u32, j * k) * &den);
    }
    Ok(acc)
}
