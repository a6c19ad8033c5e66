use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, Cyc, Rat};
use crate::qseries::PSeries;

/// Which quantity [`appell_series`] expands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AppellPart {
    Value,
    /// `(1/2 pi i) d/du` at the given point.
    DerivU,
}

fn ceil_i64(r: &Rat) -> i64 {
    r.ceil()
        .to_integer()
        .try_into()
        .expect("index out of range")
}

/// Integers `n` with `f(n) < order`, for `f` a convex quadratic with vertex `center`.
pub(crate) fn quadratic_range<F: Fn(i64) -> Rat>(center: &Rat, order: &Rat, f: F) -> Vec<i64> {
    let mut out = Vec::new();
    let c = ceil_i64(center);
    let mut n = c;
    while &f(n) < order {
        out.push(n);
        n += 1;
    }
    let mut n = c - 1;
    while &f(n) < order {
        out.push(n);
        n -= 1;
    }
    out.sort_unstable();
    out
}

/// Expansion of `A_l(u, v; mult*tau)` or its u-derivative in powers of `q = e^{2 pi i tau}`,
/// with `u = alpha tau + beta` and `v = gamma tau + delta`:
///
/// `A_l(u, v; tau') = a^{l/2} sum_n (-1)^{l n} q'^{l n (n+1)/2} b^n / (1 - a q'^n)`.
///
/// Each geometric term carries a power `a^w`; the derivative multiplies it by `w`.
pub fn appell_series(
    level: u32,
    u: (&Rat, &Rat),
    v: (&Rat, &Rat),
    mult: i64,
    order: &Rat,
    part: AppellPart,
) -> Result<PSeries<Cyc>> {
    appell_series_skipping(level, u, v, mult, order, part, None)
}

/// [`appell_series`] with the `n = skip` summand left out (used to remove a pole).
pub fn appell_series_skipping(
    level: u32,
    u: (&Rat, &Rat),
    v: (&Rat, &Rat),
    mult: i64,
    order: &Rat,
    part: AppellPart,
    skip: Option<i64>,
) -> Result<PSeries<Cyc>> {
    if level == 0 || mult <= 0 {
        return Err(Error::Domain(
            "level and tau multiplier must be positive".into(),
        ));
    }
    let (alpha, beta) = u;
    let (gamma, delta) = v;
    let l = rat_int(level as i64);
    let lh = &l / rat_int(2);
    let mq = rat_int(mult);
    let deriv = part == AppellPart::DerivU;
    // exponent of the n-th summand before the geometric expansion
    let base = |n: i64| -> Rat {
        let nn = rat_int(n);
        &lh * alpha + &mq * &l * &nn * (&nn + Rat::one()) / rat_int(2) + gamma * &nn
    };
    let center = -(rat(1, 2) + gamma / (&mq * &l));
    let mut terms: Vec<(Rat, Cyc)> = Vec::new();
    for n in quadratic_range(&center, order, base) {
        if skip == Some(n) {
            continue;
        }
        let nn = rat_int(n);
        let e0 = base(n);
        // phase of a^{l/2} (-1)^{l n} b^n
        let ph0 = &lh * beta + &lh * &nn + delta * &nn;
        let step = alpha + &mq * &nn;
        if step.is_zero() {
            if beta.is_integer() {
                return Err(Error::DegeneratePole(format!(
                    "1 - a q^{n} vanishes at u = {alpha} tau + {beta}"
                )));
            }
            if &e0 >= order {
                continue;
            }
            let z = Cyc::root_of_unity(beta);
            let den = (&Cyc::one() - &z).inv()?;
            let c0 = Cyc::root_of_unity(&ph0);
            let c = if deriv {
                let t = &den.scale(&lh) + &(&z * &(&den * &den));
                &c0 * &t
            } else {
                &c0 * &den
            };
            terms.push((e0, c));
            continue;
        }
        // m runs over the powers a^m q'^{n m}: m >= 0 when the pole exponent is
        // positive, m <= -1 with an overall minus sign otherwise.
        let (mut m, dir, sign) = if step.is_positive() {
            (0i64, 1i64, 1i64)
        } else {
            (-1, -1, -1)
        };
        loop {
            let mm = rat_int(m);
            let e = &e0 + &step * &mm;
            if &e >= order {
                break;
            }
            let mut w = rat_int(sign);
            if deriv {
                w *= &lh + &mm;
            }
            if !w.is_zero() {
                let ph = &ph0 + beta * &mm;
                terms.push((e, Cyc::root_of_unity(&ph).scale(&w)));
            }
            m += dir;
        }
    }
    Ok(PSeries::from_terms(terms, Some(order)))
}

/// `A_l(u, v; mult*tau)`.
pub fn appell_a(
    level: u32,
    u: (&Rat, &Rat),
    v: (&Rat, &Rat),
    mult: i64,
    order: &Rat,
) -> Result<PSeries<Cyc>> {
    appell_series(level, u, v, mult, order, AppellPart::Value)
}

/// `(1/2 pi i) d/du A_l(u, v; mult*tau)`.
pub fn appell_du(
    level: u32,
    u: (&Rat, &Rat),
    v: (&Rat, &Rat),
    mult: i64,
    order: &Rat,
) -> Result<PSeries<Cyc>> {
    appell_series(level, u, v, mult, order, AppellPart::DerivU)
}

/// `(1/2 pi i) d/du A_l(u - x; tau)` at `u = 0`.
pub fn d_appell_at(level: u32, x: &Rat, order: &Rat) -> Result<PSeries<Cyc>> {
    let z = Rat::zero();
    appell_du(level, (&z, &-x), (&z, &z), 1, order)
}
