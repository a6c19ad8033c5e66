use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::special::sign_minus_e;
use crate::appell::MatSL2;
use crate::error::{Error, Result};
use crate::modular::chi_eta;

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Terms are dropped once their Gaussian factor is below `e^{-TAIL}`.
const TAIL: f64 = 46.0;
/// Distance to `Z tau + Z` below which `A_l` and `R` refuse to evaluate.
pub const POLE_GUARD: f64 = 1e-7;

/// A point `(u, tau)` with `Im tau > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CPoint {
    pub u: Complex64,
    pub tau: Complex64,
}

impl CPoint {
    pub fn new(u: Complex64, tau: Complex64) -> Result<Self> {
        check_tau(tau)?;
        Ok(CPoint { u, tau })
    }

    /// Distance from `u` to the lattice `Z tau + Z`, measured in the coordinates
    /// `u = s tau + r`.
    pub fn lattice_distance(&self) -> f64 {
        let s = self.u.im / self.tau.im;
        let r = self.u.re - s * self.tau.re;
        let ds = s - s.round();
        let dr = r - r.round();
        (ds * self.tau + dr).norm()
    }
}

fn check_tau(tau: Complex64) -> Result<()> {
    if !(tau.im > 0.0) {
        return Err(Error::Domain(format!("Im tau must be positive, got {tau}")));
    }
    Ok(())
}

/// Half-width of the window of `nu` outside which `e^{-pi y nu^2}` is below `e^{-TAIL}`.
pub fn gaussian_window(y: f64) -> f64 {
    (TAIL / (PI * y)).sqrt() + 1.0
}

fn half_integers(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let start = (lo - 0.5).floor() as i64;
    let end = (hi - 0.5).ceil() as i64;
    (start..=end).map(|k| k as f64 + 0.5)
}

/// `(-1)^{nu - 1/2}` for half-integral `nu`.
fn half_sign(nu: f64) -> f64 {
    if ((nu - 0.5).round() as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `q^e = e^{2 pi i e tau}`.
fn qpow(tau: Complex64, e: f64) -> Complex64 {
    (I * TAU * e * tau).exp()
}

/// `theta(z; tau) = sum_{nu in 1/2 + Z} e^{pi i nu^2 tau + 2 pi i nu (z + 1/2)}`.
pub fn eval_theta(z: Complex64, tau: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    let y = tau.im;
    let center = -z.im / y;
    let w = gaussian_window(y);
    Ok(half_integers(center - w, center + w)
        .map(|nu| (I * PI * nu * nu * tau + I * TAU * nu * (z + 0.5)).exp())
        .sum())
}

/// `R(u; tau) = sum_nu {sgn(nu) - E((nu + Im u/Im tau) sqrt(2 Im tau))}
/// (-1)^{nu-1/2} q^{-nu^2/2} e^{-2 pi i nu u}`.
///
/// Summands are Gaussian around `nu = -Im u / Im tau` and bounded between `0` and
/// that point, so the window covers both.
pub fn eval_r(u: Complex64, tau: Complex64) -> Result<Complex64> {
    Ok(r_scaled(u, tau)?.0)
}

/// `R` and the sum of the absolute values of its summands.
fn r_scaled(u: Complex64, tau: Complex64) -> Result<(Complex64, f64)> {
    check_tau(tau)?;
    let y = tau.im;
    let a = u.im / y;
    let w = gaussian_window(y);
    let (lo, hi) = ((-a).min(0.0) - w, (-a).max(0.0) + w);
    let root = (2.0 * y).sqrt();
    let (mut acc, mut size) = (Complex64::new(0.0, 0.0), 0.0);
    for nu in half_integers(lo, hi) {
        let (scale, log_f) = sign_minus_e(nu, (nu + a) * root);
        // |q^{-nu^2/2} e^{-2 pi i nu u}| = e^{pi y nu^2 + 2 pi nu Im u}
        let log_mag = PI * y * nu * nu + TAU * nu * u.im + log_f;
        let phase = -PI * nu * nu * tau.re - TAU * nu * u.re;
        let mag = half_sign(nu) * scale * log_mag.exp();
        size += mag.abs();
        acc += mag * Complex64::from_polar(1.0, phase);
    }
    Ok((acc, size))
}

/// `A_l(u; tau) = e^{pi i l u} sum_n (-1)^{l n} q^{l n(n+1)/2} / (1 - e^{2 pi i u} q^n)`.
pub fn eval_a(level: u32, u: Complex64, tau: Complex64) -> Result<Complex64> {
    Ok(a_scaled(level, u, tau)?.0)
}

/// `A_l` and the sum of the absolute values of its summands (with the prefactor).
fn a_scaled(level: u32, u: Complex64, tau: Complex64) -> Result<(Complex64, f64)> {
    let pt = CPoint::new(u, tau)?;
    if pt.lattice_distance() < POLE_GUARD {
        return Err(Error::NearPole(format!(
            "u = {u} is within {POLE_GUARD} of Z tau + Z"
        )));
    }
    let l = level as f64;
    let a = (I * TAU * u).exp();
    let term = |n: i64| {
        let nf = n as f64;
        let sign = if (level as i64 * n) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        sign * qpow(tau, l * nf * (nf + 1.0) / 2.0) / (1.0 - a * qpow(tau, nf))
    };
    // past |n| > |Im u|/Im tau + 1 the summands decay like a Gaussian in n
    let start = (u.im.abs() / tau.im) as i64 + 2;
    let mut acc = term(0);
    let mut size = acc.norm();
    for dir in [1i64, -1] {
        let mut n = dir;
        loop {
            let t = term(n);
            acc += t;
            size += t.norm();
            if n.abs() > start && t.norm() <= 1e-18 * size {
                break;
            }
            if n.abs() > 100_000 {
                return Err(Error::ResourceLimit("A_l sum did not converge".into()));
            }
            n += dir;
        }
    }
    let pre = (I * PI * l * u).exp();
    Ok((pre * acc, pre.norm() * size))
}

/// `A^_l(u; tau) = A_l(u; tau) + (i/2) sum_{m<l} e^{2 pi i m u}
/// theta(m tau + (l-1)/2; l tau) R(l u - m tau - (l-1)/2; l tau)`.
pub fn eval_ahat(level: u32, u: Complex64, tau: Complex64) -> Result<Complex64> {
    Ok(eval_ahat_scaled(level, u, tau)?.0)
}

/// [`eval_ahat`] together with the summed absolute values of every series term,
/// the size against which its rounding error is measured. Far from `Im u = 0` the
/// terms cancel to a value many orders of magnitude smaller.
pub fn eval_ahat_scaled(level: u32, u: Complex64, tau: Complex64) -> Result<(Complex64, f64)> {
    let (mut acc, mut scale) = a_scaled(level, u, tau)?;
    let l = level as f64;
    let shift = (l - 1.0) / 2.0;
    for m in 0..level {
        let mf = m as f64;
        let th = eval_theta(mf * tau + shift, l * tau)?;
        if th.norm() == 0.0 {
            continue;
        }
        let (r, r_size) = r_scaled(l * u - mf * tau - shift, l * tau)?;
        let outer = 0.5 * (I * TAU * mf * u).exp() * th;
        let piece = I * outer * r;
        scale += outer.norm() * r_size;
        acc += piece;
    }
    Ok((acc, scale))
}

/// `eta(tau) = q^{1/24} prod (1 - q^n)`. Needs `Im tau >= 0.01`; the product runs
/// until `|q|^n < 1e-18`.
pub fn eval_eta(tau: Complex64) -> Result<Complex64> {
    if !(tau.im >= 0.01) {
        return Err(Error::Domain(format!(
            "eta needs Im tau >= 0.01, got {tau}"
        )));
    }
    let q = qpow(tau, 1.0);
    let mut acc = qpow(tau, 1.0 / 24.0);
    let mut qn = q;
    while qn.norm() > 1e-18 {
        acc *= 1.0 - qn;
        qn *= q;
    }
    Ok(acc)
}

/// `g tau` for `g` in `SL_2(Z)`.
pub fn act(g: &MatSL2, tau: Complex64) -> Complex64 {
    (g.a as f64 * tau + g.b as f64) / (g.c as f64 * tau + g.d as f64)
}

/// Relative residual `|eta(g tau) - chi(g)(c tau + d)^{1/2} eta(tau)| / |eta(g tau)|`,
/// principal square root.
pub fn check_chi_eta(g: &MatSL2, tau: Complex64) -> Result<f64> {
    let lhs = eval_eta(act(g, tau))?;
    let j = g.c as f64 * tau + g.d as f64;
    let rhs = chi_eta(g).to_c64() * j.sqrt() * eval_eta(tau)?;
    Ok((lhs - rhs).norm() / lhs.norm())
}

fn scaled_gap(lhs: (Complex64, f64), factor: Complex64, rhs: (Complex64, f64)) -> f64 {
    let scale = lhs.1.max(factor.norm() * rhs.1).max(1e-300);
    (lhs.0 - factor * rhs.0).norm() / scale
}

/// Residual of `A^_l(u/(c tau+d); g tau) = (c tau+d) e^{-pi i c l u^2/(c tau+d)} A^_l(u; tau)`,
/// relative to the size of the summed pieces on either side.
pub fn alt_residual(level: u32, g: &MatSL2, u: Complex64, tau: Complex64) -> Result<f64> {
    let j = g.c as f64 * tau + g.d as f64;
    let lhs = eval_ahat_scaled(level, u / j, act(g, tau))?;
    let factor = j * (-I * PI * g.c as f64 * level as f64 * u * u / j).exp();
    Ok(scaled_gap(lhs, factor, eval_ahat_scaled(level, u, tau)?))
}

/// Residual of `A^_l(u + n tau + m) = (-1)^{l(n+m)} e^{2 pi i l n u} q^{l n^2/2} A^_l(u)`,
/// measured as in [`alt_residual`].
pub fn elliptic_residual(level: u32, n: i64, m: i64, u: Complex64, tau: Complex64) -> Result<f64> {
    let l = level as f64;
    let lhs = eval_ahat_scaled(level, u + n as f64 * tau + m as f64, tau)?;
    let sign = if (level as i64 * (n + m)).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let factor = sign * (I * TAU * l * n as f64 * u).exp() * qpow(tau, l * (n * n) as f64 / 2.0);
    Ok(scaled_gap(lhs, factor, eval_ahat_scaled(level, u, tau)?))
}
