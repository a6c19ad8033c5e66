use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::jacobi::{act, eval_ahat, gaussian_window};
use super::special::erfcx;
use crate::appell::{h1_at_cusp, AppellPoint, MatSL2};
use crate::error::{Error, Result};
use crate::exact::{rat_int, rat_to_f64};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Wirtinger derivative `d/du = (d/d Re u - i d/d Im u)/2` by central differences.
pub fn wirtinger<F: Fn(Complex64) -> Result<Complex64>>(
    f: F,
    u: Complex64,
    h: f64,
) -> Result<Complex64> {
    let dx = (f(u + h)? - f(u - h)?) / (2.0 * h);
    let dy = (f(u + I * h)? - f(u - I * h)?) / (2.0 * h);
    Ok(0.5 * (dx - I * dy))
}

/// `(1/2 pi i) e^{-pi i l c d x^2} (c tau + d)^{-2} d/du A^_l(u - x; g tau)` at `u = 0`,
/// evaluated numerically.
pub fn slashed_derivative(level: u32, x: f64, g: &MatSL2, tau: Complex64) -> Result<Complex64> {
    let j = g.c as f64 * tau + g.d as f64;
    let gt = act(g, tau);
    let d = wirtinger(
        |u| eval_ahat(level, u - x, gt),
        Complex64::new(0.0, 0.0),
        1e-5,
    )?;
    let pre = (-I * PI * level as f64 * (g.c * g.d) as f64 * x * x).exp() / (TAU * I * j * j);
    Ok(pre * d)
}

/// The exact holomorphic part summed at `tau`, with the tail below `1e-14`.
pub fn h1_numeric(pt: &AppellPoint, g: &MatSL2, tau: Complex64) -> Result<Complex64> {
    let order = rat_int((6.0 / tau.im).ceil() as i64 + 1);
    let s = h1_at_cusp(pt, g, &order)?;
    Ok(s.iter()
        .map(|(e, c)| c.to_c64() * (I * TAU * rat_to_f64(&e) * tau).exp())
        .sum())
}

/// `f(t; y) = pi |t| beta(2 y t^2 / l) - e^{-2 pi y t^2 / l} sqrt(l / 2y)` as
/// `(g, -2 pi y t^2 / l)` with `f = g e^{second}`.
fn f_factored(t: f64, y: f64, l: f64) -> (f64, f64) {
    let z = t.abs() * (2.0 * PI * y / l).sqrt();
    let g = PI * t.abs() * erfcx(z) - (l / (2.0 * y)).sqrt();
    (g, -z * z)
}

/// Nonholomorphic part
/// `H_2 = -(1/2 pi) sum_{n,m} (-1)^{l n} e^{2 pi i d x t} f(t; Im tau) q^{-(l/2) N^2 + N (m + l/2)}`
/// with `N = n - c x` and `t = l N - (m + l/2)`.
pub fn h2_numeric(level: u32, x: f64, g: &MatSL2, tau: Complex64) -> Result<Complex64> {
    if g.c < 0 {
        return Err(Error::Domain("H_2 needs c >= 0".into()));
    }
    let (l, y) = (level as f64, tau.im);
    let cx = g.c as f64 * x;
    let dx = g.d as f64 * x;
    // the summand is Gaussian in (N - t/l, t) with weights (l/2, 1/2l) on 2 pi y
    let w = gaussian_window(2.0 * y);
    let t_max = w * (2.0 * l).sqrt();
    let n_span = t_max / l + w * (2.0 / l).sqrt() + 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in ((cx - n_span).floor() as i64)..=((cx + n_span).ceil() as i64) {
        let nn = n as f64 - cx;
        // m + l/2 = l N - t, so m runs over the t-window
        let m_lo = (l * nn - t_max - l / 2.0).floor() as i64;
        let m_hi = (l * nn + t_max - l / 2.0).ceil() as i64;
        for m in m_lo..=m_hi {
            let mh = m as f64 + l / 2.0;
            let t = l * nn - mh;
            let (gv, log_f) = f_factored(t, y, l);
            let e = -l / 2.0 * nn * nn + nn * mh;
            let log_mag = log_f - TAU * y * e;
            if log_mag < -60.0 {
                continue;
            }
            let sign = if (level as i64 * n).rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            };
            let phase = TAU * dx * t + TAU * e * tau.re;
            acc += sign * gv * log_mag.exp() * Complex64::from_polar(1.0, phase);
        }
    }
    Ok(-acc / TAU)
}

/// `|slashed derivative - (H_1 + H_2)|` at one point.
pub fn cusp_split_residual(pt: &AppellPoint, g: &MatSL2, tau: Complex64) -> Result<f64> {
    if pt.tau_mult != 1 {
        return Err(Error::Domain(
            "the numeric split is implemented for tau_mult = 1".into(),
        ));
    }
    let x = rat_to_f64(&pt.x);
    let lhs = slashed_derivative(pt.level, x, g, tau)?;
    let rhs = h1_numeric(pt, g, tau)? + h2_numeric(pt.level, x, g, tau)?;
    Ok((lhs - rhs).norm())
}
