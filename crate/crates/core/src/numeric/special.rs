use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `beta(x) = int_x^inf u^{-1/2} e^{-pi u} du = erfc(sqrt(pi x))` (substitute `u = t^2`).
pub fn eval_beta(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("beta needs x >= 0, got {x}")));
    }
    Ok(libm::erfc((PI * x).sqrt()))
}

/// `E(z) = 2 int_0^z e^{-pi u^2} du = sgn(z)(1 - beta(z^2)) = erf(sqrt(pi) z)`.
pub fn eval_e(z: f64) -> f64 {
    libm::erf(PI.sqrt() * z)
}

/// Scaled complementary error function `e^{z^2} erfc(z)` for `z >= 0`.
pub fn erfcx(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z < 20.0 {
        return (z * z).exp() * libm::erfc(z);
    }
    // asymptotic series; the smallest term is below e^{-400}
    let w = 1.0 / (2.0 * z * z);
    let (mut sum, mut term) = (1.0, 1.0);
    for k in 1..30 {
        term *= -((2 * k - 1) as f64) * w;
        sum += term;
    }
    sum / (z * PI.sqrt())
}

/// `sgn(nu) - E(x)` as `(scale, log_factor)`: the value is `scale * e^{log_factor}`.
/// When the signs agree the Gaussian tail is returned in factored form.
pub(crate) fn sign_minus_e(nu: f64, x: f64) -> (f64, f64) {
    let s = nu.signum();
    if x == 0.0 {
        return (s, 0.0);
    }
    let z = PI.sqrt() * x.abs();
    if x.signum() == s {
        (s * erfcx(z), -z * z)
    } else {
        // sgn(nu) - sgn(x)(1 - beta) = sgn(nu)(2 - beta)
        (s * (2.0 - libm::erfc(z)), 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Composite Simpson on `2 int_{sqrt x}^{sqrt x + 8} e^{-pi t^2} dt`, the
    /// integral defining beta after `u = t^2`.
    fn beta_quadrature(x: f64) -> f64 {
        let (a, b) = (x.sqrt(), x.sqrt() + 8.0);
        let n = 20_000;
        let h = (b - a) / n as f64;
        let f = |t: f64| (-PI * t * t).exp();
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        2.0 * s * h / 3.0
    }

    /// Direct quadrature of the original integrand with the singularity removed
    /// by integrating `u^{-1/2}` exactly on the first panel.
    fn beta_direct(x: f64) -> f64 {
        let cut = x + 1e-3;
        // int_x^cut u^{-1/2} e^{-pi u} ~ e^{-pi x} (2 sqrt(cut) - 2 sqrt(x)) to O(1e-3 * width)
        let mut head = 0.0;
        let m = 2000;
        for i in 0..m {
            let (u0, u1) = (
                x + (cut - x) * i as f64 / m as f64,
                x + (cut - x) * (i + 1) as f64 / m as f64,
            );
            let mid = 0.5 * (u0 + u1);
            head += (-PI * mid).exp() * 2.0 * (u1.sqrt() - u0.sqrt());
        }
        let (a, b) = (cut, cut + 40.0);
        let n = 200_000;
        let h = (b - a) / n as f64;
        let f = |u: f64| u.powf(-0.5) * (-PI * u).exp();
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        head + s * h / 3.0
    }

    #[test]
    fn beta_matches_quadrature() {
        for i in 0..20 {
            let x = 0.05 + 0.2 * i as f64;
            let b = eval_beta(x).unwrap();
            assert!((b - beta_quadrature(x)).abs() < 1e-12, "x={x}");
            assert!(
                (b - beta_direct(x)).abs() < 1e-7,
                "x={x}: {b} vs {}",
                beta_direct(x)
            );
        }
    }

    #[test]
    fn special_values() {
        assert!((eval_beta(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(eval_e(0.0), 0.0);
        assert!((eval_e(30.0) - 1.0).abs() < 1e-12);
        assert!(eval_beta(-1.0).is_err());
        // E(z) = sgn(z)(1 - beta(z^2))
        for z in [-2.0, -0.3, 0.7, 1.9] {
            let rhs = f64::signum(z) * (1.0 - eval_beta(z * z).unwrap());
            assert!((eval_e(z) - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn erfcx_is_continuous_at_switch() {
        let (a, b) = (erfcx(20.0 - 1e-12), erfcx(20.0));
        assert!(((a - b) / b).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn e_is_odd(z in -6.0f64..6.0) {
            prop_assert!((eval_e(z) + eval_e(-z)).abs() < 1e-15);
        }
    }
}
