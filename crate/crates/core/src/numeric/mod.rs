//! Double-precision evaluation of theta, R, A_l, the completion A^_l and eta,
//! for the transformation laws that truncated q-series cannot see.

mod cusp;
mod jacobi;
mod special;

pub use cusp::{cusp_split_residual, h1_numeric, h2_numeric, slashed_derivative, wirtinger};
pub use jacobi::{
    act, alt_residual, check_chi_eta, elliptic_residual, eval_a, eval_ahat, eval_ahat_scaled,
    eval_eta, eval_r, eval_theta, gaussian_window, CPoint, POLE_GUARD,
};
pub use special::{erfcx, eval_beta, eval_e};

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::appell::MatSL2;
use crate::error::Result;

/// Worst residual over a deterministic batch of samples.
#[derive(Clone, Debug, Serialize)]
pub struct Sweep {
    pub name: &'static str,
    pub samples: usize,
    pub max_residual: f64,
}

/// Random matrix with `|a|, |c| <= bound`, shifted by a random translation.
pub fn random_sl2(rng: &mut ChaCha8Rng, bound: i64) -> MatSL2 {
    loop {
        let (a, c) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        if a.gcd(&c) == 1 {
            let m = MatSL2::completing(a, c).expect("coprime column");
            return m.mul(&MatSL2 {
                a: 1,
                b: rng.gen_range(-3..=3),
                c: 0,
                d: 1,
            });
        }
    }
}

/// `tau` near `-d/c` with `|c tau + d|` near 1, so `Im tau` and `Im g tau` are both
/// close to `1/|c|`.
pub fn base_point(rng: &mut ChaCha8Rng, g: &MatSL2) -> Complex64 {
    let s = rng.gen_range(0.8..1.2);
    let x0 = rng.gen_range(-0.3..0.3);
    if g.c == 0 {
        return Complex64::new(x0, s);
    }
    let c = g.c as f64;
    Complex64::new((x0 - g.d as f64) / c, s / c.abs())
}

fn elliptic_variable(rng: &mut ChaCha8Rng, tau: Complex64) -> Complex64 {
    loop {
        let u = rng.gen_range(-1.2..1.2) * tau + rng.gen_range(-1.0..1.0);
        if (CPoint { u, tau }).lattice_distance() > 0.05 {
            return u;
        }
    }
}

/// The modular law of `A^_l` for `l` in 1..=3 over `samples` random `(g, u, tau)`.
pub fn alt_sweep(seed: u64, samples: usize) -> Result<Sweep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let level = 1 + (i % 3) as u32;
        let g = random_sl2(&mut rng, 3);
        let tau = base_point(&mut rng, &g);
        let u = elliptic_variable(&mut rng, tau);
        let j = g.c as f64 * tau + g.d as f64;
        if (CPoint {
            u: u / j,
            tau: act(&g, tau),
        })
        .lattice_distance()
            < 0.05
        {
            continue;
        }
        worst = worst.max(alt_residual(level, &g, u, tau)?);
    }
    Ok(Sweep {
        name: "modular law of A^_l",
        samples,
        max_residual: worst,
    })
}

/// The elliptic law of `A^_l` for shifts `n, m` in `{-1, 0, 1}`.
pub fn elliptic_sweep(seed: u64, samples: usize) -> Result<Sweep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let level = 1 + (i % 3) as u32;
        let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.3..2.0));
        let u = elliptic_variable(&mut rng, tau);
        let (n, m) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        worst = worst.max(elliptic_residual(level, n, m, u, tau)?);
    }
    Ok(Sweep {
        name: "elliptic law of A^_l",
        samples,
        max_residual: worst,
    })
}

/// The eta multiplier over random matrices with `|c| <= 20`.
pub fn eta_sweep(seed: u64, samples: usize) -> Result<Sweep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let g = random_sl2(&mut rng, 20);
        let tau = base_point(&mut rng, &g);
        worst = worst.max(check_chi_eta(&g, tau)?);
    }
    Ok(Sweep {
        name: "eta multiplier",
        samples,
        max_residual: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_law() {
        let s = alt_sweep(1, 60).unwrap();
        assert!(s.max_residual < 1e-8, "{s:?}");
    }

    #[test]
    fn elliptic_law() {
        let s = elliptic_sweep(2, 60).unwrap();
        assert!(s.max_residual < 1e-8, "{s:?}");
    }

    #[test]
    fn holomorphic_part_alone_fails_the_modular_law() {
        // A_3 without its completion is not a Jacobi form
        let g = MatSL2::S;
        let (u, tau) = (Complex64::new(0.21, 0.13), Complex64::new(0.05, 1.1));
        let j = g.c as f64 * tau + g.d as f64;
        let lhs = eval_a(3, u / j, act(&g, tau)).unwrap();
        let rhs = j
            * (Complex64::new(0.0, -3.0 * std::f64::consts::PI) * u * u / j).exp()
            * eval_a(3, u, tau).unwrap();
        assert!((lhs - rhs).norm() > 1e-3 * rhs.norm());
        assert!(alt_residual(3, &g, u, tau).unwrap() < 1e-10);
    }

    #[test]
    fn eta_multiplier() {
        let s = eta_sweep(3, 50).unwrap();
        assert!(s.max_residual < 1e-8, "{s:?}");
    }
}
