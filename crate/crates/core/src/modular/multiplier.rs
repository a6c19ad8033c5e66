use std::collections::BTreeMap;

use crate::appell::MatSL2;
use crate::error::{Error, Result};
use crate::exact::{kronecker, rat, Cyc};

/// Multiplier of `eta`: `eta(g tau) = chi(g) (c tau + d)^{1/2} eta(tau)`, principal
/// branch of the square root.
pub fn chi_eta(g: &MatSL2) -> Cyc {
    let MatSL2 { a, b, c, d } = *g;
    if c < 0 {
        // (c tau + d)^{1/2} = -i (-c tau - d)^{1/2} when -c tau - d is in the upper half plane
        return &Cyc::zeta_pow(4, 1)
            * &chi_eta(&MatSL2 {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            });
    }
    let (sym, e) = if c % 2 != 0 {
        (kronecker(d, c), (a + d - 3) * c - b * d * (c * c - 1))
    } else {
        (
            kronecker(c, d),
            (a - 2 * d) * c - b * d * (c * c - 1) + 3 * d - 3,
        )
    };
    Cyc::zeta_pow(24, e.rem_euclid(24)).scale(&rat(sym as i64, 1))
}

/// Multiplier of `eta_{p,delta}` on `Gamma_1(p)` (weight 0).
pub fn chi_geta(p: i64, delta: i64, g: &MatSL2) -> Result<Cyc> {
    let MatSL2 { a, b, c, d } = *g;
    if p <= 0 || c % p != 0 || (a - 1) % p != 0 || (d - 1) % p != 0 {
        return Err(Error::NotInGroup(format!(
            "({a} {b}; {c} {d}) is not in Gamma_1({p})"
        )));
    }
    let inner = MatSL2 {
        a,
        b: p * b,
        c: c / p,
        d,
    };
    let chi = chi_eta(&inner);
    let sign = if (((a - 1) / p) * delta + b * delta).rem_euclid(2) == 0 {
        1
    } else {
        -1
    };
    let phase = Cyc::root_of_unity(&rat((a * b).rem_euclid(2 * p) * delta * delta, 2 * p));
    Ok((&(&chi * &chi) * &phase).scale(&rat(sign, 1)))
}

/// `12 sum_delta r_delta delta^2 = 1 - 24k (mod p)`.
pub fn rv_condition(p: i64, k: i64, r: &BTreeMap<i64, i64>) -> bool {
    let s: i128 = r
        .iter()
        .map(|(&d, &e)| e as i128 * (d as i128) * (d as i128))
        .sum();
    (12 * s - (1 - 24 * k as i128)).rem_euclid(p as i128) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn eta_c(tau: Complex64) -> Complex64 {
        let q = (Complex64::i() * std::f64::consts::TAU * tau).exp();
        let mut acc = (Complex64::i() * std::f64::consts::TAU * tau / 24.0).exp();
        let mut qn = q;
        for _ in 0..4000 {
            acc *= Complex64::new(1.0, 0.0) - qn;
            qn *= q;
            if qn.norm() < 1e-18 {
                break;
            }
        }
        acc
    }

    fn geta_c(p: i64, delta: i64, tau: Complex64) -> Complex64 {
        let q = |e: f64| (Complex64::i() * std::f64::consts::TAU * tau * e).exp();
        let x = delta as f64 / p as f64;
        let mut acc = q(p as f64 / 2.0 * (x * x - x + 1.0 / 6.0));
        for n in 0..2000 {
            let e1 = (n * p + delta) as f64;
            let e2 = (n * p + p - delta) as f64;
            let (f1, f2) = (q(e1), q(e2));
            acc *= (Complex64::new(1.0, 0.0) - f1) * (Complex64::new(1.0, 0.0) - f2);
            if f1.norm() < 1e-18 && f2.norm() < 1e-18 {
                break;
            }
        }
        acc
    }

    fn random_sl2(rng: &mut ChaCha8Rng, bound: i64) -> MatSL2 {
        loop {
            let (a, c) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
            if a.gcd(&c) == 1 {
                let m = MatSL2::completing(a, c).unwrap();
                let t = rng.gen_range(-3..=3);
                return m.mul(&MatSL2 {
                    a: 1,
                    b: t,
                    c: 0,
                    d: 1,
                });
            }
        }
    }

    fn act(g: &MatSL2, tau: Complex64) -> Complex64 {
        (tau * g.a as f64 + g.b as f64) / (tau * g.c as f64 + g.d as f64)
    }

    /// A point whose image under `g` stays well inside the upper half plane.
    fn base_point(g: &MatSL2) -> Complex64 {
        if g.c == 0 {
            return Complex64::new(0.1, 0.9);
        }
        let x = -(g.d as f64) / g.c as f64;
        Complex64::new(x + 0.05, 1.0 / (g.c.abs() as f64))
    }

    #[test]
    fn generators() {
        assert_eq!(
            chi_eta(&MatSL2 {
                a: 1,
                b: 1,
                c: 0,
                d: 1
            }),
            Cyc::zeta_pow(24, 1)
        );
        assert_eq!(chi_eta(&MatSL2::S), Cyc::zeta_pow(8, -1));
        assert_eq!(chi_eta(&MatSL2::IDENTITY), Cyc::from_int(1));
    }

    #[test]
    fn eta_transformation_numerically() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let g = random_sl2(&mut rng, 12);
            let chi = chi_eta(&g);
            assert_eq!(chi.pow(24), Cyc::from_int(1));
            assert!((chi.to_c64().norm() - 1.0).abs() < 1e-12);
            let tau = base_point(&g);
            let lhs = eta_c(act(&g, tau));
            let rhs = chi.to_c64() * (tau * g.c as f64 + g.d as f64).sqrt() * eta_c(tau);
            assert!(
                (lhs - rhs).norm() < 1e-8 * rhs.norm().max(1e-3),
                "{g:?}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn geta_multiplier_numerically() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [5i64, 7] {
            let mut seen = 0;
            while seen < 20 {
                let c = p * rng.gen_range(-3i64..=3);
                let a = 1 + p * rng.gen_range(-2i64..=2);
                if a.gcd(&c) != 1 {
                    continue;
                }
                let g = MatSL2::completing(a, c).unwrap();
                // move d into 1 mod p using right multiplication by T^m
                let Some(m) = (0..p).find(|m| (g.c * m + g.d - 1).rem_euclid(p) == 0) else {
                    continue;
                };
                let g = g.mul(&MatSL2 {
                    a: 1,
                    b: m,
                    c: 0,
                    d: 1,
                });
                seen += 1;
                for delta in 1..p {
                    let chi = chi_geta(p, delta, &g).unwrap();
                    let tau = base_point(&g);
                    let lhs = geta_c(p, delta, act(&g, tau));
                    let rhs = chi.to_c64() * geta_c(p, delta, tau);
                    assert!(
                        (lhs - rhs).norm() < 1e-8 * rhs.norm().max(1e-6),
                        "{g:?} {delta}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn geta_translation() {
        let t = MatSL2 {
            a: 1,
            b: 1,
            c: 0,
            d: 1,
        };
        for p in [5i64, 7, 11] {
            for delta in 1..p {
                let x = rat(delta, p);
                let e = rat(p, 2) * crate::qseries::bernoulli2(&x);
                assert_eq!(chi_geta(p, delta, &t).unwrap(), Cyc::root_of_unity(&e));
            }
        }
        assert!(matches!(
            chi_geta(5, 1, &MatSL2::S),
            Err(Error::NotInGroup(_))
        ));
    }

    #[test]
    fn exponent_choices_satisfy_congruence() {
        for p in [7i64, 11, 13] {
            let sp = (p * p - 1) / 24;
            for k in 0..p {
                let r = BTreeMap::from([
                    (1, 2),
                    ((p - 1) / 2, k + sp + 1),
                    ((p - 3) / 2, -(k + sp + 1)),
                ]);
                assert!(rv_condition(p, k, &r), "p={p} k={k}");
            }
        }
        for k in 0..5 {
            let mut r = BTreeMap::new();
            *r.entry(1).or_insert(0) += 2 - (k + 2);
            *r.entry(2).or_insert(0) += k + 2;
            assert!(rv_condition(5, k, &r));
        }
        for p in [5i64, 7] {
            for k in 0..p {
                assert_eq!(rv_condition(p, k, &BTreeMap::new()), (24 * k - 1) % p == 0);
            }
        }
    }
}
