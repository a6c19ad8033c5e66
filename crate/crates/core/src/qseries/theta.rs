use num_traits::Signed;

use super::products::binomial_product;
use super::PSeries;
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, Cyc, Rat};

fn check_mult(mult: &Rat) -> Result<()> {
    if mult.is_positive() {
        Ok(())
    } else {
        Err(Error::Domain("theta multiplier must be positive".into()))
    }
}

/// `theta(z; tau')` with `z = r tau' + s` and `tau' = mult * tau`, from the
/// triple product
/// `-i q'^{1/8} e^{-pi i z} prod (1-q'^n)(1-e^{2 pi i z} q'^{n-1})(1-e^{-2 pi i z} q'^n)`.
pub fn theta_expand(r: &Rat, s: &Rat, mult: &Rat, order: &Rat) -> Result<PSeries<Cyc>> {
    check_mult(mult)?;
    let ord = order / mult;
    let zs = Cyc::root_of_unity(s);
    let zs_inv = Cyc::root_of_unity(&-s);
    let lead = rat(1, 8) - r / rat_int(2);
    let rel = &ord - &lead;
    // Negative-exponent factors shift the valuation; they all occur for n <= |r| + 1.
    let mut shift = Rat::from_integer(0.into());
    for n in 1..=(r.abs().ceil().to_integer().try_into().unwrap_or(0i64) + 1) {
        for e in [rat_int(n - 1) + r, rat_int(n) - r] {
            if e.is_negative() {
                shift += e;
            }
        }
    }
    let need = &rel - &shift;
    let mut factors = Vec::new();
    let mut n = 1i64;
    loop {
        let nn = rat_int(n);
        let e1 = &nn - rat_int(1) + r;
        let e2 = &nn - r;
        if e1 >= need && e2 >= need && nn >= need {
            break;
        }
        factors.push((Cyc::from_int(1), nn, 1));
        factors.push((zs.clone(), e1, 1));
        factors.push((zs_inv.clone(), e2, 1));
        n += 1;
    }
    let prod = binomial_product(&factors, &rel)?;
    let pref = &Cyc::root_of_unity(&rat(-1, 4)) * &Cyc::root_of_unity(&(-s / rat_int(2)));
    prod.scale(&pref).shift(&lead).scale_exponents(mult)
}

/// Same function from the series `sum_{nu in 1/2+Z} q'^{nu^2/2} e^{2 pi i nu (z + 1/2)}`.
pub fn theta_expand_sum(r: &Rat, s: &Rat, mult: &Rat, order: &Rat) -> Result<PSeries<Cyc>> {
    check_mult(mult)?;
    let ord = order / mult;
    let half = rat(1, 2);
    let spread = (rat_int(2) * ord.abs() + r * r).ceil().to_integer();
    let b: i64 = num_traits::ToPrimitive::to_i64(&spread).unwrap_or(0);
    let bound = (b as f64).sqrt().ceil() as i64 + 2;
    let centre = (-r).floor().to_integer();
    let c: i64 = num_traits::ToPrimitive::to_i64(&centre).unwrap();
    let mut terms = Vec::new();
    for j in (c - bound)..=(c + bound) {
        let nu = rat_int(j) + &half;
        let e = &nu * &nu / rat_int(2) + &nu * r;
        if e < ord {
            let phase = &nu * (s + &half);
            terms.push((e, Cyc::root_of_unity(&phase)));
        }
    }
    PSeries::from_terms(terms, Some(&ord)).scale_exponents(mult)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triple_product_matches_sum() {
        for (r, s) in [
            (rat(0, 1), rat(1, 3)),
            (rat(1, 5), rat(0, 1)),
            (rat(2, 7), rat(3, 4)),
            (rat(-3, 2), rat(1, 6)),
        ] {
            let o = rat_int(12);
            let a = theta_expand(&r, &s, &rat_int(1), &o).unwrap();
            let b = theta_expand_sum(&r, &s, &rat_int(1), &o).unwrap();
            assert_eq!(a, b, "r={r} s={s}");
        }
    }

    #[test]
    fn vanishes_at_lattice_points() {
        let t = theta_expand(&rat_int(0), &rat_int(0), &rat_int(1), &rat_int(10)).unwrap();
        assert!(t.is_empty());
        let s = theta_expand_sum(&rat_int(1), &rat_int(2), &rat_int(1), &rat_int(10)).unwrap();
        assert!(s.is_empty());
    }

    proptest! {
        #[test]
        fn product_equals_sum(rn in -6i64..7, rd in 1i64..5, sn in 0i64..8, sd in 1i64..5, m in 1i64..4) {
            let (r, s, mult) = (rat(rn, rd), rat(sn, sd), rat_int(m));
            let o = rat_int(8);
            prop_assert_eq!(theta_expand(&r, &s, &mult, &o).unwrap(), theta_expand_sum(&r, &s, &mult, &o).unwrap());
        }

        #[test]
        fn elliptic_shift(rn in -4i64..5, rd in 1i64..4, sn in 0i64..6, sd in 1i64..4,
                          lam in -2i64..3, mu in -2i64..3) {
            // theta(z + l tau + m) = q^{-l^2/2} e^{-2 pi i l z} (-1)^{l+m} theta(z)
            let (r, s) = (rat(rn, rd), rat(sn, sd));
            let o = rat_int(8);
            let lhs = theta_expand(&(&r + rat_int(lam)), &(&s + rat_int(mu)), &rat_int(1), &o).unwrap();
            let base = theta_expand(&r, &s, &rat_int(1), &(&o + rat_int(lam * lam))).unwrap();
            let l = rat_int(lam);
            let sign = if (lam + mu).rem_euclid(2) == 0 { 1 } else { -1 };
            let factor = Cyc::root_of_unity(&(-&l * &s)).scale(&rat_int(sign));
            let rhs = base.scale(&factor).shift(&(-&l * &l / rat_int(2) - &l * &r));
            let ord = std::cmp::min(lhs.order().unwrap(), rhs.order().unwrap());
            prop_assert_eq!(lhs.first_difference(&rhs, Some(&ord)), None);
        }
    }
}
