use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, Coeff, Cyc, Rat};
use crate::qseries::PSeries;

fn check(p: i64, k: i64) -> Result<()> {
    if p < 2 || !(0..p).contains(&k) {
        return Err(Error::Domain(format!(
            "need p >= 2 and 0 <= k < p, got p={p}, k={k}"
        )));
    }
    Ok(())
}

/// `U_{p,k}`: keeps `q^e` with `e = k (mod p)` and maps it to `q^{e/p}`.
/// Input exponents must be integers.
pub fn upk<C: Coeff>(f: &PSeries<C>, p: i64, k: i64) -> Result<PSeries<C>> {
    check(p, k)?;
    select(f, p, &rat_int(k))
}

/// `U'_{p,k}`: keeps `q^e` with `(e - k - (p-1)/24)/p` integral and maps it to
/// `q^{e/p}`. Exact when every exponent lies in `(p-1)/24 + Z`.
pub fn upk_prime<C: Coeff>(f: &PSeries<C>, p: i64, k: i64) -> Result<PSeries<C>> {
    check(p, k)?;
    select(f, p, &(rat_int(k) + rat(p - 1, 24)))
}

fn select<C: Coeff>(f: &PSeries<C>, p: i64, shift: &Rat) -> Result<PSeries<C>> {
    let base = shift - shift.floor();
    let pr = rat_int(p);
    let mut terms = Vec::new();
    for (e, c) in f.iter() {
        let r = &e - &base;
        if !r.is_integer() {
            return Err(Error::ExponentDomain(format!(
                "exponent {e} is not in {base} + Z"
            )));
        }
        if ((&e - shift) / &pr).is_integer() {
            terms.push((&e / &pr, c.clone()));
        }
    }
    let order = f.order().map(|o| o / &pr);
    Ok(PSeries::from_terms(terms, order.as_ref()))
}

/// The defining average `(1/p) sum_m zeta_{24p}^{-m(p-1)} zeta_p^{-mk} f((tau + m)/p)`,
/// term by term. Slow; used to cross-check [`upk_prime`].
pub fn upk_prime_average(f: &PSeries<Cyc>, p: i64, k: i64) -> Result<PSeries<Cyc>> {
    check(p, k)?;
    let pr = rat_int(p);
    let twist = rat(p - 1, 24) + rat_int(k);
    let mut terms = Vec::new();
    for (e, c) in f.iter() {
        let step = (&e - &twist) / &pr;
        let mut avg = Cyc::zero();
        for m in 0..p {
            avg = &avg + &Cyc::root_of_unity(&(&step * rat_int(m)));
        }
        let avg = avg.scale(&(Rat::one() / &pr));
        if !avg.is_zero() {
            terms.push((&e / &pr, &avg * c));
        }
    }
    let order = f.order().map(|o| o / &pr);
    Ok(PSeries::from_terms(terms, order.as_ref()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::EtaSpec;
    use proptest::prelude::*;

    fn euler(mult: i64, order: &Rat) -> PSeries {
        EtaSpec::one()
            .eta(mult, 1)
            .qpow(rat(-mult, 24))
            .expand(order)
            .unwrap()
    }

    #[test]
    fn partition_dissection() {
        let order = rat_int(60);
        let pf = euler(1, &order).inv().unwrap();
        let u = upk(&pf, 5, 4).unwrap();
        assert_eq!(u.valuation(), Some(rat(4, 5)));
        assert_eq!(u.coeff(&rat(4, 5)).unwrap(), rat_int(5));
        assert_eq!(u.coeff(&rat(9, 5)).unwrap(), rat_int(30));
        for (_, c) in u.iter() {
            assert!(c.is_integer() && (c.to_integer() % 5u32) == 0u32.into());
        }
        assert_eq!(u.order(), Some(rat(12, 1)));
    }

    #[test]
    fn off_class_monomial_vanishes() {
        let m = PSeries::monomial(rat_int(1), &rat_int(3));
        assert!(upk(&m, 5, 4).unwrap().is_empty());
        let h = PSeries::monomial(rat_int(1), &rat(1, 2));
        assert!(matches!(upk(&h, 5, 4), Err(Error::ExponentDomain(_))));
    }

    #[test]
    fn prime_version_reformulates_plain_version() {
        for p in [5i64, 7, 11] {
            let order = rat_int(6 * p);
            let lhs_in = euler(p, &order).shift(&rat(p - 1, 24));
            for k in 0..p {
                let lhs = upk_prime(&lhs_in, p, k).unwrap();
                let one = PSeries::<Rat>::one().truncate(&order);
                let rhs = euler(1, &rat_int(6))
                    .mul(&upk(&one, p, k).unwrap())
                    .shift(&rat(p - 1, 24 * p));
                assert_eq!(lhs.first_difference(&rhs, None), None, "p={p} k={k}");
                let avg = upk_prime_average(&lhs_in.to_cyc(), p, k).unwrap();
                assert_eq!(avg.collapse().unwrap(), lhs);
            }
        }
    }

    #[test]
    fn prime_version_domain() {
        let m = PSeries::monomial(rat_int(1), &rat(1, 24));
        assert!(matches!(upk_prime(&m, 5, 0), Err(Error::ExponentDomain(_))));
        // the literal average still makes sense off the lattice, with irrational weights
        let avg = upk_prime_average(&m.to_cyc(), 5, 0).unwrap();
        assert_eq!(avg.len(), 1);
    }

    proptest! {
        #[test]
        fn commutes_with_pth_powers(p in 2i64..8, k in 0i64..8,
                                    f in prop::collection::vec(-9i64..10, 1..25),
                                    g in prop::collection::vec(-9i64..10, 1..6)) {
            prop_assume!(k < p);
            let order = rat_int(24);
            let fs = PSeries::from_dense(&rat_int(-3), &rat_int(1), f.iter().map(|&x| rat_int(x)).collect(), Some(&order));
            let gs = PSeries::from_dense(&rat_int(0), &rat_int(1), g.iter().map(|&x| rat_int(x)).collect(), None);
            let lhs = upk(&gs.scale_exponents(&rat_int(p)).unwrap().mul(&fs), p, k).unwrap();
            let rhs = gs.mul(&upk(&fs, p, k).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
