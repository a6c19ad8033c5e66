//! Mock-theta / theta-quotient closed forms for the rank and crank deviation
//! series `D(a, M)` and `D_C(a, M)` with M in {5, 7}.
//!
//! Each closed form is a sum of a constant, terms `c q^s g(q^a, q^b)` and
//! terms `c q^s J`, where J runs over a fixed list of theta quotients for
//! the modulus. The signs of the `D_C(2,5)` coefficient at q^2 and the
//! `D_C(3,7)` coefficient at q^3 are `+`, the only choice making
//! `sum_a D_C(a, M) = 0` hold term by term.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, Rat};
use crate::qseries::{mocktheta_g, EtaSpec, PSeries};

#[derive(Clone, Debug, PartialEq)]
pub enum ClosedTerm {
    Const(Rat),
    /// `coef * q^shift * g(q^a, q^b)`
    MockG {
        coef: Rat,
        shift: i64,
        a: i64,
        b: i64,
    },
    /// `coef * q^shift * eta quotient`
    Eta {
        coef: Rat,
        shift: i64,
        spec: EtaSpec,
    },
}

impl ClosedTerm {
    pub fn expand(&self, order: &Rat) -> Result<PSeries> {
        Ok(match self {
            ClosedTerm::Const(c) => PSeries::constant(c.clone()).truncate(order),
            ClosedTerm::MockG { coef, shift, a, b } => {
                let s = rat_int(*shift);
                mocktheta_g(*a, *b, &(order - &s))?
                    .shift(&s)
                    .scale_rat(coef)
            }
            ClosedTerm::Eta { coef, shift, spec } => {
                let s = rat_int(*shift);
                spec.expand(&(order - &s))?.shift(&s).scale_rat(coef)
            }
        })
    }
}

pub fn expand_terms(terms: &[ClosedTerm], order: &Rat) -> Result<PSeries> {
    let mut acc = PSeries::zero_to(order);
    for t in terms {
        acc = acc.add(&t.expand(order)?);
    }
    Ok(acc)
}

/// Theta quotients (with their q-shift) used by the modulus-5 forms.
fn basis5() -> Vec<(i64, EtaSpec)> {
    let one = EtaSpec::one;
    vec![
        (0, one().j(5, 1).j(25, 3).jka(25, 5, -3)),
        (1, one().j(25, 2).jka(25, 5, -1)),
        (2, one().j(25, 2).jka(25, 10, -1)),
        (3, one().j(5, 1).j(25, 3).jka(25, 10, -3)),
    ]
}

/// Theta quotients (with their q-shift) used by the modulus-7 forms.
fn basis7() -> Vec<(i64, EtaSpec)> {
    let one = EtaSpec::one;
    vec![
        (0, one().jka(49, 21, 2).j(7, -1)),
        (1, one().j(49, 2).jka(49, 7, -1)),
        (2, one().jka(49, 14, 2).j(7, -1)),
        (3, one().j(49, 2).jka(49, 14, -1)),
        (4, one().j(49, 2).jka(49, 21, -1)),
        (6, one().jka(49, 7, 2).j(7, -1)),
    ]
}

fn build(
    konst: i64,
    gs: &[(i64, i64, i64, i64)],
    basis: Vec<(i64, EtaSpec)>,
    coeffs: &[(i64, i64)],
) -> Vec<ClosedTerm> {
    let mut out = Vec::new();
    if konst != 0 {
        out.push(ClosedTerm::Const(rat_int(konst)));
    }
    for &(c, shift, a, b) in gs {
        out.push(ClosedTerm::MockG {
            coef: rat_int(c),
            shift,
            a,
            b,
        });
    }
    for ((shift, spec), &(n, d)) in basis.into_iter().zip(coeffs) {
        let coef = rat(n, d);
        if !coef.is_zero() {
            out.push(ClosedTerm::Eta { coef, shift, spec });
        }
    }
    out
}

fn class(a: i64, m: i64) -> Result<i64> {
    if m != 5 && m != 7 {
        return Err(Error::Domain(format!(
            "closed forms exist for moduli 5 and 7, not {m}"
        )));
    }
    let r = a.rem_euclid(m);
    Ok(r.min(m - r))
}

/// Closed form of `D(a, M) = sum (N(a, M, n) - p(n)/M) q^n`.
pub fn rank_deviation_closed_form(a: i64, m: i64) -> Result<Vec<ClosedTerm>> {
    Ok(match (m, class(a, m)?) {
        (5, 0) => build(
            0,
            &[(-2, 5, 5, 25)],
            basis5(),
            &[(4, 5), (4, 5), (-2, 5), (2, 5)],
        ),
        (5, 1) => build(
            0,
            &[(1, 5, 5, 25), (-1, 8, 10, 25)],
            basis5(),
            &[(-1, 5), (-1, 5), (3, 5), (-3, 5)],
        ),
        (5, _) => build(
            0,
            &[(1, 8, 10, 25)],
            basis5(),
            &[(-1, 5), (-1, 5), (-2, 5), (2, 5)],
        ),
        (_, 0) => build(
            2,
            &[(2, 7, 7, 49)],
            basis7(),
            &[(-8, 7), (6, 7), (-2, 7), (4, 7), (2, 7), (-4, 7)],
        ),
        (_, 1) => build(
            -1,
            &[(-1, 7, 7, 49), (1, 16, 21, 49)],
            basis7(),
            &[(6, 7), (-1, 7), (5, 7), (-3, 7), (2, 7), (3, 7)],
        ),
        (_, 2) => build(
            0,
            &[(1, 13, 14, 49), (-1, 16, 21, 49)],
            basis7(),
            &[(-1, 7), (-1, 7), (-2, 7), (4, 7), (-5, 7), (3, 7)],
        ),
        (_, _) => build(
            0,
            &[(-1, 13, 14, 49)],
            basis7(),
            &[(-1, 7), (-1, 7), (-2, 7), (-3, 7), (2, 7), (-4, 7)],
        ),
    })
}

/// Closed form of `D_C(a, M)`, the crank analogue. It describes the counts
/// from the crank generating function, which differ from the combinatorial
/// crank only at n = 1.
pub fn crank_deviation_closed_form(a: i64, m: i64) -> Result<Vec<ClosedTerm>> {
    Ok(match (m, class(a, m)?) {
        (5, 0) => build(0, &[], basis5(), &[(4, 5), (-6, 5), (-2, 5), (2, 5)]),
        (5, 1) => build(0, &[], basis5(), &[(-1, 5), (4, 5), (-2, 5), (-3, 5)]),
        (5, _) => build(0, &[], basis5(), &[(-1, 5), (-1, 5), (3, 5), (2, 5)]),
        (_, 0) => build(
            0,
            &[],
            basis7(),
            &[(6, 7), (-8, 7), (-2, 7), (4, 7), (2, 7), (-4, 7)],
        ),
        (_, 1) => build(
            0,
            &[],
            basis7(),
            &[(-1, 7), (6, 7), (-2, 7), (-3, 7), (-5, 7), (3, 7)],
        ),
        (_, 2) => build(
            0,
            &[],
            basis7(),
            &[(-1, 7), (-1, 7), (5, 7), (-3, 7), (2, 7), (-4, 7)],
        ),
        (_, _) => build(
            0,
            &[],
            basis7(),
            &[(-1, 7), (-1, 7), (-2, 7), (4, 7), (2, 7), (3, 7)],
        ),
    })
}
