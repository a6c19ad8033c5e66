//! Holomorphic parts of `d/du A^_l(u - x; tau)` at cusps and their orders.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lerch::quadratic_range;
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, Cyc, Rat};
use crate::qseries::PSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatSL2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl MatSL2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::NotInGroup(format!(
                "det of ({a} {b}; {c} {d}) is not 1"
            )));
        }
        Ok(MatSL2 { a, b, c, d })
    }

    pub const IDENTITY: MatSL2 = MatSL2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    pub const S: MatSL2 = MatSL2 {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };

    pub fn mul(&self, o: &MatSL2) -> MatSL2 {
        MatSL2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> MatSL2 {
        MatSL2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Some matrix with first column `(a, c)`; requires `gcd(a, c) = 1`.
    pub fn completing(a: i64, c: i64) -> Result<MatSL2> {
        let g = a.extended_gcd(&c);
        if g.gcd.abs() != 1 {
            return Err(Error::NotInGroup(format!("gcd({a}, {c}) != 1")));
        }
        // a x + c y = g  =>  a (g x) - (-g y) c = 1
        let (x, y) = (g.x * g.gcd, g.y * g.gcd);
        MatSL2::new(a, -y, c, x)
    }
}

/// `(level, x, tau_mult)`: the function `d/du A^_level(u - x; tau_mult * tau)` at `u = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AppellPoint {
    pub level: u32,
    pub x: Rat,
    pub tau_mult: i64,
}

impl AppellPoint {
    pub fn new(level: u32, x: Rat) -> Result<Self> {
        if level == 0 {
            return Err(Error::Domain("level must be positive".into()));
        }
        if !x.is_positive() || x.is_integer() {
            return Err(Error::Domain(format!(
                "x = {x} must be positive and non-integral"
            )));
        }
        Ok(AppellPoint {
            level,
            x,
            tau_mult: 1,
        })
    }

    pub fn with_mult(mut self, m: i64) -> Self {
        self.tau_mult = m;
        self
    }
}

/// Constant term of the holomorphic part when `c x` is an integer; `w = e^{pi i d x}`.
fn cusp_constant(level: u32, cx: &Rat, dx: &Rat) -> Result<Cyc> {
    let w = Cyc::root_of_unity(&(dx / rat_int(2)));
    let wi = Cyc::root_of_unity(&(-dx / rat_int(2)));
    let diff = &w - &wi;
    let den = (&diff * &diff).inv()?;
    if level % 2 == 1 {
        let sign = if cx.to_integer().is_odd() { -1 } else { 1 };
        Ok((&(&w + &wi) * &den).scale(&rat(sign, 2)))
    } else {
        Ok(den)
    }
}

/// Holomorphic part `H_1` of `(1/2 pi i) e^{-pi i l c d x^2} (d/du A^_l(-x)) |_2 gamma`:
///
/// `C + (sum_{n > -cx, m >= M} - sum_{n < -cx, m < M}) (-1)^{l n} e^{2 pi i (m-M) d x} (m-M)
///   q^{(l/2)(n+cx)^2 + (n+cx)(m-M)}`, with `M = l c x + l/2`.
///
/// The expansion is in `q^{tau_mult}` when the point carries a multiplier.
pub fn h1_at_cusp(pt: &AppellPoint, g: &MatSL2, order: &Rat) -> Result<PSeries<Cyc>> {
    if g.c < 0 {
        return Err(Error::Domain("h1_at_cusp needs c >= 0".into()));
    }
    if pt.tau_mult <= 0 {
        return Err(Error::Domain("tau multiplier must be positive".into()));
    }
    let ord = order / rat_int(pt.tau_mult);
    let l = rat_int(pt.level as i64);
    let lh = &l / rat_int(2);
    let cx = rat_int(g.c) * &pt.x;
    let dx = rat_int(g.d) * &pt.x;
    let mm = &l * &cx + &lh;
    let mut terms: Vec<(Rat, Cyc)> = Vec::new();
    if cx.is_integer() {
        terms.push((Rat::zero(), cusp_constant(pt.level, &cx, &dx)?));
    }
    // y = n + cx ranges over cx + Z; every term has positive exponent.
    let y_at = |n: i64| rat_int(n) + &cx;
    let quad = |n: i64| {
        let y = y_at(n);
        &lh * &y * &y
    };
    let w_pos = mm.ceil() - &mm; // smallest m - M with m >= M
    for n in quadratic_range(&-&cx, &ord, quad) {
        let y = y_at(n);
        if y.is_zero() {
            continue;
        }
        let sign_n = &lh * rat_int(n); // (-1)^{l n} as a phase
        let (mut w, step, outer) = if y.is_positive() {
            (w_pos.clone(), Rat::one(), Rat::one())
        } else {
            (&w_pos - Rat::one(), -Rat::one(), -Rat::one())
        };
        loop {
            let e = &lh * &y * &y + &y * &w;
            if e >= ord {
                break;
            }
            if !w.is_zero() {
                let ph = &sign_n + &w * &dx;
                terms.push((e, Cyc::root_of_unity(&ph).scale(&(&outer * &w))));
            }
            w += &step;
        }
    }
    PSeries::from_terms(terms, Some(&ord)).scale_exponents(&rat_int(pt.tau_mult))
}

/// Two-case order formula with `X = ceil(-cx) + cx` and `M = l c x + l/2`.
pub fn two_case_order(level: u32, cx: &Rat) -> Rat {
    let l = rat_int(level as i64);
    let lh = &l / rat_int(2);
    let xx = (-cx).ceil() + cx;
    let mm = &l * cx + &lh;
    let fm = mm.ceil() - &mm;
    let one = Rat::one();
    if (&l + &one) * &xx + &fm > &lh + &one {
        let x1 = &xx - &one;
        &lh * &x1 * &x1 + &x1 * (&fm - &one)
    } else {
        &lh * &xx * &xx + &xx * &fm
    }
}

/// Exact leading exponent of `H_1` for the data `(l, cx, dx)`, `None` when `H_1` vanishes.
///
/// Agrees with [`two_case_order`] except in two boundary situations: `l c x + l/2`
/// integral with `cx` not (the minimal `m = M` terms carry weight zero), and odd `l`
/// with `cx` integral and `dx` half-integral (the constant vanishes). In both the
/// terms pair up under `(y, w) -> (-y, -w)` and the leading survivor is explicit.
pub fn leading_order(level: u32, cx: &Rat, dx: &Rat) -> Option<Rat> {
    let l = rat_int(level as i64);
    let lh = &l / rat_int(2);
    let half = rat(1, 2);
    let odd = level % 2 == 1;
    if cx.is_integer() {
        if odd && (dx - &half).is_integer() {
            return None;
        }
        return Some(Rat::zero());
    }
    let mm = &l * cx + &lh;
    if !mm.is_integer() {
        return Some(two_case_order(level, cx));
    }
    let xx = (-cx).ceil() + cx;
    let one = Rat::one();
    let e_pos = &lh * &xx * &xx + &xx;
    let y_neg = &one - &xx;
    let e_neg = &lh * &y_neg * &y_neg + &y_neg;
    if xx != half {
        return Some(e_pos.min(e_neg));
    }
    // |y| = 1/2: the pair at |w| = 1 has coefficient proportional to
    // e^{2 pi i d x} + (-1)^l e^{-2 pi i d x}.
    let two_dx = dx * rat_int(2);
    if odd {
        if two_dx.is_integer() {
            None
        } else {
            Some(&lh / rat_int(4) + &half)
        }
    } else if (dx * rat_int(4)).is_integer() && !(dx * rat_int(2)).is_integer() {
        Some(&lh / rat_int(4) + &one)
    } else {
        Some(&lh / rat_int(4) + &half)
    }
}

/// Order at `i infinity` of the holomorphic part of `d A^_l(-x) |_2 gamma`.
pub fn ord_dahat(pt: &AppellPoint, g: &MatSL2) -> Option<Rat> {
    let cx = rat_int(g.c) * &pt.x;
    let dx = rat_int(g.d) * &pt.x;
    leading_order(pt.level, &cx, &dx).map(|o| o * rat_int(pt.tau_mult))
}

/// `ord_{a/c} g_{l,x}(k tau)`, where `g_{l,x} = d A^_l(-x) |_2 (0 -1; 1 0)`.
///
/// The formula does not use `k x` integral, so any `k > 0` is accepted.
/// `g(k tau) |_2 gamma` is `d A^_l(-x) |_2 gamma'` followed by an upper-triangular
/// matrix of determinant k, where `gamma'` has first column `(-c, ka)/g`, `g = (ka, c)`.
pub fn ord_glx(level: u32, x: &Rat, k: i64, a: i64, c: i64) -> Result<Option<Rat>> {
    if k <= 0 || a < 0 || c < 0 {
        return Err(Error::Domain("ord_glx needs k > 0 and a, c >= 0".into()));
    }
    if a.gcd(&c) != 1 {
        return Err(Error::Domain(format!("gcd({a}, {c}) != 1")));
    }
    let g = (k * a).gcd(&c);
    let c1 = k * a / g;
    let a1 = -c / g;
    // d1 with a1 d1 = 1 mod c1
    let d1 = if c1 == 0 {
        a1 // a1 = -1 here, so a1 d1 = 1 for d1 = -1
    } else {
        let e = a1.extended_gcd(&c1);
        debug_assert_eq!(e.gcd.abs(), 1);
        e.x * e.gcd
    };
    let cx = rat_int(c1) * x;
    let dx = rat_int(d1) * x;
    Ok(leading_order(level, &cx, &dx).map(|o| o * rat(g * g, k)))
}

#[cfg(test)]
mod tests {
    use super::super::lerch::{appell_a, appell_du, d_appell_at};
    use super::*;
    use crate::qseries::pochhammer;

    fn valuation_or_none(pt: &AppellPoint, g: &MatSL2, bound: &Rat) -> Option<Rat> {
        h1_at_cusp(pt, g, bound).unwrap().valuation()
    }

    #[test]
    fn identity_constant_nonzero() {
        let pt = AppellPoint::new(3, rat(1, 5)).unwrap();
        let h = h1_at_cusp(&pt, &MatSL2::IDENTITY, &rat_int(3)).unwrap();
        assert_eq!(h.valuation(), Some(Rat::zero()));
        assert_eq!(ord_dahat(&pt, &MatSL2::IDENTITY), Some(Rat::zero()));
    }

    #[test]
    fn level_one_identity_matches_derivative() {
        for x in [rat(1, 5), rat(2, 7), rat(3, 4), rat(7, 3)] {
            let pt = AppellPoint::new(1, x.clone()).unwrap();
            let h = h1_at_cusp(&pt, &MatSL2::IDENTITY, &rat_int(20)).unwrap();
            let d = d_appell_at(1, &x, &rat_int(20)).unwrap();
            assert_eq!(h, d, "x = {x}");
        }
    }

    #[test]
    fn level_three_identity_differs_by_eta() {
        // For l = 3 the m = 1 < M = 3/2 terms sit in neither sum; together with the
        // constant they account for (1/2) e^{-pi i x} (q;q)_inf.
        let order = rat_int(25);
        let euler = pochhammer(&rat_int(1), &rat_int(1), &order)
            .unwrap()
            .to_cyc();
        for x in [rat(1, 5), rat(3, 7), rat(5, 6)] {
            let pt = AppellPoint::new(3, x.clone()).unwrap();
            let h = h1_at_cusp(&pt, &MatSL2::IDENTITY, &order).unwrap();
            let d = d_appell_at(3, &x, &order).unwrap();
            let corr = euler.scale(&Cyc::root_of_unity(&(-&x / rat_int(2))).scale(&rat(1, 2)));
            assert_eq!(h, d.add(&corr), "x = {x}");
        }
    }

    #[test]
    fn level_one_inversion_is_g() {
        // A_1 needs no completion, so H_1 at (0 -1; 1 0) is
        // q^{-x^2/2} (dA_1(x tau) - x A_1(x tau)).
        let order = rat_int(12);
        let z = Rat::zero();
        for x in [rat(1, 5), rat(2, 3), rat(3, 7)] {
            let pt = AppellPoint::new(1, x.clone()).unwrap();
            let h = h1_at_cusp(&pt, &MatSL2::S, &order).unwrap();
            let sh = &x * &x / rat_int(2);
            let o2 = &order + &sh;
            let d = appell_du(1, (&x, &z), (&z, &z), 1, &o2).unwrap();
            let a = appell_a(1, (&x, &z), (&z, &z), 1, &o2).unwrap();
            let g = d.sub(&a.scale_rat(&x)).shift(&-&sh);
            assert_eq!(h, g, "x = {x}");
        }
    }

    #[test]
    fn two_case_generic_agreement() {
        // away from the boundary cases the exact order is the two-case formula's
        for l in [1u32, 3] {
            for (j, k) in [(1i64, 5i64), (2, 5), (1, 7), (3, 7), (4, 11)] {
                for c in 1..12i64 {
                    let x = rat(j, k);
                    let cx = rat_int(c) * &x;
                    if cx.is_integer() {
                        continue;
                    }
                    assert_eq!(
                        leading_order(l, &cx, &Rat::zero()),
                        Some(two_case_order(l, &cx))
                    );
                }
            }
        }
    }

    #[test]
    fn boundary_case_differs_from_two_case_formula() {
        // l = 3, cx = 1/6 gives M = 2: the two-case formula gives 1/24, the series starts at 5/24
        let pt = AppellPoint::new(3, rat(1, 6)).unwrap();
        let g = MatSL2::completing(1, 1).unwrap();
        assert_eq!(two_case_order(3, &rat(1, 6)), rat(1, 24));
        assert_eq!(ord_dahat(&pt, &g), Some(rat(5, 24)));
        assert_eq!(valuation_or_none(&pt, &g, &rat_int(2)), Some(rat(5, 24)));
    }

    #[test]
    fn vanishing_holomorphic_part() {
        // x = 1/2 with odd level: every term cancels against its mirror
        let pt = AppellPoint::new(1, rat(1, 2)).unwrap();
        assert_eq!(ord_dahat(&pt, &MatSL2::IDENTITY), None);
        assert_eq!(
            valuation_or_none(&pt, &MatSL2::IDENTITY, &rat_int(12)),
            None
        );
    }

    #[test]
    fn glx_orders_at_level_p_cusps() {
        for p in [5i64, 7] {
            for v in 1..p {
                let x = rat(v, p);
                for c in 1..=(p - 1) / 2 {
                    assert_eq!(
                        ord_glx(3, &x, p, p, c).unwrap(),
                        Some(Rat::zero()),
                        "p/{c}, v={v}"
                    );
                }
                for a in 1..=(p - 1) / 2 {
                    let o = ord_glx(3, &x, p, a, p).unwrap().unwrap();
                    assert!(!o.is_negative(), "{a}/p, v={v}: {o}");
                }
            }
        }
    }

    #[test]
    fn glx_at_zero_is_order_at_infinity() {
        // k = 1, a = 0, c = 1 is ord at 0 of g, i.e. ord_{i inf} d A^(-x)
        for x in [rat(1, 5), rat(2, 7), rat(3, 4)] {
            let pt = AppellPoint::new(3, x.clone()).unwrap();
            assert_eq!(
                ord_glx(3, &x, 1, 0, 1).unwrap(),
                ord_dahat(&pt, &MatSL2::IDENTITY)
            );
        }
    }

    #[test]
    fn exhaustive_small_grid() {
        for level in 1u32..=4 {
            for k in 2i64..=8 {
                for j in 1..k {
                    for c in 0i64..=8 {
                        for d in -8i64..=8 {
                            if d.gcd(&c) != 1 {
                                continue;
                            }
                            let e = d.extended_gcd(&c);
                            let g = MatSL2::new(e.x * e.gcd, -(e.y * e.gcd), c, d).unwrap();
                            let pt = AppellPoint::new(level, rat(j, k)).unwrap();
                            let ord = ord_dahat(&pt, &g);
                            let bound = ord.clone().unwrap_or_else(|| rat_int(6)) + rat_int(1);
                            assert_eq!(
                                valuation_or_none(&pt, &g, &bound),
                                ord,
                                "l={level} x={j}/{k} c={c} d={d}"
                            );
                        }
                    }
                }
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(100))]
        #[test]
        fn leading_exponent_is_order(
            odd_level in proptest::bool::ANY,
            k in 2i64..=11,
            j in 1i64..200,
            c in 0i64..=20,
            d in -40i64..=40,
            a_shift in -3i64..=3,
        ) {
            let level = if odd_level { 3 } else { 1 };
            let j = if j % k == 0 { j + 1 } else { j };
            let x = rat(j, k);
            // coprime (c, d) with some (a, b); shifting a by c leaves the order unchanged
            let d = if c == 0 { 1 } else if d.gcd(&c) == 1 { d } else { 1 };
            let e = d.extended_gcd(&c);
            let (a, b) = (e.x * e.gcd + a_shift * c, -(e.y * e.gcd) + a_shift * d);
            let g = MatSL2::new(a, b, c, d).unwrap();
            let pt = AppellPoint::new(level, x).unwrap();
            let ord = ord_dahat(&pt, &g);
            let bound = ord.clone().unwrap_or_else(|| rat_int(6)) + rat_int(1);
            proptest::prop_assert_eq!(valuation_or_none(&pt, &g, &bound), ord);
        }
    }

    #[test]
    fn completing_matrix() {
        let m = MatSL2::completing(5, 7).unwrap();
        assert_eq!((m.a, m.c), (5, 7));
        assert_eq!(m.a * m.d - m.b * m.c, 1);
        assert!(MatSL2::completing(4, 6).is_err());
        assert!(MatSL2::new(1, 1, 1, 1).is_err());
    }
}
