use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, Coeff, Cyc, Rat};

/// Truncated Puiseux series in q.
///
/// Exponents live on the lattice `(1/den) Z`; a term with key `k` has
/// exponent `k/den`. `trunc` (also a key) means every coefficient below
/// `q^{trunc/den}` is known; `None` marks an exact Laurent polynomial.
/// Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct PSeries<C: Coeff = Rat> {
    den: i64,
    terms: BTreeMap<i64, C>,
    trunc: Option<i64>,
}

fn key_of(e: &Rat, den: i64) -> Option<i64> {
    let scaled = e * Rat::from_integer(den.into());
    if scaled.is_integer() {
        scaled.to_integer().to_i64()
    } else {
        None
    }
}

fn den_of(e: &Rat) -> i64 {
    e.denom().to_i64().expect("exponent denominator too large")
}

/// Smallest key that is >= the given exponent.
fn ceil_key(e: &Rat, den: i64) -> i64 {
    (e * Rat::from_integer(den.into()))
        .ceil()
        .to_integer()
        .to_i64()
        .expect("exponent too large")
}

impl<C: Coeff> PSeries<C> {
    /// The zero series known below `q^order`.
    pub fn zero_to(order: &Rat) -> Self {
        let den = den_of(order);
        PSeries {
            den,
            terms: BTreeMap::new(),
            trunc: key_of(order, den),
        }
    }

    /// Exact zero.
    pub fn zero() -> Self {
        PSeries {
            den: 1,
            terms: BTreeMap::new(),
            trunc: None,
        }
    }

    /// Exact monomial `c q^e`.
    pub fn monomial(c: C, e: &Rat) -> Self {
        let den = den_of(e);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(key_of(e, den).unwrap(), c);
        }
        PSeries {
            den,
            terms,
            trunc: None,
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, &Rat::zero())
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    /// Builds a series from `(exponent, coefficient)` pairs, known below `order`
    /// (or exact when `order` is `None`). Terms at or beyond `order` are dropped.
    pub fn from_terms<I>(terms: I, order: Option<&Rat>) -> Self
    where
        I: IntoIterator<Item = (Rat, C)>,
    {
        let terms: Vec<(Rat, C)> = terms.into_iter().collect();
        let mut den = order.map_or(1, den_of);
        for (e, _) in &terms {
            den = den.lcm(&den_of(e));
        }
        let trunc = order.map(|o| key_of(o, den).unwrap());
        let mut map: BTreeMap<i64, C> = BTreeMap::new();
        for (e, c) in terms {
            let k = key_of(&e, den).unwrap();
            if trunc.is_some_and(|t| k >= t) {
                continue;
            }
            let entry = map.entry(k).or_insert_with(C::zero);
            *entry = entry.add_ref(&c);
        }
        map.retain(|_, c| !c.is_zero());
        PSeries {
            den,
            terms: map,
            trunc,
        }
        .normalized()
    }

    /// Dense constructor: `coeffs[i]` is the coefficient of `q^{start + i*step}`.
    pub fn from_dense(start: &Rat, step: &Rat, coeffs: Vec<C>, order: Option<&Rat>) -> Self {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (start + step * Rat::from_integer(BigInt::from(i)), c));
        Self::from_terms(terms, order)
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    fn exp(&self, k: i64) -> Rat {
        Rat::new(k.into(), self.den.into())
    }

    /// Truncation order, `None` when exact.
    pub fn order(&self) -> Option<Rat> {
        self.trunc.map(|t| self.exp(t))
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<Rat> {
        self.terms.keys().next().map(|&k| self.exp(k))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rat, &C)> + '_ {
        self.terms.iter().map(|(&k, c)| (self.exp(k), c))
    }

    /// Coefficient of `q^e`. Exponents beyond the truncation are an error.
    pub fn coeff(&self, e: &Rat) -> Result<C> {
        if let Some(o) = self.order() {
            if e >= &o {
                return Err(Error::TruncationEmpty);
            }
        }
        Ok(key_of(e, self.den)
            .and_then(|k| self.terms.get(&k).cloned())
            .unwrap_or_else(C::zero))
    }

    /// Coefficient of `q^n` for integral n; zero beyond the stored range.
    pub fn coeff_int(&self, n: i64) -> C {
        self.terms
            .get(&(n * self.den))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    fn rebased(&self, den: i64) -> Self {
        if den == self.den {
            return self.clone();
        }
        assert!(den % self.den == 0);
        let f = den / self.den;
        PSeries {
            den,
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k * f, c.clone()))
                .collect(),
            trunc: self.trunc.map(|t| t * f),
        }
    }

    /// Shrinks the exponent lattice to the coarsest one holding every key.
    fn normalized(mut self) -> Self {
        let mut g = self.den;
        for &k in self.terms.keys() {
            g = g.gcd(&k);
            if g == 1 {
                return self;
            }
        }
        if let Some(t) = self.trunc {
            g = g.gcd(&t);
        }
        if g > 1 {
            self.den /= g;
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(k, c)| (k / g, c))
                .collect();
            self.trunc = self.trunc.map(|t| t / g);
        }
        self
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let d = a.den.lcm(&b.den);
        (a.rebased(d), b.rebased(d))
    }

    fn min_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    /// Drops everything at or above `q^order`.
    pub fn truncate(&self, order: &Rat) -> Self {
        let d = self.den.lcm(&den_of(order));
        let mut s = self.rebased(d);
        let t = key_of(order, d).unwrap();
        s.terms.retain(|&k, _| k < t);
        s.trunc = Self::min_trunc(s.trunc, Some(t));
        s.normalized()
    }

    fn combine(&self, o: &Self, neg: bool) -> Self {
        let (mut a, b) = Self::common(self, o);
        a.trunc = Self::min_trunc(a.trunc, b.trunc);
        for (k, c) in b.terms {
            if a.trunc.is_some_and(|t| k >= t) {
                continue;
            }
            let e = a.terms.entry(k).or_insert_with(C::zero);
            *e = if neg { e.sub_ref(&c) } else { e.add_ref(&c) };
        }
        if let Some(t) = a.trunc {
            a.terms.retain(|&k, c| k < t && !c.is_zero());
        } else {
            a.terms.retain(|_, c| !c.is_zero());
        }
        a.normalized()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    pub fn neg(&self) -> Self {
        PSeries {
            den: self.den,
            terms: self.terms.iter().map(|(&k, c)| (k, c.neg_ref())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut terms = BTreeMap::new();
        for (&k, x) in &self.terms {
            let y = x.mul_ref(c);
            if !y.is_zero() {
                terms.insert(k, y);
            }
        }
        PSeries {
            den: self.den,
            terms,
            trunc: self.trunc,
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&C::from_rat(r))
    }

    /// Lowest key known to carry no nonzero term below it: the valuation, or
    /// the truncation for an empty truncated series, `None` for exact zero.
    fn floor_key(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.trunc)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = Self::common(self, o);
        let (fa, fb) = match (a.floor_key(), b.floor_key()) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                return PSeries {
                    den: a.den,
                    terms: BTreeMap::new(),
                    trunc: None,
                }
            }
        };
        let trunc = Self::min_trunc(a.trunc.map(|t| t + fb), b.trunc.map(|t| t + fa));
        let mut terms: BTreeMap<i64, C> = BTreeMap::new();
        for (&ka, ca) in &a.terms {
            for (&kb, cb) in &b.terms {
                let k = ka + kb;
                if trunc.is_some_and(|t| k >= t) {
                    break;
                }
                let e = terms.entry(k).or_insert_with(C::zero);
                *e = e.add_ref(&ca.mul_ref(cb));
            }
        }
        terms.retain(|_, c| !c.is_zero());
        PSeries {
            den: a.den,
            terms,
            trunc,
        }
        .normalized()
    }

    /// Multiplicative inverse, capped at `q^order` when given. An exact
    /// non-monomial series needs an explicit order.
    pub fn inv_to(&self, order: Option<&Rat>) -> Result<Self> {
        let (&v, c0) = self.terms.iter().next().ok_or(Error::NotInvertible)?;
        let c0inv = c0.inv_ref().ok_or(Error::NotInvertible)?;
        let mut den = self.den;
        if let Some(o) = order {
            den = den.lcm(&den_of(o));
        }
        let s = self.rebased(den);
        let v = v * (den / self.den);
        // Absolute truncation of the result: relative precision minus valuation.
        let mut trunc = s.trunc.map(|t| t - 2 * v);
        if let Some(o) = order {
            trunc = Self::min_trunc(trunc, Some(key_of(o, den).unwrap()));
        }
        if s.terms.len() == 1 {
            let mut terms = BTreeMap::new();
            if trunc.map_or(true, |t| -v < t) {
                terms.insert(-v, c0inv);
            }
            return Ok(PSeries { den, terms, trunc }.normalized());
        }
        let trunc = trunc
            .ok_or_else(|| Error::Domain("inverse of an exact series needs an order".into()))?;
        let offs: Vec<(i64, &C)> = s.terms.iter().skip(1).map(|(&k, c)| (k - v, c)).collect();
        let g = offs.iter().fold(0i64, |g, &(o, _)| g.gcd(&o));
        let limit = trunc + v; // relative keys below this are needed
        let mut terms = BTreeMap::new();
        if limit > 0 {
            let n = ((limit - 1) / g + 1) as usize;
            let mut r: Vec<C> = Vec::with_capacity(n);
            r.push(c0inv.clone());
            for i in 1..n {
                let mut acc = C::zero();
                for &(o, c) in &offs {
                    let j = (o / g) as usize;
                    if j > i {
                        break;
                    }
                    if !r[i - j].is_zero() {
                        acc = acc.add_ref(&c.mul_ref(&r[i - j]));
                    }
                }
                r.push(acc.mul_ref(&c0inv).neg_ref());
            }
            for (i, c) in r.into_iter().enumerate() {
                if !c.is_zero() {
                    terms.insert(i as i64 * g - v, c);
                }
            }
        }
        Ok(PSeries {
            den,
            terms,
            trunc: Some(trunc),
        }
        .normalized())
    }

    pub fn inv(&self) -> Result<Self> {
        self.inv_to(None)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Integer power; negative powers go through the inverse.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Multiplies by `q^alpha`.
    pub fn shift(&self, alpha: &Rat) -> Self {
        let d = self.den.lcm(&den_of(alpha));
        let mut s = self.rebased(d);
        let a = key_of(alpha, d).unwrap();
        s.terms = std::mem::take(&mut s.terms)
            .into_iter()
            .map(|(k, c)| (k + a, c))
            .collect();
        s.trunc = s.trunc.map(|t| t + a);
        s.normalized()
    }

    /// Substitutes `q -> q^m`. Negative `m` is only meaningful for exact series.
    pub fn scale_exponents(&self, m: &Rat) -> Result<Self> {
        if m.is_zero() || (m.is_negative() && self.trunc.is_some()) {
            return Err(Error::ExponentDomain(format!(
                "cannot rescale a truncated series by {m}"
            )));
        }
        let num = m
            .numer()
            .to_i64()
            .ok_or_else(|| Error::ExponentDomain("scale too large".into()))?;
        let md = den_of(m);
        Ok(PSeries {
            den: self.den * md,
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k * num, c.clone()))
                .collect(),
            trunc: self.trunc.map(|t| t * num),
        }
        .normalized())
    }

    /// `q d/dq`.
    pub fn qd_dq(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            let y = c.scale_rat(&self.exp(k));
            if !y.is_zero() {
                terms.insert(k, y);
            }
        }
        PSeries {
            den: self.den,
            terms,
            trunc: self.trunc,
        }
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter<F: Fn(&Rat) -> bool>(&self, keep: F) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(&k, _)| keep(&self.exp(k)))
            .map(|(&k, c)| (k, c.clone()))
            .collect();
        PSeries {
            den: self.den,
            terms,
            trunc: self.trunc,
        }
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> PSeries<D> {
        let mut terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            let y = f(c);
            if !y.is_zero() {
                terms.insert(k, y);
            }
        }
        PSeries {
            den: self.den,
            terms,
            trunc: self.trunc,
        }
    }

    pub fn try_map_coeffs<D: Coeff, F: Fn(&C) -> Result<D>>(&self, f: F) -> Result<PSeries<D>> {
        let mut terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            let y = f(c)?;
            if !y.is_zero() {
                terms.insert(k, y);
            }
        }
        Ok(PSeries {
            den: self.den,
            terms,
            trunc: self.trunc,
        })
    }

    /// First exponent below `order` (and below both truncations) where the
    /// two series differ.
    pub fn first_difference(&self, o: &Self, order: Option<&Rat>) -> Option<Rat> {
        let mut d = self.sub(o);
        if let Some(ord) = order {
            d = d.truncate(ord);
        }
        d.valuation()
    }

    /// Text dump: a truncation header, then `exponent<TAB>coefficient` lines.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        match self.order() {
            Some(o) => writeln!(out, "# O(q^{})", fmt_rat(&o)).unwrap(),
            None => writeln!(out, "# exact").unwrap(),
        }
        for (e, c) in self.iter() {
            writeln!(out, "{}\t{}", fmt_rat(&e), c.render()).unwrap();
        }
        out
    }

    /// First key of the lattice at or above `e`, as an exponent.
    pub fn ceil_to_lattice(&self, e: &Rat) -> Rat {
        self.exp(ceil_key(e, self.den))
    }
}

impl<C: Coeff> PartialEq for PSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::common(self, other);
        a.trunc == b.trunc && a.terms == b.terms
    }
}

impl PSeries<Rat> {
    pub fn to_cyc(&self) -> PSeries<Cyc> {
        self.map_coeffs(|c| Cyc::from_rat(c.clone()))
    }
}

impl PSeries<Cyc> {
    /// Converts to rational coefficients; fails if any coefficient is irrational.
    pub fn collapse(&self) -> Result<PSeries<Rat>> {
        self.try_map_coeffs(|c| c.to_rat())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use proptest::prelude::*;

    fn poly(coeffs: &[(i64, i64, i64)], order: Option<i64>) -> PSeries {
        // (exponent numerator, exponent denominator, coefficient)
        PSeries::from_terms(
            coeffs.iter().map(|&(n, d, c)| (rat(n, d), rat_int(c))),
            order.map(rat_int).as_ref(),
        )
    }

    #[test]
    fn inverse_of_one_minus_q() {
        let s = poly(&[(0, 1, 1), (1, 1, -1)], None);
        let inv = s.inv_to(Some(&rat_int(6))).unwrap();
        for n in 0..6 {
            assert_eq!(inv.coeff_int(n), rat_int(1));
        }
        assert_eq!(inv.order(), Some(rat_int(6)));
    }

    #[test]
    fn fractional_exponents_and_shift() {
        let s = poly(&[(1, 3, 2), (2, 3, 1)], Some(2));
        assert_eq!(s.den(), 3);
        let t = s.shift(&rat(-1, 3));
        assert_eq!(t.valuation(), Some(rat_int(0)));
        assert_eq!(t.order(), Some(rat(5, 3)));
        assert_eq!(t.coeff(&rat(1, 3)).unwrap(), rat_int(1));
        assert!(t.coeff(&rat(2, 1)).is_err());
    }

    #[test]
    fn product_truncation() {
        // (1 + q + O(q^3)) * (q^2 + O(q^4)) = q^2 + q^3 + O(q^4)
        let a = poly(&[(0, 1, 1), (1, 1, 1)], Some(3));
        let b = poly(&[(2, 1, 1)], Some(4));
        let p = a.mul(&b);
        assert_eq!(p.order(), Some(rat_int(4)));
        assert_eq!(p.coeff_int(3), rat_int(1));
    }

    #[test]
    fn scale_and_derivative() {
        let a = poly(&[(1, 1, 1), (2, 1, 3)], Some(5));
        let b = a.scale_exponents(&rat(1, 2)).unwrap();
        assert_eq!(b.coeff(&rat(1, 2)).unwrap(), rat_int(1));
        assert_eq!(b.order(), Some(rat(5, 2)));
        let d = a.qd_dq();
        assert_eq!(d.coeff_int(2), rat_int(6));
        assert!(a.scale_exponents(&rat_int(-1)).is_err());
    }

    #[test]
    fn not_invertible() {
        assert_eq!(
            PSeries::<Rat>::zero_to(&rat_int(3)).inv().unwrap_err(),
            Error::NotInvertible
        );
    }

    #[test]
    fn dump_format() {
        let a = PSeries::from_terms(
            [(rat(-1, 2), rat(3, 4)), (rat_int(2), rat_int(-1))],
            Some(&rat_int(3)),
        );
        assert_eq!(a.dump(), "# O(q^3)\n-1/2\t3/4\n2\t-1\n");
        let z = PSeries::<Cyc>::monomial(Cyc::zeta_pow(3, 1), &rat(1, 24));
        assert_eq!(z.dump(), "# exact\n1/24\t[0,1]@3\n");
    }

    fn arb_series() -> impl Strategy<Value = PSeries> {
        (
            proptest::collection::vec(
                (-2i64..12, prop::sample::select(vec![1i64, 2, 3]), -4i64..5),
                1..8,
            ),
            8i64..14,
        )
            .prop_map(|(v, o)| poly(&v, Some(o)))
    }

    fn unit_series() -> impl Strategy<Value = PSeries> {
        (
            proptest::collection::vec((1i64..10, -3i64..4), 0..6),
            1i64..4,
            10i64..14,
        )
            .prop_map(|(v, c0, o)| {
                let mut t = vec![(rat_int(0), rat_int(c0))];
                t.extend(v.into_iter().map(|(e, c)| (rat_int(e), rat_int(c))));
                PSeries::from_terms(t, Some(&rat_int(o)))
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b), b.add(&a));
            // Precision of (ab)c and a(bc) can differ; compare below the common order.
            let l = a.mul(&b).mul(&c);
            let r = a.mul(&b.mul(&c));
            let o = std::cmp::min(l.order().unwrap(), r.order().unwrap());
            prop_assert_eq!(l.first_difference(&r, Some(&o)), None);
            let l = a.mul(&b.add(&c));
            let r = a.mul(&b).add(&a.mul(&c));
            let o = std::cmp::min(l.order().unwrap(), r.order().unwrap());
            prop_assert_eq!(l.first_difference(&r, Some(&o)), None);
        }

        #[test]
        fn inverse_round_trip(a in unit_series()) {
            let p = a.mul(&a.inv().unwrap());
            let o = p.order().unwrap();
            prop_assert_eq!(p.first_difference(&PSeries::one(), Some(&o)), None);
            prop_assert!(o >= rat_int(10));
        }

        #[test]
        fn shift_and_scale_commute_with_product(a in arb_series(), b in arb_series(),
                                                 n in 1i64..4, d in 1i64..4) {
            let m = rat(n, d);
            let l = a.mul(&b).scale_exponents(&m).unwrap();
            let r = a.scale_exponents(&m).unwrap().mul(&b.scale_exponents(&m).unwrap());
            prop_assert_eq!(l, r);
            let al = rat(n, 7);
            prop_assert_eq!(a.shift(&al).mul(&b), a.mul(&b).shift(&al));
        }
    }
}
