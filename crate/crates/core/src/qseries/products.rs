use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::PSeries;
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, serde_rat, Coeff, Rat};

fn lattice(vals: &[&Rat]) -> i64 {
    vals.iter().fold(1i64, |d, r| {
        d.lcm(&r.denom().to_i64().expect("denominator too large"))
    })
}

fn units(e: &Rat, den: i64) -> i64 {
    (e * rat_int(den))
        .to_integer()
        .to_i64()
        .expect("exponent too large")
}

/// Number of lattice points `k/den` strictly below `order`, counted from 0.
fn dense_len(order: &Rat, den: i64) -> usize {
    let t = (order * rat_int(den)).ceil().to_integer();
    t.to_i64().unwrap_or(0).max(0) as usize
}

/// In-place multiply by `1 - a q^e` on a dense vector indexed by lattice units.
fn mul_binomial<C: Coeff>(v: &mut [C], a: &C, e: usize) {
    if e == 0 {
        let f = C::one().sub_ref(a);
        v.iter_mut().for_each(|x| *x = x.mul_ref(&f));
        return;
    }
    for n in (e..v.len()).rev() {
        if !v[n - e].is_zero() {
            v[n] = v[n].sub_ref(&a.mul_ref(&v[n - e]));
        }
    }
}

/// In-place divide by `1 - a q^e`, e > 0.
fn div_binomial<C: Coeff>(v: &mut [C], a: &C, e: usize) {
    debug_assert!(e > 0);
    for n in e..v.len() {
        if !v[n - e].is_zero() {
            v[n] = v[n].add_ref(&a.mul_ref(&v[n - e]));
        }
    }
}

/// Product of factors `(1 - c q^e)^pow`, known below `q^order`.
///
/// Factors with `e < 0` are rewritten as `-c q^e (1 - c^{-1} q^{-e})`, so
/// the caller must list every factor whose exponent, after that rewrite,
/// lies below `order - shift`, where `shift` is the sum of negative exponents.
pub fn binomial_product<C: Coeff>(factors: &[(C, Rat, i64)], order: &Rat) -> Result<PSeries<C>> {
    let mut konst = C::one();
    let mut shift = Rat::zero();
    let mut pos: Vec<(C, Rat, i64)> = Vec::new();
    for (c, e, p) in factors {
        if *p == 0 || c.is_zero() {
            continue;
        }
        if e.is_zero() {
            let f = C::one().sub_ref(c);
            if f.is_zero() {
                if *p < 0 {
                    return Err(Error::NotInvertible);
                }
                return Ok(PSeries::zero_to(order));
            }
            let f = if *p < 0 {
                f.inv_ref().ok_or(Error::NotInvertible)?
            } else {
                f
            };
            for _ in 0..p.unsigned_abs() {
                konst = konst.mul_ref(&f);
            }
        } else if e.is_negative() {
            let nc = c.neg_ref();
            let nc = if *p < 0 {
                nc.inv_ref().ok_or(Error::NotInvertible)?
            } else {
                nc
            };
            for _ in 0..p.unsigned_abs() {
                konst = konst.mul_ref(&nc);
            }
            shift += e * rat_int(*p);
            pos.push((c.inv_ref().ok_or(Error::NotInvertible)?, -e, *p));
        } else {
            pos.push((c.clone(), e.clone(), *p));
        }
    }
    let rel = order - &shift;
    let mut refs: Vec<&Rat> = pos.iter().map(|f| &f.1).collect();
    refs.push(&rel);
    let den = lattice(&refs);
    let len = dense_len(&rel, den);
    let mut v = vec![C::zero(); len];
    if len > 0 {
        v[0] = konst;
    }
    for (c, e, p) in &pos {
        let u = units(e, den) as usize;
        if u >= len {
            continue;
        }
        for _ in 0..p.unsigned_abs() {
            if *p > 0 {
                mul_binomial(&mut v, c, u);
            } else {
                div_binomial(&mut v, c, u);
            }
        }
    }
    Ok(PSeries::from_dense(&shift, &rat(1, den), v, Some(order)))
}

/// `(q^a; q^step)_inf` known below `q^order`.
pub fn pochhammer(a: &Rat, step: &Rat, order: &Rat) -> Result<PSeries> {
    if !step.is_positive() {
        return Err(Error::Domain("pochhammer step must be positive".into()));
    }
    // a + i*step = 0 for some i >= 0 makes a factor vanish.
    let i0 = -(a / step);
    if i0.is_integer() && !i0.is_negative() {
        return Err(Error::VanishingFactor);
    }
    let mut factors = Vec::new();
    let mut shift = Rat::zero();
    let mut e = a.clone();
    while e.is_negative() {
        shift += &e;
        factors.push((Rat::one(), e.clone(), 1));
        e += step;
    }
    while e < order - &shift {
        factors.push((Rat::one(), e.clone(), 1));
        e += step;
    }
    binomial_product(&factors, order)
}

/// `P_2(x) = x^2 - x + 1/6`.
pub fn bernoulli2(x: &Rat) -> Rat {
    x * x - x + rat(1, 6)
}

/// Eta quotient `q^{q_power} * prod eta(m tau)^r * prod eta_{p,delta}^s`, where
/// `eta_{p,delta} = q^{(p/2) P_2(delta/p)} (q^delta, q^{p-delta}; q^p)_inf`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaSpec {
    #[serde(with = "serde_rat", default = "Rat::zero")]
    pub q_power: Rat,
    #[serde(default)]
    pub eta: Vec<(i64, i64)>,
    #[serde(default)]
    pub geta: Vec<(i64, i64, i64)>,
}

impl Default for EtaSpec {
    fn default() -> Self {
        Self::one()
    }
}

impl EtaSpec {
    pub fn one() -> Self {
        EtaSpec {
            q_power: Rat::zero(),
            eta: Vec::new(),
            geta: Vec::new(),
        }
    }

    pub fn qpow(mut self, e: Rat) -> Self {
        self.q_power += e;
        self
    }

    pub fn eta(mut self, m: i64, r: i64) -> Self {
        self.eta.push((m, r));
        self
    }

    pub fn geta(mut self, p: i64, delta: i64, s: i64) -> Self {
        self.geta.push((p, delta, s));
        self
    }

    /// Multiplies by `J_k^pow = (q^k; q^k)_inf^pow`.
    pub fn j(self, k: i64, pow: i64) -> Self {
        self.eta(k, pow).qpow(rat(-k * pow, 24))
    }

    /// Multiplies by `J_{k,a}^pow = (q^a, q^{k-a}, q^k; q^k)_inf^pow`.
    pub fn jka(self, k: i64, a: i64, pow: i64) -> Self {
        let lead = rat(k, 2) * bernoulli2(&rat(a, k));
        self.geta(k, a, pow).j(k, pow).qpow(-lead * rat_int(pow))
    }

    pub fn mul(mut self, o: &EtaSpec) -> Self {
        self.q_power += &o.q_power;
        self.eta.extend_from_slice(&o.eta);
        self.geta.extend_from_slice(&o.geta);
        self
    }

    pub fn pow(&self, e: i64) -> Self {
        EtaSpec {
            q_power: &self.q_power * rat_int(e),
            eta: self.eta.iter().map(|&(m, r)| (m, r * e)).collect(),
            geta: self.geta.iter().map(|&(p, d, s)| (p, d, s * e)).collect(),
        }
    }

    /// Reduces generalized factors to `0 < delta <= p/2`, tracking the sign
    /// from `eta_{p,delta+p} = -eta_{p,delta}`.
    fn normalized_geta(&self) -> Result<(i64, Vec<(i64, i64, i64)>)> {
        let mut sign = 1i64;
        let mut out = Vec::new();
        for &(p, d, s) in &self.geta {
            if p <= 0 {
                return Err(Error::Domain(format!("eta_{{{p},{d}}} needs p > 0")));
            }
            let r = d.rem_euclid(p);
            if r == 0 {
                return Err(Error::VanishingFactor);
            }
            let k = (d - r) / p;
            if k.rem_euclid(2) == 1 && s.rem_euclid(2) == 1 {
                sign = -sign;
            }
            out.push((p, r.min(p - r), s));
        }
        Ok((sign, out))
    }

    /// Exponent of q in front of the pure products.
    pub fn leading_exponent(&self) -> Result<Rat> {
        let (_, geta) = self.normalized_geta()?;
        let mut lead = self.q_power.clone();
        for &(m, r) in &self.eta {
            lead += rat(m * r, 24);
        }
        for &(p, d, s) in &geta {
            lead += rat(p * s, 2) * bernoulli2(&rat(d, p));
        }
        Ok(lead)
    }

    /// Expansion known below `q^order`.
    pub fn expand(&self, order: &Rat) -> Result<PSeries> {
        let (sign, geta) = self.normalized_geta()?;
        let lead = self.leading_exponent()?;
        let need = order - &lead;
        let len = dense_len(&need, 1);
        let mut v = vec![Rat::zero(); len];
        if len > 0 {
            v[0] = rat_int(sign);
        }
        let one = Rat::one();
        let mut apply = |e: i64, pow: i64| {
            let e = e as usize;
            if e >= len {
                return;
            }
            for _ in 0..pow.unsigned_abs() {
                if pow > 0 {
                    mul_binomial(&mut v, &one, e);
                } else {
                    div_binomial(&mut v, &one, e);
                }
            }
        };
        for &(m, r) in &self.eta {
            if m <= 0 {
                return Err(Error::Domain(format!("eta({m} tau) needs m > 0")));
            }
            let mut e = m;
            while (e as usize) < len {
                apply(e, r);
                e += m;
            }
        }
        for &(p, d, s) in &geta {
            for start in [d, p - d] {
                let mut e = start;
                while (e as usize) < len {
                    apply(e, s);
                    e += p;
                }
            }
        }
        Ok(PSeries::from_dense(&lead, &Rat::one(), v, Some(order)))
    }
}

/// `E_2(mult * tau) = 1 - 24 sum sigma_1(n) q^{mult n}`, known below `q^order`.
pub fn e2_expand(mult: i64, order: &Rat) -> PSeries {
    assert!(mult > 0);
    let n_max = dense_len(order, 1);
    let mut terms = vec![(Rat::zero(), Rat::one())];
    let mut n = 1i64;
    while ((n * mult) as usize) < n_max {
        let sigma: i64 = (1..=n).filter(|d| n % d == 0).sum();
        terms.push((rat_int(n * mult), rat_int(-24 * sigma)));
        n += 1;
    }
    PSeries::from_terms(terms, Some(order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagonal(order: i64) -> PSeries {
        // Euler: (q;q)_inf = sum (-1)^k q^{k(3k-1)/2}
        let mut t = Vec::new();
        for k in -20i64..=20 {
            let e = k * (3 * k - 1) / 2;
            if e < order {
                t.push((rat_int(e), rat_int(if k % 2 == 0 { 1 } else { -1 })));
            }
        }
        PSeries::from_terms(t, Some(&rat_int(order)))
    }

    #[test]
    fn euler_product() {
        let p = pochhammer(&rat_int(1), &rat_int(1), &rat_int(9)).unwrap();
        let expect = PSeries::from_terms(
            [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1)].map(|(e, c)| (rat_int(e), rat_int(c))),
            Some(&rat_int(9)),
        );
        assert_eq!(p, expect);
        assert_eq!(
            pochhammer(&rat_int(1), &rat_int(1), &rat_int(60)).unwrap(),
            pentagonal(60)
        );
        let p5 = pochhammer(&rat_int(5), &rat_int(5), &rat_int(7)).unwrap();
        assert_eq!(
            p5,
            PSeries::from_terms(
                [(rat_int(0), rat_int(1)), (rat_int(5), rat_int(-1))],
                Some(&rat_int(7))
            )
        );
    }

    #[test]
    fn vanishing_factor() {
        assert_eq!(
            pochhammer(&rat_int(0), &rat_int(1), &rat_int(5)).unwrap_err(),
            Error::VanishingFactor
        );
        assert_eq!(
            pochhammer(&rat_int(-3), &rat_int(1), &rat_int(5)).unwrap_err(),
            Error::VanishingFactor
        );
    }

    #[test]
    fn negative_start_pochhammer() {
        // (q^{-1}; q^2)_inf = (1 - q^{-1}) (q; q^2)_inf
        let a = pochhammer(&rat_int(-1), &rat_int(2), &rat_int(10)).unwrap();
        let b = PSeries::from_terms([(rat_int(0), rat_int(1)), (rat_int(-1), rat_int(-1))], None)
            .mul(&pochhammer(&rat_int(1), &rat_int(2), &rat_int(11)).unwrap());
        assert_eq!(a.first_difference(&b, Some(&rat_int(10))), None);
        assert_eq!(a.order(), Some(rat_int(10)));
    }

    #[test]
    fn generalized_eta_leading_exponent() {
        let e = EtaSpec::one().geta(5, 1, 1);
        assert_eq!(e.leading_exponent().unwrap(), rat(1, 60));
        let s = e.expand(&rat_int(3)).unwrap();
        assert_eq!(s.valuation(), Some(rat(1, 60)));
        // eta_{p,delta+p} = -eta_{p,delta}, eta_{p,p-delta} = eta_{p,delta}
        let neg = EtaSpec::one().geta(5, 6, 1).expand(&rat_int(3)).unwrap();
        assert_eq!(neg, s.neg());
        assert_eq!(EtaSpec::one().geta(5, 4, 1).expand(&rat_int(3)).unwrap(), s);
    }

    #[test]
    fn j_symbols_have_no_q_power() {
        let j = EtaSpec::one().jka(5, 1, 1).expand(&rat_int(12)).unwrap();
        let direct = pochhammer(&rat_int(1), &rat_int(5), &rat_int(12))
            .unwrap()
            .mul(&pochhammer(&rat_int(4), &rat_int(5), &rat_int(12)).unwrap())
            .mul(&pochhammer(&rat_int(5), &rat_int(5), &rat_int(12)).unwrap());
        assert_eq!(j, direct);
        assert_eq!(
            EtaSpec::one().j(1, 1).expand(&rat_int(60)).unwrap(),
            pentagonal(60)
        );
    }

    #[test]
    fn eta_cube_is_jacobi() {
        // (q;q)^3 = sum (-1)^n (2n+1) q^{n(n+1)/2}
        let s = EtaSpec::one().j(1, 3).expand(&rat_int(40)).unwrap();
        let mut t = Vec::new();
        for n in 0i64..10 {
            let e = n * (n + 1) / 2;
            if e < 40 {
                t.push((
                    rat_int(e),
                    rat_int(if n % 2 == 0 { 2 * n + 1 } else { -(2 * n + 1) }),
                ));
            }
        }
        assert_eq!(s, PSeries::from_terms(t, Some(&rat_int(40))));
    }

    #[test]
    fn e2_coefficients() {
        let e = e2_expand(1, &rat_int(5));
        assert_eq!(e.coeff_int(1), rat_int(-24));
        assert_eq!(e.coeff_int(2), rat_int(-72));
        assert_eq!(e.coeff_int(3), rat_int(-96));
        assert_eq!(e.coeff_int(4), rat_int(-168));
        // E_2 = 1 - 24 q d/dq log (q;q)_inf
        let eta = pochhammer(&rat_int(1), &rat_int(1), &rat_int(30)).unwrap();
        let log_der = eta.qd_dq().div(&eta).unwrap();
        let other = PSeries::one().add(&log_der.scale_rat(&rat_int(24)));
        assert_eq!(e2_expand(1, &rat_int(30)), other);
    }
}
