use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::linalg;
use super::{Coeff, Rat};
use crate::error::{Error, Result};

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    assert!(n >= 1, "cyclotomic index must be positive");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every proper-divisor cyclotomic factor.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_exact_monic(&num, &cyclotomic_poly(d));
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn div_exact_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![0i64; num.len() - dn];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dn];
        quo[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quo
}

fn euler_phi(n: u32) -> usize {
    cyclotomic_poly(n).len() - 1
}

/// An element of Q(zeta_n) in the power basis modulo the n-th cyclotomic
/// polynomial. Binary operations work in Q(zeta_lcm).
#[derive(Clone)]
pub struct Cyc {
    n: u32,
    c: Vec<Rat>,
}

impl Cyc {
    pub fn from_rat(r: Rat) -> Self {
        Cyc { n: 1, c: vec![r] }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rat(Rat::from_integer(v.into()))
    }

    /// zeta_n^k.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut p = vec![Rat::zero(); e + 1];
        p[e] = Rat::one();
        Cyc { n, c: reduce(p, n) }
    }

    /// e^{2 pi i r} for a rational r.
    pub fn root_of_unity(r: &Rat) -> Self {
        let d = r.denom();
        let n: u32 = d.try_into().expect("root of unity order too large");
        let k: i64 = r.numer().mod_floor(d).try_into().unwrap();
        Self::zeta_pow(n, k)
    }

    /// Element given by its power-basis coordinates in Q(zeta_n).
    pub fn from_coords(n: u32, coords: Vec<Rat>) -> Self {
        Cyc {
            n,
            c: reduce(coords, n),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coords(&self) -> &[Rat] {
        &self.c
    }

    /// Image in Q(zeta_m); `m` must be a multiple of the conductor.
    pub fn embed(&self, m: u32) -> Cyc {
        assert!(
            m % self.n == 0,
            "cannot embed Q(zeta_{}) in Q(zeta_{m})",
            self.n
        );
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let mut p = vec![Rat::zero(); (self.c.len() - 1) * step + 1];
        for (i, x) in self.c.iter().enumerate() {
            p[i * step] = x.clone();
        }
        Cyc {
            n: m,
            c: reduce(p, m),
        }
    }

    /// Preimage in Q(zeta_m) for m dividing the conductor, if it lies there.
    pub fn restrict(&self, m: u32) -> Option<Cyc> {
        assert!(
            self.n % m == 0,
            "Q(zeta_{m}) is not a subfield of Q(zeta_{})",
            self.n
        );
        let k = euler_phi(m);
        let cols: Vec<Cyc> = (0..k)
            .map(|i| Cyc::zeta_pow(m, i as i64).embed(self.n))
            .collect();
        let rows = self.c.len();
        let a: Vec<Vec<Rat>> = (0..rows)
            .map(|r| cols.iter().map(|col| col.c[r].clone()).collect())
            .collect();
        linalg::solve(&a, &self.c).map(|x| Cyc { n: m, c: x })
    }

    pub fn to_rat(&self) -> Result<Rat> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Ok(self.c[0].clone())
        } else {
            Err(Error::NotRational)
        }
    }

    /// Complex conjugate (zeta -> zeta^{-1}).
    pub fn conj(&self) -> Cyc {
        let n = self.n as usize;
        let mut p = vec![Rat::zero(); n];
        for (i, x) in self.c.iter().enumerate() {
            let j = (n - i) % n;
            p[j] = &p[j] + x;
        }
        Cyc {
            n: self.n,
            c: reduce(p, self.n),
        }
    }

    pub fn inv(&self) -> Result<Cyc> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let phi: Vec<Rat> = cyclotomic_poly(self.n)
            .iter()
            .map(|&v| Rat::from_integer(v.into()))
            .collect();
        let (g, s) = poly_gcdext(trim(self.c.clone()), phi);
        // g is a nonzero constant because Phi_n is irreducible.
        debug_assert_eq!(g.len(), 1);
        let ginv = g[0].recip();
        Ok(Cyc {
            n: self.n,
            c: reduce(s.into_iter().map(|x| x * &ginv).collect(), self.n),
        })
    }

    pub fn pow(&self, mut e: u64) -> Cyc {
        let mut base = self.clone();
        let mut acc = Cyc::from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rat) -> Cyc {
        Cyc {
            n: self.n,
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    /// Numerical value, mainly for cross-checks.
    pub fn to_c64(&self) -> num_complex::Complex64 {
        let w = std::f64::consts::TAU / self.n as f64;
        self.c
            .iter()
            .enumerate()
            .map(|(i, x)| num_complex::Complex64::from_polar(super::rat_to_f64(x), w * i as f64))
            .sum()
    }

    fn lift(a: &Cyc, b: &Cyc) -> (Cyc, Cyc) {
        let m = a.n.lcm(&b.n);
        (a.embed(m), b.embed(m))
    }
}

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.len() > 1 && p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
    p
}

/// Remainder modulo the monic integer polynomial Phi_n.
fn reduce(mut p: Vec<Rat>, n: u32) -> Vec<Rat> {
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    for i in (d..p.len()).rev() {
        let c = std::mem::take(&mut p[i]);
        if c.is_zero() {
            continue;
        }
        for (j, &v) in phi[..d].iter().enumerate() {
            if v != 0 {
                p[i - d + j] -= &c * Rat::from_integer(v.into());
            }
        }
    }
    p.resize(d, Rat::zero());
    p
}

fn poly_divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].recip();
    let mut r = a.to_vec();
    if r.len() <= db {
        return (vec![Rat::zero()], trim(r));
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] * &lead;
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] -= &c * y;
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn is_zero_poly(p: &[Rat]) -> bool {
    p.iter().all(|x| x.is_zero())
}

/// Returns (g, s) with s*a = g mod b.
fn poly_gcdext(a: Vec<Rat>, b: Vec<Rat>) -> (Vec<Rat>, Vec<Rat>) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (vec![Rat::one()], vec![Rat::zero()]);
    while !is_zero_poly(&r1) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Cyc::lift(self, other);
        a.c == b.c
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(super::fmt_rat).collect();
        write!(f, "[{}]@{}", parts.join(","), self.n)
    }
}

impl Add for &Cyc {
    type Output = Cyc;
    fn add(self, o: &Cyc) -> Cyc {
        let (a, b) = Cyc::lift(self, o);
        Cyc {
            n: a.n,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &Cyc {
    type Output = Cyc;
    fn sub(self, o: &Cyc) -> Cyc {
        let (a, b) = Cyc::lift(self, o);
        Cyc {
            n: a.n,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Mul for &Cyc {
    type Output = Cyc;
    fn mul(self, o: &Cyc) -> Cyc {
        let (a, b) = Cyc::lift(self, o);
        Cyc {
            n: a.n,
            c: reduce(poly_mul(&a.c, &b.c), a.n),
        }
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            n: self.n,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl Add for Cyc {
    type Output = Cyc;
    fn add(self, o: Cyc) -> Cyc {
        &self + &o
    }
}

impl Mul for Cyc {
    type Output = Cyc;
    fn mul(self, o: Cyc) -> Cyc {
        &self * &o
    }
}

impl Zero for Cyc {
    fn zero() -> Self {
        Cyc::from_int(0)
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
}

impl One for Cyc {
    fn one() -> Self {
        Cyc::from_int(1)
    }
}

impl Coeff for Cyc {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn from_rat(r: &Rat) -> Self {
        Cyc::from_rat(r.clone())
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // Phi_105 is the first with a coefficient of absolute value 2.
        assert!(cyclotomic_poly(105).iter().any(|&c| c == -2));
    }

    #[test]
    fn zeta_relations() {
        let z = Cyc::zeta_pow(5, 1);
        assert_eq!(z.pow(5), Cyc::from_int(1));
        let s = (0..5).fold(Cyc::from_int(0), |acc, k| &acc + &Cyc::zeta_pow(5, k));
        assert_eq!(s.to_rat().unwrap(), rat(0, 1));
        assert_eq!(Cyc::zeta_pow(4, 1).pow(2), Cyc::from_int(-1));
        assert_eq!(Cyc::zeta_pow(10, 5), Cyc::from_int(-1));
    }

    #[test]
    fn mixed_conductors() {
        // zeta_3 * zeta_4 = zeta_12^7
        let p = &Cyc::zeta_pow(3, 1) * &Cyc::zeta_pow(4, 1);
        assert_eq!(p.conductor(), 12);
        assert_eq!(p, Cyc::zeta_pow(12, 7));
        // 2 cos(2 pi / 5) = (sqrt 5 - 1)/2 satisfies x^2 + x - 1 = 0
        let c = &Cyc::zeta_pow(5, 1) + &Cyc::zeta_pow(5, -1);
        let v = &(&(&c * &c) + &c) - &Cyc::from_int(1);
        assert!(v.is_zero());
    }

    #[test]
    fn non_rational_is_reported() {
        assert_eq!(Cyc::zeta_pow(3, 1).to_rat(), Err(Error::NotRational));
        assert_eq!(format!("{}", Cyc::zeta_pow(3, 1)), "[0,1]@3");
    }

    #[test]
    fn inverse_of_one_minus_zeta() {
        let x = &Cyc::from_int(1) - &Cyc::zeta_pow(7, 2);
        assert_eq!(&x * &x.inv().unwrap(), Cyc::from_int(1));
        assert!(Cyc::from_int(0).inv().is_err());
    }

    #[test]
    fn numeric_value_matches() {
        let z = Cyc::zeta_pow(8, 3).to_c64();
        let t = 3.0 * std::f64::consts::TAU / 8.0;
        assert!((z.re - t.cos()).abs() < 1e-14 && (z.im - t.sin()).abs() < 1e-14);
    }

    fn small_cyc(n: u32) -> impl Strategy<Value = Cyc> {
        let k = euler_phi(n);
        proptest::collection::vec((-5i64..6, 1i64..4), k)
            .prop_map(move |v| Cyc::from_coords(n, v.into_iter().map(|(a, b)| rat(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in prop::sample::select(vec![3u32, 5, 7, 8, 10, 12, 14])
                            .prop_flat_map(|n| (small_cyc(n), small_cyc(n), small_cyc(n)))) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), Cyc::from_int(1));
            }
        }

        #[test]
        fn embedding_round_trip(m in prop::sample::select(vec![3u32, 4, 5, 7]),
                                k in 2u32..4, e in -20i64..20) {
            let z = Cyc::zeta_pow(m, e);
            let up = z.embed(m * k);
            prop_assert_eq!(up.restrict(m).unwrap(), z.clone());
            prop_assert_eq!(up, z);
        }

        #[test]
        fn zeta_pow_is_multiplicative(n in 1u32..30, a in -40i64..40, b in -40i64..40) {
            prop_assert_eq!(&Cyc::zeta_pow(n, a) * &Cyc::zeta_pow(n, b), Cyc::zeta_pow(n, a + b));
        }
    }
}
