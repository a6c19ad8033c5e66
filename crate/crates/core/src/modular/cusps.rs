use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, serde_rat, Rat};
use crate::qseries::{bernoulli2, EtaSpec};

fn check_level(p: i64) -> Result<()> {
    if p < 5 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
        return Err(Error::Domain(format!("level {p} is not a prime >= 5")));
    }
    Ok(())
}

/// `s_p = (p^2 - 1)/24`.
pub fn s_p(p: i64) -> i64 {
    (p * p - 1) / 24
}

/// A cusp of `Gamma_1(p)` given by its representative `a/c` in the standard set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CuspClass {
    pub p: i64,
    pub a: i64,
    pub c: i64,
    pub width: i64,
}

impl CuspClass {
    fn new(p: i64, a: i64, c: i64) -> Self {
        CuspClass {
            p,
            a,
            c,
            width: p / c.gcd(&p),
        }
    }

    /// The cusp at infinity, `1/p`.
    pub fn infinity(p: i64) -> Self {
        Self::new(p, 1, p)
    }
}

impl std::fmt::Display for CuspClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.a, self.c)
    }
}

/// `{p/c : 1 <= c <= (p-1)/2} U {a/p : 1 <= a <= (p-1)/2}`.
pub fn cusp_set(p: i64) -> Result<Vec<CuspClass>> {
    check_level(p)?;
    let h = (p - 1) / 2;
    let mut out: Vec<CuspClass> = (1..=h).map(|c| CuspClass::new(p, p, c)).collect();
    out.extend((1..=h).map(|a| CuspClass::new(p, a, p)));
    Ok(out)
}

fn fold(x: i64, p: i64) -> i64 {
    let r = x.rem_euclid(p);
    r.min(p - r)
}

/// The representative equivalent to `a/c`; `(1, 0)` is the cusp at infinity.
pub fn normalize_cusp(p: i64, a: i64, c: i64) -> Result<CuspClass> {
    check_level(p)?;
    if a.gcd(&c) != 1 {
        return Err(Error::Domain(format!("{a}/{c} is not in lowest terms")));
    }
    if c.rem_euclid(p) == 0 {
        Ok(CuspClass::new(p, fold(a, p), p))
    } else {
        Ok(CuspClass::new(p, p, fold(c, p)))
    }
}

/// Whether `a1/c1` and `a2/c2` are `Gamma_1(p)`-equivalent: `c1 = e c2 (mod p)` and
/// `a1 = e a2 (mod gcd(p, c1))` for a sign `e`.
pub fn cusp_equiv(p: i64, x1: (i64, i64), x2: (i64, i64)) -> Result<bool> {
    check_level(p)?;
    let ((a1, c1), (a2, c2)) = (x1, x2);
    if a1.gcd(&c1) != 1 || a2.gcd(&c2) != 1 {
        return Err(Error::Domain("cusp not in lowest terms".into()));
    }
    let g = p.gcd(&c1);
    Ok([1i64, -1]
        .iter()
        .any(|&e| (c1 - e * c2).rem_euclid(p) == 0 && (a1 - e * a2).rem_euclid(g) == 0))
}

/// `ord_{a/c} eta_{p,delta} = (gcd(p,c)^2 / 2p) * P2bar(a delta / gcd(p,c))`.
pub fn ord_geta(p: i64, delta: i64, a: i64, c: i64) -> Rat {
    let g = p.gcd(&c);
    let x = rat(a * delta, g);
    let frac = &x - x.floor();
    rat(g * g, 2 * p) * bernoulli2(&frac)
}

/// `ord_{a/c} eta(m tau) = gcd(m,c)^2 / 24m`.
pub fn ord_eta_scaled(m: i64, _a: i64, c: i64) -> Rat {
    let g = m.gcd(&c);
    rat(g * g, 24 * m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspDiv {
    pub cusp: CuspClass,
    #[serde(with = "serde_rat")]
    pub div: Rat,
}

/// Divisor of a modular object at each cusp of `Gamma_1(p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorLedger {
    pub p: i64,
    pub cusps: Vec<CuspDiv>,
    /// Lower bound for the interior divisor sum.
    #[serde(with = "serde_rat")]
    pub interior: Rat,
    /// Bare power of q left over after collecting the eta factors; nonzero
    /// means the input is not an eta quotient in the modular sense.
    #[serde(with = "serde_rat")]
    pub residual_q_power: Rat,
}

impl DivisorLedger {
    pub fn div(&self, a: i64, c: i64) -> Option<&Rat> {
        self.cusps
            .iter()
            .find(|e| e.cusp.a == a && e.cusp.c == c)
            .map(|e| &e.div)
    }

    /// Sum over cusps plus the interior contribution.
    pub fn total(&self) -> Rat {
        self.cusps
            .iter()
            .fold(self.interior.clone(), |acc, e| acc + &e.div)
    }
}

/// Per-cusp divisors of an eta quotient. Generalized factors must have level `p`.
pub fn eta_div_ledger(spec: &EtaSpec, p: i64) -> Result<DivisorLedger> {
    let cusps = cusp_set(p)?;
    for &(m, _, _) in &spec.geta {
        if m != p {
            return Err(Error::Domain(format!(
                "generalized eta of level {m} on Gamma_1({p})"
            )));
        }
    }
    for &(_, d, _) in &spec.geta {
        if d.rem_euclid(p) == 0 {
            return Err(Error::VanishingFactor);
        }
    }
    // eta(m tau) is modular only after its own q^{m/24}; an EtaSpec stores the
    // raw q-power, so re-derive the part not absorbed by eta factors.
    let lead = spec.leading_exponent()?;
    let mut modular_lead = Rat::zero();
    for &(m, r) in &spec.eta {
        modular_lead += rat(m * r, 24);
    }
    for &(pp, d, s) in &spec.geta {
        let r = d.rem_euclid(pp);
        modular_lead += rat(pp * s, 2) * bernoulli2(&rat(r.min(pp - r), pp));
    }
    let residual = lead - modular_lead;
    let entries: Vec<CuspDiv> = cusps
        .par_iter()
        .map(|k| {
            let mut ord = Rat::zero();
            for &(m, r) in &spec.eta {
                ord += ord_eta_scaled(m, k.a, k.c) * rat_int(r);
            }
            for &(pp, d, s) in &spec.geta {
                ord += ord_geta(pp, d, k.a, k.c) * rat_int(s);
            }
            CuspDiv {
                cusp: *k,
                div: ord * rat_int(k.width),
            }
        })
        .collect();
    Ok(DivisorLedger {
        p,
        cusps: entries,
        interior: Rat::zero(),
        residual_q_power: residual,
    })
}

/// Bounds `e_{a/c}` with `div_{a/c} f >= -e_{a/c}` for any Laurent polynomial in
/// `t` with exponents in `lo..=hi`, clamped below at 0.
pub fn poly_cusp_bounds(t: &DivisorLedger, lo: i64, hi: i64) -> BTreeMap<CuspClass, Rat> {
    t.cusps
        .iter()
        .map(|e| {
            let worst = [lo, hi].iter().map(|&j| &e.div * rat_int(j)).min().unwrap();
            (
                e.cusp,
                if worst < Rat::zero() {
                    -worst
                } else {
                    Rat::zero()
                },
            )
        })
        .collect()
}

/// `n_1 = sum_c max{s_p, e_{p/c}} + sum_{a >= 2} max{(k + s_p + 3) p / 8, e_{a/p}}`;
/// cusps missing from `e` default to 0.
pub fn valence_bound(p: i64, k: i64, e: &BTreeMap<CuspClass, Rat>) -> Result<Rat> {
    check_level(p)?;
    let sp = rat_int(s_p(p));
    let far = rat((k + s_p(p) + 3) * p, 8);
    let zero = Rat::zero();
    let mut n1 = Rat::zero();
    for k in cusp_set(p)? {
        let ek = e.get(&k).unwrap_or(&zero);
        if k.c != p {
            n1 += std::cmp::max(&sp, ek).clone();
        } else if k.a >= 2 {
            n1 += std::cmp::max(&far, ek).clone();
        }
    }
    Ok(n1)
}
