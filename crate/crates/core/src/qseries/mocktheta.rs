use num_traits::{One, Zero};

use super::PSeries;
use crate::error::{Error, Result};
use crate::exact::{rat_int, Rat};

/// The universal mock theta function
/// `g(x, q) = x^{-1} (-1 + sum_{n>=0} q^{n^2} / ((x;q)_{n+1} (q/x;q)_n))`
/// at `x = q^a`, `q -> q^b`, known below `q^order`.
pub fn mocktheta_g(a: i64, b: i64, order: &Rat) -> Result<PSeries> {
    if a <= 0 || a >= b {
        return Err(Error::Domain(format!("g(q^{a}, q^{b}) needs 0 < a < b")));
    }
    // Work with the bracket, known below order + a.
    let top = order + rat_int(a);
    let len = top.ceil().to_integer().try_into().unwrap_or(0usize);
    let mut sum = vec![Rat::zero(); len];
    // den holds 1 / ((x;q)_{n+1} (q/x;q)_n) densely.
    let mut den = vec![Rat::zero(); len];
    if len > 0 {
        den[0] = Rat::one();
    }
    let divide = |v: &mut Vec<Rat>, e: i64| {
        let e = e as usize;
        for i in e..v.len() {
            if !v[i - e].is_zero() {
                let t = v[i - e].clone();
                v[i] += t;
            }
        }
    };
    divide(&mut den, a);
    let mut n = 0i64;
    while ((b * n * n) as usize) < len {
        let off = (b * n * n) as usize;
        for i in off..len {
            sum[i] += &den[i - off];
        }
        n += 1;
        divide(&mut den, a + b * n);
        divide(&mut den, b - a + b * (n - 1));
    }
    if len > 0 {
        sum[0] -= Rat::one();
    }
    Ok(PSeries::from_dense(
        &rat_int(-a),
        &Rat::one(),
        sum,
        Some(order),
    ))
}
