//! Generating-function oracle. Series in q whose coefficients lie in
//! Z[z]/(z^m - 1) are stored as `v[n][r]`.
//!
//! Rank and parts: Durfee-square decomposition
//! `sum_d w^d q^{d^2} / ((zq;q)_d (w q / z; q)_d)`, differentiated in w at
//! w = 1 by carrying dual numbers. Crank and ones: split on the number of
//! ones `k`; parts in [2, k] are free and parts above k each carry z.

use num_bigint::BigInt;
use num_traits::Zero;

use super::Stat;

type ZSeries = Vec<Vec<BigInt>>;

fn zeros(len: usize, m: usize) -> ZSeries {
    vec![vec![BigInt::zero(); m]; len]
}

fn rot(r: usize, shift: i64, m: usize) -> usize {
    (r as i64 + shift).rem_euclid(m as i64) as usize
}

/// v /= (1 - z^shift q^e)
fn div_zq(v: &mut ZSeries, shift: i64, e: usize, m: usize) {
    for n in e..v.len() {
        for r in 0..m {
            if !v[n - e][r].is_zero() {
                let t = v[n - e][r].clone();
                v[n][rot(r, shift, m)] += t;
            }
        }
    }
}

/// v *= (1 - z^shift q^e)
fn mul_zq(v: &mut ZSeries, shift: i64, e: usize, m: usize) {
    for n in (e..v.len()).rev() {
        for r in 0..m {
            if !v[n - e][r].is_zero() {
                let t = v[n - e][r].clone();
                v[n][rot(r, shift, m)] -= t;
            }
        }
    }
}

/// Adds `z^shift q^off * weight * src` into `dst`.
fn accumulate(dst: &mut ZSeries, src: &ZSeries, off: usize, shift: i64, weight: i64, m: usize) {
    for n in off..dst.len() {
        for r in 0..m {
            let c = &src[n - off][r];
            if !c.is_zero() {
                dst[n][rot(r, shift, m)] += c * weight;
            }
        }
    }
}

fn rank_tables(m: usize, n_max: usize) -> (ZSeries, ZSeries) {
    let len = n_max + 1;
    let mut count = zeros(len, m);
    let mut parts = zeros(len, m);
    // G_d as a dual number a + eps b with w = 1 + eps.
    let mut a = zeros(len, m);
    let mut b = zeros(len, m);
    a[0][0] = BigInt::from(1);
    count[0][0] = BigInt::from(1);
    let mut d = 1usize;
    while d * d <= n_max {
        // times w
        for n in 0..len {
            for r in 0..m {
                let t = a[n][r].clone();
                b[n][r] += t;
            }
        }
        // divide by (1 - z q^d)
        div_zq(&mut a, 1, d, m);
        div_zq(&mut b, 1, d, m);
        // divide by (1 - w z^{-1} q^d): b picks up the derivative of w
        for n in d..len {
            for r in 0..m {
                let dst = rot(r, -1, m);
                let ta = a[n - d][r].clone();
                let tb = &b[n - d][r] + &ta;
                b[n][dst] += tb;
                a[n][dst] += ta;
            }
        }
        accumulate(&mut count, &a, d * d, 0, 1, m);
        accumulate(&mut parts, &b, d * d, 0, 1, m);
        d += 1;
    }
    (count, parts)
}

fn crank_tables(m: usize, n_max: usize) -> (ZSeries, ZSeries) {
    let len = n_max + 1;
    let mut count = zeros(len, m);
    let mut ones = zeros(len, m);
    // No ones: crank is the largest part L.
    count[0][0] = BigInt::from(1);
    let mut free = zeros(len, 1);
    free[0][0] = BigInt::from(1);
    for l in 2..=n_max {
        div_zq(&mut free, 0, l, 1);
        for n in l..len {
            let c = &free[n - l][0];
            if !c.is_zero() {
                count[n][l % m] += c;
            }
        }
    }
    // Exactly k ones: parts in [2, k] are free, parts > k carry z.
    let mut b = zeros(len, m);
    b[0][0] = BigInt::from(1);
    for j in 2..=n_max {
        div_zq(&mut b, 1, j, m);
    }
    for k in 1..=n_max {
        accumulate(&mut count, &b, k, -(k as i64), 1, m);
        accumulate(&mut ones, &b, k, -(k as i64), k as i64, m);
        if k < n_max {
            mul_zq(&mut b, 1, k + 1, m);
            div_zq(&mut b, 0, k + 1, m);
        }
    }
    (count, ones)
}

pub(super) fn tables(m: usize, n_max: usize) -> [Vec<Vec<BigInt>>; 4] {
    let ((n, nt), (mc, mw)) = rayon::join(|| rank_tables(m, n_max), || crank_tables(m, n_max));
    let mut out: [Vec<Vec<BigInt>>; 4] = Default::default();
    out[Stat::N as usize] = n;
    out[Stat::NT as usize] = nt;
    out[Stat::M as usize] = mc;
    out[Stat::MW as usize] = mw;
    out
}
