//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use super::Rat;

/// Solves `a x = b` for a consistent system of full column rank, possibly
/// with more rows than columns. Returns `None` if the system is inconsistent
/// or the solution is not unique.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(r, y)| {
            let mut r = r.clone();
            r.push(y.clone());
            r
        })
        .collect();
    let mut row = 0;
    for col in 0..cols {
        let piv = (row..rows).find(|&r| !m[r][col].is_zero())?;
        m.swap(row, piv);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some(m[..cols].iter().map(|r| r[cols].clone()).collect())
}
