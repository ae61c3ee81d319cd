//! Smith normal form over `Z` (invariant factors only).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Invariant factors `d_1 | d_2 | ... | d_r` (all positive) of an integer
/// matrix given by rows of width `cols`. `r` is the rank.
pub fn invariant_factors(rows: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(cols) {
        // smallest nonzero entry in the trailing block
        let Some((pi, pj)) = smallest_entry(&m, t, cols) else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            // clear column t
            for i in t + 1..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let qt = m[i][t].div_floor(&m[t][t]);
                let (head, tail) = m.split_at_mut(i);
                let pivot_row = &head[t];
                for (x, p) in tail[0].iter_mut().zip(pivot_row).skip(t) {
                    *x -= &qt * p;
                }
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            // clear row t
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let qt = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let delta = &qt * &row[t];
                    row[j] -= delta;
                }
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = smallest_entry_cross(&m, t, cols);
                m.swap(t, pi);
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            // divisibility of the trailing block
            let pivot = m[t][t].clone();
            let bad = (t + 1..nrows).find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    let (head, tail) = m.split_at_mut(i);
                    for (x, y) in head[t].iter_mut().zip(&tail[0]).skip(t) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag.sort();
    diag
}

fn smallest_entry(m: &[Vec<BigInt>], t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().take(cols).skip(t) {
            if x.is_zero() {
                continue;
            }
            if x.abs().is_one() {
                return Some((i, j));
            }
            if best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smallest nonzero entry among row `t` and column `t` (both contain one).
fn smallest_entry_cross(m: &[Vec<BigInt>], t: usize, cols: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_abs: Option<BigInt> = None;
    let mut consider = |i: usize, j: usize, x: &BigInt| {
        if !x.is_zero() && best_abs.as_ref().is_none_or(|b| x.abs() < *b) {
            best_abs = Some(x.abs());
            best = (i, j);
        }
    };
    for (i, row) in m.iter().enumerate().skip(t) {
        consider(i, t, &row[t]);
    }
    for (j, x) in m[t].iter().enumerate().take(cols).skip(t) {
        consider(t, j, x);
    }
    best
}
