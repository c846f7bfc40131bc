//! Dense integer elimination for small residual blocks.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::snf::{nearest_quotient, normalize_diagonal};

/// Invariant factors of a dense matrix given by rows.
pub fn invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diagonal = Vec::new();
    for t in 0..m.min(n) {
        let Some((pr, pc)) = smallest_entry(&a, t, t..n) else {
            break;
        };
        a.swap(t, pr);
        swap_columns(&mut a, t, pc);
        loop {
            let p = a[t][t].clone();
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[i][t], &p);
                if !q.is_zero() {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0][t..].iter_mut().zip(&top[t][t..]) {
                        *x -= &q * y;
                    }
                }
            }
            if let Some((r, _)) = smallest_entry(&a, t + 1, t..t + 1) {
                a.swap(t, r);
                continue;
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[t][j], &p);
                // column t is zero below row t, so only row t changes
                let sub = &q * &p;
                a[t][j] -= sub;
            }
            match (t + 1..n)
                .filter(|&j| !a[t][j].is_zero())
                .min_by_key(|&j| a[t][j].abs())
            {
                Some(j) => swap_columns(&mut a, t, j),
                None => break,
            }
        }
        diagonal.push(a[t][t].clone());
    }
    normalize_diagonal(diagonal)
}

/// Smallest nonzero entry in rows `r0..` and the given columns.
fn smallest_entry(
    a: &[Vec<BigInt>],
    r0: usize,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for j in cols.clone() {
            let v = &row[j];
            if !v.is_zero() && best.as_ref().is_none_or(|(b, _, _)| v.abs() < *b) {
                best = Some((v.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn swap_columns(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a {
            row.swap(i, j);
        }
    }
}
