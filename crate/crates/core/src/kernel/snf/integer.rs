use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::kernel::IntMatrix;

/// Smith normal form specialised to integers.
///
/// Each step moves the nonzero entry of least absolute value to the pivot
/// position and reduces its row and column by floor division. A nonzero
/// remainder is strictly smaller than the pivot, so the pivot shrinks until it
/// clears its row and column and divides the remaining block.
pub fn snf_integer(m: &IntMatrix) -> IntMatrix {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows(), m.cols());

    'diagonal: for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&a, t) else {
                break 'diagonal;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }

            let pivot = a[t][t].clone();
            let mut cleared = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                for j in t..cols {
                    let delta = &q * &a[t][j];
                    a[i][j] -= delta;
                }
                cleared &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                for row in a.iter_mut().skip(t) {
                    let delta = &q * &row[t];
                    row[j] -= delta;
                }
                cleared &= a[t][j].is_zero();
            }
            if !cleared {
                continue;
            }

            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            a[t][t] = -&a[t][t];
        }
    }

    let diag: Vec<BigInt> = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    IntMatrix::diagonal(rows, cols, &diag)
}

/// Position of the nonzero entry of least absolute value in the block
/// starting at `(t, t)`, scanning row by row.
fn smallest_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}
