use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::error::{KernelError, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<IntMatrix> {
        if rows == 0 || cols == 0 {
            return Err(KernelError::InvalidInput(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(KernelError::InvalidInput(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<IntMatrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(KernelError::InvalidInput("rows have different lengths".into()));
        }
        IntMatrix::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::from(1);
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols]).expect("positive shape")
    }

    /// `rows x cols` matrix with `diag` on the main diagonal.
    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.entries[i * cols + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.cols).map(<[BigInt]>::to_vec).collect()
    }

    /// Main diagonal entries.
    pub fn diag(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// One string per row, columns right-aligned: `[1  0]`.
    pub fn lines(&self) -> Vec<String> {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let widths: Vec<usize> = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| cells[i * self.cols + j].len()).max().unwrap_or(0))
            .collect();
        (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols)
                    .map(|j| format!("{:>w$}", cells[i * self.cols + j], w = widths[j]))
                    .collect();
                format!("[{}]", row.join("   "))
            })
            .collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lines().join("\n"))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lines().join("\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(IntMatrix::new(0, 2, vec![]).is_err());
        assert!(IntMatrix::new(2, 2, vec![BigInt::from(1)]).is_err());
        assert!(IntMatrix::from_rows(vec![vec![BigInt::from(1)], vec![]]).is_err());
        assert!(IntMatrix::from_rows(vec![]).is_err());
    }

    #[test]
    fn printing_aligns_columns() {
        assert_eq!(m(&[&[1, -10], &[200, 3]]).lines(), vec!["[  1   -10]", "[200     3]"]);
    }

    #[test]
    fn diagonal_helpers() {
        let d = IntMatrix::diagonal(2, 3, &[BigInt::from(1), BigInt::from(6)]);
        assert!(d.is_diagonal());
        assert_eq!(d.diag(), vec![BigInt::from(1), BigInt::from(6)]);
        assert!(!m(&[&[0, 1], &[1, 0]]).is_diagonal());
    }
}
