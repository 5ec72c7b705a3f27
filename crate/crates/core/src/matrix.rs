//! Exact square integer matrices.
//!
//! Entries are `i64` with every product and sum overflow-checked; all the
//! matrices handled here (unimodular groups of dimension below twenty with
//! small entries) stay far away from the limit, and an overflow aborts loudly
//! instead of wrapping.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Dimension up to which [`IntMatrix::inverse_unimodular`] uses the adjugate.
const ADJUGATE_MAX_DIM: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer matrix entry overflow")
}

fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer matrix entry overflow")
}

impl IntMatrix {
    pub fn zero(dim: usize) -> Self {
        IntMatrix {
            dim,
            entries: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, 1);
        }
        m
    }

    /// Diagonal matrix with the given diagonal.
    pub fn diagonal(diag: &[i64]) -> Self {
        let mut m = Self::zero(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// `I + factor * E_{row,col}`.
    pub fn elementary(dim: usize, row: usize, col: usize, factor: i64) -> Self {
        let mut m = Self::identity(dim);
        m.set(row, col, add(m.get(row, col), factor));
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn from_entries(dim: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: i64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn column(&self, col: usize) -> Vec<i64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j) == i64::from(i == j)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.dim, "vector length must match matrix dimension");
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| add(acc, mul(a, b)))
            })
            .collect()
    }

    pub fn commutes_with(&self, other: &IntMatrix) -> bool {
        self * other == other * self
    }

    /// `self^t`; negative exponents need a unimodular matrix.
    pub fn pow(&self, t: i64) -> Result<Self> {
        let base = if t < 0 {
            self.inverse_unimodular()?
        } else {
            self.clone()
        };
        let mut e = t.unsigned_abs();
        let mut result = Self::identity(self.dim);
        let mut square = base;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &square;
            }
            e >>= 1;
            if e > 0 {
                square = &square * &square;
            }
        }
        Ok(result)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        let n = self.dim;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| i128::from(x)).collect())
            .collect();
        let mut sign: i128 = 1;
        let mut prev: i128 = 1;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    /// Exact inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let d = self.det();
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        if self.dim <= ADJUGATE_MAX_DIM {
            Ok(self.adjugate_inverse(d))
        } else {
            Ok(self.elimination_inverse())
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let n = self.dim - 1;
        let mut entries = Vec::with_capacity(n * n);
        for i in (0..self.dim).filter(|&i| i != skip_row) {
            for j in (0..self.dim).filter(|&j| j != skip_col) {
                entries.push(self.get(i, j));
            }
        }
        IntMatrix { dim: n, entries }
    }

    fn adjugate_inverse(&self, det: i64) -> IntMatrix {
        let n = self.dim;
        let mut inv = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                // adj(M)_{ji} = cofactor_{ij}; det is ±1 so dividing is multiplying.
                inv.set(j, i, mul(mul(sign, self.minor(i, j).det()), det));
            }
        }
        inv
    }

    /// Gauss-Jordan with unimodular row operations on `[M | I]`.
    #[allow(clippy::needless_range_loop)]
    fn elimination_inverse(&self) -> IntMatrix {
        let n = self.dim;
        let mut a: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| i64::from(i == j)));
                row
            })
            .collect();
        for col in 0..n {
            // Euclid on the column below the diagonal until a single nonzero remains.
            loop {
                let nonzero: Vec<usize> = (col..n).filter(|&r| a[r][col] != 0).collect();
                let pivot = *nonzero
                    .iter()
                    .min_by_key(|&&r| a[r][col].abs())
                    .expect("unimodular matrix has a nonzero pivot");
                if nonzero.len() == 1 {
                    a.swap(col, pivot);
                    break;
                }
                for &r in &nonzero {
                    if r != pivot {
                        let q = a[r][col] / a[pivot][col];
                        for c in 0..2 * n {
                            a[r][c] = add(a[r][c], -mul(q, a[pivot][c]));
                        }
                    }
                }
            }
            if a[col][col] < 0 {
                for c in 0..2 * n {
                    a[col][c] = -a[col][c];
                }
            }
            debug_assert_eq!(a[col][col], 1);
        }
        for col in (0..n).rev() {
            for r in 0..col {
                let q = a[r][col];
                if q != 0 {
                    for c in 0..2 * n {
                        a[r][c] = add(a[r][c], -mul(q, a[col][c]));
                    }
                }
            }
        }
        let entries = a.into_iter().flat_map(|row| row[n..].to_vec()).collect();
        IntMatrix { dim: n, entries }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[IntMatrix]) -> IntMatrix {
        let dim = blocks.iter().map(|b| b.dim).sum();
        let mut m = Self::zero(dim);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    m.set(offset + i, offset + j, b.get(i, j));
                }
            }
            offset += b.dim;
        }
        m
    }

    /// Square sub-block starting at `(offset, offset)`.
    pub fn diagonal_block(&self, offset: usize, size: usize) -> IntMatrix {
        let mut m = Self::zero(size);
        for i in 0..size {
            for j in 0..size {
                m.set(i, j, self.get(offset + i, offset + j));
            }
        }
        m
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must agree");
        let n = self.dim;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b != 0 {
                        let idx = i * n + j;
                        out.entries[idx] = add(out.entries[idx], mul(a, b));
                    }
                }
            }
        }
        out
    }
}

impl Mul for IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: IntMatrix) -> IntMatrix {
        &self * &rhs
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        IntMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl fmt::Display for IntMatrix {
    /// Rows separated by `;`, entries by spaces: `1 1; 0 -1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            f.write_str(&row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(IntMatrix::zero(0));
        }
        let rows = s
            .split(';')
            .map(|row| {
                row.split_whitespace()
                    .map(|tok| {
                        tok.parse::<i64>().map_err(|_| Error::Parse {
                            line: 1,
                            message: format!("bad matrix entry `{tok}`"),
                        })
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::from_rows(rows)
    }
}

/// Rank over Q of a rectangular integer matrix given by rows.
#[allow(clippy::needless_range_loop)]
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            if a[r][col] != 0 {
                let (x, y) = (a[rank][col], a[r][col]);
                for c in col..ncols {
                    a[r][c] = a[r][c] * x - a[rank][c] * y;
                }
                let g = a[r].iter().fold(0i128, |g, &v| gcd(g, v.abs()));
                if g > 1 {
                    a[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
