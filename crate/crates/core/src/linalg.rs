//! Dense exact matrices over Q: products, inverses, determinants and the
//! characteristic polynomial, plus a partition-labelled wrapper used for
//! every operator matrix the engine emits.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::{qu, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Q> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn trace(&self) -> Q {
        self.diagonal().into_iter().sum()
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Singular(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or_else(|| Error::Singular(format!("no pivot in column {col}")))?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].recip();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    a.add_row_multiple(r, col, &f);
                    inv.add_row_multiple(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    /// Determinant by fraction-exact Gaussian elimination.
    pub fn det(&self) -> Q {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Q::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Q::zero();
            };
            if pivot != col {
                a.swap_rows(col, pivot);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                if !a[(r, col)].is_zero() {
                    let f = &a[(r, col)] / &p;
                    a.add_row_multiple(r, col, &f);
                }
            }
        }
        det
    }

    /// Coefficients of det(x I - A), lowest degree first, via
    /// Faddeev-LeVerrier.
    pub fn char_poly(&self) -> Vec<Q> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            m = next;
            let am = self.mul(&m);
            coeffs[n - k] = -am.trace() / qu(k);
        }
        coeffs
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &Q) {
        for j in 0..self.cols {
            self[(r, j)] *= c;
        }
    }

    /// row[target] -= f * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, f: &Q) {
        for j in 0..self.cols {
            let s = &self[(source, j)] * f;
            self[(target, j)] -= s;
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Monic polynomial `prod (x - r)`, lowest degree first.
pub fn poly_from_roots(roots: &[Q]) -> Vec<Q> {
    let mut p = vec![Q::one()];
    for r in roots {
        let mut next = vec![Q::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        p = next;
    }
    p
}

pub fn poly_eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// A matrix whose rows and columns carry partition labels. Rows index the
/// source basis vector and columns the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledMatrix {
    pub rows: Vec<Partition>,
    pub cols: Vec<Partition>,
    pub matrix: Matrix,
}

#[derive(Serialize)]
struct LabeledMatrixJson<'a> {
    rows: &'a [Partition],
    cols: &'a [Partition],
    entries: Vec<Vec<String>>,
}

impl LabeledMatrix {
    pub fn entry(&self, row: &Partition, col: &Partition) -> Option<&Q> {
        let i = self.rows.iter().position(|p| p == row)?;
        let j = self.cols.iter().position(|p| p == col)?;
        Some(&self.matrix[(i, j)])
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .matrix
            .to_rows()
            .into_iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        serde_json::to_value(LabeledMatrixJson {
            rows: &self.rows,
            cols: &self.cols,
            entries,
        })
        .expect("matrix serializes")
    }

    /// CSV with a header row of column labels; the first column holds row
    /// labels. Labels are quoted because they contain commas.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("\"source\\target\"");
        for c in &self.cols {
            out.push_str(&format!(",\"{c}\""));
        }
        out.push('\n');
        for (i, r) in self.rows.iter().enumerate() {
            out.push_str(&format!("\"{r}\""));
            for x in self.matrix.row(i) {
                out.push_str(&format!(",{x}"));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn determinant() {
        assert_eq!(m(&[&[2, 1], &[1, 3]]).det(), q(5));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), q(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), q(0));
    }

    #[test]
    fn char_poly_matches_determinant_at_points() {
        let a = m(&[&[1, 2, 0], &[3, -1, 4], &[0, 5, 2]]);
        let p = a.char_poly();
        for x in [q(0), q(1), q(-3), frac(1, 2)] {
            let shifted = Matrix::identity(3).scale(&x).sub(&a);
            assert_eq!(poly_eval(&p, &x), shifted.det());
        }
    }

    #[test]
    fn roots_polynomial() {
        let p = poly_from_roots(&[q(1), q(-2)]);
        assert_eq!(p, vec![q(-2), q(1), q(1)]);
    }
}
