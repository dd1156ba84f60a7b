use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Rational, SubspaceBasis};
use crate::error::{Error, Result};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        Matrix::from_rows(cols, rows).expect("ragged integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
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

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
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
                        let v = &out[(i, j)] + &(a * b);
                        out[(i, j)] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    /// Reduced row echelon form. Pivots are the first nonzero entry in
    /// column order, so the output is deterministic.
    pub fn rref(&self) -> Rref {
        let (rows, pivots) = rref_rows(self.row_vecs(), self.cols);
        let rank = pivots.len();
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for row in rows {
            entries.extend(row);
        }
        Rref {
            matrix: Matrix {
                rows: self.rows,
                cols: self.cols,
                entries,
            },
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        rref_rows(self.row_vecs(), self.cols).1.len()
    }

    /// Rank modulo the `i`-th of a fixed list of large primes. Never exceeds
    /// [`Matrix::rank`]; `None` when that prime divides a denominator.
    pub fn rank_mod_prime(&self, i: usize) -> Option<usize> {
        super::ModMatrix::reduce(&self.row_vecs(), self.cols, i).map(|m| m.rank())
    }

    /// Canonical basis of `{ v : self * v = 0 }`.
    pub fn kernel_basis(&self) -> SubspaceBasis {
        let (rows, pivots) = rref_rows(self.row_vecs(), self.cols);
        SubspaceBasis::span(self.cols, kernel_from_rref(&rows, &pivots, self.cols))
            .expect("kernel vectors have column length")
    }

    /// A kernel basis together with the free columns: the `t`-th vector is
    /// one at `free[t]` and zero at the other free columns. Cheaper than
    /// [`Matrix::kernel_basis`], which also brings the basis to canonical form.
    pub fn kernel_with_free_columns(&self) -> (Vec<Vec<Rational>>, Vec<usize>) {
        let (rows, pivots) = rref_rows(self.row_vecs(), self.cols);
        let free = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        (kernel_from_rref(&rows, &pivots, self.cols), free)
    }

    /// Span of the rows.
    pub fn row_space(&self) -> SubspaceBasis {
        SubspaceBasis::span(self.cols, self.row_vecs()).expect("row lengths match")
    }

    /// Span of the columns.
    pub fn column_space(&self) -> SubspaceBasis {
        self.transpose().row_space()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// The positive multiple of `v` with coprime integer entries (zero stays zero).
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if gcd.is_zero() {
        return v.to_vec();
    }
    scaled.into_iter().map(|c| Rational::from(c / &gcd)).collect()
}

/// Gauss-Jordan elimination on owned rows. Returns the reduced rows (zero
/// rows last) and the pivot columns.
pub(crate) fn rref_rows(rows: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    if rows.len() * cols * rows.len().min(cols) <= DIRECT_LIMIT {
        return rref_direct(rows, cols);
    }
    match super::modular::rref(&rows, cols) {
        Some((mut reduced, pivots)) => {
            reduced.resize(rows.len(), vec![Rational::zero(); cols]);
            (reduced, pivots)
        }
        None => rref_direct(rows, cols),
    }
}

/// Work below which plain elimination over `Q` beats the modular route.
const DIRECT_LIMIT: usize = 4096;

pub(crate) fn rref_direct(mut rows: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip().expect("pivot is nonzero");
        let mut support = Vec::new();
        for j in col..cols {
            if !rows[r][j].is_zero() {
                let v = &rows[r][j] * &inv;
                rows[r][j] = v;
                support.push(j);
            }
        }
        let (before, rest) = rows.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().expect("row r exists");
        for other in before.iter_mut().chain(after.iter_mut()) {
            if other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for &j in &support {
                let v = other[j].sub_mul(&factor, &pivot_row[j]);
                other[j] = v;
            }
        }
        pivots.push(col);
        r += 1;
    }
    (rows, pivots)
}

/// Kernel vectors read off a reduced row echelon form, one per free column
/// in increasing order.
pub(crate) fn kernel_from_rref(rows: &[Vec<Rational>], pivots: &[usize], cols: usize) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![None; cols];
    for (i, &p) in pivots.iter().enumerate() {
        is_pivot[p] = Some(i);
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&j| is_pivot[j].is_none()) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            if !rows[i][free].is_zero() {
                v[p] = -&rows[i][free];
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_rref_and_kernel() {
        let id = Matrix::identity(3);
        let rref = id.rref();
        assert_eq!(rref.rank, 3);
        assert_eq!(rref.matrix, id);
        assert_eq!(id.kernel_basis().dim(), 0);
    }

    #[test]
    fn rref_is_idempotent() {
        let m = Matrix::from_i64_rows(&[&[2, 4, 1], &[1, 2, 0], &[3, 6, 1]]);
        let once = m.rref();
        let twice = once.matrix.rref();
        assert_eq!(once.matrix, twice.matrix);
        assert_eq!(once.rank, 2);
    }

    #[test]
    fn single_rigidity_row_has_three_dim_kernel() {
        let m = Matrix::from_i64_rows(&[&[1, 0, -1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 3);
        for v in k.vectors() {
            assert!(m.mul_vec(&v).unwrap().iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = Matrix::from_rows(2, vec![vec![Rational::one()]]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 1 });
        assert!(Matrix::new(2, 2, vec![Rational::one(); 3]).is_err());
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                Matrix::new(r, c, v.into_iter().map(Rational::from_int).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in small_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.dim() + m.rank(), m.cols());
            for v in k.vectors() {
                prop_assert!(m.mul_vec(&v).unwrap().iter().all(Rational::is_zero));
            }
        }
    }
}
