use serde::{Deserialize, Serialize};

use super::matrix::{kernel_from_rref, rref_rows};
use super::{Matrix, Rational};
use crate::error::{Error, Result};

/// A subspace of `K^ambient_dim`, kept as the nonzero rows of a reduced row
/// echelon form. Equal subspaces have identical representations, so `==` is
/// subspace equality.
///
/// Read as columns, the same data is the reduced column echelon form of the
/// basis; see [`SubspaceBasis::basis_matrix`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Matrix::identity(ambient_dim).row_space()
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span<I>(ambient_dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let mut rows = Vec::new();
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_zero()) {
                rows.push(v);
            }
        }
        let (mut rows, pivots) = rref_rows(rows, ambient_dim);
        rows.truncate(pivots.len());
        Ok(SubspaceBasis {
            ambient_dim,
            rows,
            pivots,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical basis vectors.
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn vectors(&self) -> Vec<Vec<Rational>> {
        self.rows.clone()
    }

    /// `ambient_dim x dim` matrix whose columns are the canonical basis, in
    /// reduced column echelon form.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.ambient_dim, self.rows.clone())
            .expect("rows have ambient length")
            .transpose()
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: n,
            });
        }
        Ok(())
    }

    /// The canonical remainder of `v` modulo this subspace: zero at every
    /// pivot column.
    pub fn reduce(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(v.len())?;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (j, x) in row.iter().enumerate().skip(p) {
                if !x.is_zero() {
                    let nv = out[j].sub_mul(&f, x);
                    out[j] = nv;
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(Rational::is_zero))
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> Result<bool> {
        self.check_len(other.ambient_dim)?;
        for v in &other.rows {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        self.check_len(other.ambient_dim)?;
        SubspaceBasis::span(
            self.ambient_dim,
            self.rows.iter().chain(&other.rows).cloned(),
        )
    }

    /// `{ w : w . v = 0 for all v in self }` under the standard pairing.
    pub fn annihilator(&self) -> SubspaceBasis {
        SubspaceBasis::span(
            self.ambient_dim,
            kernel_from_rref(&self.rows, &self.pivots, self.ambient_dim),
        )
        .expect("kernel vectors have ambient length")
    }

    pub fn intersect(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        self.check_len(other.ambient_dim)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Intersection of many subspaces at once, via the sum of annihilators.
    pub fn intersect_all<'a, I>(ambient_dim: usize, spaces: I) -> Result<SubspaceBasis>
    where
        I: IntoIterator<Item = &'a SubspaceBasis>,
    {
        let mut conditions = Vec::new();
        for s in spaces {
            if s.ambient_dim != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: s.ambient_dim,
                });
            }
            conditions.extend(s.annihilator().rows);
        }
        Ok(SubspaceBasis::span(ambient_dim, conditions)?.annihilator())
    }

    /// `dim(big) - dim(small)` after checking `small ⊆ big`.
    pub fn quotient_dim(big: &SubspaceBasis, small: &SubspaceBasis) -> Result<usize> {
        big.check_len(small.ambient_dim)?;
        if !big.contains_subspace(small)? {
            return Err(Error::NotContained);
        }
        Ok(big.dim() - small.dim())
    }

    /// Canonical complement of `small` inside `self`: the basis of `self`
    /// reduced modulo `small`, then put in reduced echelon form. Requires
    /// `small ⊆ self`.
    pub fn complement_of(&self, small: &SubspaceBasis) -> Result<Vec<Vec<Rational>>> {
        if !self.contains_subspace(small)? {
            return Err(Error::NotContained);
        }
        let mut residues = Vec::new();
        for v in &self.rows {
            residues.push(small.reduce(v)?);
        }
        Ok(SubspaceBasis::span(self.ambient_dim, residues)?.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(i: usize, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        v
    }

    #[test]
    fn intersect_coordinate_planes() {
        let a = SubspaceBasis::span(3, vec![e(0, 3), e(1, 3)]).unwrap();
        let b = SubspaceBasis::span(3, vec![e(1, 3), e(2, 3)]).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c, SubspaceBasis::span(3, vec![e(1, 3)]).unwrap());
    }

    #[test]
    fn quotient_of_self_is_zero() {
        let v = SubspaceBasis::span(3, vec![e(0, 3), e(2, 3)]).unwrap();
        assert_eq!(SubspaceBasis::quotient_dim(&v, &v).unwrap(), 0);
        let w = SubspaceBasis::span(3, vec![e(1, 3)]).unwrap();
        assert_eq!(SubspaceBasis::quotient_dim(&v, &w), Err(Error::NotContained));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = SubspaceBasis::zero(3);
        let b = SubspaceBasis::zero(4);
        assert!(matches!(a.sum(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.contains(&e(0, 4)).is_err());
    }

    #[test]
    fn complement_completes_basis() {
        let big = SubspaceBasis::full(4);
        let small = SubspaceBasis::span(4, vec![e(0, 4), e(2, 4)]).unwrap();
        let comp = big.complement_of(&small).unwrap();
        assert_eq!(comp.len(), 2);
        let all = small.sum(&SubspaceBasis::span(4, comp).unwrap()).unwrap();
        assert_eq!(all.dim(), 4);
    }

    fn vecs(n: usize, k: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
        proptest::collection::vec(
            proptest::collection::vec((-2i64..3).prop_map(Rational::from_int), n),
            0..=k,
        )
    }

    proptest! {
        #[test]
        fn grassmann_formula(a in vecs(5, 4), b in vecs(5, 4)) {
            let a = SubspaceBasis::span(5, a).unwrap();
            let b = SubspaceBasis::span(5, b).unwrap();
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            prop_assert!(a.contains_subspace(&i).unwrap());
            prop_assert!(b.contains_subspace(&i).unwrap());
        }

        #[test]
        fn canonical_under_recombination(a in vecs(5, 4), coeffs in proptest::collection::vec(-3i64..4, 16)) {
            let v = SubspaceBasis::span(5, a).unwrap();
            let basis = v.vectors();
            let k = basis.len();
            // unit upper-triangular recombination is always invertible
            let mut mixed = Vec::new();
            for i in 0..k {
                let mut w = basis[i].clone();
                for j in (i + 1)..k {
                    let c = Rational::from_int(coeffs[(i * 4 + j) % 16]);
                    for t in 0..5 {
                        let nv = &w[t] + &(&c * &basis[j][t]);
                        w[t] = nv;
                    }
                }
                mixed.push(w);
            }
            mixed.reverse();
            prop_assert_eq!(SubspaceBasis::span(5, mixed).unwrap(), v);
        }
    }
}
