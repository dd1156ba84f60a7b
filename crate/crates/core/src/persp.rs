//! Weak perspective representations: their trivial and nontrivial parts,
//! formality verdicts, and explicit realizations.

use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, LinearForm};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rational, SubspaceBasis};

/// Dimensions of the weak perspective representation spaces at rank bound `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WPRepReport {
    pub k: usize,
    pub dim_trivial: usize,
    pub dim_total: usize,
    pub dim_nontrivial: usize,
    /// Kernel vectors completing a basis of the trivial space.
    pub basis_nontrivial: Vec<Vec<Rational>>,
}

/// A base arrangement, a hyperplane `h0` in general position, and a vector
/// `lambda` defining `beta_j = alpha_j + lambda_j h0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerspectiveDatum {
    base: Arrangement,
    h0: LinearForm,
    lambda: Vec<Rational>,
    rank_bound: usize,
}

/// Image of `M(alpha)^T` in `K^n`: the `lambda` coming from `beta_j =
/// alpha_j + alpha_j(v) h0`.
pub fn trivial_space(a: &Arrangement) -> SubspaceBasis {
    a.coefficient_matrix().row_space()
}

fn check_rank_bound(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::Precondition(format!(
            "weak representations need rank bound k >= 3, got {k}"
        )));
    }
    Ok(())
}

/// Kernel of `N^[k]`, the full space of weak P-Rep parameters.
pub fn wprep_space(a: &Arrangement, k: usize) -> Result<SubspaceBasis> {
    check_rank_bound(k)?;
    Ok(a.relation_matrix(k)?.kernel_basis())
}

pub fn wprep_report(a: &Arrangement, k: usize) -> Result<WPRepReport> {
    let total = wprep_space(a, k)?;
    let trivial = trivial_space(a);
    let basis_nontrivial = total.complement_of(&trivial).map_err(|_| {
        Error::Inconsistent("trivial representations missing from the kernel of N".into())
    })?;
    Ok(WPRepReport {
        k,
        dim_trivial: trivial.dim(),
        dim_total: total.dim(),
        dim_nontrivial: total.dim() - trivial.dim(),
        basis_nontrivial,
    })
}

pub fn is_k_generated(a: &Arrangement, k: usize) -> Result<bool> {
    Ok(wprep_report(a, k)?.dim_nontrivial == 0)
}

pub fn is_formal(a: &Arrangement) -> Result<bool> {
    is_k_generated(a, 3)
}

impl PerspectiveDatum {
    pub fn new(
        base: Arrangement,
        h0: LinearForm,
        lambda: Vec<Rational>,
        rank_bound: usize,
    ) -> Result<Self> {
        check_rank_bound(rank_bound)?;
        if h0.vars() != base.ambient() {
            return Err(Error::DimensionMismatch {
                expected: base.ambient(),
                found: h0.vars(),
            });
        }
        if lambda.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: lambda.len(),
            });
        }
        if base.forms().contains(&h0) {
            return Err(Error::Precondition("h0 is a hyperplane of the base".into()));
        }
        let bound = rank_bound.min(base.ambient() - 1);
        if let Some(f) = base
            .flats(bound)
            .into_iter()
            .find(|f| base.form_contains_flat(&h0, f))
        {
            return Err(Error::Precondition(format!(
                "h0 contains the rank {} flat {:?}",
                f.rank, f.indices
            )));
        }
        Ok(PerspectiveDatum {
            base,
            h0,
            lambda,
            rank_bound,
        })
    }

    /// Uses the deterministic general-position hyperplane of the base.
    pub fn with_default_h0(base: Arrangement, lambda: Vec<Rational>, rank_bound: usize) -> Result<Self> {
        let h0 = base.general_position_form(rank_bound);
        PerspectiveDatum::new(base, h0, lambda, rank_bound)
    }

    pub fn base(&self) -> &Arrangement {
        &self.base
    }

    pub fn h0(&self) -> &LinearForm {
        &self.h0
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn rank_bound(&self) -> usize {
        self.rank_bound
    }
}

/// The arrangement `beta_j = alpha_j + lambda_j h0`.
pub fn realize(p: &PerspectiveDatum) -> Result<Arrangement> {
    let n_mat = p.base.relation_matrix(p.rank_bound)?;
    if !n_mat.mul_vec(&p.lambda)?.iter().all(Rational::is_zero) {
        return Err(Error::Precondition(
            "lambda is not in the kernel of the relation matrix".into(),
        ));
    }
    let mut forms: Vec<LinearForm> = Vec::with_capacity(p.base.len());
    for (j, (alpha, l)) in p.base.forms().iter().zip(&p.lambda).enumerate() {
        let coeffs = alpha
            .coefficients()
            .iter()
            .zip(p.h0.coefficients())
            .map(|(a, h)| a + &(l * h))
            .collect();
        let beta = LinearForm::new(coeffs).map_err(|_| Error::DegenerateRealization {
            first: j,
            second: j,
        })?;
        if let Some(i) = forms.iter().position(|f| *f == beta) {
            return Err(Error::DegenerateRealization { first: i, second: j });
        }
        forms.push(beta);
    }
    Arrangement::from_forms(p.base.ambient(), forms)
}

fn rank_of(a: &Arrangement, subset: &[usize]) -> usize {
    let rows = subset
        .iter()
        .map(|&i| a.form(i).coefficients().to_vec())
        .collect();
    Matrix::from_rows(a.ambient(), rows)
        .expect("forms have ambient length")
        .rank()
}

/// Whether every subset of at most `k` forms that is dependent in `a` is
/// also dependent in `b`.
pub fn verify_weak_rep(a: &Arrangement, b: &Arrangement, k: usize) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.ambient() != b.ambient() {
        return Err(Error::DimensionMismatch {
            expected: a.ambient(),
            found: b.ambient(),
        });
    }
    let n = a.len();
    let mut subset = Vec::with_capacity(k);
    Ok(dependencies_survive(a, b, n, k.min(n), 0, &mut subset))
}

fn dependencies_survive(
    a: &Arrangement,
    b: &Arrangement,
    n: usize,
    k: usize,
    start: usize,
    subset: &mut Vec<usize>,
) -> bool {
    if subset.len() >= 2 && rank_of(a, subset) < subset.len() {
        // every superset is dependent in both once this one is dependent in b
        return rank_of(b, subset) < subset.len();
    }
    if subset.len() == k {
        return true;
    }
    for i in start..n {
        subset.push(i);
        let ok = dependencies_survive(a, b, n, k, i + 1, subset);
        subset.pop();
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> Arrangement {
        Arrangement::from_int_rows(
            3,
            &[
                &[1, -1, 0],
                &[1, 1, 0],
                &[1, 0, -1],
                &[1, 0, 1],
                &[0, 1, -1],
                &[0, 1, 1],
            ],
        )
        .unwrap()
    }

    #[test]
    fn d3_is_formal() {
        let r = wprep_report(&d3(), 3).unwrap();
        assert_eq!((r.dim_total, r.dim_trivial, r.dim_nontrivial), (3, 3, 0));
        assert!(is_formal(&d3()).unwrap());
    }

    #[test]
    fn trivial_dimensions() {
        assert_eq!(trivial_space(&d3()).dim(), 3);
        let pencil = Arrangement::from_int_rows(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]).unwrap();
        assert_eq!(trivial_space(&pencil).dim(), 2);
        let single = Arrangement::from_int_rows(3, &[&[1, 0, 0]]).unwrap();
        assert_eq!(trivial_space(&single).dim(), 1);
    }

    #[test]
    fn rank_bound_below_three_rejected() {
        assert!(matches!(wprep_report(&d3(), 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn four_generic_lines_are_not_formal() {
        let a = Arrangement::from_int_rows(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])
            .unwrap();
        let r = wprep_report(&a, 3).unwrap();
        assert_eq!(r.dim_nontrivial, 1);
        assert_eq!(r.basis_nontrivial.len(), 1);
    }

    #[test]
    fn free_matroid_example() {
        let alpha = Arrangement::from_int_rows(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]).unwrap();
        let beta = Arrangement::from_int_rows(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]).unwrap();
        assert!(verify_weak_rep(&alpha, &beta, 3).unwrap());
        assert!(!verify_weak_rep(&beta, &alpha, 3).unwrap());
        assert!(verify_weak_rep(&alpha, &alpha, 3).unwrap());
    }

    #[test]
    fn realize_zero_and_trivial() {
        let a = d3();
        let zero = vec![Rational::zero(); 6];
        let p = PerspectiveDatum::with_default_h0(a.clone(), zero, 3).unwrap();
        assert_eq!(realize(&p).unwrap(), a);

        let v = [Rational::from_int(2), Rational::from_int(-1), Rational::new(1, 3)];
        let lambda: Vec<Rational> = a.forms().iter().map(|f| f.eval(&v)).collect();
        let p = PerspectiveDatum::with_default_h0(a.clone(), lambda, 3).unwrap();
        let b = realize(&p).unwrap();
        assert!(verify_weak_rep(&a, &b, a.rank()).unwrap());
    }

    #[test]
    fn realize_rejects_non_kernel_lambda() {
        let a = d3();
        let mut lambda = vec![Rational::zero(); 6];
        lambda[0] = Rational::one();
        let p = PerspectiveDatum::with_default_h0(a, lambda, 3).unwrap();
        assert!(matches!(realize(&p), Err(Error::Precondition(_))));
    }

    #[test]
    fn h0_must_avoid_flats() {
        let a = d3();
        let good = LinearForm::from_ints(&[1, 1, 1]).unwrap();
        assert!(PerspectiveDatum::new(a.clone(), good, vec![Rational::zero(); 6], 3).is_ok());
        // passes through the triple point (1, 1, 1)
        let bad = LinearForm::from_ints(&[1, -2, 1]).unwrap();
        assert!(PerspectiveDatum::new(a, bad, vec![Rational::zero(); 6], 3).is_err());
    }
}
