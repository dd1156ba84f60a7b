//! Polynomials and degree-by-degree linear algebra on ideals attached to
//! an arrangement: the Jacobian ideal, its codimension-k saturations, and
//! the ideal generated by the `(n-1)`-fold products.

mod poly;
mod saturation;

use serde::{Deserialize, Serialize};

pub use poly::{monomial_count, Exponent, MonomialIndex, Polynomial};
pub use saturation::{local_jacobian_slice, SaturationConditions};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::exactlin::{Rational, SubspaceBasis};

/// The degree-`d` piece of a homogeneous ideal, as a subspace of the
/// coefficient space of degree-`d` forms in graded lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSlice {
    pub degree: u32,
    pub nvars: usize,
    pub space: SubspaceBasis,
}

impl DegreeSlice {
    pub fn monomial_index(&self) -> MonomialIndex {
        MonomialIndex::new(self.nvars, self.degree)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Canonical basis as polynomials.
    pub fn basis_polys(&self) -> Vec<Polynomial> {
        let idx = self.monomial_index();
        self.space
            .rows()
            .iter()
            .map(|v| Polynomial::from_vector(&idx, v))
            .collect()
    }

    pub fn contains_slice(&self, other: &DegreeSlice) -> Result<bool> {
        self.space.contains_subspace(&other.space)
    }
}

/// `Q = prod alpha_i`.
pub fn defining_poly(a: &Arrangement) -> Polynomial {
    let factors: Vec<Polynomial> = a.forms().iter().map(Polynomial::from_linear_form).collect();
    Polynomial::product(a.ambient(), &factors)
}

/// The products `Q / alpha_i` of all but one form.
pub fn cofactors(a: &Arrangement) -> Vec<Polynomial> {
    let factors: Vec<Polynomial> = a.forms().iter().map(Polynomial::from_linear_form).collect();
    (0..factors.len())
        .map(|i| {
            Polynomial::product(
                a.ambient(),
                factors.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, f)| f),
            )
        })
        .collect()
}

/// Partial derivatives of `Q`, up to one common nonzero scalar.
pub fn partials(a: &Arrangement) -> Vec<Polynomial> {
    let factors: Vec<Polynomial> = a.forms().iter().map(Polynomial::from_linear_form_integral).collect();
    let q = Polynomial::product(a.ambient(), &factors);
    (0..a.ambient()).map(|i| q.derivative(i)).collect()
}

/// Checks the Euler relation `sum x_i dQ/dx_i = n Q`.
pub fn euler_check(a: &Arrangement) -> bool {
    let q = defining_poly(a);
    let n = a.ambient();
    let mut lhs = Polynomial::zero(n);
    for i in 0..n {
        lhs = &lhs + &(&Polynomial::var(i, n) * &q.derivative(i));
    }
    lhs == q.scale(&Rational::from_int(a.len() as i64))
}

/// Span of `m * g` over generators `g` and monomials `m` of degree
/// `d - deg g`.
pub fn ideal_slice(generators: &[Polynomial], nvars: usize, d: u32) -> Result<DegreeSlice> {
    let target = MonomialIndex::new(nvars, d);
    let mut rows = Vec::new();
    for g in generators {
        if g.nvars() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
        let Some(deg) = g.degree() else { continue };
        if !g.is_homogeneous() {
            return Err(Error::Precondition("ideal generators must be homogeneous".into()));
        }
        if deg > d {
            continue;
        }
        let terms: Vec<(&Exponent, &Rational)> = g.terms().collect();
        for m in MonomialIndex::new(nvars, d - deg).monomials() {
            let mut row = vec![Rational::zero(); target.len()];
            for (e, c) in &terms {
                let prod: Exponent = e.iter().zip(m).map(|(a, b)| a + b).collect();
                let i = target.position(&prod).expect("product has degree d");
                row[i] = (*c).clone();
            }
            rows.push(row);
        }
    }
    Ok(DegreeSlice {
        degree: d,
        nvars,
        space: SubspaceBasis::span(target.len(), rows)?,
    })
}

/// `(J_A)_d`.
pub fn jacobian_slice(a: &Arrangement, d: u32) -> Result<DegreeSlice> {
    ideal_slice(&partials(a), a.ambient(), d)
}

/// Degree `n - 1` piece of the ideal generated by the `Q / alpha_i`.
pub fn products_slice(a: &Arrangement) -> Result<DegreeSlice> {
    ideal_slice(&cofactors(a), a.ambient(), a.len() as u32 - 1)
}

fn check_codim(a: &Arrangement, k: usize) -> Result<()> {
    let l = a.ambient() - 1;
    if k < 2 || k > l {
        return Err(Error::Precondition(format!(
            "saturation codimension must satisfy 2 <= k <= {l}, got {k}"
        )));
    }
    Ok(())
}

/// `(J^[k])_d`, the intersection over flats `X` of rank `k` of the
/// Jacobian ideals of the localizations `A_X`.
pub fn ksat_slice(a: &Arrangement, k: usize, d: u32) -> Result<DegreeSlice> {
    check_codim(a, k)?;
    SaturationConditions::new(a, k, d)?.slice(d)
}

/// `dim (J^[k])_d - dim (J)_d`, after checking the containment.
pub fn sat_quotient_dim(a: &Arrangement, k: usize, d: u32) -> Result<usize> {
    let sat = ksat_slice(a, k, d)?;
    let jac = jacobian_slice(a, d)?;
    if !sat.contains_slice(&jac)? {
        return Err(Error::Inconsistent(format!(
            "Jacobian slice of degree {d} is not contained in its saturation"
        )));
    }
    Ok(sat.dim() - jac.dim())
}

/// `sum lambda_i Q / alpha_i`.
pub fn lambda_to_poly(a: &Arrangement, lambda: &[Rational]) -> Result<Polynomial> {
    if lambda.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: lambda.len(),
        });
    }
    let mut f = Polynomial::zero(a.ambient());
    for (l, g) in lambda.iter().zip(cofactors(a)) {
        f = &f + &g.scale(l);
    }
    Ok(f)
}

pub fn poly_membership(f: &Polynomial, slice: &DegreeSlice) -> Result<bool> {
    let v = f.to_vector(&slice.monomial_index())?;
    slice.space.contains(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persp;

    fn a3() -> Arrangement {
        Arrangement::from_int_rows(
            3,
            &[
                &[1, 0, 0],
                &[0, 1, 0],
                &[0, 0, 1],
                &[1, -1, 0],
                &[1, 0, -1],
                &[0, 1, -1],
            ],
        )
        .unwrap()
    }

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
    fn a3_defining_polynomial() {
        let q = defining_poly(&a3());
        let x = Polynomial::var(0, 3);
        let y = Polynomial::var(1, 3);
        let z = Polynomial::var(2, 3);
        let expected = Polynomial::product(
            3,
            &[x.clone(), y.clone(), z.clone(), &x - &y, &x - &z, &y - &z],
        );
        assert_eq!(q, expected);
        assert!(euler_check(&a3()));
        assert!(euler_check(&d3()));
    }

    #[test]
    fn single_form() {
        let a = Arrangement::from_int_rows(3, &[&[1, 0, 0]]).unwrap();
        assert_eq!(defining_poly(&a), Polynomial::var(0, 3));
        assert!(euler_check(&a));
    }

    #[test]
    fn principal_ideal_slice() {
        let s = ideal_slice(&[Polynomial::var(0, 3)], 3, 2).unwrap();
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn jacobian_in_degree_n_minus_one() {
        assert_eq!(jacobian_slice(&a3(), 5).unwrap().dim(), 3);
        let p = d3();
        let jac = jacobian_slice(&p, 5).unwrap();
        assert_eq!(jac.dim(), persp::trivial_space(&p).dim());
    }

    #[test]
    fn products_slices() {
        let generic = Arrangement::from_int_rows(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(products_slice(&generic).unwrap().dim(), 3);
        let pencil = Arrangement::from_int_rows(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]).unwrap();
        // products of all but one of n distinct binary forms are independent
        assert_eq!(products_slice(&pencil).unwrap().dim(), 3);
    }

    #[test]
    fn free_arrangement_is_saturated() {
        let a = a3();
        let sat = ksat_slice(&a, 2, 5).unwrap();
        assert_eq!(sat, jacobian_slice(&a, 5).unwrap());
        assert_eq!(sat_quotient_dim(&d3(), 2, 5).unwrap(), 0);
    }

    #[test]
    fn codim_out_of_range() {
        assert!(ksat_slice(&a3(), 1, 5).is_err());
        assert!(ksat_slice(&a3(), 3, 5).is_err());
    }

    #[test]
    fn trivial_lambda_lands_in_jacobian() {
        let a = d3();
        let v = [Rational::from_int(1), Rational::from_int(-2), Rational::from_int(5)];
        let lambda: Vec<Rational> = a.forms().iter().map(|f| f.eval(&v)).collect();
        let f = lambda_to_poly(&a, &lambda).unwrap();
        assert!(poly_membership(&f, &jacobian_slice(&a, 5).unwrap()).unwrap());
    }

    #[test]
    fn added_generic_line_cofactor_is_saturated_not_jacobian() {
        let a = d3().with_form(crate::arrangement::LinearForm::from_ints(&[1, 3, 7]).unwrap()).unwrap();
        let n = a.len();
        let mut lambda = vec![Rational::zero(); n];
        lambda[n - 1] = Rational::one();
        let f = lambda_to_poly(&a, &lambda).unwrap();
        let d = n as u32 - 1;
        assert!(poly_membership(&f, &ksat_slice(&a, 2, d).unwrap()).unwrap());
        assert!(!poly_membership(&f, &jacobian_slice(&a, d).unwrap()).unwrap());
    }
}
