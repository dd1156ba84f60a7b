//! Independent oracles shared by the integration tests. None of them goes
//! through the local-coordinate or module machinery of the library.

#![allow(dead_code)]

use arrform::arrangement::Arrangement;
use arrform::exactlin::{Rational, SubspaceBasis};
use arrform::polyjac::{ideal_slice, monomial_count, MonomialIndex, Polynomial};

/// The point of a rank-2 flat of a line arrangement, as a vector in `K^3`.
pub fn flat_point(a: &Arrangement, indices: &[usize]) -> Vec<Rational> {
    let flat = a.closure(indices);
    let kernel = a.flat_kernel(&flat);
    assert_eq!(kernel.dim(), 1, "flat {indices:?} is not a point");
    kernel.vectors().remove(0)
}

/// All exponent vectors in three variables of total degree `d`.
fn multi_indices(d: u32) -> Vec<Vec<u32>> {
    MonomialIndex::new(3, d).monomials().to_vec()
}

/// `(d^a x^e / dx^a)(p)` for a monomial `x^e`.
fn derivative_at(e: &[u32], a: &[u32], p: &[Rational]) -> Rational {
    let mut value = Rational::one();
    for i in 0..3 {
        if a[i] > e[i] {
            return Rational::zero();
        }
        for k in 0..a[i] {
            value = &value * &Rational::from_int((e[i] - k) as i64);
        }
        value = &value * &p[i].pow(e[i] - a[i]);
    }
    value
}

/// Degree-`d` forms vanishing to order at least `n_X - 1` at every
/// intersection point `X` of multiplicity `n_X`, imposed through derivatives
/// of order `n_X - 2` evaluated at the point.
pub fn vanishing_order_slice(a: &Arrangement, d: u32) -> SubspaceBasis {
    let index = MonomialIndex::new(3, d);
    let mut rows = Vec::new();
    for flat in a.flats_of_rank(2) {
        let p = flat_point(a, &flat.indices);
        let order = flat.size() as u32 - 1;
        if order == 0 {
            continue;
        }
        if order > d {
            // only the zero form vanishes to order above its degree
            return SubspaceBasis::zero(index.len());
        }
        for alpha in multi_indices(order - 1) {
            rows.push(
                index
                    .monomials()
                    .iter()
                    .map(|e| derivative_at(e, &alpha, &p))
                    .collect::<Vec<_>>(),
            );
        }
    }
    SubspaceBasis::span(index.len(), rows).unwrap().annihilator()
}

/// `(J^sat)_d` as the intersection of the Jacobian ideals of the
/// localizations at every intersection point, each computed from the
/// partials of the product of the lines through it.
pub fn naive_saturation(a: &Arrangement, d: u32) -> SubspaceBasis {
    let n = a.ambient();
    let spaces: Vec<SubspaceBasis> = a
        .flats_of_rank(2)
        .iter()
        .map(|flat| {
            let factors: Vec<Polynomial> = flat
                .indices
                .iter()
                .map(|&i| Polynomial::from_linear_form(a.form(i)))
                .collect();
            let q = Polynomial::product(n, &factors);
            let partials: Vec<Polynomial> = (0..n).map(|i| q.derivative(i)).collect();
            ideal_slice(&partials, n, d).unwrap().space
        })
        .collect();
    SubspaceBasis::intersect_all(monomial_count(n, d), spaces.iter()).unwrap()
}
