//! Membership in the Jacobian ideal of a localization `A_X`, computed in
//! coordinates adapted to the flat.
//!
//! Write `x = U u + W w` where the columns of `W` span the common zero set of
//! the forms through `X` and `U` completes them to a basis. The localized
//! defining polynomial only involves `u`, so its Jacobian ideal is `I K[u, w]`
//! for the ideal `I` of its `u`-partials, and `f` lies in it exactly when
//! every `w`-coefficient of `f(U u + W w)` lies in `I`. Only the degrees in
//! which `I` is not yet everything contribute conditions.

use std::collections::HashMap;

use super::{ideal_slice, monomial_count, DegreeSlice, Exponent, MonomialIndex, Polynomial};
use crate::arrangement::{Arrangement, Flat};
use crate::error::Result;
use crate::exactlin::{dot, primitive, Rational, SubspaceBasis};

/// Precomputed local data for every flat of a given rank, valid for
/// degrees up to `max_degree`.
#[derive(Clone, Debug)]
pub struct SaturationConditions {
    ambient: usize,
    max_degree: u32,
    flats: Vec<LocalFlat>,
}

#[derive(Clone, Debug)]
struct LocalFlat {
    /// Linear forms `x_i` in the local variables `(u, w)`.
    substitution: Vec<Polynomial>,
    rank: usize,
    /// Annihilators of `I_j` for each `j` where `I_j` is a proper subspace.
    conditions: Vec<(u32, MonomialIndex, Vec<Vec<Rational>>)>,
}

impl SaturationConditions {
    pub fn new(a: &Arrangement, k: usize, max_degree: u32) -> Result<Self> {
        let flats = a
            .flats_of_rank(k)
            .iter()
            .map(|x| LocalFlat::new(a, x, max_degree))
            .collect::<Result<Vec<_>>>()?;
        Ok(SaturationConditions {
            ambient: a.ambient(),
            max_degree,
            flats,
        })
    }

    /// Linear conditions cutting out the slice in degree `d`.
    pub fn condition_rows(&self, d: u32) -> Vec<Vec<Rational>> {
        assert!(d <= self.max_degree, "degree {d} beyond precomputed range");
        let index = MonomialIndex::new(self.ambient, d);
        let mut rows = Vec::new();
        for f in &self.flats {
            rows.extend(f.condition_rows(&index));
        }
        rows
    }

    pub fn slice(&self, d: u32) -> Result<DegreeSlice> {
        let n = monomial_count(self.ambient, d);
        let conditions = SubspaceBasis::span(n, self.condition_rows(d))?;
        Ok(DegreeSlice {
            degree: d,
            nvars: self.ambient,
            space: conditions.annihilator(),
        })
    }
}

/// `(J_{A_X})_d` through the local conditions.
pub fn local_jacobian_slice(a: &Arrangement, flat: &Flat, d: u32) -> Result<DegreeSlice> {
    let local = LocalFlat::new(a, flat, d)?;
    let index = MonomialIndex::new(a.ambient(), d);
    let conditions = SubspaceBasis::span(index.len(), local.condition_rows(&index))?;
    Ok(DegreeSlice {
        degree: d,
        nvars: a.ambient(),
        space: conditions.annihilator(),
    })
}

impl LocalFlat {
    fn new(a: &Arrangement, flat: &Flat, max_degree: u32) -> Result<Self> {
        let n = a.ambient();
        let w: Vec<Vec<Rational>> = a.flat_kernel(flat).vectors().iter().map(|v| primitive(v)).collect();
        let mut span = SubspaceBasis::span(n, w.clone())?;
        let mut u = Vec::new();
        for i in 0..n {
            if span.dim() == n {
                break;
            }
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            if !span.contains(&e)? {
                span = SubspaceBasis::span(n, span.vectors().into_iter().chain([e.clone()]))?;
                u.push(e);
            }
        }
        let r = u.len();
        let local_vars = n;
        let substitution = (0..n)
            .map(|i| {
                let mut p = Polynomial::zero(local_vars);
                for (c, v) in u.iter().chain(&w).enumerate() {
                    let mut exp = vec![0; local_vars];
                    exp[c] = 1;
                    p.add_term(exp, &v[i]);
                }
                p
            })
            .collect();

        let factors: Vec<Polynomial> = flat
            .indices
            .iter()
            .map(|&i| {
                let coeffs = a.form(i).integral_coefficients();
                let mut p = Polynomial::zero(r);
                for (c, v) in u.iter().enumerate() {
                    let mut exp = vec![0; r];
                    exp[c] = 1;
                    p.add_term(exp, &dot(&coeffs, v));
                }
                p
            })
            .collect();
        let q = Polynomial::product(r, &factors);
        let partials: Vec<Polynomial> = (0..r).map(|i| q.derivative(i)).collect();

        let mut conditions = Vec::new();
        for j in 0..=max_degree {
            let slice = ideal_slice(&partials, r, j)?;
            let total = monomial_count(r, j);
            if slice.dim() == total {
                break;
            }
            conditions.push((j, MonomialIndex::new(r, j), slice.space.annihilator().vectors()));
        }
        Ok(LocalFlat {
            substitution,
            rank: r,
            conditions,
        })
    }

    fn condition_rows(&self, index: &MonomialIndex) -> Vec<Vec<Rational>> {
        let d = index.degree();
        let active: Vec<&(u32, MonomialIndex, Vec<Vec<Rational>>)> =
            self.conditions.iter().filter(|(j, _, _)| *j <= d).collect();
        let Some(jmax) = active.iter().map(|(j, _, _)| *j).max() else {
            return Vec::new();
        };
        let r = self.rank;
        let s = self.substitution.len() - r;

        // row layout: for each active degree j, blocks indexed by the
        // w-monomial, each holding one row per annihilator vector
        let mut offsets: HashMap<u32, (usize, MonomialIndex, usize)> = HashMap::new();
        let mut total = 0;
        for (j, _, ann) in &active {
            let widx = MonomialIndex::new(s, d - j);
            let count = widx.len() * ann.len();
            offsets.insert(*j, (total, widx, ann.len()));
            total += count;
        }
        let mut rows = vec![vec![Rational::zero(); index.len()]; total];
        let lookup: HashMap<u32, &(u32, MonomialIndex, Vec<Vec<Rational>>)> =
            active.iter().map(|c| (c.0, *c)).collect();

        let powers = self.truncated_powers(d, jmax);
        for (col, mono) in index.monomials().iter().enumerate() {
            let mut acc = Polynomial::constant(self.substitution.len(), Rational::one());
            for (i, &p) in mono.iter().enumerate() {
                if p > 0 {
                    acc = mul_truncated(&acc, &powers[i][p as usize], r, jmax);
                }
            }
            for (exp, c) in acc.terms() {
                let j: u32 = exp[..r].iter().sum();
                let Some((_, uidx, ann)) = lookup.get(&j) else {
                    continue;
                };
                let (start, widx, width) = &offsets[&j];
                let mu = uidx.position(&exp[..r]).expect("u-part has degree j");
                let nu = widx.position(&exp[r..]).expect("w-part has degree d - j");
                for (t, a) in ann.iter().enumerate() {
                    if !a[mu].is_zero() {
                        let row = &mut rows[start + nu * width + t];
                        row[col] += &(&a[mu] * c);
                    }
                }
            }
        }
        rows
    }

    /// `x_i^p` for `p <= d`, dropping terms of `u`-degree above `jmax`.
    fn truncated_powers(&self, d: u32, jmax: u32) -> Vec<Vec<Polynomial>> {
        let nv = self.substitution.len();
        self.substitution
            .iter()
            .map(|x| {
                let mut out = vec![Polynomial::constant(nv, Rational::one())];
                for p in 1..=d as usize {
                    let next = mul_truncated(&out[p - 1], x, self.rank, jmax);
                    out.push(next);
                }
                out
            })
            .collect()
    }
}

fn mul_truncated(a: &Polynomial, b: &Polynomial, r: usize, jmax: u32) -> Polynomial {
    let mut acc: HashMap<Exponent, Rational> = HashMap::new();
    for (e, x) in a.terms() {
        let de: u32 = e[..r].iter().sum();
        for (f, y) in b.terms() {
            let df: u32 = f[..r].iter().sum();
            if de + df > jmax {
                continue;
            }
            let g: Exponent = e.iter().zip(f).map(|(p, q)| p + q).collect();
            *acc.entry(g).or_default() += &(x * y);
        }
    }
    let mut p = Polynomial::zero(a.nvars());
    for (e, c) in acc {
        p.add_term(e, &c);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyjac::Polynomial;

    fn localized_partials(a: &Arrangement, flat: &Flat) -> Vec<Polynomial> {
        let factors: Vec<Polynomial> = flat
            .indices
            .iter()
            .map(|&i| Polynomial::from_linear_form(a.form(i)))
            .collect();
        let q = Polynomial::product(a.ambient(), &factors);
        (0..a.ambient()).map(|i| q.derivative(i)).collect()
    }

    #[test]
    fn agrees_with_direct_ideal_slices() {
        let a = Arrangement::from_int_rows(
            3,
            &[
                &[1, -1, 0],
                &[1, 1, 0],
                &[1, 0, -1],
                &[1, 0, 1],
                &[0, 1, -1],
                &[0, 1, 1],
                &[2, 3, 5],
            ],
        )
        .unwrap();
        for flat in a.flats(2) {
            for d in 0..8 {
                let local = local_jacobian_slice(&a, &flat, d).unwrap();
                let direct = ideal_slice(&localized_partials(&a, &flat), 3, d).unwrap();
                assert_eq!(local, direct, "flat {:?} degree {d}", flat.indices);
            }
        }
    }

    #[test]
    fn agrees_in_four_variables() {
        let a = Arrangement::from_int_rows(
            4,
            &[
                &[1, 0, 0, 0],
                &[0, 1, 0, 0],
                &[0, 0, 1, 0],
                &[1, 1, 1, 0],
                &[1, 2, 0, 1],
                &[0, 0, 0, 1],
            ],
        )
        .unwrap();
        for flat in a.flats(3) {
            for d in 0..5 {
                let local = local_jacobian_slice(&a, &flat, d).unwrap();
                let direct = ideal_slice(&localized_partials(&a, &flat), 4, d).unwrap();
                assert_eq!(local, direct, "flat {:?} degree {d}", flat.indices);
            }
        }
    }
}
