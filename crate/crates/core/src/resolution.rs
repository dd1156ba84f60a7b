//! Graded Betti numbers of the module `D_0` of derivations killing `Q`, for
//! line arrangements, computed degree by degree.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::exactlin::{dot, primitive, Matrix, ModMatrix, Rational, SubspaceBasis};
use crate::polyjac::{
    monomial_count, partials, MonomialIndex, Polynomial, SaturationConditions,
};

/// Triples `(a, b, c)` of degree-`e` forms with `a Q_x + b Q_y + c Q_z = 0`,
/// coordinates concatenated component by component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationSlice {
    pub degree: u32,
    pub basis: SubspaceBasis,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub n: usize,
    pub b0: BTreeMap<u32, usize>,
    pub b1: BTreeMap<u32, usize>,
    pub regularity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub degree: u32,
    /// Coefficients of `d/dx`, `d/dy`, `d/dz`.
    pub components: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub table: BettiTable,
    /// Minimal generators with coprime integer coefficients.
    pub generators: Vec<Derivation>,
    /// `dim D_0` in degrees `0..=n-1`.
    pub slice_dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    Free { d1: u32, d2: u32 },
    NearlyFree { a: u32, b: u32 },
    PlusOne { a: u32, b: u32, level: u32 },
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub n: usize,
    /// `b_{1,j}(D_0)`.
    pub d0_b1: BTreeMap<u32, usize>,
    /// `b_{0,d}(J^sat / J)` over the computed window.
    pub sat_b0: BTreeMap<u32, usize>,
    /// `dim (J^sat / J)_d` over the same window.
    pub sat_dims: BTreeMap<u32, usize>,
    pub agree: bool,
}

fn check_lines(a: &Arrangement) -> Result<()> {
    if a.ambient() != 3 {
        return Err(Error::Unsupported(
            "derivation modules are computed for line arrangements only".into(),
        ));
    }
    Ok(())
}

fn check_essential(a: &Arrangement) -> Result<()> {
    check_lines(a)?;
    if !a.is_essential() {
        return Err(Error::Precondition("arrangement is not essential".into()));
    }
    Ok(())
}

/// `C(e - j + 2, 2)`, zero when `e < j`.
pub fn shifted_rank(e: u32, j: u32) -> usize {
    if e < j {
        0
    } else {
        monomial_count(3, e - j)
    }
}

/// `D_0` in degree `e`. The basis is obtained from [`dh_slice`] and is
/// certified complete against the rank of the defining linear map modulo a
/// large prime; if that bound does not close, the kernel is computed
/// directly.
pub fn d0_slice(a: &Arrangement, e: u32) -> Result<DerivationSlice> {
    check_lines(a)?;
    let system = jacobian_system(a, e);
    let span = SubspaceBasis::span(system.cols(), d0_candidates(a, e)?)?;
    for i in 0..CERTIFY_PRIMES {
        if system.rank_mod_prime(i).map(|r| system.cols() - r) == Some(span.dim()) {
            return Ok(DerivationSlice { degree: e, basis: span });
        }
    }
    Ok(DerivationSlice {
        degree: e,
        basis: system.kernel_basis(),
    })
}

/// `dim D_0` in degree `e` without a canonical basis. It equals the
/// dimension of [`dh_slice`]; the rank of the defining map of `D_0` modulo a
/// prime confirms it, and the kernel is computed directly otherwise.
pub fn d0_dim(a: &Arrangement, e: u32) -> Result<usize> {
    check_lines(a)?;
    let k = dh_system(a, e)?.kernel_with_free_columns().0.len();
    let system = jacobian_system(a, e);
    for i in 0..CERTIFY_PRIMES {
        if system.rank_mod_prime(i).map(|r| system.cols() - r) == Some(k) {
            return Ok(k);
        }
    }
    Ok(system.cols() - system.rank())
}

/// `dim D_0` in every degree `e <= n - 1`, certified from the generators of
/// a resolution: their multiples, independent modulo a prime, bound the
/// dimension from below, and the rank of the defining map modulo the same
/// prime bounds it from above. Fails if the bounds never meet, which means
/// the generators do not span.
pub fn generated_dims(a: &Arrangement, res: &Resolution) -> Result<Vec<usize>> {
    check_lines(a)?;
    let n = a.len() as u32;
    let mut dims = Vec::new();
    for e in 0..n {
        let target = MonomialIndex::new(3, e);
        let mut rows = Vec::new();
        for g in res.generators.iter().filter(|g| g.degree <= e) {
            for mono in MonomialIndex::new(3, e - g.degree).monomials() {
                let m = Polynomial::monomial(mono.clone(), Rational::one());
                let mut row = Vec::with_capacity(3 * target.len());
                for c in &g.components {
                    row.extend((c * &m).to_vector(&target)?);
                }
                rows.push(row);
            }
        }
        let system = jacobian_system(a, e);
        let cols = system.cols();
        let spanned = Matrix::from_rows(cols, rows)?;
        let dim = (0..CERTIFY_PRIMES).find_map(|i| {
            let lower = spanned.rank_mod_prime(i)?;
            let upper = cols - system.rank_mod_prime(i)?;
            (lower == upper).then_some(lower)
        });
        dims.push(dim.ok_or_else(|| {
            Error::Inconsistent(format!("generators do not span D_0 in degree {e}"))
        })?);
    }
    Ok(dims)
}

fn d0_candidates(a: &Arrangement, e: u32) -> Result<Vec<Vec<Rational>>> {
    dh_system(a, e)?
        .kernel_with_free_columns()
        .0
        .iter()
        .map(|v| to_d0(a, e, v))
        .collect()
}

const CERTIFY_PRIMES: usize = 3;

/// The map `(a, b, c) -> a Q_x + b Q_y + c Q_z` on degree-`e` triples.
fn jacobian_system(a: &Arrangement, e: u32) -> Matrix {
    let parts = partials(a);
    let source = MonomialIndex::new(3, e);
    let target = MonomialIndex::new(3, e + a.len() as u32 - 1);
    let ns = source.len();
    let mut m = Matrix::zeros(target.len(), 3 * ns);
    for (i, p) in parts.iter().enumerate() {
        for (c, mono) in source.monomials().iter().enumerate() {
            for (exp, coef) in p.terms() {
                let prod: Vec<u32> = exp.iter().zip(mono).map(|(x, y)| x + y).collect();
                let row = target.position(&prod).expect("product has target degree");
                m[(row, i * ns + c)] = coef.clone();
            }
        }
    }
    m
}

/// Degree-`e` derivations `theta` with `theta(alpha_i)` divisible by
/// `alpha_i` for every `i` and `theta(alpha_0) = 0`, in the coordinates of
/// [`d0_slice`]. As a graded module this is isomorphic to `D_0`, and its
/// defining conditions have small coefficients.
pub fn dh_slice(a: &Arrangement, e: u32) -> Result<SubspaceBasis> {
    Ok(dh_system(a, e)?.kernel_basis())
}

fn dh_system(a: &Arrangement, e: u32) -> Result<Matrix> {
    check_lines(a)?;
    let idx = MonomialIndex::new(3, e);
    let ns = idx.len();
    let forms: Vec<Vec<Rational>> = a.forms().iter().map(|f| f.integral_coefficients()).collect();
    let mut rows = Vec::new();
    for r in 0..ns {
        let mut row = vec![Rational::zero(); 3 * ns];
        for k in 0..3 {
            row[k * ns + r] = forms[0][k].clone();
        }
        rows.push(row);
    }
    for c in &forms[1..] {
        let restriction = restrict_to_line(c, &idx)?;
        for binary in restriction {
            let mut row = vec![Rational::zero(); 3 * ns];
            for k in 0..3 {
                if c[k].is_zero() {
                    continue;
                }
                for (col, x) in binary.iter().enumerate() {
                    if !x.is_zero() {
                        row[k * ns + col] = &c[k] * x;
                    }
                }
            }
            rows.push(row);
        }
    }
    Matrix::from_rows(3 * ns, rows)
}

/// For each coefficient of a binary form of degree `e`, the row giving that
/// coefficient of `f(s p + t q)` in terms of the coefficients of `f`, where
/// `p`, `q` span the zero set of the form `c`.
fn restrict_to_line(c: &[Rational], idx: &MonomialIndex) -> Result<Vec<Vec<Rational>>> {
    let e = idx.degree();
    let kernel = Matrix::from_rows(3, vec![c.to_vec()])?.kernel_basis().vectors();
    let [p, q] = [&kernel[0], &kernel[1]].map(|v| primitive(v));
    let coords: Vec<Polynomial> = (0..3)
        .map(|k| {
            let mut l = Polynomial::zero(2);
            l.add_term(vec![1, 0], &p[k]);
            l.add_term(vec![0, 1], &q[k]);
            l
        })
        .collect();
    let powers: Vec<Vec<Polynomial>> = coords
        .iter()
        .map(|l| {
            let mut out = vec![Polynomial::constant(2, Rational::one())];
            for j in 1..=e as usize {
                let next = &out[j - 1] * l;
                out.push(next);
            }
            out
        })
        .collect();
    let binary = MonomialIndex::new(2, e);
    let mut rows = vec![vec![Rational::zero(); idx.len()]; binary.len()];
    for (col, mono) in idx.monomials().iter().enumerate() {
        let f = Polynomial::product(2, (0..3).map(|k| &powers[k][mono[k] as usize]));
        for (b, x) in f.to_vector(&binary)?.into_iter().enumerate() {
            rows[b][col] = x;
        }
    }
    Ok(rows)
}

/// Sends `theta` in [`dh_slice`] to `theta - (theta(Q) / n Q) theta_E`,
/// which kills `Q`. Fails unless `theta(alpha_i)` is divisible by
/// `alpha_i` for every `i`, so success certifies membership in `D_0`.
fn to_d0(a: &Arrangement, e: u32, v: &[Rational]) -> Result<Vec<Rational>> {
    let idx = MonomialIndex::new(3, e);
    let ns = idx.len();
    let theta: Vec<Polynomial> = (0..3).map(|k| Polynomial::from_vector(&idx, &v[k * ns..(k + 1) * ns])).collect();
    let mut h = Polynomial::zero(3);
    for f in a.forms() {
        let c = f.integral_coefficients();
        let mut image = Polynomial::zero(3);
        for k in 0..3 {
            image = &image + &theta[k].scale(&c[k]);
        }
        let quotient = image.div_linear(&c).ok_or_else(|| {
            Error::Inconsistent(format!("derivation of degree {e} is not tangent to {f}"))
        })?;
        h = &h + &quotient;
    }
    let h = h.scale(&Rational::new(1, a.len() as i64));
    let mut out = Vec::with_capacity(3 * ns);
    for (k, t) in theta.iter().enumerate() {
        let corrected = t - &(&h * &Polynomial::var(k, 3));
        out.extend(corrected.to_vector(&idx)?);
    }
    Ok(out)
}

/// Multiplies a vector of `(S_from)^3` by the monomial `mono`.
fn shift_triple(v: &[Rational], from: &MonomialIndex, to: &MonomialIndex, mono: &[u32]) -> Vec<Rational> {
    let (nf, nt) = (from.len(), to.len());
    let mut out = vec![Rational::zero(); 3 * nt];
    for comp in 0..3 {
        for (c, x) in v[comp * nf..(comp + 1) * nf].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let prod: Vec<u32> = from.monomial(c).iter().zip(mono).map(|(a, b)| a + b).collect();
            out[comp * nt + to.position(&prod).expect("shifted degree")] = x.clone();
        }
    }
    out
}

fn triple_to_derivation(degree: u32, v: &[Rational]) -> Derivation {
    let idx = MonomialIndex::new(3, degree);
    let n = idx.len();
    Derivation {
        degree,
        components: (0..3)
            .map(|c| Polynomial::from_vector(&idx, &v[c * n..(c + 1) * n]))
            .collect(),
    }
}

/// Minimalizes degree by degree on the module of [`dh_slice`], which has
/// the same Betti table; generators are mapped back into `D_0`.
pub fn resolve(a: &Arrangement) -> Result<Resolution> {
    resolve_with(a, false)
}

/// With `perturb`, each new generator is shifted by the image of the
/// previous generators, which changes representatives but not the table.
fn resolve_with(a: &Arrangement, perturb: bool) -> Result<Resolution> {
    check_essential(a)?;
    let n = a.len();
    let top = n as u32 - 1;
    let mut gens: Vec<(u32, Vec<Rational>)> = Vec::new();
    let mut b0 = BTreeMap::new();
    let mut b1 = BTreeMap::new();
    let mut slice_dims = Vec::new();
    // relations of the previous degree, in that degree's source layout
    let mut prev_relations: Vec<Vec<Rational>> = Vec::new();

    for e in 0..=top {
        // a kernel vector is determined by its free coordinates, so the
        // degree-e piece is handled through its projection onto them
        let (kernel, free) = dh_system(a, e)?.kernel_with_free_columns();
        let dim = kernel.len();
        slice_dims.push(dim);
        let target = MonomialIndex::new(3, e);

        let old: Vec<&(u32, Vec<Rational>)> = gens.iter().filter(|(d, _)| *d < e).collect();
        let mut images = Vec::new();
        for (d, v) in &old {
            let from = MonomialIndex::new(3, *d);
            for mono in MonomialIndex::new(3, e - d).monomials() {
                let full = shift_triple(v, &from, &target, mono);
                images.push(free.iter().map(|&f| full[f].clone()).collect::<Vec<_>>());
            }
        }
        let image = SubspaceBasis::span(dim, images.clone())?;

        let relations = if images.is_empty() {
            Vec::new()
        } else {
            Matrix::from_rows(dim, images.clone())?
                .transpose()
                .kernel_basis()
                .vectors()
        };
        let source_dim = images.len();
        let lifted = lift_relations(&prev_relations, &old, e)?;
        let lifted_span = SubspaceBasis::span(source_dim, lifted)?;
        let rel_span = SubspaceBasis::span(source_dim, relations.clone())?;
        if !rel_span.contains_subspace(&lifted_span)? {
            return Err(Error::Inconsistent(format!(
                "lifted relations are not relations in degree {e}"
            )));
        }
        let minimal_rel = rel_span.dim() - lifted_span.dim();
        if minimal_rel > 0 {
            b1.insert(e, minimal_rel);
        }

        let mut fresh: Vec<Vec<Rational>> = (0..dim)
            .filter(|t| !image.pivots().contains(t))
            .map(|t| kernel[t].clone())
            .collect();
        if perturb && !images.is_empty() {
            let mut shift = vec![Rational::zero(); 3 * target.len()];
            for (d, v) in &old {
                let from = MonomialIndex::new(3, *d);
                for mono in MonomialIndex::new(3, e - d).monomials() {
                    for (x, y) in shift.iter_mut().zip(shift_triple(v, &from, &target, mono)) {
                        *x += &y;
                    }
                }
            }
            for v in &mut fresh {
                for (x, s) in v.iter_mut().zip(&shift) {
                    *x += s;
                }
            }
        }
        if !fresh.is_empty() {
            b0.insert(e, fresh.len());
        }
        gens.extend(fresh.into_iter().map(|v| (e, v)));
        prev_relations = relations;
    }

    if b0.contains_key(&top) {
        return Err(Error::Inconsistent(format!(
            "D_0 has a minimal generator in degree {top}"
        )));
    }
    let total0: usize = b0.values().sum();
    let total1: usize = b1.values().sum();
    if total0 != total1 + 2 {
        return Err(Error::Inconsistent(format!(
            "{total0} generators and {total1} relations do not give rank 2"
        )));
    }
    let regularity = b0
        .keys()
        .copied()
        .chain(b1.keys().map(|j| j - 1))
        .max()
        .unwrap_or(0);
    Ok(Resolution {
        table: BettiTable {
            n,
            b0,
            b1,
            regularity,
        },
        generators: gens
            .iter()
            .map(|(d, v)| Ok(triple_to_derivation(*d, &primitive(&to_d0(a, *d, v)?))))
            .collect::<Result<_>>()?,
        slice_dims,
    })
}

/// Multiplies each degree `e - 1` relation by `x`, `y`, `z`, rewriting it
/// in the degree-`e` source layout. Generators of degree `e - 1` get zero
/// blocks.
fn lift_relations(
    prev: &[Vec<Rational>],
    old: &[&(u32, Vec<Rational>)],
    e: u32,
) -> Result<Vec<Vec<Rational>>> {
    if prev.is_empty() {
        return Ok(Vec::new());
    }
    // the previous layout holds only generators of degree below e - 1,
    // which come first since generators are stored in degree order
    let mut blocks = Vec::new();
    let (mut po, mut o) = (0, 0);
    for (d, _) in old {
        if d + 1 < e {
            blocks.push((po, o, e - 1 - d));
            po += shifted_rank(e - 1, *d);
        }
        o += shifted_rank(e, *d);
    }
    let total = o;
    let mut out = Vec::new();
    for var in 0..3 {
        let mut mono = vec![0u32; 3];
        mono[var] = 1;
        for r in prev {
            let mut v = vec![Rational::zero(); total];
            for &(from_off, to_off, from_deg) in &blocks {
                let from = MonomialIndex::new(3, from_deg);
                let to = MonomialIndex::new(3, from_deg + 1);
                for (c, x) in r[from_off..from_off + from.len()].iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let prod: Vec<u32> = from.monomial(c).iter().zip(&mono).map(|(a, b)| a + b).collect();
                    v[to_off + to.position(&prod).expect("shifted degree")] = x.clone();
                }
            }
            out.push(v);
        }
    }
    Ok(out)
}

pub fn betti_table(a: &Arrangement) -> Result<BettiTable> {
    Ok(resolve(a)?.table)
}

/// `b_{1, n-1}`, the number of minimal syzygies in the top possible degree.
pub fn max_degree_syzygy_dim(a: &Arrangement) -> Result<usize> {
    let t = betti_table(a)?;
    Ok(t.b1.get(&(t.n as u32 - 1)).copied().unwrap_or(0))
}

pub fn regularity(a: &Arrangement) -> Result<u32> {
    Ok(betti_table(a)?.regularity)
}

pub fn classify(a: &Arrangement) -> Result<Classification> {
    Ok(classify_table(&betti_table(a)?))
}

pub fn classify_table(t: &BettiTable) -> Classification {
    let mut degs: Vec<u32> = Vec::new();
    for (&d, &c) in &t.b0 {
        degs.extend(std::iter::repeat(d).take(c));
    }
    let rels: Vec<(u32, usize)> = t.b1.iter().map(|(&d, &c)| (d, c)).collect();
    if rels.is_empty() && degs.len() == 2 {
        return Classification::Free {
            d1: degs[0],
            d2: degs[1],
        };
    }
    if degs.len() == 3 && rels.len() == 1 && rels[0].1 == 1 {
        let (a, b, d) = (degs[0], degs[1], degs[2]);
        if rels[0].0 == d + 1 {
            if b == d {
                return Classification::NearlyFree { a, b };
            }
            return Classification::PlusOne { a, b, level: d };
        }
    }
    Classification::Other
}

/// Formality read off the regularity of an irreducible line arrangement.
pub fn formality_via_regularity(a: &Arrangement) -> Result<bool> {
    if !a.is_irreducible_line_arrangement()? {
        return Err(Error::Precondition(
            "regularity characterizes formality only for irreducible arrangements".into(),
        ));
    }
    Ok(regularity(a)? < a.len() as u32 - 2)
}

pub fn duality_check(a: &Arrangement) -> Result<DualityReport> {
    let t = betti_table(a)?;
    duality_check_with(a, &t)
}

/// Compares `b_{1,j}(D_0)` with `b_{0, 2n-2-j}(J^sat / J)`, the latter
/// computed from saturation slices in degrees `n-1 ..= 2n-4`.
pub fn duality_check_with(a: &Arrangement, table: &BettiTable) -> Result<DualityReport> {
    check_essential(a)?;
    let n = a.len() as u32;
    let lo = n.saturating_sub(2);
    let hi = (2 * n).saturating_sub(4).max(lo);
    let conditions = SaturationConditions::new(a, 2, hi)?;
    let parts = partials(a);

    // J lies in its saturation as soon as the partials do
    let top = MonomialIndex::new(3, n - 1);
    let top_conditions = conditions.condition_rows(n - 1);
    for p in &parts {
        let v = p.to_vector(&top)?;
        if top_conditions.iter().any(|row| !dot(row, &v).is_zero()) {
            return Err(Error::Inconsistent(
                "a partial derivative of Q is not in the saturation".into(),
            ));
        }
    }

    let mut sat_b0 = BTreeMap::new();
    let mut sat_dims = BTreeMap::new();
    let mut prev_conditions: Vec<Vec<Rational>> = Vec::new();
    let mut prev_exact: Option<Vec<Vec<Rational>>> = None;
    for d in lo..=hi {
        let to = MonomialIndex::new(3, d);
        let rows = conditions.condition_rows(d);
        let mut jac = Vec::new();
        let mut jac_dim = 0;
        if d + 1 >= n {
            let e = d + 1 - n;
            jac_dim = 3 * monomial_count(3, e) - d0_dim(a, e)?;
            for p in &parts {
                for m in MonomialIndex::new(3, e).monomials() {
                    jac.push((p * &Polynomial::monomial(m.clone(), Rational::one())).to_vector(&to)?);
                }
            }
        }

        let sat_dim = if d == lo {
            saturation_dim(&rows, to.len())?
        } else if let Some(dim) = no_new_generators(&prev_conditions, &rows, &jac, d) {
            prev_exact = None;
            dim
        } else {
            let sat = Matrix::from_rows(to.len(), rows.clone())?.kernel_with_free_columns().0;
            let previous = match prev_exact.take() {
                Some(v) => v,
                None => Matrix::from_rows(monomial_count(3, d - 1), prev_conditions.clone())?
                    .kernel_with_free_columns()
                    .0,
            };
            let from = MonomialIndex::new(3, d - 1);
            let mut spanning = jac;
            for v in &previous {
                let p = Polynomial::from_vector(&from, v);
                for var in 0..3 {
                    spanning.push((&p * &Polynomial::var(var, 3)).to_vector(&to)?);
                }
            }
            let generated = rank_bounded_by(Matrix::from_rows(to.len(), spanning)?, sat.len())?;
            if sat.len() > generated {
                sat_b0.insert(d, sat.len() - generated);
            }
            let dim = sat.len();
            prev_exact = Some(sat);
            dim
        };
        let quotient = sat_dim.checked_sub(jac_dim).ok_or_else(|| {
            Error::Inconsistent(format!("Jacobian slice of degree {d} exceeds its saturation"))
        })?;
        if quotient > 0 {
            sat_dims.insert(d, quotient);
        }
        prev_conditions = rows;
    }
    let mirrored: BTreeMap<u32, usize> = sat_b0
        .iter()
        .map(|(&d, &c)| ((2 * n - 2).wrapping_sub(d), c))
        .collect();
    Ok(DualityReport {
        n: n as usize,
        d0_b1: table.b1.clone(),
        agree: mirrored == table.b1,
        sat_b0,
        sat_dims,
    })
}

/// `dim J^sat_d` from its defining conditions: if they are independent
/// modulo a prime they are independent over `Q`.
fn saturation_dim(rows: &[Vec<Rational>], cols: usize) -> Result<usize> {
    for i in 0..CERTIFY_PRIMES {
        if ModMatrix::reduce(rows, cols, i).map(|m| m.rank()) == Some(rows.len()) {
            return Ok(cols - rows.len());
        }
    }
    Ok(cols - Matrix::from_rows(cols, rows.to_vec())?.rank())
}

/// `dim J^sat_d`, provided a prime shows that `x J^sat_{d-1} + y J^sat_{d-1}
/// + z J^sat_{d-1} + J_d` is all of `J^sat_d`.
///
/// When the conditions in degrees `d - 1` and `d` are independent modulo
/// `p`, the kernel modulo `p` in degree `d - 1` is the reduction of the
/// integer points of the saturation, so the rank of the products modulo `p`
/// is a lower bound for their rank over `Q`, which is at most `dim J^sat_d`.
fn no_new_generators(
    prev_rows: &[Vec<Rational>],
    rows: &[Vec<Rational>],
    jac: &[Vec<Rational>],
    d: u32,
) -> Option<usize> {
    let from = MonomialIndex::new(3, d - 1);
    let to = MonomialIndex::new(3, d);
    for i in 0..CERTIFY_PRIMES {
        let here = ModMatrix::reduce(rows, to.len(), i)?;
        let before = ModMatrix::reduce(prev_rows, from.len(), i)?;
        if here.rank() != rows.len() || before.rank() != prev_rows.len() {
            continue;
        }
        let sat_dim = to.len() - rows.len();
        let mut spanning = ModMatrix::reduce(jac, to.len(), i)?.rows().to_vec();
        for v in before.kernel() {
            for var in 0..3 {
                let mut row = vec![0; to.len()];
                for (c, &x) in v.iter().enumerate() {
                    if x != 0 {
                        let mut m = from.monomial(c).to_vec();
                        m[var] += 1;
                        row[to.position(&m).expect("shifted degree")] = x;
                    }
                }
                spanning.push(row);
            }
        }
        let rank = ModMatrix::from_residues(here.prime(), to.len(), spanning).rank();
        return (rank == sat_dim).then_some(sat_dim);
    }
    None
}

/// Rank of a matrix whose row space is known to have dimension at most
/// `bound`. A modular rank reaching the bound settles it; otherwise the rank
/// is computed exactly.
fn rank_bounded_by(m: Matrix, bound: usize) -> Result<usize> {
    for i in 0..CERTIFY_PRIMES {
        if m.rank_mod_prime(i) == Some(bound) {
            return Ok(bound);
        }
    }
    let r = m.rank();
    if r > bound {
        return Err(Error::Inconsistent(format!("rank {r} exceeds the bound {bound}")));
    }
    Ok(r)
}

impl BettiTable {
    /// `sum_j b0[j] C(e-j+2, 2) - sum_j b1[j] C(e-j+2, 2)`.
    pub fn hilbert_value(&self, e: u32) -> i64 {
        let g: usize = self.b0.iter().map(|(&j, &c)| c * shifted_rank(e, j)).sum();
        let r: usize = self.b1.iter().map(|(&j, &c)| c * shifted_rank(e, j)).sum();
        g as i64 - r as i64
    }

    pub fn b1_top(&self) -> usize {
        self.b1.get(&(self.n as u32 - 1)).copied().unwrap_or(0)
    }

    /// Rows `j` with entries `b_{i, i+j}`.
    pub fn rows(&self) -> Vec<(u32, usize, usize)> {
        let mut keys: Vec<u32> = self.b0.keys().copied().collect();
        keys.extend(self.b1.keys().map(|j| j - 1));
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|j| {
                (
                    j,
                    self.b0.get(&j).copied().unwrap_or(0),
                    self.b1.get(&(j + 1)).copied().unwrap_or(0),
                )
            })
            .collect()
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  {:>4} {:>4}", "", 0, 1)?;
        writeln!(f, "total: {:>4} {:>4}", self.b0.values().sum::<usize>(), self.b1.values().sum::<usize>())?;
        for (j, a, b) in self.rows() {
            let cell = |x: usize| if x == 0 { "-".to_string() } else { x.to_string() };
            writeln!(f, "{:>5}: {:>4} {:>4}", j, cell(a), cell(b))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::LinearForm;

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

    fn pencil_plus_two() -> Arrangement {
        Arrangement::from_int_rows(
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[1, 2, 3], &[3, -1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn a3_slices() {
        let a = a3();
        assert_eq!(d0_slice(&a, 0).unwrap().basis.dim(), 0);
        assert_eq!(d0_slice(&a, 1).unwrap().basis.dim(), 0);
        assert_eq!(d0_slice(&a, 2).unwrap().basis.dim(), 1);
    }

    #[test]
    fn a3_is_free() {
        let r = resolve(&a3()).unwrap();
        assert_eq!(r.table.b0, BTreeMap::from([(2, 1), (3, 1)]));
        assert!(r.table.b1.is_empty());
        assert_eq!(r.table.regularity, 3);
        assert_eq!(classify_table(&r.table), Classification::Free { d1: 2, d2: 3 });
        let d = duality_check(&a3()).unwrap();
        assert!(d.agree && d.sat_b0.is_empty());
        assert!(formality_via_regularity(&a3()).unwrap());
    }

    #[test]
    fn generators_are_derivations() {
        let a = a3();
        let parts = partials(&a);
        for g in resolve(&a).unwrap().generators {
            let mut total = Polynomial::zero(3);
            for (c, p) in g.components.iter().zip(&parts) {
                total = &total + &(c * p);
            }
            assert!(total.is_zero());
        }
    }

    #[test]
    fn pencil_plus_two_lines_is_nearly_free() {
        let a = pencil_plus_two();
        let t = betti_table(&a).unwrap();
        assert_eq!(t.b0, BTreeMap::from([(2, 1), (3, 2)]));
        assert_eq!(t.b1, BTreeMap::from([(4, 1)]));
        assert_eq!(classify_table(&t), Classification::NearlyFree { a: 2, b: 3 });
        assert_eq!(max_degree_syzygy_dim(&a).unwrap(), 1);
        assert!(duality_check(&a).unwrap().agree);
    }

    #[test]
    fn hilbert_function_matches_table() {
        for a in [a3(), pencil_plus_two()] {
            let r = resolve(&a).unwrap();
            for (e, &dim) in r.slice_dims.iter().enumerate() {
                assert_eq!(r.table.hilbert_value(e as u32), dim as i64, "degree {e}");
            }
        }
    }

    #[test]
    fn representative_choice_does_not_matter() {
        let a = pencil_plus_two()
            .with_form(LinearForm::from_ints(&[1, -1, 0]).unwrap())
            .unwrap();
        assert_eq!(
            resolve_with(&a, false).unwrap().table,
            resolve_with(&a, true).unwrap().table
        );
    }

    #[test]
    fn non_line_arrangements_rejected() {
        let a = Arrangement::from_int_rows(4, &[&[1, 0, 0, 0]]).unwrap();
        assert!(matches!(d0_slice(&a, 1), Err(Error::Unsupported(_))));
        let pencil = Arrangement::from_int_rows(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]).unwrap();
        assert!(matches!(betti_table(&pencil), Err(Error::Precondition(_))));
    }

    #[test]
    fn classification_patterns() {
        let t = |b0: &[(u32, usize)], b1: &[(u32, usize)]| BettiTable {
            n: 10,
            b0: b0.iter().copied().collect(),
            b1: b1.iter().copied().collect(),
            regularity: 0,
        };
        assert_eq!(
            classify_table(&t(&[(4, 3)], &[(5, 1)])),
            Classification::NearlyFree { a: 4, b: 4 }
        );
        assert_eq!(
            classify_table(&t(&[(2, 1), (3, 1), (5, 1)], &[(6, 1)])),
            Classification::PlusOne { a: 2, b: 3, level: 5 }
        );
        assert_eq!(classify_table(&t(&[(6, 6)], &[(7, 4)])), Classification::Other);
    }

    #[test]
    fn table_rendering() {
        let t = betti_table(&pencil_plus_two()).unwrap();
        let s = t.to_string();
        assert!(s.contains("    2:    1    -"));
        assert!(s.contains("    3:    2    1"));
    }
}
