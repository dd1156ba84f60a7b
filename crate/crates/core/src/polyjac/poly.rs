use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::arrangement::{var_name, LinearForm};
use crate::error::{Error, Result};
use crate::exactlin::Rational;

pub type Exponent = Vec<u32>;

/// A polynomial over the rationals in a fixed number of variables. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolynomialJson", into = "PolynomialJson")]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Exponent,
    coef: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    vars: usize,
    terms: Vec<TermJson>,
}

impl TryFrom<PolynomialJson> for Polynomial {
    type Error = Error;
    fn try_from(j: PolynomialJson) -> Result<Self> {
        let mut p = Polynomial::zero(j.vars);
        for t in j.terms {
            if t.exp.len() != j.vars {
                return Err(Error::DimensionMismatch {
                    expected: j.vars,
                    found: t.exp.len(),
                });
            }
            p.add_term(t.exp, &t.coef);
        }
        Ok(p)
    }
}

impl From<Polynomial> for PolynomialJson {
    fn from(p: Polynomial) -> Self {
        PolynomialJson {
            vars: p.nvars,
            terms: p
                .sorted_terms()
                .into_iter()
                .map(|(exp, coef)| TermJson {
                    exp: exp.clone(),
                    coef: coef.clone(),
                })
                .collect(),
        }
    }
}

/// Graded lexicographic comparison, larger monomials first.
fn grlex_desc(a: &Exponent, b: &Exponent) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(vec![0; nvars], &c);
        p
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = Polynomial::zero(exp.len());
        p.add_term(exp, &c);
        p
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        Polynomial::monomial(exp, Rational::one())
    }

    pub fn from_linear_form(f: &LinearForm) -> Self {
        Self::from_coefficients(f.coefficients())
    }

    /// The form scaled to coprime integer coefficients; generates the same
    /// ideal with smaller numbers downstream.
    pub fn from_linear_form_integral(f: &LinearForm) -> Self {
        Self::from_coefficients(&f.integral_coefficients())
    }

    fn from_coefficients(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Polynomial::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exp = vec![0; n];
            exp[i] = 1;
            p.add_term(exp, c);
        }
        p
    }

    pub fn product<'a>(nvars: usize, factors: impl IntoIterator<Item = &'a Polynomial>) -> Self {
        factors
            .into_iter()
            .fold(Polynomial::constant(nvars, Rational::one()), |acc, f| &acc * f)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded lexicographic order, leading term first.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, &Rational)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| grlex_desc(a.0, b.0));
        t
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exp: Exponent, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        if c.is_zero() {
            return p;
        }
        for (e, a) in &self.terms {
            p.terms.insert(e.clone(), a * c);
        }
        p
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            p.add_term(f, &(c * &Rational::from_int(e[i] as i64)));
        }
        p
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = &t * &x.pow(k);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Coefficient vector in the coordinates of `index`. The polynomial
    /// must be homogeneous of the index degree (or zero).
    pub fn to_vector(&self, index: &MonomialIndex) -> Result<Vec<Rational>> {
        if self.nvars != index.nvars() {
            return Err(Error::DimensionMismatch {
                expected: index.nvars(),
                found: self.nvars,
            });
        }
        let mut v = vec![Rational::zero(); index.len()];
        for (e, c) in &self.terms {
            let i = index.position(e).ok_or_else(|| {
                Error::Precondition(format!(
                    "polynomial is not homogeneous of degree {}",
                    index.degree()
                ))
            })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    /// Exact quotient by the linear form with the given coefficients, or
    /// `None` if the form does not divide `self`.
    pub fn div_linear(&self, coeffs: &[Rational]) -> Option<Polynomial> {
        assert_eq!(coeffs.len(), self.nvars, "linear form in the wrong ring");
        // in lexicographic order the leading variable of the form is the
        // first one with a nonzero coefficient
        let k = coeffs.iter().position(|c| !c.is_zero())?;
        let lead_inv = coeffs[k].recip()?;
        let mut rest = self.terms.clone();
        let mut q = Polynomial::zero(self.nvars);
        while let Some((e, c)) = rest.pop_last() {
            if e[k] == 0 {
                return None;
            }
            let c = &c * &lead_inv;
            let mut m = e;
            m[k] -= 1;
            for (j, a) in coeffs.iter().enumerate().skip(k + 1) {
                if a.is_zero() {
                    continue;
                }
                let mut t = m.clone();
                t[j] += 1;
                let delta = -&(a * &c);
                match rest.entry(t) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut slot) => {
                        let v = slot.get() + &delta;
                        if v.is_zero() {
                            slot.remove();
                        } else {
                            *slot.get_mut() = v;
                        }
                    }
                }
            }
            q.terms.insert(m, c);
        }
        Some(q)
    }

    pub fn from_vector(index: &MonomialIndex, v: &[Rational]) -> Polynomial {
        let mut p = Polynomial::zero(index.nvars());
        for (i, c) in v.iter().enumerate() {
            p.add_term(index.monomial(i).to_vec(), c);
        }
        p
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c);
        }
        p
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), &-c);
        }
        p
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut acc: HashMap<Exponent, Rational> = HashMap::new();
        for (e, a) in &self.terms {
            for (f, b) in &rhs.terms {
                let g: Exponent = e.iter().zip(f).map(|(x, y)| x + y).collect();
                let entry = acc.entry(g).or_default();
                *entry += &(a * b);
            }
        }
        Polynomial {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&Rational::from_int(-1))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    let name = var_name(i, self.nvars);
                    if p == 1 {
                        name
                    } else {
                        format!("{name}^{p}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// All monomials of one degree in graded lexicographic order, with `x0^d`
/// first.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    nvars: usize,
    degree: u32,
    monomials: Vec<Exponent>,
    lookup: HashMap<Exponent, usize>,
}

impl MonomialIndex {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let mut monomials = Vec::new();
        let mut current = vec![0; nvars];
        fill(&mut monomials, &mut current, 0, degree);
        let lookup = monomials
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        MonomialIndex {
            nvars,
            degree,
            monomials,
            lookup,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn position(&self, exp: &[u32]) -> Option<usize> {
        self.lookup.get(exp).copied()
    }
}

fn fill(out: &mut Vec<Exponent>, current: &mut Exponent, var: usize, remaining: u32) {
    if current.is_empty() {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if var + 1 == current.len() {
        current[var] = remaining;
        out.push(current.clone());
        current[var] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        current[var] = k;
        fill(out, current, var + 1, remaining - k);
    }
    current[var] = 0;
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn monomial_count(nvars: usize, d: u32) -> usize {
    if nvars == 0 {
        return usize::from(d == 0);
    }
    let mut c: usize = 1;
    let k = nvars - 1;
    for i in 0..k {
        c = c * (d as usize + 1 + i) / (i + 1);
    }
    c
}
