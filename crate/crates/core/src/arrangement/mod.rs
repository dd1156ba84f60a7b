//! Central hyperplane arrangements, their flats and relation spaces.

mod form;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use form::{var_name, LinearForm};

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rational, SubspaceBasis};

/// An ordered list of distinct hyperplanes through the origin of
/// `K^ambient`, viewed in projective space of dimension `ambient - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ArrangementJson", into = "ArrangementJson")]
pub struct Arrangement {
    ambient: usize,
    forms: Vec<LinearForm>,
}

#[derive(Serialize, Deserialize)]
struct ArrangementJson {
    ambient: usize,
    forms: Vec<Vec<Rational>>,
}

impl TryFrom<ArrangementJson> for Arrangement {
    type Error = Error;
    fn try_from(j: ArrangementJson) -> Result<Self> {
        Arrangement::new(j.ambient, j.forms)
    }
}

impl From<Arrangement> for ArrangementJson {
    fn from(a: Arrangement) -> Self {
        ArrangementJson {
            ambient: a.ambient,
            forms: a.forms.into_iter().map(Vec::from).collect(),
        }
    }
}

/// A closed set of hyperplane indices together with its rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flat {
    pub rank: usize,
    pub indices: Vec<usize>,
}

impl Flat {
    /// Number of hyperplanes containing the flat.
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

impl Arrangement {
    pub fn new(ambient: usize, forms: Vec<Vec<Rational>>) -> Result<Self> {
        let mut out = Vec::with_capacity(forms.len());
        for (index, coeffs) in forms.into_iter().enumerate() {
            if coeffs.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: coeffs.len(),
                });
            }
            let f = LinearForm::new(coeffs).map_err(|_| Error::ZeroForm { index })?;
            out.push(f);
        }
        Arrangement::from_forms(ambient, out)
    }

    pub fn from_forms(ambient: usize, forms: Vec<LinearForm>) -> Result<Self> {
        if ambient < 2 {
            return Err(Error::Unsupported(format!(
                "ambient dimension {ambient}; need at least 2 variables"
            )));
        }
        if forms.is_empty() {
            return Err(Error::EmptyArrangement);
        }
        for (i, f) in forms.iter().enumerate() {
            if f.vars() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: f.vars(),
                });
            }
            if let Some(j) = forms[..i].iter().position(|g| g == f) {
                return Err(Error::DuplicateForm { first: j, second: i });
            }
        }
        Ok(Arrangement { ambient, forms })
    }

    /// Integer coefficient rows, for tests and fixed constructions.
    pub fn from_int_rows(ambient: usize, rows: &[&[i64]]) -> Result<Self> {
        Arrangement::new(
            ambient,
            rows.iter()
                .map(|r| r.iter().map(|&c| Rational::from_int(c)).collect())
                .collect(),
        )
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Number of hyperplanes.
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &LinearForm {
        &self.forms[i]
    }

    /// `ambient x n` matrix whose columns are the forms.
    pub fn coefficient_matrix(&self) -> Matrix {
        let rows = self
            .forms
            .iter()
            .map(|f| f.coefficients().to_vec())
            .collect();
        Matrix::from_rows(self.ambient, rows)
            .expect("forms have ambient length")
            .transpose()
    }

    pub fn rank(&self) -> usize {
        self.span_of(0..self.len()).dim()
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.ambient
    }

    fn span_of(&self, indices: impl IntoIterator<Item = usize>) -> SubspaceBasis {
        SubspaceBasis::span(
            self.ambient,
            indices
                .into_iter()
                .map(|i| self.forms[i].coefficients().to_vec()),
        )
        .expect("forms have ambient length")
    }

    /// All forms lying in the span of the given ones.
    pub fn closure(&self, indices: &[usize]) -> Flat {
        let span = self.span_of(indices.iter().copied());
        let closed = (0..self.len())
            .filter(|&i| {
                span.contains(self.forms[i].coefficients())
                    .expect("forms have ambient length")
            })
            .collect();
        Flat {
            rank: span.dim(),
            indices: closed,
        }
    }

    /// Flats of rank 1 through `k`, ordered by rank and then
    /// lexicographically by index set. Ranks above `rank(A)` do not occur.
    pub fn flats(&self, k: usize) -> Vec<Flat> {
        let mut out: Vec<Flat> = Vec::new();
        let mut level: BTreeSet<Vec<usize>> = (0..self.len()).map(|i| vec![i]).collect();
        let mut r = 1;
        while r <= k && !level.is_empty() {
            let mut next = BTreeSet::new();
            for indices in &level {
                if r < k {
                    let mut covered = vec![false; self.len()];
                    for &i in indices {
                        covered[i] = true;
                    }
                    for j in 0..self.len() {
                        if covered[j] {
                            continue;
                        }
                        let mut ext = indices.clone();
                        ext.push(j);
                        let closed = self.closure(&ext);
                        for &i in &closed.indices {
                            covered[i] = true;
                        }
                        next.insert(closed.indices);
                    }
                }
                out.push(Flat {
                    rank: r,
                    indices: indices.clone(),
                });
            }
            level = next;
            r += 1;
        }
        out
    }

    /// Flats of rank exactly `k`, with `L_k = L_rank` once `k` reaches the
    /// rank of the arrangement.
    pub fn flats_of_rank(&self, k: usize) -> Vec<Flat> {
        let k = k.min(self.rank());
        self.flats(k).into_iter().filter(|f| f.rank == k).collect()
    }

    /// Linear relations among the forms supported on `flat`, embedded in
    /// `K^n`.
    pub fn relation_space(&self, flat: &Flat) -> SubspaceBasis {
        let cols = flat.indices.len();
        let rows = (0..self.ambient)
            .map(|r| {
                flat.indices
                    .iter()
                    .map(|&i| self.forms[i].coefficients()[r].clone())
                    .collect()
            })
            .collect();
        let sub = Matrix::from_rows(cols, rows).expect("rows have flat length");
        let n = self.len();
        let kernel = sub.kernel_basis();
        let embedded = kernel.rows().iter().map(|v| {
            let mut w = vec![Rational::zero(); n];
            for (x, &i) in v.iter().zip(&flat.indices) {
                w[i] = x.clone();
            }
            w
        });
        SubspaceBasis::span(n, embedded).expect("embedded length n")
    }

    /// The matrix `N^[k]`: canonical relation bases of every flat in
    /// `L_{k-1}`, stacked in flat order.
    pub fn relation_matrix(&self, k: usize) -> Result<Matrix> {
        if k < 3 {
            return Err(Error::Precondition(format!(
                "relation matrix needs rank bound k >= 3, got {k}"
            )));
        }
        let mut rows = Vec::new();
        for flat in self.flats_of_rank(k - 1) {
            rows.extend(self.relation_space(&flat).vectors());
        }
        Matrix::from_rows(self.len(), rows)
    }

    /// The arrangement with hyperplane `i` removed.
    pub fn delete(&self, i: usize) -> Result<Arrangement> {
        let forms = self
            .forms
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, f)| f.clone())
            .collect();
        Arrangement::from_forms(self.ambient, forms)
    }

    /// The arrangement with one more hyperplane appended.
    pub fn with_form(&self, form: LinearForm) -> Result<Arrangement> {
        let mut forms = self.forms.clone();
        forms.push(form);
        Arrangement::from_forms(self.ambient, forms)
    }

    /// Whether deleting hyperplane `i` lowers the rank.
    pub fn is_separator(&self, i: usize) -> bool {
        let rest: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        self.span_of(rest).dim() < self.rank()
    }

    /// Line arrangements only: essential and not a near-pencil, i.e. no
    /// point lies on `n - 1` or more of the lines.
    pub fn is_irreducible_line_arrangement(&self) -> Result<bool> {
        if self.ambient != 3 {
            return Err(Error::Unsupported(
                "irreducibility is implemented for line arrangements only".into(),
            ));
        }
        if !self.is_essential() {
            return Ok(false);
        }
        let n = self.len();
        Ok(self
            .flats_of_rank(2)
            .iter()
            .all(|f| f.size() + 1 < n))
    }

    /// Common zero set of the forms in `flat`.
    pub fn flat_kernel(&self, flat: &Flat) -> SubspaceBasis {
        self.span_of(flat.indices.iter().copied()).annihilator()
    }

    /// True when the hyperplane `form` contains the flat.
    pub fn form_contains_flat(&self, form: &LinearForm, flat: &Flat) -> bool {
        self.span_of(flat.indices.iter().copied())
            .contains(form.coefficients())
            .expect("form has ambient length")
    }

    /// A hyperplane containing no flat of rank at most `k`. Candidates are
    /// `x0 + c x1 + ... + c^l xl` for `c = 1, 2, ...`; only flats of rank at
    /// most `l` are tested, since the rank `l + 1` flat lies in every
    /// hyperplane.
    pub fn general_position_form(&self, k: usize) -> LinearForm {
        let bound = k.min(self.ambient - 1);
        let flats = self.flats(bound);
        let spans: Vec<SubspaceBasis> = flats
            .iter()
            .map(|f| self.span_of(f.indices.iter().copied()))
            .collect();
        let mut c: i64 = 1;
        loop {
            let coeffs: Vec<Rational> = (0..self.ambient as u32)
                .map(|e| Rational::from_int(c).pow(e))
                .collect();
            let hit = spans
                .iter()
                .any(|s| s.contains(&coeffs).expect("candidate has ambient length"));
            if !hit {
                return LinearForm::new(coeffs).expect("leading coefficient is 1");
            }
            c += 1;
        }
    }
}
