use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{dot, primitive, Rational};

/// A nonzero linear form, scaled so its first nonzero coefficient is 1.
/// Scalar multiples therefore compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct LinearForm {
    coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        let lead = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or(Error::ZeroForm { index: 0 })?;
        let inv = lead.recip().expect("lead is nonzero");
        let coeffs = coeffs.iter().map(|c| c * &inv).collect();
        Ok(LinearForm { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        LinearForm::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        dot(&self.coeffs, point)
    }

    /// The same form scaled to coprime integer coefficients.
    pub fn integral_coefficients(&self) -> Vec<Rational> {
        primitive(&self.coeffs)
    }
}

impl TryFrom<Vec<Rational>> for LinearForm {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        LinearForm::new(v)
    }
}

impl From<LinearForm> for Vec<Rational> {
    fn from(f: LinearForm) -> Self {
        f.coeffs
    }
}

/// Variable names: `x, y, z, w` up to four variables, `x0, x1, ...` beyond.
pub fn var_name(i: usize, nvars: usize) -> String {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    if nvars <= NAMES.len() {
        NAMES[i].to_string()
    } else {
        format!("x{i}")
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.coeffs.len();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = var_name(i, n);
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}{name}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearForm({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_leading_coefficient() {
        let a = LinearForm::from_ints(&[0, -2, 4]).unwrap();
        let b = LinearForm::from_ints(&[0, 1, -2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "y - 2z");
    }

    #[test]
    fn zero_form_rejected() {
        assert_eq!(LinearForm::from_ints(&[0, 0]), Err(Error::ZeroForm { index: 0 }));
    }

    #[test]
    fn json_round_trip() {
        let f = LinearForm::from_ints(&[2, 1, 0]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"["1","1/2","0"]"#);
        let g: LinearForm = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
