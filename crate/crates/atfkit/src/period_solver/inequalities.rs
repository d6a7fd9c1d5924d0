use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::PeriodError;
use crate::exact_core::{int, Rational};

/// Integer linear form over named variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearForm {
    pub vars: Vec<String>,
    pub coeffs: Vec<i64>,
}

impl LinearForm {
    pub fn new(vars: &[&str], coeffs: Vec<i64>) -> Self {
        LinearForm { vars: vars.iter().map(|s| s.to_string()).collect(), coeffs }
    }

    fn combine(&self, a: i64, other: &LinearForm, b: i64) -> LinearForm {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| a * x + b * y).collect();
        LinearForm { vars: self.vars.clone(), coeffs }
    }

    /// Divided by the gcd of its coefficients.
    pub fn primitive(&self) -> LinearForm {
        let g = self.coeffs.iter().fold(0i64, |g, c| g.gcd(c));
        if g == 0 {
            return self.clone();
        }
        LinearForm { vars: self.vars.clone(), coeffs: self.coeffs.iter().map(|c| c / g).collect() }
    }

    pub fn eval(&self, at: &[Rational]) -> Rational {
        self.coeffs.iter().zip(at).fold(Rational::zero(), |acc, (&c, x)| acc + int(c) * x)
    }

    /// Positive on the positive orthant without further assumptions.
    fn trivially_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0) && self.coeffs.iter().any(|&c| c > 0)
    }

    fn side(&self, sign: i64) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .zip(&self.vars)
            .filter(|(c, _)| c.signum() == sign)
            .map(|(c, v)| if c.abs() == 1 { v.clone() } else { format!("{}{}", c.abs(), v) })
            .collect();
        if terms.is_empty() { "0".into() } else { terms.join(" + ") }
    }

    /// "lhs > rhs", reading the form as positive.
    pub fn as_strict_inequality(&self) -> String {
        format!("{} > {}", self.side(1), self.side(-1))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, v) in self.coeffs.iter().zip(&self.vars) {
            if *c == 0 {
                continue;
            }
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            match (first, *c < 0) {
                (true, true) => write!(f, "-{mag}{v}")?,
                (true, false) => write!(f, "{mag}{v}")?,
                (false, true) => write!(f, " - {mag}{v}")?,
                (false, false) => write!(f, " + {mag}{v}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inequality {
    /// Positive form over (d1, d2).
    pub over_d: LinearForm,
    /// The same form after substituting the target periods.
    pub substituted: LinearForm,
    pub normalized: LinearForm,
    pub text: String,
    pub redundant: bool,
    /// Which period bound this expresses; None when redundant.
    pub bound: Option<Bound>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalitySet {
    pub n: usize,
    pub variables: Vec<String>,
    pub inequalities: Vec<Inequality>,
}

/// Substitution of (d1, d2) as forms over the target's periods.
fn substitution(n: usize) -> (Vec<&'static str>, LinearForm, LinearForm) {
    if n % 2 == 1 {
        let k = (n as i64 - 1) / 2;
        let v = vec!["a", "b"];
        (v.clone(), LinearForm::new(&v, vec![1, k + 1]), LinearForm::new(&v, vec![2, 1]))
    } else {
        let k = n as i64 / 2;
        let v = vec!["h", "mu"];
        (v.clone(), LinearForm::new(&v, vec![k + 1, -k]), LinearForm::new(&v, vec![2, 0]))
    }
}

/// The two positivity conditions on (d1, d2) and their form over the
/// periods of S²×S² (odd n) or X₁ (even n).
pub fn derive_inequalities(n: usize) -> Result<InequalitySet, PeriodError> {
    if n < 3 {
        return Err(PeriodError::BadSize { min: 3, got: n });
    }
    let ni = n as i64;
    let dv = ["d1", "d2"];
    let (vars, d1, d2) = substitution(n);
    let forms = [
        (LinearForm::new(&dv, vec![-4, ni + 2]), d2.combine(ni + 2, &d1, -4)),
        (LinearForm::new(&dv, vec![ni + 2, -(ni + 1)]), d1.combine(ni + 2, &d2, -(ni + 1))),
    ];
    let inequalities = forms
        .into_iter()
        .enumerate()
        .map(|(idx, (over_d, substituted))| {
            let normalized = substituted.primitive();
            let redundant = normalized.trivially_positive();
            let bound = match (redundant, n % 2, idx) {
                (true, _, _) => None,
                (false, 1, 0) => Some(Bound::Upper),
                (false, 1, _) => Some(Bound::Lower),
                (false, _, _) => Some(Bound::Upper),
            };
            Inequality { text: normalized.as_strict_inequality(), over_d, substituted, normalized, redundant, bound }
        })
        .collect();
    Ok(InequalitySet { n, variables: vars.iter().map(|s| s.to_string()).collect(), inequalities })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetPeriods {
    S2xS2 { a: Rational, b: Rational },
    X1 { h: Rational, mu: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsVerdict {
    pub n: usize,
    pub holds: bool,
    pub failing: Vec<Bound>,
    /// The bounds that were checked, as text.
    pub checked: Vec<String>,
}

/// Necessary conditions for a liminal L_{n,1} pinwheel in the target.
pub fn liminal_bounds(n: usize, target: &TargetPeriods) -> Result<BoundsVerdict, PeriodError> {
    let mismatch = || PeriodError::Precondition(format!("n = {n} needs {} periods", if n % 2 == 1 { "S2xS2 (a,b)" } else { "X1 (h,mu)" }));
    let (vals, positive) = match (target, n % 2) {
        (TargetPeriods::S2xS2 { a, b }, 1) => (vec![a.clone(), b.clone()], a.is_positive() && b.is_positive()),
        (TargetPeriods::X1 { h, mu }, 0) => (vec![h.clone(), mu.clone()], h.is_positive() && mu.is_positive()),
        _ => return Err(mismatch()),
    };
    if !positive {
        return Err(PeriodError::Precondition("periods must be positive".into()));
    }
    if n == 2 {
        // Lagrangian RP² in X₁ needs μ < h/2
        let holds = int(2) * &vals[1] < vals[0];
        return Ok(BoundsVerdict {
            n,
            holds,
            failing: if holds { vec![] } else { vec![Bound::Upper] },
            checked: vec!["h > 2mu".into()],
        });
    }
    let set = derive_inequalities(n)?;
    let mut failing = Vec::new();
    let mut checked = Vec::new();
    for ineq in set.inequalities.iter().filter(|i| !i.redundant) {
        checked.push(ineq.text.clone());
        if !ineq.normalized.eval(&vals).is_positive() {
            failing.push(ineq.bound.expect("non-redundant bounds are labelled"));
        }
    }
    failing.sort_by_key(|b| *b as u8);
    Ok(BoundsVerdict { n, holds: failing.is_empty(), failing, checked })
}
