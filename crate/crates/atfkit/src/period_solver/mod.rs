//! Periods of the blown-up surface X_n: conversion between the areas of the
//! configuration {S_i, D_j} and the standard periods (h, μ₁..μₙ).

mod appendix;
mod inequalities;
mod rp2;

pub use appendix::{replay_reduction, ReductionReplay};
pub use inequalities::{derive_inequalities, liminal_bounds, Bound, BoundsVerdict, Inequality, InequalitySet, LinearForm, TargetPeriods};
pub use rp2::{rp2_blowup, rp2_formulas, Rp2Blowup};

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_core::linalg::{det, solve, to_q};
use crate::exact_core::{int, serde_rat, Rational, Scalar};
use crate::homology::{HomologyClass, IntersectionSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodError {
    #[error("n must be at least {min}, got {got}")]
    BadSize { min: usize, got: usize },
    #[error("expected {expected} chain areas, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: singular system")]
    Singular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodAssignment {
    #[serde(with = "serde_rat")]
    pub h: Rational,
    #[serde(serialize_with = "ser_rats")]
    pub mu: Vec<Rational>,
}

impl PeriodAssignment {
    pub fn all_positive(&self) -> bool {
        self.h.is_positive() && self.mu.iter().all(Signed::is_positive)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigAreas {
    #[serde(with = "serde_rat")]
    pub d1: Rational,
    #[serde(with = "serde_rat")]
    pub d2: Rational,
    /// c₀..c_{n-2}
    #[serde(serialize_with = "ser_rats")]
    pub c: Vec<Rational>,
}

pub(crate) fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(|r| r.to_string()).collect();
    serde::Serialize::serialize(&strs, s)
}

fn check_n(n: usize) -> Result<(), PeriodError> {
    if n < 3 {
        return Err(PeriodError::BadSize { min: 3, got: n });
    }
    Ok(())
}

fn class(n: usize, h: i64, es: &[(usize, i64)]) -> HomologyClass {
    let mut coeffs = vec![0; n + 1];
    coeffs[0] = h;
    for &(i, e) in es {
        coeffs[i] += e;
    }
    HomologyClass::new(IntersectionSpace::Blowup(n), coeffs)
}

/// The chain S₀..S_{n-2} in X_n obtained by blowing up a liminal pinwheel.
pub fn chain_classes(n: usize) -> Result<Vec<HomologyClass>, PeriodError> {
    check_n(n)?;
    let mut s0 = vec![(1, 3)];
    s0.extend((2..=n - 2).map(|i| (i, -1)));
    let mut out = vec![class(n, -2, &s0)];
    for j in 1..=n - 3 {
        out.push(class(n, 0, &[(n - 1 - j, 1), (n - j, -1)]));
    }
    out.push(class(n, 1, &[(1, -1), (2, -1), (n, -1)]));
    Ok(out)
}

/// D₁ = nH−(n−1)E₁−E₂−⋯−E_{n−1} and D₂ = 3H−2E₁−E_n.
pub fn d_classes(n: usize) -> Result<(HomologyClass, HomologyClass), PeriodError> {
    check_n(n)?;
    let mut d1 = vec![(1, -(n as i64 - 1))];
    d1.extend((2..=n - 1).map(|i| (i, -1)));
    Ok((class(n, n as i64, &d1), class(n, 3, &[(1, -2), (n, -1)])))
}

/// Rows (c₀..c_{n−2}, d₁, d₂) in terms of (h, μ₁..μₙ).
pub fn basis_matrix(n: usize) -> Result<Vec<Vec<i64>>, PeriodError> {
    let mut rows: Vec<Vec<i64>> = chain_classes(n)?.into_iter().map(|c| c.coeffs).collect();
    let (d1, d2) = d_classes(n)?;
    rows.push(d1.coeffs);
    rows.push(d2.coeffs);
    Ok(rows)
}

pub fn basis_determinant(n: usize) -> Result<Rational, PeriodError> {
    Ok(det(&to_q(&basis_matrix(n)?)))
}

/// Areas of the configuration classes for the given periods.
pub fn apply_basis(n: usize, p: &PeriodAssignment) -> Result<ConfigAreas, PeriodError> {
    if p.mu.len() != n {
        return Err(PeriodError::LengthMismatch { expected: n, got: p.mu.len() });
    }
    let m = basis_matrix(n)?;
    let mut x = vec![p.h.clone()];
    x.extend(p.mu.iter().cloned());
    let vals: Vec<Rational> = m
        .iter()
        .map(|row| row.iter().zip(&x).fold(Rational::zero(), |acc, (&a, v)| acc + int(a) * v))
        .collect();
    Ok(ConfigAreas { d1: vals[n - 1].clone(), d2: vals[n].clone(), c: vals[..n - 1].to_vec() })
}

fn check_areas(n: usize, a: &ConfigAreas) -> Result<(), PeriodError> {
    check_n(n)?;
    if a.c.len() != n - 1 {
        return Err(PeriodError::LengthMismatch { expected: n - 1, got: a.c.len() });
    }
    Ok(())
}

pub fn solve_periods(n: usize, a: &ConfigAreas) -> Result<PeriodAssignment, PeriodError> {
    check_areas(n, a)?;
    let m = to_q(&basis_matrix(n)?);
    let mut rhs = a.c.clone();
    rhs.push(a.d1.clone());
    rhs.push(a.d2.clone());
    let x = solve(&m, &rhs).ok_or(PeriodError::Singular)?;
    Ok(PeriodAssignment { h: x[0].clone(), mu: x[1..].to_vec() })
}

/// (μ_{n−1}, μ_n) written out in closed form; generic so it can be evaluated
/// on polynomials as well as numbers.
pub fn mu_closed_forms_generic<T: Scalar>(n: usize, d1: &T, d2: &T, c: &[T]) -> (T, T) {
    let ni = n as i64;
    let k = |x: i64| T::from_i64(x);
    let inv = Rational::new(1.into(), (ni * ni).into());
    let mut s_n = T::zero_value();
    for (i, ci) in c.iter().enumerate() {
        s_n = s_n + k(1 + i as i64 * (ni + 1)) * ci.clone();
    }
    let mu_n = (k(ni + 2) * d1.clone() - k(ni + 1) * d2.clone() - s_n).scale(&inv);
    let mut inner = k(ni - 2) * c[0].clone();
    let mut tail = T::zero_value();
    for (i, ci) in c.iter().enumerate().skip(1) {
        tail = tail + k(ni - (i as i64 + 1)) * ci.clone();
    }
    inner = inner + k(ni + 2) * tail;
    let mu_n1 = (k(ni + 2) * d2.clone() - k(4) * d1.clone() - inner).scale(&inv);
    (mu_n1, mu_n)
}

pub fn mu_closed_forms(n: usize, a: &ConfigAreas) -> Result<(Rational, Rational), PeriodError> {
    check_areas(n, a)?;
    Ok(mu_closed_forms_generic(n, &a.d1, &a.d2, &a.c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancies {
    #[serde(serialize_with = "ser_rats")]
    pub d: Vec<Rational>,
    #[serde(with = "serde_rat")]
    pub total: Rational,
}

/// Gram matrix of the chain: S₀² = −(n+2), Sᵢ² = −2, neighbours meet once.
pub fn chain_gram(n: usize) -> Vec<Vec<i64>> {
    let m = n - 1;
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| match (i, j) {
                    (0, 0) => -(n as i64 + 2),
                    _ if i == j => -2,
                    _ if i.abs_diff(j) == 1 => 1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

/// Solves Gram·d = (c₁(S₀), …, c₁(S_{n−2})) = (−n, 0, …, 0) and returns d with
/// the discrepancy Σ dⱼcⱼ.
pub fn discrepancies(n: usize, c: &[Rational]) -> Result<Discrepancies, PeriodError> {
    if n < 2 {
        return Err(PeriodError::BadSize { min: 2, got: n });
    }
    if c.len() != n - 1 {
        return Err(PeriodError::LengthMismatch { expected: n - 1, got: c.len() });
    }
    if !c.iter().all(Signed::is_positive) {
        return Err(PeriodError::Precondition("chain areas must be positive".into()));
    }
    let g = to_q(&chain_gram(n));
    let mut rhs = vec![Rational::zero(); n - 1];
    rhs[0] = int(-(n as i64));
    let d = solve(&g, &rhs).ok_or(PeriodError::Singular)?;
    let total = d.iter().zip(c).fold(Rational::zero(), |acc, (x, y)| acc + x * y);
    Ok(Discrepancies { d, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::{rat, Poly};
    use crate::homology::{c1, pair};

    fn areas(d1: Rational, d2: Rational, c: Vec<Rational>) -> ConfigAreas {
        ConfigAreas { d1, d2, c }
    }

    #[test]
    fn n3_rows() {
        assert_eq!(
            basis_matrix(3).unwrap(),
            vec![vec![-2, 3, 0, 0], vec![1, -1, -1, -1], vec![3, -2, -1, 0], vec![3, -2, 0, -1]]
        );
        for n in 3..=25 {
            assert!(!basis_determinant(n).unwrap().is_zero(), "n={n}");
            assert_eq!(basis_matrix(n).unwrap()[0][0], -2);
        }
        assert!(basis_matrix(2).is_err());
    }

    #[test]
    fn chain_is_a_linear_chain() {
        for n in 3..=12 {
            let s = chain_classes(n).unwrap();
            let g = chain_gram(n);
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    assert_eq!(pair(&s[i], &s[j]).unwrap(), g[i][j], "n={n} ({i},{j})");
                }
            }
            assert_eq!(c1(&s[0]), -(n as i64));
            assert!(s[1..].iter().all(|x| c1(x) == 0));
            let (d1, d2) = d_classes(n).unwrap();
            assert_eq!(d1.square(), n as i64 + 1);
            assert_eq!(d2.square(), 4);
        }
    }

    #[test]
    fn solve_example() {
        let a = areas(int(15), int(15), vec![int(1), int(1)]);
        let p = solve_periods(3, &a).unwrap();
        assert_eq!(p, PeriodAssignment { h: int(10), mu: vec![int(7), int(1), int(1)] });
        assert_eq!(apply_basis(3, &p).unwrap(), a);
        let z = solve_periods(5, &areas(int(0), int(0), vec![int(0); 4])).unwrap();
        assert!(z.h.is_zero() && z.mu.iter().all(Zero::is_zero));
        assert!(matches!(solve_periods(3, &areas(int(1), int(1), vec![int(1)])), Err(PeriodError::LengthMismatch { .. })));
    }

    #[test]
    fn closed_form_examples() {
        let a = areas(int(15), int(15), vec![int(1), int(1)]);
        assert_eq!(mu_closed_forms(3, &a).unwrap(), (int(1), int(1)));
        let ns = areas(int(22), int(23), vec![rat(31, 10), int(1)]);
        assert_eq!(mu_closed_forms(3, &ns).unwrap().1, rat(11, 10));
        let z = areas(int(0), int(0), vec![int(0), int(0)]);
        assert_eq!(mu_closed_forms(3, &z).unwrap(), (int(0), int(0)));
    }

    #[test]
    fn closed_forms_match_solver_symbolically() {
        // the closed form is linear, so agreement on a basis of inputs is agreement everywhere
        for n in 3..=25 {
            let m = n + 1;
            for k in 0..m {
                let mut v = vec![int(0); m];
                v[k] = int(1);
                let a = areas(v[0].clone(), v[1].clone(), v[2..].to_vec());
                let p = solve_periods(n, &a).unwrap();
                let (x, y) = mu_closed_forms(n, &a).unwrap();
                assert_eq!((x, y), (p.mu[n - 2].clone(), p.mu[n - 1].clone()), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn closed_forms_on_polynomials() {
        let n = 4;
        let d1 = Poly::var(0);
        let d2 = Poly::var(1);
        let c: Vec<Poly> = (2..5).map(Poly::var).collect();
        let (x, _) = mu_closed_forms_generic(n, &d1, &d2, &c);
        assert_eq!(x.coefficient(&[0, 1]), rat(6, 16));
        assert_eq!(x.coefficient(&[1]), rat(-4, 16));
    }

    #[test]
    fn discrepancy_examples() {
        let r = discrepancies(3, &[int(3), int(6)]).unwrap();
        assert_eq!(r.d, vec![rat(2, 3), rat(1, 3)]);
        assert_eq!(r.total, int(4));
        let r2 = discrepancies(3, &[int(6), int(12)]).unwrap();
        assert_eq!(r2.total, int(8));
        assert!(discrepancies(3, &[int(0), int(1)]).is_err());
        for n in 2..=30 {
            let r = discrepancies(n, &vec![int(1); n - 1]).unwrap();
            assert!(r.d.iter().all(|x| !x.is_negative()));
            assert!(r.d.iter().any(Signed::is_positive));
            assert!(r.total.is_positive());
        }
    }
}
