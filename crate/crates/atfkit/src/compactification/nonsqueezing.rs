use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{compactification_periods, CompactError};
use crate::atf_diagram::geom::{on_open_segment, strictly_inside};
use crate::exact_core::poly::Poly;
use crate::exact_core::{fmt_rational, int, Point, Rational, Scalar};
use crate::period_solver::mu_closed_forms_generic;

/// Areas c₀..cₙ₋₂ of the chain created by blowing up Bₙ,₁(1), with the
/// polygonal chain that realizes them inside Δₙ,₁(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSizes {
    pub n: usize,
    pub epsilon: Rational,
    pub c: Vec<Rational>,
    /// Vertices of the chain, from the (0,1) edge to the (n², n−1) edge.
    pub chain: Vec<Point>,
}

impl BlowupSizes {
    pub fn start(&self) -> &Point {
        &self.chain[0]
    }

    pub fn end(&self) -> &Point {
        self.chain.last().expect("chain has n vertices")
    }

    pub fn to_json(&self) -> Value {
        let pt = |p: &Point| json!([fmt_rational(&p.x), fmt_rational(&p.y)]);
        json!({
            "n": self.n,
            "epsilon": fmt_rational(&self.epsilon),
            "c": self.c.iter().map(fmt_rational).collect::<Vec<_>>(),
            "chain": self.chain.iter().map(pt).collect::<Vec<_>>(),
        })
    }
}

fn direction(n: i64, j: i64) -> Point {
    Point::ints(j * (n + 1) + 1, j)
}

fn sizes<T: Scalar>(n: usize, eps: &T) -> Vec<T> {
    let ni = n as i64;
    let weight: i64 = (2..ni).map(|j| j * (ni + 1) + 1).sum();
    let mut c = vec![T::from_i64(4) - T::from_i64(weight) * eps.clone(), T::from_i64(ni - 2)];
    c.extend((2..=n - 2).map(|_| eps.clone()));
    c
}

/// Supremum of the ε for which the chain fits: c₀ > 0 and the start point
/// stays above the origin.
pub fn epsilon_limit(n: usize) -> Rational {
    let ni = n as i64;
    let weight: i64 = (2..ni).map(|j| j * (ni + 1) + 1).sum();
    let height: i64 = (2..ni).sum();
    let a = Rational::new(4.into(), weight.into());
    let b = Rational::new(1.into(), height.into());
    if a < b { a } else { b }
}

/// The chain sized as c₀ = 4 − Σⱼ₌₂ⁿ⁻¹ (j(n+1)+1)ε, c₁ = n−2, cᵢ = ε, laid
/// backwards from (1−ε)(n², n−1) and checked to sit inside Δₙ,₁(1).
pub fn blowup_sizes_for_unit_ball(n: usize, epsilon: &Rational) -> Result<BlowupSizes, CompactError> {
    if n < 3 {
        return Err(CompactError::InvalidSizes(format!("n must be at least 3, got {n}")));
    }
    if !epsilon.is_positive() {
        return Err(CompactError::InvalidSizes("ε must be positive".into()));
    }
    let ni = n as i64;
    let c = sizes(n, epsilon);
    if let Some(j) = c.iter().position(|x| !x.is_positive()) {
        return Err(CompactError::DoesNotFit(format!("c{j} = {} is not positive", fmt_rational(&c[j]))));
    }
    let end = Point::ints(ni * ni, ni - 1).scale(&(Rational::one() - epsilon));
    let mut chain = vec![end];
    for j in (0..=ni - 2).rev() {
        let prev = chain.last().unwrap().sub(&direction(ni, j).scale(&c[j as usize]));
        chain.push(prev);
    }
    chain.reverse();
    let ball = [Point::origin(), Point::ints(ni * ni, ni - 1), Point::ints(0, 1)];
    let (first, last) = (&chain[0], chain.last().unwrap());
    if !first.x.is_zero() || !on_open_segment(first, &ball[2], &ball[0]) {
        return Err(CompactError::DoesNotFit(format!("start ({}, {}) is off the vertical edge", fmt_rational(&first.x), fmt_rational(&first.y))));
    }
    if !on_open_segment(last, &ball[0], &ball[1]) {
        return Err(CompactError::DoesNotFit("end is off the slanted edge".into()));
    }
    if let Some(p) = chain[1..chain.len() - 1].iter().find(|p| !strictly_inside(&ball, p)) {
        return Err(CompactError::DoesNotFit(format!("vertex ({}, {}) leaves the ball", fmt_rational(&p.x), fmt_rational(&p.y))));
    }
    Ok(BlowupSizes { n, epsilon: epsilon.clone(), c, chain })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonsqueezingMu {
    pub n: usize,
    pub alpha: Rational,
    /// The β actually used for the compactification.
    pub beta: Rational,
    pub epsilon: Rational,
    pub d1: Rational,
    pub d2: Rational,
    pub sizes: BlowupSizes,
    pub mu_n: Rational,
}

impl NonsqueezingMu {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "alpha": fmt_rational(&self.alpha),
            "beta": fmt_rational(&self.beta),
            "epsilon": fmt_rational(&self.epsilon),
            "d1": fmt_rational(&self.d1),
            "d2": fmt_rational(&self.d2),
            "c": self.sizes.c.iter().map(fmt_rational).collect::<Vec<_>>(),
            "mu_n": fmt_rational(&self.mu_n),
        })
    }
}

/// Area of the exceptional class Eₙ after blowing up Bₙ,₁(1) inside
/// Xₙ,₁(α, β). β is raised to nα+1 when smaller.
pub fn nonsqueezing_mu(n: usize, alpha: &Rational, beta: Option<&Rational>, epsilon: &Rational) -> Result<NonsqueezingMu, CompactError> {
    let ni = n as i64;
    let floor = int(ni) * alpha + int(1);
    let beta = match beta {
        Some(b) if *b > floor => b.clone(),
        _ => floor,
    };
    let sizes = blowup_sizes_for_unit_ball(n, epsilon)?;
    let comp = compactification_periods(n, alpha, &beta)?;
    // W₁ = Σ₊ and W₂ = Σ₊ + Σ₋
    let d1 = comp.areas[0].clone();
    let d2 = &comp.areas[0] + &comp.areas[1];
    if d1 != int(ni + 1) * &beta + alpha || d2 != int(ni + 2) * &beta - int(ni - 2) * alpha {
        return Err(CompactError::Internal("boundary areas disagree with the closed forms".into()));
    }
    let (_, mu_n) = mu_closed_forms_generic(n, &d1, &d2, &sizes.c);
    Ok(NonsqueezingMu { n, alpha: alpha.clone(), beta, epsilon: epsilon.clone(), d1, d2, sizes, mu_n })
}

/// μₙ as a polynomial in (α, β, ε) = (x0, x1, x2).
pub fn nonsqueezing_mu_symbolic(n: usize) -> Poly {
    let ni = n as i64;
    let (a, b, e) = (Poly::var(0), Poly::var(1), Poly::var(2));
    let k = Poly::from_i64;
    let d1 = k(ni + 1) * b.clone() + a.clone();
    let d2 = k(ni + 2) * b - k(ni - 2) * a;
    mu_closed_forms_generic(n, &d1, &d2, &sizes(n, &e)).1
}

/// Bₙ,₁(1) embeds into Bₙ,₁(α, ∞) exactly when α ≥ 1.
pub fn nonsqueezing_verdict(alpha: &Rational) -> bool {
    *alpha >= Rational::one()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonsqueezingReport {
    pub alpha: Rational,
    pub possible: bool,
    /// The ε → 0 limit of μₙ, namely α − 1.
    pub mu_limit: Rational,
    pub witness: NonsqueezingMu,
}

impl NonsqueezingReport {
    pub fn to_json(&self) -> Value {
        json!({
            "theorem": "nonsqueezing",
            "alpha": fmt_rational(&self.alpha),
            "embedding_possible": self.possible,
            "reason": if self.possible { "inclusion" } else { "mu_n < 0" },
            "mu_limit": fmt_rational(&self.mu_limit),
            "witness": self.witness.to_json(),
        })
    }
}

/// Evaluates μₙ at a concrete ε. Without one, picks half the admissible
/// range, shrunk below 1 − α when α < 1 so that μₙ comes out negative.
pub fn nonsqueezing_certificate(n: usize, alpha: &Rational, beta: Option<&Rational>, epsilon: Option<&Rational>) -> Result<NonsqueezingReport, CompactError> {
    if !alpha.is_positive() {
        return Err(CompactError::InvalidSizes("α must be positive".into()));
    }
    if n < 3 {
        return Err(CompactError::InvalidSizes(format!("n must be at least 3, got {n}")));
    }
    let eps = match epsilon {
        Some(e) => e.clone(),
        None => {
            let mut e = epsilon_limit(n) / int(2);
            let gap = (Rational::one() - alpha) / int(2);
            if gap.is_positive() && gap < e {
                e = gap;
            }
            e
        }
    };
    let witness = nonsqueezing_mu(n, alpha, beta, &eps)?;
    let possible = nonsqueezing_verdict(alpha);
    if !possible && !witness.mu_n.is_negative() {
        return Err(CompactError::InvalidSizes(format!("ε = {} is too large to exhibit μₙ < 0", fmt_rational(&eps))));
    }
    Ok(NonsqueezingReport { alpha: alpha.clone(), possible, mu_limit: alpha - int(1), witness })
}
