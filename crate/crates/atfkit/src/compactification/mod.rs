//! The rational homology balls Bₙ,₁ as almost toric domains, their closed
//! compactifications, and the size computations built on them.

mod khodorovskiy;
mod nonsqueezing;

pub use khodorovskiy::{
    compactify_neighborhood, khodorovskiy_verdict, neighborhood_periods, obstruction_polynomial, CompactifiedNeighborhood,
    KhodorovskiyReport, NeighborhoodSpec,
};
pub use nonsqueezing::{
    blowup_sizes_for_unit_ball, epsilon_limit, nonsqueezing_certificate, nonsqueezing_mu, nonsqueezing_mu_symbolic,
    nonsqueezing_verdict, BlowupSizes, NonsqueezingMu, NonsqueezingReport,
};

use num_integer::Integer;
use num_traits::{One, Signed};
use serde_json::{json, Value};
use thiserror::Error;

use crate::atf_diagram::{affine_area, nodal_slide, slide_range, symplectic_cut, BaseDiagram, DiagramError, Node};
use crate::exact_core::{fmt_rational, int, rat, LatticeVector, Point, Rational};
use crate::homology::{pair, HomologyClass, IntersectionSpace};
use crate::period_solver::{PeriodError, TargetPeriods};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompactError {
    #[error("invalid sizes: {0}")]
    InvalidSizes(String),
    #[error("Σ₋ degenerates: need β > (n−1)α")]
    SigmaMinusDegenerates,
    #[error("unsupported neighborhood shape: {0}")]
    UnsupportedNeighborhood(String),
    #[error("chain does not fit: {0}")]
    DoesNotFit(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// Sizes of a rational homology ellipsoid Bₙ,₁(α, β); `beta = None` is the
/// cylinder Bₙ,₁(α, ∞).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhbSpec {
    pub n: usize,
    pub alpha: Rational,
    pub beta: Option<Rational>,
}

impl RhbSpec {
    pub fn new(n: usize, alpha: Rational, beta: Option<Rational>) -> Result<RhbSpec, CompactError> {
        if n < 2 {
            return Err(CompactError::InvalidSizes(format!("n must be at least 2, got {n}")));
        }
        if !alpha.is_positive() || beta.as_ref().is_some_and(|b| !b.is_positive()) {
            return Err(CompactError::InvalidSizes("α and β must be positive".into()));
        }
        Ok(RhbSpec { n, alpha, beta })
    }

    /// Whether Γₙ,₁(α, β) exists for these sizes.
    pub fn compactifiable(&self) -> bool {
        self.beta.as_ref().is_some_and(|b| *b > int(self.n as i64 - 1) * &self.alpha)
    }
}

/// Default node parameter, as a fraction of the admissible range of the cut.
pub fn default_node_fraction() -> Rational {
    rat(1, 1000)
}

fn p2(x: i64, y: i64) -> Point {
    Point::ints(x, y)
}

/// Puts a node on the eigenline of `v` from `anchor`, at `frac` of the
/// admissible range. `probe` is any parameter known to lie inside.
fn place_node(mut d: BaseDiagram, anchor: Point, v: LatticeVector, probe: &Rational, frac: &Rational) -> Result<BaseDiagram, CompactError> {
    if !frac.is_positive() || *frac >= Rational::one() {
        return Err(CompactError::InvalidSizes("node fraction must lie in (0, 1)".into()));
    }
    let dir = v.to_point();
    d.nodes.push(Node { position: anchor.add(&dir.scale(probe)), eigenvector: v, anchor: anchor.clone() });
    let i = d.nodes.len() - 1;
    let range = slide_range(&d, i)?;
    let at = anchor.add(&dir.scale(&(range * frac)));
    if at == d.nodes[i].position {
        return Ok(d);
    }
    Ok(nodal_slide(&d, i, &at)?)
}

fn delta_diagram(p: i64, q: i64, alpha: &Rational, beta: Option<&Rational>, frac: &Rational) -> Result<BaseDiagram, CompactError> {
    if p < 2 || q < 1 || q >= p || p.gcd(&q) != 1 {
        return Err(CompactError::InvalidSizes(format!("need coprime 1 ≤ q < p, got ({p},{q})")));
    }
    if !alpha.is_positive() || beta.is_some_and(|b| !b.is_positive()) {
        return Err(CompactError::InvalidSizes("α and β must be positive".into()));
    }
    let edge = p2(p * p, p * q - 1).scale(alpha);
    let (vertices, truncation, probe) = match beta {
        Some(b) => {
            // the third side is open; the node's ray leaves through it at pαβ/(α+β)
            let tmax = int(p) * alpha * b / (alpha + b);
            (vec![Point::origin(), edge, Point::new(int(0), b.clone())], vec![1], tmax / int(2))
        }
        None => {
            // the strip above α(p², pq−1), cut off at an artificial height
            let top = &edge.y + alpha * int(p * p);
            let v = vec![Point::origin(), edge.clone(), Point::new(edge.x.clone(), top.clone()), Point::new(int(0), top)];
            (v, vec![1, 2], alpha / int(2))
        }
    };
    let d = BaseDiagram { name: None, vertices, nodes: Vec::new(), truncation };
    place_node(d, Point::origin(), LatticeVector::new(p, q), &probe, frac)
}

/// The wedge Δ_{p,q} with unit sides: edges (0,1) and (p², pq−1) from the
/// origin, the node on the (p,q) eigenline, the far side flagged open.
pub fn build_delta(p: i64, q: i64) -> Result<BaseDiagram, CompactError> {
    Ok(delta_diagram(p, q, &int(1), Some(&int(1)), &default_node_fraction())?.named(&format!("Delta_{p},{q}")))
}

/// Δₙ,₁(α, β): the half-open triangle spanned by α(n², n−1) and β(0,1), or
/// for `beta = None` the vertical strip above α(n², n−1).
pub fn build_delta_sized(n: usize, alpha: &Rational, beta: Option<&Rational>) -> Result<BaseDiagram, CompactError> {
    let name = match beta {
        Some(b) => format!("Delta_{n},1({},{})", fmt_rational(alpha), fmt_rational(b)),
        None => format!("Delta_{n},1({},inf)", fmt_rational(alpha)),
    };
    Ok(delta_diagram(n as i64, 1, alpha, beta, &default_node_fraction())?.named(&name))
}

/// Γₙ,₁(α, β) with the node at the default fraction of its range.
pub fn build_gamma(n: usize, alpha: &Rational, beta: &Rational) -> Result<BaseDiagram, CompactError> {
    build_gamma_with(n, alpha, beta, &default_node_fraction())
}

/// Γₙ,₁(α, β), obtained from a large Δₙ,₁ by the horizontal cut at height β
/// and the cut along (n+1, 1) through α(n², n−1).
pub fn build_gamma_with(n: usize, alpha: &Rational, beta: &Rational, node_fraction: &Rational) -> Result<BaseDiagram, CompactError> {
    let spec = RhbSpec::new(n, alpha.clone(), Some(beta.clone()))?;
    if !spec.compactifiable() {
        return Err(CompactError::SigmaMinusDegenerates);
    }
    let ni = n as i64;
    let big = beta * int(2);
    let start = delta_diagram(ni, 1, &big, Some(&big), &rat(1, 2))?;
    // move the node below the first cut before cutting
    let low = Point::new(int(ni), int(1)).scale(&(beta / int(2)));
    let start = nodal_slide(&start, 0, &low)?;
    let top = symplectic_cut(&start, &LatticeVector::new(0, 1), beta)?;
    let mut g = symplectic_cut(&top, &LatticeVector::new(1, -(ni + 1)), alpha)?;
    if !g.truncation.is_empty() {
        return Err(CompactError::Internal("compactification kept an open edge".into()));
    }
    let node = g.nodes.pop().ok_or_else(|| CompactError::Internal("node lost in the cuts".into()))?;
    let g = place_node(g, node.anchor, node.eigenvector, &(beta / int(2)), node_fraction)?;
    Ok(g.named(&format!("Gamma_{n},1({},{})", fmt_rational(alpha), fmt_rational(beta))))
}

/// Affine length of the edge of `d` parallel to `dir`.
fn edge_along(d: &BaseDiagram, dir: &LatticeVector) -> Option<Rational> {
    (0..d.len()).find(|&i| {
        let e = d.edge_direction(i);
        e == *dir || e == dir.neg()
    })
    .map(|i| d.edge_length(i))
}

/// The compactification Xₙ,₁(α, β) as S²×S² (odd n) or X₁ (even n), with
/// its periods and the classes of the boundary spheres Σ₊, Σ₋, Σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactifiedPeriods {
    pub n: usize,
    pub alpha: Rational,
    pub beta: Rational,
    pub periods: TargetPeriods,
    pub sigma_plus: HomologyClass,
    pub sigma_minus: HomologyClass,
    pub sigma: HomologyClass,
    /// Areas of Σ₊, Σ₋ and Σ read off Γₙ,₁.
    pub areas: [Rational; 3],
    pub volume: Rational,
}

impl CompactifiedPeriods {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "alpha": fmt_rational(&self.alpha),
            "beta": fmt_rational(&self.beta),
            "periods": periods_json(&self.periods),
            "classes": {
                "sigma_plus": self.sigma_plus.to_string(),
                "sigma_minus": self.sigma_minus.to_string(),
                "sigma": self.sigma.to_string(),
            },
            "areas": {
                "sigma_plus": fmt_rational(&self.areas[0]),
                "sigma_minus": fmt_rational(&self.areas[1]),
                "sigma": fmt_rational(&self.areas[2]),
            },
            "volume": fmt_rational(&self.volume),
        })
    }
}

pub fn periods_json(t: &TargetPeriods) -> Value {
    match t {
        TargetPeriods::S2xS2 { a, b } => json!({ "surface": "S2xS2", "a": fmt_rational(a), "b": fmt_rational(b) }),
        TargetPeriods::X1 { h, mu } => json!({ "surface": "X1", "h": fmt_rational(h), "mu": fmt_rational(mu) }),
    }
}

/// Area of a class under the given periods.
pub fn area_of(t: &TargetPeriods, x: &HomologyClass) -> Rational {
    match t {
        TargetPeriods::S2xS2 { a, b } => int(x.coeffs[0]) * a + int(x.coeffs[1]) * b,
        TargetPeriods::X1 { h, mu } => int(x.coeffs[0]) * h + int(x.coeffs[1]) * mu,
    }
}

/// Total volume: ab for S²×S², (h² − μ²)/2 for X₁.
pub fn volume_of(t: &TargetPeriods) -> Rational {
    match t {
        TargetPeriods::S2xS2 { a, b } => a * b,
        TargetPeriods::X1 { h, mu } => (h * h - mu * mu) / int(2),
    }
}

/// Classes of Σ₊, Σ₋, Σ in the standard basis.
pub fn boundary_classes(n: usize) -> [HomologyClass; 3] {
    let k = n as i64 / 2;
    if n % 2 == 1 {
        let s = IntersectionSpace::S2xS2;
        [HomologyClass::new(s, vec![1, k + 1]), HomologyClass::new(s, vec![1, -k]), HomologyClass::new(s, vec![0, 1])]
    } else {
        let s = IntersectionSpace::Blowup(1);
        [HomologyClass::new(s, vec![k + 1, -k]), HomologyClass::new(s, vec![1 - k, k]), HomologyClass::new(s, vec![1, -1])]
    }
}

/// The periods of Xₙ,₁(α, β) as linear expressions in α and β, with no
/// check that the diagram exists.
pub fn closed_form_periods(n: usize, alpha: &Rational, beta: &Rational) -> TargetPeriods {
    let k = n as i64 / 2;
    if n % 2 == 1 {
        TargetPeriods::S2xS2 { a: int(k + 1) * beta - int(k) * alpha, b: beta + alpha }
    } else {
        TargetPeriods::X1 { h: int(k + 1) * beta - int(k - 1) * alpha, mu: int(k) * (beta - alpha) }
    }
}

/// Periods of Xₙ,₁(α, β), computed from the areas of Σ₊ and Σ in Γₙ,₁ and
/// cross-checked against Σ₋ and the volume.
pub fn compactification_periods(n: usize, alpha: &Rational, beta: &Rational) -> Result<CompactifiedPeriods, CompactError> {
    let g = build_gamma(n, alpha, beta)?;
    periods_of_gamma(n, alpha, beta, &g)
}

pub fn periods_of_gamma(n: usize, alpha: &Rational, beta: &Rational, g: &BaseDiagram) -> Result<CompactifiedPeriods, CompactError> {
    let ni = n as i64;
    let missing = |what: &str| CompactError::Internal(format!("no {what} edge in the diagram"));
    let plus = edge_along(g, &LatticeVector::new(1, 0)).ok_or_else(|| missing("Σ₊"))?;
    let minus = edge_along(g, &LatticeVector::new(ni + 1, 1)).ok_or_else(|| missing("Σ₋"))?;
    let sigma = edge_along(g, &LatticeVector::new(0, 1)).ok_or_else(|| missing("vertical"))?
        + edge_along(g, &LatticeVector::new(ni * ni, ni - 1)).ok_or_else(|| missing("slanted"))?;
    let k = int(ni / 2);
    let periods = if n % 2 == 1 {
        // Σ₊ = A + (k+1)B, Σ = B
        let b = sigma.clone();
        TargetPeriods::S2xS2 { a: &plus - (&k + int(1)) * &b, b }
    } else {
        // Σ₊ = (k+1)H − kE, Σ = H − E
        let h = &plus - &k * &sigma;
        TargetPeriods::X1 { mu: &h - &sigma, h }
    };
    let [sp, sm, s] = boundary_classes(n);
    for (c, want, name) in [(&sp, &plus, "Σ₊"), (&sm, &minus, "Σ₋"), (&s, &sigma, "Σ")] {
        if area_of(&periods, c) != *want {
            return Err(CompactError::Internal(format!("area of {name} disagrees with the diagram")));
        }
    }
    let pr = |x: &HomologyClass, y: &HomologyClass| pair(x, y).expect("same space");
    if pr(&sp, &sp) != ni + 1 || pr(&sm, &sm) != 1 - ni || pr(&s, &s) != 0 {
        return Err(CompactError::Internal("boundary self-intersections".into()));
    }
    let volume = affine_area(g)?;
    if volume_of(&periods) != volume {
        return Err(CompactError::Internal("volume of the periods disagrees with the diagram".into()));
    }
    Ok(CompactifiedPeriods {
        n,
        alpha: alpha.clone(),
        beta: beta.clone(),
        periods,
        sigma_plus: sp,
        sigma_minus: sm,
        sigma: s,
        areas: [plus, minus, sigma],
        volume,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atf_diagram::{corner_statuses, validate, CornerKind};
    use num_traits::Zero;

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| p2(x, y)).collect()
    }

    #[test]
    fn deltas() {
        let d = build_delta(3, 1).unwrap();
        assert_eq!(d.vertices, pts(&[(0, 0), (9, 2), (0, 1)]));
        assert_eq!(d.truncation, vec![1]);
        assert_eq!(d.edge_direction(0), LatticeVector::new(9, 2));
        assert_eq!(d.edge_length(0), int(1));
        assert_eq!(d.edge_length(2), int(1));
        assert!(validate(&d).is_valid(), "{:?}", validate(&d).violations);
        assert_eq!(corner_statuses(&d)[0].kind, CornerKind::Nodal);
        let rp2 = build_delta(2, 1).unwrap();
        assert_eq!(rp2.edge_direction(0), LatticeVector::new(4, 1));
        assert!(validate(&rp2).is_valid());
        let d52 = build_delta(5, 2).unwrap();
        assert_eq!(d52.edge_direction(0), LatticeVector::new(25, 9));
        assert!(validate(&d52).is_valid());
        assert!(build_delta(4, 2).is_err());
        assert!(build_delta(3, 0).is_err());
    }

    #[test]
    fn cylinder_is_flagged() {
        let d = build_delta_sized(3, &int(1), None).unwrap();
        assert_eq!(d.vertices[..2], pts(&[(0, 0), (9, 2)]));
        assert_eq!(d.vertices[2].x, int(9));
        assert_eq!(d.truncation, vec![1, 2]);
        assert!(validate(&d).is_valid());
        assert!(build_delta_sized(3, &int(0), Some(&int(1))).is_err());
    }

    #[test]
    fn gamma_example() {
        let g = build_gamma(3, &int(1), &int(3)).unwrap();
        let mut v = g.vertices.clone();
        v.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
        assert_eq!(v, pts(&[(0, 0), (0, 3), (9, 2), (13, 3)]));
        assert_eq!(affine_area(&g).unwrap(), int(20));
        assert!(validate(&g).is_valid());
        let corners = corner_statuses(&g);
        let ur = g.vertex_index(&p2(13, 3)).unwrap();
        assert_eq!(corners[ur].kind, CornerKind::Delzant);
        assert_eq!(LatticeVector::new(4, 1).det(&LatticeVector::new(1, 0)), (-1).into());
        // node on the (3,1) ray at 1/1000 of its range β
        assert_eq!(g.nodes[0].position, Point::new(rat(9, 1000), rat(3, 1000)));
        assert_eq!(build_gamma(3, &int(1), &int(2)), Err(CompactError::SigmaMinusDegenerates));
        assert_eq!(build_gamma(4, &int(1), &int(1)), Err(CompactError::SigmaMinusDegenerates));
    }

    #[test]
    fn gamma_area_formula() {
        for n in 2..9i64 {
            for (a, b) in [(int(1), int(n)), (rat(1, 3), rat(7, 2) * int(n)), (int(2), int(2 * n + 1))] {
                let g = build_gamma(n as usize, &a, &b).unwrap();
                let want = rat(n + 1, 2) * &b * &b + &a * &b - rat(n - 1, 2) * &a * &a;
                assert_eq!(affine_area(&g).unwrap(), want);
            }
        }
    }

    #[test]
    fn periods_examples() {
        let c = compactification_periods(5, &int(1), &int(5)).unwrap();
        assert_eq!(c.periods, TargetPeriods::S2xS2 { a: int(13), b: int(6) });
        // the closed forms accept β ≤ (n−1)α, the diagram does not
        assert_eq!(closed_form_periods(4, &int(1), &int(2)), TargetPeriods::X1 { h: int(5), mu: int(2) });
        assert_eq!(compactification_periods(4, &int(1), &int(2)), Err(CompactError::SigmaMinusDegenerates));
        let c = compactification_periods(4, &int(1), &int(4)).unwrap();
        assert_eq!(c.periods, closed_form_periods(4, &int(1), &int(4)));
        assert_eq!(c.sigma_plus.to_string(), "3H-2E");
        let c = compactification_periods(3, &int(1), &int(3)).unwrap();
        assert_eq!(c.areas[1], int(1));
        assert_eq!(c.areas[0], int(13));
        assert_eq!(c.areas[2], int(4));
    }

    #[test]
    fn periods_follow_the_closed_forms() {
        for n in 2..12i64 {
            let k = n / 2;
            for (a, b) in [(int(1), int(n)), (rat(2, 5), int(n)), (int(3), rat(7, 2) * int(n))] {
                let c = compactification_periods(n as usize, &a, &b).unwrap();
                let want = if n % 2 == 1 {
                    TargetPeriods::S2xS2 { a: int(k + 1) * &b - int(k) * &a, b: &b + &a }
                } else {
                    TargetPeriods::X1 { h: int(k + 1) * &b - int(k - 1) * &a, mu: int(k) * (&b - &a) }
                };
                assert_eq!(c.periods, want);
                assert_eq!(closed_form_periods(n as usize, &a, &b), want);
                assert_eq!(c.areas[1], &b - int(n - 1) * &a);
            }
        }
    }

    #[test]
    fn node_position_is_irrelevant() {
        let (a, b) = (rat(3, 2), int(9));
        let base = compactification_periods(4, &a, &b).unwrap();
        for f in [rat(1, 2), rat(1, 7), rat(999, 1000), rat(1, 1_000_000)] {
            let g = build_gamma_with(4, &a, &b, &f).unwrap();
            assert!(validate(&g).is_valid());
            assert_eq!(periods_of_gamma(4, &a, &b, &g).unwrap(), base);
        }
        assert!(build_gamma_with(4, &a, &b, &int(1)).is_err());
        assert!(build_gamma_with(4, &a, &b, &Rational::zero()).is_err());
    }

    #[test]
    fn boundary_class_intersections() {
        for n in 2..10 {
            let [sp, sm, s] = boundary_classes(n);
            assert_eq!(pair(&sp, &sm).unwrap(), 1);
            assert_eq!(pair(&sp, &s).unwrap(), 1);
            assert_eq!(pair(&sm, &s).unwrap(), 1);
        }
    }
}
