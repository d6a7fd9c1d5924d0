use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::geom::{on_boundary, on_segment, orient, segments_meet, strictly_inside, signed_area2};
use super::{BaseDiagram, DiagramError};
use crate::exact_core::{shear, LatticeVector, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CornerKind {
    Delzant,
    Nodal,
    Orbifold,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerStatus {
    pub vertex: usize,
    pub kind: CornerKind,
    /// det(e_in, e_out) of the primitive edge directions.
    pub det: i64,
    /// The corner touches a truncation edge.
    pub artificial: bool,
    /// A cut ends at a genuine corner (a mutation grazed this vertex); `kind`
    /// and `det` then describe the corner glued across the cut.
    pub cut_into_corner: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    TooFewVertices,
    RepeatedVertex(usize),
    StraightVertex(usize),
    ReflexCorner(usize),
    SelfIntersection(usize, usize),
    Clockwise,
    NonPrimitiveEigenvector(usize),
    NodeNotInterior(usize),
    NodeOffEigenline(usize),
    AnchorNotOnBoundary(usize),
    AnchorNotVertex(usize),
    AnchorNotNodal(usize),
    CutsMeet(usize, usize),
    BadTruncationIndex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub corners: Vec<CornerStatus>,
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// det(e_in, A·e_out) for the shear A of v.
pub(super) fn glued_det(v: &LatticeVector, e_in: &LatticeVector, e_out: &LatticeVector) -> num_bigint::BigInt {
    let a = shear(v).expect("primitive eigenvector");
    e_in.det(&a.apply(e_out))
}

/// Whether the shear of v carries the outgoing edge onto the incoming one.
pub(super) fn nodal_test(v: &LatticeVector, e_in: &LatticeVector, e_out: &LatticeVector) -> bool {
    let Ok(a) = shear(v) else { return false };
    let img = a.apply(e_out);
    img == *e_in
}

fn corner_dirs(d: &BaseDiagram, i: usize) -> (LatticeVector, LatticeVector) {
    let n = d.len();
    (d.edge_direction((i + n - 1) % n), d.edge_direction(i))
}

fn det_small(v: &num_bigint::BigInt) -> i64 {
    use num_traits::ToPrimitive;
    v.to_i64().unwrap_or(i64::MAX)
}

pub fn corner_statuses(d: &BaseDiagram) -> Vec<CornerStatus> {
    let n = d.len();
    (0..n)
        .map(|i| {
            let (e_in, e_out) = corner_dirs(d, i);
            let det = e_in.det(&e_out);
            let cut = d.nodes.iter().find(|nd| nd.anchor == d.vertices[i]);
            let artificial = d.is_truncation_edge(i) || d.is_truncation_edge((i + n - 1) % n);
            match cut {
                Some(nd) if nodal_test(&nd.eigenvector, &e_in, &e_out) => {
                    CornerStatus { vertex: i, kind: CornerKind::Nodal, det: det_small(&det), artificial, cut_into_corner: false }
                }
                Some(nd) => {
                    // seen through the cut, the corner is spanned by e_in and A·e_out
                    let glued = glued_det(&nd.eigenvector, &e_in, &e_out);
                    let kind = if glued.abs().is_one() { CornerKind::Delzant } else { CornerKind::Orbifold };
                    CornerStatus { vertex: i, kind, det: det_small(&glued), artificial, cut_into_corner: true }
                }
                None => {
                    let kind = if det.abs().is_one() { CornerKind::Delzant } else { CornerKind::Orbifold };
                    CornerStatus { vertex: i, kind, det: det_small(&det), artificial, cut_into_corner: false }
                }
            }
        })
        .collect()
}

/// Reports every invariant violation; never fails.
pub fn validate(d: &BaseDiagram) -> Validation {
    let n = d.len();
    let mut v = Vec::new();
    if n < 3 {
        return Validation { corners: Vec::new(), violations: vec![Violation::TooFewVertices] };
    }
    for i in 0..n {
        if d.vertices[i] == d.vertices[(i + 1) % n] {
            v.push(Violation::RepeatedVertex(i));
        }
    }
    if !v.is_empty() {
        return Validation { corners: Vec::new(), violations: v };
    }
    for &t in &d.truncation {
        if t >= n {
            v.push(Violation::BadTruncationIndex(t));
        }
    }
    if !signed_area2(&d.vertices).is_positive() {
        v.push(Violation::Clockwise);
    }
    for i in 0..n {
        let o = orient(d.vertex(i + n - 1), d.vertex(i), d.vertex(i + 1));
        if o.is_zero() {
            v.push(Violation::StraightVertex(i));
        } else if o.is_negative() {
            v.push(Violation::ReflexCorner(i));
        }
    }
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_meet(d.vertex(i), d.vertex(i + 1), d.vertex(j), d.vertex(j + 1)) {
                v.push(Violation::SelfIntersection(i, j));
            }
        }
    }
    let corners = corner_statuses(d);
    for (k, nd) in d.nodes.iter().enumerate() {
        if !nd.eigenvector.is_primitive() {
            v.push(Violation::NonPrimitiveEigenvector(k));
            continue;
        }
        if !strictly_inside(&d.vertices, &nd.position) {
            v.push(Violation::NodeNotInterior(k));
        }
        let diff = nd.position.sub(&nd.anchor);
        if diff.is_zero() || !diff.det(&nd.eigenvector.to_point()).is_zero() {
            v.push(Violation::NodeOffEigenline(k));
        }
        if on_boundary(&d.vertices, &nd.anchor).is_none() {
            v.push(Violation::AnchorNotOnBoundary(k));
        } else if let Some(i) = d.vertex_index(&nd.anchor) {
            let (e_in, e_out) = corner_dirs(d, i);
            if !nodal_test(&nd.eigenvector, &e_in, &e_out) && !glued_det(&nd.eigenvector, &e_in, &e_out).is_positive() {
                v.push(Violation::AnchorNotNodal(k));
            }
        } else {
            v.push(Violation::AnchorNotVertex(k));
        }
    }
    for a in 0..d.nodes.len() {
        for b in a + 1..d.nodes.len() {
            let (na, nb) = (&d.nodes[a], &d.nodes[b]);
            if segments_meet(&na.position, &na.anchor, &nb.position, &nb.anchor) {
                v.push(Violation::CutsMeet(a, b));
            }
        }
    }
    Validation { corners, violations: v }
}

/// Exact Euclidean area of the polygon, which equals its affine area.
pub fn affine_area(d: &BaseDiagram) -> Result<Rational, DiagramError> {
    let a = signed_area2(&d.vertices).abs() / Rational::from_integer(2.into());
    if a.is_zero() {
        return Err(DiagramError::ZeroArea);
    }
    Ok(a)
}

/// Whether any cut or node in `skip`'s complement meets the closed segment.
pub(super) fn segment_hits_cuts(d: &BaseDiagram, a: &crate::exact_core::Point, b: &crate::exact_core::Point, skip: Option<usize>) -> Option<usize> {
    d.nodes.iter().enumerate().find_map(|(k, nd)| {
        if Some(k) == skip {
            return None;
        }
        let hit = segments_meet(a, b, &nd.position, &nd.anchor) || on_segment(&nd.position, a, b);
        hit.then_some(k)
    })
}
