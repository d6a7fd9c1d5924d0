use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::geom::{line_param, orient, ray_exit, BoundaryHit};
use super::{BaseDiagram, DiagramError, Node};
use crate::exact_core::{LatticeVector, Point, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VisibleKind {
    Pinwheel,
    Disk,
    SchoenWolfson,
    Obstructed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VisibleLagrangianReport {
    pub kind: VisibleKind,
    pub order: i64,
    pub q_param: Option<i64>,
    /// From the node to the terminus.
    #[serde(serialize_with = "ser_segment")]
    pub segment: (Point, Point),
    /// The outward ray escaped through a truncation edge and the segment runs
    /// over the cut instead.
    pub via_cut: bool,
    /// q_param comes from a germ search rather than a closed rule.
    pub best_effort: bool,
}

fn ser_segment<S: serde::Serializer>(seg: &(Point, Point), s: S) -> Result<S::Ok, S::Error> {
    use crate::exact_core::fmt_rational;
    let p = |q: &Point| [fmt_rational(&q.x), fmt_rational(&q.y)];
    serde::Serialize::serialize(&[p(&seg.0), p(&seg.1)], s)
}

/// Smallest ray parameter at which [a,b] meets p + t·u, t ∈ (0, tmax].
fn contact(p: &Point, u: &Point, tmax: &Rational, a: &Point, b: &Point) -> Option<Rational> {
    let e = b.sub(a);
    let den = u.det(&e);
    let ok = |t: &Rational| t.is_positive() && t <= tmax;
    if den.is_zero() {
        if !orient(p, &p.add(u), a).is_zero() {
            return None;
        }
        let ts: Vec<Rational> = [a, b].iter().filter_map(|q| line_param(p, u, q)).filter(ok).collect();
        return ts.into_iter().min();
    }
    let ap = a.sub(p);
    let t = ap.det(&e) / &den;
    let s = ap.det(u) / &den;
    let unit = Rational::from_integer(1.into());
    (ok(&t) && !s.is_negative() && s <= unit).then_some(t)
}

fn small(x: &BigInt) -> i64 {
    x.to_i64().expect("pinwheel order fits in i64")
}

/// q in 1..p coprime to p with [[p,0],[q,-1]]·[w f]⁻¹ integral, normalized to
/// min(q, p-q).
fn germ_q(p: i64, w: &LatticeVector, f: &LatticeVector) -> Option<i64> {
    let det = w.det(f);
    if det.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    // inverse of [w f] times det: [[f.y, -f.x], [-w.y, w.x]]
    let inv = [[f.y.clone(), -f.x.clone()], [-w.y.clone(), w.x.clone()]];
    (1..p.max(2)).filter(|q| q.gcd(&p) == 1).find_map(|q| {
        let m = [[pb.clone(), BigInt::zero()], [BigInt::from(q), BigInt::from(-1)]];
        let integral = (0..2).all(|r| {
            (0..2).all(|c| {
                let entry = &m[r][0] * &inv[0][c] + &m[r][1] * &inv[1][c];
                (entry % &det).is_zero()
            })
        });
        integral.then_some(q.min(p - q))
    })
}

fn dir(p: &Point) -> LatticeVector {
    LatticeVector::primitive_along(p).expect("nonzero direction")
}

pub fn detect_visible_lagrangian(d: &BaseDiagram, i: usize) -> Result<VisibleLagrangianReport, DiagramError> {
    let nd: &Node = d.nodes.get(i).ok_or(DiagramError::NoSuchNode(i))?;
    let n = d.len();
    let u = nd.outward();
    let (t_exit, x, hit) =
        ray_exit(&d.vertices, &nd.position, &u).ok_or_else(|| DiagramError::Invalid("node outside polygon".into()))?;

    let first_obstacle = d
        .nodes
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .filter_map(|(_, o)| contact(&nd.position, &u, &t_exit, &o.position, &o.anchor))
        .min();
    if let Some(t) = first_obstacle {
        return Ok(VisibleLagrangianReport {
            kind: VisibleKind::Obstructed,
            order: 0,
            q_param: None,
            segment: (nd.position.clone(), nd.position.add(&u.scale(&t))),
            via_cut: false,
            best_effort: false,
        });
    }

    let escapes = match hit {
        BoundaryHit::Edge(j) => d.is_truncation_edge(j),
        BoundaryHit::Vertex(j) => d.is_truncation_edge(j) || d.is_truncation_edge((j + n - 1) % n),
    };
    if escapes {
        // the vanishing cycle sits over the cut, as in the local model
        let iv = d
            .vertex_index(&nd.anchor)
            .ok_or_else(|| DiagramError::Invalid(format!("anchor of node {i} is not a vertex")))?;
        let e_in = d.edge_direction((iv + n - 1) % n);
        let order = small(&nd.eigenvector.det(&e_in).abs());
        let w = dir(&u);
        let q = germ_q(order, &w, &e_in);
        let kind = if order >= 2 { VisibleKind::Pinwheel } else { VisibleKind::Disk };
        return Ok(VisibleLagrangianReport {
            kind,
            order: order.max(1),
            q_param: if kind == VisibleKind::Pinwheel { q } else { None },
            segment: (nd.position.clone(), nd.anchor.clone()),
            via_cut: true,
            best_effort: kind == VisibleKind::Pinwheel,
        });
    }

    let base = |kind, order| VisibleLagrangianReport {
        kind,
        order,
        q_param: None,
        segment: (nd.position.clone(), x.clone()),
        via_cut: false,
        best_effort: false,
    };
    Ok(match hit {
        BoundaryHit::Vertex(_) => base(VisibleKind::SchoenWolfson, 0),
        BoundaryHit::Edge(j) => {
            let e = d.edge_direction(j);
            let k = small(&nd.eigenvector.det(&e).abs());
            if k >= 2 {
                let w = dir(&u.scale(&Rational::from_integer((-1).into())));
                let mut r = base(VisibleKind::Pinwheel, k);
                r.q_param = germ_q(k, &w, &e);
                r.best_effort = true;
                r
            } else {
                base(VisibleKind::Disk, 1)
            }
        }
    })
}
