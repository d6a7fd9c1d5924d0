use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::geom::{line_param, orient, ray_exit, strictly_inside, BoundaryHit};
use super::validate::{corner_statuses, segment_hits_cuts, validate, CornerKind};
use super::{BaseDiagram, DiagramError, Node};
use crate::exact_core::{apply_affine, shear, AffineMap, LatticeVector, Point, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Cw,
    Ccw,
}

impl FromStr for Orientation {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cw" => Ok(Orientation::Cw),
            "ccw" => Ok(Orientation::Ccw),
            other => Err(DiagramError::Format(format!("orientation must be cw or ccw, got {other:?}"))),
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Cw => "cw",
            Orientation::Ccw => "ccw",
        })
    }
}

/// Details of a mutation beyond the resulting diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationInfo {
    pub diagram: BaseDiagram,
    /// Where the cut now meets the boundary.
    pub new_anchor: Point,
    /// The eigenline left through a vertex rather than an edge interior.
    pub grazed_vertex: bool,
}

/// Vertices paired with a flag for the edge leaving them.
type Ring = Vec<(Point, bool)>;

fn ring(d: &BaseDiagram) -> Ring {
    (0..d.len()).map(|i| (d.vertices[i].clone(), d.is_truncation_edge(i))).collect()
}

/// Drops repeated and straight vertices, merging truncation flags.
fn tidy(mut r: Ring) -> (Vec<Point>, Vec<usize>) {
    loop {
        let n = r.len();
        if n < 3 {
            break;
        }
        let mut changed = false;
        for i in 0..n {
            let j = (i + 1) % n;
            if r[i].0 == r[j].0 {
                r.remove(i);
                changed = true;
                break;
            }
            let h = (i + n - 1) % n;
            let (a, b, c) = (&r[h].0, &r[i].0, &r[j].0);
            if orient(a, b, c).is_zero() && b.sub(a).dot(&c.sub(b)).is_positive() {
                let flag = r[h].1 || r[i].1;
                r[h].1 = flag;
                r.remove(i);
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }
    let verts = r.iter().map(|(p, _)| p.clone()).collect();
    let trunc = r.iter().enumerate().filter(|(_, (_, f))| *f).map(|(i, _)| i).collect();
    (verts, trunc)
}

fn node_at(d: &BaseDiagram, i: usize) -> Result<&Node, DiagramError> {
    d.nodes.get(i).ok_or(DiagramError::NoSuchNode(i))
}

fn checked(d: BaseDiagram) -> Result<BaseDiagram, DiagramError> {
    let v = validate(&d);
    if v.is_valid() {
        Ok(d)
    } else {
        Err(DiagramError::Invalid(format!("{:?}", v.violations)))
    }
}

/// Mutation at node `i`. `Ccw` moves the boundary arc anticlockwise of the
/// oriented cut by the shear of the eigenvector about the node; `Cw` moves the
/// clockwise arc by the inverse shear, so the two undo each other.
pub fn mutate(d: &BaseDiagram, i: usize, orientation: Orientation) -> Result<BaseDiagram, DiagramError> {
    mutate_report(d, i, orientation).map(|m| m.diagram)
}

pub fn mutate_report(d: &BaseDiagram, i: usize, orientation: Orientation) -> Result<MutationInfo, DiagramError> {
    let node = node_at(d, i)?.clone();
    let n = d.len();
    let iq = d
        .vertex_index(&node.anchor)
        .ok_or_else(|| DiagramError::Invalid(format!("anchor of node {i} is not a vertex")))?;
    let u = node.outward();
    let (_, x, hit) = ray_exit(&d.vertices, &node.position, &u)
        .ok_or_else(|| DiagramError::Invalid("eigenline has no exit".into()))?;
    let grazed = matches!(hit, BoundaryHit::Vertex(_));
    match hit {
        BoundaryHit::Edge(j) if d.is_truncation_edge(j) => return Err(DiagramError::TruncationEdge),
        BoundaryHit::Vertex(j) if d.is_truncation_edge(j) || d.is_truncation_edge((j + n - 1) % n) => {
            return Err(DiagramError::TruncationEdge)
        }
        _ => {}
    }
    if let Some(k) = segment_hits_cuts(d, &node.anchor, &x, Some(i)) {
        return Err(DiagramError::EntangledCuts(format!("eigenline of node {i} meets the cut of node {k}")));
    }
    if d.nodes.iter().enumerate().any(|(k, nd)| k != i && nd.anchor == x) {
        return Err(DiagramError::EntangledCuts(format!("eigenline of node {i} ends at another anchor")));
    }

    // walk anticlockwise from the anchor, inserting the exit point
    let src = ring(d);
    let mut walk: Ring = Vec::with_capacity(n + 1);
    let mut xpos = None;
    for s in 0..n {
        let k = (iq + s) % n;
        if s > 0 && matches!(hit, BoundaryHit::Vertex(j) if j == k) {
            xpos = Some(walk.len());
        }
        walk.push(src[k].clone());
        if matches!(hit, BoundaryHit::Edge(j) if j == k) {
            xpos = Some(walk.len());
            walk.push((x.clone(), src[k].1));
        }
    }
    let xpos = xpos.ok_or_else(|| DiagramError::EntangledCuts("eigenline returns to its own anchor".into()))?;

    let a = shear(&node.eigenvector).map_err(|_| DiagramError::Invalid("non-primitive eigenvector".into()))?;
    let a = match orientation {
        Orientation::Ccw => a,
        Orientation::Cw => a.inverse().expect("shear is unimodular"),
    };
    let map = AffineMap::about(&node.position, a.clone());
    let moved = |idx: usize| match orientation {
        Orientation::Ccw => idx > 0 && idx < xpos,
        Orientation::Cw => idx > xpos,
    };
    let new_ring: Ring = walk
        .into_iter()
        .enumerate()
        .map(|(idx, (p, f))| if moved(idx) { (apply_affine(&map, &p), f) } else { (p, f) })
        .collect();
    let (vertices, truncation) = tidy(new_ring);

    let mut nodes = Vec::with_capacity(d.nodes.len());
    for (k, nd) in d.nodes.iter().enumerate() {
        if k == i {
            nodes.push(Node { position: nd.position.clone(), eigenvector: nd.eigenvector.clone(), anchor: x.clone() });
            continue;
        }
        let side = u.det(&nd.position.sub(&node.position));
        if side.is_zero() {
            return Err(DiagramError::EntangledCuts(format!("node {k} sits on the eigenline of node {i}")));
        }
        let on_moving = match orientation {
            Orientation::Ccw => side.is_negative(),
            Orientation::Cw => side.is_positive(),
        };
        if on_moving {
            nodes.push(Node {
                position: apply_affine(&map, &nd.position),
                eigenvector: a.apply(&nd.eigenvector),
                anchor: apply_affine(&map, &nd.anchor),
            });
        } else {
            nodes.push(nd.clone());
        }
    }
    let out = BaseDiagram { name: d.name.clone(), vertices, nodes, truncation };
    Ok(MutationInfo { diagram: checked(out)?, new_anchor: x, grazed_vertex: grazed })
}

/// Point where the ray from the anchor through the node exits the polygon.
pub(super) fn far_exit(d: &BaseDiagram, nd: &Node) -> Option<(Point, BoundaryHit)> {
    ray_exit(&d.vertices, &nd.position, &nd.outward()).map(|(_, p, h)| (p, h))
}

/// Parameter range (0, t_max) of admissible node positions anchor + t·outward.
pub fn slide_range(d: &BaseDiagram, i: usize) -> Result<Rational, DiagramError> {
    let nd = node_at(d, i)?;
    let (far, _) = far_exit(d, nd).ok_or(DiagramError::SlideOutOfRange)?;
    Ok(line_param(&nd.anchor, &nd.outward(), &far).expect("exit lies on the eigenline"))
}

pub fn nodal_slide(d: &BaseDiagram, i: usize, new_position: &Point) -> Result<BaseDiagram, DiagramError> {
    let nd = node_at(d, i)?;
    let t = line_param(&nd.anchor, &nd.outward(), new_position).ok_or(DiagramError::NotOnEigenline)?;
    let tmax = slide_range(d, i)?;
    if !t.is_positive() || t >= tmax {
        return Err(DiagramError::SlideOutOfRange);
    }
    if segment_hits_cuts(d, &nd.anchor, new_position, Some(i)).is_some() {
        return Err(DiagramError::CutCollision);
    }
    let mut out = d.clone();
    out.nodes[i].position = new_position.clone();
    Ok(out)
}

/// Replaces the Delzant corner at `vertex` by a node at distance `t` along its
/// diagonal, anchored at the vertex.
pub fn nodal_trade(d: &BaseDiagram, vertex: usize, t: &Rational) -> Result<BaseDiagram, DiagramError> {
    let n = d.len();
    if vertex >= n {
        return Err(DiagramError::NoSuchVertex(vertex));
    }
    let status = &corner_statuses(d)[vertex];
    let p = d.vertices[vertex].clone();
    if status.kind != CornerKind::Delzant || status.cut_into_corner || d.nodes.iter().any(|nd| nd.anchor == p) {
        return Err(DiagramError::CornerNotDelzant);
    }
    let e_in = d.edge_direction((vertex + n - 1) % n);
    let e_out = d.edge_direction(vertex);
    let v = LatticeVector { x: &e_out.x - &e_in.x, y: &e_out.y - &e_in.y };
    if !t.is_positive() {
        return Err(DiagramError::CutCollision);
    }
    let pos = p.add(&v.to_point().scale(t));
    if !strictly_inside(&d.vertices, &pos) || segment_hits_cuts(d, &p, &pos, None).is_some() {
        return Err(DiagramError::CutCollision);
    }
    let mut out = d.clone();
    out.nodes.push(Node { position: pos, eigenvector: v, anchor: p });
    Ok(out)
}

/// Intersects the polygon with {x : ⟨normal, x⟩ ≤ level}.
pub fn symplectic_cut(d: &BaseDiagram, normal: &LatticeVector, level: &Rational) -> Result<BaseDiagram, DiagramError> {
    if !normal.is_primitive() {
        return Err(DiagramError::NonPrimitiveNormal);
    }
    let nv = normal.to_point();
    let f = |p: &Point| nv.dot(p) - level;
    let vals: Vec<Rational> = d.vertices.iter().map(&f).collect();
    if vals.iter().all(|v| !v.is_positive()) {
        return Ok(d.clone());
    }
    if vals.iter().all(|v| !v.is_negative()) {
        return Err(DiagramError::ZeroArea);
    }
    let mut nodes = Vec::new();
    for nd in &d.nodes {
        let (fp, fa) = (f(&nd.position), f(&nd.anchor));
        if fp.is_negative() && fa.is_negative() {
            nodes.push(nd.clone());
        } else if !(fp.is_positive() && fa.is_positive()) {
            return Err(DiagramError::CutHitsSingularData);
        }
    }
    let n = d.len();
    let mut out: Ring = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let (a, b) = (&d.vertices[i], &d.vertices[j]);
        let (fa, fb) = (&vals[i], &vals[j]);
        let flag = d.is_truncation_edge(i);
        let a_in = !fa.is_positive();
        let b_in = !fb.is_positive();
        let crossing = |fa: &Rational, fb: &Rational| {
            let s = fa / (fa - fb);
            a.add(&b.sub(a).scale(&s))
        };
        match (a_in, b_in) {
            (true, true) => out.push((a.clone(), flag)),
            (true, false) => {
                if fa.is_zero() {
                    out.push((a.clone(), false));
                } else {
                    out.push((a.clone(), flag));
                    out.push((crossing(fa, fb), false));
                }
            }
            (false, true) => {
                if !fb.is_zero() {
                    out.push((crossing(fa, fb), flag));
                }
            }
            (false, false) => {}
        }
    }
    let (vertices, truncation) = tidy(out);
    if vertices.len() < 3 {
        return Err(DiagramError::ZeroArea);
    }
    checked(BaseDiagram { name: d.name.clone(), vertices, nodes, truncation })
}
