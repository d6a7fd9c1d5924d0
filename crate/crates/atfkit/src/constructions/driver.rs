//! Step-by-step driver: applies operations, records them, and follows the
//! toric boundary through mutations so that the edge a visible Lagrangian
//! ends on can be named by its seed class.

use num_traits::{Signed, Zero};

use super::Operation;
use crate::atf_diagram::geom::{line_param, on_open_segment, on_segment};
use crate::atf_diagram::{
    detect_visible_lagrangian, mutate_report, nodal_slide, slide_range, BaseDiagram,
    DiagramError, Orientation, VisibleKind, VisibleLagrangianReport,
};
use crate::exact_core::{apply_affine, rat, shear, AffineMap, LatticeVector, Point, Rational};
use crate::homology::HomologyClass;

/// How often a crowding cut is pulled back towards its anchor before giving up.
const RETRACTIONS: usize = 48;

#[derive(Debug, Clone)]
pub(super) struct Label {
    pub name: String,
    pub class: HomologyClass,
}

#[derive(Debug, Clone)]
struct Piece {
    a: Point,
    b: Point,
    label: usize,
}

#[derive(Debug, Clone)]
pub(super) struct Builder {
    pub diagram: BaseDiagram,
    pub ops: Vec<Operation>,
    pub labels: Vec<Label>,
    pieces: Vec<Piece>,
    eps: Rational,
}

impl Builder {
    /// `names[i]`, `classes[i]` describe edge i of the seed polygon.
    pub fn new(seed: BaseDiagram, edges: Vec<(&str, HomologyClass)>, eps: &Rational) -> Self {
        let n = seed.len();
        assert_eq!(edges.len(), n);
        let pieces = (0..n)
            .map(|i| Piece { a: seed.vertices[i].clone(), b: seed.vertices[(i + 1) % n].clone(), label: i })
            .collect();
        let labels = edges.into_iter().map(|(name, class)| Label { name: name.to_string(), class }).collect();
        Builder { diagram: seed, ops: Vec::new(), labels, pieces, eps: eps.clone() }
    }

    fn apply(&mut self, op: Operation) -> Result<(), DiagramError> {
        let before = self.diagram.clone();
        let (next, grazed) = op.run(&before)?;
        if let Operation::Mutate { node, orientation, .. } = &op {
            self.follow_mutation(&before, &next, *node, *orientation);
        }
        if let Operation::SymplecticCut { normal, level, .. } = &op {
            self.follow_cut(normal, level);
        }
        let op = match op {
            Operation::Mutate { node, orientation, .. } => Operation::Mutate { node, orientation, grazed_vertex: grazed },
            other => other,
        };
        self.diagram = next;
        self.ops.push(op);
        Ok(())
    }

    /// Nodal trade at the vertex `p`, at `eps` times the shorter adjacent edge.
    pub fn trade(&mut self, p: &Point) -> Result<usize, DiagramError> {
        let d = &self.diagram;
        let v = d.vertex_index(p).ok_or_else(|| DiagramError::Invalid(format!("no vertex at {p}")))?;
        let n = d.len();
        let short = std::cmp::min(d.edge_length((v + n - 1) % n), d.edge_length(v));
        self.apply(Operation::NodalTrade { vertex: v, t: &self.eps * short })?;
        Ok(self.diagram.nodes.len() - 1)
    }

    /// Moves node `i` to `f` times its slide range from the anchor, halving `f`
    /// while the move is refused.
    pub fn settle(&mut self, i: usize, f: &Rational) -> Result<(), DiagramError> {
        let mut f = f.clone();
        let mut last = DiagramError::SlideOutOfRange;
        for _ in 0..RETRACTIONS {
            let nd = &self.diagram.nodes[i];
            let range = slide_range(&self.diagram, i)?;
            let to = nd.anchor.add(&nd.outward().scale(&(&range * &f)));
            if let Err(e) = nodal_slide(&self.diagram, i, &to) {
                last = e;
                f /= rat(2, 1);
                continue;
            }
            if to == nd.position {
                return Ok(());
            }
            return self.apply(Operation::NodalSlide { node: i, to });
        }
        Err(last)
    }

    /// Pulls node `i` an eighth of the way back to its anchor.
    fn retract(&mut self, i: usize) -> Result<(), DiagramError> {
        let nd = &self.diagram.nodes[i];
        let t = line_param(&nd.anchor, &nd.outward(), &nd.position).ok_or(DiagramError::NotOnEigenline)?;
        let to = nd.anchor.add(&nd.outward().scale(&(t / rat(8, 1))));
        self.apply(Operation::NodalSlide { node: i, to })
    }

    fn retract_others(&mut self, i: usize) -> Result<(), DiagramError> {
        for j in 0..self.diagram.nodes.len() {
            if j != i {
                self.retract(j)?;
            }
        }
        Ok(())
    }

    /// Mutation at node `i` followed by a slide to `eps` of the new range.
    /// Cuts of other nodes that block the eigenline are retracted first.
    pub fn mutate(&mut self, i: usize, o: Orientation) -> Result<(), DiagramError> {
        let mut tries = 0;
        loop {
            match mutate_report(&self.diagram, i, o) {
                Ok(_) => break,
                Err(DiagramError::EntangledCuts(msg)) if tries < RETRACTIONS && msg.contains("cut of node") => {
                    self.retract_others(i)?;
                    tries += 1;
                }
                Err(e) => return Err(e),
            }
        }
        self.apply(Operation::Mutate { node: i, orientation: o, grazed_vertex: false })?;
        let eps = self.eps.clone();
        self.settle(i, &eps)
    }

    pub fn cut(&mut self, normal: LatticeVector, level: Rational, class: HomologyClass, name: &str) -> Result<(), DiagramError> {
        self.labels.push(Label { name: name.to_string(), class });
        self.apply(Operation::SymplecticCut { normal, level, label: Some(name.to_string()) })
    }

    /// Visible Lagrangian of node `i`. An obstruction by another cut is
    /// retried after retracting the other nodes.
    pub fn visible(&mut self, i: usize) -> Result<VisibleLagrangianReport, DiagramError> {
        let mut r = detect_visible_lagrangian(&self.diagram, i)?;
        let mut tries = 0;
        while r.kind == VisibleKind::Obstructed && tries < RETRACTIONS {
            self.retract_others(i)?;
            r = detect_visible_lagrangian(&self.diagram, i)?;
            tries += 1;
        }
        Ok(r)
    }

    /// Seed edge the boundary point `p` came from, if unambiguous.
    pub fn label_at(&self, p: &Point) -> Option<usize> {
        let hits: Vec<usize> = self.pieces.iter().filter(|s| on_segment(p, &s.a, &s.b)).map(|s| s.label).collect();
        match hits.split_first() {
            Some((&l, rest)) if rest.iter().all(|&m| m == l) => Some(l),
            _ => None,
        }
    }

    /// The tracked pieces tile the current boundary.
    pub fn pieces_close_up(&self) -> bool {
        let n = self.pieces.len();
        let d = &self.diagram;
        (0..n).all(|k| self.pieces[k].b == self.pieces[(k + 1) % n].a && !self.pieces[k].a.sub(&self.pieces[k].b).is_zero())
            && d.vertices.iter().all(|v| self.pieces.iter().any(|s| &s.a == v))
            && self.pieces.iter().all(|s| (0..d.len()).any(|j| on_segment(&s.a, d.vertex(j), d.vertex(j + 1)) && on_segment(&s.b, d.vertex(j), d.vertex(j + 1))))
    }

    /// Labels still carried by some boundary piece.
    pub fn live_labels(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.pieces.iter().map(|s| s.label).collect();
        v.sort();
        v.dedup();
        v
    }

    fn follow_mutation(&mut self, before: &BaseDiagram, after: &BaseDiagram, i: usize, o: Orientation) {
        let nd = &before.nodes[i];
        let q = nd.anchor.clone();
        let x = after.nodes[i].anchor.clone();
        let mut pieces = Vec::with_capacity(self.pieces.len() + 1);
        for s in self.pieces.drain(..) {
            if on_open_segment(&x, &s.a, &s.b) {
                pieces.push(Piece { a: s.a, b: x.clone(), label: s.label });
                pieces.push(Piece { a: x.clone(), b: s.b, label: s.label });
            } else {
                pieces.push(s);
            }
        }
        let start = pieces.iter().position(|s| s.a == q).expect("anchor is a piece endpoint");
        pieces.rotate_left(start);
        let m = pieces.iter().position(|s| s.a == x).expect("exit is a piece endpoint");
        let a = shear(&nd.eigenvector).expect("primitive eigenvector");
        let a = match o {
            Orientation::Ccw => a,
            Orientation::Cw => a.inverse().expect("shear is unimodular"),
        };
        let map = AffineMap::about(&nd.position, a);
        for (idx, s) in pieces.iter_mut().enumerate() {
            let moved = match o {
                Orientation::Ccw => idx < m,
                Orientation::Cw => idx >= m,
            };
            if moved {
                s.a = apply_affine(&map, &s.a);
                s.b = apply_affine(&map, &s.b);
            }
        }
        self.pieces = pieces;
    }

    fn follow_cut(&mut self, normal: &LatticeVector, level: &Rational) {
        let nv = normal.to_point();
        let f = |p: &Point| nv.dot(p) - level;
        let new_label = self.labels.len() - 1;
        let mut kept: Vec<Piece> = Vec::new();
        for s in &self.pieces {
            let (fa, fb) = (f(&s.a), f(&s.b));
            let cross = || s.a.add(&s.b.sub(&s.a).scale(&(&fa / (&fa - &fb))));
            let seg = match (fa.is_positive(), fb.is_positive()) {
                (false, false) => Some((s.a.clone(), s.b.clone())),
                (false, true) if !fa.is_zero() => Some((s.a.clone(), cross())),
                (true, false) if !fb.is_zero() => Some((cross(), s.b.clone())),
                _ => None,
            };
            if let Some((a, b)) = seg {
                kept.push(Piece { a, b, label: s.label });
            }
        }
        let mut out = Vec::with_capacity(kept.len() + 1);
        let n = kept.len();
        for k in 0..n {
            let next = kept[(k + 1) % n].a.clone();
            let end = kept[k].b.clone();
            out.push(kept[k].clone());
            if end != next {
                out.push(Piece { a: end, b: next, label: new_label });
            }
        }
        // the spheres over edges meeting the blown-up corner lose the exceptional class
        let e = self.labels[new_label].class.clone();
        let m = out.len();
        let mut touched = Vec::new();
        for k in 0..m {
            if out[k].label == new_label {
                touched.push(out[(k + m - 1) % m].label);
                touched.push(out[(k + 1) % m].label);
            }
        }
        touched.sort();
        touched.dedup();
        for l in touched {
            self.labels[l].class = self.labels[l].class.sub(&e);
        }
        self.pieces = out;
    }
}

