//! Almost toric base diagrams: polygons decorated with nodes and branch cuts.

pub mod geom;
mod io;
mod normal_form;
mod ops;
mod svg;
mod validate;
mod visible;

pub use io::{from_json, from_value, to_json, to_value};
pub use normal_form::{agl_equivalent, normal_form};
pub use ops::{mutate, mutate_report, nodal_slide, nodal_trade, slide_range, symplectic_cut, MutationInfo, Orientation};
pub use svg::{render_svg, SvgOptions};
pub use validate::{affine_area, corner_statuses, validate, CornerKind, CornerStatus, Validation, Violation};
pub use visible::{detect_visible_lagrangian, VisibleKind, VisibleLagrangianReport};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact_core::{LatticeVector, Point, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("entangled cuts: {0}")]
    EntangledCuts(String),
    #[error("not on eigenline")]
    NotOnEigenline,
    #[error("slide out of range")]
    SlideOutOfRange,
    #[error("corner not Delzant")]
    CornerNotDelzant,
    #[error("cut collision")]
    CutCollision,
    #[error("cut hits singular data")]
    CutHitsSingularData,
    #[error("zero-area polygon")]
    ZeroArea,
    #[error("no such node {0}")]
    NoSuchNode(usize),
    #[error("no such vertex {0}")]
    NoSuchVertex(usize),
    #[error("operation touches a truncation edge")]
    TruncationEdge,
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("normal vector must be primitive")]
    NonPrimitiveNormal,
    #[error("malformed diagram file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub position: Point,
    pub eigenvector: LatticeVector,
    pub anchor: Point,
}

impl Node {
    /// Primitive direction from the anchor towards the node.
    pub fn outward(&self) -> Point {
        let d = self.position.sub(&self.anchor);
        let v = self.eigenvector.to_point();
        if d.dot(&v).is_negative() { v.scale(&Rational::from_integer((-1).into())) } else { v }
    }
}

/// A polygon listed counterclockwise, with nodes. Edge i runs from vertex i
/// to vertex i+1; edges listed in `truncation` are artificial bounds of an
/// unbounded diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseDiagram {
    pub name: Option<String>,
    pub vertices: Vec<Point>,
    pub nodes: Vec<Node>,
    pub truncation: Vec<usize>,
}

impl BaseDiagram {
    pub fn new(vertices: Vec<Point>, nodes: Vec<Node>) -> Self {
        BaseDiagram { name: None, vertices, nodes, truncation: Vec::new() }
    }

    pub fn polygon(vertices: Vec<Point>) -> Self {
        Self::new(vertices, Vec::new())
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.vertices.len()]
    }

    /// Primitive direction of edge i.
    pub fn edge_direction(&self, i: usize) -> LatticeVector {
        let n = self.len();
        LatticeVector::primitive_along(&self.vertices[(i + 1) % n].sub(&self.vertices[i % n]))
            .expect("distinct consecutive vertices")
    }

    pub fn edge_length(&self, i: usize) -> Rational {
        let n = self.len();
        let d = self.vertices[(i + 1) % n].sub(&self.vertices[i % n]);
        let e = self.edge_direction(i).to_point();
        if !e.x.is_zero() { &d.x / &e.x } else { &d.y / &e.y }
    }

    pub fn is_truncation_edge(&self, i: usize) -> bool {
        self.truncation.contains(&(i % self.len()))
    }

    pub fn vertex_index(&self, p: &Point) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Same polygon up to cyclic relabelling, same nodes in the same order.
    pub fn same_as(&self, other: &BaseDiagram) -> bool {
        let n = self.len();
        if n != other.len() || self.nodes != other.nodes {
            return false;
        }
        let tr = |d: &BaseDiagram, shift: usize| -> Vec<usize> {
            let mut t: Vec<usize> = d.truncation.iter().map(|&i| (i + n - shift) % n).collect();
            t.sort();
            t
        };
        (0..n).any(|s| {
            (0..n).all(|i| self.vertices[i] == other.vertices[(i + s) % n]) && {
                let mut mine = self.truncation.clone();
                mine.sort();
                mine == tr(other, s)
            }
        })
    }
}
