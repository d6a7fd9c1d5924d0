use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::{BaseDiagram, Node};
use crate::exact_core::linalg::ext_gcd;
use crate::exact_core::{LatticeVector, Point, UnimodularMatrix};

type Key = (Vec<Point>, Vec<(Point, LatticeVector, Point)>, Vec<usize>);

/// Unimodular g with g·e = (1,0) and g·next = (c,d), 0 ≤ c < d.
fn frame(e: &LatticeVector, next: &LatticeVector) -> UnimodularMatrix {
    let (_, x, y) = ext_gcd(&e.x, &e.y);
    let g = UnimodularMatrix { a: x, b: y, c: -e.y.clone(), d: e.x.clone() };
    let w = g.apply(next);
    // w.y = det(e, next) > 0 for a convex corner
    let s = -w.x.div_floor(&w.y);
    let shear = UnimodularMatrix { a: BigInt::from(1), b: s, c: BigInt::from(0), d: BigInt::from(1) };
    shear.mul(&g)
}

fn reflected(d: &BaseDiagram) -> BaseDiagram {
    let n = d.len();
    let r = |p: &Point| Point::new(p.x.clone(), -p.y.clone());
    // reflection reverses orientation; edge i of the reversed list is old edge n-2-i
    let vertices: Vec<Point> = d.vertices.iter().rev().map(r).collect();
    let truncation = d.truncation.iter().map(|&i| (2 * n - 2 - i) % n).collect();
    let nodes = d
        .nodes
        .iter()
        .map(|nd| Node {
            position: r(&nd.position),
            eigenvector: LatticeVector { x: nd.eigenvector.x.clone(), y: -nd.eigenvector.y.clone() },
            anchor: r(&nd.anchor),
        })
        .collect();
    BaseDiagram { name: d.name.clone(), vertices, nodes, truncation }
}

fn candidate(d: &BaseDiagram, s: usize) -> Key {
    let n = d.len();
    let g = frame(&d.edge_direction(s), &d.edge_direction(s + 1));
    let origin = d.vertices[s].clone();
    let map = |p: &Point| g.apply_point(&p.sub(&origin));
    let verts = (0..n).map(|i| map(d.vertex(s + i))).collect();
    let mut nodes: Vec<(Point, LatticeVector, Point)> = d
        .nodes
        .iter()
        .map(|nd| {
            let pos = map(&nd.position);
            let anchor = map(&nd.anchor);
            let mut v = g.apply(&nd.eigenvector);
            if v.to_point().dot(&pos.sub(&anchor)).is_negative() {
                v = v.neg();
            }
            (pos, v, anchor)
        })
        .collect();
    nodes.sort();
    let mut tr: Vec<usize> = d.truncation.iter().map(|&i| (i + n - s) % n).collect();
    tr.sort();
    (verts, nodes, tr)
}

/// Canonical representative of the AGL(2,ℤ) orbit, reflections included.
/// Node order and eigenvector sign are normalized; the name is kept.
pub fn normal_form(d: &BaseDiagram) -> BaseDiagram {
    let refl = reflected(d);
    let best = [d, &refl]
        .into_iter()
        .flat_map(|x| (0..x.len()).map(move |s| candidate(x, s)))
        .min()
        .expect("non-empty polygon");
    let (vertices, nodes, truncation) = best;
    BaseDiagram {
        name: d.name.clone(),
        vertices,
        nodes: nodes.into_iter().map(|(position, eigenvector, anchor)| Node { position, eigenvector, anchor }).collect(),
        truncation,
    }
}

pub fn agl_equivalent(a: &BaseDiagram, b: &BaseDiagram) -> bool {
    if a.len() != b.len() || a.nodes.len() != b.nodes.len() {
        return false;
    }
    let (mut x, mut y) = (normal_form(a), normal_form(b));
    x.name = None;
    y.name = None;
    x == y
}
