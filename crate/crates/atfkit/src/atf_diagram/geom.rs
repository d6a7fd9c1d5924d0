//! Exact predicates on rational points, segments and polygons.

use num_traits::{Signed, Zero};

use crate::exact_core::{Point, Rational};

pub fn orient(a: &Point, b: &Point, c: &Point) -> Rational {
    b.sub(a).det(&c.sub(a))
}

/// Closed segment membership.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if !orient(a, b, p).is_zero() {
        return false;
    }
    let ab = b.sub(a);
    let ap = p.sub(a);
    let t = ap.dot(&ab);
    t >= Rational::zero() && t <= ab.dot(&ab)
}

/// Open segment membership (endpoints excluded).
pub fn on_open_segment(p: &Point, a: &Point, b: &Point) -> bool {
    on_segment(p, a, b) && p != a && p != b
}

/// Whether closed segments [a,b] and [c,d] share a point.
pub fn segments_meet(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let opposite = |x: &Rational, y: &Rational| (x.is_positive() && y.is_negative()) || (x.is_negative() && y.is_positive());
    if opposite(&o1, &o2) && opposite(&o3, &o4) {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

pub fn signed_area2(poly: &[Point]) -> Rational {
    let n = poly.len();
    (0..n).fold(Rational::zero(), |acc, i| acc + poly[i].det(&poly[(i + 1) % n]))
}

pub fn on_boundary(poly: &[Point], p: &Point) -> Option<usize> {
    let n = poly.len();
    (0..n).find(|&i| on_segment(p, &poly[i], &poly[(i + 1) % n]))
}

/// Strict interior test for a simple polygon (crossing number).
pub fn strictly_inside(poly: &[Point], p: &Point) -> bool {
    if on_boundary(poly, p).is_some() {
        return false;
    }
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            // x-coordinate of the crossing compared with p.x
            let lhs = (&p.x - &a.x) * (&b.y - &a.y);
            let rhs = (&b.x - &a.x) * (&p.y - &a.y);
            let crosses = if b.y > a.y { lhs < rhs } else { lhs > rhs };
            if crosses {
                inside = !inside;
            }
        }
    }
    inside
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryHit {
    Vertex(usize),
    /// Interior of edge i (from vertex i to vertex i+1).
    Edge(usize),
}

/// First boundary point strictly ahead of an interior point along direction u,
/// as (parameter t, point, location).
pub fn ray_exit(poly: &[Point], p: &Point, u: &Point) -> Option<(Rational, Point, BoundaryHit)> {
    let n = poly.len();
    let mut best: Option<(Rational, Point, BoundaryHit)> = None;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        let e = b.sub(a);
        let den = u.det(&e);
        if den.is_zero() {
            continue;
        }
        let ap = a.sub(p);
        let t = ap.det(&e) / &den;
        let s = ap.det(u) / &den;
        if t <= Rational::zero() || s < Rational::zero() || s > Rational::from_integer(1.into()) {
            continue;
        }
        let q = p.add(&u.scale(&t));
        let loc = if s.is_zero() {
            BoundaryHit::Vertex(i)
        } else if s == Rational::from_integer(1.into()) {
            BoundaryHit::Vertex((i + 1) % n)
        } else {
            BoundaryHit::Edge(i)
        };
        if best.as_ref().map_or(true, |(bt, _, _)| t < *bt) {
            best = Some((t, q, loc));
        }
    }
    best
}

/// Parameter t of p on the line x = base + t·dir, if p lies on it.
pub fn line_param(base: &Point, dir: &Point, p: &Point) -> Option<Rational> {
    let d = p.sub(base);
    if !d.det(dir).is_zero() {
        return None;
    }
    if !dir.x.is_zero() {
        Some(&d.x / &dir.x)
    } else {
        Some(&d.y / &dir.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::{int, rat};

    fn sq() -> Vec<Point> {
        vec![Point::ints(0, 0), Point::ints(2, 0), Point::ints(2, 2), Point::ints(0, 2)]
    }

    #[test]
    fn inside_and_boundary() {
        let s = sq();
        assert!(strictly_inside(&s, &Point::ints(1, 1)));
        assert!(!strictly_inside(&s, &Point::ints(2, 1)));
        assert!(!strictly_inside(&s, &Point::ints(3, 1)));
        assert_eq!(on_boundary(&s, &Point::ints(2, 1)), Some(1));
        assert_eq!(signed_area2(&s), int(8));
    }

    #[test]
    fn ray_hits() {
        let s = sq();
        let (t, q, loc) = ray_exit(&s, &Point::ints(1, 1), &Point::ints(1, 1)).unwrap();
        assert_eq!((t, q, loc), (int(1), Point::ints(2, 2), BoundaryHit::Vertex(2)));
        let (_, q, loc) = ray_exit(&s, &Point::new(rat(1, 2), rat(1, 2)), &Point::ints(1, 3)).unwrap();
        assert_eq!(q, Point::new(rat(1, 1), int(2)));
        assert_eq!(loc, BoundaryHit::Edge(2));
    }

    #[test]
    fn segment_meeting() {
        let (a, b) = (Point::ints(0, 0), Point::ints(2, 2));
        assert!(segments_meet(&a, &b, &Point::ints(0, 2), &Point::ints(2, 0)));
        assert!(segments_meet(&a, &b, &Point::ints(2, 2), &Point::ints(3, 0)));
        assert!(!segments_meet(&a, &b, &Point::ints(3, 3), &Point::ints(4, 4)));
        assert!(segments_meet(&a, &b, &Point::ints(1, 1), &Point::ints(4, 4)));
    }
}
