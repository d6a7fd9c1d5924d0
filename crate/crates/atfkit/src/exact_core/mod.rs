//! Exact scalars, lattice vectors and unimodular maps of the plane.

pub mod linalg;
pub mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use thiserror::Error;

pub use poly::Poly;

/// Arbitrary precision rational, always in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("not a primitive eigenvector: ({0},{1})")]
    NotPrimitive(BigInt, BigInt),
    #[error("decimal input rejected, use num/den: {0}")]
    DecimalInput(String),
    #[error("malformed rational: {0}")]
    BadRational(String),
    #[error("malformed vector: {0}")]
    BadVector(String),
    #[error("linear part is not unimodular")]
    NotUnimodular,
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Parses `n` or `n/d`. Anything with a decimal point or exponent is refused.
pub fn parse_rational(s: &str) -> Result<Rational, CoreError> {
    let t = s.trim();
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(CoreError::DecimalInput(t.to_string()));
    }
    let bad = || CoreError::BadRational(t.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Rounds toward negative infinity.
pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Serde adapter storing a rational as its "num/den" text.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Common interface of exact rationals and polynomials over them, so that
/// closed-form formulas can be evaluated concretely or symbolically.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    fn zero_value() -> Self {
        Self::from_i64(0)
    }

    fn scale(&self, r: &Rational) -> Self {
        self.clone() * Self::from_rational(r.clone())
    }
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    pub x: BigInt,
    pub y: BigInt,
}

impl LatticeVector {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        LatticeVector { x: x.into(), y: y.into() }
    }

    pub fn is_primitive(&self) -> bool {
        !(self.x.is_zero() && self.y.is_zero()) && self.x.gcd(&self.y).is_one()
    }

    pub fn det(&self, other: &LatticeVector) -> BigInt {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector::new(-&self.x, -&self.y)
    }

    pub fn to_point(&self) -> Point {
        Point::new(
            Rational::from_integer(self.x.clone()),
            Rational::from_integer(self.y.clone()),
        )
    }

    /// Primitive integer vector pointing along a nonzero rational direction.
    pub fn primitive_along(p: &Point) -> Option<LatticeVector> {
        if p.x.is_zero() && p.y.is_zero() {
            return None;
        }
        let l = p.x.denom().lcm(p.y.denom());
        let x = (&p.x * Rational::from_integer(l.clone())).to_integer();
        let y = (&p.y * Rational::from_integer(l)).to_integer();
        let g = x.gcd(&y);
        Some(LatticeVector::new(x / &g, y / &g))
    }

    pub fn parse(s: &str) -> Result<LatticeVector, CoreError> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (a, b) = t.split_once(',').ok_or_else(|| CoreError::BadVector(s.into()))?;
        let a: BigInt = a.trim().parse().map_err(|_| CoreError::BadVector(s.into()))?;
        let b: BigInt = b.trim().parse().map_err(|_| CoreError::BadVector(s.into()))?;
        Ok(LatticeVector::new(a, b))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Point::ints(0, 0)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, r: &Rational) -> Point {
        Point::new(&self.x * r, &self.y * r)
    }

    pub fn det(&self, o: &Point) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Point) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// 2×2 integer matrix acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl UnimodularMatrix {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        UnimodularMatrix { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn transpose(&self) -> UnimodularMatrix {
        UnimodularMatrix::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    /// Inverse of a determinant ±1 matrix.
    pub fn inverse(&self) -> Result<UnimodularMatrix, CoreError> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(CoreError::NotUnimodular);
        }
        Ok(UnimodularMatrix {
            a: &self.d * &det,
            b: -&self.b * &det,
            c: -&self.c * &det,
            d: &self.a * &det,
        })
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector::new(&self.a * &v.x + &self.b * &v.y, &self.c * &v.x + &self.d * &v.y)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector::new(&v.x * &self.a + &v.y * &self.c, &v.x * &self.b + &v.y * &self.d)
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        let r = |z: &BigInt| Rational::from_integer(z.clone());
        Point::new(
            r(&self.a) * &p.x + r(&self.b) * &p.y,
            r(&self.c) * &p.x + r(&self.d) * &p.y,
        )
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// The monodromy around a node with eigenvector (p,q), in the row-vector
/// form [[1-pq, -q²],[p², 1+pq]]. The row vector (p,q) is fixed.
pub fn monodromy_matrix(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<UnimodularMatrix, CoreError> {
    let (p, q) = (p.into(), q.into());
    let v = LatticeVector::new(p.clone(), q.clone());
    if !v.is_primitive() {
        return Err(CoreError::NotPrimitive(p, q));
    }
    let one = BigInt::one();
    Ok(UnimodularMatrix {
        a: &one - &p * &q,
        b: -(&q * &q),
        c: &p * &p,
        d: &one + &p * &q,
    })
}

/// Column action of the monodromy: w ↦ w + det(v,w)·v, the transpose of
/// [`monodromy_matrix`]. Fixes the column vector v.
pub fn shear(v: &LatticeVector) -> Result<UnimodularMatrix, CoreError> {
    Ok(monodromy_matrix(v.x.clone(), v.y.clone())?.transpose())
}

/// x ↦ linear·x + translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: UnimodularMatrix,
    pub translation: Point,
}

impl AffineMap {
    pub fn new(linear: UnimodularMatrix, translation: Point) -> Result<Self, CoreError> {
        if !linear.det().abs().is_one() {
            return Err(CoreError::NotUnimodular);
        }
        Ok(AffineMap { linear, translation })
    }

    pub fn identity() -> Self {
        AffineMap { linear: UnimodularMatrix::identity(), translation: Point::origin() }
    }

    pub fn translate(t: Point) -> Self {
        AffineMap { linear: UnimodularMatrix::identity(), translation: t }
    }

    /// The linear map conjugated to fix `center`.
    pub fn about(center: &Point, linear: UnimodularMatrix) -> Self {
        let t = center.sub(&linear.apply_point(center));
        AffineMap { linear, translation: t }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear.mul(&other.linear),
            translation: self.linear.apply_point(&other.translation).add(&self.translation),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.linear.inverse().expect("unimodular by construction");
        let t = inv.apply_point(&self.translation);
        AffineMap { linear: inv, translation: Point::new(-t.x, -t.y) }
    }
}

pub fn apply_affine(map: &AffineMap, p: &Point) -> Point {
    map.linear.apply_point(p).add(&map.translation)
}
