//! Second homology of S²×S² and of the blow-ups Xₙ = CP²#n(-CP²).

mod lattice;
mod notation;

pub use lattice::{
    complement_lattice, mod_complement, solve_class_mod_p, solve_class_mod_p_exhaustive,
    solve_class_mod_p_smith, soft_obstruction, Complement, SoftObstruction,
};

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("classes live in different spaces: {0} vs {1}")]
    MismatchedSpaces(String, String),
    #[error("class violates adjunction parity: {0}")]
    AdjunctionParity(String),
    #[error("zero class has no primitivity")]
    ZeroClass,
    #[error("twist class must have square -2, got {0}")]
    NotMinusTwo(i64),
    #[error("complement index mismatch: expected {expected}, got {got}")]
    ComplementIndexMismatch { expected: i64, got: i64 },
    #[error("cannot parse class {0:?}")]
    Parse(String),
    #[error("modulus must be at least {min}, got {got}")]
    BadModulus { min: i64, got: i64 },
}

/// Which lattice a class lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntersectionSpace {
    /// Basis A, B with pairing [[0,1],[1,0]].
    S2xS2,
    /// Basis H, E₁..Eₙ with pairing diag(1,-1,..,-1).
    Blowup(usize),
}

impl IntersectionSpace {
    pub fn dim(&self) -> usize {
        match self {
            IntersectionSpace::S2xS2 => 2,
            IntersectionSpace::Blowup(n) => n + 1,
        }
    }

    pub fn gram(&self, i: usize, j: usize) -> i64 {
        match self {
            IntersectionSpace::S2xS2 => i64::from(i != j),
            IntersectionSpace::Blowup(_) => match (i, j) {
                (0, 0) => 1,
                _ if i == j => -1,
                _ => 0,
            },
        }
    }

    pub fn gram_matrix(&self) -> Vec<Vec<i64>> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.gram(i, j)).collect()).collect()
    }

    /// Poincaré dual of the first Chern class.
    pub fn c1_class(&self) -> HomologyClass {
        let coeffs = match self {
            IntersectionSpace::S2xS2 => vec![2, 2],
            IntersectionSpace::Blowup(n) => {
                let mut v = vec![-1; n + 1];
                v[0] = 3;
                v
            }
        };
        HomologyClass { space: *self, coeffs }
    }

    pub fn basis_name(&self, i: usize) -> String {
        match self {
            IntersectionSpace::S2xS2 => ["A", "B"][i].to_string(),
            IntersectionSpace::Blowup(1) if i == 1 => "E".to_string(),
            IntersectionSpace::Blowup(_) if i == 0 => "H".to_string(),
            IntersectionSpace::Blowup(_) => format!("E{i}"),
        }
    }

    pub fn basis(&self, i: usize) -> HomologyClass {
        let mut coeffs = vec![0; self.dim()];
        coeffs[i] = 1;
        HomologyClass { space: *self, coeffs }
    }
}

impl fmt::Display for IntersectionSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntersectionSpace::S2xS2 => write!(f, "S2xS2"),
            IntersectionSpace::Blowup(n) => write!(f, "X{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyClass {
    pub space: IntersectionSpace,
    pub coeffs: Vec<i64>,
}

impl PartialOrd for IntersectionSpace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntersectionSpace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |s: &IntersectionSpace| match s {
            IntersectionSpace::S2xS2 => (0, 0),
            IntersectionSpace::Blowup(n) => (1, *n),
        };
        key(self).cmp(&key(other))
    }
}

impl HomologyClass {
    pub fn new(space: IntersectionSpace, coeffs: Vec<i64>) -> Self {
        assert_eq!(coeffs.len(), space.dim(), "coefficient length must match {space}");
        HomologyClass { space, coeffs }
    }

    pub fn zero(space: IntersectionSpace) -> Self {
        HomologyClass { space, coeffs: vec![0; space.dim()] }
    }

    pub fn parse(space: IntersectionSpace, s: &str) -> Result<Self, HomologyError> {
        notation::parse(space, s)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &HomologyClass) -> HomologyClass {
        self.combine(o, 1)
    }

    pub fn sub(&self, o: &HomologyClass) -> HomologyClass {
        self.combine(o, -1)
    }

    pub fn scale(&self, k: i64) -> HomologyClass {
        HomologyClass { space: self.space, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn neg(&self) -> HomologyClass {
        self.scale(-1)
    }

    fn combine(&self, o: &HomologyClass, sign: i64) -> HomologyClass {
        assert_eq!(self.space, o.space);
        HomologyClass {
            space: self.space,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + sign * b).collect(),
        }
    }

    pub fn square(&self) -> i64 {
        pair_unchecked(self, self)
    }

    /// Reduction mod p with coefficients in 0..p.
    pub fn reduce(&self, p: i64) -> ModClass {
        ModClass {
            space: self.space,
            coeffs: self.coeffs.iter().map(|c| c.mod_floor(&p)).collect(),
            p,
        }
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", notation::print(self))
    }
}

/// A class in H₂(·;ℤ/p), stored by representatives in 0..p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModClass {
    pub space: IntersectionSpace,
    pub coeffs: Vec<i64>,
    pub p: i64,
}

impl ModClass {
    pub fn new(space: IntersectionSpace, coeffs: Vec<i64>, p: i64) -> Result<Self, HomologyError> {
        if p < 2 {
            return Err(HomologyError::BadModulus { min: 2, got: p });
        }
        Ok(HomologyClass::new(space, coeffs).reduce(p))
    }

    pub fn lift(&self) -> HomologyClass {
        HomologyClass { space: self.space, coeffs: self.coeffs.clone() }
    }

    /// Pairing with an integral class, reduced mod p.
    pub fn pair_with(&self, x: &HomologyClass) -> i64 {
        pair_unchecked(&self.lift(), x).mod_floor(&self.p)
    }
}

impl fmt::Display for ModClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.lift(), self.p)
    }
}

fn pair_unchecked(x: &HomologyClass, y: &HomologyClass) -> i64 {
    let d = x.space.dim();
    let mut acc = 0;
    for i in 0..d {
        for j in 0..d {
            let g = x.space.gram(i, j);
            if g != 0 {
                acc += g * x.coeffs[i] * y.coeffs[j];
            }
        }
    }
    acc
}

pub fn pair(x: &HomologyClass, y: &HomologyClass) -> Result<i64, HomologyError> {
    if x.space != y.space {
        return Err(HomologyError::MismatchedSpaces(x.space.to_string(), y.space.to_string()));
    }
    Ok(pair_unchecked(x, y))
}

pub fn c1(x: &HomologyClass) -> i64 {
    pair_unchecked(&x.space.c1_class(), x)
}

/// Genus forced by adjunction for an embedded symplectic representative.
pub fn adjunction_genus(x: &HomologyClass) -> Result<i64, HomologyError> {
    let t = x.square() - c1(x);
    if t % 2 != 0 {
        return Err(HomologyError::AdjunctionParity(x.to_string()));
    }
    Ok(1 + t / 2)
}

pub fn is_characteristic(x: &HomologyClass) -> bool {
    (0..x.space.dim()).all(|i| {
        let e = x.space.basis(i);
        (pair_unchecked(x, &e) - e.square()).rem_euclid(2) == 0
    })
}

pub fn is_primitive(x: &HomologyClass) -> Result<bool, HomologyError> {
    if x.is_zero() {
        return Err(HomologyError::ZeroClass);
    }
    Ok(x.coeffs.iter().fold(0i64, |g, c| g.gcd(c)) == 1)
}

/// Reflection x ↦ x + (x·b)b in a (-2)-class.
pub fn dehn_twist(x: &HomologyClass, b: &HomologyClass) -> Result<HomologyClass, HomologyError> {
    let s = b.square();
    if s != -2 {
        return Err(HomologyError::NotMinusTwo(s));
    }
    let k = pair(x, b)?;
    Ok(x.add(&b.scale(k)))
}

/// The class of a liminal Lₙ,₁ pinwheel: A+kB mod 2k+1 in S²×S² for odd n,
/// kH+(k+1)E mod 2k in X₁ for even n.
pub fn liminal_class(n: i64) -> ModClass {
    let k = n / 2;
    if n % 2 == 1 {
        HomologyClass::new(IntersectionSpace::S2xS2, vec![1, k]).reduce(n)
    } else {
        HomologyClass::new(IntersectionSpace::Blowup(1), vec![k, k + 1]).reduce(n)
    }
}

/// The two classes W₁, W₂ spanning the complement of the liminal class.
pub fn liminal_complement_classes(n: i64) -> (HomologyClass, HomologyClass) {
    let k = n / 2;
    if n % 2 == 1 {
        let s = IntersectionSpace::S2xS2;
        (HomologyClass::new(s, vec![1, k + 1]), HomologyClass::new(s, vec![2, 1]))
    } else {
        let s = IntersectionSpace::Blowup(1);
        (HomologyClass::new(s, vec![k + 1, -k]), HomologyClass::new(s, vec![2, 0]))
    }
}
