//! Mod-p complements and class recovery from pairing data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{c1, pair_unchecked, HomologyClass, HomologyError, IntersectionSpace, ModClass};
use crate::exact_core::linalg::{hermite_rows, smith, solve_mod, ZMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complement {
    /// Hermite-reduced basis of {C : C·L ≡ 0 mod p}.
    pub basis: Vec<HomologyClass>,
    pub index: i64,
}

impl Complement {
    /// Whether the span of `classes` equals this sublattice.
    pub fn spans_same(&self, classes: &[HomologyClass]) -> bool {
        let rows: ZMatrix = classes.iter().map(to_big).collect();
        let h = hermite_rows(&rows);
        let mine: ZMatrix = self.basis.iter().map(to_big).collect();
        h == mine
    }
}

fn to_big(c: &HomologyClass) -> Vec<BigInt> {
    c.coeffs.iter().map(|&x| BigInt::from(x)).collect()
}

/// {C : C·L ≡ 0 mod p} for any p ≥ 1, with its index in H₂.
pub fn complement_lattice(l: &HomologyClass, p: i64) -> Result<Complement, HomologyError> {
    if p < 1 {
        return Err(HomologyError::BadModulus { min: 1, got: p });
    }
    let space = l.space;
    let d = space.dim();
    // functional f_j = L·e_j; kernel of [f | p] projected to the first d coordinates
    let mut row: Vec<BigInt> = (0..d).map(|j| BigInt::from(pair_unchecked(l, &space.basis(j)))).collect();
    row.push(BigInt::from(p));
    let (_, _, v) = smith(&vec![row]);
    let gens: ZMatrix = (1..=d).map(|c| (0..d).map(|r| v[r][c].clone()).collect()).collect();
    let h = hermite_rows(&gens);
    let index = h.iter().enumerate().fold(BigInt::one(), |acc, (i, r)| acc * &r[i]);
    let basis = h
        .iter()
        .map(|r| HomologyClass::new(space, r.iter().map(|x| x.to_i64().expect("small lattice entries")).collect()))
        .collect();
    Ok(Complement { basis, index: index.to_i64().expect("index fits") })
}

/// The complement of a mod-p class; its index must be p.
pub fn mod_complement(l: &ModClass) -> Result<Complement, HomologyError> {
    let c = complement_lattice(&l.lift(), l.p)?;
    if c.index != l.p {
        return Err(HomologyError::ComplementIndexMismatch { expected: l.p, got: c.index });
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoftObstruction {
    pub p: i64,
    pub q: i64,
    pub square_residue: i64,
    pub c1_residue: i64,
    pub square_ok: bool,
    pub c1_ok: bool,
    /// Pontryagin square mod 4 of a lift, only for p = 2.
    pub audin_residue: Option<i64>,
    pub holds: bool,
}

pub fn soft_obstruction(l: &ModClass, q: i64) -> SoftObstruction {
    let lift = l.lift();
    let p = l.p;
    let square_residue = lift.square().mod_floor(&p);
    let c1_residue = c1(&lift).mod_floor(&p);
    let square_ok = square_residue == (-1i64).mod_floor(&p);
    let c1_ok = c1_residue == q.mod_floor(&p);
    let audin_residue = (p == 2).then(|| lift.square().mod_floor(&4));
    let holds = square_ok && c1_ok && audin_residue.map_or(true, |r| r == 1);
    SoftObstruction { p, q, square_residue, c1_residue, square_ok, c1_ok, audin_residue, holds }
}

/// Brute force over (ℤ/p)^dim. Practical only for rank 2.
pub fn solve_class_mod_p_exhaustive(
    space: IntersectionSpace,
    constraints: &[(HomologyClass, i64)],
    p: i64,
) -> Vec<ModClass> {
    let d = space.dim();
    let total = (p as u128).pow(d as u32);
    let mut out = Vec::new();
    let mut coeffs = vec![0i64; d];
    for _ in 0..total {
        let x = HomologyClass::new(space, coeffs.clone());
        if constraints.iter().all(|(c, r)| (pair_unchecked(&x, c) - r).mod_floor(&p) == 0) {
            out.push(x.reduce(p));
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
    out.sort();
    out
}

/// Solves the pairing system through the Smith form of the constraint matrix.
pub fn solve_class_mod_p_smith(
    space: IntersectionSpace,
    constraints: &[(HomologyClass, i64)],
    p: i64,
) -> Vec<ModClass> {
    let d = space.dim();
    if constraints.is_empty() {
        let a: ZMatrix = vec![vec![BigInt::zero(); d]];
        return solve_mod(&a, &[BigInt::zero()], &BigInt::from(p), 1 << 20)
            .into_iter()
            .map(|x| mk(space, &x, p))
            .collect();
    }
    let a: ZMatrix = constraints
        .iter()
        .map(|(c, _)| (0..d).map(|j| BigInt::from(pair_unchecked(c, &space.basis(j)))).collect())
        .collect();
    let b: Vec<BigInt> = constraints.iter().map(|(_, r)| BigInt::from(*r)).collect();
    let mut out: Vec<ModClass> = solve_mod(&a, &b, &BigInt::from(p), 1 << 20)
        .into_iter()
        .map(|x| mk(space, &x, p))
        .collect();
    out.sort();
    out
}

fn mk(space: IntersectionSpace, x: &[BigInt], p: i64) -> ModClass {
    HomologyClass::new(space, x.iter().map(|v| v.to_i64().unwrap()).collect()).reduce(p)
}

/// All mod-p classes with prescribed pairings. Exhaustive for rank 2 and
/// p ≤ 10⁴, Smith reduction otherwise.
pub fn solve_class_mod_p(
    space: IntersectionSpace,
    constraints: &[(HomologyClass, i64)],
    p: i64,
) -> Vec<ModClass> {
    if space.dim() == 2 && p <= 10_000 {
        solve_class_mod_p_exhaustive(space, constraints, p)
    } else {
        solve_class_mod_p_smith(space, constraints, p)
    }
}
