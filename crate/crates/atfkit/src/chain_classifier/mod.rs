//! Classification of the sphere chain left after blowing up a liminal
//! pinwheel: the (−2)-classes orthogonal to an anchor class, the chains they
//! form, a normal form under anchor-fixing twists, the cap S₀ and the second
//! companion class.

mod cap;
mod classify;
mod normalize;
mod positivity;

pub use cap::{cap_candidates, cap_search, companion_candidates, solve_cap, solve_companion, CapSearch};
pub use positivity::{area_obstruction, low_degree_exceptional, AreaCertificate};
pub use classify::{classify, theorem_configuration, Classification, CompanionPair};
pub use normalize::{normal_tail, normalize_chain, reduce_chain, replay, NormalizedChain, Orbit, Step};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::{adjunction_genus, c1, pair, HomologyClass, HomologyError, IntersectionSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("n must be at least 3, got {0}")]
    BadSize(usize),
    #[error("unsupported anchor {0}")]
    UnsupportedAnchor(String),
    #[error("chain outside classified family: {0}")]
    OutsideFamily(String),
    #[error("cap classification failure: {0} solutions")]
    CapFailure(usize),
    #[error("companion is not unique: {0:?}")]
    NonUnique(Vec<String>),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Which companion class the chain is assumed orthogonal to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    /// nH − (n−1)E₁ − E₂ − … − Eₙ₋₁
    D1,
    /// 3H − 2E₁ − Eₙ
    D2,
}

impl Anchor {
    pub fn class(self, n: usize) -> HomologyClass {
        let mut c = vec![0; n + 1];
        match self {
            Anchor::D1 => {
                c[0] = n as i64;
                c[1] = -(n as i64 - 1);
                for e in c.iter_mut().take(n).skip(2) {
                    *e = -1;
                }
            }
            Anchor::D2 => {
                c[0] = 3;
                c[1] = -2;
                c[n] = -1;
            }
        }
        HomologyClass::new(space(n), c)
    }

    pub fn other(self) -> Anchor {
        match self {
            Anchor::D1 => Anchor::D2,
            Anchor::D2 => Anchor::D1,
        }
    }

    /// Recognises D as one of the two normal forms.
    pub fn identify(d: &HomologyClass) -> Result<Anchor, ChainError> {
        let unsupported = || ChainError::UnsupportedAnchor(d.to_string());
        let n = match d.space {
            IntersectionSpace::Blowup(n) if n >= 3 => n,
            _ => return Err(unsupported()),
        };
        [Anchor::D1, Anchor::D2].into_iter().find(|a| a.class(n) == *d).ok_or_else(unsupported)
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Anchor::D1 => "d1",
            Anchor::D2 => "d2",
        })
    }
}

impl FromStr for Anchor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "d1" => Ok(Anchor::D1),
            "d2" => Ok(Anchor::D2),
            _ => Err(format!("anchor must be d1 or d2, got {s:?}")),
        }
    }
}

pub fn space(n: usize) -> IntersectionSpace {
    IntersectionSpace::Blowup(n)
}

/// ±(H − E₁ − Eⱼ − Eₙ).
pub fn ternary(n: usize, j: usize, positive: bool) -> HomologyClass {
    let mut c = vec![0; n + 1];
    c[0] = 1;
    c[1] = -1;
    c[j] -= 1;
    c[n] -= 1;
    let t = HomologyClass::new(space(n), c);
    if positive { t } else { t.neg() }
}

/// Eⱼ − Eᵣ.
pub fn binary(n: usize, j: usize, r: usize) -> HomologyClass {
    let s = space(n);
    s.basis(j).sub(&s.basis(r))
}

/// The cap together with the (−2)-tail, S₀ first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainConfig {
    pub n: usize,
    pub classes: Vec<HomologyClass>,
}

impl ChainConfig {
    pub fn cap(&self) -> &HomologyClass {
        &self.classes[0]
    }

    pub fn tail(&self) -> &[HomologyClass] {
        &self.classes[1..]
    }

    /// Checks squares, linear adjacency and genus zero.
    pub fn check(&self) -> Result<(), String> {
        let n = self.n;
        if self.classes.len() != n - 1 {
            return Err(format!("expected {} classes, got {}", n - 1, self.classes.len()));
        }
        for (i, x) in self.classes.iter().enumerate() {
            let want = if i == 0 { -(n as i64 + 2) } else { -2 };
            if x.square() != want {
                return Err(format!("S{i} = {x} has square {}, expected {want}", x.square()));
            }
            if adjunction_genus(x).map_err(|e| e.to_string())? != 0 {
                return Err(format!("S{i} = {x} has positive genus"));
            }
            for (j, y) in self.classes.iter().enumerate().skip(i + 1) {
                let p = pair(x, y).map_err(|e| e.to_string())?;
                let want = i64::from(j == i + 1);
                if p != want {
                    return Err(format!("S{i}·S{j} = {p}, expected {want}"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ChainConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes.iter().enumerate().map(|(i, x)| format!("S{i} = {x}")).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    Binary,
    Ternary,
}

/// The genus-zero (−2)-classes orthogonal to an anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minus2Classes {
    pub binary: Vec<HomologyClass>,
    pub ternary: Vec<HomologyClass>,
    /// |Eⱼ coefficient| bounds derived from the quadratic form, j = 1..n.
    pub bounds: Vec<i64>,
    /// The bounds the final search ran with.
    pub window: Vec<i64>,
}

impl Minus2Classes {
    pub fn all(&self) -> Vec<HomologyClass> {
        let mut v: Vec<HomologyClass> = self.binary.iter().chain(&self.ternary).cloned().collect();
        v.sort();
        v
    }
}

/// Labels (a, b) with the root read as f_a − f_b: Eⱼ−Eᵣ is (j, r), the
/// positive ternary class through Eⱼ is (0, j) and its negative is (j, 0).
pub(crate) fn root_labels(x: &HomologyClass) -> Option<(usize, usize)> {
    let n = x.space.dim() - 1;
    let c = &x.coeffs;
    let middle = 2..n;
    match c[0] {
        0 => {
            let plus: Vec<usize> = (1..=n).filter(|&i| c[i] == 1).collect();
            let minus: Vec<usize> = (1..=n).filter(|&i| c[i] == -1).collect();
            let others = (1..=n).filter(|&i| c[i] != 0).count();
            match (plus.as_slice(), minus.as_slice()) {
                ([j], [r]) if others == 2 && middle.contains(j) && middle.contains(r) => Some((*j, *r)),
                _ => None,
            }
        }
        1 | -1 => {
            let positive = c[0] == 1;
            let j = middle.clone().find(|&j| *x == ternary(n, j, positive))?;
            Some(if positive { (0, j) } else { (j, 0) })
        }
        _ => None,
    }
}

pub(crate) fn class_of_labels(n: usize, (a, b): (usize, usize)) -> HomologyClass {
    match (a, b) {
        (0, j) => ternary(n, j, true),
        (j, 0) => ternary(n, j, false),
        (j, r) => binary(n, j, r),
    }
}

fn isqrt_floor(v: i64) -> i64 {
    let mut t = (v as f64).sqrt() as i64;
    while t * t > v {
        t -= 1;
    }
    while (t + 1) * (t + 1) <= v {
        t += 1;
    }
    t
}

/// Bound on each Eⱼ coefficient of a (−2)-class orthogonal to D. Eliminating
/// the H coefficient leaves the form Σbⱼ² − (δ·b)²/d² = 2, whose inverse has
/// diagonal 1 + δⱼ²/D², so bⱼ² ≤ 2(1 + δⱼ²/D²).
pub fn coefficient_bounds(d: &HomologyClass) -> Result<Vec<i64>, ChainError> {
    let dsq = d.square();
    if dsq <= 0 || d.coeffs[0] == 0 {
        return Err(ChainError::UnsupportedAnchor(d.to_string()));
    }
    Ok(d.coeffs[1..].iter().map(|&delta| isqrt_floor(2 * (dsq + delta * delta) / dsq)).collect())
}

fn search_box(d: &HomologyClass, window: &[i64]) -> Vec<HomologyClass> {
    let n = window.len();
    let h = d.coeffs[0];
    let mut found = Vec::new();
    let mut e: Vec<i64> = window.iter().map(|w| -w).collect();
    loop {
        let s: i64 = e.iter().zip(&d.coeffs[1..]).map(|(x, y)| x * y).sum();
        if s % h == 0 {
            let a = s / h;
            let sq = a * a - e.iter().map(|x| x * x).sum::<i64>();
            let chern = 3 * a + e.iter().sum::<i64>();
            if sq == -2 && chern == 0 {
                let mut c = vec![a];
                c.extend(&e);
                found.push(HomologyClass::new(space(n), c));
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return found;
            }
            if e[i] < window[i] {
                e[i] += 1;
                break;
            }
            e[i] = -window[i];
            i += 1;
        }
    }
}

/// All genus-zero classes x with x² = −2 and x·D = 0, split into binary and
/// ternary classes. Any other shape is reported as an error.
pub fn enumerate_minus2(n: usize, d: &HomologyClass) -> Result<Minus2Classes, ChainError> {
    if n < 3 {
        return Err(ChainError::BadSize(n));
    }
    if d.space != space(n) {
        return Err(ChainError::UnsupportedAnchor(d.to_string()));
    }
    Anchor::identify(d)?;
    let bounds = coefficient_bounds(d)?;
    let mut window = bounds.clone();
    let found = loop {
        let found = search_box(d, &window);
        let on_edge: Vec<usize> =
            (0..n).filter(|&j| window[j] > bounds[j] - 1 && found.iter().any(|x| x.coeffs[j + 1].abs() == window[j])).collect();
        if on_edge.iter().all(|&j| window[j] > bounds[j]) {
            break found;
        }
        for j in on_edge {
            window[j] = window[j].max(bounds[j] + 1);
        }
    };
    let mut binary = Vec::new();
    let mut ternary = Vec::new();
    for x in found {
        match root_labels(&x) {
            Some((a, b)) if a != 0 && b != 0 => binary.push(x),
            Some(_) => ternary.push(x),
            None => return Err(ChainError::OutsideFamily(format!("unexpected (-2)-class {x}"))),
        }
    }
    binary.sort();
    ternary.sort();
    Ok(Minus2Classes { binary, ternary, bounds, window })
}

fn chains_from(roots: &[HomologyClass], len: usize) -> Vec<Vec<HomologyClass>> {
    let k = roots.len();
    let g: Vec<Vec<i64>> = roots.iter().map(|x| roots.iter().map(|y| pair(x, y).expect("same space")).collect()).collect();
    let mut out = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    fn go(g: &[Vec<i64>], k: usize, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if path.len() == len {
            out.push(path.clone());
            return;
        }
        for c in 0..k {
            let fits = match path.split_last() {
                None => true,
                Some((&last, earlier)) => g[last][c] == 1 && earlier.iter().all(|&e| g[e][c] == 0),
            };
            if fits && !path.contains(&c) {
                path.push(c);
                go(g, k, len, path, out);
                path.pop();
            }
        }
    }
    let mut idx = Vec::new();
    go(&g, k, len, &mut path, &mut idx);
    for p in idx {
        out.push(p.into_iter().map(|i| roots[i].clone()).collect());
    }
    out
}

/// Every ordered tail S₁..Sₙ₋₂ of (−2)-classes orthogonal to D with
/// Sᵢ·Sᵢ₊₁ = 1 and all other pairings zero.
pub fn enumerate_chains(n: usize, d: &HomologyClass) -> Result<Vec<Vec<HomologyClass>>, ChainError> {
    let roots = enumerate_minus2(n, d)?.all();
    Ok(chains_from(&roots, n - 2))
}

/// Length of the longest chain made of binary classes only.
pub fn longest_binary_chain(n: usize, d: &HomologyClass) -> Result<usize, ChainError> {
    let binary = enumerate_minus2(n, d)?.binary;
    let mut len = 0;
    while !chains_from(&binary, len + 1).is_empty() {
        len += 1;
    }
    Ok(len)
}

pub fn ternary_count(tail: &[HomologyClass]) -> usize {
    tail.iter().filter(|x| matches!(root_labels(x), Some((0, _)) | Some((_, 0)))).count()
}

pub(crate) fn c1_of(x: &HomologyClass) -> i64 {
    c1(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, s: &str) -> HomologyClass {
        HomologyClass::parse(space(n), s).unwrap()
    }

    #[test]
    fn anchors() {
        assert_eq!(Anchor::D1.class(4), x(4, "4H-3E1-E2-E3"));
        assert_eq!(Anchor::D2.class(4), x(4, "3H-2E1-E4"));
        assert_eq!(Anchor::identify(&x(4, "3H-2E1-E4")).unwrap(), Anchor::D2);
        assert!(Anchor::identify(&x(4, "3H-2E1-E3")).is_err());
        assert_eq!("D1".parse::<Anchor>().unwrap(), Anchor::D1);
    }

    #[test]
    fn n4_classes() {
        let r = enumerate_minus2(4, &Anchor::D2.class(4)).unwrap();
        assert_eq!(r.binary, vec![x(4, "-E2+E3"), x(4, "E2-E3")]);
        assert_eq!(r.ternary.len(), 4);
        for s in ["H-E1-E2-E4", "-H+E1+E2+E4", "H-E1-E3-E4", "-H+E1+E3+E4"] {
            assert!(r.ternary.contains(&x(4, s)), "{s}");
        }
    }

    #[test]
    fn n3_classes() {
        for a in [Anchor::D1, Anchor::D2] {
            let r = enumerate_minus2(3, &a.class(3)).unwrap();
            assert!(r.binary.is_empty());
            assert_eq!(r.ternary, vec![x(3, "-H+E1+E2+E3"), x(3, "H-E1-E2-E3")]);
        }
    }

    #[test]
    fn bounds_come_from_the_form() {
        // against D₂ the scaled form reads 4b₁²+4bₙ²+(b₁−2bₙ)²+9Σbⱼ² = 18
        let form = |b: &[i64]| {
            let n = b.len();
            4 * b[0] * b[0] + 4 * b[n - 1] * b[n - 1] + (b[0] - 2 * b[n - 1]).pow(2) + 9 * b[1..n - 1].iter().map(|v| v * v).sum::<i64>()
        };
        assert_eq!(form(&[1, 1, 1]), 18);
        for n in 3..=8 {
            let d = Anchor::D2.class(n);
            let bounds = coefficient_bounds(&d).unwrap();
            // b₁ = ±2 is allowed by the real bound, then forces bₙ = 1/2
            assert_eq!(bounds[0], 2);
            assert!(bounds[1..].iter().all(|&b| b == 1), "{bounds:?}");
            for r in enumerate_minus2(n, &d).unwrap().all() {
                let b: Vec<i64> = r.coeffs[1..].iter().map(|c| -c).collect();
                assert_eq!(form(&b), 18, "{r}");
                assert!(b.iter().all(|v| v.abs() <= 1));
            }
        }
    }

    #[test]
    fn both_anchors_see_the_same_roots() {
        for n in 3..=7 {
            let a = enumerate_minus2(n, &Anchor::D1.class(n)).unwrap().all();
            let b = enumerate_minus2(n, &Anchor::D2.class(n)).unwrap().all();
            assert_eq!(a, b, "n={n}");
            assert_eq!(a.len(), (n - 1) * (n - 2));
        }
    }

    #[test]
    fn chain_counts() {
        for n in 3..=7 {
            let chains = enumerate_chains(n, &Anchor::D2.class(n)).unwrap();
            let f: usize = (1..n).product();
            assert_eq!(chains.len(), if n == 3 { 2 } else { 2 * f }, "n={n}");
            assert!(chains.iter().all(|c| (1..=2).contains(&ternary_count(c))));
        }
        let chains = enumerate_chains(4, &Anchor::D2.class(4)).unwrap();
        assert!(chains.contains(&vec![x(4, "E2-E3"), x(4, "H-E1-E2-E4")]));
    }

    #[test]
    fn binary_chains_are_short() {
        for n in 3..=8 {
            assert_eq!(longest_binary_chain(n, &Anchor::D2.class(n)).unwrap(), n - 3, "n={n}");
        }
    }

    #[test]
    fn config_check() {
        let (c, _) = theorem_configuration(5);
        c.check().unwrap();
        let mut bad = c.clone();
        bad.classes.swap(1, 2);
        assert!(bad.check().is_err());
    }
}
