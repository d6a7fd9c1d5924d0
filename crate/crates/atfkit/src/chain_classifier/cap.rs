use num_traits::{One, Signed, ToPrimitive, Zero};

use super::positivity::{area_obstruction, AreaCertificate};
use super::{c1_of, space, Anchor, ChainError};
use crate::exact_core::linalg::solve_general;
use crate::exact_core::{int, is_integer, Rational};
use crate::homology::{adjunction_genus, HomologyClass};

/// x ↦ x·y as a row over the coefficient vector.
fn pairing_row(y: &HomologyClass) -> Vec<Rational> {
    y.coeffs.iter().enumerate().map(|(i, &c)| int(if i == 0 { c } else { -c })).collect()
}

fn c1_row(n: usize) -> Vec<Rational> {
    (0..=n).map(|i| int(if i == 0 { 3 } else { 1 })).collect()
}

/// p + t·k, the solution set of a rank-n system in n+1 unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Line {
    p: Vec<Rational>,
    k: Vec<Rational>,
}

impl Line {
    fn through(rows: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Option<Line> {
        let (p, kernel) = solve_general(&rows, &rhs)?;
        match kernel.as_slice() {
            [k] => Some(Line { p, k: k.clone() }),
            _ => None,
        }
    }

    fn at(&self, t: &Rational) -> Vec<Rational> {
        self.p.iter().zip(&self.k).map(|(a, b)| a + t * b).collect()
    }
}

fn square_of(v: &[Rational]) -> Rational {
    v.iter().enumerate().fold(Rational::zero(), |acc, (i, x)| if i == 0 { acc + x * x } else { acc - x * x })
}

fn to_class(n: usize, v: &[Rational]) -> Option<HomologyClass> {
    if !v.iter().all(is_integer) {
        return None;
    }
    let c = v.iter().map(|x| x.to_integer().to_i64()).collect::<Option<Vec<i64>>>()?;
    Some(HomologyClass::new(space(n), c))
}

/// Coefficients (α, β, γ) of t ↦ f(t) assuming f is quadratic.
fn quadratic(f: impl Fn(&Rational) -> Rational) -> (Rational, Rational, Rational) {
    let (f0, f1, fm) = (f(&int(0)), f(&int(1)), f(&int(-1)));
    let two = int(2);
    let alpha = (&f1 + &fm) / &two - &f0;
    let beta = (&f1 - &fm) / &two;
    (alpha, beta, f0)
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

fn rational_roots(alpha: &Rational, beta: &Rational, gamma: &Rational) -> Vec<Rational> {
    if alpha.is_zero() {
        return if beta.is_zero() { vec![] } else { vec![-gamma / beta] };
    }
    let disc = beta * beta - int(4) * alpha * gamma;
    let Some(s) = rational_sqrt(&disc) else { return vec![] };
    let two_a = int(2) * alpha;
    let mut r = vec![(-beta + &s) / &two_a, (-beta - &s) / &two_a];
    r.dedup();
    r
}

/// The one-parameter family of classes with the cap's linear data, swept
/// over the integer b = −(coefficient of E_param).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapSearch {
    pub n: usize,
    pub param: usize,
    /// Integer roots of the square condition lie in [−window, window].
    pub window: i64,
    pub solutions: Vec<(i64, HomologyClass)>,
    line: Line,
}

impl CapSearch {
    fn t_of(&self, b: i64) -> Rational {
        (int(-b) - &self.line.p[self.param]) / &self.line.k[self.param]
    }

    /// The class on the family at parameter b, possibly fractional.
    pub fn at(&self, b: i64) -> Vec<Rational> {
        self.line.at(&self.t_of(b))
    }

    /// (−9x², 9(n+2)): both sides of the square condition scaled by 9.
    pub fn residual(&self, b: i64) -> (Rational, Rational) {
        (int(-9) * square_of(&self.at(b)), int(9 * (self.n as i64 + 2)))
    }
}

/// Scans the family of classes x with x·S₁ = 1, x·Sᵢ = 0 for i ≥ 2, x·D = 0
/// and c₁(x) = chern for square −(n+2). The window is the Cauchy bound of
/// the quadratic in b, widened whenever a solution sits on its edge.
pub fn cap_search(d: &HomologyClass, tail: &[HomologyClass], chern: i64) -> Result<CapSearch, ChainError> {
    Anchor::identify(d)?;
    let n = d.space.dim() - 1;
    let mut rows: Vec<Vec<Rational>> = tail.iter().map(pairing_row).collect();
    let mut rhs: Vec<Rational> = (0..tail.len()).map(|i| int(i64::from(i == 0))).collect();
    rows.push(pairing_row(d));
    rhs.push(int(0));
    rows.push(c1_row(n));
    rhs.push(int(chern));
    let line = Line::through(rows, rhs).ok_or(ChainError::CapFailure(0))?;
    let param = if n >= 4 && !line.k[2].is_zero() { 2 } else { (1..=n).find(|&j| !line.k[j].is_zero()).ok_or(ChainError::CapFailure(0))? };
    let mut search = CapSearch { n, param, window: 0, solutions: Vec::new(), line };
    let target = int(-(n as i64 + 2));
    let probe = search.clone();
    let (alpha, beta, gamma) = quadratic(|b| {
        let t = (-b - &probe.line.p[param]) / &probe.line.k[param];
        square_of(&probe.line.at(&t)) - &target
    });
    let mut window = if !alpha.is_zero() {
        let m = if beta.abs() > gamma.abs() { beta.abs() } else { gamma.abs() };
        (Rational::one() + m / alpha.abs()).floor().to_integer().to_i64().unwrap_or(i64::MAX / 4)
    } else if !beta.is_zero() {
        (gamma / beta).abs().ceil().to_integer().to_i64().unwrap_or(i64::MAX / 4)
    } else {
        return Err(ChainError::CapFailure(if gamma.is_zero() { usize::MAX } else { 0 }));
    };
    loop {
        search.solutions = (-window..=window)
            .filter_map(|b| {
                let v = search.at(b);
                (square_of(&v) == target).then(|| to_class(n, &v)).flatten().map(|c| (b, c))
            })
            .collect();
        if search.solutions.iter().any(|(b, _)| b.abs() == window) {
            window *= 2;
            continue;
        }
        search.window = window;
        return Ok(search);
    }
}

/// Every cap with c₁ = −n, each with an area certificate when the chain
/// it closes up cannot consist of symplectic spheres.
pub fn cap_candidates(d: &HomologyClass, tail: &[HomologyClass]) -> Result<Vec<(HomologyClass, Option<AreaCertificate>)>, ChainError> {
    let n = d.space.dim() - 1;
    Ok(cap_search(d, tail, -(n as i64))?
        .solutions
        .into_iter()
        .map(|(_, cap)| {
            let mut chain = vec![cap.clone()];
            chain.extend(tail.iter().cloned());
            let cert = area_obstruction(&chain);
            (cap, cert)
        })
        .collect())
}

/// The unique unobstructed cap S₀ over a tail.
pub fn solve_cap(d: &HomologyClass, tail: &[HomologyClass]) -> Result<HomologyClass, ChainError> {
    let mut s: Vec<HomologyClass> = cap_candidates(d, tail)?.into_iter().filter(|c| c.1.is_none()).map(|c| c.0).collect();
    match s.len() {
        1 => Ok(s.remove(0)),
        k => Err(ChainError::CapFailure(k)),
    }
}

/// Classes orthogonal to the whole chain with square and pairing against D
/// those of the other companion; with `require_genus_zero` also c₁ = x² + 2.
pub fn companion_candidates(d: &HomologyClass, chain: &[HomologyClass], require_genus_zero: bool) -> Result<Vec<HomologyClass>, ChainError> {
    let anchor = Anchor::identify(d)?;
    let n = d.space.dim() - 1;
    let want_sq = match anchor {
        Anchor::D2 => n as i64 + 1,
        Anchor::D1 => 4,
    };
    let mut rows: Vec<Vec<Rational>> = chain.iter().map(pairing_row).collect();
    let mut rhs = vec![int(0); chain.len()];
    rows.push(pairing_row(d));
    rhs.push(int(n as i64 + 2));
    let line = Line::through(rows, rhs).ok_or(ChainError::CapFailure(0))?;
    let (alpha, beta, gamma) = quadratic(|t| square_of(&line.at(t)) - int(want_sq));
    let mut out: Vec<HomologyClass> = rational_roots(&alpha, &beta, &gamma)
        .iter()
        .filter_map(|t| to_class(n, &line.at(t)))
        .filter(|x| !require_genus_zero || (c1_of(x) == want_sq + 2 && adjunction_genus(x) == Ok(0)))
        .collect();
    out.sort();
    Ok(out)
}

/// The other companion, required to be unique among the candidates that
/// leave the whole configuration unobstructed.
pub fn solve_companion(d: &HomologyClass, chain: &[HomologyClass]) -> Result<HomologyClass, ChainError> {
    let mut c: Vec<HomologyClass> = companion_candidates(d, chain, true)?
        .into_iter()
        .filter(|x| {
            let mut all = chain.to_vec();
            all.push(d.clone());
            all.push(x.clone());
            area_obstruction(&all).is_none()
        })
        .collect();
    match c.len() {
        1 => Ok(c.remove(0)),
        0 => Err(ChainError::CapFailure(0)),
        _ => Err(ChainError::NonUnique(c.iter().map(|x| x.to_string()).collect())),
    }
}
