use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{binary, class_of_labels, root_labels, space, ternary, Anchor, ChainError};
use crate::homology::{dehn_twist, HomologyClass};

/// One move of a normalization transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Reflection in a ternary class.
    Twist { about: HomologyClass },
    /// Exchange of Eᵢ and Eⱼ, the reflection in Eᵢ − Eⱼ.
    Relabel { i: usize, j: usize },
}

impl Step {
    pub fn root(&self, n: usize) -> HomologyClass {
        match self {
            Step::Twist { about } => about.clone(),
            Step::Relabel { i, j } => binary(n, *i, *j),
        }
    }

    pub fn apply(&self, x: &HomologyClass) -> HomologyClass {
        match self {
            Step::Twist { about } => dehn_twist(x, about).expect("twist classes are (-2)-classes"),
            Step::Relabel { i, j } => {
                let mut y = x.clone();
                y.coeffs.swap(*i, *j);
                y
            }
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Twist { about } => write!(f, "twist about {about}"),
            Step::Relabel { i, j } => write!(f, "swap E{i} and E{j}"),
        }
    }
}

impl Serialize for Step {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Step", 2)?;
        match self {
            Step::Twist { about } => {
                st.serialize_field("op", "twist")?;
                st.serialize_field("about", &about.to_string())?;
            }
            Step::Relabel { i, j } => {
                st.serialize_field("op", "relabel")?;
                st.serialize_field("swap", &[format!("E{i}"), format!("E{j}")])?;
            }
        }
        st.end()
    }
}

/// Which of the two orbits of tails a chain falls in. The negative orbit is
/// the image of the normal form under x ↦ −x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orbit {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedChain {
    pub tail: Vec<HomologyClass>,
    pub transcript: Vec<Step>,
    pub orbit: Orbit,
}

/// S₁ = Eₙ₋₂ − Eₙ₋₁, …, Sₙ₋₃ = E₂ − E₃, Sₙ₋₂ = H − E₁ − E₂ − Eₙ.
pub fn normal_tail(n: usize) -> Vec<HomologyClass> {
    let mut t: Vec<HomologyClass> = (1..=n - 3).map(|i| binary(n, n - 1 - i, n - i)).collect();
    t.push(ternary(n, 2, true));
    t
}

/// Reads a tail as f_{σ₀}, …, f_{σₘ}: positive when Sᵢ = f_{σᵢ} − f_{σᵢ₋₁},
/// negative when Sᵢ = f_{σᵢ₋₁} − f_{σᵢ}.
fn ordering(tail: &[HomologyClass]) -> Result<(Vec<usize>, Orbit), ChainError> {
    let labels = tail
        .iter()
        .map(|x| root_labels(x).ok_or_else(|| ChainError::OutsideFamily(format!("{x} is neither binary nor ternary"))))
        .collect::<Result<Vec<_>, _>>()?;
    let m = labels.len();
    if (1..m).all(|i| labels[i - 1].0 == labels[i].1) {
        let mut s = vec![labels[0].1];
        s.extend(labels.iter().map(|l| l.0));
        return Ok((s, Orbit::Positive));
    }
    if (1..m).all(|i| labels[i - 1].1 == labels[i].0) {
        let mut s: Vec<usize> = labels.iter().map(|l| l.0).collect();
        s.push(labels[m - 1].1);
        return Ok((s, Orbit::Negative));
    }
    Err(ChainError::OutsideFamily("consecutive classes share no index".into()))
}

fn swap_labels(s: &mut [usize], a: usize, b: usize) {
    for v in s.iter_mut() {
        if *v == a {
            *v = b;
        } else if *v == b {
            *v = a;
        }
    }
}

fn tail_of(n: usize, s: &[usize], orbit: Orbit) -> Vec<HomologyClass> {
    (1..s.len())
        .map(|i| match orbit {
            Orbit::Positive => class_of_labels(n, (s[i], s[i - 1])),
            Orbit::Negative => class_of_labels(n, (s[i - 1], s[i])),
        })
        .collect()
}

/// Moves the ternary index to the end with one twist, then sorts the rest
/// by relabelings. Every step is checked to fix D and the chain is rebuilt
/// from the actual reflections.
pub fn reduce_chain(tail: &[HomologyClass], d: &HomologyClass) -> Result<NormalizedChain, ChainError> {
    Anchor::identify(d)?;
    let n = d.space.dim() - 1;
    if tail.len() != n - 2 || tail.iter().any(|x| x.space != space(n)) {
        return Err(ChainError::OutsideFamily(format!("expected {} classes in X{n}", n - 2)));
    }
    let (mut s, orbit) = ordering(tail)?;
    let m = s.len() - 1;
    let target: Vec<usize> = (2..n).rev().chain([0]).collect();
    let mut transcript = Vec::new();
    if s[m] != 0 {
        transcript.push(Step::Twist { about: ternary(n, s[m], true) });
        let x = s[m];
        swap_labels(&mut s, 0, x);
    }
    for pos in 0..m {
        if s[pos] != target[pos] {
            let (a, b) = (s[pos], target[pos]);
            transcript.push(Step::Relabel { i: a.min(b), j: a.max(b) });
            swap_labels(&mut s, a, b);
        }
    }
    let mut cur = tail.to_vec();
    for step in &transcript {
        if step.apply(d) != *d {
            return Err(ChainError::OutsideFamily(format!("{step} moves the anchor")));
        }
        cur = cur.iter().map(|x| step.apply(x)).collect();
    }
    if cur != tail_of(n, &s, orbit) {
        return Err(ChainError::OutsideFamily("reflections disagree with the index bookkeeping".into()));
    }
    Ok(NormalizedChain { tail: cur, transcript, orbit })
}

/// As [`reduce_chain`], but only tails that reach the normal form itself.
pub fn normalize_chain(tail: &[HomologyClass], d: &HomologyClass) -> Result<NormalizedChain, ChainError> {
    let r = reduce_chain(tail, d)?;
    if r.orbit == Orbit::Negative {
        return Err(ChainError::OutsideFamily("tail lies in the orbit of the negated normal form".into()));
    }
    Ok(r)
}

pub fn replay(tail: &[HomologyClass], transcript: &[Step]) -> Vec<HomologyClass> {
    transcript.iter().fold(tail.to_vec(), |cur, step| cur.iter().map(|x| step.apply(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate_chains, ternary_count};
    use super::*;

    fn x(n: usize, s: &str) -> HomologyClass {
        HomologyClass::parse(space(n), s).unwrap()
    }

    #[test]
    fn normal_tails() {
        assert_eq!(normal_tail(3), vec![x(3, "H-E1-E2-E3")]);
        assert_eq!(normal_tail(5), vec![x(5, "E3-E4"), x(5, "E2-E3"), x(5, "H-E1-E2-E5")]);
        let d = Anchor::D2.class(5);
        let r = normalize_chain(&normal_tail(5), &d).unwrap();
        assert!(r.transcript.is_empty());
    }

    #[test]
    fn ternary_first() {
        let d = Anchor::D2.class(5);
        let tail = vec![x(5, "-H+E1+E2+E5"), x(5, "E3-E2"), x(5, "E4-E3")];
        let r = normalize_chain(&tail, &d).unwrap();
        assert_eq!(r.tail, normal_tail(5));
        assert_eq!(r.transcript[0], Step::Twist { about: x(5, "H-E1-E4-E5") });
        assert_eq!(replay(&tail, &r.transcript), r.tail);
    }

    #[test]
    fn adjacent_ternary_pair() {
        let d = Anchor::D2.class(5);
        let tail = vec![x(5, "E4-E3"), x(5, "H-E1-E4-E5"), x(5, "-H+E1+E2+E5")];
        assert_eq!(ternary_count(&tail), 2);
        let r = normalize_chain(&tail, &d).unwrap();
        // reflection in the last class first
        assert_eq!(r.transcript[0].root(5), x(5, "H-E1-E2-E5"));
        assert_eq!(r.tail, normal_tail(5));
    }

    #[test]
    fn relabel_is_a_reflection() {
        let s = Step::Relabel { i: 2, j: 4 };
        for c in ["3H-2E1-E2", "E4-E3", "H-E1-E4-E5"] {
            assert_eq!(s.apply(&x(5, c)), dehn_twist(&x(5, c), &s.root(5)).unwrap());
        }
    }

    #[test]
    fn every_chain_lands_in_one_of_two_forms() {
        for n in 3..=7 {
            let d = Anchor::D2.class(n);
            let neg: Vec<HomologyClass> = normal_tail(n).iter().map(|c| c.neg()).collect();
            let mut counts = [0usize; 2];
            for tail in enumerate_chains(n, &d).unwrap() {
                let r = reduce_chain(&tail, &d).unwrap();
                match r.orbit {
                    Orbit::Positive => {
                        assert_eq!(r.tail, normal_tail(n));
                        counts[0] += 1;
                    }
                    Orbit::Negative => {
                        assert_eq!(r.tail, neg);
                        assert!(normalize_chain(&tail, &d).is_err());
                        counts[1] += 1;
                    }
                }
                assert_eq!(replay(&tail, &r.transcript), r.tail);
            }
            if n == 3 {
                assert_eq!(counts, [2, 0]);
            } else {
                assert_eq!(counts[0], counts[1], "n={n}");
            }
        }
    }
}
