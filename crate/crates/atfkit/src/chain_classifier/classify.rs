use serde_json::{json, Value};

use super::cap::{cap_candidates, companion_candidates, solve_cap, solve_companion};
use super::positivity::AreaCertificate;
use super::normalize::{normal_tail, reduce_chain, Orbit, Step};
use super::{enumerate_chains, enumerate_minus2, Anchor, ChainConfig, ChainError};
use crate::homology::{pair, HomologyClass};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompanionPair {
    pub d1: HomologyClass,
    pub d2: HomologyClass,
}

impl CompanionPair {
    pub fn check(&self, chain: &ChainConfig) -> Result<(), String> {
        let n = chain.n as i64;
        let pr = |a: &HomologyClass, b: &HomologyClass| pair(a, b).map_err(|e| e.to_string());
        if self.d1.square() != n + 1 || self.d2.square() != 4 {
            return Err(format!("companion squares {} and {}", self.d1.square(), self.d2.square()));
        }
        if pr(&self.d1, &self.d2)? != n + 2 {
            return Err("companions must pair to n+2".into());
        }
        for s in &chain.classes {
            if pr(s, &self.d1)? != 0 || pr(s, &self.d2)? != 0 {
                return Err(format!("{s} meets a companion"));
            }
        }
        Ok(())
    }
}

/// The configuration the classification should reproduce.
pub fn theorem_configuration(n: usize) -> (ChainConfig, CompanionPair) {
    let mut s0 = vec![0; n + 1];
    s0[0] = -2;
    s0[1] = 3;
    for c in s0.iter_mut().take(n - 1).skip(2) {
        *c = -1;
    }
    let mut classes = vec![HomologyClass::new(super::space(n), s0)];
    classes.extend(normal_tail(n));
    (ChainConfig { n, classes }, CompanionPair { d1: Anchor::D1.class(n), d2: Anchor::D2.class(n) })
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub n: usize,
    pub anchor: Anchor,
    pub binary: usize,
    pub ternary: usize,
    pub bounds: Vec<i64>,
    pub chains: usize,
    pub positive: usize,
    pub negative: usize,
    /// Caps satisfying the homological conditions but ruled out by area,
    /// over the normal tail and over its negation.
    pub rejected_caps: Vec<(Orbit, HomologyClass, AreaCertificate)>,
    /// Unobstructed caps over the negated tail (expected to be none).
    pub negative_caps: usize,
    pub config: ChainConfig,
    pub companions: CompanionPair,
    /// Candidates for the other companion when genus zero is not imposed.
    pub relaxed_companions: Vec<HomologyClass>,
    /// The longest transcript met while normalizing.
    pub sample_transcript: Vec<Step>,
    pub sample_tail: Vec<HomologyClass>,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        let s = |v: &[HomologyClass]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "n": self.n,
            "anchor": self.anchor,
            "minus2_classes": { "binary": self.binary, "ternary": self.ternary, "coefficient_bounds": self.bounds },
            "chains": { "total": self.chains, "positive_orbit": self.positive, "negative_orbit": self.negative },
            "negative_orbit_caps": self.negative_caps,
            "rejected_caps": self.rejected_caps.iter().map(|(o, c, k)| json!({ "orbit": o, "cap": c.to_string(), "area_certificate": k.to_string() })).collect::<Vec<_>>(),
            "S": s(&self.config.classes),
            "D1": self.companions.d1.to_string(),
            "D2": self.companions.d2.to_string(),
            "relaxed_companions": s(&self.relaxed_companions),
            "sample": { "tail": s(&self.sample_tail), "transcript": self.sample_transcript },
        })
    }
}

/// Runs enumeration, normalization of every tail, the cap and the other
/// companion for one anchor.
pub fn classify(n: usize, anchor: Anchor) -> Result<Classification, ChainError> {
    let d = anchor.class(n);
    let roots = enumerate_minus2(n, &d)?;
    let tails = enumerate_chains(n, &d)?;
    let (mut positive, mut negative) = (0, 0);
    let mut sample: Option<(Vec<HomologyClass>, Vec<Step>)> = None;
    for t in &tails {
        let r = reduce_chain(t, &d)?;
        match r.orbit {
            Orbit::Positive => positive += 1,
            Orbit::Negative => negative += 1,
        }
        if r.orbit == Orbit::Positive && sample.as_ref().is_none_or(|s| s.1.len() < r.transcript.len()) {
            sample = Some((t.clone(), r.transcript));
        }
    }
    let tail = normal_tail(n);
    let cap = solve_cap(&d, &tail)?;
    let negated: Vec<HomologyClass> = tail.iter().map(|c| c.neg()).collect();
    let mut rejected_caps = Vec::new();
    let mut negative_caps = 0;
    for (orbit, t) in [(Orbit::Positive, &tail), (Orbit::Negative, &negated)] {
        if orbit == Orbit::Negative && negative == 0 {
            continue;
        }
        for (c, cert) in cap_candidates(&d, t)? {
            match cert {
                Some(cert) => rejected_caps.push((orbit, c, cert)),
                None if orbit == Orbit::Negative => negative_caps += 1,
                None => {}
            }
        }
    }
    let mut classes = vec![cap];
    classes.extend(tail);
    let config = ChainConfig { n, classes };
    config.check().map_err(ChainError::OutsideFamily)?;
    let other = solve_companion(&d, &config.classes)?;
    let companions = match anchor {
        Anchor::D1 => CompanionPair { d1: d.clone(), d2: other },
        Anchor::D2 => CompanionPair { d1: other, d2: d.clone() },
    };
    companions.check(&config).map_err(ChainError::OutsideFamily)?;
    let relaxed_companions = companion_candidates(&d, &config.classes, false)?;
    let (sample_tail, sample_transcript) = sample.unwrap_or_default();
    Ok(Classification {
        n,
        anchor,
        binary: roots.binary.len(),
        ternary: roots.ternary.len(),
        bounds: roots.bounds,
        chains: tails.len(),
        positive,
        negative,
        rejected_caps,
        negative_caps,
        config,
        companions,
        relaxed_companions,
        sample_transcript,
        sample_tail,
    })
}
