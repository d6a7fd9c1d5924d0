use num_traits::Signed;
use serde_json::{json, Value};

use super::{area_of, periods_json, CompactError};
use crate::exact_core::{fmt_rational, int, Poly, Rational, Scalar};
use crate::homology::{liminal_class, pair, HomologyClass, IntersectionSpace, ModClass};
use crate::period_solver::{derive_inequalities, liminal_bounds, BoundsVerdict, TargetPeriods};

/// A standard neighborhood V₋ₘ of a symplectic sphere of square −m, with
/// fibre disc area f and zero-section area s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodSpec {
    pub self_intersection: i64,
    pub f: Rational,
    pub s: Rational,
}

/// The ruled surface obtained by cutting V₋ₘ at its boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactifiedNeighborhood {
    pub periods: TargetPeriods,
    pub zero_section: HomologyClass,
    pub fiber: HomologyClass,
    /// The section added at infinity.
    pub infinity: HomologyClass,
}

/// (a, b) = (s + (j+1)f, f) for m = 2j+2 and (h, μ) = ((j+1)f + s, jf + s)
/// for m = 2j+1.
pub fn neighborhood_periods<T: Scalar>(m: i64, f: &T, s: &T) -> (T, T) {
    if m % 2 == 0 {
        let j = m / 2 - 1;
        (s.clone() + T::from_i64(j + 1) * f.clone(), f.clone())
    } else {
        let j = (m - 1) / 2;
        (T::from_i64(j + 1) * f.clone() + s.clone(), T::from_i64(j) * f.clone() + s.clone())
    }
}

pub fn compactify_neighborhood(spec: &NeighborhoodSpec) -> Result<CompactifiedNeighborhood, CompactError> {
    let m = -spec.self_intersection;
    if m < 2 {
        return Err(CompactError::UnsupportedNeighborhood(format!("self-intersection {} is not ≤ −2", spec.self_intersection)));
    }
    if !spec.f.is_positive() || !spec.s.is_positive() {
        return Err(CompactError::InvalidSizes("f and s must be positive".into()));
    }
    let (f, s) = (&spec.f, &spec.s);
    let (x, y) = neighborhood_periods(m, f, s);
    let out = if m % 2 == 0 {
        let j = m / 2 - 1;
        let sp = IntersectionSpace::S2xS2;
        CompactifiedNeighborhood {
            periods: TargetPeriods::S2xS2 { a: x, b: y },
            zero_section: HomologyClass::new(sp, vec![1, -(j + 1)]),
            fiber: HomologyClass::new(sp, vec![0, 1]),
            infinity: HomologyClass::new(sp, vec![1, j + 1]),
        }
    } else {
        let j = (m - 1) / 2;
        let sp = IntersectionSpace::Blowup(1);
        CompactifiedNeighborhood {
            periods: TargetPeriods::X1 { h: x, mu: y },
            zero_section: HomologyClass::new(sp, vec![-j, j + 1]),
            fiber: HomologyClass::new(sp, vec![1, -1]),
            infinity: HomologyClass::new(sp, vec![j + 1, -j]),
        }
    };
    debug_assert_eq!(area_of(&out.periods, &out.zero_section), *s);
    debug_assert_eq!(area_of(&out.periods, &out.fiber), *f);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KhodorovskiyReport {
    pub n: usize,
    pub neighborhood: NeighborhoodSpec,
    pub compactified: CompactifiedNeighborhood,
    /// Class of a pinwheel inside V₋ₘ: the liminal class, with the factors of
    /// S²×S² exchanged when `swapped`.
    pub pinwheel_class: ModClass,
    pub swapped: bool,
    /// Periods in the orientation where the pinwheel has the liminal class.
    pub oriented: TargetPeriods,
    pub bounds: BoundsVerdict,
    pub violated: Vec<String>,
    pub symplectic_embedding_possible: bool,
}

impl KhodorovskiyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "theorem": "khodorovskiy",
            "n": self.n,
            "neighborhood": {
                "self_intersection": self.neighborhood.self_intersection,
                "f": fmt_rational(&self.neighborhood.f),
                "s": fmt_rational(&self.neighborhood.s),
            },
            "compactification": periods_json(&self.compactified.periods),
            "zero_section": self.compactified.zero_section.to_string(),
            "section_at_infinity": self.compactified.infinity.to_string(),
            "pinwheel_class": self.pinwheel_class.to_string(),
            "factors_swapped": self.swapped,
            "checked": self.bounds.checked,
            "violated": self.violated,
            "symplectic_embedding_possible": self.symplectic_embedding_possible,
        })
    }
}

fn swap(t: &TargetPeriods) -> TargetPeriods {
    match t {
        TargetPeriods::S2xS2 { a, b } => TargetPeriods::S2xS2 { a: b.clone(), b: a.clone() },
        other => other.clone(),
    }
}

/// Compactifies V₋ₘ and tests the liminal bounds for an Lₙ,₁ pinwheel in it.
/// Supported shapes: m = n+1, and m = 4 for odd n.
pub fn khodorovskiy_verdict(n: usize, spec: &NeighborhoodSpec) -> Result<KhodorovskiyReport, CompactError> {
    if n < 2 {
        return Err(CompactError::InvalidSizes(format!("n must be at least 2, got {n}")));
    }
    let ni = n as i64;
    let m = -spec.self_intersection;
    if m != ni + 1 && !(m == 4 && n % 2 == 1) {
        return Err(CompactError::UnsupportedNeighborhood(format!("V_{{-{m}}} for n = {n}; expected V_{{-{}}}{}", ni + 1, if n % 2 == 1 { " or V_{-4}" } else { "" })));
    }
    let c = compactify_neighborhood(spec)?;
    // the pinwheel lies in V₋ₘ, hence misses the section at infinity
    let lim = liminal_class(ni);
    let misses = |l: &ModClass| l.pair_with(&c.infinity) == 0;
    let (pinwheel_class, swapped) = if misses(&lim) {
        (lim, false)
    } else {
        let mut coeffs = lim.coeffs.clone();
        coeffs.swap(0, 1);
        let alt = ModClass::new(lim.space, coeffs, lim.p).expect("modulus at least 2");
        if lim.space != IntersectionSpace::S2xS2 || !misses(&alt) {
            return Err(CompactError::Internal("no liminal class misses the section at infinity".into()));
        }
        (alt, true)
    };
    debug_assert_eq!(pair(&c.zero_section, &c.infinity).ok(), Some(0));
    let oriented = if swapped { swap(&c.periods) } else { c.periods.clone() };
    let bounds = liminal_bounds(n, &oriented)?;
    let violated = violated_bounds(&bounds);
    Ok(KhodorovskiyReport {
        n,
        neighborhood: spec.clone(),
        compactified: c,
        pinwheel_class,
        swapped,
        oriented,
        symplectic_embedding_possible: bounds.holds,
        violated,
        bounds,
    })
}

/// The failing liminal bound, evaluated on the compactified periods as a
/// polynomial in (f, s) = (x0, x1). Every supported shape gives −s.
pub fn obstruction_polynomial(n: usize, self_intersection: i64) -> Result<Poly, CompactError> {
    let spec = NeighborhoodSpec { self_intersection, f: int(1), s: int(1) };
    let r = khodorovskiy_verdict(n, &spec)?;
    let coeffs: Vec<i64> = if n == 2 {
        vec![1, -2]
    } else {
        let set = derive_inequalities(n)?;
        let failing = set
            .inequalities
            .iter()
            .find(|i| i.bound.is_some_and(|b| r.bounds.failing.contains(&b)))
            .ok_or_else(|| CompactError::Internal("no bound fails".into()))?;
        failing.normalized.coeffs.clone()
    };
    let (x, y) = neighborhood_periods(-self_intersection, &Poly::var(0), &Poly::var(1));
    let (x, y) = if r.swapped { (y, x) } else { (x, y) };
    Ok(Poly::from_i64(coeffs[0]) * x + Poly::from_i64(coeffs[1]) * y)
}

fn violated_bounds(v: &BoundsVerdict) -> Vec<String> {
    if v.holds || v.n == 2 {
        return if v.holds { Vec::new() } else { v.checked.clone() };
    }
    let set = derive_inequalities(v.n).expect("n ≥ 3 here");
    set.inequalities
        .iter()
        .filter(|i| i.bound.is_some_and(|b| v.failing.contains(&b)))
        .map(|i| i.text.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::rat;
    use proptest::prelude::*;

    fn nb(m: i64, f: Rational, s: Rational) -> NeighborhoodSpec {
        NeighborhoodSpec { self_intersection: -m, f, s }
    }

    #[test]
    fn n3_in_v4() {
        let r = khodorovskiy_verdict(3, &nb(4, int(1), int(1))).unwrap();
        assert_eq!(r.compactified.periods, TargetPeriods::S2xS2 { a: int(3), b: int(1) });
        assert!(!r.symplectic_embedding_possible);
        assert_eq!(r.violated, vec!["2b > a".to_string()]);
    }

    #[test]
    fn rp2_in_v3() {
        for (f, s) in [(int(1), int(1)), (rat(1, 9), int(5)), (int(7), rat(1, 100))] {
            let r = khodorovskiy_verdict(2, &nb(3, f.clone(), s.clone())).unwrap();
            let TargetPeriods::X1 { h, mu } = &r.compactified.periods else { panic!() };
            assert!(int(2) * mu > *h);
            assert!(!r.symplectic_embedding_possible);
        }
    }

    #[test]
    fn even_n_identity() {
        for k in 1..=10i64 {
            let (f, s) = (rat(3, 7), rat(2, 5));
            let r = khodorovskiy_verdict(2 * k as usize, &nb(2 * k + 1, f.clone(), s.clone())).unwrap();
            let TargetPeriods::X1 { h, mu } = &r.compactified.periods else { panic!() };
            assert_eq!(*mu, int(k) * &f + &s);
            assert_eq!(*h, int(k + 1) * &f + &s);
            assert_eq!(int(k + 1) * mu - int(k) * h, s);
            assert!(!r.symplectic_embedding_possible);
            assert!(!r.swapped);
        }
    }

    #[test]
    fn odd_n_both_shapes() {
        for k in 1..=8i64 {
            let n = 2 * k + 1;
            let r = khodorovskiy_verdict(n as usize, &nb(n + 1, int(2), rat(1, 3))).unwrap();
            assert!(!r.symplectic_embedding_possible, "n={n}");
            assert!(!r.swapped);
            let r = khodorovskiy_verdict(n as usize, &nb(4, int(2), rat(1, 3))).unwrap();
            assert!(!r.symplectic_embedding_possible, "n={n} in V-4");
            // for k ≥ 2 only kA + B misses the section at infinity A + 2B
            assert_eq!(r.swapped, k >= 2);
        }
    }

    #[test]
    fn unsupported_shapes() {
        assert!(matches!(khodorovskiy_verdict(4, &nb(4, int(1), int(1))), Err(CompactError::UnsupportedNeighborhood(_))));
        assert!(matches!(khodorovskiy_verdict(5, &nb(7, int(1), int(1))), Err(CompactError::UnsupportedNeighborhood(_))));
        assert!(matches!(khodorovskiy_verdict(3, &nb(4, int(0), int(1))), Err(CompactError::InvalidSizes(_))));
    }

    #[test]
    fn sections_have_the_right_areas() {
        for m in 2..12 {
            let c = compactify_neighborhood(&nb(m, rat(5, 3), rat(2, 7))).unwrap();
            assert_eq!(c.zero_section.square(), -m);
            assert_eq!(c.infinity.square(), m);
            assert_eq!(area_of(&c.periods, &c.zero_section), rat(2, 7));
            assert_eq!(area_of(&c.periods, &c.fiber), rat(5, 3));
            assert_eq!(pair(&c.zero_section, &c.fiber).unwrap(), 1);
        }
    }

    #[test]
    fn contradictions_reduce_to_s() {
        let minus_s = -Poly::var(1);
        for n in 2..=12usize {
            let ni = n as i64;
            assert_eq!(obstruction_polynomial(n, -(ni + 1)).unwrap(), minus_s, "n={n}");
            if n % 2 == 1 {
                assert_eq!(obstruction_polynomial(n, -4).unwrap(), minus_s, "n={n} in V-4");
            }
        }
    }

    proptest! {
        #[test]
        fn mu_exceeds_kh_over_k_plus_one(k in 1i64..12, fn_ in 1i64..500, fd in 1i64..50, sn in 1i64..500, sd in 1i64..50) {
            let (f, s) = (rat(fn_, fd), rat(sn, sd));
            let c = compactify_neighborhood(&nb(2 * k + 1, f, s)).unwrap();
            let TargetPeriods::X1 { h, mu } = c.periods else { unreachable!() };
            prop_assert!(int(k + 1) * mu > int(k) * h);
        }
    }
}
