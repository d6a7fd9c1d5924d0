use num_traits::Signed;
use serde::Serialize;

use super::PeriodError;
use crate::exact_core::{rat, serde_rat, Rational, Scalar};

/// Periods (h̃, μ̃₁, μ̃₂) of X₂ after rationally blowing up an RP² in (X₁, h, μ)
/// with a −4 sphere of area c.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rp2Blowup {
    #[serde(with = "serde_rat")]
    pub h: Rational,
    #[serde(with = "serde_rat")]
    pub mu1: Rational,
    #[serde(with = "serde_rat")]
    pub mu2: Rational,
}

pub fn rp2_formulas<T: Scalar>(h: &T, mu: &T, c: &T) -> (T, T, T) {
    let ht = h.scale(&rat(3, 2)) - mu.clone() + c.scale(&rat(1, 4));
    let m1 = h.clone() - mu.clone() + c.scale(&rat(1, 2));
    let m2 = h.scale(&rat(1, 2)) - mu.clone() - c.scale(&rat(1, 4));
    (ht, m1, m2)
}

pub fn rp2_blowup(h: &Rational, mu: &Rational, c: &Rational) -> Result<Rp2Blowup, PeriodError> {
    if !(mu.is_positive() && mu < h) {
        return Err(PeriodError::Precondition("need 0 < mu < h".into()));
    }
    if !c.is_positive() {
        return Err(PeriodError::Precondition("need c > 0".into()));
    }
    let (h, mu1, mu2) = rp2_formulas(h, mu, c);
    Ok(Rp2Blowup { h, mu1, mu2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::{int, Poly};

    #[test]
    fn example() {
        let r = rp2_blowup(&int(3), &int(1), &rat(1, 2)).unwrap();
        assert_eq!((r.h, r.mu1, r.mu2), (rat(29, 8), rat(9, 4), rat(3, 8)));
        assert!(rp2_blowup(&int(1), &int(1), &int(1)).is_err());
    }

    #[test]
    fn defining_system_and_volume_symbolically() {
        let (h, mu, c) = (Poly::var(0), Poly::var(1), Poly::var(2));
        let (ht, m1, m2) = rp2_formulas(&h, &mu, &c);
        let two = Poly::from_i64(2);
        let three = Poly::from_i64(3);
        assert_eq!(two.clone() * h.clone() - mu.clone(), two.clone() * ht.clone() - m1.clone());
        assert_eq!(two.clone() * h.clone(), three * ht.clone() - two.clone() * m1.clone() - m2.clone());
        assert_eq!(c.clone(), two * m1.clone() - ht.clone() - m2.clone());
        // the −4 sphere has self-intersection −4, so its area enters the volume as c²/4
        let lhs = ht.clone() * ht - m1.clone() * m1 - m2.clone() * m2;
        let rhs = h.clone() * h - mu.clone() * mu - c.clone() * c.scale(&rat(1, 4));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn positivity_of_last_exceptional_class() {
        for (h, mu, c) in [(4, 1, 1), (4, 2, 1), (10, 4, 3), (10, 5, 1)] {
            let r = rp2_blowup(&int(h), &int(mu), &int(c)).unwrap();
            let expected = int(mu) + rat(c, 4) < rat(h, 2);
            assert_eq!(r.mu2.is_positive(), expected, "h={h} mu={mu} c={c}");
        }
    }
}
