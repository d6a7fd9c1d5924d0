//! Area positivity: every class in a configuration of symplectic spheres,
//! and every exceptional class of Xₙ, has positive area. A nonnegative
//! combination of such classes summing to zero rules a configuration out.

use std::fmt;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::space;
use crate::exact_core::linalg::nonnegative_solution;
use crate::exact_core::{int, Rational};
use crate::homology::HomologyClass;

/// Exceptional classes of degree at most two: Eᵢ, H−Eᵢ−Eⱼ and 2H minus five Eᵢ.
pub fn low_degree_exceptional(n: usize) -> Vec<HomologyClass> {
    let s = space(n);
    let h = s.basis(0);
    let mut out: Vec<HomologyClass> = (1..=n).map(|i| s.basis(i)).collect();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(h.sub(&s.basis(i)).sub(&s.basis(j)));
        }
    }
    if n >= 5 {
        let mut pick = vec![0usize; 5];
        fn go(n: usize, start: usize, k: usize, pick: &mut Vec<usize>, out: &mut Vec<HomologyClass>) {
            if k == 5 {
                let mut c = vec![0; n + 1];
                c[0] = 2;
                for &i in pick.iter() {
                    c[i] = -1;
                }
                out.push(HomologyClass::new(space(n), c));
                return;
            }
            for i in start..=n {
                pick[k] = i;
                go(n, i + 1, k + 1, pick, out);
            }
        }
        go(n, 1, 0, &mut pick, &mut out);
    }
    out
}

/// Σ weightᵢ·classᵢ = 0 with positive integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaCertificate {
    pub terms: Vec<(i64, HomologyClass)>,
}

impl AreaCertificate {
    pub fn verify(&self) -> bool {
        let Some((_, first)) = self.terms.first() else { return false };
        let sum = self.terms.iter().fold(HomologyClass::zero(first.space), |acc, (w, x)| acc.add(&x.scale(*w)));
        sum.is_zero() && self.terms.iter().all(|(w, _)| *w > 0)
    }
}

impl fmt::Display for AreaCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(w, x)| if *w == 1 { format!("({x})") } else { format!("{w}({x})") }).collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// Looks for a certificate among the given classes and the low-degree
/// exceptional classes. None means some cohomology class is positive on
/// all of them.
pub fn area_obstruction(classes: &[HomologyClass]) -> Option<AreaCertificate> {
    let n = classes.first()?.space.dim() - 1;
    let mut pool: Vec<HomologyClass> = classes.to_vec();
    for e in low_degree_exceptional(n) {
        if !pool.contains(&e) {
            pool.push(e);
        }
    }
    let mut m: Vec<Vec<Rational>> = (0..=n).map(|k| pool.iter().map(|x| int(x.coeffs[k])).collect()).collect();
    m.push(vec![int(1); pool.len()]);
    let mut rhs = vec![Rational::zero(); n + 1];
    rhs.push(int(1));
    let y = nonnegative_solution(&m, &rhs)?;
    let lcm = y.iter().fold(num_bigint::BigInt::from(1), |l, v| l.lcm(v.denom()));
    let terms = y
        .iter()
        .zip(&pool)
        .filter(|(v, _)| !v.is_zero())
        .map(|(v, x)| ((v * Rational::from_integer(lcm.clone())).to_integer().to_i64().expect("small weights"), x.clone()))
        .collect::<Vec<_>>();
    let g = terms.iter().fold(0i64, |g, (w, _)| g.gcd(w));
    let cert = AreaCertificate { terms: terms.into_iter().map(|(w, x)| (w / g, x)).collect() };
    debug_assert!(cert.verify());
    Some(cert)
}
