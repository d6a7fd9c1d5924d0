//! Step-by-step replay of the hand row reduction that isolates μ_{n−1}, μ_n.

use num_traits::Zero;

use super::{basis_matrix, PeriodError};
use crate::exact_core::{int, Rational};

/// A row over (h, μ₁..μₙ) together with the combination of the original
/// areas (c₀..c_{n−2}, d₁, d₂) it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedRow {
    pub label: String,
    pub periods: Vec<Rational>,
    pub areas: Vec<Rational>,
}

impl TrackedRow {
    fn combine(label: String, terms: &[(i64, &TrackedRow)]) -> TrackedRow {
        let len = terms[0].1.periods.len();
        let mut periods = vec![Rational::zero(); len];
        let mut areas = vec![Rational::zero(); len];
        for (k, r) in terms {
            for i in 0..len {
                periods[i] += int(*k) * &r.periods[i];
                areas[i] += int(*k) * &r.areas[i];
            }
        }
        TrackedRow { label, periods, areas }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReplay {
    pub n: usize,
    /// c′₀..c′_{n−2}
    pub c_prime: Vec<TrackedRow>,
    pub d1_prime: TrackedRow,
    pub d2_prime: TrackedRow,
}

impl ReductionReplay {
    /// d′₁ = (n+1)μ_{n−1} + (n+2)μ_n and d′₂ = (n+2)μ_{n−1} + 4μ_n.
    pub fn final_rows_match(&self) -> bool {
        let n = self.n;
        let target = |a: i64, b: i64| {
            let mut v = vec![Rational::zero(); n + 1];
            v[n - 1] = int(a);
            v[n] = int(b);
            v
        };
        let ni = n as i64;
        self.d1_prime.periods == target(ni + 1, ni + 2) && self.d2_prime.periods == target(ni + 2, 4)
    }

    /// (μ_{n−1}, μ_n) as combinations of (c₀..c_{n−2}, d₁, d₂).
    pub fn mu_expressions(&self) -> (Vec<Rational>, Vec<Rational>) {
        let n = self.n as i64;
        let inv = Rational::new(1.into(), (n * n).into());
        let (a, b) = (&self.d1_prime.areas, &self.d2_prime.areas);
        let mu_n1 = a.iter().zip(b).map(|(x, y)| (int(-4) * x + int(n + 2) * y) * &inv).collect();
        let mu_n = a.iter().zip(b).map(|(x, y)| (int(n + 2) * x - int(n + 1) * y) * &inv).collect();
        (mu_n1, mu_n)
    }
}

/// Replays the substitutions. The c′₀ sum runs over the telescoped chain rows
/// c′₂..c′_{n−3}; for n = 3 there is no chain and those terms are empty.
pub fn replay_reduction(n: usize) -> Result<ReductionReplay, PeriodError> {
    let m = basis_matrix(n)?;
    let rows: Vec<TrackedRow> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut areas = vec![Rational::zero(); n + 1];
            areas[i] = int(1);
            let label = match i {
                _ if i == n - 1 => "d1".to_string(),
                _ if i == n => "d2".to_string(),
                _ => format!("c{i}"),
            };
            TrackedRow { label, periods: r.iter().map(|&x| int(x)).collect(), areas }
        })
        .collect();
    let c = |i: usize| &rows[i];
    // chain rows c′₁..c′_{n−3}, built from the top down
    let mut chain: Vec<Option<TrackedRow>> = vec![None; n - 1];
    for i in (1..=n.saturating_sub(3)).rev() {
        let row = match chain.get(i + 1).and_then(|r| r.as_ref()) {
            Some(next) if i < n - 3 => TrackedRow::combine(format!("c'{i}"), &[(1, c(i)), (1, next)]),
            _ => TrackedRow::combine(format!("c'{i}"), &[(1, c(i))]),
        };
        chain[i] = Some(row);
    }
    let chain_rows: Vec<&TrackedRow> = (2..=n.saturating_sub(3)).filter_map(|i| chain[i].as_ref()).collect();
    let mut terms: Vec<(i64, &TrackedRow)> = vec![(1, c(0)), (2, c(n - 2))];
    terms.extend(chain_rows.iter().map(|r| (-1, *r)));
    let c0p = TrackedRow::combine("c'0".into(), &terms);
    let clast = TrackedRow::combine(format!("c'{}", n - 2), &[(1, c(n - 2)), (1, &c0p)]);
    let ni = n as i64;
    let c1p = chain[1].as_ref();

    let mut t1: Vec<(i64, &TrackedRow)> = vec![(1, &rows[n - 1]), (ni - 1, &c0p), (-ni, &clast)];
    t1.extend(chain_rows.iter().map(|r| (-1, *r)));
    let mut t2: Vec<(i64, &TrackedRow)> = vec![(1, &rows[n]), (2, &c0p), (-3, &clast)];
    if let Some(r) = c1p {
        t1.push((-(ni + 2), r));
        t2.push((-(ni + 2), r));
    }
    let d1p = TrackedRow::combine("d'1".into(), &t1);
    let d2p = TrackedRow::combine("d'2".into(), &t2);
    let mut c_prime = vec![c0p];
    c_prime.extend((1..=n.saturating_sub(3)).filter_map(|i| chain[i].clone()));
    c_prime.push(clast);
    Ok(ReductionReplay { n, c_prime, d1_prime: d1p, d2_prime: d2p })
}
