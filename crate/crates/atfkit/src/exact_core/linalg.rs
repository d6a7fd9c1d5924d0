//! Dense exact linear algebra: rational elimination and integer normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

pub type QMatrix = Vec<Vec<Rational>>;
pub type ZMatrix = Vec<Vec<BigInt>>;

pub fn mat_vec(m: &QMatrix, v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

pub fn to_q(m: &[Vec<i64>]) -> QMatrix {
    m.iter().map(|r| r.iter().map(|&x| super::int(x)).collect()).collect()
}

/// Reduced row echelon form of [m | rhs columns]; returns pivot columns.
fn rref(a: &mut QMatrix, cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (src, dst) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d = &*d - &f * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMatrix) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.clone();
    rref(&mut a, cols).len()
}

pub fn det(m: &QMatrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = &d * &a[c][c];
        let pivot = a[c][c].clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..n {
                let s = &f * &a[c][j];
                a[i][j] = &a[i][j] - s;
            }
        }
    }
    d
}

/// Unique solution of m·x = b, or None when m is singular or the system is inconsistent.
pub fn solve(m: &QMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let sol = solve_general(m, b)?;
    if sol.1.is_empty() { Some(sol.0) } else { None }
}

/// Particular solution plus a nullspace basis of m·x = b.
pub fn solve_general(m: &QMatrix, b: &[Rational]) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: QMatrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut a, cols);
    for row in a.iter().skip(pivots.len()) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -a[r][f].clone();
            }
            v
        })
        .collect();
    Some((x, kernel))
}

pub fn inverse(m: &QMatrix) -> Option<QMatrix> {
    let n = m.len();
    let mut a: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut a, n);
    if pivots.len() < n {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Extended gcd with g ≥ 0 and s·a + t·b = g.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row-style Hermite normal form of the lattice spanned by the rows; zero rows dropped.
pub fn hermite_rows(gens: &ZMatrix) -> ZMatrix {
    let mut a = gens.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                for j in 0..cols {
                    let s = &q * &a[r][j];
                    a[i][j] = &a[i][j] - s;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..rows).all(|i| a[i][c].is_zero()) {
            continue;
        }
        if a[r][c].is_negative() {
            for v in a[r].iter_mut() {
                *v = -&*v;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            for j in 0..cols {
                let s = &q * &a[r][j];
                a[i][j] = &a[i][j] - s;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Smith normal form: returns (u, d, v) with u·m·v = d diagonal, u and v unimodular.
pub fn smith(m: &ZMatrix) -> (ZMatrix, ZMatrix, ZMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let ident = |n: usize| -> ZMatrix {
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
    };
    let mut d = m.clone();
    let mut u = ident(rows);
    let mut v = ident(cols);
    let row_op = |a: &mut ZMatrix, i: usize, k: usize, q: &BigInt| {
        // row i -= q * row k
        let src = a[k].clone();
        for (x, s) in a[i].iter_mut().zip(src) {
            *x = &*x - q * s;
        }
    };
    let col_op = |a: &mut ZMatrix, j: usize, k: usize, q: &BigInt| {
        for row in a.iter_mut() {
            let s = row[k].clone();
            row[j] = &row[j] - q * s;
        }
    };
    let swap_cols = |a: &mut ZMatrix, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    };
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero() && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { return (u, d, v) };
            d.swap(t, bi);
            u.swap(t, bi);
            swap_cols(&mut d, t, bj);
            swap_cols(&mut v, t, bj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_floor(&d[t][t]);
                row_op(&mut d, i, t, &q);
                row_op(&mut u, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = d[t][j].div_floor(&d[t][t]);
                col_op(&mut d, j, t, &q);
                col_op(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let piv = d[t][t].clone();
            let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| !(&d[i][j] % &piv).is_zero());
            match bad {
                Some((i, _)) => {
                    let one = BigInt::from(-1);
                    row_op(&mut d, t, i, &one);
                    row_op(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    (u, d, v)
}

pub fn zmat_mul(a: &ZMatrix, b: &ZMatrix) -> ZMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

/// Every x ∈ (ℤ/p)^cols with a·x ≡ b (mod p), via the Smith form of a.
/// `limit` caps the number of returned solutions.
pub fn solve_mod(a: &ZMatrix, b: &[BigInt], p: &BigInt, limit: usize) -> Vec<Vec<BigInt>> {
    let cols = a.first().map_or(0, |r| r.len());
    let (u, d, v) = smith(a);
    let bcol: ZMatrix = b.iter().map(|x| vec![x.clone()]).collect();
    let c: Vec<BigInt> = zmat_mul(&u, &bcol).into_iter().map(|r| r[0].mod_floor(p)).collect();
    let mut choices: Vec<Vec<BigInt>> = Vec::with_capacity(cols);
    for i in 0..cols {
        let di = if i < d.len() { d[i][i].clone() } else { BigInt::zero() };
        let ci = c.get(i).cloned().unwrap_or_else(BigInt::zero);
        let g = di.gcd(p);
        if !(&ci % &g).is_zero() {
            return Vec::new();
        }
        let step = p / &g;
        let base = if g == *p {
            BigInt::zero()
        } else {
            let (_, inv, _) = ext_gcd(&(&di / &g), &step);
            ((&ci / &g) * inv).mod_floor(&step)
        };
        let mut opts = Vec::new();
        let mut t = BigInt::zero();
        while t < g {
            opts.push((&base + &t * &step).mod_floor(p));
            t += 1;
            if opts.len() > limit {
                break;
            }
        }
        choices.push(opts);
    }
    for i in cols..c.len() {
        if !c[i].is_zero() {
            return Vec::new();
        }
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; cols];
    'outer: loop {
        let y: Vec<BigInt> = (0..cols).map(|i| choices[i][idx[i]].clone()).collect();
        let x: Vec<BigInt> = (0..cols)
            .map(|r| (0..cols).fold(BigInt::zero(), |acc, k| acc + &v[r][k] * &y[k]).mod_floor(p))
            .collect();
        out.push(x);
        if out.len() >= limit {
            break;
        }
        for i in 0..cols {
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                continue 'outer;
            }
            idx[i] = 0;
        }
        break;
    }
    out.sort();
    out.dedup();
    out
}

/// Some y ≥ 0 with m·y = b, found by a phase-one simplex with Bland's rule.
pub fn nonnegative_solution(m: &QMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let width = cols + rows;
    let mut t: QMatrix = m
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let sign = if bi.is_negative() { -Rational::one() } else { Rational::one() };
            let mut r: Vec<Rational> = row.iter().map(|x| x * &sign).collect();
            r.extend((0..rows).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            r.push(bi * &sign);
            r
        })
        .collect();
    let mut basis: Vec<usize> = (cols..width).collect();
    // reduced costs of the artificial objective, last entry minus its value
    let mut cost: Vec<Rational> = (0..=width)
        .map(|j| if (cols..width).contains(&j) { Rational::zero() } else { -t.iter().fold(Rational::zero(), |acc, r| acc + &r[j]) })
        .collect();
    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, r) in t.iter().enumerate() {
            if r[enter].is_positive() {
                let ratio = &r[width] / &r[enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (l, _) = leave?;
        let inv = t[l][enter].recip();
        for v in t[l].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = t[l].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != l && !r[enter].is_zero() {
                let f = r[enter].clone();
                for (d, s) in r.iter_mut().zip(&pivot) {
                    *d = &*d - &f * s;
                }
            }
        }
        let f = cost[enter].clone();
        for (d, s) in cost.iter_mut().zip(&pivot) {
            *d = &*d - &f * s;
        }
        basis[l] = enter;
    }
    if !cost[width].is_zero() {
        return None;
    }
    let mut y = vec![Rational::zero(); cols];
    for (i, &j) in basis.iter().enumerate() {
        if j < cols {
            y[j] = t[i][width].clone();
        }
    }
    Some(y)
}
