//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use atfkit::atf_diagram::geom::orient;
use atfkit::atf_diagram::{
    affine_area, agl_equivalent, mutate, nodal_slide, nodal_trade, symplectic_cut, validate, BaseDiagram, Node, Orientation, Violation,
};
use atfkit::chain_classifier::{binary, classify, ternary, theorem_configuration, Anchor};
use atfkit::compactification::{
    blowup_sizes_for_unit_ball, build_gamma, nonsqueezing_certificate, nonsqueezing_mu, nonsqueezing_mu_symbolic,
    obstruction_polynomial, nonsqueezing_verdict,
};
use atfkit::constructions::{construct_s2s2, construct_x1};
use atfkit::exact_core::linalg::{solve, to_q};
use atfkit::exact_core::{int, rat, LatticeVector, Point, Poly, Rational};
use atfkit::homology::{dehn_twist, liminal_class, mod_complement, pair, soft_obstruction, HomologyClass, IntersectionSpace};
use atfkit::period_solver::{
    basis_matrix, chain_gram, discrepancies, mu_closed_forms, replay_reduction, rp2_blowup, rp2_formulas, solve_periods,
    ConfigAreas,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A positive rational num/den with small parts.
fn pos(r: &mut StdRng) -> Rational {
    rat(r.gen_range(1..=60), r.gen_range(1..=12))
}

fn signed(r: &mut StdRng) -> Rational {
    rat(r.gen_range(-60..=60), r.gen_range(1..=12))
}

/// Fig. 1 left: edges (1,4) and (m−2,(m−1)²) from the origin, a horizontal
/// top and a vertical left side; cut (1,m+1) at the lower corner and
/// (1,m−1) at the upper one.
fn fig1_left(m: i64) -> BaseDiagram {
    let v1 = Point::ints(1, 4);
    let v2 = v1.add(&Point::ints(m - 2, (m - 1) * (m - 1)));
    let top = Point::new(int(0), v2.y.clone());
    // for m = 2 the (1,3) line enters the polygon on the other side of the corner
    let sign = if m == 2 { -1 } else { 1 };
    let lower = Node { position: v1.add(&Point::ints(1, m + 1).scale(&rat(sign, 100))), eigenvector: LatticeVector::new(1, m + 1), anchor: v1.clone() };
    let upper = Node { position: v2.sub(&Point::ints(1, m - 1).scale(&rat(1, 100))), eigenvector: LatticeVector::new(1, m - 1), anchor: v2.clone() };
    BaseDiagram::new(vec![Point::origin(), v1, v2, top], vec![lower, upper])
}

fn fig1_right_ok(d: &BaseDiagram, m: i64, cut_node: usize) -> Result<(), String> {
    let edge = LatticeVector::new(m, (m + 1) * (m + 1));
    ensure((0..d.len()).any(|i| d.edge_direction(i) == edge), || format!("m = {m}: no edge {edge}"))?;
    let e = &d.nodes[cut_node].eigenvector;
    let want = LatticeVector::new(1, m + 3);
    ensure(*e == want || *e == want.neg(), || format!("m = {m}: cut {e}, expected {want}"))?;
    ensure(validate(d).is_valid(), || format!("m = {m}: result fails validation"))
}

fn c1_fig1_table() -> Outcome {
    let start = Instant::now();
    let mut fresh = 0;
    for m in 2..=20 {
        let d = fig1_left(m);
        if m == 3 {
            // (1,4) and (m−2,(m−1)²) are parallel: the left diagram has no lower corner
            ensure(validate(&d).violations.contains(&Violation::StraightVertex(1)), || "m = 3 unexpectedly valid".into())?;
            continue;
        }
        ensure(validate(&d).is_valid(), || format!("m = {m}: left diagram invalid"))?;
        let r = mutate(&d, 0, Orientation::Ccw).map_err(|e| format!("m = {m}: {e}"))?;
        fig1_right_ok(&r, m, 1)?;
        fresh += 1;
    }
    // iterating: each right diagram is the left one for m + 2, so the even
    // and odd ladders each start from a fresh diagram and go up to 20
    let mut steps = 0;
    for first in [4, 5] {
        let mut d = fig1_left(first);
        let mut lower = 0;
        for m in (first..=20).step_by(2) {
            d = mutate(&d, lower, Orientation::Ccw).map_err(|e| format!("iterate m = {m}: {e}"))?;
            fig1_right_ok(&d, m, 1 - lower)?;
            // slide the mutated node up to its new corner, as drawn
            let nd = &d.nodes[lower];
            let to = nd.anchor.add(&nd.position.sub(&nd.anchor).scale(&rat(1, 100)));
            d = nodal_slide(&d, lower, &to).map_err(|e| format!("slide at m = {m}: {e}"))?;
            lower = 1 - lower;
            steps += 1;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{fresh} fresh diagrams (m = 3 degenerate), {steps} iterated steps from m = 4 and 5, {:.0?}", start.elapsed()))
}

fn c2_classification() -> Outcome {
    let start = Instant::now();
    for n in 3..=7 {
        let (want, pair) = theorem_configuration(n);
        for anchor in [Anchor::D2, Anchor::D1] {
            let r = classify(n, anchor).map_err(|e| format!("n = {n}: {e}"))?;
            ensure(r.config == want, || format!("n = {n} {anchor}: got {}", r.config))?;
            ensure(r.companions == pair, || format!("n = {n} {anchor}: companions differ"))?;
            ensure(r.negative_caps == 0, || format!("n = {n} {anchor}: unobstructed cap over the negated tail"))?;
            ensure(r.positive + r.negative == r.chains, || format!("n = {n} {anchor}: orbit counts do not add up"))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("n = 3..7, both anchors, {:.1?}", start.elapsed()))
}

fn c3_period_identity() -> Outcome {
    let start = Instant::now();
    let mut r = rng(3);
    let mut count = 0;
    for n in 3..=25usize {
        for _ in 0..100 {
            let a = ConfigAreas { d1: signed(&mut r), d2: signed(&mut r), c: (0..n - 1).map(|_| signed(&mut r)).collect() };
            let p = solve_periods(n, &a).map_err(|e| e.to_string())?;
            let (m1, m2) = mu_closed_forms(n, &a).map_err(|e| e.to_string())?;
            ensure(p.mu[n - 2] == m1 && p.mu[n - 1] == m2, || format!("n = {n}: closed forms differ at {a:?}"))?;
            count += 1;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{count} random inputs, {:.1?}", start.elapsed()))
}

fn c4_appendix_a() -> Outcome {
    for n in 3..=15usize {
        let rep = replay_reduction(n).map_err(|e| e.to_string())?;
        ensure(rep.final_rows_match(), || format!("n = {n}: d' rows are not in (mu_(n-1), mu_n) only"))?;
        // each tracked row is the stated combination of the basis rows
        let m = basis_matrix(n).map_err(|e| e.to_string())?;
        for row in rep.c_prime.iter().chain([&rep.d1_prime, &rep.d2_prime]) {
            let periods: Vec<Rational> = (0..=n).map(|j| (0..=n).fold(Rational::zero(), |acc, i| acc + &row.areas[i] * int(m[i][j]))).collect();
            ensure(periods == row.periods, || format!("n = {n}: row {} is mislabelled", row.label))?;
        }
        // an independent solve of d'₁, d'₂ for μ_{n−1}, μ_n
        let ni = n as i64;
        let sys = to_q(&[vec![ni + 1, ni + 2], vec![ni + 2, 4]]);
        let (mu1, mu2) = rep.mu_expressions();
        for k in 0..=n {
            let rhs = [rep.d1_prime.areas[k].clone(), rep.d2_prime.areas[k].clone()];
            let sol = solve(&sys, &rhs).ok_or("singular 2x2 system")?;
            ensure(sol[0] == mu1[k] && sol[1] == mu2[k], || format!("n = {n}: coefficient {k} disagrees"))?;
            let mut unit = vec![Rational::zero(); n + 1];
            unit[k] = Rational::one();
            let a = ConfigAreas { d1: unit[n - 1].clone(), d2: unit[n].clone(), c: unit[..n - 1].to_vec() };
            let (c1, c2) = mu_closed_forms(n, &a).map_err(|e| e.to_string())?;
            ensure(c1 == mu1[k] && c2 == mu2[k], || format!("n = {n}: replay and closed forms differ at {k}"))?;
        }
    }
    Ok("n = 3..15".into())
}

fn c5_nonsqueezing() -> Outcome {
    let expected = Poly::var(0) + Poly::var(2) - Poly::constant(int(1));
    for n in 3..=15 {
        let p = nonsqueezing_mu_symbolic(n);
        ensure(p == expected, || format!("n = {n}: mu_n = {p}"))?;
    }
    let w = nonsqueezing_mu(3, &int(2), Some(&int(5)), &rat(1, 10)).map_err(|e| e.to_string())?;
    ensure(w.mu_n == rat(11, 10), || format!("(3,2,5,1/10) gives {}", w.mu_n))?;
    let mut r = rng(5);
    for _ in 0..50 {
        let n = r.gen_range(3..=15);
        let alpha = rat(r.gen_range(1..100), 100);
        let rep = nonsqueezing_certificate(n, &alpha, None, None).map_err(|e| e.to_string())?;
        ensure(!rep.possible && !nonsqueezing_verdict(&alpha) && rep.witness.mu_n.is_negative(), || format!("alpha = {alpha} not obstructed"))?;
    }
    Ok("mu_n = alpha - 1 + eps for n = 3..15; (3,2,5,1/10) -> 11/10; 50 alpha < 1 obstructed".into())
}

fn c6_kronheimer() -> Outcome {
    let (h, mu, c) = (Poly::var(0), Poly::var(1), Poly::var(2));
    let k = |n, d| Poly::constant(rat(n, d));
    let lemma = (
        k(3, 2) * h.clone() - mu.clone() + k(1, 4) * c.clone(),
        h.clone() - mu.clone() + k(1, 2) * c.clone(),
        k(1, 2) * h.clone() - mu.clone() - k(1, 4) * c.clone(),
    );
    ensure(rp2_formulas(&h, &mu, &c) == lemma, || "rp2 formulas differ from the lemma".into())?;
    // independent oracle: the areas of W₁, W₂ and S₀ before and after
    let sys = to_q(&[vec![2, -1, 0], vec![3, -2, -1], vec![-1, 2, -1]]);
    let mut r = rng(6);
    for _ in 0..200 {
        let h = pos(&mut r) + int(1);
        let mu = &h * rat(r.gen_range(1..100), 100);
        let c = pos(&mut r);
        let b = rp2_blowup(&h, &mu, &c).map_err(|e| e.to_string())?;
        let sol = solve(&sys, &[int(2) * &h - &mu, int(2) * &h, c.clone()]).ok_or("singular system")?;
        ensure(sol == vec![b.h.clone(), b.mu1.clone(), b.mu2.clone()], || format!("({h},{mu},{c}) disagrees with the linear solve"))?;
        ensure(b.mu2.is_positive() == (&mu + &c / int(4) < &h / int(2)), || format!("sign of mu2 at ({h},{mu},{c})"))?;
    }
    let h = int(2);
    let mut built = 0;
    for i in 1..=50 {
        let mu = rat(i, 26);
        let ok = construct_x1(1, &h, &mu).map_err(|e| e.to_string())?.success;
        ensure(ok == (mu < int(1)), || format!("construct_x1(1, 2, {mu}) success = {ok}"))?;
        built += ok as usize;
    }
    Ok(format!("formulas symbolic, 200 random blow-ups, sweep mu = i/26 on h = 2: {built}/50 built"))
}

fn c7_khodorovskiy() -> Outcome {
    let minus_s = Poly::constant(int(0)) - Poly::var(1);
    let mut shapes = 0;
    for n in 2..=12usize {
        let mut ms = vec![n as i64 + 1];
        if n % 2 == 1 && n != 3 {
            ms.push(4);
        }
        for m in ms {
            let p = obstruction_polynomial(n, -m).map_err(|e| format!("n = {n}, m = {m}: {e}"))?;
            ensure(p == minus_s, || format!("n = {n}, V_-{m}: failing bound reduces to {p}"))?;
            shapes += 1;
        }
    }
    Ok(format!("{shapes} neighborhoods; every failing bound is -s"))
}

fn c8_gamma_area() -> Outcome {
    let mut r = rng(8);
    for n in 2..=20usize {
        let ni = n as i64;
        for _ in 0..20 {
            let alpha = pos(&mut r);
            let beta = int(ni - 1) * &alpha + pos(&mut r);
            let g = build_gamma(n, &alpha, &beta).map_err(|e| format!("n = {n}: {e}"))?;
            let want = rat(ni + 1, 2) * &beta * &beta + &alpha * &beta - rat(ni - 1, 2) * &alpha * &alpha;
            // shoelace by hand
            let v = &g.vertices;
            let twice = (0..v.len()).fold(Rational::zero(), |acc, i| acc + v[i].det(&v[(i + 1) % v.len()]));
            let area = affine_area(&g).map_err(|e| e.to_string())?;
            ensure(area == want && twice / int(2) == want, || format!("n = {n}, ({alpha},{beta}): area {area}, expected {want}"))?;
        }
    }
    Ok("n = 2..20, 20 random (alpha, beta) each".into())
}

fn c9_lattice() -> Outcome {
    for n in 2..=40 {
        let l = liminal_class(n);
        let c = mod_complement(&l).map_err(|e| format!("n = {n}: {e}"))?;
        ensure(c.index == n, || format!("n = {n}: index {}", c.index))?;
    }
    let mut classes = Vec::new();
    for k in 1..=5usize {
        let kk = k as i64;
        let s = construct_s2s2(k, &int(1), &rat(2 * kk + 1, 2)).map_err(|e| e.to_string())?;
        let x = construct_x1(k, &int(1), &rat(kk, 2 * kk + 2)).map_err(|e| e.to_string())?;
        for b in [s, x] {
            classes.push(b.pinwheel_class.ok_or_else(|| format!("k = {k}: construction did not certify a class"))?);
        }
    }
    for l in &classes {
        let s = soft_obstruction(l, 1);
        ensure(s.square_ok && s.square_residue == l.p - 1, || format!("{l}: square residue {}", s.square_residue))?;
    }
    for k in 1..=20i64 {
        let l = HomologyClass::new(IntersectionSpace::S2xS2, vec![1, k]).reduce(2 * k + 1);
        ensure(soft_obstruction(&l, 1).holds, || format!("{l} fails the q = 1 test"))?;
    }
    let mut r = rng(9);
    for _ in 0..1000 {
        let n = r.gen_range(3..=9usize);
        let space = IntersectionSpace::Blowup(n);
        let mut rc = || HomologyClass::new(space, (0..=n).map(|_| r.gen_range(-6..=6)).collect());
        let (x, y) = (rc(), rc());
        let b = if r.gen_bool(0.5) {
            let j = r.gen_range(1..n);
            binary(n, j, r.gen_range(j + 1..=n))
        } else {
            ternary(n, r.gen_range(2..n), r.gen_bool(0.5))
        };
        let (tx, ty) = (dehn_twist(&x, &b).map_err(|e| e.to_string())?, dehn_twist(&y, &b).map_err(|e| e.to_string())?);
        ensure(pair(&tx, &ty) == pair(&x, &y), || format!("twist in {b} changes {x}.{y}"))?;
        ensure(dehn_twist(&tx, &b).map_err(|e| e.to_string())? == x, || format!("twist in {b} is not an involution"))?;
    }
    Ok(format!("index p for n = 2..40; {} construction classes square to -1; 1000 twists", classes.len()))
}

/// A random Delzant polygon: rectangle, Hirzebruch trapezoid or a corner
/// cut of either.
fn random_polygon(r: &mut StdRng) -> BaseDiagram {
    let a = pos(r);
    let b = pos(r);
    let base = match r.gen_range(0..3) {
        0 => BaseDiagram::polygon(vec![Point::origin(), Point::new(a.clone(), int(0)), Point::new(a, b.clone()), Point::new(int(0), b)]),
        1 => {
            let k = r.gen_range(0..=3);
            let top = &b + &a * int(k);
            BaseDiagram::polygon(vec![Point::origin(), Point::new(a.clone(), int(0)), Point::new(a, b), Point::new(int(0), top)])
        }
        _ => BaseDiagram::polygon(vec![Point::origin(), Point::new(a.clone(), int(0)), Point::new(int(0), a)]),
    };
    if r.gen_bool(0.4) {
        let short = (0..base.len()).map(|i| base.edge_length(i)).min().unwrap();
        let level = short * rat(r.gen_range(1..=4), 10);
        if let Ok(cut) = symplectic_cut(&base, &LatticeVector::new(-1, -1), &-level) {
            return cut;
        }
    }
    base
}

fn c10_mutation_invariants() -> Outcome {
    let mut r = rng(10);
    let (mut done, mut tries) = (0, 0);
    while done < 200 {
        tries += 1;
        ensure(tries < 5000, || format!("only {done} usable diagrams in {tries} draws"))?;
        let p = random_polygon(&mut r);
        let v = r.gen_range(0..p.len());
        let short = std::cmp::min(p.edge_length((v + p.len() - 1) % p.len()), p.edge_length(v));
        let Ok(d) = nodal_trade(&p, v, &(short * rat(r.gen_range(1..=9), 20))) else { continue };
        ensure(validate(&d).is_valid(), || format!("traded diagram invalid: {:?}", d.vertices))?;
        let area = affine_area(&d).map_err(|e| e.to_string())?;
        let o = if r.gen_bool(0.5) { Orientation::Ccw } else { Orientation::Cw };
        let back_o = if o == Orientation::Ccw { Orientation::Cw } else { Orientation::Ccw };
        let m = mutate(&d, 0, o).map_err(|e| format!("{:?}: {e}", d.vertices))?;
        ensure(validate(&m).is_valid(), || format!("mutation output invalid: {:?}", m.vertices))?;
        ensure(affine_area(&m).ok() == Some(area.clone()), || "mutation changed the area".into())?;
        let back = mutate(&m, 0, back_o).map_err(|e| e.to_string())?;
        ensure(agl_equivalent(&back, &d), || "mutating back is not AGL-equivalent".into())?;
        let twice = mutate(&m, 0, o).map_err(|e| e.to_string())?;
        ensure(validate(&twice).is_valid() && affine_area(&twice).ok() == Some(area), || "second mutation broke an invariant".into())?;
        ensure(agl_equivalent(&twice, &d), || "two mutations the same way are not AGL-equivalent".into())?;
        done += 1;
    }
    Ok(format!("200 random diagrams ({tries} draws)"))
}

fn c11_discrepancies() -> Outcome {
    let mut r = rng(11);
    for n in 2..=30usize {
        for _ in 0..10 {
            let c: Vec<Rational> = (0..n - 1).map(|_| pos(&mut r)).collect();
            let d = discrepancies(n, &c).map_err(|e| e.to_string())?;
            // check the solve by multiplying back
            let g = chain_gram(n);
            for (i, row) in g.iter().enumerate() {
                let lhs = row.iter().zip(&d.d).fold(Rational::zero(), |acc, (x, y)| acc + int(*x) * y);
                let rhs = if i == 0 { int(-(n as i64)) } else { Rational::zero() };
                ensure(lhs == rhs, || format!("n = {n}: row {i} of the system fails"))?;
            }
            ensure(d.d.iter().all(|x| !x.is_negative()) && d.d.iter().any(Signed::is_positive), || format!("n = {n}: d = {:?}", d.d))?;
            let total = d.d.iter().zip(&c).fold(Rational::zero(), |acc, (x, y)| acc + x * y);
            ensure(d.total == total && total.is_positive(), || format!("n = {n}: d_n,1 = {}", d.total))?;
        }
    }
    Ok("n = 2..30, 10 random area vectors each".into())
}

fn c12_appendix_b() -> Outcome {
    let eps = rat(1, 1000);
    for n in 3..=10usize {
        let ni = n as i64;
        let s = blowup_sizes_for_unit_ball(n, &eps).map_err(|e| format!("n = {n}: {e}"))?;
        let height: i64 = (2..ni).sum();
        let start = Point::new(int(0), int(1) - int(height) * &eps);
        ensure(*s.start() == start, || format!("n = {n}: starts at {}", s.start()))?;
        let weight: i64 = (2..ni).map(|j| j * (ni + 1) + 1).sum();
        let mut want = vec![int(4) - int(weight) * &eps, int(ni - 2)];
        want.extend((2..=n - 2).map(|_| eps.clone()));
        ensure(s.c == want, || format!("n = {n}: sizes {:?}", s.c))?;
        // walk the chain forwards and test each vertex against the three edges
        let tri = [Point::origin(), Point::ints(ni * ni, ni - 1), Point::ints(0, 1)];
        let mut p = start;
        for (j, c) in s.c.iter().enumerate() {
            let inside = (0..3).all(|i| !orient(&tri[i], &tri[(i + 1) % 3], &p).is_negative());
            ensure(inside, || format!("n = {n}: vertex {j} at {p} leaves the ball"))?;
            p = p.add(&Point::ints(j as i64 * (ni + 1) + 1, j as i64).scale(c));
        }
        let end = Point::ints(ni * ni, ni - 1).scale(&(int(1) - &eps));
        ensure(p == end, || format!("n = {n}: chain ends at {p}, expected {end}"))?;
    }
    Ok("n = 3..10 at eps = 1/1000".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("mutation table", c1_fig1_table),
        ("chain classification", c2_classification),
        ("period identity", c3_period_identity),
        ("row reduction replay", c4_appendix_a),
        ("non-squeezing identity", c5_nonsqueezing),
        ("RP2 obstruction and construction", c6_kronheimer),
        ("neighborhood obstructions", c7_khodorovskiy),
        ("Gamma volume", c8_gamma_area),
        ("lattice suite", c9_lattice),
        ("mutation invariants", c10_mutation_invariants),
        ("discrepancy positivity", c11_discrepancies),
        ("blow-up chain fit", c12_appendix_b),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
