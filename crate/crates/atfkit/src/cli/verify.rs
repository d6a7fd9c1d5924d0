//! `verify`: runs the construction or obstruction behind one theorem and
//! reports whether the outcome agrees with its statement.

use clap::{Args, ValueEnum};
use num_traits::Signed;
use serde::Serialize;
use serde_json::{json, Value};

use super::{eps_from_env, pretty, CliOutput};
use crate::compactification::{khodorovskiy_verdict, nonsqueezing_certificate, nonsqueezing_mu_symbolic, NeighborhoodSpec};
use crate::constructions::{construct_s2s2_with, construct_x1_with, ConstructionResult, Direction};
use crate::exact_core::{fmt_rational, int, rat, Poly, Rational};
use crate::period_solver::{liminal_bounds, rp2_blowup, TargetPeriods};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(super) enum Theorem {
    /// L_{2k+1,1} pinwheels in S²×S²(a, b)
    A,
    /// L_{2k,1} pinwheels in X₁(h, μ)
    B,
    /// Lagrangian RP² in X₁(h, μ)
    Kronheimer,
    /// B_{n,1}(1) into B_{n,1}(α, β)
    Nonsqueezing,
    /// L_{n,1} pinwheels in the compactified V₋ₘ
    Khodorovskiy,
}

#[derive(Debug, Args)]
pub(super) struct VerifyArgs {
    #[arg(long, value_enum, ignore_case = true)]
    theorem: Theorem,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_parser = super::exact)]
    a: Option<Rational>,
    #[arg(long, value_parser = super::exact)]
    b: Option<Rational>,
    #[arg(long, value_parser = super::exact)]
    h: Option<Rational>,
    #[arg(long, value_parser = super::exact)]
    mu: Option<Rational>,
    /// Area of the −4 sphere for the RP² blow-up.
    #[arg(long, value_parser = super::exact)]
    c: Option<Rational>,
    #[arg(long, value_parser = super::exact)]
    alpha: Option<Rational>,
    #[arg(long, value_parser = super::exact)]
    beta: Option<Rational>,
    #[arg(long, value_parser = super::exact)]
    eps: Option<Rational>,
    #[arg(long, value_parser = super::exact)]
    f: Option<Rational>,
    #[arg(long, value_parser = super::exact)]
    s: Option<Rational>,
    /// Self-intersection magnitude of the neighborhood; n+1 by default.
    #[arg(long)]
    m: Option<i64>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub theorem: String,
    pub inputs: Value,
    /// "pass" when the object exists, "obstructed" otherwise.
    pub verdict: String,
    /// The computed outcome agrees with the theorem.
    pub consistent: bool,
    pub certificate: Value,
    pub exit_code: i32,
}

impl VerdictReport {
    fn new(theorem: &str, inputs: Value, exists: bool, consistent: bool, certificate: Value) -> Self {
        VerdictReport {
            theorem: theorem.to_string(),
            inputs,
            verdict: if exists { "pass" } else { "obstructed" }.to_string(),
            consistent,
            certificate,
            exit_code: if consistent { 0 } else { 1 },
        }
    }

    fn human(&self) -> String {
        let mut s = format!("theorem {}: {}\n", self.theorem, self.verdict);
        if let Some(line) = self.certificate.get("summary").and_then(Value::as_str) {
            s += line;
            s.push('\n');
        }
        s += if self.consistent { "consistent with the statement\n" } else { "INCONSISTENT with the statement\n" };
        s
    }
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> Result<T, String> {
    v.clone().ok_or_else(|| format!("--{name} is required for this theorem"))
}

fn q(r: &Rational) -> String {
    fmt_rational(r)
}

fn construction_certificate(r: &ConstructionResult) -> Value {
    json!({
        "order": r.order,
        "regime": r.regime,
        "constructed": r.success,
        "pinwheel_class": r.pinwheel_class.as_ref().map(|c| c.to_string()),
        "disjoint_spheres": r.disjoint_spheres.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "degeneration": r.degeneration,
        "operations": r.transcript.len(),
        "replays": r.replays(),
    })
}

/// Existence theorems: the bounds hold exactly when the construction works.
fn existence(theorem: &str, n: usize, inputs: Value, target: &TargetPeriods, built: ConstructionResult) -> Result<VerdictReport, String> {
    let bounds = liminal_bounds(n, target).map_err(|e| e.to_string())?;
    let consistent = bounds.holds == built.success && built.replays();
    let mut cert = construction_certificate(&built);
    cert["bounds"] = json!(bounds.checked);
    cert["bounds_hold"] = json!(bounds.holds);
    cert["summary"] = json!(match (&built.pinwheel_class, &built.degeneration) {
        (Some(c), _) => format!("order {} pinwheel in class {c} ({})", built.order, built.regime),
        (None, Some(d)) => format!("no order {} pinwheel: {d} ({})", built.order, built.regime),
        (None, None) => format!("order {} pinwheel, class not unique", built.order),
    });
    Ok(VerdictReport::new(theorem, inputs, built.success, consistent, cert))
}

fn theorem_a(args: &VerifyArgs, eps: &Rational) -> Result<VerdictReport, String> {
    let (k, a, b) = (need(&args.k, "k")?, need(&args.a, "a")?, need(&args.b, "b")?);
    // the horizontal run builds the class the bounds are stated for
    let built = construct_s2s2_with(k, &a, &b, Direction::Horizontal, eps).map_err(|e| e.to_string())?;
    let inputs = json!({ "k": k, "a": q(&a), "b": q(&b), "eps": q(eps) });
    existence("A", 2 * k + 1, inputs, &TargetPeriods::S2xS2 { a, b }, built)
}

fn theorem_b(args: &VerifyArgs, eps: &Rational) -> Result<VerdictReport, String> {
    let (k, h, mu) = (need(&args.k, "k")?, need(&args.h, "h")?, need(&args.mu, "mu")?);
    let built = construct_x1_with(k, &h, &mu, eps).map_err(|e| e.to_string())?;
    let inputs = json!({ "k": k, "h": q(&h), "mu": q(&mu), "eps": q(eps) });
    existence("B", 2 * k, inputs, &TargetPeriods::X1 { h, mu }, built)
}

fn kronheimer(args: &VerifyArgs, eps: &Rational) -> Result<VerdictReport, String> {
    let (h, mu) = (need(&args.h, "h")?, need(&args.mu, "mu")?);
    let built = construct_x1_with(1, &h, &mu, eps).map_err(|e| e.to_string())?;
    let mut inputs = json!({ "h": q(&h), "mu": q(&mu), "eps": q(eps) });
    let mut r = existence("kronheimer", 2, inputs.clone(), &TargetPeriods::X1 { h: h.clone(), mu: mu.clone() }, built)?;
    if let Some(c) = &args.c {
        // blowing up the RP² leaves a sphere of area μ̃₂, which must be positive
        let up = rp2_blowup(&h, &mu, c).map_err(|e| e.to_string())?;
        let agrees = up.mu2.is_positive() == (&mu + c / int(4) < &h / int(2));
        r.certificate["rp2_blowup"] = json!({ "h": q(&up.h), "mu1": q(&up.mu1), "mu2": q(&up.mu2), "mu2_positive": up.mu2.is_positive() });
        r.consistent &= agrees;
        r.exit_code = if r.consistent { 0 } else { 1 };
        inputs["c"] = json!(q(c));
        r.inputs = inputs;
    }
    Ok(r)
}

fn nonsqueezing(args: &VerifyArgs, eps: Option<&Rational>) -> Result<VerdictReport, String> {
    let (n, alpha) = (need(&args.n, "n")?, need(&args.alpha, "alpha")?);
    let rep = nonsqueezing_certificate(n, &alpha, args.beta.as_ref(), eps).map_err(|e| e.to_string())?;
    let w = &rep.witness;
    let poly = nonsqueezing_mu_symbolic(n);
    let expected = Poly::var(0) + Poly::var(2) - Poly::constant(int(1));
    let identity = poly == expected;
    let at = poly.eval(&[w.alpha.clone(), w.beta.clone(), w.epsilon.clone()]);
    let consistent = identity && at == w.mu_n && (rep.possible || w.mu_n.is_negative());
    let mut cert = rep.to_json();
    cert["identity"] = json!({ "mu_n": poly.to_string(), "equals_alpha_minus_1_plus_eps": identity });
    cert["summary"] = json!(if rep.possible {
        format!("alpha >= 1: the ball includes; mu_{n} = {}", q(&w.mu_n))
    } else {
        format!("mu_{n} = alpha - 1 + eps = {} < 0", q(&w.mu_n))
    });
    let inputs = json!({ "n": n, "alpha": q(&alpha), "beta": args.beta.as_ref().map(q), "eps": q(&w.epsilon) });
    Ok(VerdictReport::new("nonsqueezing", inputs, rep.possible, consistent, cert))
}

fn khodorovskiy(args: &VerifyArgs) -> Result<VerdictReport, String> {
    let (n, f, s) = (need(&args.n, "n")?, need(&args.f, "f")?, need(&args.s, "s")?);
    let m = args.m.unwrap_or(n as i64 + 1);
    let spec = NeighborhoodSpec { self_intersection: -m, f: f.clone(), s: s.clone() };
    let rep = khodorovskiy_verdict(n, &spec).map_err(|e| e.to_string())?;
    let mut cert = rep.to_json();
    cert["summary"] = json!(if rep.violated.is_empty() {
        "the liminal bounds hold on the compactification".to_string()
    } else {
        format!("violated: {}", rep.violated.join(", "))
    });
    let inputs = json!({ "n": n, "m": m, "f": q(&f), "s": q(&s) });
    let exists = rep.symplectic_embedding_possible;
    Ok(VerdictReport::new("khodorovskiy", inputs, exists, !exists, cert))
}

pub(super) fn run(args: VerifyArgs) -> Result<CliOutput, String> {
    let eps = match &args.eps {
        Some(e) if !(e.is_positive() && *e < rat(1, 2)) => return Err("--eps must lie in (0, 1/2)".into()),
        Some(e) => e.clone(),
        None => eps_from_env()?,
    };
    let report = match args.theorem {
        Theorem::A => theorem_a(&args, &eps)?,
        Theorem::B => theorem_b(&args, &eps)?,
        Theorem::Kronheimer => kronheimer(&args, &eps)?,
        Theorem::Nonsqueezing => nonsqueezing(&args, Some(&eps))?,
        Theorem::Khodorovskiy => khodorovskiy(&args)?,
    };
    let stdout = if args.json {
        pretty(&serde_json::to_value(&report).expect("report serializes"))
    } else {
        report.human()
    };
    Ok(CliOutput { code: report.exit_code, stdout, stderr: String::new() })
}
