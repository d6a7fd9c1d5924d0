//! Replayable constructions of visible L_{2k+1,1} pinwheels in S²×S² and
//! L_{2k,1} pinwheels in the one-point blowup X₁.

mod driver;

use num_traits::Signed;
use serde_json::{json, Value};
use thiserror::Error;

use crate::atf_diagram::{
    affine_area, mutate_report, nodal_slide, nodal_trade, symplectic_cut, to_value, BaseDiagram, DiagramError,
    Orientation, VisibleKind, VisibleLagrangianReport,
};
use crate::exact_core::{floor, fmt_rational, int, rat, LatticeVector, Point, Rational};
use crate::homology::{solve_class_mod_p, HomologyClass, IntersectionSpace, ModClass};
use crate::period_solver::{liminal_bounds, TargetPeriods};
use driver::Builder;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

pub fn default_eps() -> Rational {
    rat(1, 1000)
}

/// Which pair of corners of the S²×S² square carries the nodes. `Vertical`
/// trades the bottom corners and ends on a horizontal (A) edge; `Horizontal`
/// is the same sequence with the factors exchanged, ending on a B edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Vertical,
    Horizontal,
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "vertical" => Ok(Direction::Vertical),
            "horizontal" => Ok(Direction::Horizontal),
            other => Err(format!("direction must be vertical or horizontal, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    NodalTrade { vertex: usize, t: Rational },
    NodalSlide { node: usize, to: Point },
    /// `grazed_vertex` marks a cut that now ends at a vertex of the polygon.
    Mutate { node: usize, orientation: Orientation, grazed_vertex: bool },
    SymplecticCut { normal: LatticeVector, level: Rational, label: Option<String> },
}

impl Operation {
    fn run(&self, d: &BaseDiagram) -> Result<(BaseDiagram, bool), DiagramError> {
        Ok(match self {
            Operation::NodalTrade { vertex, t } => (nodal_trade(d, *vertex, t)?, false),
            Operation::NodalSlide { node, to } => (nodal_slide(d, *node, to)?, false),
            Operation::Mutate { node, orientation, .. } => {
                let m = mutate_report(d, *node, *orientation)?;
                (m.diagram, m.grazed_vertex)
            }
            Operation::SymplecticCut { normal, level, .. } => (symplectic_cut(d, normal, level)?, false),
        })
    }

    pub fn to_json(&self) -> Value {
        let p = |q: &Point| json!([fmt_rational(&q.x), fmt_rational(&q.y)]);
        match self {
            Operation::NodalTrade { vertex, t } => json!({ "op": "nodal_trade", "vertex": vertex, "t": fmt_rational(t) }),
            Operation::NodalSlide { node, to } => json!({ "op": "nodal_slide", "node": node, "to": p(to) }),
            Operation::Mutate { node, orientation, grazed_vertex } => {
                json!({ "op": "mutate", "node": node, "orientation": orientation, "grazed_vertex": grazed_vertex })
            }
            Operation::SymplecticCut { normal, level, label } => {
                json!({ "op": "symplectic_cut", "normal": normal.to_string(), "level": fmt_rational(level), "label": label })
            }
        }
    }
}

/// Applies the transcript to the seed.
pub fn replay(seed: &BaseDiagram, transcript: &[Operation]) -> Result<BaseDiagram, DiagramError> {
    let mut d = seed.clone();
    for op in transcript {
        d = op.run(&d)?.0;
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassConstraint {
    pub class: HomologyClass,
    pub residue: i64,
    /// Where the pairing comes from: "terminal edge", "boundary chain",
    /// "delzant sphere" or "complement".
    pub source: &'static str,
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub target: TargetPeriods,
    pub k: usize,
    /// Order of the advertised pinwheel, 2k+1 or 2k.
    pub order: i64,
    pub direction: Direction,
    /// Which of the size regimes the input falls in.
    pub regime: String,
    pub eps: Rational,
    pub seed: BaseDiagram,
    pub diagram: BaseDiagram,
    pub transcript: Vec<Operation>,
    pub pinwheel_node: usize,
    pub pinwheel: VisibleLagrangianReport,
    /// Seed edge containing the far end of the visible Lagrangian.
    pub terminal_edge: Option<String>,
    pub class_constraints: Vec<ClassConstraint>,
    pub class_solutions: Vec<ModClass>,
    pub pinwheel_class: Option<ModClass>,
    pub disjoint_spheres: Vec<HomologyClass>,
    pub success: bool,
    /// Why no pinwheel of the advertised order appeared.
    pub degeneration: Option<String>,
}

impl ConstructionResult {
    pub fn volume(&self) -> Rational {
        match &self.target {
            TargetPeriods::S2xS2 { a, b } => a * b,
            TargetPeriods::X1 { h, mu } => (h * h - mu * mu) / int(2),
        }
    }

    pub fn area_matches(&self) -> bool {
        affine_area(&self.diagram).is_ok_and(|a| a == self.volume())
    }

    pub fn replays(&self) -> bool {
        replay(&self.seed, &self.transcript).is_ok_and(|d| d == self.diagram)
    }

    pub fn to_json(&self) -> Value {
        let periods = match &self.target {
            TargetPeriods::S2xS2 { a, b } => json!({ "a": fmt_rational(a), "b": fmt_rational(b) }),
            TargetPeriods::X1 { h, mu } => json!({ "h": fmt_rational(h), "mu": fmt_rational(mu) }),
        };
        json!({
            "target": match self.target { TargetPeriods::S2xS2 { .. } => "s2s2", TargetPeriods::X1 { .. } => "x1" },
            "periods": periods,
            "k": self.k,
            "order": self.order,
            "direction": self.direction,
            "regime": self.regime,
            "eps": fmt_rational(&self.eps),
            "success": self.success,
            "degeneration": self.degeneration,
            "pinwheel_node": self.pinwheel_node,
            "pinwheel": serde_json::to_value(&self.pinwheel).expect("report serializes"),
            "terminal_edge": self.terminal_edge,
            "class_constraints": self.class_constraints.iter().map(|c| json!({ "class": c.class.to_string(), "residue": c.residue, "source": c.source })).collect::<Vec<_>>(),
            "class_solutions": self.class_solutions.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "pinwheel_class": self.pinwheel_class.as_ref().map(|c| c.to_string()),
            "disjoint_spheres": self.disjoint_spheres.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "area": affine_area(&self.diagram).ok().map(|a| fmt_rational(&a)),
            "volume": fmt_rational(&self.volume()),
            "transcript": self.transcript.iter().map(Operation::to_json).collect::<Vec<_>>(),
            "seed": to_value(&self.seed),
            "diagram": to_value(&self.diagram),
        })
    }
}

fn parse_class(space: IntersectionSpace, s: &str) -> HomologyClass {
    HomologyClass::parse(space, s).expect("fixed class literal")
}

fn rectangle(x: &Rational, y: &Rational) -> BaseDiagram {
    BaseDiagram::polygon(vec![
        Point::origin(),
        Point::new(x.clone(), int(0)),
        Point::new(x.clone(), y.clone()),
        Point::new(int(0), y.clone()),
    ])
}

/// Position of y against integer multiples of x.
fn regime(x: &Rational, y: &Rational, xs: &str, ys: &str) -> String {
    if y < x {
        return format!("{ys} < {xs}");
    }
    let l = floor(&(y / x));
    if &(x * Rational::from_integer(l.clone())) == y {
        format!("{ys} = {l}{xs}")
    } else {
        format!("{l}{xs} < {ys} < {}{xs}", &l + 1)
    }
}

struct Outcome {
    node: usize,
    report: VisibleLagrangianReport,
    blocked: Option<String>,
}

fn run_sequence(b: &mut Builder, mutations: &[usize], candidate: usize) -> Result<Outcome, ConstructionError> {
    for &i in mutations {
        if let Err(e) = b.mutate(i, Orientation::Ccw) {
            let report = b.visible(candidate)?;
            return Ok(Outcome { node: candidate, report, blocked: Some(format!("mutation at node {i} blocked: {e}")) });
        }
    }
    let report = b.visible(candidate)?;
    Ok(Outcome { node: candidate, report, blocked: None })
}

fn degeneration(out: &Outcome, order: i64, terminal_ok: bool) -> Option<String> {
    if let Some(m) = &out.blocked {
        return Some(m.clone());
    }
    match out.report.kind {
        VisibleKind::Pinwheel if out.report.order == order && terminal_ok => None,
        VisibleKind::Pinwheel if out.report.order == order => Some("pinwheel ends on an unexpected edge".into()),
        VisibleKind::Pinwheel => Some(format!("pinwheel of order {} instead of {order}", out.report.order)),
        VisibleKind::Disk => Some("disk".into()),
        VisibleKind::SchoenWolfson => Some("schoen_wolfson".into()),
        VisibleKind::Obstructed => Some("obstructed".into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    b: Builder,
    seed: BaseDiagram,
    target: TargetPeriods,
    k: usize,
    order: i64,
    direction: Direction,
    regime: String,
    eps: &Rational,
    out: Outcome,
    expected_edge: usize,
    extra: Vec<(HomologyClass, bool)>,
) -> ConstructionResult {
    debug_assert!(b.pieces_close_up());
    let terminal = b.label_at(&out.report.segment.1);
    let degeneration = degeneration(&out, order, terminal == Some(expected_edge));
    let success = degeneration.is_none();
    let space = b.labels[0].class.space;
    let mut class_constraints = Vec::new();
    let mut disjoint_spheres = Vec::new();
    let mut class_solutions = Vec::new();
    let mut pinwheel_class = None;
    if success {
        let t = b.labels[expected_edge].class.clone();
        let chain = b
            .live_labels()
            .into_iter()
            .filter(|&l| l != expected_edge)
            .fold(HomologyClass::zero(space), |acc, l| acc.add(&b.labels[l].class));
        debug_assert_eq!(chain, space.c1_class().sub(&t));
        class_constraints.push(ClassConstraint { class: t, residue: 1, source: "terminal edge" });
        class_constraints.push(ClassConstraint { class: chain.clone(), residue: 0, source: "boundary chain" });
        disjoint_spheres.push(chain);
        for (c, in_range) in extra {
            if in_range {
                disjoint_spheres.push(c.clone());
            }
            let source = if in_range { "delzant sphere" } else { "complement" };
            class_constraints.push(ClassConstraint { class: c, residue: 0, source });
        }
        let cons: Vec<(HomologyClass, i64)> = class_constraints.iter().map(|c| (c.class.clone(), c.residue)).collect();
        class_solutions = solve_class_mod_p(space, &cons, order);
        if class_solutions.len() == 1 {
            pinwheel_class = Some(class_solutions[0].clone());
        }
    }
    ConstructionResult {
        target,
        k,
        order,
        direction,
        regime,
        eps: eps.clone(),
        seed,
        diagram: b.diagram.clone(),
        transcript: b.ops.clone(),
        pinwheel_node: out.node,
        pinwheel: out.report,
        terminal_edge: terminal.map(|l| b.labels[l].name.clone()),
        class_constraints,
        class_solutions,
        pinwheel_class,
        disjoint_spheres,
        success,
        degeneration,
    }
}

fn check_k(k: usize) -> Result<(), ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::InvalidInput("k must be at least 1".into()));
    }
    Ok(())
}

fn check_eps(eps: &Rational) -> Result<(), ConstructionError> {
    if !eps.is_positive() || *eps >= rat(1, 2) {
        return Err(ConstructionError::InvalidInput("eps must lie in (0, 1/2)".into()));
    }
    Ok(())
}

pub fn construct_s2s2(k: usize, a: &Rational, b: &Rational) -> Result<ConstructionResult, ConstructionError> {
    construct_s2s2_with(k, a, b, Direction::Vertical, &default_eps())
}

/// Nodal trades at two adjacent corners of the square, then k mutations
/// alternating between the two nodes, each followed by a short slide.
pub fn construct_s2s2_with(
    k: usize,
    a: &Rational,
    b: &Rational,
    direction: Direction,
    eps: &Rational,
) -> Result<ConstructionResult, ConstructionError> {
    check_k(k)?;
    check_eps(eps)?;
    if !a.is_positive() || !b.is_positive() {
        return Err(ConstructionError::InvalidInput("a and b must be positive".into()));
    }
    let sp = IntersectionSpace::S2xS2;
    let (x, y, hx, vy) = match direction {
        Direction::Vertical => (a, b, "A", "B"),
        Direction::Horizontal => (b, a, "B", "A"),
    };
    let seed = rectangle(x, y).named("S2xS2");
    let (ch, cv) = (parse_class(sp, hx), parse_class(sp, vy));
    let edges = vec![("bottom", ch.clone()), ("right", cv.clone()), ("top", ch.clone()), ("left", cv.clone())];
    let mut bld = Builder::new(seed.clone(), edges, eps);
    let n0 = bld.trade(&Point::origin())?;
    let n1 = bld.trade(&Point::new(x.clone(), int(0)))?;
    let mutations: Vec<usize> = (0..k).map(|j| if j % 2 == 0 { n0 } else { n1 }).collect();
    let candidate = if mutations[k - 1] == n0 { n1 } else { n0 };
    let out = run_sequence(&mut bld, &mutations, candidate)?;
    let kk = Rational::from_integer((k as i64).into());
    let in_range = &(x * &kk) < y && y < &(x * (&kk + int(1)));
    let next = ch.scale(k as i64 + 1).add(&cv);
    let reg = regime(x, y, &hx.to_lowercase(), &vy.to_lowercase());
    let target = TargetPeriods::S2xS2 { a: a.clone(), b: b.clone() };
    Ok(finish(bld, seed, target, k, 2 * k as i64 + 1, direction, reg, eps, out, 2, vec![(next, in_range)]))
}

pub fn construct_x1(k: usize, h: &Rational, mu: &Rational) -> Result<ConstructionResult, ConstructionError> {
    construct_x1_with(k, h, mu, &default_eps())
}

/// k = 1: a trade at the corner of the triangle, then a toric blowup of size
/// μ at another corner. k ≥ 2: trades at the two upper corners of the
/// trapezoid and k−1 alternating mutations.
pub fn construct_x1_with(k: usize, h: &Rational, mu: &Rational, eps: &Rational) -> Result<ConstructionResult, ConstructionError> {
    check_k(k)?;
    check_eps(eps)?;
    if !mu.is_positive() || mu >= h {
        return Err(ConstructionError::InvalidInput("need 0 < mu < h".into()));
    }
    let sp = IntersectionSpace::Blowup(1);
    let c = |s: &str| parse_class(sp, s);
    let target = TargetPeriods::X1 { h: h.clone(), mu: mu.clone() };
    let kk = k as i64;
    let kr = Rational::from_integer(kk.into());
    let complement = c("H").scale(kk + 1).sub(&c("E").scale(kk));
    let in_range = &(h * (&kr - int(1)) / &kr) < mu;
    let order = 2 * kk;
    if k == 1 {
        let seed = BaseDiagram::polygon(vec![Point::origin(), Point::new(h.clone(), int(0)), Point::new(int(0), h.clone())])
            .named("CP2");
        let edges = vec![("bottom", c("H")), ("diagonal", c("H")), ("left", c("H"))];
        let mut bld = Builder::new(seed.clone(), edges, eps);
        let n = bld.trade(&Point::origin())?;
        bld.cut(LatticeVector::new(1, 0), h - mu, c("E"), "exceptional")?;
        let out = run_sequence(&mut bld, &[], n)?;
        let reg = if mu.clone() * int(2) < *h { "mu < h/2" } else { "mu >= h/2" }.to_string();
        return Ok(finish(bld, seed, target, k, order, Direction::Vertical, reg, eps, out, 1, vec![(complement, in_range)]));
    }
    let w = h - mu;
    let seed = BaseDiagram::polygon(vec![
        Point::origin(),
        Point::new(w.clone(), int(0)),
        Point::new(w.clone(), mu.clone()),
        Point::new(int(0), h.clone()),
    ])
    .named("X1");
    let edges = vec![("bottom", c("H-E")), ("right", c("E")), ("diagonal", c("H-E")), ("left", c("H"))];
    let mut bld = Builder::new(seed.clone(), edges, eps);
    let n0 = bld.trade(&Point::new(w.clone(), mu.clone()))?;
    let n1 = bld.trade(&Point::new(int(0), h.clone()))?;
    let mutations: Vec<usize> = (0..k - 1).map(|j| if j % 2 == 0 { n1 } else { n0 }).collect();
    let candidate = if mutations[k - 2] == n1 { n0 } else { n1 };
    let out = run_sequence(&mut bld, &mutations, candidate)?;
    let bound = h * &kr / (&kr + int(1));
    let reg = if mu < &bound { format!("mu < {k}h/{}", k + 1) } else { format!("mu >= {k}h/{}", k + 1) };
    Ok(finish(bld, seed, target, k, order, Direction::Vertical, reg, eps, out, 0, vec![(complement, in_range)]))
}

/// Whether construction succeeds exactly when the liminal bounds hold. For
/// S²×S² both directions are checked; the vertical one builds kA+B, so it is
/// compared with the bounds for the exchanged factors.
pub fn construction_consistency(k: usize, target: &TargetPeriods) -> bool {
    let agree = |built: Result<ConstructionResult, ConstructionError>, n: usize, t: TargetPeriods| match (built, liminal_bounds(n, &t)) {
        (Ok(r), Ok(v)) => r.success == v.holds,
        _ => false,
    };
    match target {
        TargetPeriods::S2xS2 { a, b } => {
            let n = 2 * k + 1;
            let swapped = TargetPeriods::S2xS2 { a: b.clone(), b: a.clone() };
            agree(construct_s2s2_with(k, a, b, Direction::Vertical, &default_eps()), n, swapped)
                && agree(construct_s2s2_with(k, a, b, Direction::Horizontal, &default_eps()), n, target.clone())
        }
        TargetPeriods::X1 { h, mu } => agree(construct_x1(k, h, mu), 2 * k, target.clone()),
    }
}
