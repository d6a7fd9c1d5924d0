//! Command-line front end. `run` never prints; it returns what the binary
//! should write and the exit code, so tests can drive it directly.

mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::atf_diagram::{
    from_json, mutate_report, render_svg, to_value, validate, BaseDiagram, Orientation, SvgOptions,
};
use crate::chain_classifier::{classify, Anchor};
use crate::constructions::{construct_s2s2_with, construct_x1_with, default_eps, ConstructionResult, Direction};
use crate::exact_core::{fmt_rational, parse_rational, Rational};
use crate::period_solver::{mu_closed_forms, solve_periods, ConfigAreas};

pub use verify::VerdictReport;

/// Environment variable overriding the default small parameter.
pub const EPS_VAR: &str = "ATFKIT_EPS";

#[derive(Debug, Default)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String) -> Self {
        CliOutput { code: 0, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Self {
        CliOutput { code, stdout: String::new(), stderr }
    }
}

#[derive(Debug, Parser)]
#[command(name = "atfkit", version, about = "Almost toric base diagrams and pinwheel obstructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate, mutate or render a base diagram file.
    Diagram {
        #[command(subcommand)]
        action: DiagramCommand,
    },
    /// Classify the chains of (−2)-spheres in X_n.
    ClassifyChain {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "d2")]
        anchor: AnchorArg,
        #[arg(long)]
        json: bool,
    },
    /// Periods (h, μ) of X_n from the areas of the configuration.
    SolvePeriods {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = exact)]
        d1: Rational,
        #[arg(long, value_parser = exact)]
        d2: Rational,
        /// c₀,…,c_{n−2}, comma separated
        #[arg(long, value_parser = exact, value_delimiter = ',', num_args = 1..)]
        c: Vec<Rational>,
        #[arg(long)]
        json: bool,
    },
    /// Build a visible pinwheel by mutations.
    Construct(ConstructArgs),
    /// Check an obstruction theorem against its construction or certificate.
    Verify(verify::VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum DiagramCommand {
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    Mutate {
        file: PathBuf,
        #[arg(long)]
        node: usize,
        #[arg(long, default_value = "ccw")]
        orientation: Orientation,
        /// Write the mutated diagram here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    Render {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 400.0)]
        size: f64,
        #[arg(long)]
        no_visible: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AnchorArg {
    D1,
    D2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    S2s2,
    X1,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long, value_enum, ignore_case = true)]
    target: TargetArg,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = exact)]
    a: Option<Rational>,
    #[arg(long, value_parser = exact)]
    b: Option<Rational>,
    #[arg(long, value_parser = exact)]
    h: Option<Rational>,
    #[arg(long, value_parser = exact)]
    mu: Option<Rational>,
    #[arg(long, default_value = "vertical")]
    direction: Direction,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn exact(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// The small parameter: `ATFKIT_EPS` when set, else 1/1000.
pub fn eps_from_env() -> Result<Rational, String> {
    match std::env::var(EPS_VAR) {
        Ok(v) => exact(&v).map_err(|e| format!("{EPS_VAR}: {e}")),
        Err(_) => Ok(default_eps()),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn read_diagram(path: &PathBuf) -> Result<BaseDiagram, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_or_return(out: &Option<PathBuf>, text: String) -> Result<String, String> {
    match out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliOutput::ok(text),
                _ => CliOutput::fail(2, text),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => out,
        Err(msg) => CliOutput::fail(2, format!("error: {msg}\n")),
    }
}

fn dispatch(cmd: Command) -> Result<CliOutput, String> {
    match cmd {
        Command::Diagram { action } => diagram(action),
        Command::ClassifyChain { n, anchor, json } => {
            let anchor = match anchor {
                AnchorArg::D1 => Anchor::D1,
                AnchorArg::D2 => Anchor::D2,
            };
            let r = classify(n, anchor).map_err(|e| e.to_string())?;
            if json {
                return Ok(CliOutput::ok(pretty(&r.to_json())));
            }
            let mut s = format!("n = {n}, anchor {anchor}: {} chains ({} in the normal orbit)\n", r.chains, r.positive);
            for (i, c) in r.config.classes.iter().enumerate() {
                s += &format!("S{i} = {c}\n");
            }
            s += &format!("D1 = {}\nD2 = {}\n", r.companions.d1, r.companions.d2);
            Ok(CliOutput::ok(s))
        }
        Command::SolvePeriods { n, d1, d2, c, json } => {
            let areas = ConfigAreas { d1, d2, c };
            let p = solve_periods(n, &areas).map_err(|e| e.to_string())?;
            let (m1, m2) = mu_closed_forms(n, &areas).map_err(|e| e.to_string())?;
            let agree = p.mu[n - 2] == m1 && p.mu[n - 1] == m2;
            let v = json!({
                "n": n,
                "h": fmt_rational(&p.h),
                "mu": p.mu.iter().map(fmt_rational).collect::<Vec<_>>(),
                "closed_forms": { "mu_n_minus_1": fmt_rational(&m1), "mu_n": fmt_rational(&m2) },
                "closed_forms_agree": agree,
                "all_positive": p.all_positive(),
            });
            let code = if agree { 0 } else { 1 };
            if json {
                return Ok(CliOutput { code, stdout: pretty(&v), stderr: String::new() });
            }
            let mus: Vec<String> = p.mu.iter().map(fmt_rational).collect();
            let s = format!(
                "h = {}\nmu = ({})\nclosed forms {} the solve\n",
                fmt_rational(&p.h),
                mus.join(", "),
                if agree { "agree with" } else { "DISAGREE with" }
            );
            Ok(CliOutput { code, stdout: s, stderr: String::new() })
        }
        Command::Construct(args) => construct(args),
        Command::Verify(args) => verify::run(args),
    }
}

fn diagram(action: DiagramCommand) -> Result<CliOutput, String> {
    match action {
        DiagramCommand::Validate { file, json } => {
            let d = read_diagram(&file)?;
            let v = validate(&d);
            let code = if v.is_valid() { 0 } else { 1 };
            let stdout = if json {
                pretty(&json!({ "valid": v.is_valid(), "violations": v.violations, "corners": v.corners }))
            } else if v.is_valid() {
                format!("valid: {} vertices, {} nodes\n", d.len(), d.nodes.len())
            } else {
                format!("invalid: {:?}\n", v.violations)
            };
            Ok(CliOutput { code, stdout, stderr: String::new() })
        }
        DiagramCommand::Mutate { file, node, orientation, out, json } => {
            let d = read_diagram(&file)?;
            let m = mutate_report(&d, node, orientation).map_err(|e| e.to_string())?;
            let body = pretty(&to_value(&m.diagram));
            let written = write_or_return(&out, body)?;
            let a = &m.new_anchor;
            let stdout = if json {
                let mut v = json!({ "new_anchor": [fmt_rational(&a.x), fmt_rational(&a.y)], "grazed_vertex": m.grazed_vertex });
                if out.is_none() {
                    v["diagram"] = to_value(&m.diagram);
                }
                pretty(&v)
            } else if out.is_some() {
                format!("mutated node {node} ({orientation}); cut now ends at {a}\n")
            } else {
                written
            };
            Ok(CliOutput::ok(stdout))
        }
        DiagramCommand::Render { file, out, size, no_visible } => {
            let d = read_diagram(&file)?;
            if !(size.is_finite() && size > 0.0) {
                return Err("size must be positive".into());
            }
            let opts = SvgOptions { size, show_visible: !no_visible, ..SvgOptions::default() };
            Ok(CliOutput::ok(write_or_return(&out, render_svg(&d, &opts))?))
        }
    }
}

fn summary(r: &ConstructionResult) -> String {
    let mut s = format!("order {} pinwheel, {} ({})\n", r.order, if r.success { "constructed" } else { "not constructed" }, r.regime);
    match (&r.pinwheel_class, &r.degeneration) {
        (Some(c), _) => {
            s += &format!("class {c}\n");
            let spheres: Vec<String> = r.disjoint_spheres.iter().map(|c| c.to_string()).collect();
            s += &format!("misses {}\n", spheres.join(", "));
        }
        (None, Some(d)) => s += &format!("degeneration: {d}\n"),
        (None, None) => s += "class not unique\n",
    }
    s += &format!("{} operations\n", r.transcript.len());
    s
}

fn construct(args: ConstructArgs) -> Result<CliOutput, String> {
    let eps = eps_from_env()?;
    let need = |v: Option<Rational>, name: &str| v.ok_or_else(|| format!("--{name} is required for this target"));
    let r = match args.target {
        TargetArg::S2s2 => {
            let (a, b) = (need(args.a, "a")?, need(args.b, "b")?);
            construct_s2s2_with(args.k, &a, &b, args.direction, &eps)
        }
        TargetArg::X1 => {
            let (h, mu) = (need(args.h, "h")?, need(args.mu, "mu")?);
            construct_x1_with(args.k, &h, &mu, &eps)
        }
    }
    .map_err(|e| e.to_string())?;
    if let Some(p) = &args.svg {
        let seg = r.pinwheel.segment.clone();
        let opts = SvgOptions { highlight: if r.success { vec![seg] } else { Vec::new() }, ..SvgOptions::default() };
        std::fs::write(p, render_svg(&r.diagram, &opts)).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(CliOutput::ok(if args.json { pretty(&r.to_json()) } else { summary(&r) }))
}
