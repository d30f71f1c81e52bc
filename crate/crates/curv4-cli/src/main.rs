//! `curv4` — curvature algebra of oriented Einstein 4-manifolds from the
//! command line.
//!
//! Exit codes: 0 when everything requested passes (or is not applicable),
//! 1 when a condition or inequality genuinely fails, 2 on malformed input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use curv4::conditions::{condition_report, ConditionReport};
use curv4::extremal::{
    anchor_point, build_constraints, maximize, sampled_optimum, supported_runs,
    verify_pointwise_bounds, Direction, Family, Objective, SearchResult,
};
use curv4::invariants::{
    densities, inequality_suite, GlobalInvariants, InequalityReport, InvariantDensities,
};
use curv4::json::{parse_input, ParsedInput};
use curv4::models::{catalog, find_model};
use curv4::{decompose, Basis, CurvError, CurvatureOperator};

const DEFAULT_CONDITION_TOL: f64 = 1e-9;
const DEFAULT_EINSTEIN_TOL: f64 = 1e-8;

// tolerate a closed stdout (e.g. piping into `head`) instead of panicking
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Human,
    Json,
}

#[derive(Parser)]
#[command(
    name = "curv4",
    version,
    about = "Curvature algebra of oriented Einstein 4-manifolds: decomposition, curvature conditions, topological densities, and extremal bound verification"
)]
struct Cli {
    /// Condition tolerance; overrides the CURV4_TOLERANCE environment
    /// variable (default 1e-9)
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Seed for randomized cross-checks; changing it never changes a
    /// verdict, only witnesses
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Human)]
    output: OutputMode,

    /// Shorthand for --output json
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a tensor or spectrum into scalar, traceless-Ricci and Weyl
    /// parts, with the Singer-Thorpe data when the input is Einstein
    Decompose { input: PathBuf },

    /// Evaluate curvature conditions (NIC, NNIC, NPCO, sup K <= rho/6)
    /// with margins; exit 1 when a required condition fails
    Check {
        input: PathBuf,
        /// Conditions that must hold (repeatable): nic, nnic, npco, supk
        #[arg(long, value_delimiter = ',', default_values_t = vec![String::from("nic"), String::from("npco")])]
        require: Vec<String>,
        /// Fail with exit 2 unless the input is Einstein at the Einstein
        /// tolerance
        #[arg(long)]
        require_einstein: bool,
    },

    /// Euler/signature densities and the inequality suite at a volume
    Invariants {
        input: PathBuf,
        #[arg(long)]
        volume: f64,
        /// Also apply the Kaehler-Einstein inequalities
        #[arg(long)]
        kaehler: bool,
    },

    /// Dump the built-in model catalog
    Models,

    /// Exact extremal optimization over a constraint family
    Extremal {
        /// NIC, NPCO, SUPK or KAEHLER_GAMMA
        #[arg(long)]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        /// Restrict to one objective (Q_PLUS, Q_MINUS, EULER, CROSS,
        /// GAMMA_NORM)
        #[arg(long)]
        objective: Option<String>,
        /// Restrict to one direction (max, min)
        #[arg(long)]
        direction: Option<String>,
        /// Also run the seeded sampling cross-check with this many samples
        #[arg(long)]
        samples: Option<usize>,
    },

    /// Run inequality suites and extremal bound certification; exit 1 on
    /// any applicable failure
    Verify {
        /// Verify one catalog model (H4, CH2, H2xH2, S4, CP2, S2xS2, Flat)
        #[arg(long)]
        model: Option<String>,
        /// Volume for the model run (defaults to the model's canonical
        /// volume)
        #[arg(long)]
        volume: Option<f64>,
        /// Certify the extremal bounds at this Einstein constant
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<f64>,
        /// Also assert feasibility of this family's anchor point
        #[arg(long)]
        family: Option<String>,
        /// Apply the Kaehler-Einstein inequalities to the model run
        #[arg(long)]
        kaehler: bool,
    },
}

struct Config {
    condition_tol: f64,
    einstein_tol: f64,
    seed: u64,
    output: OutputMode,
}

fn resolve_config(cli: &Cli) -> Result<Config, String> {
    let env_tol = match std::env::var("CURV4_TOLERANCE") {
        Ok(s) => Some(
            s.parse::<f64>()
                .map_err(|_| format!("CURV4_TOLERANCE is not a number: {s:?}"))?,
        ),
        Err(_) => None,
    };
    let explicit = cli.tolerance.or(env_tol);
    if let Some(t) = explicit {
        if !t.is_finite() || t <= 0.0 {
            return Err(format!("tolerance must be positive and finite, got {t}"));
        }
    }
    Ok(Config {
        condition_tol: explicit.unwrap_or(DEFAULT_CONDITION_TOL),
        einstein_tol: explicit.unwrap_or(DEFAULT_EINSTEIN_TOL),
        seed: cli.seed,
        output: if cli.json { OutputMode::Json } else { cli.output },
    })
}

fn read_input(path: &PathBuf) -> Result<ParsedInput, CurvError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CurvError::MalformedInput(format!("{}: {e}", path.display())))?;
    parse_input(&text)
}

fn print_json<T: Serialize>(value: &T) {
    out!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

#[derive(Serialize)]
struct DecomposeOut {
    s: f64,
    scalar_part: f64,
    traceless_ricci_norm: f64,
    w_plus: [f64; 3],
    w_minus: [f64; 3],
    rho: Option<f64>,
    lambda: Option<[f64; 3]>,
    mu: Option<[f64; 3]>,
    alpha_plus: Option<[f64; 3]>,
    alpha_minus: Option<[f64; 3]>,
}

fn cmd_decompose(cfg: &Config, input: &PathBuf) -> Result<i32, CurvError> {
    let tensor = read_input(input)?.tensor();
    let rep = decompose(&tensor);
    let mut out = DecomposeOut {
        s: rep.scalar_curvature,
        scalar_part: rep.scalar_part,
        traceless_ricci_norm: rep.traceless_ricci_norm,
        w_plus: rep.weyl.w_plus,
        w_minus: rep.weyl.w_minus,
        rho: None,
        lambda: None,
        mu: None,
        alpha_plus: None,
        alpha_minus: None,
    };
    if tensor.einstein_constant(cfg.einstein_tol).is_ok() {
        let op = CurvatureOperator::from_tensor(&tensor, Basis::SelfDual);
        let spec = op.singer_thorpe_spectrum(cfg.einstein_tol)?;
        let (ap, am) = curv4::conditions::alpha(&spec);
        out.rho = Some(spec.rho());
        out.lambda = Some(spec.lambda());
        out.mu = Some(spec.mu());
        out.alpha_plus = Some(ap);
        out.alpha_minus = Some(am);
    }
    match cfg.output {
        OutputMode::Json => print_json(&out),
        OutputMode::Human => {
            out!("scalar curvature s      = {}", out.s);
            out!("scalar part s/12        = {}", out.scalar_part);
            out!("traceless Ricci norm    = {:.3e}", out.traceless_ricci_norm);
            out!("W+ eigenvalues          = {:?}", out.w_plus);
            out!("W- eigenvalues          = {:?}", out.w_minus);
            match out.rho {
                Some(rho) => {
                    out!("Einstein constant rho   = {rho}");
                    out!("lambda                  = {:?}", out.lambda.unwrap());
                    out!("mu                      = {:?}", out.mu.unwrap());
                    out!("alpha+ (lambda+mu-rho)  = {:?}", out.alpha_plus.unwrap());
                    out!("alpha- (lambda-mu-rho)  = {:?}", out.alpha_minus.unwrap());
                }
                None => out!("input is not Einstein at tolerance {:.1e}", cfg.einstein_tol),
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct CheckOut {
    report: ConditionReport,
    required: Vec<String>,
    passed: bool,
}

fn flag_value(report: &ConditionReport, name: &str) -> Option<bool> {
    match name {
        "nic" => Some(report.nic),
        "nnic" => Some(report.nnic),
        "npco" => Some(report.npco),
        "supk" => Some(report.supk),
        _ => None,
    }
}

fn cmd_check(
    cfg: &Config,
    input: &PathBuf,
    require: &[String],
    require_einstein: bool,
) -> Result<i32, CurvError> {
    let tensor = read_input(input)?.tensor();
    if require_einstein {
        tensor.einstein_constant(cfg.einstein_tol)?;
    }
    let op = CurvatureOperator::from_tensor(&tensor, Basis::SelfDual);
    let report = condition_report(&op, cfg.condition_tol)?;
    let mut passed = true;
    for name in require {
        match flag_value(&report, name) {
            Some(v) => passed &= v,
            None => {
                return Err(CurvError::MalformedInput(format!(
                    "unknown condition {name:?}; expected nic, nnic, npco or supk"
                )))
            }
        }
    }
    match cfg.output {
        OutputMode::Json => print_json(&CheckOut {
            report: report.clone(),
            required: require.to_vec(),
            passed,
        }),
        OutputMode::Human => {
            out!("rho                = {}", report.rho);
            out!(
                "isotropic max K    = {} (classical frame sum 4K = {})",
                report.nic_margin,
                4.0 * report.nic_margin
            );
            out!(
                "isotropic min K    = {} (frame sum 4K = {})",
                report.nnic_margin,
                4.0 * report.nnic_margin
            );
            out!("operator max eig   = {}", report.npco_margin);
            out!("sectional range    = [{}, {}]", report.sectional_min, report.sectional_max);
            out!("P+ = (s/6)I - W+   = {:?}", report.p_plus);
            out!("P- = (s/6)I - W-   = {:?}", report.p_minus);
            out!(
                "flags              : nic={} nnic={} npco={} supk={}",
                report.nic, report.nnic, report.npco, report.supk
            );
            out!(
                "required           : {:?} -> {}",
                require,
                if passed { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct InvariantsOut {
    densities: InvariantDensities,
    global: GlobalInvariants,
    reports: Vec<InequalityReport>,
}

fn reports_pass(reports: &[InequalityReport]) -> bool {
    reports.iter().all(|r| r.satisfied)
}

fn print_reports_human(reports: &[InequalityReport]) {
    for r in reports {
        let status = if !r.applicable {
            "  n/a"
        } else if !r.satisfied {
            " FAIL"
        } else if r.equality {
            "EQUAL"
        } else {
            " pass"
        };
        out!(
            "{status}  {:<32} lhs = {:>14.8} rhs = {:>14.8} slack = {:.3e}",
            r.name, r.lhs, r.rhs, r.slack
        );
    }
}

fn cmd_invariants(
    cfg: &Config,
    input: &PathBuf,
    volume: f64,
    kaehler: bool,
) -> Result<i32, CurvError> {
    let tensor = read_input(input)?.tensor();
    let d = densities(&tensor, cfg.einstein_tol)?;
    let rho = tensor.einstein_constant(cfg.einstein_tol)?;
    let global = GlobalInvariants::from_constant_model(&d, rho, volume)?;
    let op = CurvatureOperator::from_tensor(&tensor, Basis::SelfDual);
    let cond = condition_report(&op, cfg.condition_tol)?;
    let reports = inequality_suite(&global, &cond, kaehler, cfg.condition_tol)?;
    let pass = reports_pass(&reports);
    match cfg.output {
        OutputMode::Json => print_json(&InvariantsOut { densities: d, global, reports }),
        OutputMode::Human => {
            out!("euler density      = {} (diagonal form {})", d.euler_density, d.diag_euler);
            out!(
                "signature density  = {} (diagonal form {})",
                d.signature_density, d.diag_signature
            );
            // integrality is informative only; densities are the real data
            let near_int = |x: f64| {
                if (x - x.round()).abs() < 1e-6 {
                    format!("{x} (integral {})", x.round())
                } else {
                    format!("{x} (not near an integer)")
                }
            };
            out!(
                "chi = {}  tau = {}  (volume {})",
                near_int(global.chi),
                near_int(global.tau),
                global.volume
            );
            print_reports_human(&reports);
        }
    }
    Ok(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct ModelOut {
    name: &'static str,
    lambda: [f64; 3],
    mu: [f64; 3],
    rho: f64,
}

fn cmd_models(cfg: &Config) -> Result<i32, CurvError> {
    let cat = catalog();
    match cfg.output {
        OutputMode::Json => {
            let out: Vec<ModelOut> = cat
                .iter()
                .map(|m| ModelOut {
                    name: m.name,
                    lambda: m.spectrum.lambda(),
                    mu: m.spectrum.mu(),
                    rho: m.spectrum.rho(),
                })
                .collect();
            print_json(&out);
        }
        OutputMode::Human => {
            for m in &cat {
                out!(
                    "{:<6} rho = {:>4}  lambda = {:?}  mu = {:?}  ({})",
                    m.name,
                    m.spectrum.rho(),
                    m.spectrum.lambda(),
                    m.spectrum.mu(),
                    m.notes
                );
            }
        }
    }
    Ok(0)
}

fn cmd_extremal(
    cfg: &Config,
    family: &str,
    rho: f64,
    objective: Option<&str>,
    direction: Option<&str>,
    samples: Option<usize>,
) -> Result<i32, CurvError> {
    let family = Family::parse(family)
        .ok_or_else(|| CurvError::MalformedInput(format!("unknown family {family:?}")))?;
    let objective = match objective {
        Some(s) => Some(
            Objective::parse(s)
                .ok_or_else(|| CurvError::MalformedInput(format!("unknown objective {s:?}")))?,
        ),
        None => None,
    };
    let direction = match direction {
        Some(s) => Some(
            Direction::parse(s)
                .ok_or_else(|| CurvError::MalformedInput(format!("unknown direction {s:?}")))?,
        ),
        None => None,
    };
    let cs = build_constraints(family, rho)?;
    let mut results: Vec<SearchResult> = Vec::new();
    let mut mismatch = false;
    for (obj, dir) in supported_runs(family) {
        if objective.is_some_and(|o| o != obj) || direction.is_some_and(|d| d != dir) {
            continue;
        }
        let exact = maximize(&cs, obj, dir)?;
        if let Some(n) = samples {
            let sampled = sampled_optimum(&cs, obj, dir, n, cfg.seed)?;
            if (sampled.optimum - exact.optimum).abs() > 1e-6 * (1.0 + exact.optimum.abs()) {
                mismatch = true;
            }
            results.push(exact);
            results.push(sampled);
        } else {
            results.push(exact);
        }
    }
    match cfg.output {
        OutputMode::Json => print_json(&results),
        OutputMode::Human => {
            for r in &results {
                out!(
                    "{} {} {:?} -> {:>14.9}  ({:?}, witness {:?})",
                    r.family, r.objective, r.direction, r.optimum, r.method, r.witness
                );
            }
            if mismatch {
                out!("sampled cross-check DISAGREES with the exact optimum");
            }
        }
    }
    Ok(if mismatch { 1 } else { 0 })
}

fn model_reports(
    cfg: &Config,
    name: &str,
    volume: Option<f64>,
    kaehler_flag: bool,
) -> Result<Vec<InequalityReport>, CurvError> {
    let model = find_model(name)
        .ok_or_else(|| CurvError::MalformedInput(format!("unknown model {name:?}")))?;
    let volume = volume.unwrap_or(model.canonical_volume);
    let global =
        GlobalInvariants::from_constant_model(&model.densities, model.spectrum.rho(), volume)?;
    let cond = model.conditions(cfg.condition_tol)?;
    let mut reports =
        inequality_suite(&global, &cond, model.kaehler || kaehler_flag, cfg.condition_tol)?;
    for r in &mut reports {
        r.name = format!("{}:{}", model.name, r.name);
    }
    Ok(reports)
}

fn bound_reports(rho: f64) -> Result<Vec<InequalityReport>, CurvError> {
    let mut reports = verify_pointwise_bounds(rho)?;
    for r in &mut reports {
        r.name = format!("rho={rho}:{}", r.name);
    }
    Ok(reports)
}

fn cmd_verify(
    cfg: &Config,
    model: Option<&str>,
    volume: Option<f64>,
    rho: Option<f64>,
    family: Option<&str>,
    kaehler: bool,
) -> Result<i32, CurvError> {
    let mut reports: Vec<InequalityReport> = Vec::new();
    if let Some(f) = family {
        let fam = Family::parse(f)
            .ok_or_else(|| CurvError::MalformedInput(format!("unknown family {f:?}")))?;
        let r = rho.ok_or_else(|| CurvError::MalformedInput("--family requires --rho".into()))?;
        let cs = build_constraints(fam, r)?;
        let anchor = anchor_point(fam, r);
        // the family is certified nonempty by its model point
        reports.push(curv4::invariants::make_report(
            &format!("{}:anchor_feasible", fam.label()),
            cs.polytope.violation(&anchor),
            1e-9,
            true,
            1e-9,
        ));
    }
    match (model, rho) {
        (Some(name), _) => {
            reports.extend(model_reports(cfg, name, volume, kaehler)?);
            if let Some(r) = rho {
                reports.extend(bound_reports(r)?);
            }
        }
        (None, Some(r)) => reports.extend(bound_reports(r)?),
        (None, None) if family.is_some() => {}
        (None, None) => {
            for m in catalog() {
                reports.extend(model_reports(cfg, m.name, None, kaehler)?);
            }
            for r in [-1.0, -6.0] {
                reports.extend(bound_reports(r)?);
            }
        }
    }
    let pass = reports_pass(&reports);
    match cfg.output {
        OutputMode::Json => print_json(&reports),
        OutputMode::Human => {
            print_reports_human(&reports);
            out!("overall: {}", if pass { "pass" } else { "FAIL" });
        }
    }
    Ok(if pass { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<i32, CurvError> {
    let cfg = resolve_config(cli).map_err(CurvError::MalformedInput)?;
    match &cli.command {
        Command::Decompose { input } => cmd_decompose(&cfg, input),
        Command::Check { input, require, require_einstein } => {
            cmd_check(&cfg, input, require, *require_einstein)
        }
        Command::Invariants { input, volume, kaehler } => {
            cmd_invariants(&cfg, input, *volume, *kaehler)
        }
        Command::Models => cmd_models(&cfg),
        Command::Extremal { family, rho, objective, direction, samples } => cmd_extremal(
            &cfg,
            family,
            *rho,
            objective.as_deref(),
            direction.as_deref(),
            *samples,
        ),
        Command::Verify { model, volume, rho, family, kaehler } => cmd_verify(
            &cfg,
            model.as_deref(),
            *volume,
            *rho,
            family.as_deref(),
            *kaehler,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
