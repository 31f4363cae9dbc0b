//! Command-line driver behind the `mmot` binary.
//!
//! Every subcommand writes one JSON artifact, to `--out` or to stdout, and a
//! one-line summary to stderr. Exit codes: 0 success or PASS, 1 a FAIL
//! verdict (violation found, positive audit gap, unmet expectation), 2 usage
//! or input errors, 3 refusal by a resource guard.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::costs::{CostSpec, Objective};
use crate::discretization::{convergence_report, discretize_plan, plan_partition, report_csv, DeltaSchedule, RepRule};
use crate::error::Error;
use crate::experiments::{
    run_counterexample, run_gamma_experiment, verify_optimality_theorem, Alpha, GammaConfig, RunStatus, VerifyConfig,
};
use crate::measures::json::{mode_of, AnyCoupling};
use crate::measures::{DiscreteCoupling, DiscreteMeasure};
use crate::monotonicity::{check_cm, check_finite_optimality, check_icm, rationalize_pair, SearchGuard};
use crate::scalar::{parse_rational, Rational, Scalar, WeightMode};
use crate::solvers::{solve, MotInstance, SolverGuard};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Parser)]
#[command(name = "mmot", version, about = "Discrete multi-marginal optimal transport")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a transport instance exactly.
    Solve(SolveArgs),
    /// Search a plan's support for a c-cyclical monotonicity violation.
    CheckCm(CheckArgs),
    /// Search a plan's support for an infinite c-cyclical monotonicity violation.
    CheckIcm(CheckArgs),
    /// Compare random submeasures of a plan with the optimum between their marginals.
    AuditFinite(AuditArgs),
    /// Re-weight two plans with equal marginals to rational weights.
    Rationalize(RationalizeArgs),
    /// Discretize a plan on dyadic partitions.
    Discretize(DiscretizeArgs),
    /// Run a Gamma-convergence experiment, optionally with the full optimality check.
    Gamma(GammaArgs),
    /// The irrational rotation under the equality-indicator cost.
    Counterexample(CounterexampleArgs),
}

#[derive(Args)]
struct Output {
    /// Weight arithmetic; defaults to the mode of the input file.
    #[arg(long)]
    mode: Option<WeightMode>,
    /// Write the JSON artifact here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Override the instance objective.
    #[arg(long)]
    objective: Option<Objective>,
    #[arg(long, default_value_t = SolverGuard::default().max_cells)]
    guard_cells: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    plan: PathBuf,
    /// Cost as a JSON file or inline JSON object.
    #[arg(long)]
    cost: String,
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    #[arg(long, default_value_t = SearchGuard::default().max_evals)]
    guard_evals: u128,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    plan: PathBuf,
    #[arg(long)]
    cost: String,
    #[arg(long, default_value_t = Objective::Sum)]
    objective: Objective,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Largest submeasure size.
    #[arg(long, default_value_t = 4)]
    lmax: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = SolverGuard::default().max_cells)]
    guard_cells: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct RationalizeArgs {
    /// The two plans, as `--plan a.json --plan b.json`.
    #[arg(long, num_args = 1, required = true)]
    plan: Vec<PathBuf>,
    /// Positivity tolerance, as `p/q` or a decimal.
    #[arg(long, default_value = "1/100")]
    eps: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepArg {
    Lexicographic,
    Centroid,
}

impl From<RepArg> for RepRule {
    fn from(r: RepArg) -> Self {
        match r {
            RepArg::Lexicographic => RepRule::Lexicographic,
            RepArg::Centroid => RepRule::CentroidNearest,
        }
    }
}

#[derive(Args)]
struct DiscretizeArgs {
    #[arg(long)]
    plan: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    levels: Vec<u32>,
    /// Needed for `--report`.
    #[arg(long)]
    cost: Option<String>,
    #[arg(long, default_value_t = Objective::Sum)]
    objective: Objective,
    #[arg(long, value_enum, default_value_t = RepArg::Lexicographic)]
    rep: RepArg,
    /// Write the convergence table as CSV.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct GammaArgs {
    /// Experiment file with `plan`, `cost`, `objective`, `levels` and
    /// optionally `k_max`, `analytic`, `trials`, `seed`.
    #[arg(long, conflicts_with_all = ["plan", "cost"])]
    config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    plan: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    cost: Option<String>,
    #[arg(long)]
    objective: Option<Objective>,
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<u32>>,
    /// Also run the monotonicity search and the finite-optimality audit.
    #[arg(long)]
    kmax: Option<usize>,
    /// Known optimal value of the limit problem.
    #[arg(long)]
    analytic: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = SolverGuard::default().max_cells)]
    guard_cells: usize,
    #[arg(long, default_value_t = SearchGuard::default().max_evals)]
    guard_evals: u128,
    /// Write the per-level table as CSV.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// `sqrt2m1`, `golden`, `p/q` or a decimal.
    #[arg(long, default_value = "sqrt2m1")]
    alpha: Alpha,
    #[arg(long, default_value_t = 30)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    kmax: usize,
    #[arg(long, default_value_t = SolverGuard::default().max_cells)]
    guard_cells: usize,
    #[arg(long, default_value_t = SearchGuard::default().max_evals)]
    guard_evals: u128,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Run(e) if e.is_guard() => EXIT_GUARD,
            _ => EXIT_USAGE,
        }
    }

    fn in_file(self, path: &Path) -> Self {
        match self {
            Failure::Run(e) if !e.is_guard() => Failure::Usage(format!("{}: {e}", path.display())),
            other => other,
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Outcome {
    artifact: Value,
    summary: String,
    code: i32,
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (out, result) = match cli.command {
        Command::Solve(a) => (a.output.out.clone(), solve_cmd(&a)),
        Command::CheckCm(a) => (a.output.out.clone(), check_cmd(&a, false)),
        Command::CheckIcm(a) => (a.output.out.clone(), check_cmd(&a, true)),
        Command::AuditFinite(a) => (a.output.out.clone(), audit_cmd(&a)),
        Command::Rationalize(a) => (a.output.out.clone(), rationalize_cmd(&a)),
        Command::Discretize(a) => (a.output.out.clone(), discretize_cmd(&a)),
        Command::Gamma(a) => (a.output.out.clone(), gamma_cmd(&a)),
        Command::Counterexample(a) => (a.out.clone(), counterexample_cmd(&a)),
    };
    match result.and_then(|o| emit(&o, out.as_deref()).map(|()| o)) {
        Ok(o) => {
            eprintln!("{}", o.summary);
            o.code
        }
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("mmot: error: {msg}"),
                Failure::Run(e) => eprintln!("mmot: error: {e}"),
            }
            f.code()
        }
    }
}

fn emit(o: &Outcome, out: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(&o.artifact).expect("artifact serialises");
    text.push('\n');
    match out {
        Some(p) => write_file(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Byte offset of a 1-based line/column position.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let before: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (before + column.saturating_sub(1)).min(text.len())
}

fn parse_json_text(text: &str, origin: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| {
        Failure::Usage(format!(
            "{origin}: parse error at byte {}: {e}",
            byte_offset(text, e.line(), e.column())
        ))
    })
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_json_text(&text, &path.display().to_string())
}

/// A cost given as a file path or an inline JSON object.
fn load_cost(arg: &str) -> CliResult<CostSpec> {
    if arg.trim_start().starts_with('{') {
        let v = parse_json_text(arg, "--cost")?;
        CostSpec::from_json(&v).map_err(|e| Failure::Usage(format!("--cost: {e}")))
    } else {
        let path = Path::new(arg);
        CostSpec::from_json(&read_json(path)?).map_err(|e| Failure::from(e).in_file(path))
    }
}

fn coupling_as<W: Scalar>(any: AnyCoupling) -> crate::Result<DiscreteCoupling<W>> {
    match any {
        AnyCoupling::Rational(c) => c.map_weights(|w| W::from_rational(w)),
        AnyCoupling::Float(c) => c.map_weights(|w| W::from_f64(*w)),
    }
}

fn read_coupling(path: &Path) -> CliResult<AnyCoupling> {
    AnyCoupling::from_json(&read_json(path)?).map_err(|e| Failure::from(e).in_file(path))
}

fn chosen_mode(flag: Option<WeightMode>, file: WeightMode) -> WeightMode {
    flag.unwrap_or(file)
}

macro_rules! in_mode {
    ($mode:expr, $f:ident ( $($arg:expr),* )) => {
        match $mode {
            WeightMode::Rational => $f::<Rational>($($arg),*),
            WeightMode::Float => $f::<f64>($($arg),*),
        }
    };
}

fn solve_cmd(a: &SolveArgs) -> CliResult<Outcome> {
    let v = read_json(&a.instance)?;
    let file_mode = v
        .get("marginals")
        .and_then(|m| m.get(0))
        .ok_or_else(|| Failure::Usage(format!("{}: instance has no marginals", a.instance.display())))
        .and_then(|m| mode_of(m).map_err(|e| Failure::from(e).in_file(&a.instance)))?;
    in_mode!(chosen_mode(a.output.mode, file_mode), solve_in(a, &v, file_mode))
}

fn instance_as<W: Scalar>(v: &Value, file_mode: WeightMode) -> crate::Result<MotInstance<W>> {
    fn convert<V: Scalar, W: Scalar>(inst: MotInstance<V>) -> crate::Result<MotInstance<W>> {
        let marginals = inst
            .marginals()
            .iter()
            .map(|m| m.map_weights(|w| W::from_rational(&w.to_rational())))
            .collect::<crate::Result<Vec<DiscreteMeasure<W>>>>()?;
        MotInstance::new(marginals, inst.cost().clone(), inst.objective())
    }
    match file_mode {
        WeightMode::Rational => convert(MotInstance::<Rational>::from_json(v)?),
        WeightMode::Float => convert(MotInstance::<f64>::from_json(v)?),
    }
}

fn solve_in<W: Scalar>(a: &SolveArgs, v: &Value, file_mode: WeightMode) -> CliResult<Outcome> {
    let mut inst = instance_as::<W>(v, file_mode).map_err(|e| Failure::from(e).in_file(&a.instance))?;
    if let Some(o) = a.objective {
        inst = inst.with_objective(o);
    }
    let sol = solve(
        &inst,
        &SolverGuard {
            max_cells: a.guard_cells,
        },
    )?;
    Ok(Outcome {
        summary: format!("{} optimum {} ({} atoms)", inst.objective(), sol.value, sol.plan.len()),
        artifact: sol.to_json(),
        code: EXIT_OK,
    })
}

fn check_cmd(a: &CheckArgs, infinite: bool) -> CliResult<Outcome> {
    let any = read_coupling(&a.plan)?;
    let cost = load_cost(&a.cost)?;
    in_mode!(
        chosen_mode(a.output.mode, any.mode()),
        check_in(a, any, &cost, infinite)
    )
}

fn check_in<W: Scalar>(a: &CheckArgs, any: AnyCoupling, cost: &CostSpec, infinite: bool) -> CliResult<Outcome> {
    let plan = coupling_as::<W>(any)?;
    let guard = SearchGuard {
        max_evals: a.guard_evals,
        ..SearchGuard::default()
    };
    let support = plan.support();
    let cert = if infinite {
        check_icm::<W>(&support, cost, a.kmax, &guard)?
    } else {
        check_cm::<W>(&support, cost, a.kmax, &guard)?
    };
    let kind = if infinite { "icm" } else { "cm" };
    let summary = match &cert {
        Some(c) => format!("{kind}: violation with k = {}: {} -> {}", c.k(), c.before, c.after),
        None => format!("{kind}: no violation up to k = {}", a.kmax),
    };
    Ok(Outcome {
        code: if cert.is_some() { EXIT_FAIL } else { EXIT_OK },
        artifact: json!({
            "check": kind,
            "k_max": a.kmax,
            "support_size": support.len(),
            "certificate": cert.as_ref().map(|c| c.to_json()),
        }),
        summary,
    })
}

fn audit_cmd(a: &AuditArgs) -> CliResult<Outcome> {
    let any = read_coupling(&a.plan)?;
    let cost = load_cost(&a.cost)?;
    in_mode!(chosen_mode(a.output.mode, any.mode()), audit_in(a, any, &cost))
}

fn audit_in<W: Scalar>(a: &AuditArgs, any: AnyCoupling, cost: &CostSpec) -> CliResult<Outcome> {
    let plan = coupling_as::<W>(any)?;
    let report = check_finite_optimality(
        &plan,
        cost,
        a.objective,
        a.trials,
        a.lmax,
        a.seed,
        &SolverGuard {
            max_cells: a.guard_cells,
        },
    )?;
    let failed = report.trials.iter().filter(|t| !t.passed()).count();
    Ok(Outcome {
        code: if report.passed() { EXIT_OK } else { EXIT_FAIL },
        summary: format!(
            "audit: {failed} of {} trials beaten by the optimum",
            report.trials.len()
        ),
        artifact: report.to_json(),
    })
}

fn parse_eps(s: &str) -> CliResult<Rational> {
    if s.contains('/') {
        return parse_rational(s).map_err(|e| Failure::Usage(format!("--eps: {e}")));
    }
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(Rational::from_f64(x)),
        _ => Err(Failure::Usage(format!("--eps: bad value {s:?}"))),
    }
}

fn rationalize_cmd(a: &RationalizeArgs) -> CliResult<Outcome> {
    let [pa, pb] = a.plan.as_slice() else {
        return Err(Failure::Usage("rationalize takes exactly two --plan files".into()));
    };
    let eps = parse_eps(&a.eps)?;
    let first = read_coupling(pa)?;
    let second = read_coupling(pb)?;
    in_mode!(
        chosen_mode(a.output.mode, first.mode()),
        rationalize_in(first, second, &eps)
    )
}

fn rationalize_in<W: Scalar>(first: AnyCoupling, second: AnyCoupling, eps: &Rational) -> CliResult<Outcome> {
    let a = coupling_as::<W>(first)?;
    let b = coupling_as::<W>(second)?;
    let (ra, rb) = rationalize_pair(&a, &b, eps)?;
    Ok(Outcome {
        summary: format!("rationalized {} + {} atoms", ra.len(), rb.len()),
        artifact: json!({"first": ra.to_json(), "second": rb.to_json()}),
        code: EXIT_OK,
    })
}

fn discretize_cmd(a: &DiscretizeArgs) -> CliResult<Outcome> {
    let any = read_coupling(&a.plan)?;
    let cost = a.cost.as_deref().map(load_cost).transpose()?;
    if a.report.is_some() && cost.is_none() {
        return Err(Failure::Usage("--report needs --cost".into()));
    }
    in_mode!(
        chosen_mode(a.output.mode, any.mode()),
        discretize_in(a, any, cost.as_ref())
    )
}

fn discretize_in<W: Scalar>(a: &DiscretizeArgs, any: AnyCoupling, cost: Option<&CostSpec>) -> CliResult<Outcome> {
    let plan = coupling_as::<W>(any)?;
    let schedule = DeltaSchedule::halving(plan.spaces());
    let mut levels = Vec::new();
    for &n in &a.levels {
        let part = plan_partition(&plan, n, &schedule)?;
        let alpha = discretize_plan(&plan, &part, a.rep.into())?;
        levels.push(json!({
            "n": n,
            "delta": part.delta(),
            "partition": part.to_json(),
            "plan": alpha.to_json(),
        }));
    }
    if let (Some(path), Some(cost)) = (&a.report, cost) {
        let rows = convergence_report(&plan, cost, a.objective, &a.levels, &schedule)?;
        write_file(path, &report_csv(&rows))?;
    }
    Ok(Outcome {
        summary: format!("discretized {} atoms at {} levels", plan.len(), a.levels.len()),
        artifact: json!({ "levels": levels }),
        code: EXIT_OK,
    })
}

struct GammaSetup {
    plan: AnyCoupling,
    cost: CostSpec,
    objective: Objective,
    levels: Vec<u32>,
    k_max: Option<usize>,
    analytic: Option<f64>,
    trials: Option<usize>,
    seed: Option<u64>,
}

fn config_field<T: serde::de::DeserializeOwned>(v: &Value, name: &str, path: &Path) -> CliResult<Option<T>> {
    match v.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(x) => serde_json::from_value(x.clone())
            .map(Some)
            .map_err(|e| Failure::Usage(format!("{}: {name}: {e}", path.display()))),
    }
}

fn gamma_setup_from_file(path: &Path) -> CliResult<GammaSetup> {
    let v = read_json(path)?;
    let bad = |msg: String| Failure::Usage(format!("{}: {msg}", path.display()));
    let plan = match v.get("plan") {
        Some(Value::String(p)) => read_coupling(&path.parent().unwrap_or(Path::new(".")).join(p))?,
        Some(obj) => AnyCoupling::from_json(obj).map_err(|e| bad(e.to_string()))?,
        None => return Err(bad("missing \"plan\"".into())),
    };
    let cost = CostSpec::from_json(v.get("cost").ok_or_else(|| bad("missing \"cost\"".into()))?)
        .map_err(|e| bad(e.to_string()))?;
    Ok(GammaSetup {
        plan,
        cost,
        objective: config_field(&v, "objective", path)?.unwrap_or(Objective::Sum),
        levels: config_field(&v, "levels", path)?.ok_or_else(|| bad("missing \"levels\"".into()))?,
        k_max: config_field(&v, "k_max", path)?,
        analytic: config_field(&v, "analytic", path)?,
        trials: config_field(&v, "trials", path)?,
        seed: config_field(&v, "seed", path)?,
    })
}

fn gamma_cmd(a: &GammaArgs) -> CliResult<Outcome> {
    let mut setup = match &a.config {
        Some(path) => gamma_setup_from_file(path)?,
        None => GammaSetup {
            plan: read_coupling(a.plan.as_deref().expect("clap enforces --plan"))?,
            cost: load_cost(a.cost.as_deref().expect("clap enforces --cost"))?,
            objective: Objective::Sum,
            levels: vec![1, 2, 3],
            k_max: None,
            analytic: None,
            trials: None,
            seed: None,
        },
    };
    if let Some(o) = a.objective {
        setup.objective = o;
    }
    if let Some(l) = &a.levels {
        setup.levels = l.clone();
    }
    setup.k_max = a.kmax.or(setup.k_max);
    setup.analytic = a.analytic.or(setup.analytic);
    setup.trials = a.trials.or(setup.trials);
    setup.seed = a.seed.or(setup.seed);
    let mode = chosen_mode(a.output.mode, setup.plan.mode());
    in_mode!(mode, gamma_in(a, setup))
}

fn gamma_in<W: Scalar>(a: &GammaArgs, setup: GammaSetup) -> CliResult<Outcome> {
    let plan = coupling_as::<W>(setup.plan)?;
    let mut gamma = GammaConfig::new(setup.levels);
    gamma.guard = SolverGuard {
        max_cells: a.guard_cells,
    };
    gamma.analytic = setup.analytic;
    let (run, artifact, verdict) = match setup.k_max {
        Some(k_max) => {
            let mut cfg = VerifyConfig::new(k_max, Vec::new());
            cfg.gamma = gamma;
            cfg.search.max_evals = a.guard_evals;
            cfg.trials = setup.trials.unwrap_or(cfg.trials);
            cfg.seed = setup.seed.unwrap_or(cfg.seed);
            let v = verify_optimality_theorem(&plan, &setup.cost, setup.objective, &cfg)?;
            let artifact = v.to_json();
            let verdict = Some(match &v.failed {
                None => "PASS".to_string(),
                Some((stage, reason)) => format!("FAIL at stage {} ({}): {reason}", stage.number(), stage.name()),
            });
            (v.gamma, artifact, verdict)
        }
        None => {
            let run = run_gamma_experiment(&plan, &setup.cost, setup.objective, &gamma)?;
            let artifact = run.to_json();
            (Some(run), artifact, None)
        }
    };
    if let (Some(path), Some(run)) = (&a.report, &run) {
        write_file(path, &run.to_csv())?;
    }
    let partial = run.as_ref().and_then(|r| match &r.status {
        RunStatus::Partial { level, reason } => Some(format!("refused at level {level}: {reason}")),
        RunStatus::Complete => None,
    });
    let (code, summary) = match (partial, verdict) {
        (Some(p), _) => (EXIT_GUARD, format!("gamma: {p}")),
        (None, Some(v)) => (if v == "PASS" { EXIT_OK } else { EXIT_FAIL }, format!("verdict: {v}")),
        (None, None) => {
            let levels = run.as_ref().map_or(0, |r| r.records.len());
            (EXIT_OK, format!("gamma: {levels} levels complete"))
        }
    };
    Ok(Outcome {
        artifact,
        summary,
        code,
    })
}

fn counterexample_cmd(a: &CounterexampleArgs) -> CliResult<Outcome> {
    let search = SearchGuard {
        max_evals: a.guard_evals,
        ..SearchGuard::default()
    };
    let run = run_counterexample(
        a.alpha,
        a.m,
        a.kmax,
        &search,
        &SolverGuard {
            max_cells: a.guard_cells,
        },
    )?;
    let summary = match &run.certificate {
        Some(c) => format!(
            "alpha {}: certificate with k = {} ({} -> {})",
            run.alpha,
            c.k(),
            c.before,
            c.after
        ),
        None => format!(
            "alpha {}: no certificate up to k = {}; sup cost {} vs identity {}",
            run.alpha, run.k_max, run.rotation_sup, run.identity_sup
        ),
    };
    Ok(Outcome {
        code: if run.expectation_met() { EXIT_OK } else { EXIT_FAIL },
        artifact: run.to_json(),
        summary,
    })
}
