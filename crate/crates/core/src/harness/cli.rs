use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::matrix::{verify_all, EOS_GATE, EOS_WINDOW};
use super::selftest::selftest;
use super::svg::{line_chart, PlotOptions};
use super::sweep::{sweep, sweep_table, SweepParam};
use super::telemetry_io::{read_json, read_records, write_csv_to, write_json_to};
use crate::analysis::{applicable_verdicts, check_stepsize_domination, detect_edge_of_stability, verify_by_id, THEOREM_IDS};
use crate::config::{OptimizerKind, RunConfig};
use crate::domain::Domain;
use crate::error::Error;
use crate::problems::{build_problem, ProblemSpec, PROBLEM_IDS};
use crate::report::RunReport;
use crate::telemetry::StepRecord;

/// Exit status: every check passed.
pub const EXIT_OK: i32 = 0;
/// Exit status: a verification failed or was not applicable.
pub const EXIT_FAILED: i32 = 1;
/// Exit status: bad arguments, ids or input files.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "optbench", version, about = "GD, NGD, DoG and DoWG on convex test problems, with bound verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one optimizer on one problem and write its telemetry.
    Run(RunArgs),
    /// Check bounds for a saved JSON report, or run the whole acceptance matrix.
    Verify(VerifyArgs),
    /// Run one configuration per parameter value and tabulate the bounds.
    Sweep(SweepArgs),
    /// Draw one telemetry column as an SVG line chart.
    Plot(PlotArgs),
    /// Lemma fuzzing, gradient and constant checks, projection properties.
    Selftest,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// Problem id (quadratic1d, ridge, logistic, abs_sum, max_affine, ridge-csv:PATH, logistic-csv:PATH).
    #[arg(long)]
    problem: String,
    #[arg(long, value_parser = parse_optimizer)]
    optimizer: OptimizerKind,
    /// Stepsize (gd, ngd).
    #[arg(long)]
    eta: Option<f64>,
    /// Initial distance estimate (dog, dowg); defaults to 1e-6.
    #[arg(long = "r-eps")]
    r_eps: Option<f64>,
    /// full, ball:R (centered at the minimizer when known) or box:a,b.
    #[arg(long)]
    domain: Option<String>,
    /// Seed for generating the problem instance.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated starting point; defaults to the problem's own.
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    steps: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run the built-in acceptance matrix.
    #[arg(long, conflicts_with_all = ["theorem", "input"])]
    all: bool,
    /// Bound id, `stepsize-domination`, `edge-of-stability`, or `applicable`.
    #[arg(long, requires = "input")]
    theorem: Option<String>,
    /// JSON report written by `run --format json`.
    #[arg(long = "in", requires = "theorem")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// steps, eta, r-eps or seed.
    #[arg(long)]
    param: String,
    /// Comma-separated values of the swept parameter.
    #[arg(long)]
    values: String,
    /// Horizon when steps is not the swept parameter.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Directory for one JSON report per value.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Series {
    FValue,
    FGap,
    GradNorm,
    Stepsize,
    EffectiveStepsize,
    Rbar,
    V,
    DistanceToOpt,
    AvgFGap,
}

impl Series {
    fn name(self) -> &'static str {
        match self {
            Series::FValue => "f_value",
            Series::FGap => "f_gap",
            Series::GradNorm => "grad_norm",
            Series::Stepsize => "stepsize",
            Series::EffectiveStepsize => "effective_stepsize",
            Series::Rbar => "rbar",
            Series::V => "v",
            Series::DistanceToOpt => "distance_to_opt",
            Series::AvgFGap => "avg_f_gap",
        }
    }

    fn get(self, r: &StepRecord) -> Option<f64> {
        match self {
            Series::FValue => Some(r.f_value),
            Series::FGap => r.f_gap,
            Series::GradNorm => Some(r.grad_norm),
            Series::Stepsize => Some(r.stepsize),
            Series::EffectiveStepsize => Some(r.effective_stepsize),
            Series::Rbar => r.rbar,
            Series::V => r.v,
            Series::DistanceToOpt => r.distance_to_opt,
            Series::AvgFGap => r.avg_f_gap,
        }
    }
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Telemetry CSV, or a JSON report.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    series: Series,
    #[arg(long)]
    log_y: bool,
    #[arg(long)]
    title: Option<String>,
}

fn parse_optimizer(s: &str) -> Result<OptimizerKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Failed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("{what}: `{v}` is not a number")))
        })
        .collect()
}

/// `full`, `ball:R` centered at the minimizer (or the origin), or `box:a,b` as `[a, b]^d`.
pub fn parse_domain(s: &str, spec: &ProblemSpec) -> Result<Domain, Error> {
    let d = spec.dim();
    if s == "full" {
        return Ok(Domain::full());
    }
    if let Some(r) = s.strip_prefix("ball:") {
        let radius: f64 = r.parse().map_err(|_| Error::Config(format!("bad ball radius `{r}`")))?;
        let center = spec.objective.x_star().map_or_else(|| vec![0.0; d], <[f64]>::to_vec);
        return Domain::ball(center, radius);
    }
    if let Some(bounds) = s.strip_prefix("box:") {
        let parts: Vec<&str> = bounds.split(',').collect();
        if let [a, b] = parts[..] {
            let parse = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad box bound `{v}`")));
            return Domain::boxed(vec![parse(a)?; d], vec![parse(b)?; d]);
        }
    }
    Err(Error::Config(format!("unknown domain `{s}` (expected full, ball:R or box:a,b)")))
}

fn problem_and_config(args: &ProblemArgs, steps: usize) -> Result<(ProblemSpec, RunConfig), Failure> {
    let opt = args.optimizer;
    if opt.needs_eta() {
        if args.r_eps.is_some() {
            return Err(Failure::Usage(format!("--r-eps is not accepted by {opt}")));
        }
        if args.eta.is_none() {
            return Err(Failure::Usage(format!("{opt} requires --eta")));
        }
    } else if args.eta.is_some() {
        return Err(Failure::Usage(format!("--eta is not accepted by {opt}; it takes --r-eps")));
    }
    let spec = build_problem(&args.problem, args.seed)?;
    let domain = match &args.domain {
        Some(s) => parse_domain(s, &spec)?,
        None => spec.domain.clone(),
    };
    let spec = spec.with_domain(domain);
    let mut config = spec.config(opt, steps);
    config.eta = args.eta;
    if let Some(r) = args.r_eps {
        config.r_eps = Some(r);
    }
    if let Some(x0) = &args.x0 {
        config.x0 = Some(parse_list(x0, "--x0")?);
    }
    config.validate()?;
    Ok((spec, config))
}

fn cmd_run(args: RunArgs, stdout: &mut dyn Write) -> CliResult {
    let (spec, config) = problem_and_config(&args.problem, args.steps)?;
    let mut report = spec.run(&config)?;
    report.verdicts = applicable_verdicts(&report, &spec);
    let mut buf = Vec::new();
    match args.format {
        Format::Csv => write_csv_to(&report.records, &mut buf)?,
        Format::Json => write_json_to(&report, &mut buf)?,
    }
    match &args.out {
        Some(path) => {
            std::fs::write(path, &buf)?;
            writeln!(stdout, "{}", run_summary(&report))?;
        }
        None => stdout.write_all(&buf)?,
    }
    Ok(())
}

fn run_summary(report: &RunReport) -> String {
    let last = report.records.last();
    format!(
        "{} {} on {}: status {}, {} steps, best f = {:.6e}{}",
        report.config.optimizer,
        report.config.eta.map_or_else(String::new, |e| format!("eta={e}")),
        report.config.problem,
        report.status,
        report.steps_run(),
        report.best_value,
        last.and_then(|r| r.f_gap).map_or_else(String::new, |g| format!(", last gap = {g:.6e}"))
    )
}

fn spec_for_report(report: &RunReport) -> Result<ProblemSpec, Failure> {
    Ok(build_problem(&report.config.problem, report.config.seed)?.with_domain(report.config.domain.clone()))
}

fn cmd_verify(args: VerifyArgs, stdout: &mut dyn Write) -> CliResult {
    if args.all {
        let outcome = verify_all()?;
        stdout.write_all(outcome.render().as_bytes())?;
        return if outcome.passed() { Ok(()) } else { Err(Failure::Failed) };
    }
    let (Some(theorem), Some(input)) = (args.theorem, args.input) else {
        return Err(Failure::Usage("verify needs --all, or --theorem ID --in REPORT.json".into()));
    };
    if !input.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        return Err(Failure::Usage("verification needs a JSON report (run --format json)".into()));
    }
    let report = read_json(&input)?;
    let spec = spec_for_report(&report)?;
    match theorem.as_str() {
        "applicable" => {
            let verdicts = applicable_verdicts(&report, &spec);
            for v in &verdicts {
                writeln!(stdout, "{v}")?;
            }
            if verdicts.is_empty() {
                writeln!(stdout, "no bound applies to this run")?;
                return Err(Failure::Failed);
            }
            if verdicts.iter().all(|v| v.satisfied) { Ok(()) } else { Err(Failure::Failed) }
        }
        "stepsize-domination" => match check_stepsize_domination(&report) {
            Ok(s) => {
                writeln!(stdout, "{}", serde_json::to_string(&s).map_err(Error::from)?)?;
                if s.holds() { Ok(()) } else { Err(Failure::Failed) }
            }
            Err(na) => {
                writeln!(stdout, "{na}")?;
                Err(Failure::Failed)
            }
        },
        "edge-of-stability" => match detect_edge_of_stability(&report, &spec, EOS_WINDOW) {
            Ok(e) => {
                writeln!(stdout, "{}", serde_json::to_string(&e).map_err(Error::from)?)?;
                if e.fraction_in_band >= EOS_GATE { Ok(()) } else { Err(Failure::Failed) }
            }
            Err(na) => {
                writeln!(stdout, "{na}")?;
                Err(Failure::Failed)
            }
        },
        id => match verify_by_id(id, &report, &spec) {
            None => Err(Failure::Usage(format!(
                "unknown theorem `{id}`; expected one of {}, stepsize-domination, edge-of-stability, applicable",
                THEOREM_IDS.join(", ")
            ))),
            Some(Ok(v)) => {
                writeln!(stdout, "{v}")?;
                writeln!(stdout, "{}", serde_json::to_string(&v).map_err(Error::from)?)?;
                if v.satisfied { Ok(()) } else { Err(Failure::Failed) }
            }
            Some(Err(na)) => {
                writeln!(stdout, "{na}")?;
                Err(Failure::Failed)
            }
        },
    }
}

fn cmd_sweep(args: SweepArgs, stdout: &mut dyn Write) -> CliResult {
    let param: SweepParam = args.param.parse()?;
    let values = parse_list(&args.values, "--values")?;
    let (_, base) = problem_and_config(&args.problem, args.steps)?;
    let problem = &args.problem;
    let reports = sweep(&base, param, &values, |c| {
        let spec = build_problem(&problem.problem, c.seed)?;
        let domain = match &problem.domain {
            Some(s) => parse_domain(s, &spec)?,
            None => spec.domain.clone(),
        };
        Ok(spec.with_domain(domain))
    })?;
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir)?;
        for (value, report) in values.iter().zip(&reports) {
            let path = dir.join(format!("{}-{}-{}-{value}.json", report.config.problem, report.config.optimizer, args.param));
            let mut buf = Vec::new();
            write_json_to(report, &mut buf)?;
            std::fs::write(path, buf)?;
        }
    }
    stdout.write_all(sweep_table(param, &values, &reports).as_bytes())?;
    let ok = reports.iter().all(|r| r.verdicts.iter().all(|v| v.satisfied));
    if ok { Ok(()) } else { Err(Failure::Failed) }
}

fn cmd_plot(args: PlotArgs, stdout: &mut dyn Write) -> CliResult {
    let records = read_records(&args.input)?;
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| args.series.get(r).map(|y| (r.step as f64, y)))
        .collect();
    let opts = PlotOptions {
        title: args.title.unwrap_or_else(|| file_stem(&args.input)),
        y_label: args.series.name().into(),
        log_y: args.log_y,
        ..PlotOptions::default()
    };
    std::fs::write(&args.out, line_chart(&points, &opts))?;
    writeln!(stdout, "wrote {} points to {}", points.len(), args.out.display())?;
    Ok(())
}

fn file_stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn cmd_selftest(stdout: &mut dyn Write) -> CliResult {
    let outcome = selftest()?;
    stdout.write_all(outcome.render().as_bytes())?;
    if outcome.passed() { Ok(()) } else { Err(Failure::Failed) }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Plot(a) => cmd_plot(a, stdout),
        Command::Selftest => cmd_selftest(stdout),
    };
    let _ = stdout.flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Failed) => EXIT_FAILED,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            if msg.starts_with("unknown problem") {
                let _ = writeln!(stderr, "known problems: {}, ridge-csv:PATH, logistic-csv:PATH", PROBLEM_IDS.join(", "));
            }
            EXIT_USAGE
        }
    }
}
