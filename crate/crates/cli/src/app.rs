//! Argument definitions and command handlers.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use evotopo_core::persistence::render_eps;
use evotopo_core::{
    classify, Bar, Barcode, ShapeReport, SignificancePolicy, Squared, Strategy, Trajectory,
};
use serde_json::{json, Value};

use crate::parse::{parse_eps_sq, parse_interval, parse_rational, parse_window};
use crate::preset::{preset, AnalysisPlan, Preset, PRESET_NAMES};
use crate::run::{analyze, Analysis};
use crate::{config, exit_code, write_atomic, UsageError};

#[derive(Debug, Parser)]
#[command(
    name = "evotopo",
    version,
    about = "Spatial game simulation and persistent-homology shape analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in presets.
    Presets,
    /// Run a preset or config and write trajectory.txt and tallies.csv.
    Simulate(SimulateArgs),
    /// Compute the barcode of one strategy's space-time point cloud.
    Analyze(AnalyzeArgs),
    /// Classify a barcode CSV into a stability shape.
    Classify(ClassifyArgs),
    /// Simulate, analyze and classify in one go.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ScenarioArgs {
    /// Built-in scenario (see `evotopo presets`).
    #[arg(long)]
    pub preset: Option<String>,
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ScenarioArgs {
    fn resolve(&self) -> anyhow::Result<Preset> {
        match (&self.preset, &self.config) {
            (Some(name), _) => Ok(preset(name)?),
            (None, Some(path)) => config::load(path),
            (None, None) => Err(UsageError("give --preset or --config".into()).into()),
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the scenario's number of iterations.
    #[arg(long)]
    pub iterations: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BarcodeFormat {
    Csv,
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Flags that override an analysis plan.
#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Iteration range `A:B`, inclusive. Defaults to the whole trajectory.
    #[arg(long)]
    pub interval: Option<String>,
    /// Time axis scale, as `a/b` or a decimal.
    #[arg(long)]
    pub time_scale: Option<String>,
    /// Largest ε in the filtration, e.g. `2.5` or `sqrt(8)`. Capped at the
    /// enclosing radius.
    #[arg(long)]
    pub threshold: Option<String>,
}

impl PlanArgs {
    fn apply(&self, plan: &mut AnalysisPlan) -> anyhow::Result<()> {
        if let Some(iv) = &self.interval {
            plan.interval = Some(parse_interval(iv)?);
        }
        if let Some(ts) = &self.time_scale {
            plan.time_scale = parse_rational(ts)?;
        }
        if let Some(th) = &self.threshold {
            plan.threshold = Some(parse_eps_sq(th)?);
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct PolicyArgs {
    /// Significance window `LO:HI` on ε. Default `sqrt(2):2`.
    #[arg(long)]
    pub window: Option<String>,
    /// Minimum overlap with the window instead of full coverage.
    #[arg(long)]
    pub min_persistence: Option<f64>,
}

impl PolicyArgs {
    fn resolve(&self, base: SignificancePolicy) -> anyhow::Result<SignificancePolicy> {
        let (lo, hi) = match &self.window {
            Some(w) => parse_window(w)?,
            None => (base.window_low_sq, base.window_high_sq),
        };
        let mp = self.min_persistence.or(base.min_persistence);
        Ok(SignificancePolicy::new(lo, hi, mp).map_err(|e| UsageError(e.to_string()))?)
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub trajectory: PathBuf,
    /// Strategy whose cells form the point cloud.
    #[arg(long)]
    pub strategy: String,
    #[command(flatten)]
    pub plan: PlanArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// What to print on stdout; the CSV and SVG files are always written.
    #[arg(long, value_enum, default_value_t = BarcodeFormat::Text)]
    pub format: BarcodeFormat,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub barcode: PathBuf,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub iterations: Option<u64>,
    /// Override the scenario's analyzed strategy.
    #[arg(long)]
    pub strategy: Option<String>,
    #[command(flatten)]
    pub plan: PlanArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    }
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Presets => {
            for name in PRESET_NAMES {
                println!("{name:<12} {}", preset(name)?.summary);
            }
            Ok(())
        }
        Command::Simulate(a) => simulate(a),
        Command::Analyze(a) => analyze_cmd(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Pipeline(a) => pipeline(a),
    }
}

fn parse_strategy(s: &str) -> anyhow::Result<Strategy> {
    Ok(s.parse::<Strategy>()
        .map_err(|e| UsageError(e.to_string()))?)
}

fn create_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    write_atomic(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn simulate(a: SimulateArgs) -> anyhow::Result<()> {
    let p = a.scenario.resolve()?;
    let traj = p.simulate(a.seed, a.iterations)?;
    create_dir(&a.out)?;
    write(&a.out, "trajectory.txt", &traj.to_text())?;
    let tallies = traj.tally_csv();
    write(&a.out, "tallies.csv", &tallies)?;
    print!("{tallies}");
    Ok(())
}

fn write_analysis(dir: &Path, a: &Analysis, strategy: Strategy) -> anyhow::Result<()> {
    let title = format!(
        "{strategy} barcode, t={}..{}",
        a.interval.start, a.interval.end
    );
    write(dir, "cloud.csv", &a.cloud.to_csv())?;
    write(dir, "barcode.csv", &a.barcode.to_csv())?;
    write(dir, "barcode.svg", &a.barcode.to_svg(&title))
}

fn eps_or(v: Option<Squared>, none: &str) -> String {
    v.map_or(none.to_string(), render_eps)
}

fn analysis_summary(a: &Analysis) -> String {
    format!(
        "points: {}\nenclosing radius: {}\nthreshold: {}\ninterval: {}:{}\n",
        a.cloud.len(),
        eps_or(a.enclosing_sq, "none"),
        render_eps(a.threshold_sq),
        a.interval.start,
        a.interval.end
    )
}

fn bars_text(b: &Barcode) -> String {
    let mut out = String::new();
    for bar in b.nontrivial() {
        out.push_str(&format!(
            "H{} [{}, {})\n",
            bar.dim,
            render_eps(bar.birth),
            eps_or(bar.death, "inf")
        ));
    }
    out
}

fn analyze_cmd(a: AnalyzeArgs) -> anyhow::Result<()> {
    let traj = Trajectory::parse(&read(&a.trajectory)?)
        .with_context(|| format!("parsing {}", a.trajectory.display()))?;
    let mut plan = AnalysisPlan::new(parse_strategy(&a.strategy)?);
    plan.threshold = None;
    a.plan.apply(&mut plan)?;
    let res = analyze(&traj, &plan)?;
    create_dir(&a.out)?;
    write_analysis(&a.out, &res, plan.strategy)?;
    for w in res.warnings() {
        eprintln!("warning: {w}");
    }
    match a.format {
        BarcodeFormat::Csv => {
            eprint!("{}", analysis_summary(&res));
            print!("{}", res.barcode.to_csv());
        }
        BarcodeFormat::Svg => {
            eprint!("{}", analysis_summary(&res));
            print!(
                "{}",
                res.barcode.to_svg(&format!("{} barcode", plan.strategy))
            );
        }
        BarcodeFormat::Text => print!("{}{}", analysis_summary(&res), bars_text(&res.barcode)),
    }
    Ok(())
}

fn classify_cmd(a: ClassifyArgs) -> anyhow::Result<()> {
    let b = Barcode::from_csv(&read(&a.barcode)?)
        .with_context(|| format!("parsing {}", a.barcode.display()))?;
    let policy = a.policy.resolve(SignificancePolicy::default())?;
    let r = classify(&b, &policy);
    match a.format {
        ReportFormat::Text => print!("{}", r.to_text()),
        ReportFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report_json(&r, Value::Null))?
        ),
    }
    Ok(())
}

fn pipeline(a: PipelineArgs) -> anyhow::Result<()> {
    let mut p = a.scenario.resolve()?;
    if let Some(s) = &a.strategy {
        p.analysis.strategy = parse_strategy(s)?;
    }
    a.plan.apply(&mut p.analysis)?;
    let policy = a.policy.resolve(p.analysis.policy)?;
    let traj = p.simulate(a.seed, a.iterations)?;
    let res = analyze(&traj, &p.analysis)?;
    let report = res.report(&policy);

    create_dir(&a.out)?;
    write(&a.out, "trajectory.txt", &traj.to_text())?;
    write(&a.out, "tallies.csv", &traj.tally_csv())?;
    write_analysis(&a.out, &res, p.analysis.strategy)?;
    let header = format!(
        "preset: {}\nseed: {}\nstrategy: {}\n{}",
        p.name,
        a.seed,
        p.analysis.strategy,
        analysis_summary(&res)
    );
    let text = format!("{header}{}", report.to_text());
    write(&a.out, "report.txt", &text)?;
    let context = json!({
        "preset": p.name,
        "seed": a.seed,
        "strategy": p.analysis.strategy.name(),
        "interval": [res.interval.start, res.interval.end],
        "points": res.cloud.len(),
        "threshold_squared": res.threshold_sq.to_string(),
        "enclosing_radius_squared": res.enclosing_sq.map(|v| v.to_string()),
    });
    let js = serde_json::to_string_pretty(&report_json(&report, context))? + "\n";
    write(&a.out, "report.json", &js)?;
    match a.format {
        ReportFormat::Text => print!("{text}"),
        ReportFormat::Json => print!("{js}"),
    }
    Ok(())
}

fn bar_json(b: &Bar) -> Value {
    json!({
        "dimension": b.dim,
        "birth_squared": b.birth.to_string(),
        "death_squared": b.death.map(|d| d.to_string()),
        "birth": b.birth_eps(),
        "death": b.death.map(|_| b.death_eps()),
    })
}

/// JSON form of a shape report; `run` carries the analysis context or null.
pub fn report_json(r: &ShapeReport, run: Value) -> Value {
    json!({
        "classification": r.classification.to_string(),
        "b0": r.b0,
        "b1": r.b1,
        "b2": r.b2,
        "policy": {
            "window_low_squared": r.policy.window_low_sq.to_string(),
            "window_high_squared": r.policy.window_high_sq.to_string(),
            "min_persistence": r.policy.min_persistence,
        },
        "significant": r.significant.iter().map(bar_json).collect::<Vec<_>>(),
        "warnings": r.warnings,
        "run": run,
    })
}
