use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use curvlab::config::ExperimentConfig;
use curvlab::{run, CliError, Command, Example};

#[derive(Parser)]
#[command(name = "curvlab", version, about = "Curvature bounds of low-regularity surface metrics")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Curvature field on a grid, plus a bound scan when --k is given.
    Curvature(Flags),
    /// Smooth a metric at each scale of --eps and export the samples.
    Mollify(Flags),
    /// Distance tables and the upper/lower bound sandwich.
    Distance(Flags),
    /// Geodesics from --p: integrate along --v, or connect to --q.
    Geodesic(Flags),
    /// CBB/CAT quadruple sweeps, critical curvature and comparison radius.
    Compare(Flags),
    /// Canned Hartman–Wintner pipelines.
    Example {
        #[arg(value_enum)]
        which: Which,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Hw1,
    Hw2,
}

fn pair(s: &str) -> Result<[f64; 2], String> {
    match list(s)?.as_slice() {
        &[a, b] => Ok([a, b]),
        _ => Err("expected two comma-separated numbers".into()),
    }
}

fn quad(s: &str) -> Result<[f64; 4], String> {
    match list(s)?.as_slice() {
        &[a, b, c, d] => Ok([a, b, c, d]),
        _ => Err("expected x0,x1,y0,y1".into()),
    }
}

fn list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

#[derive(Args, Default)]
struct Flags {
    /// JSON experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// flat, hw1(λ), hw2(λ), constk(k) or a sampled-metric CSV.
    #[arg(long)]
    metric: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// cbb or cat.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    resolution: Option<usize>,
    /// Decreasing smoothing scales, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    eps: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
    /// Bound-scan direction: lower or upper.
    #[arg(long = "dir")]
    direction: Option<String>,
    /// x0,x1,y0,y1
    #[arg(long, value_parser = quad, allow_hyphen_values = true)]
    region: Option<[f64; 4]>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
    /// k_lo,k_hi
    #[arg(long, value_parser = pair, allow_hyphen_values = true)]
    bracket: Option<[f64; 2]>,
    #[arg(long, value_parser = pair, allow_hyphen_values = true)]
    p: Option<[f64; 2]>,
    #[arg(long, value_parser = pair, allow_hyphen_values = true)]
    q: Option<[f64; 2]>,
    #[arg(long, value_parser = pair, allow_hyphen_values = true)]
    v: Option<[f64; 2]>,
    #[arg(long)]
    time: Option<f64>,
    #[arg(long, value_parser = pair, allow_hyphen_values = true)]
    radius_at: Option<[f64; 2]>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    mollifier: Option<String>,
    #[arg(long)]
    tolerance: Option<f64>,
}

impl Flags {
    fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                ExperimentConfig::from_json(&text)?
            }
            None => ExperimentConfig::default(),
        };
        let top = ExperimentConfig {
            metric: self.metric,
            region: self.region,
            resolution: self.resolution,
            mollifier: self.mollifier,
            eps: self.eps,
            mode: self.mode,
            k: self.k,
            bracket: self.bracket,
            direction: self.direction,
            samples: self.samples,
            pairs: self.pairs,
            seed: self.seed,
            tolerance: self.tolerance,
            p: self.p,
            q: self.q,
            v: self.v,
            time: self.time,
            radius_at: self.radius_at,
            lambda: self.lambda,
            out: self.out,
        };
        Ok(base.overlay(top))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (command, flags) = match cli.command {
        Sub::Curvature(f) => (Command::Curvature, f),
        Sub::Mollify(f) => (Command::Mollify, f),
        Sub::Distance(f) => (Command::Distance, f),
        Sub::Geodesic(f) => (Command::Geodesic, f),
        Sub::Compare(f) => (Command::Compare, f),
        Sub::Example { which: Which::Hw1, flags } => (Command::Example(Example::Hw1), flags),
        Sub::Example { which: Which::Hw2, flags } => (Command::Example(Example::Hw2), flags),
    };
    match flags.resolve().and_then(|cfg| run(command, cfg)) {
        Ok(report) => {
            let out = report.config.out_dir();
            println!(
                "{}: {} (report: {out}/report.json)",
                report.command,
                if report.exit_code() == 0 { "pass" } else { "fail" }
            );
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
