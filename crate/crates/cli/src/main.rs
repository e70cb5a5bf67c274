use std::path::PathBuf;
use std::process::ExitCode;

use brlab::harness::{exit_code, ExperimentConfig, Registry, Report};
use brlab::indices::{record_csv, record_text};
use brlab::Result;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "brlab", version, about = "Bochner-Riesz numerical laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sparse domination ratios over random trials.
    Dominate(Common),
    /// Tail estimate for S_k off a ball.
    Prop41(Common),
    /// Diagonal estimate for S_k on a ball.
    Prop42(Common),
    /// Kernel decay slopes.
    Decay(Common),
    /// Weighted ratios against predicted bounds.
    Weights(Common),
    /// Vector-valued ratios.
    Vv(Common),
    /// Critical indices as a table.
    Indices(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Points per axis, comma separated for a sweep.
    #[arg(long)]
    grid_n: Option<String>,
    #[arg(long)]
    grid_l: Option<String>,
    /// Dimension.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    p0: Option<String>,
    #[arg(long)]
    q0: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Any other configuration key, as `key=value`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let flags = [
            ("grid_n", &self.grid_n),
            ("grid_l", &self.grid_l),
            ("dim", &self.n),
            ("delta", &self.delta),
            ("p0", &self.p0),
            ("q0", &self.q0),
            ("p", &self.p),
            ("q", &self.q),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("output_dir", &self.out),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        for pair in &self.set {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| brlab::Error::Parse(format!("--set expects KEY=VALUE, got `{pair}`")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }
}

fn run(name: &str, common: &Common) -> Result<Report> {
    let cfg = common.config()?;
    let report = Registry::standard().run(name, &cfg)?;
    if name == "indices" {
        print!("{}", record_text(&report.summary.record));
        println!();
        print!("{}", record_csv(&report.summary.record));
    }
    for flag in &report.summary.flags {
        eprintln!("warning: {flag}");
    }
    let (csv, json) = report.write_to(&cfg.output_dir)?;
    if let Some(s) = &report.summary.ratio {
        println!(
            "{}: {} rows, max {} p95 {} median {}",
            name, s.count, s.max, s.p95, s.median
        );
    }
    if let Some(slope) = report.summary.trend_slope {
        println!("trend slope vs log2 N: {slope}");
    }
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Command::Dominate(c) => ("dominate", c),
        Command::Prop41(c) => ("prop41", c),
        Command::Prop42(c) => ("prop42", c),
        Command::Decay(c) => ("decay", c),
        Command::Weights(c) => ("weights", c),
        Command::Vv(c) => ("vv", c),
        Command::Indices(c) => ("indices", c),
    };
    let result = run(name, common);
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(&result) as u8)
}
