use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use floodfreq::simlab::Estimator;
use floodfreq::DependenceMethod;
use floodfreq_cli::commands::{self, EstimateRequest, Settings};
use floodfreq_cli::seasons::{AlignRule, SeasonDef};
use floodfreq_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "floodfreq", version, about = "Regional high-quantile estimation for annual maximum river flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regional annual GEV fit by L- or TL-moments.
    FitGev(EstimateArgs),
    /// Regional winter/summer GEV fits combined into a two-component quantile.
    FitTwoComponent(EstimateArgs),
    /// Regional extreme value index from per-site Hill estimates.
    RegionalTail {
        #[command(flatten)]
        args: EstimateArgs,
        /// Also report the exceedance probability of this level at the target.
        #[arg(long)]
        x: Option<f64>,
    },
    /// Weissman quantile from the regional extreme value index.
    Weissman(EstimateArgs),
    /// Return-level curve of any estimator, with empirical plotting points.
    ReturnLevels {
        #[command(flatten)]
        args: EstimateArgs,
        /// Return periods in years (comma separated).
        #[arg(long, value_delimiter = ',')]
        periods: Vec<f64>,
    },
    /// Monte Carlo comparison of estimators from a TOML scenario.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replications: Option<usize>,
        /// Write per-estimator summaries as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct EstimateArgs {
    /// Monthly maxima CSV with header site_id,year,month,flow.
    data: PathBuf,
    /// Sites to include (comma separated); all sites by default.
    #[arg(long, value_delimiter = ',')]
    sites: Vec<String>,
    /// Site whose quantile is estimated; the first site by default.
    #[arg(long)]
    target_site: Option<String>,
    /// Non-exceedance probability.
    #[arg(long)]
    p: Option<f64>,
    /// Interval level is 1 - alpha.
    #[arg(long)]
    alpha: Option<f64>,
    /// L, TL, W, sL, sTL or sW.
    #[arg(long)]
    method: Option<String>,
    /// First and last winter month, e.g. 11-4 or nov-apr.
    #[arg(long)]
    season_def: Option<SeasonDef>,
    /// How records ending in different years are aligned.
    #[arg(long, value_enum)]
    align: Option<AlignRule>,
    /// Tail sample sizes per site (comma separated).
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Tail dependence estimator: empirical or pickands_cfg.
    #[arg(long)]
    dependence: Option<DependenceMethod>,
    /// Accepted for symmetry with `simulate`; estimation is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// Write results as CSV to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with defaults for the options above.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exit with code 4 when the shape-homogeneity test rejects.
    #[arg(long)]
    enforce_homogeneity: bool,
}

impl EstimateArgs {
    fn resolve(&self, allowed: &[Estimator], default: Estimator) -> CliResult<EstimateRequest> {
        let cfg = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let method = match self.method.as_deref().or(cfg.method.as_deref()) {
            Some(m) => commands::parse_method(m)?,
            None => default,
        };
        if !allowed.contains(&method) {
            let names: Vec<&str> = allowed.iter().map(|e| e.name()).collect();
            return Err(CliError::Input(format!("method {method} not available here; use one of {}", names.join(", "))));
        }
        let p = self.p.or(cfg.p).unwrap_or(0.99);
        let alpha = self.alpha.or(cfg.alpha).unwrap_or(0.05);
        if !(p > 0.0 && p < 1.0) || !(alpha > 0.0 && alpha < 1.0) {
            return Err(CliError::Input(format!("p and alpha must lie in (0, 1), got p={p}, alpha={alpha}")));
        }
        Ok(EstimateRequest {
            data: self.data.clone(),
            sites: if self.sites.is_empty() { cfg.sites.unwrap_or_default() } else { self.sites.clone() },
            target: self.target_site.clone().or(cfg.target_site),
            method,
            p,
            alpha,
            season: self.season_def.or(cfg.season).unwrap_or_default(),
            align: self.align.or(cfg.align).unwrap_or_default(),
            k: if self.k.is_empty() { cfg.k } else { Some(self.k.clone()) },
            dependence: self.dependence.or(cfg.dependence).unwrap_or_default(),
            enforce_homogeneity: self.enforce_homogeneity,
        })
    }
}

fn write_out(path: &Option<PathBuf>, f: impl FnOnce(std::fs::File) -> CliResult<()>) -> CliResult<()> {
    if let Some(path) = path {
        let file = std::fs::File::create(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        f(file)?;
    }
    Ok(())
}

fn estimate_command(args: &EstimateArgs, allowed: &[Estimator], default: Estimator) -> CliResult<()> {
    let req = args.resolve(allowed, default)?;
    let report = commands::estimate(&req)?;
    print!("{}", report.to_table());
    write_out(&args.out, |f| report.write_csv(f))
}

fn run(cli: Cli) -> CliResult<()> {
    use Estimator::*;
    match cli.command {
        Command::FitGev(a) => estimate_command(&a, &[L, TL], TL),
        Command::FitTwoComponent(a) => {
            // L and TL are accepted as shorthands for their seasonal versions
            let mut a = a;
            a.method = a.method.map(|m| match m.to_ascii_lowercase().as_str() {
                "l" => "sL".into(),
                "tl" => "sTL".into(),
                _ => m,
            });
            estimate_command(&a, &[SL, STL], STL)
        }
        Command::Weissman(a) => estimate_command(&a, &[W, SW], W),
        Command::RegionalTail { args, x } => {
            let req = args.resolve(&[W], W)?;
            let table = commands::regional_tail_table(&req, x)?;
            print!("{table}");
            write_out(&args.out, |mut f| {
                use std::io::Write;
                f.write_all(table.as_bytes())?;
                Ok(())
            })
        }
        Command::ReturnLevels { args, periods } => {
            let req = args.resolve(&Estimator::ALL, STL)?;
            let curve = commands::return_levels(&req, &periods)?;
            print!("{}", curve.to_table());
            write_out(&args.out, |f| curve.write_csv(f))
        }
        Command::Simulate { config, seed, replications, out } => {
            let report = commands::simulate(&config, seed, replications)?;
            print!("{}", report.to_table());
            write_out(&out, |f| commands::write_scenario_csv(&report, f))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
