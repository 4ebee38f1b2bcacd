use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pilotbound::format::fmt_sig;
use pilotbound::{
    bound_medard, bound_orthogonal_block, bound_superimposed_block, bound_theorem1, bound_theorem2,
    optimize_pilot_share_block, optimize_theorem1_share, optimize_theorem2_share, validate_bound, BlockFadingSpec,
    ChannelSpec, McConfig, SignalSpec,
};
use pilotbound_cli::{coherence_grid, db_to_linear, fig1, fig2, fig3, fig4, linear_grid, Preset, Unit};

/// Mutual-information lower bounds for noncoherent fading channels with
/// superimposed pilots.
#[derive(Debug, Parser)]
#[command(name = "pilotbound", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal pilot share against SNR (Rayleigh fading).
    Fig1 {
        #[command(flatten)]
        snr: SnrRange,
        #[command(flatten)]
        out: Output,
    },
    /// Bound at the optimal and two fixed pilot shares against SNR.
    Fig2 {
        #[command(flatten)]
        snr: SnrRange,
        #[arg(long, value_enum, default_value_t)]
        unit: Unit,
        #[command(flatten)]
        out: Output,
    },
    /// Médard, simple and hybrid bounds against the line-of-sight factor.
    Fig3 {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        lambda_start: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda_stop: f64,
        #[arg(long, default_value_t = 0.01)]
        lambda_step: f64,
        /// Linear SNR.
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, value_enum, default_value_t)]
        unit: Unit,
        #[command(flatten)]
        out: Output,
    },
    /// Superimposed against time-multiplexed pilots on block fading.
    Fig4 {
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        snr_db: f64,
        /// Largest coherence time of the log-spaced grid.
        #[arg(long, default_value_t = 10_000)]
        nc_max: usize,
        #[arg(long, default_value_t = 10)]
        points_per_decade: usize,
        /// Evaluate these coherence times instead of the grid.
        #[arg(long, value_delimiter = ',')]
        nc: Vec<usize>,
        #[arg(long, value_enum, default_value_t)]
        unit: Unit,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate a single bound.
    Bound(BoundArgs),
    /// Compare the closed forms with Monte Carlo and report each check.
    Validate {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        point: OperatingPoint,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, alias = "n", default_value_t = 1_000_000)]
        n_samples: usize,
        #[arg(long, default_value_t = pilotbound::mc::DEFAULT_BATCH_COUNT)]
        batches: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
struct SnrRange {
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    snr_db_start: f64,
    #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
    snr_db_stop: f64,
    #[arg(long, default_value_t = 0.5)]
    snr_db_step: f64,
}

impl SnrRange {
    fn grid(&self) -> Result<Vec<f64>> {
        linear_grid(self.snr_db_start, self.snr_db_stop, self.snr_db_step)
    }
}

#[derive(Debug, Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

#[derive(Debug, Args)]
struct ChannelArgs {
    /// `rayleigh` or `rician:<lambda>`.
    #[arg(long, default_value = "rayleigh")]
    preset: Preset,
    /// Line-of-sight factor; shorthand for `--preset rician:<lambda>`.
    #[arg(long)]
    lambda: Option<f64>,
}

impl ChannelArgs {
    fn channel(&self) -> Result<ChannelSpec> {
        match self.lambda {
            Some(lambda) => {
                if let Preset::Rician(p) = self.preset {
                    if p != lambda {
                        bail!("--lambda {lambda} contradicts --preset rician:{p}");
                    }
                }
                Ok(ChannelSpec::rician(lambda)?)
            }
            None => self.preset.channel(),
        }
    }
}

#[derive(Debug, Args)]
struct OperatingPoint {
    /// Linear SNR.
    #[arg(long, conflicts_with = "snr_db")]
    rho: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    /// Pilot share; optimized when omitted.
    #[arg(long)]
    nu: Option<f64>,
}

impl OperatingPoint {
    fn snr(&self) -> f64 {
        match (self.rho, self.snr_db) {
            (Some(rho), _) => rho,
            (None, Some(db)) => db_to_linear(db),
            (None, None) => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    /// Quadratic-estimator bound.
    #[value(name = "1")]
    Simple,
    /// Two-regressor (hybrid) bound.
    #[value(name = "2")]
    Hybrid,
    /// Worst-case-noise bound without pilot.
    Medard,
    /// Superimposed pilots on block fading.
    Block,
    /// Time-multiplexed pilots on block fading.
    Orthogonal,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    point: OperatingPoint,
    /// Data power for the Médard bound (defaults to the SNR).
    #[arg(long)]
    p: Option<f64>,
    /// Coherence time for the block-fading bounds.
    #[arg(long, default_value_t = 1)]
    nc: usize,
    /// Training length for the time-multiplexed bound; optimized when omitted.
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    unit: Unit,
}

fn run_bound(args: &BoundArgs) -> Result<String> {
    let channel = args.channel.channel()?;
    let rho = args.point.snr();
    let nu = args.point.nu;
    let nats = match args.theorem {
        Theorem::Simple => match nu {
            Some(nu) => bound_theorem1(&channel, &SignalSpec::new(rho, nu)?)?.rate_nats,
            None => optimize_theorem1_share(&channel, rho)?.1.rate_nats,
        },
        Theorem::Hybrid => match nu {
            Some(nu) => bound_theorem2(&channel, &SignalSpec::new(rho, nu)?)?.value.rate_nats,
            None => optimize_theorem2_share(&channel, rho)?.1.value.rate_nats,
        },
        Theorem::Medard => bound_medard(&channel, args.p.unwrap_or(rho))?.rate_nats,
        Theorem::Block => match nu {
            Some(nu) => bound_superimposed_block(&BlockFadingSpec::new(args.nc, rho, nu)?)?.rate_nats,
            None => optimize_pilot_share_block(args.nc, rho)?.1.rate_nats,
        },
        Theorem::Orthogonal => match args.tau {
            Some(tau) => pilotbound::block::bound_orthogonal_block_at(args.nc, rho, tau)?.rate_nats,
            None => bound_orthogonal_block(args.nc, rho)?.0.rate_nats,
        },
    };
    if matches!(args.theorem, Theorem::Block | Theorem::Orthogonal) && !channel.is_zero_mean() {
        bail!("the block-fading bounds are defined for Rayleigh fading only");
    }
    Ok(format!("{} {}\n", fmt_sig(args.unit.convert(nats)), args.unit.label()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Fig1 { snr, out } => out.write(&fig1(&snr.grid()?)?.to_csv())?,
        Command::Fig2 { snr, unit, out } => out.write(&fig2(&snr.grid()?, unit)?.to_csv())?,
        Command::Fig3 { lambda_start, lambda_stop, lambda_step, rho, unit, out } => {
            let lambdas: Vec<f64> =
                linear_grid(lambda_start, lambda_stop, lambda_step)?.into_iter().map(|l| l.min(1.0)).collect();
            out.write(&fig3(&lambdas, rho, unit)?.to_csv())?
        }
        Command::Fig4 { snr_db, nc_max, points_per_decade, nc, unit, out } => {
            let grid = if nc.is_empty() { coherence_grid(nc_max, points_per_decade)? } else { nc };
            out.write(&fig4(&grid, db_to_linear(snr_db), unit)?.to_csv())?
        }
        Command::Bound(args) => print!("{}", run_bound(&args)?),
        Command::Validate { channel, point, seed, n_samples, batches, out } => {
            let channel = channel.channel()?;
            let rho = point.snr();
            let nu = match point.nu {
                Some(nu) => nu,
                None => optimize_theorem1_share(&channel, rho)?.0,
            };
            let cfg = McConfig { seed, n_samples, batch_count: batches };
            let report = validate_bound(&channel, &SignalSpec::new(rho, nu)?, &cfg)?;
            out.write(&report.to_string())?;
            if !report.all_passed() {
                let failed: Vec<&str> = report.failures().map(|r| r.quantity.as_str()).collect();
                eprintln!("validation failed: {}", failed.join(", "));
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
