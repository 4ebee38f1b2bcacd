//! Figure tables and parameter grids behind the `pilotbound` binary.

use std::f64::consts::LN_2;
use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use pilotbound::format::fmt_sig;
use pilotbound::{
    bound_medard, bound_orthogonal_block, bound_theorem1, optimal_pilot_share, optimize_pilot_share_block,
    optimize_theorem1_share, optimize_theorem2_share, pilot_share_high_snr_limit, ChannelSpec, SignalSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Unit {
    #[default]
    Nats,
    Bits,
}

impl Unit {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Unit::Nats => nats,
            Unit::Bits => nats / LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Unit::Nats => "nats",
            Unit::Bits => "bits",
        }
    }
}

/// Fading preset: `rayleigh` or `rician:λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Rayleigh,
    Rician(f64),
}

impl FromStr for Preset {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s.eq_ignore_ascii_case("rayleigh") => Ok(Preset::Rayleigh),
            Some((name, lambda)) if name.eq_ignore_ascii_case("rician") => {
                let lambda: f64 = lambda.parse().with_context(|| format!("bad Rician factor `{lambda}`"))?;
                ChannelSpec::rician(lambda)?;
                Ok(Preset::Rician(lambda))
            }
            _ => bail!("unknown preset `{s}`; expected `rayleigh` or `rician:<lambda>`"),
        }
    }
}

impl Preset {
    pub fn channel(self) -> Result<ChannelSpec> {
        Ok(match self {
            Preset::Rayleigh => ChannelSpec::rayleigh(),
            Preset::Rician(lambda) => ChannelSpec::rician(lambda)?,
        })
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `start, start + step, …` up to `stop` inclusive (with a small tolerance
/// for the last point), computed without accumulating rounding errors.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    ensure!(start.is_finite() && stop.is_finite(), "grid bounds must be finite");
    ensure!(step > 0.0 && step.is_finite(), "grid step must be positive, got {step}");
    ensure!(stop >= start, "grid stop {stop} lies below start {start}");
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    ensure!(count < 10_000_000, "grid has too many points");
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

/// Distinct integers `round(10^(k/per_decade))` from 1 up to `max`
/// (always including `max`).
pub fn coherence_grid(max: usize, per_decade: usize) -> Result<Vec<usize>> {
    ensure!(max >= 1, "the largest coherence time must be ≥ 1");
    ensure!(per_decade >= 1, "need at least one point per decade");
    let mut grid = Vec::new();
    let mut k = 0;
    loop {
        let n = 10f64.powf(k as f64 / per_decade as f64).round() as usize;
        if n >= max {
            break;
        }
        grid.push(n);
        k += 1;
    }
    grid.push(max);
    grid.dedup();
    Ok(grid)
}

/// A numeric table rendered as CSV; `None` cells are left empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(fmt_sig).unwrap_or_default()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Optimal pilot share of Rayleigh fading against SNR in dB.
pub fn fig1(snr_db: &[f64]) -> Result<Table> {
    let ch = ChannelSpec::rayleigh();
    let rows = snr_db
        .iter()
        .map(|&db| Ok(vec![Some(db), Some(optimal_pilot_share(&ch, db_to_linear(db))?)]))
        .collect::<Result<_>>()?;
    Ok(Table { header: vec!["SNRdB", "nu_opt"], rows })
}

/// Rayleigh bound at the optimal share, at `ν = 1/2` and at the high-SNR
/// share `(3−√3)/2`.
pub fn fig2(snr_db: &[f64], unit: Unit) -> Result<Table> {
    let ch = ChannelSpec::rayleigh();
    let high = pilot_share_high_snr_limit(&ch)?;
    let rows = snr_db
        .iter()
        .map(|&db| {
            let rho = db_to_linear(db);
            let (_, opt) = optimize_theorem1_share(&ch, rho)?;
            let at = |nu| -> Result<f64> { Ok(bound_theorem1(&ch, &SignalSpec::new(rho, nu)?)?.rate_nats) };
            Ok(vec![
                Some(db),
                Some(unit.convert(opt.rate_nats)),
                Some(unit.convert(at(0.5)?)),
                Some(unit.convert(at(high)?)),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(Table { header: vec!["SNRdB", "I_opt", "I_subopt_low_SNR", "I_subopt_high_SNR"], rows })
}

/// Médard, simple and hybrid bounds against the line-of-sight factor at a
/// fixed SNR; the simple and hybrid bounds use their own optimal shares.
pub fn fig3(lambdas: &[f64], snr: f64, unit: Unit) -> Result<Table> {
    let rows = lambdas
        .iter()
        .map(|&lambda| {
            let ch = ChannelSpec::rician(lambda)?;
            let medard = bound_medard(&ch, snr)?.rate_nats;
            let (_, simple) = optimize_theorem1_share(&ch, snr)?;
            let (_, hybrid) = optimize_theorem2_share(&ch, snr)?;
            Ok(vec![
                Some(lambda),
                Some(unit.convert(medard)),
                Some(unit.convert(simple.rate_nats)),
                Some(unit.convert(hybrid.value.rate_nats)),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(Table { header: vec!["lambda", "I_Medard", "I_simple", "I_hybrid"], rows })
}

/// Superimposed (optimized share) against time-multiplexed (optimized
/// training length) pilots on Rayleigh block fading. The time-multiplexed
/// column is empty at `n_c = 1`.
pub fn fig4(coherence_times: &[usize], snr: f64, unit: Unit) -> Result<Table> {
    let rows = coherence_times
        .iter()
        .map(|&n| {
            let (_, sup) = optimize_pilot_share_block(n, snr)?;
            let orth = if n >= 2 { Some(unit.convert(bound_orthogonal_block(n, snr)?.0.rate_nats)) } else { None };
            Ok(vec![Some(n as f64), Some(unit.convert(sup.rate_nats)), orth])
        })
        .collect::<Result<_>>()?;
    Ok(Table { header: vec!["nc", "I", "I_M_opt"], rows })
}
