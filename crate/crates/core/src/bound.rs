use std::f64::consts::LN_2;
use std::fmt;

use crate::error::{Error, Result};

/// Which lower bound produced a [`BoundValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// Quadratic-estimator bound `log(var|Y|² / (var|Y|² − P|X̄|²))`.
    Simple,
    /// Worst-case-noise bound with a linear estimator.
    Medard,
    /// Two-regressor (`|Y|²` and `Y`) Wiener–Hopf bound.
    Hybrid,
    /// Vector bound `log|Q| − log|Q − ΦΨ⁻¹Φ†|`, nats per vector use.
    Mimo,
    /// Superimposed pilots on Rayleigh block fading, nats per channel use.
    SuperimposedBlock,
    /// Time-multiplexed pilots on Rayleigh block fading, nats per channel use.
    OrthogonalBlock,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BoundKind::Simple => "simple",
            BoundKind::Medard => "medard",
            BoundKind::Hybrid => "hybrid",
            BoundKind::Mimo => "mimo",
            BoundKind::SuperimposedBlock => "superimposed-block",
            BoundKind::OrthogonalBlock => "orthogonal-block",
        };
        f.write_str(name)
    }
}

/// A mutual-information lower bound in nats, with the operating point it
/// was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub rate_nats: f64,
    pub snr: Option<f64>,
    pub pilot_share: Option<f64>,
    /// `λ = |H̄|²`
    pub los_power: Option<f64>,
    pub coherence_time: Option<usize>,
}

impl BoundValue {
    pub(crate) fn new(kind: BoundKind, rate_nats: f64) -> Self {
        Self {
            kind,
            rate_nats,
            snr: None,
            pilot_share: None,
            los_power: None,
            coherence_time: None,
        }
    }

    pub fn rate_bits(&self) -> f64 {
        self.rate_nats / LN_2
    }
}

/// `log(total / (total − explained))`, the rate obtained when an estimator
/// removes `explained` out of an input variance `total`.
///
/// The argument must describe a proper error variance; anything else points
/// at inconsistent moments and is reported rather than clamped.
pub(crate) fn log_variance_ratio(total: f64, explained: f64) -> Result<f64> {
    if total == 0.0 && explained == 0.0 {
        return Ok(0.0);
    }
    let fraction = explained / total;
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::Inconsistent(format!(
            "estimator explains {explained:e} of an input variance {total:e}"
        )));
    }
    Ok(-(-fraction).ln_1p())
}
