//! Channel and signalling parameters of the scalar model
//! `Y = (H̄ + H)(X̄ + X) + Z`.
//!
//! Everything is expressed relative to unit noise power. SNR values are
//! linear; decibel conversion happens only at the command-line boundary.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Kurtosis of a circularly-symmetric complex Gaussian variable.
pub const GAUSSIAN_KURTOSIS: f64 = 2.0;

/// Statistics of the fading gain `H̄ + H` and of the additive noise `Z`.
///
/// `H` is the zero-mean part of the fading. Both `H` and `Z` are assumed
/// circularly symmetric; the noise always has unit variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub fading_mean: Complex64,
    pub fading_var: f64,
    /// Kurtosis of the zero-mean part `H`.
    pub fading_kurtosis: f64,
    pub noise_kurtosis: f64,
    /// `H` is circular Gaussian, so every moment follows from mean and variance.
    pub gaussian_fading: bool,
}

impl ChannelSpec {
    /// Rayleigh fading with Gaussian noise: `H ~ CN(0, 1)`, `Z ~ CN(0, 1)`.
    pub fn rayleigh() -> Self {
        Self {
            fading_mean: Complex64::new(0.0, 0.0),
            fading_var: 1.0,
            fading_kurtosis: GAUSSIAN_KURTOSIS,
            noise_kurtosis: GAUSSIAN_KURTOSIS,
            gaussian_fading: true,
        }
    }

    /// Rician fading with line-of-sight power `λ = |H̄|²` and diffuse
    /// Rayleigh power `1 − λ`, so the total fading power stays one.
    pub fn rician(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(invalid("lambda", format!("must lie in [0, 1], got {lambda}")));
        }
        Ok(Self {
            fading_mean: Complex64::new(lambda.sqrt(), 0.0),
            fading_var: 1.0 - lambda,
            ..Self::rayleigh()
        })
    }

    /// Zero-mean, unit-power fading described only through its kurtosis.
    ///
    /// Such a channel supports the kurtosis-based closed forms but not the
    /// Gaussian moment engine or the Monte Carlo sampler.
    pub fn with_kurtosis(fading_kurtosis: f64, noise_kurtosis: f64) -> Result<Self> {
        let spec = Self {
            fading_mean: Complex64::new(0.0, 0.0),
            fading_var: 1.0,
            fading_kurtosis,
            noise_kurtosis,
            gaussian_fading: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.fading_mean.re.is_finite() || !self.fading_mean.im.is_finite() {
            return Err(invalid("fading_mean", "must be finite"));
        }
        if !(self.fading_var >= 0.0 && self.fading_var.is_finite()) {
            return Err(invalid("fading_var", format!("must be finite and ≥ 0, got {}", self.fading_var)));
        }
        if !(self.fading_kurtosis >= 1.0 && self.fading_kurtosis.is_finite()) {
            return Err(invalid("fading_kurtosis", format!("must be ≥ 1, got {}", self.fading_kurtosis)));
        }
        if !(self.noise_kurtosis >= 1.0 && self.noise_kurtosis.is_finite()) {
            return Err(invalid("noise_kurtosis", format!("must be ≥ 1, got {}", self.noise_kurtosis)));
        }
        if self.gaussian_fading && self.fading_kurtosis != GAUSSIAN_KURTOSIS {
            return Err(invalid(
                "fading_kurtosis",
                format!("Gaussian fading has kurtosis 2, got {}", self.fading_kurtosis),
            ));
        }
        Ok(())
    }

    /// `|H̄|²`
    pub fn los_power(&self) -> f64 {
        self.fading_mean.norm_sqr()
    }

    /// `E[|H̄ + H|²] = |H̄|² + σ²`
    pub fn fading_power(&self) -> f64 {
        self.los_power() + self.fading_var
    }

    pub fn is_zero_mean(&self) -> bool {
        self.fading_mean == Complex64::new(0.0, 0.0)
    }

    pub(crate) fn require_zero_mean(&self, what: &str) -> Result<()> {
        if self.is_zero_mean() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{what} requires zero-mean fading")))
        }
    }

    pub(crate) fn require_gaussian(&self, what: &str) -> Result<()> {
        if self.gaussian_fading {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{what} requires circular Gaussian fading")))
        }
    }
}

/// Total SNR `ρ` and the share `ν` of it spent on the superimposed pilot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSpec {
    pub snr: f64,
    pub pilot_share: f64,
}

impl SignalSpec {
    pub fn new(snr: f64, pilot_share: f64) -> Result<Self> {
        let s = Self { snr, pilot_share };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.snr >= 0.0 && self.snr.is_finite()) {
            return Err(invalid("snr", format!("must be finite and ≥ 0, got {}", self.snr)));
        }
        if !(0.0..=1.0).contains(&self.pilot_share) {
            return Err(invalid("pilot_share", format!("must lie in [0, 1], got {}", self.pilot_share)));
        }
        Ok(())
    }

    /// `|X̄|² = νρ`
    pub fn pilot_power(&self) -> f64 {
        self.pilot_share * self.snr
    }

    /// `P = (1 − ν)ρ`
    pub fn data_power(&self) -> f64 {
        (1.0 - self.pilot_share) * self.snr
    }

    /// The pilot symbol `X̄`, taken real and non-negative.
    pub fn pilot(&self) -> Complex64 {
        Complex64::new(self.pilot_power().sqrt(), 0.0)
    }
}
