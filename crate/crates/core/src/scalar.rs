//! Single-antenna bounds: the quadratic-estimator bound, its optimal pilot
//! share and high-SNR limits, the worst-case-noise (Médard) bound, and the
//! hybrid two-regressor bound.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bound::{log_variance_ratio, BoundKind, BoundValue};
use crate::error::{invalid, Error, Result};
use crate::linalg::{solve_hermitian, CMatrix};
use crate::model::{ChannelSpec, SignalSpec};
use crate::moments::{moments_closed_form, MomentSet};
use crate::optimize::maximize_share;

/// Bracket width for numerical pilot-share optimization.
pub const SHARE_TOLERANCE: f64 = 1e-9;

/// Pivot threshold (relative to the largest variance) below which the
/// observation covariance counts as singular.
const SINGULAR_PIVOT: f64 = 1e-12;

/// Coefficients of a linear estimator of `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorCoeffs {
    /// `X̂ = α |Y|²`
    Scalar(Complex64),
    /// `X̂ = α₁ (|Y|² − E|Y|²) + α₂ (Y − E[Y])`
    Hybrid([Complex64; 2]),
}

fn with_point(mut v: BoundValue, channel: &ChannelSpec, signal: &SignalSpec) -> BoundValue {
    v.snr = Some(signal.snr);
    v.pilot_share = Some(signal.pilot_share);
    v.los_power = Some(channel.los_power());
    v
}

/// `log(var(|Y|²) / (var(|Y|²) − P|X̄|²))`, written through the general
/// cross-correlation `c = E[X^*|Y|²]` as `log(P / (P − |c|²/var(|Y|²)))`.
///
/// With line of sight the full `var(|Y|²)` of the mean-shifted fading comes
/// from the Wick engine.
pub fn bound_theorem1(channel: &ChannelSpec, signal: &SignalSpec) -> Result<BoundValue> {
    channel.validate()?;
    signal.validate()?;
    let rate = if signal.pilot_power() == 0.0 || signal.data_power() == 0.0 {
        0.0
    } else {
        let m = moments_closed_form(channel, signal)?;
        theorem1_from_moments(&m, signal.data_power())?
    };
    Ok(with_point(BoundValue::new(BoundKind::Simple, rate), channel, signal))
}

/// The quadratic-estimator bound for given moments.
pub fn theorem1_from_moments(moments: &MomentSet, data_power: f64) -> Result<f64> {
    if data_power == 0.0 {
        return Ok(0.0);
    }
    let c = moments.e_xconj_abs_y_sq;
    if !(moments.var_abs_y_sq > 0.0) {
        return Err(Error::Inconsistent(format!("var(|Y|²) = {} is not positive", moments.var_abs_y_sq)));
    }
    log_variance_ratio(data_power, c.norm_sqr() / moments.var_abs_y_sq)
}

/// `α* = c^* / var(|Y|²)`; its phase matches the pilot.
pub fn optimal_scalar_coeff(moments: &MomentSet) -> Complex64 {
    moments.e_xconj_abs_y_sq.conj() / moments.var_abs_y_sq
}

/// `var(X − α|Y|²) = P + |α|² var(|Y|²) − 2 Re{α E[X^*|Y|²]}`
pub fn scalar_error_variance(moments: &MomentSet, data_power: f64, alpha: Complex64) -> f64 {
    data_power + alpha.norm_sqr() * moments.var_abs_y_sq - 2.0 * (alpha * moments.e_xconj_abs_y_sq).re
}

/// Minimum of [`scalar_error_variance`] over `α`: `P (1 − P|X̄|² / var(|Y|²))`.
pub fn min_scalar_error_variance(var_abs_y_sq: f64, data_power: f64, pilot_power: f64) -> f64 {
    data_power * (1.0 - data_power * pilot_power / var_abs_y_sq)
}

fn kurtosis_pair(channel: &ChannelSpec) -> (f64, f64) {
    (channel.fading_kurtosis, channel.noise_kurtosis)
}

fn require_unit_power(channel: &ChannelSpec) -> Result<()> {
    if (channel.fading_var - 1.0).abs() > 1e-12 {
        return Err(invalid("fading_var", "the closed-form pilot share assumes unit fading power"));
    }
    Ok(())
}

/// Closed-form maximizer of [`bound_theorem1`] over the pilot share for
/// zero-mean fading:
/// `ν* = (η − √(η(η − ρ²κ_H))) / (ρ²κ_H)`, `η = (2κ_H−1)ρ² + 2ρ + κ_Z − 1`.
///
/// Evaluated in the algebraically equal form `η / (η + √(η(η − ρ²κ_H)))`,
/// which stays accurate as `ρ → 0` and extends continuously to `ν* = 1/2`
/// at `ρ = 0`.
pub fn optimal_pilot_share(channel: &ChannelSpec, snr: f64) -> Result<f64> {
    channel.validate()?;
    channel.require_zero_mean("the closed-form pilot share")?;
    require_unit_power(channel)?;
    if !(snr >= 0.0) || !snr.is_finite() {
        return Err(invalid("snr", format!("must be finite and ≥ 0, got {snr}")));
    }
    let (kh, kz) = kurtosis_pair(channel);
    let eta = (2.0 * kh - 1.0) * snr * snr + 2.0 * snr + kz - 1.0;
    if eta == 0.0 {
        return Ok(0.5);
    }
    let slack = (kh - 1.0) * snr * snr + 2.0 * snr + kz - 1.0;
    Ok(eta / (eta + (eta * slack).sqrt()))
}

/// `lim_{ρ→∞} ν*(ρ) = 2 − 1/κ_H − √((2 − 1/κ_H)(1 − 1/κ_H))`.
pub fn pilot_share_high_snr_limit(channel: &ChannelSpec) -> Result<f64> {
    channel.validate()?;
    let kh = channel.fading_kurtosis;
    if !(kh > 1.0) {
        return Err(invalid("fading_kurtosis", format!("the limit needs κ_H > 1, got {kh}")));
    }
    let r = 1.0 / kh;
    Ok(2.0 - r - ((2.0 - r) * (1.0 - r)).sqrt())
}

/// High-SNR limit of [`bound_theorem1`] at the optimal pilot share, from the
/// leading `ρ²` coefficients:
/// `log(1 + ν(1−ν) / ((1−κ_H)ν² − ν + 2κ_H − 1))` at `ν = ν*(∞)`.
pub fn theorem1_high_snr_limit(channel: &ChannelSpec) -> Result<f64> {
    channel.require_zero_mean("the high-SNR limit")?;
    let nu = pilot_share_high_snr_limit(channel)?;
    let kh = channel.fading_kurtosis;
    let denom = (1.0 - kh) * nu * nu - nu + 2.0 * kh - 1.0;
    Ok((nu * (1.0 - nu) / denom).ln_1p())
}

/// Pilot share maximizing [`bound_theorem1`] and the resulting bound.
///
/// Zero-mean fading uses the closed form; with line of sight the share is
/// found numerically.
pub fn optimize_theorem1_share(channel: &ChannelSpec, snr: f64) -> Result<(f64, BoundValue)> {
    let nu = if channel.is_zero_mean() && (channel.fading_var - 1.0).abs() <= 1e-12 {
        optimal_pilot_share(channel, snr)?
    } else {
        SignalSpec::new(snr, 0.5)?;
        maximize_share(
            |nu| {
                SignalSpec::new(snr, nu)
                    .and_then(|s| bound_theorem1(channel, &s))
                    .map_or(f64::NEG_INFINITY, |b| b.rate_nats)
            },
            SHARE_TOLERANCE,
        )
        .0
    };
    Ok((nu, bound_theorem1(channel, &SignalSpec::new(snr, nu)?)?))
}

/// Worst-case-noise bound with a linear estimator and no pilot:
/// `log(1 + |H̄|²P / (E[|H|²]P + 1))`.
pub fn bound_medard(channel: &ChannelSpec, data_power: f64) -> Result<BoundValue> {
    channel.validate()?;
    if !(data_power >= 0.0) || !data_power.is_finite() {
        return Err(invalid("data_power", format!("must be finite and ≥ 0, got {data_power}")));
    }
    let rate = (channel.los_power() * data_power / (channel.fading_var * data_power + 1.0)).ln_1p();
    let mut v = BoundValue::new(BoundKind::Medard, rate);
    v.snr = Some(data_power);
    v.pilot_share = Some(0.0);
    v.los_power = Some(channel.los_power());
    Ok(v)
}

/// Result of the two-regressor bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridBound {
    pub value: BoundValue,
    pub coeffs: [Complex64; 2],
    pub min_error_variance: f64,
}

/// Hybrid bound `log(P / (P − E[X y†] cov(y)⁻¹ E[X^* y]))` with the
/// observation vector `y = (|Y|² − E|Y|², Y − E[Y])`.
pub fn bound_theorem2(channel: &ChannelSpec, signal: &SignalSpec) -> Result<HybridBound> {
    channel.validate()?;
    signal.validate()?;
    let p = signal.data_power();
    if p == 0.0 {
        let value = with_point(BoundValue::new(BoundKind::Hybrid, 0.0), channel, signal);
        return Ok(HybridBound { value, coeffs: [Complex64::new(0.0, 0.0); 2], min_error_variance: 0.0 });
    }
    let m = moments_closed_form(channel, signal)?;
    let (rate, coeffs, min_error_variance) =
        theorem2_from_parts(&m.observation_covariance(), &m.input_cross_correlation(), p)?;
    let value = with_point(BoundValue::new(BoundKind::Hybrid, rate), channel, signal);
    Ok(HybridBound { value, coeffs, min_error_variance })
}

/// Wiener–Hopf solution for an arbitrary observation covariance `K` and
/// cross-correlation `b = E[X^* y]`.
///
/// Returns the rate, the coefficients `α = (K⁻¹ b)^*` of `X̂ = αᵀ y`, and
/// the error variance `P − b† K⁻¹ b`.
pub fn theorem2_from_parts(
    covariance: &[[Complex64; 2]; 2],
    cross: &[Complex64; 2],
    data_power: f64,
) -> Result<(f64, [Complex64; 2], f64)> {
    if data_power == 0.0 {
        return Ok((0.0, [Complex64::new(0.0, 0.0); 2], 0.0));
    }
    let k = CMatrix::from_fn(2, 2, |i, j| covariance[i][j]);
    let b = DMatrix::from_column_slice(2, 1, cross);
    let kinv_b = solve_hermitian(&k, &b, SINGULAR_PIVOT)?;
    let explained = (b.adjoint() * &kinv_b)[(0, 0)].re;
    let rate = log_variance_ratio(data_power, explained)?;
    let coeffs = [kinv_b[(0, 0)].conj(), kinv_b[(1, 0)].conj()];
    Ok((rate, coeffs, data_power - explained))
}

/// Pilot share maximizing [`bound_theorem2`] and the resulting bound.
///
/// The hybrid bound can have two humps (a pilot-aided one and the `ν = 0`
/// linear-estimator one), so the global scan of [`maximize_share`] is
/// complemented by the share that optimizes [`bound_theorem1`]; the hybrid
/// bound dominates the simple one at every share.
pub fn optimize_theorem2_share(channel: &ChannelSpec, snr: f64) -> Result<(f64, HybridBound)> {
    let eval = |nu: f64| {
        SignalSpec::new(snr, nu)
            .and_then(|s| bound_theorem2(channel, &s))
            .map_or(f64::NEG_INFINITY, |b| b.value.rate_nats)
    };
    let (scan_nu, scan_val) = maximize_share(eval, SHARE_TOLERANCE);
    let (simple_nu, _) = optimize_theorem1_share(channel, snr)?;
    let nu = if eval(simple_nu) > scan_val { simple_nu } else { scan_nu };
    Ok((nu, bound_theorem2(channel, &SignalSpec::new(snr, nu)?)?))
}
