//! Second- and fourth-order output moments of the scalar channel.
//!
//! Gaussian fading goes through the Wick engine on the variables
//! `(G, X, Z)` with `G = H̄ + H`, so line-of-sight channels need no
//! hand-derived formulas. Zero-mean fading known only through its kurtosis
//! uses the kurtosis closed form for `var(|Y|²)`.

use num_complex::Complex64;

use crate::error::Result;
use crate::model::{ChannelSpec, SignalSpec, GAUSSIAN_KURTOSIS};
use crate::wick::{Factor, GaussianVector, Polynomial};

const VAR_FADING: usize = 0;
const VAR_DATA: usize = 1;
const VAR_NOISE: usize = 2;

/// Output moments used by the scalar and hybrid bounds.
///
/// `e_y_abs_y_sq` is the centered cross-moment
/// `E[(Y − E[Y])(|Y|² − E[|Y|²])]`, i.e. the lower off-diagonal entry of
/// the observation covariance of `(|Y|², Y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub var_abs_y_sq: f64,
    pub var_y: f64,
    pub e_y_abs_y_sq: Complex64,
    pub e_xconj_abs_y_sq: Complex64,
    pub e_xconj_y: Complex64,
    /// Present when the set was estimated by Monte Carlo.
    pub std_errors: Option<MomentErrors>,
}

/// Standard errors of a Monte Carlo [`MomentSet`]. For complex fields the
/// real and imaginary parts carry the standard errors of the respective
/// components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentErrors {
    pub var_abs_y_sq: f64,
    pub var_y: f64,
    pub e_y_abs_y_sq: Complex64,
    pub e_xconj_abs_y_sq: Complex64,
    pub e_xconj_y: Complex64,
}

impl MomentSet {
    /// Covariance of the observation vector `(|Y|² − E|Y|², Y − E[Y])`.
    pub fn observation_covariance(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.var_abs_y_sq, 0.0), self.e_y_abs_y_sq.conj()],
            [self.e_y_abs_y_sq, Complex64::new(self.var_y, 0.0)],
        ]
    }

    /// `E[X^* y]` for the observation vector `y = (|Y|², Y)` (centering
    /// does not matter because `X` is zero-mean).
    pub fn input_cross_correlation(&self) -> [Complex64; 2] {
        [self.e_xconj_abs_y_sq, self.e_xconj_y]
    }
}

/// Kurtosis form of `var(|Y|²)` for zero-mean, unit-power fading and unit
/// noise power:
/// `(κ_H−1)|X̄|⁴ + (2κ_H−1)P(2|X̄|²+P) + 2(|X̄|²+P) + κ_Z−1`.
pub fn var_abs_y_sq_from_kurtosis(fading_kurtosis: f64, noise_kurtosis: f64, pilot_power: f64, data_power: f64) -> f64 {
    let (xb2, p) = (pilot_power, data_power);
    (fading_kurtosis - 1.0) * xb2 * xb2
        + (2.0 * fading_kurtosis - 1.0) * p * (2.0 * xb2 + p)
        + 2.0 * (xb2 + p)
        + noise_kurtosis
        - 1.0
}

fn scalar_variables(channel: &ChannelSpec, signal: &SignalSpec) -> Result<GaussianVector> {
    GaussianVector::independent(&[
        (channel.fading_mean, channel.fading_var),
        (Complex64::new(0.0, 0.0), signal.data_power()),
        (Complex64::new(0.0, 0.0), 1.0),
    ])
}

/// `E[|H̄ + H|⁴]` for Gaussian fading, evaluated by the Wick engine.
pub fn rician_fourth_moment(channel: &ChannelSpec) -> Result<f64> {
    channel.validate()?;
    channel.require_gaussian("the fourth-moment evaluation")?;
    let g = GaussianVector::independent(&[(channel.fading_mean, channel.fading_var)])?;
    let m = [Factor::plain(0), Factor::plain(0), Factor::conj(0), Factor::conj(0)];
    Ok(g.moment(&m)?.re)
}

/// Exact [`MomentSet`] of `Y = (H̄ + H)(X̄ + X) + Z`.
///
/// Gaussian fading: every entry comes from the Wick engine, with the noise
/// fourth moment adjusted to `κ_Z` (circular noise enters `var(|Y|²)` only
/// through `E|Z|⁴`). Otherwise the fading must be zero-mean with unit
/// power and circularly symmetric; `var(|Y|²)` then follows from the
/// kurtosis form.
pub fn moments_closed_form(channel: &ChannelSpec, signal: &SignalSpec) -> Result<MomentSet> {
    channel.validate()?;
    signal.validate()?;
    if channel.gaussian_fading {
        wick_moments(channel, signal)
    } else {
        kurtosis_moments(channel, signal)
    }
}

fn wick_moments(channel: &ChannelSpec, signal: &SignalSpec) -> Result<MomentSet> {
    let g = scalar_variables(channel, signal)?;
    let pilot = signal.pilot();
    let fading = Polynomial::var(VAR_FADING);
    let y = &(&fading.scale(pilot) + &(&fading * &Polynomial::var(VAR_DATA))) + &Polynomial::var(VAR_NOISE);
    let u = y.abs_sq();
    let x_conj = Polynomial::var(VAR_DATA).conj();

    let e_y = y.expectation(&g)?;
    let e_u = u.expectation(&g)?.re;
    let e_u2 = u.abs_sq().expectation(&g)?.re;
    let e_yu = (&y * &u).expectation(&g)?;
    let e_xu = (&x_conj * &u).expectation(&g)?;
    let e_xy = (&x_conj * &y).expectation(&g)?;

    Ok(MomentSet {
        var_abs_y_sq: e_u2 - e_u * e_u + (channel.noise_kurtosis - GAUSSIAN_KURTOSIS),
        var_y: e_u - e_y.norm_sqr(),
        e_y_abs_y_sq: e_yu - e_y * e_u,
        e_xconj_abs_y_sq: e_xu,
        e_xconj_y: e_xy,
        std_errors: None,
    })
}

fn kurtosis_moments(channel: &ChannelSpec, signal: &SignalSpec) -> Result<MomentSet> {
    channel.require_zero_mean("the kurtosis closed form")?;
    if (channel.fading_var - 1.0).abs() > 1e-12 {
        return Err(crate::error::invalid(
            "fading_var",
            format!("the kurtosis closed form assumes unit fading power, got {}", channel.fading_var),
        ));
    }
    let (xb2, p) = (signal.pilot_power(), signal.data_power());
    Ok(MomentSet {
        var_abs_y_sq: var_abs_y_sq_from_kurtosis(channel.fading_kurtosis, channel.noise_kurtosis, xb2, p),
        var_y: xb2 + p + 1.0,
        e_y_abs_y_sq: Complex64::new(0.0, 0.0),
        e_xconj_abs_y_sq: signal.pilot().conj() * p,
        e_xconj_y: Complex64::new(0.0, 0.0),
        std_errors: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pure_noise_variance() {
        let m = moments_closed_form(&ChannelSpec::rayleigh(), &SignalSpec::new(0.0, 0.0).unwrap()).unwrap();
        assert!((m.var_abs_y_sq - 1.0).abs() < 1e-15);
        assert!((m.var_y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rayleigh_half_split_unit_snr() {
        // hand evaluation: 0.25 + 3·0.5·1.5 + 2·1 + 1 = 5.5
        let s = SignalSpec::new(1.0, 0.5).unwrap();
        let m = moments_closed_form(&ChannelSpec::rayleigh(), &s).unwrap();
        assert!((m.var_abs_y_sq - 5.5).abs() < 1e-13);
        assert!((m.e_xconj_abs_y_sq - s.pilot().conj() * 0.5).norm() < 1e-14);
        assert_eq!(var_abs_y_sq_from_kurtosis(2.0, 2.0, 0.5, 0.5), 5.5);
    }

    #[test]
    fn full_pilot_has_no_cross_correlation() {
        for ch in [ChannelSpec::rayleigh(), ChannelSpec::rician(0.4).unwrap()] {
            let m = moments_closed_form(&ch, &SignalSpec::new(2.0, 1.0).unwrap()).unwrap();
            assert_eq!(m.e_xconj_abs_y_sq, Complex64::new(0.0, 0.0));
            assert_eq!(m.e_xconj_y, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn fourth_moments() {
        assert!((rician_fourth_moment(&ChannelSpec::rayleigh()).unwrap() - 2.0).abs() < 1e-15);
        assert!((rician_fourth_moment(&ChannelSpec::rician(1.0).unwrap()).unwrap() - 1.0).abs() < 1e-15);
        assert!((rician_fourth_moment(&ChannelSpec::rician(0.5).unwrap()).unwrap() - 1.75).abs() < 1e-15);
        let non_gaussian = ChannelSpec::with_kurtosis(3.0, 2.0).unwrap();
        assert!(rician_fourth_moment(&non_gaussian).is_err());
    }

    #[test]
    fn los_cross_terms_follow_the_channel_mean() {
        // E[X^*|Y|²] = E|G|² P X̄^*, E[X^* Y] = H̄ P
        let ch = ChannelSpec::rician(0.3).unwrap();
        let s = SignalSpec::new(1.7, 0.4).unwrap();
        let m = moments_closed_form(&ch, &s).unwrap();
        let p = s.data_power();
        assert!((m.e_xconj_abs_y_sq - s.pilot().conj() * p * ch.fading_power()).norm() < 1e-13);
        assert!((m.e_xconj_y - ch.fading_mean * p).norm() < 1e-14);
        assert!(m.e_y_abs_y_sq.norm() > 0.1);
        assert!((m.var_y - (ch.fading_var * s.pilot_power() + ch.fading_power() * p + 1.0)).abs() < 1e-13);
    }

    #[test]
    fn noise_kurtosis_only_shifts_var_abs_y_sq() {
        let s = SignalSpec::new(1.3, 0.6).unwrap();
        let mut ch = ChannelSpec::rician(0.2).unwrap();
        let base = moments_closed_form(&ch, &s).unwrap();
        ch.noise_kurtosis = 3.5;
        let heavy = moments_closed_form(&ch, &s).unwrap();
        assert!((heavy.var_abs_y_sq - base.var_abs_y_sq - 1.5).abs() < 1e-13);
        assert_eq!(heavy.e_y_abs_y_sq, base.e_y_abs_y_sq);
    }

    #[test]
    fn kurtosis_path_requires_zero_mean_unit_power() {
        let mut ch = ChannelSpec::with_kurtosis(3.0, 2.0).unwrap();
        let s = SignalSpec::new(1.0, 0.5).unwrap();
        let m = moments_closed_form(&ch, &s).unwrap();
        assert_eq!(m.var_abs_y_sq, var_abs_y_sq_from_kurtosis(3.0, 2.0, 0.5, 0.5));
        ch.fading_mean = Complex64::new(0.5, 0.0);
        ch.fading_var = 0.75;
        assert!(moments_closed_form(&ch, &s).is_err());
    }

    #[test]
    fn doubling_both_powers_tracks_the_polynomial() {
        for (xb2, p) in [(0.3, 0.7), (2.0, 5.0), (10.0, 1.0)] {
            for kh in [1.5, 2.0, 4.0] {
                let direct = var_abs_y_sq_from_kurtosis(kh, 2.0, 2.0 * xb2, 2.0 * p);
                // quadratic part scales by 4, linear part by 2, constant stays
                let quad = var_abs_y_sq_from_kurtosis(kh, 1.0, xb2, p) - 2.0 * (xb2 + p);
                let expected = 4.0 * quad + 4.0 * (xb2 + p) + 1.0;
                assert!((direct - expected).abs() < 1e-12 * direct);
            }
        }
    }

    proptest! {
        #[test]
        fn wick_agrees_with_kurtosis_form(rho in 0.0f64..100.0, nu in 0.0f64..=1.0) {
            let s = SignalSpec::new(rho, nu).unwrap();
            let m = moments_closed_form(&ChannelSpec::rayleigh(), &s).unwrap();
            let eq = var_abs_y_sq_from_kurtosis(2.0, 2.0, s.pilot_power(), s.data_power());
            prop_assert!((m.var_abs_y_sq - eq).abs() <= 1e-12 * eq);
        }

        #[test]
        fn output_variances_are_positive(rho in 0.0f64..50.0, nu in 0.0f64..=1.0, lambda in 0.0f64..=1.0) {
            let s = SignalSpec::new(rho, nu).unwrap();
            let m = moments_closed_form(&ChannelSpec::rician(lambda).unwrap(), &s).unwrap();
            prop_assert!(m.var_abs_y_sq > 0.0);
            prop_assert!(m.var_y > 0.0);
        }
    }
}
