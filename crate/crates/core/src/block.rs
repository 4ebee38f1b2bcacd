//! Rayleigh block fading: superimposed pilots against time-multiplexed
//! pilots, as a function of the coherence time `n_c`.

use crate::bound::{log_variance_ratio, BoundKind, BoundValue};
use crate::error::{invalid, Result};
use crate::model::SignalSpec;
use crate::optimize::maximize_share;
use crate::special::coherent_ergodic_capacity;

/// Largest coherence time accepted by the exhaustive training-length search.
pub const MAX_COHERENCE_TIME: usize = 10_000_000;

/// Pilot-share tolerance of [`optimize_pilot_share_block`].
pub const BLOCK_SHARE_TOLERANCE: f64 = 1e-9;

/// Operating point of a block-fading channel with unit-power Rayleigh
/// fading that stays constant over `coherence_time` uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockFadingSpec {
    pub coherence_time: usize,
    pub snr: f64,
    pub pilot_share: f64,
    /// Number of training slots `τ`; only used by the orthogonal scheme.
    pub training_len: Option<usize>,
}

impl BlockFadingSpec {
    pub fn new(coherence_time: usize, snr: f64, pilot_share: f64) -> Result<Self> {
        let spec = Self { coherence_time, snr, pilot_share, training_len: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.coherence_time == 0 {
            return Err(invalid("coherence_time", "must be ≥ 1"));
        }
        if self.coherence_time > MAX_COHERENCE_TIME {
            return Err(invalid("coherence_time", format!("must be ≤ {MAX_COHERENCE_TIME}")));
        }
        SignalSpec::new(self.snr, self.pilot_share)?;
        if let Some(tau) = self.training_len {
            if tau == 0 || tau >= self.coherence_time {
                return Err(invalid(
                    "training_len",
                    format!("must lie in 1..={} for n_c = {}", self.coherence_time.saturating_sub(1), self.coherence_time),
                ));
            }
        }
        Ok(())
    }
}

/// Which `(A, B)` pair feeds the superimposed block bound.
///
/// The bound is `((n−1)/n) log(B/(B−k)) + (1/n) log((nA+B)/(nA+B−k))`
/// with `k = n²ν(1−ν)ρ²`, where `B·I + A·11ᵀ` is the covariance of
/// `y y† 1` for the block embedding of the vector bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockConstants {
    /// Constants of the exact covariance, consistent with the vector bound
    /// evaluated on the embedding.
    #[default]
    Exact,
    /// The widely quoted constants
    /// `A = (2ν̄² + 2nν(1+nν) + 2(2n−1)νν̄ − 3nν²)ρ² + nνρ`,
    /// `B = (2n(nν+ν̄) − ν̄)ν̄ρ² + (2ν̄+nν)nρ + n`, `ν̄ = 1−ν`.
    /// They agree with [`BlockConstants::Exact`] at `n = 1` and as
    /// `n → ∞` but differ in the `ρ²` terms otherwise.
    Printed,
}

/// `(A, B)` for coherence time `n`.
pub fn block_constants(n: usize, snr: f64, nu: f64, which: BlockConstants) -> (f64, f64) {
    let n = n as f64;
    let nb = 1.0 - nu;
    let r2 = snr * snr;
    let linear_b = (2.0 * nb + nu * n) * n * snr + n;
    let linear_a = n * nu * snr;
    match which {
        BlockConstants::Exact => {
            let a = ((n * n - 4.0 * n + 1.0) * nu * nu + (4.0 * n - 2.0) * nu + 1.0) * r2 + linear_a;
            let b = 2.0 * n * nb * (n * nu + nb) * r2 + linear_b;
            (a, b)
        }
        BlockConstants::Printed => {
            let a = (2.0 * nb * nb + 2.0 * n * nu * (1.0 + n * nu) + 2.0 * (2.0 * n - 1.0) * nu * nb
                - 3.0 * n * nu * nu)
                * r2
                + linear_a;
            let b = (2.0 * n * (nu * n + nb) - nb) * nb * r2 + linear_b;
            (a, b)
        }
    }
}

/// Superimposed-pilot bound on Rayleigh block fading, nats per channel use,
/// with [`BlockConstants::Exact`].
pub fn bound_superimposed_block(spec: &BlockFadingSpec) -> Result<BoundValue> {
    bound_superimposed_block_with(spec, BlockConstants::Exact)
}

pub fn bound_superimposed_block_with(spec: &BlockFadingSpec, which: BlockConstants) -> Result<BoundValue> {
    spec.validate()?;
    let (n, rho, nu) = (spec.coherence_time, spec.snr, spec.pilot_share);
    let nf = n as f64;
    let k = nf * nf * nu * (1.0 - nu) * rho * rho;
    let (a, b) = block_constants(n, rho, nu, which);
    let shared = log_variance_ratio(nf * a + b, k)?;
    let rate = if n == 1 {
        shared
    } else {
        (nf - 1.0) / nf * log_variance_ratio(b, k)? + shared / nf
    };
    let mut v = BoundValue::new(BoundKind::SuperimposedBlock, rate);
    v.snr = Some(rho);
    v.pilot_share = Some(nu);
    v.los_power = Some(0.0);
    v.coherence_time = Some(n);
    Ok(v)
}

/// `lim_{n_c→∞}` of the superimposed block bound:
/// `log((2(1−ν)ρ + 1) / ((1−ν)ρ + 1))`.
pub fn block_fading_infinite_limit(snr: f64, pilot_share: f64) -> Result<f64> {
    let s = SignalSpec::new(snr, pilot_share)?;
    let p = s.data_power();
    Ok((p / (p + 1.0)).ln_1p())
}

/// Time-multiplexed pilot bound with `τ` training slots:
/// `((n_c−τ)/n_c) C(ρ²τ / (1 + ρ(τ+1)))`.
pub fn bound_orthogonal_block_at(coherence_time: usize, snr: f64, training_len: usize) -> Result<BoundValue> {
    let spec = BlockFadingSpec { coherence_time, snr, pilot_share: 0.0, training_len: Some(training_len) };
    spec.validate()?;
    if coherence_time < 2 {
        return Err(invalid("coherence_time", "the orthogonal scheme needs n_c ≥ 2"));
    }
    let tau = training_len as f64;
    let effective = snr * snr * tau / (1.0 + snr * (tau + 1.0));
    let rate = (coherence_time - training_len) as f64 / coherence_time as f64 * coherent_ergodic_capacity(effective)?;
    let mut v = BoundValue::new(BoundKind::OrthogonalBlock, rate);
    v.snr = Some(snr);
    v.los_power = Some(0.0);
    v.coherence_time = Some(coherence_time);
    Ok(v)
}

/// Time-multiplexed pilot bound maximized over the training length by
/// exhaustive search. Returns the bound and the smallest maximizing `τ`.
pub fn bound_orthogonal_block(coherence_time: usize, snr: f64) -> Result<(BoundValue, usize)> {
    if coherence_time < 2 {
        return Err(invalid("coherence_time", format!("the orthogonal scheme needs n_c ≥ 2, got {coherence_time}")));
    }
    let mut best = (bound_orthogonal_block_at(coherence_time, snr, 1)?, 1);
    for tau in 2..coherence_time {
        let v = bound_orthogonal_block_at(coherence_time, snr, tau)?;
        if v.rate_nats > best.0.rate_nats {
            best = (v, tau);
        }
    }
    Ok(best)
}

/// Pilot share maximizing [`bound_superimposed_block`], to within
/// [`BLOCK_SHARE_TOLERANCE`].
pub fn optimize_pilot_share_block(coherence_time: usize, snr: f64) -> Result<(f64, BoundValue)> {
    optimize_pilot_share_block_with(coherence_time, snr, BlockConstants::Exact)
}

pub fn optimize_pilot_share_block_with(
    coherence_time: usize,
    snr: f64,
    which: BlockConstants,
) -> Result<(f64, BoundValue)> {
    BlockFadingSpec::new(coherence_time, snr, 0.5)?;
    if !(snr > 0.0) {
        return Err(invalid("snr", format!("pilot-share optimization needs ρ > 0, got {snr}")));
    }
    let eval = |nu: f64| {
        BlockFadingSpec::new(coherence_time, snr, nu)
            .and_then(|s| bound_superimposed_block_with(&s, which))
            .map_or(f64::NEG_INFINITY, |b| b.rate_nats)
    };
    let (nu, _) = maximize_share(eval, BLOCK_SHARE_TOLERANCE);
    let value = bound_superimposed_block_with(&BlockFadingSpec::new(coherence_time, snr, nu)?, which)?;
    Ok((nu, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use crate::model::ChannelSpec;
    use crate::moments::var_abs_y_sq_from_kurtosis;
    use crate::scalar::{bound_theorem1, optimal_pilot_share};
    use crate::wick::{GaussianVector, Polynomial};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn spec(n: usize, rho: f64, nu: f64) -> BlockFadingSpec {
        BlockFadingSpec::new(n, rho, nu).unwrap()
    }

    #[test]
    fn single_use_reduces_to_scalar_bound() {
        for i in 0..5 {
            for j in 0..4 {
                let rho = 10f64.powf(-2.0 + i as f64);
                let nu = 0.1 + 0.25 * j as f64;
                let scalar = bound_theorem1(&ChannelSpec::rayleigh(), &SignalSpec::new(rho, nu).unwrap()).unwrap();
                for which in [BlockConstants::Exact, BlockConstants::Printed] {
                    let (a, b) = block_constants(1, rho, nu, which);
                    let v = var_abs_y_sq_from_kurtosis(2.0, 2.0, nu * rho, (1.0 - nu) * rho);
                    assert!((a + b - v).abs() <= 1e-12 * v);
                    let got = bound_superimposed_block_with(&spec(1, rho, nu), which).unwrap().rate_nats;
                    assert!((got - scalar.rate_nats).abs() <= 1e-12 * scalar.rate_nats, "ρ={rho} ν={nu}");
                }
            }
        }
    }

    #[test]
    fn infinite_limit_values() {
        assert_eq!(block_fading_infinite_limit(3.0, 1.0).unwrap(), 0.0);
        assert!((block_fading_infinite_limit(1.0, 0.0).unwrap() - 1.5f64.ln()).abs() < 1e-15);
        assert!((block_fading_infinite_limit(1e12, 0.0).unwrap() - 2f64.ln()).abs() < 1e-11);
        for (rho, nu) in [(0.1, 0.01), (1.0, 0.3), (10.0, 0.5)] {
            let lim = block_fading_infinite_limit(rho, nu).unwrap();
            let got = bound_superimposed_block(&spec(1_000_000, rho, nu)).unwrap().rate_nats;
            assert!((got - lim).abs() < 1e-3, "ρ={rho} ν={nu}: {got} vs {lim}");
        }
    }

    #[test]
    fn high_snr_long_block_approaches_log_two() {
        let got = bound_superimposed_block(&spec(1_000_000, 1e6, 1e-3)).unwrap().rate_nats;
        assert!((got - 2f64.ln()).abs() < 1e-3, "{got}");
    }

    #[test]
    fn reference_values() {
        let exact = bound_superimposed_block(&spec(2, 1.0, 0.5)).unwrap().rate_nats;
        let printed = bound_superimposed_block_with(&spec(2, 1.0, 0.5), BlockConstants::Printed).unwrap().rate_nats;
        assert!((exact - 0.088_311_767_839_658).abs() < 1e-12, "{exact}");
        assert!((printed - 0.086_660_297_967_489).abs() < 1e-12, "{printed}");
        let at4 = bound_superimposed_block(&spec(4, 0.1, 0.5)).unwrap().rate_nats;
        assert!(at4 > 0.0 && at4 < block_fading_infinite_limit(0.1, 0.5).unwrap());
    }

    // Ψ = cov(w), w = y y† 1, over the Gaussian variables (H, x_1..x_n, z_1..z_n).
    fn wick_block_covariance(n: usize, rho: f64, nu: f64) -> CMatrix {
        let p = (1.0 - nu) * rho;
        let zero = Complex64::new(0.0, 0.0);
        let mut params = vec![(zero, 1.0)];
        params.extend(std::iter::repeat_n((zero, p), n));
        params.extend(std::iter::repeat_n((zero, 1.0), n));
        let g = GaussianVector::independent(&params).unwrap();
        let h = Polynomial::var(0);
        let pilot = Complex64::new((nu * rho).sqrt(), 0.0);
        let y: Vec<Polynomial> = (0..n)
            .map(|k| &(&h.scale(pilot) + &(&h * &Polynomial::var(1 + k))) + &Polynomial::var(1 + n + k))
            .collect();
        let sum_conj = y.iter().fold(Polynomial::zero(), |acc, yk| &acc + &yk.conj());
        let w: Vec<Polynomial> = y.iter().map(|yk| yk * &sum_conj).collect();
        let mean: Vec<Complex64> = w.iter().map(|wk| wk.expectation(&g).unwrap()).collect();
        CMatrix::from_fn(n, n, |k, l| (&w[k] * &w[l].conj()).expectation(&g).unwrap() - mean[k] * mean[l].conj())
    }

    #[test]
    fn exact_constants_match_wick_covariance() {
        for (n, rho, nu) in [(2, 1.0, 0.5), (2, 0.7, 0.2), (3, 2.0, 0.35)] {
            let psi = wick_block_covariance(n, rho, nu);
            let (a, b) = block_constants(n, rho, nu, BlockConstants::Exact);
            for k in 0..n {
                for l in 0..n {
                    let expected = if k == l { a + b } else { a };
                    assert!((psi[(k, l)] - Complex64::new(expected, 0.0)).norm() < 1e-10 * (a + b), "n={n} ({k},{l})");
                }
            }
            let (ap, bp) = block_constants(n, rho, nu, BlockConstants::Printed);
            assert!((psi[(0, 1)].re - ap).abs() > 1e-3);
            assert!((psi[(0, 0)].re - ap - bp).abs() > 1e-3);
        }
    }

    #[test]
    fn orthogonal_reference_values() {
        let (v, tau) = bound_orthogonal_block(2, 0.1).unwrap();
        assert_eq!(tau, 1);
        assert!((v.rate_nats - 0.004_132_509_143_664_49).abs() < 1e-15);
        let (zero, _) = bound_orthogonal_block(2, 0.0).unwrap();
        assert_eq!(zero.rate_nats, 0.0);
        assert!(bound_orthogonal_block(1, 1.0).is_err());
        assert!(bound_orthogonal_block_at(5, 1.0, 5).is_err());
    }

    #[test]
    fn orthogonal_grows_without_bound_in_snr() {
        let vals: Vec<f64> =
            [1.0, 10.0, 1e2, 1e3, 1e6].iter().map(|&r| bound_orthogonal_block(100, r).unwrap().0.rate_nats).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
        assert!(vals[4] > 10.0);
    }

    #[test]
    fn orthogonal_nondecreasing_in_coherence_time() {
        for rho in [0.1, 1.0, 10.0] {
            let mut prev = 0.0;
            for n in 2..=200 {
                let (v, _) = bound_orthogonal_block(n, rho).unwrap();
                assert!(v.rate_nats >= prev - 1e-15, "ρ={rho} n={n}");
                prev = v.rate_nats;
            }
        }
    }

    #[test]
    fn share_optimization() {
        let (nu, _) = optimize_pilot_share_block(1, 1.0).unwrap();
        assert!((nu - optimal_pilot_share(&ChannelSpec::rayleigh(), 1.0).unwrap()).abs() < 1e-7);
        let (nu, _) = optimize_pilot_share_block(1, 1e-6).unwrap();
        assert!((nu - 0.5).abs() < 1e-4);
        let shares: Vec<f64> =
            [10, 100, 10_000, 1_000_000].iter().map(|&n| optimize_pilot_share_block(n, 1.0).unwrap().0).collect();
        assert!(shares.windows(2).all(|w| w[1] < w[0]), "{shares:?}");
        assert!(shares[3] < 1e-2);
        assert!(optimize_pilot_share_block(4, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn constants_are_positive(n in 1usize..2000, rho in 1e-3f64..1e4, nu in 0.0f64..=1.0) {
            for which in [BlockConstants::Exact, BlockConstants::Printed] {
                let (a, b) = block_constants(n, rho, nu, which);
                prop_assert!(a > 0.0 && b > 0.0);
            }
        }

        #[test]
        fn block_bound_is_nonnegative_and_below_log_two(n in 1usize..5000, rho in 1e-3f64..1e4, nu in 0.0f64..=1.0) {
            let v = bound_superimposed_block(&spec(n, rho, nu)).unwrap().rate_nats;
            prop_assert!((0.0..2f64.ln()).contains(&v));
        }
    }
}
