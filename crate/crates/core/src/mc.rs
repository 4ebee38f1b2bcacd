//! Seeded Monte Carlo estimation of every moment and estimator variance the
//! bounds are built from.
//!
//! Samples are split into `batch_count` contiguous batches. Batch `b` draws
//! from a ChaCha8 generator seeded with `seed` on stream `b`, so batches can
//! run in parallel and the result does not depend on the thread count.
//! Within a sample the variables are drawn in the order `X`, `H`, `Z`, each
//! complex normal as `√(σ²/2)·(n₁ + i n₂)`.
//!
//! Moments are plug-in estimates over the pooled sample (centered ones use
//! the empirical mean, a bias of order `1/N`). Their standard errors come
//! from batch means; nonlinear functions such as the bounds get
//! leave-one-batch-out jackknife errors.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::format::fmt_sig;
use crate::linalg::{cholesky, CMatrix};
use crate::mimo::{bound_theorem3, MimoChannel, MimoMoments, MimoSpec};
use crate::model::{ChannelSpec, SignalSpec, GAUSSIAN_KURTOSIS};
use crate::moments::{moments_closed_form, MomentErrors, MomentSet};
use crate::scalar::{
    bound_theorem1, min_scalar_error_variance, optimal_scalar_coeff, theorem1_from_moments, theorem2_from_parts,
    EstimatorCoeffs,
};

pub const DEFAULT_BATCH_COUNT: usize = 32;

/// Agreement threshold in standard errors.
pub const SE_THRESHOLD: f64 = 4.0;

/// Differences below `EXACT_TOL·(1 + |analytic|)` pass regardless of the
/// standard error (deterministic quantities have a zero standard error).
pub const EXACT_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct McConfig {
    pub seed: u64,
    pub n_samples: usize,
    pub batch_count: usize,
}

impl McConfig {
    pub fn new(seed: u64, n_samples: usize) -> Self {
        Self { seed, n_samples, batch_count: DEFAULT_BATCH_COUNT }
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_count < 2 {
            return Err(invalid("batch_count", format!("must be ≥ 2, got {}", self.batch_count)));
        }
        if self.n_samples < self.batch_count {
            return Err(invalid(
                "n_samples",
                format!("must be at least batch_count = {}, got {}", self.batch_count, self.n_samples),
            ));
        }
        Ok(())
    }

    /// Size of batch `b`; the first `n_samples % batch_count` batches take
    /// one extra sample.
    pub fn batch_len(&self, batch: usize) -> usize {
        self.n_samples / self.batch_count + usize::from(batch < self.n_samples % self.batch_count)
    }

    fn batch_rng(&self, batch: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(batch as u64);
        rng
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub value: T,
    pub std_error: f64,
    pub n_samples: usize,
}

impl McEstimate<f64> {
    /// Whether `reference` lies within `k` standard errors.
    pub fn agrees_with(&self, reference: f64, k: f64) -> bool {
        agrees(reference, self.value, self.std_error, k)
    }
}

fn agrees(analytic: f64, mc: f64, se: f64, k: f64) -> bool {
    let diff = (analytic - mc).abs();
    diff <= k * se || diff <= EXACT_TOL * (1.0 + analytic.abs())
}

fn complex_normal(rng: &mut impl Rng, var: f64) -> Complex64 {
    let s = (0.5 * var).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

fn require_sampler(channel: &ChannelSpec) -> Result<()> {
    channel.validate()?;
    if !channel.gaussian_fading || channel.noise_kurtosis != GAUSSIAN_KURTOSIS {
        return Err(Error::Unsupported(
            "sampling needs Gaussian fading and Gaussian noise (the Rayleigh and Rician presets)".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct ScalarDraw {
    pilot: Complex64,
    data_var: f64,
    fading_mean: Complex64,
    fading_var: f64,
}

impl ScalarDraw {
    fn new(channel: &ChannelSpec, signal: &SignalSpec) -> Result<Self> {
        require_sampler(channel)?;
        signal.validate()?;
        Ok(Self {
            pilot: signal.pilot(),
            data_var: signal.data_power(),
            fading_mean: channel.fading_mean,
            fading_var: channel.fading_var,
        })
    }

    fn draw(&self, rng: &mut impl Rng) -> (Complex64, Complex64) {
        let x = complex_normal(rng, self.data_var);
        let h = self.fading_mean + complex_normal(rng, self.fading_var);
        let z = complex_normal(rng, 1.0);
        (x, h * (self.pilot + x) + z)
    }
}

/// Stream of `(X, Y)` pairs, batch after batch, in the layout used by every
/// estimator in this module.
pub fn sample_scalar_channel(
    channel: &ChannelSpec,
    signal: &SignalSpec,
    cfg: &McConfig,
) -> Result<impl Iterator<Item = (Complex64, Complex64)>> {
    cfg.validate()?;
    let draw = ScalarDraw::new(channel, signal)?;
    let cfg = *cfg;
    Ok((0..cfg.batch_count).flat_map(move |b| {
        let mut rng = cfg.batch_rng(b);
        (0..cfg.batch_len(b)).map(move |_| draw.draw(&mut rng))
    }))
}

const VX: usize = 0;
const VY: usize = 1;
const VU: usize = 2;

/// Running means and co-moments of `(X, Y, |Y|²)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CoMoments {
    n: f64,
    mean: [Complex64; 3],
    // Σ (v_i − m_i)(v_j − m_j)^*
    cross: [[Complex64; 3]; 3],
}

impl CoMoments {
    pub fn push(&mut self, x: Complex64, y: Complex64) {
        let v = [x, y, Complex64::new(y.norm_sqr(), 0.0)];
        self.n += 1.0;
        let d: [Complex64; 3] = std::array::from_fn(|i| v[i] - self.mean[i]);
        let w = (self.n - 1.0) / self.n;
        for i in 0..3 {
            self.mean[i] += d[i] / self.n;
            for j in 0..3 {
                self.cross[i][j] += d[i] * d[j].conj() * w;
            }
        }
    }

    pub fn merge(&self, other: &Self) -> Self {
        if other.n == 0.0 {
            return *self;
        }
        if self.n == 0.0 {
            return *other;
        }
        let n = self.n + other.n;
        let d: [Complex64; 3] = std::array::from_fn(|i| other.mean[i] - self.mean[i]);
        let w = self.n * other.n / n;
        Self {
            n,
            mean: std::array::from_fn(|i| self.mean[i] + d[i] * (other.n / n)),
            cross: std::array::from_fn(|i| {
                std::array::from_fn(|j| self.cross[i][j] + other.cross[i][j] + d[i] * d[j].conj() * w)
            }),
        }
    }

    pub fn count(&self) -> usize {
        self.n as usize
    }

    fn cov(&self, i: usize, j: usize) -> Complex64 {
        self.cross[i][j] / self.n
    }

    fn raw(&self, i: usize, j: usize) -> Complex64 {
        self.cov(i, j) + self.mean[i] * self.mean[j].conj()
    }

    /// Plug-in [`MomentSet`] without standard errors.
    pub fn moments(&self) -> MomentSet {
        MomentSet {
            var_abs_y_sq: self.cov(VU, VU).re,
            var_y: self.cov(VY, VY).re,
            e_y_abs_y_sq: self.cov(VY, VU),
            e_xconj_abs_y_sq: self.raw(VU, VX),
            e_xconj_y: self.raw(VY, VX),
            std_errors: None,
        }
    }

    /// Empirical variance of the estimation error `X − X̂`.
    pub fn estimator_variance(&self, coeffs: &EstimatorCoeffs) -> f64 {
        let mut w = [ZERO; 3];
        w[VX] = Complex64::new(1.0, 0.0);
        match coeffs {
            EstimatorCoeffs::Scalar(a) => w[VU] = -a,
            EstimatorCoeffs::Hybrid([a1, a2]) => {
                w[VU] = -a1;
                w[VY] = -a2;
            }
        }
        let mut acc = ZERO;
        for i in 0..3 {
            for j in 0..3 {
                acc += w[i] * w[j].conj() * self.cov(i, j);
            }
        }
        acc.re
    }
}

fn batch_mean_se(values: &[f64]) -> f64 {
    let b = values.len() as f64;
    let mean = values.iter().sum::<f64>() / b;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (b - 1.0);
    (var / b).sqrt()
}

fn batch_mean_se_complex(values: &[Complex64]) -> Complex64 {
    let re: Vec<f64> = values.iter().map(|z| z.re).collect();
    let im: Vec<f64> = values.iter().map(|z| z.im).collect();
    Complex64::new(batch_mean_se(&re), batch_mean_se(&im))
}

/// Leave-one-out jackknife over batch statistics: `f` on the pooled sample
/// and the jackknife standard error `√((B−1)/B Σ (θ₋ᵦ − θ̄)²)`.
fn jackknife<S: Clone>(
    batches: &[S],
    merge: impl Fn(&S, &S) -> S,
    f: impl Fn(&S) -> Result<f64>,
) -> Result<(f64, f64)> {
    let b = batches.len();
    let mut prefix = Vec::with_capacity(b + 1);
    let mut suffix = vec![None; b + 1];
    prefix.push(None::<S>);
    for s in batches {
        let next = match prefix.last().expect("non-empty") {
            Some(p) => merge(p, s),
            None => s.clone(),
        };
        prefix.push(Some(next));
    }
    for i in (0..b).rev() {
        suffix[i] = Some(match &suffix[i + 1] {
            Some(s) => merge(&batches[i], s),
            None => batches[i].clone(),
        });
    }
    let full = f(prefix[b].as_ref().expect("at least one batch"))?;
    let mut loo = Vec::with_capacity(b);
    for i in 0..b {
        let rest = match (&prefix[i], &suffix[i + 1]) {
            (Some(p), Some(s)) => merge(p, s),
            (Some(p), None) => p.clone(),
            (None, Some(s)) => s.clone(),
            (None, None) => return Err(invalid("batch_count", "the jackknife needs at least two batches")),
        };
        loo.push(f(&rest)?);
    }
    let mean = loo.iter().sum::<f64>() / b as f64;
    let ss = loo.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    Ok((full, ((b as f64 - 1.0) / b as f64 * ss).sqrt()))
}

/// Per-batch and pooled co-moments of a scalar-channel sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarStatistics {
    batches: Vec<CoMoments>,
    total: CoMoments,
}

impl ScalarStatistics {
    /// Samples the channel with one task per batch.
    pub fn collect(channel: &ChannelSpec, signal: &SignalSpec, cfg: &McConfig) -> Result<Self> {
        cfg.validate()?;
        let draw = ScalarDraw::new(channel, signal)?;
        let batches: Vec<CoMoments> = (0..cfg.batch_count)
            .into_par_iter()
            .map(|b| {
                let mut rng = cfg.batch_rng(b);
                let mut acc = CoMoments::default();
                for _ in 0..cfg.batch_len(b) {
                    let (x, y) = draw.draw(&mut rng);
                    acc.push(x, y);
                }
                acc
            })
            .collect();
        Ok(Self::from_batches(batches))
    }

    /// Statistics of an explicit sample, split into `batch_count` contiguous
    /// batches with the sizes [`McConfig::batch_len`] would use.
    pub fn from_samples(samples: &[(Complex64, Complex64)], batch_count: usize) -> Result<Self> {
        let cfg = McConfig { seed: 0, n_samples: samples.len(), batch_count };
        cfg.validate()?;
        let mut start = 0;
        let batches = (0..batch_count)
            .map(|b| {
                let end = start + cfg.batch_len(b);
                let mut acc = CoMoments::default();
                for &(x, y) in &samples[start..end] {
                    acc.push(x, y);
                }
                start = end;
                acc
            })
            .collect();
        Ok(Self::from_batches(batches))
    }

    fn from_batches(batches: Vec<CoMoments>) -> Self {
        let total = batches.iter().fold(CoMoments::default(), |acc, b| acc.merge(b));
        Self { batches, total }
    }

    pub fn n_samples(&self) -> usize {
        self.total.count()
    }

    pub fn pooled(&self) -> &CoMoments {
        &self.total
    }

    /// Plug-in moments with batch-means standard errors.
    pub fn moments(&self) -> MomentSet {
        let per: Vec<MomentSet> = self.batches.iter().map(CoMoments::moments).collect();
        let real = |f: fn(&MomentSet) -> f64| batch_mean_se(&per.iter().map(f).collect::<Vec<_>>());
        let complex = |f: fn(&MomentSet) -> Complex64| batch_mean_se_complex(&per.iter().map(f).collect::<Vec<_>>());
        MomentSet {
            std_errors: Some(MomentErrors {
                var_abs_y_sq: real(|m| m.var_abs_y_sq),
                var_y: real(|m| m.var_y),
                e_y_abs_y_sq: complex(|m| m.e_y_abs_y_sq),
                e_xconj_abs_y_sq: complex(|m| m.e_xconj_abs_y_sq),
                e_xconj_y: complex(|m| m.e_xconj_y),
            }),
            ..self.total.moments()
        }
    }

    /// Empirical estimation-error variance for fixed coefficients.
    pub fn estimator_variance(&self, coeffs: &EstimatorCoeffs) -> McEstimate<f64> {
        let per: Vec<f64> = self.batches.iter().map(|b| b.estimator_variance(coeffs)).collect();
        McEstimate {
            value: self.total.estimator_variance(coeffs),
            std_error: batch_mean_se(&per),
            n_samples: self.n_samples(),
        }
    }

    /// Jackknifed value of an arbitrary function of the co-moments.
    pub fn jackknife(&self, f: impl Fn(&CoMoments) -> Result<f64>) -> Result<McEstimate<f64>> {
        let (value, std_error) = jackknife(&self.batches, CoMoments::merge, f)?;
        Ok(McEstimate { value, std_error, n_samples: self.n_samples() })
    }

    /// Quadratic-estimator bound with the sampled `var(|Y|²)` and the exact
    /// input cross-correlation of `reference`.
    pub fn bound_theorem1(&self, reference: &MomentSet, data_power: f64) -> Result<McEstimate<f64>> {
        self.jackknife(|c| {
            let m = MomentSet { var_abs_y_sq: c.moments().var_abs_y_sq, ..*reference };
            theorem1_from_moments(&m, data_power)
        })
    }

    /// Hybrid bound with the sampled observation covariance and the exact
    /// input cross-correlation of `reference`.
    pub fn bound_theorem2(&self, reference: &MomentSet, data_power: f64) -> Result<McEstimate<f64>> {
        let cross = reference.input_cross_correlation();
        self.jackknife(|c| Ok(theorem2_from_parts(&c.moments().observation_covariance(), &cross, data_power)?.0))
    }
}

/// Plug-in [`MomentSet`] with batch-means standard errors.
pub fn estimate_moments(channel: &ChannelSpec, signal: &SignalSpec, cfg: &McConfig) -> Result<MomentSet> {
    Ok(ScalarStatistics::collect(channel, signal, cfg)?.moments())
}

/// Empirical `var(X − α|Y|²)` or `var(X − α₁(|Y|² − m₂) − α₂(Y − m₁))`.
pub fn empirical_estimator_variance(
    channel: &ChannelSpec,
    signal: &SignalSpec,
    coeffs: &EstimatorCoeffs,
    cfg: &McConfig,
) -> Result<McEstimate<f64>> {
    let finite = match coeffs {
        EstimatorCoeffs::Scalar(a) => a.is_finite(),
        EstimatorCoeffs::Hybrid(a) => a.iter().all(|z| z.is_finite()),
    };
    if !finite {
        return Err(invalid("coeffs", "must be finite"));
    }
    Ok(ScalarStatistics::collect(channel, signal, cfg)?.estimator_variance(coeffs))
}

#[derive(Debug, Clone)]
struct MimoDraw {
    nt: usize,
    nr: usize,
    chol_q: CMatrix,
    pilot: Vec<Complex64>,
    reduction: Vec<Complex64>,
    shared: bool,
    fading_mean: Complex64,
    fading_var: f64,
}

/// Raw sums of `x`, `w = y y† c`, `x w†` and `w w†` (row-major).
#[derive(Debug, Clone, PartialEq)]
struct MimoSums {
    n: f64,
    w: Vec<Complex64>,
    xw: Vec<Complex64>,
    ww: Vec<Complex64>,
}

impl MimoSums {
    fn zeros(nt: usize, nr: usize) -> Self {
        Self { n: 0.0, w: vec![ZERO; nr], xw: vec![ZERO; nt * nr], ww: vec![ZERO; nr * nr] }
    }

    fn merge(&self, other: &Self) -> Self {
        let add = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Self { n: self.n + other.n, w: add(&self.w, &other.w), xw: add(&self.xw, &other.xw), ww: add(&self.ww, &other.ww) }
    }

    fn moments(&self, nt: usize, nr: usize) -> MimoMoments {
        let mean_w: Vec<Complex64> = self.w.iter().map(|s| s / self.n).collect();
        MimoMoments {
            phi: CMatrix::from_fn(nt, nr, |i, j| self.xw[i * nr + j] / self.n),
            psi: CMatrix::from_fn(nr, nr, |i, j| self.ww[i * nr + j] / self.n - mean_w[i] * mean_w[j].conj()),
            phi_se: None,
            psi_se: None,
        }
    }
}

impl MimoDraw {
    fn new(spec: &MimoSpec) -> Result<Self> {
        spec.validate()?;
        let channel = spec.channel.scalar();
        require_sampler(channel)?;
        Ok(Self {
            nt: spec.n_t,
            nr: spec.n_r,
            chol_q: cholesky(&spec.input_cov)?,
            pilot: spec.pilot.iter().copied().collect(),
            reduction: spec.reduction.iter().copied().collect(),
            shared: matches!(spec.channel, MimoChannel::SharedScalar(_)),
            fading_mean: channel.fading_mean,
            fading_var: channel.fading_var,
        })
    }

    fn run_batch(&self, rng: &mut ChaCha8Rng, len: usize) -> MimoSums {
        let (nt, nr) = (self.nt, self.nr);
        let mut sums = MimoSums::zeros(nt, nr);
        let mut g = vec![ZERO; nt];
        let mut x = vec![ZERO; nt];
        let mut y = vec![ZERO; nr];
        let mut w = vec![ZERO; nr];
        for _ in 0..len {
            for gi in g.iter_mut() {
                *gi = complex_normal(rng, 1.0);
            }
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = (0..=i).map(|k| self.chol_q[(i, k)] * g[k]).sum();
            }
            if self.shared {
                let h = self.fading_mean + complex_normal(rng, self.fading_var);
                for ((yr, p), xr) in y.iter_mut().zip(&self.pilot).zip(&x) {
                    *yr = h * (p + xr);
                }
            } else {
                for yr in y.iter_mut() {
                    *yr = ZERO;
                    for (p, xt) in self.pilot.iter().zip(&x) {
                        let h = self.fading_mean + complex_normal(rng, self.fading_var);
                        *yr += h * (p + xt);
                    }
                }
            }
            for yr in y.iter_mut() {
                *yr += complex_normal(rng, 1.0);
            }
            let proj: Complex64 = y.iter().zip(&self.reduction).map(|(yr, cr)| yr.conj() * cr).sum();
            for ((wr, yr), sw) in w.iter_mut().zip(&y).zip(sums.w.iter_mut()) {
                *wr = yr * proj;
                *sw += *wr;
            }
            for (xi, row) in x.iter().zip(sums.xw.chunks_mut(nr)) {
                for (acc, wr) in row.iter_mut().zip(&w) {
                    *acc += xi * wr.conj();
                }
            }
            for (wr, row) in w.iter().zip(sums.ww.chunks_mut(nr)) {
                for (acc, ws) in row.iter_mut().zip(&w) {
                    *acc += wr * ws.conj();
                }
            }
        }
        sums.n = len as f64;
        sums
    }
}

/// Per-batch sums for the vector bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MimoStatistics {
    nt: usize,
    nr: usize,
    batches: Vec<MimoSums>,
    total: MimoSums,
}

impl MimoStatistics {
    pub fn collect(spec: &MimoSpec, cfg: &McConfig) -> Result<Self> {
        cfg.validate()?;
        let draw = MimoDraw::new(spec)?;
        let batches: Vec<MimoSums> = (0..cfg.batch_count)
            .into_par_iter()
            .map(|b| draw.run_batch(&mut cfg.batch_rng(b), cfg.batch_len(b)))
            .collect();
        let total = batches.iter().skip(1).fold(batches[0].clone(), |acc, b| acc.merge(b));
        Ok(Self { nt: spec.n_t, nr: spec.n_r, batches, total })
    }

    /// Plug-in `Φ` and `Ψ` with entrywise batch-means standard errors.
    pub fn moments(&self) -> MimoMoments {
        let (nt, nr) = (self.nt, self.nr);
        let per: Vec<MimoMoments> = self.batches.iter().map(|b| b.moments(nt, nr)).collect();
        let se = |pick: fn(&MimoMoments) -> &CMatrix, rows: usize, cols: usize| {
            CMatrix::from_fn(rows, cols, |i, j| {
                batch_mean_se_complex(&per.iter().map(|m| pick(m)[(i, j)]).collect::<Vec<_>>())
            })
        };
        MimoMoments {
            phi_se: Some(se(|m| &m.phi, nt, nr)),
            psi_se: Some(se(|m| &m.psi, nr, nr)),
            ..self.total.moments(nt, nr)
        }
    }

    /// Vector bound (nats per vector use) with jackknife standard error.
    pub fn bound(&self, spec: &MimoSpec) -> Result<McEstimate<f64>> {
        let (nt, nr) = (self.nt, self.nr);
        let (value, std_error) =
            jackknife(&self.batches, MimoSums::merge, |s| Ok(bound_theorem3(spec, &s.moments(nt, nr))?.rate_nats))?;
        Ok(McEstimate { value, std_error, n_samples: self.total.n as usize })
    }
}

pub fn estimate_mimo_moments(spec: &MimoSpec, cfg: &McConfig) -> Result<MimoMoments> {
    Ok(MimoStatistics::collect(spec, cfg)?.moments())
}

/// The vector bound evaluated on Monte Carlo moments.
pub fn mimo_bound_mc(spec: &MimoSpec, cfg: &McConfig) -> Result<McEstimate<f64>> {
    MimoStatistics::collect(spec, cfg)?.bound(spec)
}

/// One line of a [`ValidationReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    pub quantity: String,
    pub analytic: f64,
    pub mc: f64,
    pub se: f64,
    pub pass: bool,
}

impl ValidationRow {
    fn new(quantity: impl Into<String>, analytic: f64, mc: f64, se: f64) -> Self {
        let pass = agrees(analytic, mc, se, SE_THRESHOLD);
        Self { quantity: quantity.into(), analytic, mc, se, pass }
    }

    fn from_estimate(quantity: &str, analytic: f64, est: Result<McEstimate<f64>>) -> Self {
        match est {
            Ok(e) => Self::new(quantity, analytic, e.value, e.std_error),
            Err(_) => Self { quantity: quantity.into(), analytic, mc: f64::NAN, se: f64::NAN, pass: false },
        }
    }
}

/// Closed-form quantities side by side with their Monte Carlo estimates.
///
/// Serializes to `quantity, analytic, mc, se, pass` lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ValidationRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "quantity, analytic, mc, se, pass")?;
        for r in &self.rows {
            writeln!(
                f,
                "{}, {}, {}, {}, {}",
                r.quantity,
                fmt_sig(r.analytic),
                fmt_sig(r.mc),
                fmt_sig(r.se),
                if r.pass { "pass" } else { "fail" }
            )?;
        }
        Ok(())
    }
}

/// Checks every closed-form moment, both minimum error variances and both
/// bounds against Monte Carlo at [`SE_THRESHOLD`] standard errors.
///
/// Failed comparisons are report rows, not errors; only invalid inputs
/// return `Err`.
pub fn validate_bound(channel: &ChannelSpec, signal: &SignalSpec, cfg: &McConfig) -> Result<ValidationReport> {
    let exact = moments_closed_form(channel, signal)?;
    let stats = ScalarStatistics::collect(channel, signal, cfg)?;
    let mc = stats.moments();
    let se = mc.std_errors.expect("Monte Carlo moments carry standard errors");
    let p = signal.data_power();

    let mut rows = vec![
        ValidationRow::new("var_abs_y_sq", exact.var_abs_y_sq, mc.var_abs_y_sq, se.var_abs_y_sq),
        ValidationRow::new("var_y", exact.var_y, mc.var_y, se.var_y),
    ];
    for (name, a, m, s) in [
        ("e_y_abs_y_sq", exact.e_y_abs_y_sq, mc.e_y_abs_y_sq, se.e_y_abs_y_sq),
        ("e_xconj_abs_y_sq", exact.e_xconj_abs_y_sq, mc.e_xconj_abs_y_sq, se.e_xconj_abs_y_sq),
        ("e_xconj_y", exact.e_xconj_y, mc.e_xconj_y, se.e_xconj_y),
    ] {
        rows.push(ValidationRow::new(format!("{name}.re"), a.re, m.re, s.re));
        rows.push(ValidationRow::new(format!("{name}.im"), a.im, m.im, s.im));
    }

    let alpha = if exact.var_abs_y_sq > 0.0 { optimal_scalar_coeff(&exact) } else { ZERO };
    let min_var = min_scalar_error_variance(exact.var_abs_y_sq, p, signal.pilot_power());
    let emp = stats.estimator_variance(&EstimatorCoeffs::Scalar(alpha));
    rows.push(ValidationRow::new("min_error_variance", min_var, emp.value, emp.std_error));
    let simple = bound_theorem1(channel, signal)?.rate_nats;
    rows.push(ValidationRow::from_estimate("bound_simple", simple, stats.bound_theorem1(&exact, p)));

    let (hybrid, coeffs, hybrid_var) =
        theorem2_from_parts(&exact.observation_covariance(), &exact.input_cross_correlation(), p)?;
    let emp = stats.estimator_variance(&EstimatorCoeffs::Hybrid(coeffs));
    rows.push(ValidationRow::new("min_error_variance_hybrid", hybrid_var, emp.value, emp.std_error));
    rows.push(ValidationRow::from_estimate("bound_hybrid", hybrid, stats.bound_theorem2(&exact, p)));

    Ok(ValidationReport { rows })
}
