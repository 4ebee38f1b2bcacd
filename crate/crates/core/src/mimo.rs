//! Vector-channel bound `log|Q| − log|Q − ΦΨ⁻¹Φ†|` for
//! `y = (H̄ + H)(x̄ + x) + z`, with `Φ = E[x w†]` and `Ψ = cov(w)` for the
//! reduced observation `w = y y† c`.

use num_complex::Complex64;

use crate::block::{block_constants, BlockConstants};
use crate::bound::{BoundKind, BoundValue};
use crate::error::{invalid, Error, Result};
use crate::linalg::{check_hermitian, cholesky, hermitian_logdet, min_eigenvalue, solve_hermitian, symmetrize, CMatrix, MAX_DIM};
use crate::model::{ChannelSpec, SignalSpec};
use crate::moments::MomentSet;

/// `Ψ` counts as singular when its smallest eigenvalue is below this
/// fraction of its mean eigenvalue.
pub const REDUCTION_EIGEN_TOL: f64 = 1e-12;

/// Fading matrix model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MimoChannel {
    /// `n_r × n_t` matrix with i.i.d. entries drawn from the scalar model.
    IidEntries(ChannelSpec),
    /// `h·I` with a single scalar gain `h` shared by all `n_t = n_r`
    /// streams; this is block fading seen as a vector channel.
    SharedScalar(ChannelSpec),
}

impl MimoChannel {
    pub fn scalar(&self) -> &ChannelSpec {
        match self {
            MimoChannel::IidEntries(c) | MimoChannel::SharedScalar(c) => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MimoSpec {
    pub n_t: usize,
    pub n_r: usize,
    /// Data covariance `Q`, Hermitian positive definite.
    pub input_cov: CMatrix,
    /// Pilot `x̄` as an `n_t × 1` column.
    pub pilot: CMatrix,
    /// Reduction vector `c` as an `n_r × 1` column.
    pub reduction: CMatrix,
    pub channel: MimoChannel,
}

impl MimoSpec {
    pub fn validate(&self) -> Result<()> {
        let (nt, nr) = (self.n_t, self.n_r);
        if nt == 0 || nr == 0 || nt > MAX_DIM || nr > MAX_DIM {
            return Err(invalid("dimensions", format!("n_t and n_r must lie in 1..={MAX_DIM}, got {nt}×{nr}")));
        }
        if self.input_cov.shape() != (nt, nt) {
            return Err(invalid("input_cov", format!("must be {nt}×{nt}")));
        }
        if self.pilot.shape() != (nt, 1) {
            return Err(invalid("pilot", format!("must be a {nt}-vector")));
        }
        if self.reduction.shape() != (nr, 1) {
            return Err(invalid("reduction", format!("must be an {nr}-vector")));
        }
        if self.reduction.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return Err(invalid("reduction", "must be nonzero"));
        }
        check_hermitian(&self.input_cov)?;
        cholesky(&self.input_cov)?;
        if let MimoChannel::SharedScalar(_) = self.channel {
            if nt != nr {
                return Err(invalid("channel", "a shared scalar gain needs n_t = n_r"));
            }
        }
        self.channel.scalar().validate()
    }
}

/// `Φ` (`n_t × n_r`) and `Ψ` (`n_r × n_r`), with entrywise standard errors
/// when estimated by Monte Carlo.
#[derive(Debug, Clone, PartialEq)]
pub struct MimoMoments {
    pub phi: CMatrix,
    pub psi: CMatrix,
    pub phi_se: Option<CMatrix>,
    pub psi_se: Option<CMatrix>,
}

impl MimoMoments {
    /// The `1 × 1` moments with `c = 1` for a scalar channel.
    pub fn from_scalar(m: &MomentSet) -> Self {
        Self {
            phi: CMatrix::from_element(1, 1, m.e_xconj_abs_y_sq.conj()),
            psi: CMatrix::from_element(1, 1, Complex64::new(m.var_abs_y_sq, 0.0)),
            phi_se: None,
            psi_se: None,
        }
    }
}

/// `log|Q| − log|Q − ΦΨ⁻¹Φ†|` in nats per vector use.
///
/// Divide by the number of channel uses a vector spans to compare with
/// per-use rates.
pub fn bound_theorem3(spec: &MimoSpec, moments: &MimoMoments) -> Result<BoundValue> {
    spec.validate()?;
    let (nt, nr) = (spec.n_t, spec.n_r);
    if moments.phi.shape() != (nt, nr) || moments.psi.shape() != (nr, nr) {
        return Err(invalid("moments", format!("Φ must be {nt}×{nr} and Ψ {nr}×{nr}")));
    }
    check_hermitian(&moments.psi)?;
    let psi = symmetrize(&moments.psi);
    let mean_eigen = psi.trace().re / nr as f64;
    let threshold = REDUCTION_EIGEN_TOL * mean_eigen.abs();
    let lowest = min_eigenvalue(&psi);
    if !(lowest > threshold) {
        return Err(Error::UnsuitableReduction { min_eigenvalue: lowest, threshold });
    }

    let psi_inv_phi_h = solve_hermitian(&psi, &moments.phi.adjoint(), 0.0)?;
    let residual = symmetrize(&(&spec.input_cov - &moments.phi * psi_inv_phi_h));
    let log_q = hermitian_logdet(&spec.input_cov)?;
    let log_residual = hermitian_logdet(&residual).map_err(|e| {
        Error::Inconsistent(format!(
            "Q − ΦΨ⁻¹Φ† is not positive definite ({e}); the moment estimates are too noisy, raise the sample count"
        ))
    })?;
    let mut v = BoundValue::new(BoundKind::Mimo, log_q - log_residual);
    v.los_power = Some(spec.channel.scalar().los_power());
    Ok(v)
}

/// Scalar channel as a `1 × 1` vector channel with `c = 1`.
pub fn scalar_embedding(channel: &ChannelSpec, signal: &SignalSpec) -> Result<MimoSpec> {
    signal.validate()?;
    let spec = MimoSpec {
        n_t: 1,
        n_r: 1,
        input_cov: CMatrix::from_element(1, 1, Complex64::new(signal.data_power(), 0.0)),
        pilot: CMatrix::from_element(1, 1, signal.pilot()),
        reduction: CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
        channel: MimoChannel::IidEntries(*channel),
    };
    spec.validate()?;
    Ok(spec)
}

/// Rayleigh block fading over `n_c` uses as an `n_c × n_c` channel `h·I`,
/// with `x̄ = √(νρ)·1`, `Q = (1−ν)ρ·I` and `c = 1/n_c`.
pub fn block_fading_embedding(coherence_time: usize, snr: f64, pilot_share: f64) -> Result<MimoSpec> {
    let signal = SignalSpec::new(snr, pilot_share)?;
    let n = coherence_time;
    if n == 0 || n > MAX_DIM {
        return Err(invalid("coherence_time", format!("must lie in 1..={MAX_DIM} for the embedding")));
    }
    let spec = MimoSpec {
        n_t: n,
        n_r: n,
        input_cov: CMatrix::from_diagonal_element(n, n, Complex64::new(signal.data_power(), 0.0)),
        pilot: CMatrix::from_element(n, 1, signal.pilot()),
        reduction: CMatrix::from_element(n, 1, Complex64::new(1.0 / n as f64, 0.0)),
        channel: MimoChannel::SharedScalar(ChannelSpec::rayleigh()),
    };
    spec.validate()?;
    Ok(spec)
}

/// Exact `Φ = P X̄ I` and `Ψ = (B I + A 11ᵀ)/n²` of
/// [`block_fading_embedding`].
pub fn block_embedding_moments(coherence_time: usize, snr: f64, pilot_share: f64) -> Result<MimoMoments> {
    let signal = SignalSpec::new(snr, pilot_share)?;
    let n = coherence_time;
    let (a, b) = block_constants(n, snr, pilot_share, BlockConstants::Exact);
    let n2 = (n * n) as f64;
    Ok(MimoMoments {
        phi: CMatrix::from_diagonal_element(n, n, signal.pilot() * signal.data_power()),
        psi: CMatrix::from_fn(n, n, |i, j| Complex64::new(if i == j { (a + b) / n2 } else { a / n2 }, 0.0)),
        phi_se: None,
        psi_se: None,
    })
}
