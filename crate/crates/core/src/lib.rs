//! Closed-form mutual-information lower bounds for noncoherent fading
//! channels with superimposed pilots, plus Monte Carlo cross-checks.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod block;
pub mod bound;
pub mod error;
pub mod format;
pub mod linalg;
pub mod mc;
pub mod mimo;
pub mod model;
pub mod moments;
pub mod optimize;
#[cfg(any(test, feature = "test-oracles"))]
pub mod oracle;
pub mod scalar;
pub mod special;
pub mod wick;

pub use block::{
    block_fading_infinite_limit, bound_orthogonal_block, bound_superimposed_block, optimize_pilot_share_block,
    BlockConstants, BlockFadingSpec,
};
pub use bound::{BoundKind, BoundValue};
pub use error::{Error, Result};
pub use mc::{
    empirical_estimator_variance, estimate_mimo_moments, estimate_moments, mimo_bound_mc, sample_scalar_channel,
    validate_bound, McConfig, McEstimate, ValidationReport, ValidationRow,
};
pub use mimo::{block_fading_embedding, bound_theorem3, MimoChannel, MimoMoments, MimoSpec};
pub use model::{ChannelSpec, SignalSpec};
pub use moments::{moments_closed_form, MomentErrors, MomentSet};
pub use scalar::{
    bound_medard, bound_theorem1, bound_theorem2, optimal_pilot_share, optimize_theorem1_share,
    optimize_theorem2_share, pilot_share_high_snr_limit, theorem1_high_snr_limit, EstimatorCoeffs,
    HybridBound,
};
pub use special::{coherent_ergodic_capacity, exp_integral_e1};
