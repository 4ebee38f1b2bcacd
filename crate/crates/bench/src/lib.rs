//! Shared inputs for the criterion benches.

use pilotbound::{ChannelSpec, SignalSpec};

/// Line-of-sight factors swept by the benches.
pub const LOS_FACTORS: [f64; 3] = [0.0, 0.5, 1.0];

/// Coherence times swept by the block-fading benches.
pub const COHERENCE_TIMES: [usize; 4] = [2, 10, 100, 10_000];

/// Unit-SNR operating point at `ν = 1/2` for each line-of-sight factor.
pub fn operating_points() -> Vec<(ChannelSpec, SignalSpec)> {
    LOS_FACTORS
        .iter()
        .map(|&lambda| {
            let channel = ChannelSpec::rician(lambda).expect("valid factor");
            (channel, SignalSpec::new(1.0, 0.5).expect("valid signal"))
        })
        .collect()
}
