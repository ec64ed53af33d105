//! Rayleigh-fading channel power realisations and Monte Carlo throughput.
//!
//! The channel power gain `h` is exponential with unit mean. Samples are
//! produced by inverse-CDF, `h = -ln(u)`, from a ChaCha8 stream selected by
//! `(seed, stream_id)`, so every sweep point can own an independent,
//! reproducible substream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::{received_power_direct, snr, throughput, DirectLink, RadioEnvironment};

/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FadingSampler {
    pub seed: u64,
    pub stream_id: u64,
}

impl FadingSampler {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Same seed, different substream.
    pub const fn stream(self, stream_id: u64) -> Self {
        Self { stream_id, ..self }
    }

    /// Infinite iterator of fading gains for this `(seed, stream_id)`.
    pub fn iter(&self) -> FadingIter {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        FadingIter { rng }
    }

    pub fn sample_h(&self, count: usize) -> Vec<f64> {
        self.iter().take(count).collect()
    }
}

pub struct FadingIter {
    rng: ChaCha8Rng,
}

impl Iterator for FadingIter {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        // Midpoint of one of 2^53 equal cells: u in (0, 1), never 0 or 1.
        let k = self.rng.next_u64() >> 11;
        let u = (k as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
        Some(-u.ln())
    }
}

/// Sample mean of the direct-link throughput with a 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean_bps: f64,
    pub half_width_bps: f64,
    pub samples: u64,
}

/// Averages the throughput over caller-supplied fading gains.
pub fn mean_throughput_from_samples<I>(
    link: &DirectLink,
    env: &RadioEnvironment,
    fading: I,
) -> Result<McEstimate, ModelError>
where
    I: IntoIterator<Item = f64>,
{
    // Welford running mean/variance.
    let mut count = 0u64;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for h in fading {
        let faded = link.with_fading(h);
        let rate = throughput(link.bandwidth_hz, snr(received_power_direct(&faded, env)?, env)?)?;
        count += 1;
        let delta = rate - mean;
        mean += delta / count as f64;
        m2 += delta * (rate - mean);
    }
    if count == 0 {
        return Err(ModelError::Domain {
            quantity: "n_samples",
            value: 0.0,
            requirement: "must be >= 1",
        });
    }
    let half_width_bps = if count > 1 {
        let variance = m2 / (count - 1) as f64;
        Z_95 * (variance / count as f64).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        mean_bps: mean,
        half_width_bps,
        samples: count,
    })
}

/// Monte Carlo estimate of the expected direct-link throughput over `h`.
///
/// The link's own `fading_coeff` is ignored; every draw replaces it.
pub fn mean_throughput_mc(
    link: &DirectLink,
    env: &RadioEnvironment,
    sampler: &FadingSampler,
    n_samples: usize,
) -> Result<McEstimate, ModelError> {
    mean_throughput_from_samples(link, env, sampler.iter().take(n_samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> RadioEnvironment {
        RadioEnvironment::new(3.679_446_109_611_074_5e-13, 5.5, 120e9).unwrap()
    }

    fn link() -> DirectLink {
        DirectLink::new(5.0, 1e6, 200.0, 1.0).unwrap()
    }

    #[test]
    fn zero_count_is_empty() {
        assert!(FadingSampler::new(1, 0).sample_h(0).is_empty());
    }

    #[test]
    fn same_seed_and_stream_reproduce() {
        let a = FadingSampler::new(42, 7).sample_h(1000);
        let b = FadingSampler::new(42, 7).sample_h(1000);
        assert_eq!(a, b);
        let c = FadingSampler::new(42, 8).sample_h(1000);
        assert_ne!(a, c);
        let d = FadingSampler::new(43, 7).sample_h(1000);
        assert_ne!(a, d);
    }

    #[test]
    fn samples_are_strictly_positive() {
        assert!(FadingSampler::new(3, 1).iter().take(100_000).all(|h| h > 0.0 && h.is_finite()));
    }

    #[test]
    fn forced_unit_fading_matches_deterministic_rate() {
        let est = mean_throughput_from_samples(&link(), &env(), [1.0]).unwrap();
        let e = env();
        let det = throughput(1e6, snr(received_power_direct(&link(), &e).unwrap(), &e).unwrap())
            .unwrap();
        assert_eq!(est.mean_bps, det);
        assert_eq!(est.half_width_bps, 0.0);
        assert_eq!(est.samples, 1);
    }

    #[test]
    fn vanishing_snr_drives_estimate_to_zero() {
        let mut e = env();
        e.interference_power_w = 1e3;
        let est = mean_throughput_mc(&link(), &e, &FadingSampler::new(9, 0), 10_000).unwrap();
        assert!(est.mean_bps < 1e-6, "{}", est.mean_bps);
    }

    #[test]
    fn empty_sample_set_is_rejected() {
        assert!(mean_throughput_mc(&link(), &env(), &FadingSampler::new(1, 0), 0).is_err());
    }
}
