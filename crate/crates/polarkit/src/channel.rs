//! BPSK over binary-input AWGN, with Eb/N0 bookkeeping and LLR production.

use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::ops::Deref;

/// Clamp applied to every log-likelihood ratio in the crate. A magnitude of
/// 40 corresponds to a bit-error probability below 1e-17, far beyond
/// simulation resolution.
pub const LLR_MAX: f64 = 40.0;

/// Channel log-likelihood ratios with the sign convention
/// `l_i = log p(y_i | c_i = 0) - log p(y_i | c_i = 1)`,
/// clamped to `[-LLR_MAX, LLR_MAX]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    /// Wraps raw values, clamping each entry to the global LLR limit.
    pub fn new(values: Vec<f64>) -> Self {
        Self(values.into_iter().map(clamp_llr).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for LlrVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<LlrVector> for Vec<f64> {
    fn from(v: LlrVector) -> Self {
        v.0
    }
}

#[inline]
pub fn clamp_llr(x: f64) -> f64 {
    x.clamp(-LLR_MAX, LLR_MAX)
}

/// Binary-input AWGN channel parameters.
///
/// `sigma` is the noise standard deviation per real dimension, derived from
/// the SNR per information bit: `sigma^2 = 1 / (2 * rate * 10^(ebn0_db/10))`.
/// For concatenated schemes `rate` counts message bits only, so that
/// different schemes are compared at identical noise levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    ebn0_db: f64,
    rate: f64,
    sigma: f64,
    gain: f64,
}

impl ChannelParams {
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter(format!("rate {rate} outside (0, 1]")));
        }
        if !ebn0_db.is_finite() {
            return Err(Error::InvalidParameter("Eb/N0 must be finite".into()));
        }
        let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0));
        Ok(Self {
            ebn0_db,
            rate,
            sigma: sigma2.sqrt(),
            gain: 1.0,
        })
    }

    /// Same noise level, scalar channel gain `h` applied to the transmitted
    /// symbols.
    pub fn with_gain(mut self, gain: f64) -> Self {
        self.gain = gain;
        self
    }

    pub fn ebn0_db(&self) -> f64 {
        self.ebn0_db
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// `y_i = h x_i + n_i` with i.i.d. zero-mean Gaussian noise of standard
    /// deviation `sigma`. Deterministic given the RNG state.
    pub fn transmit<R: Rng>(&self, symbols: &[f64], rng: &mut R) -> Vec<f64> {
        symbols
            .iter()
            .map(|&x| self.gain * x + self.sigma * rng.sample::<f64, _>(StandardNormal))
            .collect()
    }

    /// Channel LLRs for observations: `l_i = 2 h y_i / sigma^2`, clamped.
    pub fn llr_from_observation(&self, observations: &[f64]) -> LlrVector {
        let scale = 2.0 * self.gain / (self.sigma * self.sigma);
        LlrVector::new(observations.iter().map(|&y| scale * y).collect())
    }
}

/// BPSK mapping `0 -> +1`, `1 -> -1`.
pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 }).collect()
}

/// LLRs for arbitrary observations, gain and noise level, without the Eb/N0
/// bookkeeping: `l_i = 2 h y_i / sigma^2`, clamped. Used where the gain is a
/// search variable rather than a channel parameter.
pub fn llr_with_gain(observations: &[f64], gain: f64, sigma: f64) -> Result<LlrVector> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma {sigma} must be positive")));
    }
    let scale = 2.0 * gain / (sigma * sigma);
    Ok(LlrVector::new(observations.iter().map(|&y| scale * y).collect()))
}

/// Counter-based per-trial RNG stream: every trial draws from a stream keyed
/// by `(master_seed, trial_index)`, so results do not depend on how trials
/// are distributed over workers.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index.wrapping_add(1));
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulation_map() {
        assert_eq!(modulate(&[0, 1]), vec![1.0, -1.0]);
        assert_eq!(modulate(&[0, 0, 0]), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn sigma_bookkeeping() {
        // 0 dB at rate 1/2 collapses to sigma = 1.
        let p = ChannelParams::new(0.0, 0.5).unwrap();
        assert!((p.sigma() - 1.0).abs() < 1e-12);
        // Doubling the rate at fixed Eb/N0 halves sigma^2.
        let half = ChannelParams::new(3.0, 0.25).unwrap();
        let full = ChannelParams::new(3.0, 0.5).unwrap();
        let ratio = full.sigma().powi(2) / half.sigma().powi(2);
        assert!((ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn llr_values() {
        let p = ChannelParams::new(0.0, 0.5).unwrap(); // sigma = 1, h = 1
        let llr = p.llr_from_observation(&[0.0, 1.0, -30.0]);
        assert_eq!(llr[0], 0.0);
        assert!((llr[1] - 2.0).abs() < 1e-12);
        assert_eq!(llr[2], -LLR_MAX); // clamped
    }

    #[test]
    fn noiseless_signs_recover_codeword() {
        let p = ChannelParams::new(20.0, 0.5).unwrap().with_gain(0.7);
        let bits = [0u8, 1, 1, 0, 1];
        let mut rng = trial_rng(7, 0);
        let y = p.transmit(&modulate(&bits), &mut rng);
        let llr = p.llr_from_observation(&y);
        for (l, b) in llr.iter().zip(bits) {
            assert_eq!(*l < 0.0, b == 1);
        }
    }

    #[test]
    fn transmit_is_deterministic_per_stream() {
        let p = ChannelParams::new(2.0, 0.5).unwrap();
        let x = modulate(&[0; 16]);
        let a = p.transmit(&x, &mut trial_rng(42, 3));
        let b = p.transmit(&x, &mut trial_rng(42, 3));
        let c = p.transmit(&x, &mut trial_rng(42, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn empirical_noise_variance() {
        let p = ChannelParams::new(1.0, 0.65625).unwrap();
        let x = vec![1.0; 100_000];
        let y = p.transmit(&x, &mut trial_rng(11, 0));
        let mean_sq: f64 =
            y.iter().map(|v| (v - p.gain()) * (v - p.gain())).sum::<f64>() / y.len() as f64;
        let sigma2 = p.sigma() * p.sigma();
        assert!(
            (mean_sq - sigma2).abs() / sigma2 < 0.03,
            "sample variance {mean_sq} vs sigma^2 {sigma2}"
        );
    }

    #[test]
    fn invalid_params() {
        assert!(ChannelParams::new(0.0, 0.0).is_err());
        assert!(ChannelParams::new(0.0, 1.5).is_err());
        assert!(llr_with_gain(&[1.0], 1.0, 0.0).is_err());
    }
}
