//! Accept/reject decision rules, outcome classification and streaming
//! error statistics.
//!
//! A generalized decoder either accepts its best candidate or rejects the
//! block (a detected error / erasure). Rejections and accepted-but-wrong
//! blocks both count toward the block error rate, so the misdetection rate
//! is exactly `UER / BLER`.

use crate::code::CrcPoly;
use crate::scl::DecodeResult;
use crate::{Error, Result};
use std::f64::consts::LN_2;

/// Classification of one decoded block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionOutcome {
    /// Accepted and equal to the transmitted information bits.
    AcceptedCorrect,
    /// Accepted but different from the transmitted information bits.
    UndetectedError,
    /// Rejected (erasure).
    DetectedError,
}

/// Confidence threshold test: accept iff `gamma_star > 1 - epsilon`, which
/// caps the misdetection rate at `epsilon` when the confidence is
/// calibrated. `epsilon = 0` degenerates to reject-everything.
pub fn threshold_accept(gamma_star: f64, epsilon: f64) -> Result<bool> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} outside [0, 1)"
        )));
    }
    Ok(gamma_star > 1.0 - epsilon)
}

/// Likelihood-ratio threshold test on log-probabilities: accept iff
/// `exp(candidate - total) >= 2^(NT) / (1 + 2^(NT))`.
///
/// `total` is the log of whatever normalization the caller uses as the
/// codebook-probability stand-in (for the list baseline, the list mass).
pub fn forney_threshold(
    candidate_log_prob: f64,
    total_log_prob: f64,
    t: f64,
    block_len: usize,
) -> Result<bool> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("threshold T = {t} must be >= 0")));
    }
    // ln of 2^(NT) / (1 + 2^(NT)) = -softplus(-NT ln 2), kept in log domain
    // so large NT cannot overflow.
    let x = block_len as f64 * t * LN_2;
    let log_threshold = -crate::scl::softplus(-x);
    Ok(candidate_log_prob - total_log_prob >= log_threshold)
}

/// CRC candidate selection: scan candidates in ascending-metric order and
/// return the first whose information payload splits into
/// `message || crc` that verifies; `None` means a detected error.
///
/// The code's dimension must equal `message_len + poly.degree()`.
pub fn crc_select(
    result: &DecodeResult,
    message_len: usize,
    poly: &CrcPoly,
) -> Option<usize> {
    let spec = result.spec();
    debug_assert_eq!(spec.dimension(), message_len + poly.degree());
    result
        .candidates()
        .iter()
        .position(|cand| poly.check(&spec.info_bits(&cand.u)))
}

/// Maps an accept/reject decision plus the decided information bits to an
/// outcome.
pub fn classify_outcome(accepted: bool, decided: &[u8], transmitted: &[u8]) -> DecisionOutcome {
    assert_eq!(decided.len(), transmitted.len(), "info length mismatch");
    if !accepted {
        DecisionOutcome::DetectedError
    } else if decided == transmitted {
        DecisionOutcome::AcceptedCorrect
    } else {
        DecisionOutcome::UndetectedError
    }
}

/// Number of decade-half calibration bins: `(10^-(k+1)/2, 10^-k/2]` for
/// `k = 0..NUM_CALIBRATION_BINS`.
pub const NUM_CALIBRATION_BINS: usize = 10;

/// Bin index for a predicted error probability `1 - gamma`, or `None` for
/// values at or below `1e-5` (outside the tracked range).
///
/// Bin `k` covers `(10^-(k+1)/2, 10^-k/2]`, half-open on the small side.
pub fn calibration_bin(one_minus_gamma: f64) -> Result<Option<usize>> {
    if !(0.0..=1.0).contains(&one_minus_gamma) {
        return Err(Error::InvalidParameter(format!(
            "predicted error {one_minus_gamma} outside [0, 1]"
        )));
    }
    if one_minus_gamma <= 1e-5 {
        return Ok(None);
    }
    let k = (-2.0 * one_minus_gamma.log10()).floor();
    // Guard the k = -0.0 case at exactly 1.0 and boundary rounding.
    let k = (k.max(0.0) as usize).min(NUM_CALIBRATION_BINS - 1);
    Ok(Some(k))
}

/// One simulated block, ready to be folded into a [`MetricsAccumulator`].
#[derive(Debug, Clone, Copy)]
pub struct TrialRecord {
    pub outcome: DecisionOutcome,
    /// Predicted error probability (`1 - gamma*` or `1 - gamma_list`,
    /// depending on what the experiment calibrates), if tracked.
    pub predicted_error: Option<f64>,
    /// Whether the calibrated prediction should be scored against a block
    /// error (`true` for gamma*) or a list miss (`false` for gamma_list).
    pub bin_on_block_error: bool,
    /// Whether the transmitted input vector survived in the candidate list.
    pub transmitted_in_list: bool,
}

/// Per-bin aggregation: trials, errors and the sum of predictions.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BinCell {
    pub count: u64,
    pub errors: u64,
    pub predicted_sum: f64,
}

/// Streaming statistics over trials. Merging is associative, so workers can
/// accumulate privately and combine afterwards.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsAccumulator {
    pub trials: u64,
    pub errors: u64,
    pub undetected: u64,
    pub list_misses: u64,
    pub bins: [BinCell; NUM_CALIBRATION_BINS],
}

/// The derived rates: block, undetected, misdetection and list error rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub bler: f64,
    pub uer: f64,
    pub mdr: f64,
    pub ler: f64,
}

impl MetricsAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, trial: &TrialRecord) -> Result<()> {
        self.trials += 1;
        let block_error = trial.outcome != DecisionOutcome::AcceptedCorrect;
        if block_error {
            self.errors += 1;
        }
        if trial.outcome == DecisionOutcome::UndetectedError {
            self.undetected += 1;
        }
        if !trial.transmitted_in_list {
            self.list_misses += 1;
        }
        if let Some(p) = trial.predicted_error {
            if let Some(k) = calibration_bin(p)? {
                let cell = &mut self.bins[k];
                cell.count += 1;
                cell.predicted_sum += p;
                let scored_error = if trial.bin_on_block_error {
                    block_error
                } else {
                    !trial.transmitted_in_list
                };
                if scored_error {
                    cell.errors += 1;
                }
            }
        }
        Ok(())
    }

    /// Associative, commutative merge of two accumulators.
    pub fn merge(mut self, other: &Self) -> Self {
        self.trials += other.trials;
        self.errors += other.errors;
        self.undetected += other.undetected;
        self.list_misses += other.list_misses;
        for (mine, theirs) in self.bins.iter_mut().zip(&other.bins) {
            mine.count += theirs.count;
            mine.errors += theirs.errors;
            mine.predicted_sum += theirs.predicted_sum;
        }
        self
    }

    /// BLER counts every non-correct trial (detected and undetected alike),
    /// so `mdr = uer / bler`; zero errors give `mdr = 0` by convention.
    pub fn rates(&self) -> Result<Rates> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("no trials recorded".into()));
        }
        let t = self.trials as f64;
        let bler = self.errors as f64 / t;
        let uer = self.undetected as f64 / t;
        let mdr = if self.errors == 0 {
            0.0
        } else {
            self.undetected as f64 / self.errors as f64
        };
        let ler = self.list_misses as f64 / t;
        Ok(Rates { bler, uer, mdr, ler })
    }
}

/// Wilson score interval for a binomial rate at confidence `z` standard
/// normal quantiles (1.96 for 95%).
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        ((center - spread) / denom).max(0.0),
        ((center + spread) / denom).min(1.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_rule() {
        assert!(threshold_accept(0.95, 0.1).unwrap());
        assert!(!threshold_accept(0.85, 0.1).unwrap());
        // epsilon = 0 rejects everything a decoder can produce.
        assert!(!threshold_accept(1.0, 0.0).unwrap());
        assert!(threshold_accept(0.5, 1.0).is_err());
        assert!(threshold_accept(0.5, -0.1).is_err());
    }

    #[test]
    fn forney_rule() {
        // T = 0: threshold 1/2.
        assert!(forney_threshold((0.6f64).ln(), 0.0, 0.0, 64).unwrap());
        assert!(!forney_threshold((0.4f64).ln(), 0.0, 0.0, 64).unwrap());
        // Equal candidate and total mass passes any finite T.
        assert!(forney_threshold(-3.0, -3.0, 5.0, 64).unwrap());
        // Huge NT rejects everything strictly below the total.
        assert!(!forney_threshold(-1e-9, 0.0, 50.0, 1024).unwrap());
        assert!(forney_threshold(0.0, 0.0, -1.0, 8).is_err());
    }

    #[test]
    fn outcome_classification() {
        assert_eq!(
            classify_outcome(false, &[0, 1], &[1, 1]),
            DecisionOutcome::DetectedError
        );
        assert_eq!(
            classify_outcome(true, &[0, 1], &[0, 1]),
            DecisionOutcome::AcceptedCorrect
        );
        assert_eq!(
            classify_outcome(true, &[0, 1], &[1, 1]),
            DecisionOutcome::UndetectedError
        );
    }

    #[test]
    fn binning() {
        assert_eq!(calibration_bin(0.5).unwrap(), Some(0));
        assert_eq!(calibration_bin(1.0).unwrap(), Some(0));
        assert_eq!(calibration_bin(0.03).unwrap(), Some(3));
        assert_eq!(calibration_bin(1e-6).unwrap(), None);
        assert_eq!(calibration_bin(0.0).unwrap(), None);
        // Boundary orientation: 10^-0.5 itself belongs to bin 1.
        let boundary = 10f64.powf(-0.5);
        assert_eq!(calibration_bin(boundary).unwrap(), Some(1));
        assert!(calibration_bin(-0.1).is_err());
        assert!(calibration_bin(1.1).is_err());
    }

    #[test]
    fn rates_and_merge() {
        let mut a = MetricsAccumulator::new();
        let mut b = MetricsAccumulator::new();
        let rec = |outcome, p| TrialRecord {
            outcome,
            predicted_error: Some(p),
            bin_on_block_error: true,
            transmitted_in_list: true,
        };
        a.record(&rec(DecisionOutcome::AcceptedCorrect, 0.02)).unwrap();
        a.record(&rec(DecisionOutcome::UndetectedError, 0.4)).unwrap();
        b.record(&rec(DecisionOutcome::DetectedError, 0.6)).unwrap();
        b.record(&rec(DecisionOutcome::AcceptedCorrect, 1e-9)).unwrap();
        let merged = a.clone().merge(&b);
        assert_eq!(merged.trials, 4);
        assert_eq!(merged.errors, 2);
        assert_eq!(merged.undetected, 1);
        let r = merged.rates().unwrap();
        assert_eq!(r.bler, 0.5);
        assert_eq!(r.uer, 0.25);
        assert_eq!(r.mdr, 0.5);
        assert_eq!(r.ler, 0.0);
        // Bin 0 holds the two large predictions; 1e-9 was out of range.
        assert_eq!(merged.bins[0].count, 2);
        assert_eq!(merged.bins[3].count, 1);
        let total: u64 = merged.bins.iter().map(|c| c.count).sum();
        assert_eq!(total, 3);
        // Merge order does not change counts.
        assert_eq!(b.merge(&a), merged);
    }

    #[test]
    fn degenerate_rates() {
        let mut acc = MetricsAccumulator::new();
        assert!(acc.rates().is_err());
        acc.record(&TrialRecord {
            outcome: DecisionOutcome::AcceptedCorrect,
            predicted_error: None,
            bin_on_block_error: true,
            transmitted_in_list: true,
        })
        .unwrap();
        let r = acc.rates().unwrap();
        assert_eq!(r.bler, 0.0);
        assert_eq!(r.mdr, 0.0);
    }

    #[test]
    fn mdr_identity_example() {
        // UER / BLER from reported curve values.
        let uer = 3.7283e-5f64;
        let bler = 4.6044e-4f64;
        assert!((uer / bler - 0.080972).abs() < 1e-5);
    }

    #[test]
    fn wilson_sanity() {
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && 0.5 < hi);
        assert!(lo > 0.40 && hi < 0.60);
        let (lo, hi) = wilson_interval(0, 100, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
    }
}
