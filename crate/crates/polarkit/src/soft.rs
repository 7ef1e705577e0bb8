//! Bitwise soft output from a list decode.
//!
//! Two extractors share the same [`DecodeResult`]: the proposed blend, which
//! splits the mass the decoder never visited between the two bit labels
//! according to the channel posterior, and the max-log list approximation
//! with a saturation constant for bits whose labels are missing from the
//! list. The decoder must have been run on `channel + priors`, so candidate
//! metrics already carry the priors.

use crate::channel::{clamp_llr, LlrVector};
use crate::scl::{log_add_exp, softplus, DecodeResult};
use crate::{Error, Result};

/// APP and extrinsic LLRs for every codeword bit, both clamped.
/// `extrinsic = app - prior - channel`.
#[derive(Debug, Clone)]
pub struct SoftBitOutput {
    pub app: LlrVector,
    pub extrinsic: LlrVector,
}

#[inline]
fn log_sigmoid(x: f64) -> f64 {
    -softplus(-x)
}

/// Soft output via the blended codebook-probability approximation.
///
/// For each bit, candidate mass with that bit label is summed, and the
/// unvisited mass `W = Q* - (list mass)` is apportioned by the channel
/// posterior `P(c_i = b | y_i)` evaluated on `channel + prior`. No
/// saturation constant is involved; bits that are structurally fixed across
/// the whole codebook saturate at the global LLR clamp.
pub fn soscl_soft_output(
    result: &DecodeResult,
    channel_llrs: &[f64],
    priors: &[f64],
) -> SoftBitOutput {
    let n = result.spec().block_len();
    assert_eq!(channel_llrs.len(), n);
    assert_eq!(priors.len(), n);

    // The unvisited mass is the accumulator value itself, which is exact:
    // taking Q* minus the list mass would re-derive it with cancellation.
    let log_w = result.log_unvisited();

    let mut num = vec![f64::NEG_INFINITY; n];
    let mut den = vec![f64::NEG_INFINITY; n];
    for cand in result.candidates() {
        let logp = -cand.pm;
        for (i, &bit) in cand.codeword().iter().enumerate() {
            if bit & 1 == 0 {
                num[i] = log_add_exp(num[i], logp);
            } else {
                den[i] = log_add_exp(den[i], logp);
            }
        }
    }

    let mut app = Vec::with_capacity(n);
    let mut extrinsic = Vec::with_capacity(n);
    for i in 0..n {
        let total = channel_llrs[i] + priors[i];
        let mut a = num[i];
        let mut b = den[i];
        if log_w > f64::NEG_INFINITY {
            a = log_add_exp(a, log_w + log_sigmoid(total));
            b = log_add_exp(b, log_w + log_sigmoid(-total));
        }
        let app_i = clamp_llr(a - b);
        app.push(app_i);
        extrinsic.push(clamp_llr(app_i - priors[i] - channel_llrs[i]));
    }
    SoftBitOutput {
        app: LlrVector::new(app),
        extrinsic: LlrVector::new(extrinsic),
    }
}

/// Max-log soft output from the candidate list.
///
/// `app = log max P(c | y) ratio` over the list; where one bit label never
/// occurs in the list, the extrinsic saturates at `+/- beta` and the APP is
/// reconstructed as `extrinsic + prior + channel` so the usual relation
/// holds for every bit.
pub fn pyndiah_soft_output(
    result: &DecodeResult,
    channel_llrs: &[f64],
    priors: &[f64],
    beta: f64,
) -> Result<SoftBitOutput> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "saturation beta = {beta} must be positive"
        )));
    }
    let n = result.spec().block_len();
    assert_eq!(channel_llrs.len(), n);
    assert_eq!(priors.len(), n);

    // Best (smallest) path metric carrying each bit label.
    let mut best0 = vec![f64::INFINITY; n];
    let mut best1 = vec![f64::INFINITY; n];
    for cand in result.candidates() {
        for (i, &bit) in cand.codeword().iter().enumerate() {
            if bit & 1 == 0 {
                best0[i] = best0[i].min(cand.pm);
            } else {
                best1[i] = best1[i].min(cand.pm);
            }
        }
    }

    let mut app = Vec::with_capacity(n);
    let mut extrinsic = Vec::with_capacity(n);
    for i in 0..n {
        let (app_i, ext_i) = match (best0[i].is_finite(), best1[i].is_finite()) {
            (true, true) => {
                let a = best1[i] - best0[i];
                (a, a - priors[i] - channel_llrs[i])
            }
            (true, false) => (beta + priors[i] + channel_llrs[i], beta),
            (false, true) => (-beta + priors[i] + channel_llrs[i], -beta),
            (false, false) => unreachable!("list is never empty"),
        };
        app.push(clamp_llr(app_i));
        extrinsic.push(clamp_llr(ext_i));
    }
    Ok(SoftBitOutput {
        app: LlrVector::new(app),
        extrinsic: LlrVector::new(extrinsic),
    })
}

/// Hard decision on APP LLRs: bit `i` is 0 iff `app_i >= 0` (ties to 0).
pub fn app_hard_decision(app: &[f64]) -> Vec<u8> {
    app.iter().map(|&l| u8::from(l < 0.0)).collect()
}
