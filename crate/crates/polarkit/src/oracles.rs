//! Brute-force and trellis ground truth.
//!
//! Everything here is exponential-cost and guarded, meant to anchor tests of
//! the fast paths: codebook probability by full enumeration, bitwise APP by
//! full enumeration, and bitwise APP by forward-backward over the syndrome
//! trellis. The two APP routes are independent of each other and of the list
//! decoder, so each validates the others.

use crate::channel::LlrVector;
use crate::code::CodeSpec;
use crate::scl::{log_add_exp, softplus};
use crate::{Error, Result};

const ENUM_CODEBOOK_MAX_K: usize = 24;
const ENUM_APP_MAX_K: usize = 20;
const TRELLIS_MAX_CHECKS: usize = 16;

/// `ln sigma(x)`, the log-probability of a bit agreeing with its LLR.
#[inline]
fn log_sigmoid(x: f64) -> f64 {
    -softplus(-x)
}

/// Log-probability of one codeword under the auxiliary uniform-input
/// measure: `sum_i ln sigma((1 - 2 c_i) l_i)`.
fn log_word_prob(codeword: &[u8], llrs: &[f64]) -> f64 {
    codeword
        .iter()
        .zip(llrs)
        .map(|(&c, &l)| log_sigmoid(if c & 1 == 0 { l } else { -l }))
        .sum()
}

/// Exact log codebook probability `ln Q_U(y)` by summing over all `2^K`
/// messages.
pub fn enumerate_codebook_prob(llrs: &[f64], spec: &CodeSpec) -> Result<f64> {
    let k = spec.dimension();
    if k > ENUM_CODEBOOK_MAX_K {
        return Err(Error::GuardExceeded {
            what: "enumeration dimension K",
            actual: k,
            limit: ENUM_CODEBOOK_MAX_K,
        });
    }
    assert_eq!(llrs.len(), spec.block_len());
    let mut message = vec![0u8; k];
    let mut acc = f64::NEG_INFINITY;
    for word in 0u64..(1u64 << k) {
        for (b, bit) in message.iter_mut().enumerate() {
            *bit = ((word >> b) & 1) as u8;
        }
        acc = log_add_exp(acc, log_word_prob(&spec.encode(&message), llrs));
    }
    Ok(acc)
}

/// Log-probability `ln Q(a^i | y)` of a decoding-path prefix under the
/// unconstrained auxiliary measure, by summing over all suffixes.
pub fn enumerate_prefix_prob(llrs: &[f64], prefix: &[u8]) -> Result<f64> {
    let n = llrs.len();
    assert!(prefix.len() <= n);
    let free = n - prefix.len();
    if free > ENUM_CODEBOOK_MAX_K {
        return Err(Error::GuardExceeded {
            what: "prefix enumeration suffix length",
            actual: free,
            limit: ENUM_CODEBOOK_MAX_K,
        });
    }
    let mut u = vec![0u8; n];
    u[..prefix.len()].copy_from_slice(prefix);
    let mut acc = f64::NEG_INFINITY;
    for word in 0u64..(1u64 << free) {
        for b in 0..free {
            u[prefix.len() + b] = ((word >> b) & 1) as u8;
        }
        let mut c = u.clone();
        crate::code::polar_transform(&mut c);
        acc = log_add_exp(acc, log_word_prob(&c, llrs));
    }
    Ok(acc)
}

/// Exact bitwise APP LLRs by enumerating the full codebook, with independent
/// per-bit priors folded in. Clamped like every LLR in the crate.
pub fn exact_bitwise_app(llrs: &[f64], priors: &[f64], spec: &CodeSpec) -> Result<LlrVector> {
    let k = spec.dimension();
    if k > ENUM_APP_MAX_K {
        return Err(Error::GuardExceeded {
            what: "APP enumeration dimension K",
            actual: k,
            limit: ENUM_APP_MAX_K,
        });
    }
    let n = spec.block_len();
    assert_eq!(llrs.len(), n);
    assert_eq!(priors.len(), n);
    let totals: Vec<f64> = llrs.iter().zip(priors).map(|(a, b)| a + b).collect();

    let mut num = vec![f64::NEG_INFINITY; n]; // bit = 0
    let mut den = vec![f64::NEG_INFINITY; n]; // bit = 1
    let mut message = vec![0u8; k];
    for word in 0u64..(1u64 << k) {
        for (b, bit) in message.iter_mut().enumerate() {
            *bit = ((word >> b) & 1) as u8;
        }
        let c = spec.encode(&message);
        let logp = log_word_prob(&c, &totals);
        for (i, &bit) in c.iter().enumerate() {
            if bit & 1 == 0 {
                num[i] = log_add_exp(num[i], logp);
            } else {
                den[i] = log_add_exp(den[i], logp);
            }
        }
    }
    Ok(LlrVector::new(
        num.iter().zip(&den).map(|(a, b)| a - b).collect(),
    ))
}

/// Syndrome trellis of a binary parity-check matrix: states are partial
/// syndromes, one section per code bit, transitions labeled by the bit
/// value. With `m` checks there are `2^m` states and the all-zero state is
/// both the start and the only accepting end state.
#[derive(Debug, Clone)]
pub struct SyndromeTrellis {
    num_checks: usize,
    column_masks: Vec<u32>,
}

impl SyndromeTrellis {
    pub fn from_parity(rows: &[Vec<u8>]) -> Result<Self> {
        let m = rows.len();
        if m > TRELLIS_MAX_CHECKS {
            return Err(Error::GuardExceeded {
                what: "syndrome trellis checks N - K",
                actual: m,
                limit: TRELLIS_MAX_CHECKS,
            });
        }
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("ragged parity-check matrix".into()));
        }
        let mut column_masks = vec![0u32; n];
        for (j, row) in rows.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    column_masks[i] |= 1 << j;
                }
            }
        }
        Ok(Self {
            num_checks: m,
            column_masks,
        })
    }

    pub fn num_states(&self) -> usize {
        1usize << self.num_checks
    }

    pub fn sections(&self) -> usize {
        self.column_masks.len()
    }

    /// State reached from `state` after emitting `bit` at `position`.
    #[inline]
    pub fn next_state(&self, state: u32, position: usize, bit: u8) -> u32 {
        if bit & 1 == 1 {
            state ^ self.column_masks[position]
        } else {
            state
        }
    }
}

/// Exact bitwise APP LLRs by log-domain forward-backward over the syndrome
/// trellis of `parity` (max-star realized as exact log-sum-exp).
///
/// Agrees with [`exact_bitwise_app`] up to numerical tolerance whenever both
/// guards admit the code.
pub fn bcjr_app(llrs: &[f64], priors: &[f64], parity: &[Vec<u8>]) -> Result<LlrVector> {
    let trellis = SyndromeTrellis::from_parity(parity)?;
    let n = llrs.len();
    assert_eq!(priors.len(), n);
    if trellis.sections() != 0 {
        assert_eq!(trellis.sections(), n, "parity width must match LLR length");
    }
    let totals: Vec<f64> = llrs.iter().zip(priors).map(|(a, b)| a + b).collect();
    let states = trellis.num_states();

    // gamma[i][b] = ln sigma((1 - 2b) total_i); constant over states.
    let gamma = |i: usize, b: u8| -> f64 {
        log_sigmoid(if b == 0 { totals[i] } else { -totals[i] })
    };

    // Forward pass, stored per section.
    let mut alpha = vec![vec![f64::NEG_INFINITY; states]; n + 1];
    alpha[0][0] = 0.0;
    for i in 0..n {
        let (before, after) = alpha.split_at_mut(i + 1);
        let cur = &before[i];
        let nxt = &mut after[0];
        for s in 0..states {
            let a = cur[s];
            if a == f64::NEG_INFINITY {
                continue;
            }
            for b in 0u8..2 {
                let t = trellis.next_state(s as u32, i, b) as usize;
                nxt[t] = log_add_exp(nxt[t], a + gamma(i, b));
            }
        }
    }

    // Backward pass with APP emission on the fly.
    let mut beta = vec![f64::NEG_INFINITY; states];
    beta[0] = 0.0;
    let mut app = vec![0.0; n];
    for i in (0..n).rev() {
        let mut num = f64::NEG_INFINITY;
        let mut den = f64::NEG_INFINITY;
        let mut beta_prev = vec![f64::NEG_INFINITY; states];
        for s in 0..states {
            let a = alpha[i][s];
            for b in 0u8..2 {
                let t = trellis.next_state(s as u32, i, b) as usize;
                let g = gamma(i, b);
                if beta[t] != f64::NEG_INFINITY {
                    beta_prev[s] = log_add_exp(beta_prev[s], g + beta[t]);
                    if a != f64::NEG_INFINITY {
                        let metric = a + g + beta[t];
                        if b == 0 {
                            num = log_add_exp(num, metric);
                        } else {
                            den = log_add_exp(den, metric);
                        }
                    }
                }
            }
        }
        app[i] = num - den;
        beta = beta_prev;
    }
    Ok(LlrVector::new(app))
}
