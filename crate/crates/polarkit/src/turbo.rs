//! Product codes from identical component codes and their block turbo
//! decoder.
//!
//! An `(N^2, K^2)` product code encodes a `K x K` message array with the
//! component code along rows and then columns. Decoding alternates row and
//! column soft-input soft-output passes over the four `N x N` LLR matrices
//! (channel, a-priori, APP, extrinsic); after every half-iteration the APP
//! hard decision is tested for membership in every row and column.

use crate::code::CodeSpec;
use crate::scl::SclDecoder;
use crate::soft::{app_hard_decision, pyndiah_soft_output, soscl_soft_output};
use crate::{Error, Result};
use std::sync::Arc;

/// Which soft-input soft-output backend drives the component decodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SisoKind {
    /// Blended codebook-probability soft output; extrinsic scaled by a
    /// constant alpha (0.5 unless configured otherwise).
    Proposed,
    /// Max-log list soft output with per-half-iteration alpha and beta
    /// schedules.
    Pyndiah,
}

/// Turbo decoder configuration. Schedules are indexed by half-iteration and
/// extended by repeating their last entry.
#[derive(Debug, Clone)]
pub struct TurboConfig {
    pub spec: Arc<CodeSpec>,
    pub siso: SisoKind,
    pub list_size: usize,
    /// Maximum number of full iterations (a full iteration is one row pass
    /// plus one column pass).
    pub max_iterations: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

/// The classic published schedules for the max-log backend.
pub const PYNDIAH_ALPHA: [f64; 7] = [0.2, 0.3, 0.5, 0.7, 0.9, 1.0, 1.0];
pub const PYNDIAH_BETA: [f64; 6] = [0.2, 0.4, 0.6, 0.8, 1.0, 1.0];

impl TurboConfig {
    pub fn new(spec: Arc<CodeSpec>, siso: SisoKind, list_size: usize, max_iterations: usize) -> Result<Self> {
        if max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be >= 1".into()));
        }
        if list_size == 0 {
            return Err(Error::InvalidParameter("list size must be >= 1".into()));
        }
        let (alpha, beta) = match siso {
            SisoKind::Proposed => (vec![0.5], Vec::new()),
            SisoKind::Pyndiah => (PYNDIAH_ALPHA.to_vec(), PYNDIAH_BETA.to_vec()),
        };
        Ok(Self {
            spec,
            siso,
            list_size,
            max_iterations,
            alpha,
            beta,
        })
    }

    pub fn with_alpha(mut self, alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidParameter("alpha schedule must be non-empty".into()));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn with_beta(mut self, beta: Vec<f64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::InvalidParameter("beta schedule must be non-empty".into()));
        }
        self.beta = beta;
        Ok(self)
    }

    fn alpha_at(&self, half_iter: usize) -> f64 {
        *self.alpha.get(half_iter).unwrap_or_else(|| self.alpha.last().unwrap())
    }

    fn beta_at(&self, half_iter: usize) -> f64 {
        *self.beta.get(half_iter).unwrap_or_else(|| self.beta.last().unwrap())
    }
}

/// Decoder progress over a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurboStatus {
    Running,
    Success,
    Failure,
}

/// Which dimension a half-iteration processes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Columns,
}

/// The four LLR matrices driving the iteration, stored row-major.
#[derive(Debug, Clone)]
pub struct ProductState {
    pub n: usize,
    pub l_ch: Vec<f64>,
    pub l_a: Vec<f64>,
    pub l_app: Vec<f64>,
    pub l_e: Vec<f64>,
    /// Completed half-iterations.
    pub half_iterations: usize,
    pub status: TurboStatus,
}

impl ProductState {
    pub fn new(l_ch: Vec<f64>, n: usize) -> Self {
        assert_eq!(l_ch.len(), n * n, "channel matrix must be N x N");
        Self {
            l_ch,
            l_a: vec![0.0; n * n],
            l_app: vec![0.0; n * n],
            l_e: vec![0.0; n * n],
            half_iterations: 0,
            status: TurboStatus::Running,
        }
    }

    pub fn hard_decision(&self) -> Vec<u8> {
        app_hard_decision(&self.l_app)
    }
}

/// Encodes a `K x K` message (row-major) into an `N x N` codeword array:
/// rows first, then columns. The order is immaterial for a linear component
/// code.
pub fn product_encode(message: &[u8], spec: &CodeSpec) -> Vec<u8> {
    let k = spec.dimension();
    let n = spec.block_len();
    assert_eq!(message.len(), k * k, "message must be K x K");
    // Encode rows: K rows of N bits.
    let mut rows = vec![0u8; k * n];
    for r in 0..k {
        let encoded = spec.encode(&message[r * k..(r + 1) * k]);
        rows[r * n..(r + 1) * n].copy_from_slice(&encoded);
    }
    // Encode columns.
    let mut out = vec![0u8; n * n];
    let mut column = vec![0u8; k];
    for c in 0..n {
        for r in 0..k {
            column[r] = rows[r * n + c];
        }
        let encoded = spec.encode(&column);
        for r in 0..n {
            out[r * n + c] = encoded[r];
        }
    }
    out
}

/// True iff every row and every column of the `N x N` bit array is a
/// component codeword.
pub fn is_product_codeword(bits: &[u8], spec: &CodeSpec) -> bool {
    let n = spec.block_len();
    assert_eq!(bits.len(), n * n);
    let mut line = vec![0u8; n];
    for r in 0..n {
        if !spec.is_codeword(&bits[r * n..(r + 1) * n]) {
            return false;
        }
    }
    for c in 0..n {
        for r in 0..n {
            line[r] = bits[r * n + c];
        }
        if !spec.is_codeword(&line) {
            return false;
        }
    }
    true
}

/// Runs one half-iteration: SISO-decodes every row (or column) of
/// `L_ch + L_a`, rewrites `L_app`/`L_e`, then scales the extrinsic matrix
/// into the next a-priori, `L_a = alpha_t * L_e`. The success test is the
/// caller's job (see [`turbo_decode`]).
pub fn half_iteration(
    state: &mut ProductState,
    axis: Axis,
    config: &TurboConfig,
    decoder: &mut SclDecoder,
) -> Result<()> {
    let n = state.n;
    let t = state.half_iterations;
    let alpha = config.alpha_at(t);
    let beta = config.beta_at(t);

    let mut channel = vec![0.0f64; n];
    let mut prior = vec![0.0f64; n];
    let mut input = vec![0.0f64; n];
    for line in 0..n {
        let at = |i: usize| match axis {
            Axis::Rows => line * n + i,
            Axis::Columns => i * n + line,
        };
        for i in 0..n {
            channel[i] = state.l_ch[at(i)];
            prior[i] = state.l_a[at(i)];
            input[i] = channel[i] + prior[i];
        }
        let result = decoder.decode(&input);
        let soft = match config.siso {
            SisoKind::Proposed => soscl_soft_output(&result, &channel, &prior),
            SisoKind::Pyndiah => pyndiah_soft_output(&result, &channel, &prior, beta)?,
        };
        for i in 0..n {
            state.l_app[at(i)] = soft.app[i];
            state.l_e[at(i)] = soft.extrinsic[i];
        }
    }
    for (a, e) in state.l_a.iter_mut().zip(&state.l_e) {
        *a = alpha * e;
    }
    state.half_iterations += 1;
    Ok(())
}

/// Outcome of a block turbo decode.
#[derive(Debug, Clone)]
pub struct TurboOutcome {
    /// Final `N x N` hard decision (row-major).
    pub bits: Vec<u8>,
    pub status: TurboStatus,
    /// Half-iterations actually spent.
    pub half_iterations: usize,
}

/// Block turbo decoding: alternate row/column half-iterations until the APP
/// hard decision is a valid product codeword (success) or the iteration
/// budget is exhausted (failure, returning the last decision).
pub fn turbo_decode(l_ch: Vec<f64>, config: &TurboConfig) -> Result<TurboOutcome> {
    let n = config.spec.block_len();
    let mut state = ProductState::new(l_ch, n);
    let mut decoder = SclDecoder::new(Arc::clone(&config.spec), config.list_size);

    for _ in 0..config.max_iterations {
        for axis in [Axis::Rows, Axis::Columns] {
            half_iteration(&mut state, axis, config, &mut decoder)?;
            let decision = state.hard_decision();
            if is_product_codeword(&decision, &config.spec) {
                state.status = TurboStatus::Success;
                return Ok(TurboOutcome {
                    bits: decision,
                    status: TurboStatus::Success,
                    half_iterations: state.half_iterations,
                });
            }
        }
    }
    state.status = TurboStatus::Failure;
    Ok(TurboOutcome {
        bits: state.hard_decision(),
        status: TurboStatus::Failure,
        half_iterations: state.half_iterations,
    })
}
