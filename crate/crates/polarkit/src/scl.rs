//! LLR-domain successive cancellation list decoding with exact path metrics
//! and a running approximation of the codebook probability.
//!
//! A path metric is the negative log of the path's probability under the
//! auxiliary distribution that treats all transform inputs as uniform:
//! `pm = -ln Q(u^i | y)`. Exact softplus updates are used throughout (never
//! the min approximation), because the confidence metrics derived from the
//! metrics are actual probabilities.
//!
//! While decoding, every pruned branch root `a^i` deposits
//! `2^(-future_frozen) * Q(a^i | y)` into a [`SoftAccumulator`]; branches cut
//! off by a frozen constraint deposit nothing (they contain no valid leaf).
//! At the end, survivors plus the accumulator approximate the total
//! probability of all inputs satisfying every frozen constraint, and the
//! per-candidate confidence is the candidate's share of that total.

use crate::code::{polar_transform, CodeSpec};
use std::f64::consts::LN_2;
use std::sync::Arc;

/// Numerically stable `ln(1 + exp(x))`.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Stable `ln(exp(a) + exp(b))`, tolerating negative infinities.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Check-node combine (boxplus): `2 atanh(tanh(a/2) tanh(b/2))` in the
/// stable exact form.
#[inline]
pub fn check_combine(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    let s = if (a < 0.0) != (b < 0.0) { -m } else { m };
    s + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Bit-node combine: `b + (1 - 2s) a` for a decided partial sum `s`.
#[inline]
pub fn bit_combine(a: f64, b: f64, s: u8) -> f64 {
    if s & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// Path-metric update: `pm + ln(1 + exp(-(1 - 2u) lambda))`.
#[inline]
pub fn pm_update(pm: f64, lambda: f64, u: u8) -> f64 {
    if u & 1 == 0 {
        pm + softplus(-lambda)
    } else {
        pm + softplus(lambda)
    }
}

/// Log-domain accumulator for the probability mass of pruned valid
/// subtrees. Monotonically non-decreasing over a decode.
#[derive(Debug, Clone, Copy)]
pub struct SoftAccumulator {
    log_mass: f64,
}

impl SoftAccumulator {
    pub fn new() -> Self {
        Self {
            log_mass: f64::NEG_INFINITY,
        }
    }

    /// Adds a pruned branch root with path metric `pm` (nats) and
    /// `future_frozen` frozen positions remaining below it.
    #[inline]
    pub fn add_pruned(&mut self, pm: f64, future_frozen: u32) {
        self.log_mass = log_add_exp(self.log_mass, -pm - f64::from(future_frozen) * LN_2);
    }

    /// Log of the accumulated mass; negative infinity when nothing was
    /// pruned.
    pub fn log_mass(&self) -> f64 {
        self.log_mass
    }
}

impl Default for SoftAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

/// One surviving decoding path: the full transform input and its metric.
#[derive(Debug, Clone)]
pub struct Candidate {
    /// Decided input vector `u^N`.
    pub u: Vec<u8>,
    /// `-ln Q(u^N | y)` in nats.
    pub pm: f64,
}

impl Candidate {
    /// The codeword this path corresponds to.
    pub fn codeword(&self) -> Vec<u8> {
        let mut c = self.u.clone();
        polar_transform(&mut c);
        c
    }
}

/// Outcome of a list decode: surviving candidates sorted by ascending path
/// metric, plus the approximated log codebook probability.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    spec: Arc<CodeSpec>,
    candidates: Vec<Candidate>,
    log_unvisited: f64,
    log_q_star: f64,
}

impl DecodeResult {
    /// Candidates in ascending path-metric order; index 0 is the decoder
    /// output.
    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn best(&self) -> &Candidate {
        &self.candidates[0]
    }

    pub fn spec(&self) -> &Arc<CodeSpec> {
        &self.spec
    }

    /// Log of the approximated codebook probability: survivors plus the
    /// pruned-subtree mass.
    pub fn log_q_star(&self) -> f64 {
        self.log_q_star
    }

    /// Log of the pruned-subtree mass alone (the accumulator value).
    pub fn log_unvisited(&self) -> f64 {
        self.log_unvisited
    }

    /// Log of the total probability carried by the surviving candidates.
    pub fn log_list_mass(&self) -> f64 {
        let m = self
            .candidates
            .iter()
            .map(|c| -c.pm)
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = self.candidates.iter().map(|c| (-c.pm - m).exp()).sum();
        m + sum.ln()
    }

    /// Confidence that candidate `index` is the transmitted input: its
    /// probability relative to the approximated codebook probability.
    /// Always in `(0, 1]`.
    ///
    /// Panics if `index` is out of range.
    pub fn gamma_star(&self, index: usize) -> f64 {
        (-self.candidates[index].pm - self.log_q_star).exp()
    }

    /// Confidence that the transmitted input is somewhere in the list.
    pub fn gamma_list(&self) -> f64 {
        (self.log_list_mass() - self.log_q_star).exp()
    }

    /// The list-normalized baseline confidence: candidate probability over
    /// the list mass, ignoring pruned subtrees.
    ///
    /// Panics if `index` is out of range.
    pub fn gamma_forney_list(&self, index: usize) -> f64 {
        (-self.candidates[index].pm - self.log_list_mass()).exp()
    }
}

/// Per-path decoder workspace.
///
/// `levels[l]` holds the LLR vector of the active tree node with `2^l`
/// leaves below it; `left_beta[l]` holds the partial sums of the left child
/// at that size while the right sibling is being decoded.
#[derive(Debug, Clone)]
struct PathState {
    pm: f64,
    /// Lexicographic order of the decided prefix among live paths.
    rank: u32,
    u: Vec<u8>,
    levels: Vec<Vec<f64>>,
    left_beta: Vec<Vec<u8>>,
    beta_a: Vec<u8>,
    beta_b: Vec<u8>,
}

impl PathState {
    fn new(n_log2: usize, block_len: usize) -> Self {
        Self {
            pm: 0.0,
            rank: 0,
            u: vec![0; block_len],
            levels: (0..n_log2).map(|l| vec![0.0; 1 << l]).collect(),
            left_beta: (0..n_log2).map(|l| vec![0; 1 << l]).collect(),
            beta_a: vec![0; block_len],
            beta_b: vec![0; block_len],
        }
    }

    fn reset(&mut self) {
        self.pm = 0.0;
        self.rank = 0;
    }

    /// Refreshes the decision LLR for leaf `phi`, reusing still-valid upper
    /// levels.
    fn compute_llr(&mut self, phi: usize, channel: &[f64], n_log2: usize) {
        let top = if phi == 0 {
            n_log2 - 1
        } else {
            let t = phi.trailing_zeros() as usize;
            // Entering a right child at size 2^t: combine with the stored
            // left-sibling partial sums.
            let half = 1 << t;
            {
                let (lo, hi) = self.levels.split_at_mut(t + 1);
                let parent: &[f64] = if t + 1 == n_log2 { channel } else { &hi[0] };
                let dst = &mut lo[t];
                let beta = &self.left_beta[t];
                for j in 0..half {
                    dst[j] = bit_combine(parent[j], parent[j + half], beta[j]);
                }
            }
            if t == 0 {
                return;
            }
            t - 1
        };
        for l in (0..=top).rev() {
            let half = 1 << l;
            let (lo, hi) = self.levels.split_at_mut(l + 1);
            let parent: &[f64] = if l + 1 == n_log2 { channel } else { &hi[0] };
            let dst = &mut lo[l];
            for j in 0..half {
                dst[j] = check_combine(parent[j], parent[j + half]);
            }
        }
    }

    fn decision_llr(&self) -> f64 {
        self.levels[0][0]
    }

    /// Records the decided bit at leaf `phi` and propagates partial sums up
    /// every completed subtree.
    fn update_beta(&mut self, phi: usize, bit: u8, n_log2: usize) {
        self.u[phi] = bit;
        self.beta_a[0] = bit;
        let mut len = 1usize;
        let mut level = 0usize;
        let mut pos = phi;
        while pos & 1 == 1 && level < n_log2 {
            let left = &self.left_beta[level];
            for j in 0..len {
                self.beta_b[j] = left[j] ^ self.beta_a[j];
                self.beta_b[j + len] = self.beta_a[j];
            }
            std::mem::swap(&mut self.beta_a, &mut self.beta_b);
            len *= 2;
            level += 1;
            pos >>= 1;
        }
        if level < n_log2 {
            self.left_beta[level][..len].copy_from_slice(&self.beta_a[..len]);
        }
    }
}

#[derive(Clone, Copy)]
struct Fork {
    parent: usize,
    bit: u8,
    pm: f64,
    rank: u32,
}

/// A reusable list decoder for one code. Single-threaded; run one instance
/// per worker for concurrent trials.
pub struct SclDecoder {
    spec: Arc<CodeSpec>,
    list_size: usize,
    paths: Vec<PathState>,
    pool: Vec<PathState>,
    forks: Vec<Fork>,
    order: Vec<usize>,
}

impl SclDecoder {
    /// Creates a decoder with list size `list_size >= 1` (any value, not
    /// necessarily a power of two).
    pub fn new(spec: Arc<CodeSpec>, list_size: usize) -> Self {
        assert!(list_size >= 1, "list size must be at least 1");
        Self {
            spec,
            list_size,
            paths: Vec::new(),
            pool: Vec::new(),
            forks: Vec::with_capacity(2 * list_size),
            order: Vec::with_capacity(2 * list_size),
        }
    }

    pub fn spec(&self) -> &Arc<CodeSpec> {
        &self.spec
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    fn fresh_path(&mut self) -> PathState {
        let n = self.spec.n_log2() as usize;
        let block = self.spec.block_len();
        match self.pool.pop() {
            Some(mut p) => {
                p.reset();
                p
            }
            None => PathState::new(n, block),
        }
    }

    /// List-decodes one block of channel LLRs.
    ///
    /// At frozen positions every path extends with the forced bit; at
    /// information positions paths fork, the `list_size` best children
    /// survive, and each discarded child is deposited into the codebook
    /// accumulator weighted by `2^-(frozen positions still ahead)`. Ties at
    /// the survivor boundary keep the lexicographically smaller prefix.
    pub fn decode(&mut self, llrs: &[f64]) -> DecodeResult {
        let n = self.spec.block_len();
        assert_eq!(llrs.len(), n, "expected {n} channel LLRs");
        let n_log2 = self.spec.n_log2() as usize;
        let future_frozen = self.spec.future_frozen_counts().to_vec();

        for p in self.paths.drain(..) {
            self.pool.push(p);
        }
        let first = self.fresh_path();
        self.paths.push(first);
        let mut accumulator = SoftAccumulator::new();

        for phi in 0..n {
            for p in &mut self.paths {
                p.compute_llr(phi, llrs, n_log2);
            }
            if self.spec.is_frozen(phi) {
                for p in &mut self.paths {
                    let bit = self.spec.frozen_value(phi, &p.u[..phi]);
                    p.pm = pm_update(p.pm, p.decision_llr(), bit);
                    p.update_beta(phi, bit, n_log2);
                }
            } else {
                self.fork_paths(phi, n_log2, &future_frozen, &mut accumulator);
            }
        }

        self.paths.sort_by(|a, b| {
            a.pm.total_cmp(&b.pm).then_with(|| a.rank.cmp(&b.rank))
        });
        let candidates: Vec<Candidate> = self
            .paths
            .iter()
            .map(|p| Candidate {
                u: p.u.clone(),
                pm: p.pm,
            })
            .collect();

        let log_unvisited = accumulator.log_mass();
        let mut top = log_unvisited;
        for c in &candidates {
            top = top.max(-c.pm);
        }
        let mut sum = 0.0;
        if log_unvisited > f64::NEG_INFINITY {
            sum += (log_unvisited - top).exp();
        }
        for c in &candidates {
            sum += (-c.pm - top).exp();
        }
        let log_q_star = top + sum.ln();

        DecodeResult {
            spec: Arc::clone(&self.spec),
            candidates,
            log_unvisited,
            log_q_star,
        }
    }

    fn fork_paths(
        &mut self,
        phi: usize,
        n_log2: usize,
        future_frozen: &[u32],
        accumulator: &mut SoftAccumulator,
    ) {
        self.forks.clear();
        for (idx, p) in self.paths.iter().enumerate() {
            let lambda = p.decision_llr();
            for bit in 0u8..2 {
                self.forks.push(Fork {
                    parent: idx,
                    bit,
                    pm: pm_update(p.pm, lambda, bit),
                    rank: p.rank * 2 + u32::from(bit),
                });
            }
        }
        if self.forks.len() > self.list_size {
            self.forks.sort_unstable_by(|a, b| {
                a.pm.total_cmp(&b.pm).then_with(|| a.rank.cmp(&b.rank))
            });
            for lost in &self.forks[self.list_size..] {
                accumulator.add_pruned(lost.pm, future_frozen[phi + 1]);
            }
            self.forks.truncate(self.list_size);
        }

        // Materialize survivors: a parent reused by two children is cloned
        // once while still pristine; unused parents go back to the pool.
        let forks = std::mem::take(&mut self.forks);
        let mut parents: Vec<Option<PathState>> = self.paths.drain(..).map(Some).collect();
        let mut usage = vec![0u8; parents.len()];
        for fork in &forks {
            usage[fork.parent] += 1;
        }
        let mut clones: Vec<Option<PathState>> = Vec::with_capacity(parents.len());
        clones.resize_with(parents.len(), || None);
        for (idx, count) in usage.iter().enumerate() {
            if *count == 2 {
                let mut dup = self.fresh_path();
                dup.clone_from(parents[idx].as_ref().expect("parent present"));
                clones[idx] = Some(dup);
            }
        }
        let mut next: Vec<PathState> = Vec::with_capacity(forks.len());
        for fork in &forks {
            let mut child = parents[fork.parent]
                .take()
                .or_else(|| clones[fork.parent].take())
                .expect("at most two children per parent");
            child.pm = fork.pm;
            child.rank = fork.rank;
            child.update_beta(phi, fork.bit, n_log2);
            next.push(child);
        }
        self.forks = forks;
        for leftover in parents.into_iter().flatten() {
            self.pool.push(leftover);
        }

        // Renormalize ranks to 0..len, preserving lexicographic order.
        self.order.clear();
        self.order.extend(0..next.len());
        let ranks: Vec<u32> = next.iter().map(|p| p.rank).collect();
        self.order.sort_unstable_by_key(|&i| ranks[i]);
        for (new_rank, &i) in self.order.iter().enumerate() {
            next[i].rank = new_rank as u32;
        }
        self.paths = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::trial_rng;
    use crate::code::{random_dynamic_spec, CodeSpec, FrozenKind};
    use crate::oracles::{enumerate_codebook_prob, enumerate_prefix_prob};
    use rand::Rng;
    use std::collections::BTreeMap;

    fn tiny_spec() -> Arc<CodeSpec> {
        Arc::new(CodeSpec::new(2, [2, 4], BTreeMap::from([(1, vec![]), (3, vec![])])).unwrap())
    }

    fn random_llrs<R: Rng>(n: usize, r: &mut R) -> Vec<f64> {
        (0..n).map(|_| r.random_range(-4.0..4.0)).collect()
    }

    #[test]
    fn combine_rules() {
        // An erasure absorbs anything through a check node.
        assert_eq!(check_combine(0.0, 3.7), 0.0);
        assert_eq!(check_combine(-123.0, 0.0), 0.0);
        // Saturated input passes the other argument through, sign-adjusted.
        let big = 500.0;
        assert!((check_combine(big, 1.25) - 1.25).abs() < 1e-9);
        assert!((check_combine(-big, 1.25) + 1.25).abs() < 1e-9);
        // Exact boxplus against the tanh definition at moderate values.
        let direct = 2.0 * ((1.0f64 / 2.0).tanh() * (0.7f64 / 2.0).tanh()).atanh();
        assert!((check_combine(1.0, 0.7) - direct).abs() < 1e-12);
        assert!((bit_combine(3.0, 5.0, 1) - 2.0).abs() < 1e-12);
        assert!((bit_combine(3.0, 5.0, 0) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn pm_update_examples() {
        assert!((pm_update(0.0, 0.0, 0) - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((pm_update(0.0, 0.0, 1) - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((pm_update(0.0, 3.0, 0) - 0.04858735157374196).abs() < 1e-12);
        assert!((pm_update(0.0, 3.0, 1) - 3.048587351573742).abs() < 1e-12);
    }

    #[test]
    fn tiny_code_zero_llrs() {
        // At zero LLRs the single SC path decides all-zero and the
        // codebook probability telescopes to 2^-(N-K) = 1/4 exactly.
        let mut dec = SclDecoder::new(tiny_spec(), 1);
        let result = dec.decode(&[0.0; 4]);
        assert_eq!(result.candidates().len(), 1);
        assert_eq!(result.best().u, vec![0, 0, 0, 0]);
        assert!((result.best().pm - 4.0 * LN_2).abs() < 1e-12);
        assert!((result.log_q_star().exp() - 0.25).abs() < 1e-12);
        assert!((result.gamma_star(0) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn tiny_code_unvisited_roots() {
        // These LLRs steer SC to u = (0,1,0,0); the pruned roots are then
        // (0,0) with one frozen position ahead and the leaf (0,1,0,1).
        let llrs = [1.0, -2.0, -1.0, 2.0];
        let mut dec = SclDecoder::new(tiny_spec(), 1);
        let result = dec.decode(&llrs);
        assert_eq!(result.best().u, vec![0, 1, 0, 0]);

        let q_visited = enumerate_prefix_prob(&llrs, &[0, 1, 0, 0]).unwrap();
        let q_half = enumerate_prefix_prob(&llrs, &[0, 0]).unwrap();
        let q_leaf = enumerate_prefix_prob(&llrs, &[0, 1, 0, 1]).unwrap();
        let expected = log_add_exp(
            q_visited,
            log_add_exp(q_half - LN_2, q_leaf),
        );
        assert!(
            (result.log_q_star() - expected).abs() < 1e-10,
            "{} vs {}",
            result.log_q_star(),
            expected
        );
        // The leaf metric matches the prefix probability route as well.
        assert!((result.best().pm + q_visited).abs() < 1e-10);
    }

    #[test]
    fn rate_one_codebook_probability_is_one() {
        let spec = Arc::new(CodeSpec::reed_muller(4, 4, FrozenKind::Static).unwrap());
        let mut r = trial_rng(5, 0);
        for list_size in [1usize, 2, 3, 8] {
            let mut dec = SclDecoder::new(Arc::clone(&spec), list_size);
            let result = dec.decode(&random_llrs(16, &mut r));
            assert!(
                result.log_q_star().abs() < 1e-9,
                "L = {list_size}: log Q* = {}",
                result.log_q_star()
            );
        }
    }

    #[test]
    fn zero_llrs_give_exact_codebook_probability() {
        let mut r = trial_rng(6, 0);
        for n_log2 in [3u32, 4, 5] {
            let n = 1usize << n_log2;
            let k = r.random_range(1..n);
            let spec = Arc::new(random_dynamic_spec(n_log2, k, &mut r).unwrap());
            for list_size in [1usize, 2, 4] {
                let mut dec = SclDecoder::new(Arc::clone(&spec), list_size);
                let result = dec.decode(&vec![0.0; n]);
                let expected = -((n - k) as f64) * LN_2;
                assert!(
                    (result.log_q_star() - expected).abs() < 1e-9,
                    "N = {n}, K = {k}, L = {list_size}"
                );
            }
        }
    }

    #[test]
    fn leaf_metric_identity() {
        let mut r = trial_rng(7, 0);
        for _ in 0..25 {
            let n_log2 = r.random_range(1..=7u32);
            let n = 1usize << n_log2;
            let k = r.random_range(1..=n);
            let spec = Arc::new(random_dynamic_spec(n_log2, k, &mut r).unwrap());
            let llrs = random_llrs(n, &mut r);
            let mut dec = SclDecoder::new(Arc::clone(&spec), 4);
            let result = dec.decode(&llrs);
            for cand in result.candidates() {
                let c = cand.codeword();
                let direct: f64 = c
                    .iter()
                    .zip(&llrs)
                    .map(|(&b, &l)| softplus(if b & 1 == 0 { -l } else { l }))
                    .sum();
                assert!(
                    (cand.pm - direct).abs() <= 1e-9 * direct.max(1.0),
                    "pm {} vs channel-domain {}",
                    cand.pm,
                    direct
                );
            }
        }
    }

    #[test]
    fn exhaustive_list_matches_enumeration() {
        let mut r = trial_rng(8, 0);
        for _ in 0..10 {
            let k = r.random_range(1..=8usize);
            let spec = Arc::new(random_dynamic_spec(4, k, &mut r).unwrap());
            let llrs = random_llrs(16, &mut r);
            let mut dec = SclDecoder::new(Arc::clone(&spec), 1 << k);
            let result = dec.decode(&llrs);
            assert_eq!(result.candidates().len(), 1 << k);
            let exact = enumerate_codebook_prob(&llrs, &spec).unwrap();
            assert!(
                (result.log_q_star() - exact).abs() < 1e-9,
                "log Q* {} vs enumeration {}",
                result.log_q_star(),
                exact
            );
            // With the whole codebook listed, the unvisited mass is empty
            // and gamma_list is exactly 1.
            assert_eq!(result.log_unvisited(), f64::NEG_INFINITY);
            assert!((result.gamma_list() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn candidates_satisfy_frozen_rules_and_ordering() {
        let mut r = trial_rng(9, 0);
        let spec = Arc::new(CodeSpec::reed_muller(5, 3, FrozenKind::Convolutional).unwrap());
        let mut dec = SclDecoder::new(Arc::clone(&spec), 8);
        for _ in 0..20 {
            let result = dec.decode(&random_llrs(32, &mut r));
            let pms: Vec<f64> = result.candidates().iter().map(|c| c.pm).collect();
            assert!(pms.windows(2).all(|w| w[0] <= w[1]), "not sorted: {pms:?}");
            for cand in result.candidates() {
                for i in 0..32 {
                    if spec.is_frozen(i) {
                        assert_eq!(cand.u[i], spec.frozen_value(i, &cand.u[..i]));
                    }
                }
                assert!(spec.is_codeword(&cand.codeword()));
            }
            // No duplicate candidates.
            for a in 0..result.candidates().len() {
                for b in a + 1..result.candidates().len() {
                    assert_ne!(result.candidates()[a].u, result.candidates()[b].u);
                }
            }
        }
    }

    #[test]
    fn gamma_metrics_are_coherent() {
        let mut r = trial_rng(10, 0);
        let spec = Arc::new(CodeSpec::reed_muller(6, 3, FrozenKind::Convolutional).unwrap());
        let mut dec = SclDecoder::new(Arc::clone(&spec), 4);
        for _ in 0..50 {
            let result = dec.decode(&random_llrs(64, &mut r));
            let g0 = result.gamma_star(0);
            assert!(g0 > 0.0 && g0 <= 1.0, "gamma* = {g0}");
            assert!(result.gamma_list() <= 1.0 + 1e-12);
            assert!(result.gamma_list() + 1e-12 >= g0);
            assert!(result.gamma_forney_list(0) + 1e-12 >= g0);
            // Unvisited mass is non-negative: Q* is at least the list mass.
            assert!(result.log_q_star() + 1e-12 >= result.log_list_mass());
        }
    }

    #[test]
    fn degenerate_rate_zero_is_fully_confident() {
        let spec = Arc::new(
            CodeSpec::new(
                2,
                [],
                BTreeMap::from([(1, vec![]), (2, vec![]), (3, vec![1]), (4, vec![2, 3])]),
            )
            .unwrap(),
        );
        let mut dec = SclDecoder::new(spec, 4);
        let result = dec.decode(&[0.3, -1.0, 0.4, 2.0]);
        assert_eq!(result.candidates().len(), 1);
        assert!((result.gamma_star(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pruning_tie_break_is_lexicographic() {
        // All-zero LLRs make every fork a tie; the survivors must be the
        // lexicographically smallest prefixes.
        let spec = Arc::new(CodeSpec::reed_muller(3, 3, FrozenKind::Static).unwrap());
        let mut dec = SclDecoder::new(spec, 4);
        let result = dec.decode(&[0.0; 8]);
        // Ties are also resolved lexicographically in the final ordering.
        let first: Vec<u8> = result.best().u.clone();
        assert_eq!(first, vec![0; 8]);
        for cand in result.candidates() {
            // Survivors of an all-tie decode are the 4 smallest prefixes,
            // i.e. u with the first 6 bits zero.
            assert_eq!(&cand.u[..6], &[0, 0, 0, 0, 0, 0]);
        }
    }
}
