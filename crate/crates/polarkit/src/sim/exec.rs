//! Deterministic chunked trial executor.
//!
//! Trials are split into fixed-size chunks; chunks are processed in rounds
//! (possibly in parallel) and folded in chunk order. Chunk boundaries, fold
//! order and the early-stop decision depend only on the budgets, never on
//! the worker count, so accumulated floating-point sums are bit-identical
//! for any parallelism.

use rayon::prelude::*;
use std::ops::Range;

/// Trials per chunk; one decoder instance is built per chunk.
pub const CHUNK_TRIALS: u64 = 1024;
/// Chunks per round; the stop condition is evaluated between rounds.
pub const ROUND_CHUNKS: u64 = 16;

/// Runs `process` over trial indexes `0..max_trials` and folds the per-chunk
/// accumulators in index order. After every round, `stop` inspects the
/// folded state; returning true ends the run early (overshoot is bounded by
/// one round).
pub fn run_rounds<A, F, S>(max_trials: u64, process: F, mut stop: S) -> A
where
    A: Default + Send,
    F: Fn(Range<u64>) -> A + Sync,
    S: FnMut(&A) -> bool,
{
    let mut acc = A::default();
    let mut next = 0u64;
    while next < max_trials {
        if stop(&acc) {
            break;
        }
        let round_end = next
            .saturating_add(CHUNK_TRIALS * ROUND_CHUNKS)
            .min(max_trials);
        let chunks: Vec<Range<u64>> = (next..round_end)
            .step_by(CHUNK_TRIALS as usize)
            .map(|lo| lo..lo.saturating_add(CHUNK_TRIALS).min(round_end))
            .collect();
        let results: Vec<A> = chunks.into_par_iter().map(&process).collect();
        for r in results {
            acc = fold(acc, r);
        }
        next = round_end;
    }
    acc
}

/// The executor folds with `Merge`; implement it for every accumulator.
pub trait Merge {
    fn merge(self, other: Self) -> Self;
}

fn fold<A: Merge>(a: A, b: A) -> A {
    a.merge(b)
}

impl Merge for crate::decision::MetricsAccumulator {
    fn merge(self, other: Self) -> Self {
        MetricsAccumulator::merge(self, &other)
    }
}

use crate::decision::MetricsAccumulator;

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Default)]
    struct Sum {
        total: u64,
        count: u64,
    }

    impl Merge for Sum {
        fn merge(mut self, other: Self) -> Self {
            self.total += other.total;
            self.count += other.count;
            self
        }
    }

    #[test]
    fn covers_every_trial_exactly_once() {
        let got = run_rounds(
            CHUNK_TRIALS * 3 + 17,
            |range| Sum {
                total: range.clone().sum(),
                count: range.count() as u64,
            },
            |_| false,
        );
        let n = CHUNK_TRIALS * 3 + 17;
        assert_eq!(got.count, n);
        assert_eq!(got.total, n * (n - 1) / 2);
    }

    #[test]
    fn early_stop_is_round_aligned() {
        let got = run_rounds(
            1_000_000,
            |range| Sum {
                total: 0,
                count: range.count() as u64,
            },
            |acc: &Sum| acc.count >= 1,
        );
        assert_eq!(got.count, CHUNK_TRIALS * ROUND_CHUNKS);
    }

    #[test]
    fn worker_count_does_not_change_the_fold() {
        let run = || {
            run_rounds(
                CHUNK_TRIALS * 40,
                |range| Sum {
                    total: range.clone().map(|t| t.wrapping_mul(0x9e3779b9)).sum(),
                    count: range.count() as u64,
                },
                |_| false,
            )
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(run);
        let quad = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(run);
        assert_eq!(single.total, quad.total);
        assert_eq!(single.count, quad.count);
    }
}
