//! Experiment loops and CSV emission.

use super::config::{CalTarget, DecisionRuleCfg, ExperimentConfig};
use super::exec::{run_rounds, Merge};
use crate::channel::{modulate, trial_rng, ChannelParams};
use crate::code::CodeSpec;
use crate::decision::{
    classify_outcome, crc_select, forney_threshold, wilson_interval, DecisionOutcome,
    MetricsAccumulator, TrialRecord,
};
use crate::estimate::{estimate_gain, GainEstimate, GainGrid};
use crate::oracles::bcjr_app;
use crate::scl::{DecodeResult, SclDecoder};
use crate::soft::{app_hard_decision, pyndiah_soft_output, soscl_soft_output};
use crate::turbo::{turbo_decode, product_encode, TurboConfig};
use crate::{Error, Result};
use rand::Rng;
use std::io::Write;
use std::sync::Arc;

/// Decorrelates the per-trial streams of different sweep points.
fn point_seed(master: u64, point: usize) -> u64 {
    master ^ (point as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn random_message<R: Rng>(len: usize, rng: &mut R) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

fn info_payload_matches(spec: &CodeSpec, u: &[u8], payload: &[u8]) -> bool {
    spec.info_set()
        .iter()
        .zip(payload)
        .all(|(&pos, &bit)| u[pos - 1] == bit)
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))
}

/// One finished sweep point of a `simulate` run.
#[derive(Debug, Clone)]
pub struct BlerPoint {
    pub ebn0_db: f64,
    pub acc: MetricsAccumulator,
}

/// Monte Carlo block-error experiment: draw a message, encode, transmit,
/// list-decode, apply the accept/reject rule, classify. Stops per point at
/// the trial budget or (round-aligned) at `target_errors`.
pub fn run_bler_experiment(
    cfg: &ExperimentConfig,
    rule: &DecisionRuleCfg,
) -> Result<Vec<BlerPoint>> {
    let pool = build_pool(cfg.workers)?;
    let n = cfg.spec.block_len();
    let rate = cfg.message_len as f64 / n as f64;
    let mut points = Vec::with_capacity(cfg.sweep.len());
    for (pt, &ebn0_db) in cfg.sweep.iter().enumerate() {
        let params = ChannelParams::new(ebn0_db, rate)?;
        let seed = point_seed(cfg.seed, pt);
        let spec = Arc::clone(&cfg.spec);
        let list_size = cfg.list_size;
        let message_len = cfg.message_len;
        let target = cfg.target_errors;

        let acc = pool.install(|| {
            run_rounds(
                cfg.max_trials,
                |range| {
                    let mut decoder = SclDecoder::new(Arc::clone(&spec), list_size);
                    let mut acc = MetricsAccumulator::new();
                    for t in range {
                        let mut rng = trial_rng(seed, t);
                        let msg = random_message(message_len, &mut rng);
                        let payload = match rule {
                            DecisionRuleCfg::Crc { poly, .. } => {
                                let mut p = msg.clone();
                                p.extend(poly.compute(&msg));
                                p
                            }
                            _ => msg.clone(),
                        };
                        let codeword = spec.encode(&payload);
                        let y = params.transmit(&modulate(&codeword), &mut rng);
                        let llrs = params.llr_from_observation(&y);
                        let result = decoder.decode(&llrs);
                        let record = apply_rule(&spec, rule, &result, &msg, &payload);
                        acc.record(&record).expect("predictions lie in [0, 1]");
                    }
                    acc
                },
                |acc: &MetricsAccumulator| target.is_some_and(|t| acc.errors >= t),
            )
        });
        points.push(BlerPoint { ebn0_db, acc });
    }
    Ok(points)
}

fn apply_rule(
    spec: &CodeSpec,
    rule: &DecisionRuleCfg,
    result: &DecodeResult,
    msg: &[u8],
    payload: &[u8],
) -> TrialRecord {
    let in_list = result
        .candidates()
        .iter()
        .any(|cand| info_payload_matches(spec, &cand.u, payload));
    let (accepted, chosen, predicted_error) = match rule {
        DecisionRuleCfg::Threshold { epsilon } => {
            let gamma = result.gamma_star(0);
            (gamma > 1.0 - epsilon, 0, Some(1.0 - gamma))
        }
        DecisionRuleCfg::Forney { t } => {
            let accepted = forney_threshold(
                -result.candidates()[0].pm,
                result.log_list_mass(),
                *t,
                spec.block_len(),
            )
            .expect("validated T");
            (accepted, 0, None)
        }
        DecisionRuleCfg::Crc { poly, message_len } => {
            match crc_select(result, *message_len, poly) {
                Some(index) => (true, index, None),
                None => (false, 0, None),
            }
        }
    };
    let decided: Vec<u8> = spec.info_bits(&result.candidates()[chosen].u)[..msg.len()].to_vec();
    TrialRecord {
        outcome: classify_outcome(accepted, &decided, msg),
        predicted_error,
        bin_on_block_error: true,
        transmitted_in_list: in_list,
    }
}

pub fn write_bler_csv<W: Write>(
    cfg: &ExperimentConfig,
    rule_name: &str,
    points: &[BlerPoint],
    out: &mut W,
) -> Result<()> {
    writeln!(
        out,
        "# polarkit simulate code={} L={} rule={} seed={}; trials per point vary when \
         target_errors stops a point early (sequential-stopping caveat applies to the ratios)",
        cfg.descriptor, cfg.list_size, rule_name, cfg.seed
    )?;
    writeln!(
        out,
        "ebn0_db,trials,errors,undetected,list_misses,bler,uer,mdr,ler,\
         bler_lo,bler_hi,uer_lo,uer_hi,ler_lo,ler_hi"
    )?;
    for p in points {
        let r = p.acc.rates().map_err(|_| Error::Config("empty sweep point".into()))?;
        let (bl, bh) = wilson_interval(p.acc.errors, p.acc.trials, 1.96);
        let (ul, uh) = wilson_interval(p.acc.undetected, p.acc.trials, 1.96);
        let (ll, lh) = wilson_interval(p.acc.list_misses, p.acc.trials, 1.96);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            p.ebn0_db,
            p.acc.trials,
            p.acc.errors,
            p.acc.undetected,
            p.acc.list_misses,
            r.bler,
            r.uer,
            r.mdr,
            r.ler,
            bl,
            bh,
            ul,
            uh,
            ll,
            lh
        )?;
    }
    Ok(())
}

/// Paired proposed/baseline accumulators for calibration runs.
#[derive(Debug, Clone, Default)]
pub struct CalAccs {
    pub proposed: MetricsAccumulator,
    pub baseline: MetricsAccumulator,
}

impl Merge for CalAccs {
    fn merge(self, other: Self) -> Self {
        CalAccs {
            proposed: self.proposed.merge(&other.proposed),
            baseline: self.baseline.merge(&other.baseline),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CalPoint {
    pub ebn0_db: f64,
    pub accs: CalAccs,
    pub target: CalTarget,
}

/// Calibration run: per trial, record the predicted error probability and
/// whether the prediction came true, binned per decade-half.
///
/// For the block target the proposed metric is `1 - gamma*` under list size
/// `L`, and the baseline is the list-normalized `1 - gamma'` under
/// `forney_list`; for the list target only the proposed `1 - gamma_list` is
/// meaningful (the baseline's list-mass normalization is identically 1).
pub fn run_calibration(
    cfg: &ExperimentConfig,
    forney_list: usize,
    target: CalTarget,
) -> Result<Vec<CalPoint>> {
    let pool = build_pool(cfg.workers)?;
    let rate = cfg.spec.rate();
    let mut points = Vec::with_capacity(cfg.sweep.len());
    for (pt, &ebn0_db) in cfg.sweep.iter().enumerate() {
        let params = ChannelParams::new(ebn0_db, rate)?;
        let seed = point_seed(cfg.seed, pt);
        let spec = Arc::clone(&cfg.spec);
        let list_size = cfg.list_size;
        let k = spec.dimension();

        let accs = pool.install(|| {
            run_rounds(
                cfg.max_trials,
                |range| {
                    let mut main = SclDecoder::new(Arc::clone(&spec), list_size);
                    let mut wide = SclDecoder::new(Arc::clone(&spec), forney_list);
                    let mut accs = CalAccs::default();
                    for t in range {
                        let mut rng = trial_rng(seed, t);
                        let msg = random_message(k, &mut rng);
                        let codeword = spec.encode(&msg);
                        let y = params.transmit(&modulate(&codeword), &mut rng);
                        let llrs = params.llr_from_observation(&y);

                        let result = main.decode(&llrs);
                        let in_list = result
                            .candidates()
                            .iter()
                            .any(|c| info_payload_matches(&spec, &c.u, &msg));
                        let best_ok = info_payload_matches(&spec, &result.candidates()[0].u, &msg);
                        let predicted = match target {
                            CalTarget::Block => 1.0 - result.gamma_star(0),
                            CalTarget::List => 1.0 - result.gamma_list(),
                        };
                        accs.proposed
                            .record(&TrialRecord {
                                outcome: if best_ok {
                                    DecisionOutcome::AcceptedCorrect
                                } else {
                                    DecisionOutcome::UndetectedError
                                },
                                predicted_error: Some(predicted.clamp(0.0, 1.0)),
                                bin_on_block_error: matches!(target, CalTarget::Block),
                                transmitted_in_list: in_list,
                            })
                            .expect("prediction in range");

                        if matches!(target, CalTarget::Block) {
                            let wide_result = wide.decode(&llrs);
                            let wide_ok = info_payload_matches(
                                &spec,
                                &wide_result.candidates()[0].u,
                                &msg,
                            );
                            let wide_in_list = wide_result
                                .candidates()
                                .iter()
                                .any(|c| info_payload_matches(&spec, &c.u, &msg));
                            let predicted = 1.0 - wide_result.gamma_forney_list(0);
                            accs.baseline
                                .record(&TrialRecord {
                                    outcome: if wide_ok {
                                        DecisionOutcome::AcceptedCorrect
                                    } else {
                                        DecisionOutcome::UndetectedError
                                    },
                                    predicted_error: Some(predicted.clamp(0.0, 1.0)),
                                    bin_on_block_error: true,
                                    transmitted_in_list: wide_in_list,
                                })
                                .expect("prediction in range");
                        }
                    }
                    accs
                },
                |accs: &CalAccs| {
                    cfg.target_errors
                        .is_some_and(|t| accs.proposed.errors >= t)
                },
            )
        });
        points.push(CalPoint {
            ebn0_db,
            accs,
            target,
        });
    }
    Ok(points)
}

pub fn write_calibration_csv<W: Write>(
    cfg: &ExperimentConfig,
    forney_list: usize,
    points: &[CalPoint],
    out: &mut W,
) -> Result<()> {
    writeln!(
        out,
        "# polarkit calibrate code={} L={} L_prime={} seed={}; bin k covers \
         (10^-(k+1)/2, 10^-k/2]; measured = bin errors / bin count",
        cfg.descriptor, cfg.list_size, forney_list, cfg.seed
    )?;
    writeln!(out, "ebn0_db,metric,bin,count,errors,predicted,measured")?;
    for p in points {
        let metrics: &[(&str, &MetricsAccumulator)] = match p.target {
            CalTarget::Block => &[("proposed", &p.accs.proposed), ("forney", &p.accs.baseline)],
            CalTarget::List => &[("proposed", &p.accs.proposed)],
        };
        for (name, acc) in metrics {
            for (bin, cell) in acc.bins.iter().enumerate() {
                if cell.count == 0 {
                    continue;
                }
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    p.ebn0_db,
                    name,
                    bin,
                    cell.count,
                    cell.errors,
                    cell.predicted_sum / cell.count as f64,
                    cell.errors as f64 / cell.count as f64
                )?;
            }
        }
    }
    Ok(())
}

/// The decoder lineup compared by `softout`, in output order.
pub const SOFTOUT_DECODERS: [&str; 5] =
    ["bcjr", "soscl_l1", "soscl_l2", "pyndiah_l1", "pyndiah_l2"];

#[derive(Debug, Clone, Copy, Default)]
pub struct SoftoutAcc {
    pub blocks: u64,
    pub bits: u64,
    pub bit_errors: [u64; SOFTOUT_DECODERS.len()],
}

impl Merge for SoftoutAcc {
    fn merge(mut self, other: Self) -> Self {
        self.blocks += other.blocks;
        self.bits += other.bits;
        for (a, b) in self.bit_errors.iter_mut().zip(other.bit_errors) {
            *a += b;
        }
        self
    }
}

#[derive(Debug, Clone)]
pub struct SoftoutPoint {
    pub ebn0_db: f64,
    pub acc: SoftoutAcc,
}

/// Coded-bit BER comparison of the exact trellis APP against the blended
/// and max-log list extractors at list sizes 1 and 2, all on the same
/// noise realizations.
pub fn run_softout_compare(cfg: &ExperimentConfig, beta: f64) -> Result<Vec<SoftoutPoint>> {
    let parity = Arc::new(cfg.spec.parity_checks());
    // Pre-flight the trellis guard so chunk workers can rely on it.
    let zeros = vec![0.0; cfg.spec.block_len()];
    bcjr_app(&zeros, &zeros, &parity)?;
    if !(beta > 0.0) {
        return Err(Error::Config(format!("beta {beta} must be positive")));
    }

    let pool = build_pool(cfg.workers)?;
    let rate = cfg.spec.rate();
    let mut points = Vec::with_capacity(cfg.sweep.len());
    for (pt, &ebn0_db) in cfg.sweep.iter().enumerate() {
        let params = ChannelParams::new(ebn0_db, rate)?;
        let seed = point_seed(cfg.seed, pt);
        let spec = Arc::clone(&cfg.spec);
        let parity = Arc::clone(&parity);
        let n = spec.block_len();
        let k = spec.dimension();

        let acc = pool.install(|| {
            run_rounds(
                cfg.max_trials,
                |range| {
                    let mut dec1 = SclDecoder::new(Arc::clone(&spec), 1);
                    let mut dec2 = SclDecoder::new(Arc::clone(&spec), 2);
                    let priors = vec![0.0; n];
                    let mut acc = SoftoutAcc::default();
                    for t in range {
                        let mut rng = trial_rng(seed, t);
                        let msg = random_message(k, &mut rng);
                        let codeword = spec.encode(&msg);
                        let y = params.transmit(&modulate(&codeword), &mut rng);
                        let llrs = params.llr_from_observation(&y);

                        let count = |acc: &mut SoftoutAcc, which: usize, app: &[f64]| {
                            let hard = app_hard_decision(app);
                            acc.bit_errors[which] += hard
                                .iter()
                                .zip(&codeword)
                                .filter(|(a, b)| a != b)
                                .count() as u64;
                        };

                        let exact = bcjr_app(&llrs, &priors, &parity).expect("guard prechecked");
                        count(&mut acc, 0, &exact);
                        let r1 = dec1.decode(&llrs);
                        count(&mut acc, 1, &soscl_soft_output(&r1, &llrs, &priors).app);
                        count(
                            &mut acc,
                            3,
                            &pyndiah_soft_output(&r1, &llrs, &priors, beta)
                                .expect("beta prechecked")
                                .app,
                        );
                        let r2 = dec2.decode(&llrs);
                        count(&mut acc, 2, &soscl_soft_output(&r2, &llrs, &priors).app);
                        count(
                            &mut acc,
                            4,
                            &pyndiah_soft_output(&r2, &llrs, &priors, beta)
                                .expect("beta prechecked")
                                .app,
                        );

                        acc.blocks += 1;
                        acc.bits += n as u64;
                    }
                    acc
                },
                |_| false,
            )
        });
        points.push(SoftoutPoint { ebn0_db, acc });
    }
    Ok(points)
}

pub fn write_softout_csv<W: Write>(
    cfg: &ExperimentConfig,
    beta: f64,
    points: &[SoftoutPoint],
    out: &mut W,
) -> Result<()> {
    writeln!(
        out,
        "# polarkit softout code={} beta={} seed={}; BER over all coded bits",
        cfg.descriptor, beta, cfg.seed
    )?;
    writeln!(out, "ebn0_db,decoder,blocks,bits,bit_errors,ber")?;
    for p in points {
        for (which, name) in SOFTOUT_DECODERS.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                p.ebn0_db,
                name,
                p.acc.blocks,
                p.acc.bits,
                p.acc.bit_errors[which],
                p.acc.bit_errors[which] as f64 / p.acc.bits as f64
            )?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TurboAcc {
    pub blocks: u64,
    pub errors: u64,
    pub half_iterations: u64,
}

impl Merge for TurboAcc {
    fn merge(mut self, other: Self) -> Self {
        self.blocks += other.blocks;
        self.errors += other.errors;
        self.half_iterations += other.half_iterations;
        self
    }
}

#[derive(Debug, Clone)]
pub struct TurboPoint {
    pub ebn0_db: f64,
    pub acc: TurboAcc,
}

/// Product-code Monte Carlo: a block error is any output differing from the
/// transmitted product codeword, including declared failures.
pub fn run_turbo(cfg: &ExperimentConfig, turbo: &TurboConfig) -> Result<Vec<TurboPoint>> {
    let pool = build_pool(cfg.workers)?;
    let k = cfg.spec.dimension();
    let n = cfg.spec.block_len();
    let rate = (k * k) as f64 / (n * n) as f64;
    let mut points = Vec::with_capacity(cfg.sweep.len());
    for (pt, &ebn0_db) in cfg.sweep.iter().enumerate() {
        let params = ChannelParams::new(ebn0_db, rate)?;
        let seed = point_seed(cfg.seed, pt);
        let spec = Arc::clone(&cfg.spec);

        let acc = pool.install(|| {
            run_rounds(
                cfg.max_trials,
                |range| {
                    let mut acc = TurboAcc::default();
                    for t in range {
                        let mut rng = trial_rng(seed, t);
                        let msg = random_message(k * k, &mut rng);
                        let codeword = product_encode(&msg, &spec);
                        let y = params.transmit(&modulate(&codeword), &mut rng);
                        let l_ch = params.llr_from_observation(&y).into_inner();
                        let out = turbo_decode(l_ch, turbo).expect("validated turbo config");
                        acc.blocks += 1;
                        acc.half_iterations += out.half_iterations as u64;
                        if out.bits != codeword {
                            acc.errors += 1;
                        }
                    }
                    acc
                },
                |acc: &TurboAcc| cfg.target_errors.is_some_and(|t| acc.errors >= t),
            )
        });
        points.push(TurboPoint { ebn0_db, acc });
    }
    Ok(points)
}

pub fn write_turbo_csv<W: Write>(
    cfg: &ExperimentConfig,
    turbo: &TurboConfig,
    points: &[TurboPoint],
    out: &mut W,
) -> Result<()> {
    writeln!(
        out,
        "# polarkit turbo component={} siso={:?} L={} imax={} seed={}; avg_iterations \
         in full-iteration units (two half-iterations each)",
        cfg.descriptor, turbo.siso, turbo.list_size, turbo.max_iterations, cfg.seed
    )?;
    writeln!(out, "ebn0_db,blocks,errors,bler,bler_lo,bler_hi,avg_iterations")?;
    for p in points {
        let bler = p.acc.errors as f64 / p.acc.blocks as f64;
        let (lo, hi) = wilson_interval(p.acc.errors, p.acc.blocks, 1.96);
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.ebn0_db,
            p.acc.blocks,
            p.acc.errors,
            bler,
            lo,
            hi,
            p.acc.half_iterations as f64 / p.acc.blocks as f64 / 2.0
        )?;
    }
    Ok(())
}

/// Single-shot gain-estimation profile: transmit one random block at the
/// configured Eb/N0 through gain `true_gain` and sweep the grid.
pub fn run_estimate(
    cfg: &ExperimentConfig,
    true_gain: f64,
    grid: GainGrid,
) -> Result<GainEstimate> {
    let params = ChannelParams::new(
        cfg.sweep
            .first()
            .copied()
            .ok_or_else(|| Error::Config("estimate needs one Eb/N0 value".into()))?,
        cfg.spec.rate(),
    )?
    .with_gain(true_gain);
    let mut rng = trial_rng(cfg.seed, 0);
    let msg = random_message(cfg.spec.dimension(), &mut rng);
    let y = params.transmit(&modulate(&cfg.spec.encode(&msg)), &mut rng);
    estimate_gain(&y, &cfg.spec, params.sigma(), grid, cfg.list_size)
}

pub fn write_estimate_csv<W: Write>(
    cfg: &ExperimentConfig,
    estimate: &GainEstimate,
    out: &mut W,
) -> Result<()> {
    writeln!(
        out,
        "# polarkit estimate code={} L={} seed={}; argmax h_hat={}",
        cfg.descriptor, cfg.list_size, cfg.seed, estimate.h_hat
    )?;
    writeln!(out, "h,log_q_star,is_argmax")?;
    for &(h, q) in &estimate.profile {
        writeln!(out, "{},{},{}", h, q, u8::from(h == estimate.h_hat))?;
    }
    Ok(())
}
