//! Monte Carlo experiment driver behind the CLI.
//!
//! Experiments are described by a flat JSON document ([`RawConfig`]); every
//! CLI flag mirrors a JSON key and the CLI wins field-by-field. Trials are
//! processed in fixed-size chunks folded in a fixed order, and every trial
//! owns an RNG stream keyed by `(seed, trial index)`, so output files are
//! byte-identical no matter how many workers run.

mod config;
mod exec;
mod runner;

pub use config::{
    CalTarget, CodeDescriptor, DecisionRuleCfg, ExperimentConfig, RawConfig, Sweep,
};
pub use exec::{run_rounds, Merge};
pub use runner::{
    run_bler_experiment, run_calibration, run_estimate, run_softout_compare, run_turbo,
    write_bler_csv, write_calibration_csv, write_estimate_csv, write_softout_csv,
    write_turbo_csv, BlerPoint, CalAccs, CalPoint, SoftoutAcc, SoftoutPoint, TurboAcc,
    TurboPoint, SOFTOUT_DECODERS,
};
