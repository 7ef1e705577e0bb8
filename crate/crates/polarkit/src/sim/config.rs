//! Experiment configuration: the flat JSON document and its validated form.

use crate::code::{CodeSpec, CrcPoly, FrozenKind};
use crate::turbo::SisoKind;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

/// Code family and size: `rm:m,r` or `nr5g:N,K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeDescriptor {
    Rm { m: u32, r: u32 },
    Nr5g { n: usize, k: usize },
}

impl CodeDescriptor {
    pub fn build(&self, kind: FrozenKind) -> Result<Arc<CodeSpec>> {
        let spec = match *self {
            CodeDescriptor::Rm { m, r } => CodeSpec::reed_muller(m, r, kind)?,
            CodeDescriptor::Nr5g { n, k } => CodeSpec::nr5g(n, k, kind)?,
        };
        Ok(Arc::new(spec))
    }
}

impl FromStr for CodeDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad code descriptor {s:?}, want rm:m,r or nr5g:N,K"));
        let (family, nums) = s.split_once(':').ok_or_else(bad)?;
        let (a, b) = nums.split_once(',').ok_or_else(bad)?;
        match family {
            "rm" => Ok(CodeDescriptor::Rm {
                m: a.trim().parse().map_err(|_| bad())?,
                r: b.trim().parse().map_err(|_| bad())?,
            }),
            "nr5g" => Ok(CodeDescriptor::Nr5g {
                n: a.trim().parse().map_err(|_| bad())?,
                k: b.trim().parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

/// An Eb/N0 point or an inclusive `start:step:stop` sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep(pub Vec<f64>);

impl FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |p: &str| -> Result<f64> {
            p.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad Eb/N0 value {p:?}")))
        };
        match parts.as_slice() {
            [one] => Ok(Sweep(vec![parse(one)?])),
            [start, step, stop] => {
                let (start, step, stop) = (parse(start)?, parse(step)?, parse(stop)?);
                if step <= 0.0 || stop < start {
                    return Err(Error::Config(format!("bad sweep {s:?}")));
                }
                let count = ((stop - start) / step + 1.5).floor() as usize;
                Ok(Sweep((0..count).map(|i| start + i as f64 * step).collect()))
            }
            _ => Err(Error::Config(format!(
                "bad Eb/N0 spec {s:?}, want a value or start:step:stop"
            ))),
        }
    }
}

/// What a calibration run scores its predictions against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalTarget {
    /// `1 - gamma*` of the best candidate against block errors.
    Block,
    /// `1 - gamma_list` against list misses.
    List,
}

/// Accept/reject rule for `simulate`.
#[derive(Debug, Clone)]
pub enum DecisionRuleCfg {
    /// Accept iff `gamma* > 1 - epsilon`.
    Threshold { epsilon: f64 },
    /// Accept iff the best candidate holds at least the threshold share of
    /// the list mass.
    Forney { t: f64 },
    /// Accept the best candidate whose payload passes the CRC.
    Crc { poly: CrcPoly, message_len: usize },
}

/// The flat configuration document. Every field is optional here; the
/// validated form is built per subcommand. A JSON file provides defaults,
/// CLI flags override field-by-field.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RawConfig {
    /// `rm:m,r` or `nr5g:N,K`.
    pub code: Option<String>,
    pub frozen: Option<FrozenKind>,
    pub list_size: Option<usize>,
    /// Threshold rule parameter.
    pub epsilon: Option<f64>,
    /// CRC rule: hex Koopman word (e.g. `0x30`).
    pub crc: Option<String>,
    /// CRC rule: message bits before the CRC; defaults to `K - degree`.
    pub message_len: Option<usize>,
    /// Likelihood-ratio rule parameter `T`.
    pub forney_t: Option<f64>,
    /// Companion list size `L'` for the calibration baseline.
    pub forney_list: Option<usize>,
    pub target: Option<CalTarget>,
    /// Single value or `start:step:stop`.
    pub ebn0_db: Option<String>,
    /// Trial budget per Eb/N0 point.
    pub trials: Option<u64>,
    /// Early stop once this many block errors accumulate (checked at round
    /// granularity so results stay worker-count independent).
    pub target_errors: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    /// Saturation constant for the max-log soft output.
    pub beta: Option<f64>,
    pub siso: Option<SisoKind>,
    /// Turbo extrinsic scale; a single value is a constant schedule.
    pub alpha: Option<Vec<f64>>,
    pub imax: Option<usize>,
    /// Gain-estimation grid and the true gain applied by the channel.
    pub h_min: Option<f64>,
    pub h_max: Option<f64>,
    pub h_steps: Option<usize>,
    pub gain: Option<f64>,
}

impl RawConfig {
    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Field-by-field override: any field set in `cli` replaces the file
    /// value.
    pub fn merged_with(mut self, cli: RawConfig) -> RawConfig {
        macro_rules! take {
            ($($field:ident),* $(,)?) => {
                $(if cli.$field.is_some() { self.$field = cli.$field; })*
            };
        }
        take!(
            code, frozen, list_size, epsilon, crc, message_len, forney_t, forney_list,
            target, ebn0_db, trials, target_errors, seed, workers, out, beta, siso,
            alpha, imax, h_min, h_max, h_steps, gain
        );
        self
    }
}

/// A validated experiment: everything the runners need, with defaults
/// applied.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub spec: Arc<CodeSpec>,
    pub frozen: FrozenKind,
    pub list_size: usize,
    pub sweep: Vec<f64>,
    pub max_trials: u64,
    pub target_errors: Option<u64>,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    /// Message bits per block (differs from K only for the CRC rule).
    pub message_len: usize,
    pub descriptor: String,
}

impl ExperimentConfig {
    /// Common validation: code, sweep, budgets.
    pub fn common(raw: &RawConfig, default_kind: FrozenKind) -> Result<Self> {
        let code: CodeDescriptor = raw
            .code
            .as_deref()
            .ok_or_else(|| Error::Config("missing code descriptor (--code)".into()))?
            .parse()?;
        let frozen = raw.frozen.unwrap_or(default_kind);
        let spec = code.build(frozen)?;
        let sweep: Sweep = raw
            .ebn0_db
            .as_deref()
            .ok_or_else(|| Error::Config("missing Eb/N0 (--ebn0-db)".into()))?
            .parse()?;
        let max_trials = raw.trials.unwrap_or(100_000);
        if max_trials == 0 {
            return Err(Error::Config("trial budget must be >= 1".into()));
        }
        Ok(ExperimentConfig {
            message_len: spec.dimension(),
            spec,
            frozen,
            list_size: raw.list_size.unwrap_or(1),
            sweep: sweep.0,
            max_trials,
            target_errors: raw.target_errors,
            seed: raw.seed.unwrap_or(0),
            workers: raw.workers.unwrap_or(0),
            out: raw.out.clone(),
            descriptor: raw.code.clone().unwrap_or_default(),
        })
    }

    /// The accept/reject rule for `simulate`: exactly one of epsilon, crc,
    /// forney_t must be present.
    pub fn decision_rule(&mut self, raw: &RawConfig) -> Result<DecisionRuleCfg> {
        let mut rules = Vec::new();
        if let Some(epsilon) = raw.epsilon {
            if !(0.0..1.0).contains(&epsilon) {
                return Err(Error::Config(format!("epsilon {epsilon} outside [0, 1)")));
            }
            rules.push(DecisionRuleCfg::Threshold { epsilon });
        }
        if let Some(text) = &raw.crc {
            let poly = CrcPoly::from_hex(text)?;
            let k = self.spec.dimension();
            if poly.degree() >= k {
                return Err(Error::Config(format!(
                    "CRC degree {} leaves no message bits in K = {k}",
                    poly.degree()
                )));
            }
            let message_len = raw.message_len.unwrap_or(k - poly.degree());
            if message_len + poly.degree() != k {
                return Err(Error::Config(format!(
                    "message_len {message_len} + CRC degree {} must equal K = {k}",
                    poly.degree()
                )));
            }
            rules.push(DecisionRuleCfg::Crc { poly, message_len });
        }
        if let Some(t) = raw.forney_t {
            if t < 0.0 {
                return Err(Error::Config(format!("forney_t {t} must be >= 0")));
            }
            rules.push(DecisionRuleCfg::Forney { t });
        }
        match rules.len() {
            0 => Err(Error::Config(
                "pick exactly one rule: --epsilon, --crc or --forney-t".into(),
            )),
            1 => {
                let rule = rules.pop().unwrap();
                if let DecisionRuleCfg::Crc { message_len, .. } = rule {
                    self.message_len = message_len;
                }
                Ok(rule)
            }
            _ => Err(Error::Config(
                "more than one rule given; pick exactly one of --epsilon, --crc, --forney-t".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_parsing() {
        assert_eq!(
            "rm:6,3".parse::<CodeDescriptor>().unwrap(),
            CodeDescriptor::Rm { m: 6, r: 3 }
        );
        assert_eq!(
            "nr5g:64,48".parse::<CodeDescriptor>().unwrap(),
            CodeDescriptor::Nr5g { n: 64, k: 48 }
        );
        assert!("rm:6".parse::<CodeDescriptor>().is_err());
        assert!("hamming:7,4".parse::<CodeDescriptor>().is_err());
    }

    #[test]
    fn sweep_parsing() {
        assert_eq!("3.0".parse::<Sweep>().unwrap().0, vec![3.0]);
        let s = "1.0:0.5:4.5".parse::<Sweep>().unwrap().0;
        assert_eq!(s.len(), 8);
        assert_eq!(s[0], 1.0);
        assert!((s[7] - 4.5).abs() < 1e-12);
        assert!("2:0:3".parse::<Sweep>().is_err());
        assert!("5:1:2".parse::<Sweep>().is_err());
    }

    #[test]
    fn merge_prefers_cli() {
        let file: RawConfig = serde_json::from_str(
            r#"{"code": "rm:6,3", "list_size": 4, "seed": 9, "epsilon": 0.1}"#,
        )
        .unwrap();
        let cli = RawConfig {
            list_size: Some(8),
            ..RawConfig::default()
        };
        let merged = file.merged_with(cli);
        assert_eq!(merged.code.as_deref(), Some("rm:6,3"));
        assert_eq!(merged.list_size, Some(8));
        assert_eq!(merged.seed, Some(9));
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = serde_json::from_str::<RawConfig>(r#"{"bogus": 1}"#);
        assert!(err.is_err());
    }

    #[test]
    fn rule_selection() {
        let raw: RawConfig = serde_json::from_str(
            r#"{"code": "nr5g:64,48", "ebn0_db": "3.0", "crc": "0x30", "list_size": 4}"#,
        )
        .unwrap();
        let mut cfg = ExperimentConfig::common(&raw, FrozenKind::Static).unwrap();
        let rule = cfg.decision_rule(&raw).unwrap();
        match rule {
            DecisionRuleCfg::Crc { poly, message_len } => {
                assert_eq!(poly.degree(), 6);
                assert_eq!(message_len, 42);
                assert_eq!(cfg.message_len, 42);
            }
            other => panic!("wrong rule {other:?}"),
        }

        let both: RawConfig = serde_json::from_str(
            r#"{"code": "rm:6,3", "ebn0_db": "3.0", "crc": "0x30", "epsilon": 0.1}"#,
        )
        .unwrap();
        let mut cfg = ExperimentConfig::common(&both, FrozenKind::Static).unwrap();
        assert!(cfg.decision_rule(&both).is_err());

        let none: RawConfig =
            serde_json::from_str(r#"{"code": "rm:6,3", "ebn0_db": "3.0"}"#).unwrap();
        let mut cfg = ExperimentConfig::common(&none, FrozenKind::Static).unwrap();
        assert!(cfg.decision_rule(&none).is_err());
    }
}
