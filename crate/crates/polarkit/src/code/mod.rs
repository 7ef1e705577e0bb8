//! Code construction for polar-like codes.
//!
//! A polar-like code of block length `N = 2^n` is a set `A` of information
//! positions plus, for every frozen position `i`, a linear rule expressing
//! `u_i` as the XOR of earlier input bits. Static frozen bits have an empty
//! rule (`u_i = 0`); dynamic frozen bits reference prior indices. The
//! codeword is `c = u F^{(tensor) n}` with `F = [[1,0],[1,1]]`.
//!
//! Indices in the domain model are 1-based (`1..=N`), both in the public
//! accessors and in the JSON fixture format; they are converted to 0-based
//! offsets once, when the derived lookup tables are built.

mod crc;
mod nr5g;
mod rm;

pub use crc::CrcPoly;
pub use nr5g::nr5g_info_set;
pub use rm::rm_info_set;

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How frozen positions are constrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrozenKind {
    /// `u_i = 0` for every frozen `i`.
    Static,
    /// `u_i = u_{i-2} + u_{i-3} + u_{i-5} + u_{i-6}` for frozen `i > 6`,
    /// static zero otherwise.
    Convolutional,
}

/// A polar-like code: block length, information set and frozen rules.
///
/// Immutable after construction and cheap to share between worker threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    n_log2: u32,
    /// Sorted 1-based information positions.
    info_set: Vec<usize>,
    /// 1-based frozen position -> sorted 1-based prior indices whose XOR
    /// defines the bit. Empty vector = static zero.
    frozen_rules: BTreeMap<usize, Vec<usize>>,
    // Derived 0-based tables for the hot paths.
    frozen_mask: Vec<bool>,
    rule_deps: Vec<Vec<usize>>,
    future_frozen: Vec<u32>,
}

impl CodeSpec {
    /// Builds a spec from `log2(N)`, the 1-based information set and the
    /// frozen-rule map, checking all structural invariants.
    pub fn new(
        n_log2: u32,
        info_set: impl IntoIterator<Item = usize>,
        frozen_rules: BTreeMap<usize, Vec<usize>>,
    ) -> Result<Self> {
        if n_log2 == 0 {
            return Err(Error::InvalidSpec("log2(N) must be at least 1".into()));
        }
        if n_log2 > 20 {
            return Err(Error::InvalidSpec(format!("log2(N) = {n_log2} is unreasonably large")));
        }
        let block_len = 1usize << n_log2;

        let mut info_set: Vec<usize> = info_set.into_iter().collect();
        info_set.sort_unstable();
        info_set.dedup();
        if info_set.iter().any(|&i| i == 0 || i > block_len) {
            return Err(Error::InvalidSpec(format!(
                "information positions must lie in 1..={block_len}"
            )));
        }

        let mut frozen_mask = vec![false; block_len];
        let mut rule_deps = vec![Vec::new(); block_len];
        for (&i, deps) in &frozen_rules {
            if i == 0 || i > block_len {
                return Err(Error::InvalidSpec(format!(
                    "frozen position {i} outside 1..={block_len}"
                )));
            }
            if info_set.binary_search(&i).is_ok() {
                return Err(Error::InvalidSpec(format!(
                    "position {i} is both frozen and informational"
                )));
            }
            frozen_mask[i - 1] = true;
            let mut deps = deps.clone();
            deps.sort_unstable();
            deps.dedup();
            if deps.iter().any(|&j| j == 0 || j >= i) {
                return Err(Error::InvalidSpec(format!(
                    "rule for frozen position {i} references an index outside 1..{i}"
                )));
            }
            rule_deps[i - 1] = deps.iter().map(|&j| j - 1).collect();
        }
        if info_set.len() + frozen_rules.len() != block_len {
            return Err(Error::InvalidSpec(format!(
                "info set ({}) and frozen rules ({}) must partition 1..={block_len}",
                info_set.len(),
                frozen_rules.len()
            )));
        }

        // future_frozen[i] = number of frozen positions strictly greater
        // than i, for prefix lengths i = 0..=N.
        let mut future_frozen = vec![0u32; block_len + 1];
        for i in (0..block_len).rev() {
            future_frozen[i] = future_frozen[i + 1] + u32::from(frozen_mask[i]);
        }

        let frozen_rules = frozen_rules
            .into_iter()
            .map(|(i, mut deps)| {
                deps.sort_unstable();
                deps.dedup();
                (i, deps)
            })
            .collect();

        Ok(Self {
            n_log2,
            info_set,
            frozen_rules,
            frozen_mask,
            rule_deps,
            future_frozen,
        })
    }

    /// Reed-Muller style spec: `RM(m, r)` information set with the given
    /// frozen-bit kind.
    pub fn reed_muller(m: u32, r: u32, kind: FrozenKind) -> Result<Self> {
        let info_set = rm_info_set(m, r)?;
        let rules = make_frozen_rules(1usize << m, &info_set, kind);
        Self::new(m, info_set, rules)
    }

    /// 5G-reliability spec: the `K` most reliable positions of a length-`N`
    /// code according to the embedded universal sequence.
    pub fn nr5g(block_len: usize, dimension: usize, kind: FrozenKind) -> Result<Self> {
        let info_set = nr5g_info_set(block_len, dimension)?;
        let rules = make_frozen_rules(block_len, &info_set, kind);
        Self::new(block_len.trailing_zeros(), info_set, rules)
    }

    /// Block length `N`.
    pub fn block_len(&self) -> usize {
        1usize << self.n_log2
    }

    /// Code dimension `K`.
    pub fn dimension(&self) -> usize {
        self.info_set.len()
    }

    pub fn n_log2(&self) -> u32 {
        self.n_log2
    }

    /// `K / N`.
    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.block_len() as f64
    }

    /// Sorted 1-based information positions.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    /// 1-based frozen rules.
    pub fn frozen_rules(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.frozen_rules
    }

    /// Whether 0-based input position `idx0` is frozen.
    #[inline]
    pub fn is_frozen(&self, idx0: usize) -> bool {
        self.frozen_mask[idx0]
    }

    /// 0-based rule dependencies for 0-based input position `idx0`
    /// (empty for information positions and static frozen bits).
    #[inline]
    pub fn rule_deps(&self, idx0: usize) -> &[usize] {
        &self.rule_deps[idx0]
    }

    /// `future_frozen_counts()[i]` = number of frozen positions strictly
    /// after 1-based position `i`, for prefix lengths `i = 0..=N`.
    /// Entry 0 is `N - K`, entry `N` is 0.
    pub fn future_frozen_counts(&self) -> &[u32] {
        &self.future_frozen
    }

    /// Evaluates the frozen rule at 0-based position `idx0` on a prefix of
    /// decided bits.
    #[inline]
    pub fn frozen_value(&self, idx0: usize, prefix: &[u8]) -> u8 {
        let mut v = 0u8;
        for &j in &self.rule_deps[idx0] {
            v ^= prefix[j] & 1;
        }
        v
    }

    /// Expands a `K`-bit message into the length-`N` transform input:
    /// message bits on the information set in index order, frozen bits from
    /// their rules in increasing position order.
    pub fn u_vector(&self, message: &[u8]) -> Vec<u8> {
        assert_eq!(message.len(), self.dimension(), "message length must be K");
        let mut u = vec![0u8; self.block_len()];
        let mut msg = message.iter();
        for i in 0..self.block_len() {
            u[i] = if self.frozen_mask[i] {
                self.frozen_value(i, &u[..i])
            } else {
                *msg.next().expect("info position beyond message") & 1
            };
        }
        u
    }

    /// Encodes a `K`-bit message into an `N`-bit codeword.
    pub fn encode(&self, message: &[u8]) -> Vec<u8> {
        let mut u = self.u_vector(message);
        polar_transform(&mut u);
        u
    }

    /// Membership test: recovers `u` through the (involutive) transform and
    /// checks every frozen rule.
    pub fn is_codeword(&self, codeword: &[u8]) -> bool {
        assert_eq!(codeword.len(), self.block_len(), "codeword length must be N");
        let mut u = codeword.to_vec();
        polar_transform(&mut u);
        (0..u.len()).all(|i| !self.frozen_mask[i] || u[i] == self.frozen_value(i, &u[..i]))
    }

    /// Extracts the information payload `u_A` (in index order) from a full
    /// input vector.
    pub fn info_bits(&self, u: &[u8]) -> Vec<u8> {
        self.info_set.iter().map(|&i| u[i - 1]).collect()
    }

    /// Parity-check matrix: one row per frozen position, expressing the rule
    /// on codeword bits so that `H c^T = 0` iff `is_codeword(c)`.
    pub fn parity_checks(&self) -> Vec<Vec<u8>> {
        let n = self.block_len();
        let mut rows = Vec::with_capacity(n - self.dimension());
        for (&i, _) in &self.frozen_rules {
            let mut v = vec![0u8; n];
            v[i - 1] = 1;
            for &j in &self.rule_deps[i - 1] {
                v[j] = 1;
            }
            // The constraint v . u = v . (c F) = (transposed transform of v) . c.
            polar_transform_transposed(&mut v);
            rows.push(v);
        }
        rows
    }
}

/// Builds the frozen-rule map for a given information set.
///
/// `Static` freezes every non-information position to zero. `Convolutional`
/// applies the register rule `u_i = u_{i-2} + u_{i-3} + u_{i-5} + u_{i-6}`
/// where it is defined (`i > 6`), falling back to static zero for `i <= 6`.
pub fn make_frozen_rules(
    block_len: usize,
    info_set: &[usize],
    kind: FrozenKind,
) -> BTreeMap<usize, Vec<usize>> {
    let info: std::collections::BTreeSet<usize> = info_set.iter().copied().collect();
    (1..=block_len)
        .filter(|i| !info.contains(i))
        .map(|i| {
            let deps = match kind {
                FrozenKind::Static => Vec::new(),
                FrozenKind::Convolutional if i > 6 => vec![i - 6, i - 5, i - 3, i - 2],
                FrozenKind::Convolutional => Vec::new(),
            };
            (i, deps)
        })
        .collect()
}

/// In-place polar transform `x -> x F^{(tensor) log2 len}` over GF(2).
///
/// The transform is an involution: applying it twice restores the input.
///
/// Panics if the length is not a power of two.
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    assert!(n.is_power_of_two(), "length must be a power of two");
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for j in block..block + h {
                bits[j] ^= bits[j + h];
            }
        }
        h *= 2;
    }
}

/// In-place multiplication by the transposed transform, `x -> x (F^T)^{(tensor) n}`.
///
/// Used to express u-domain constraints on codeword bits.
pub fn polar_transform_transposed(bits: &mut [u8]) {
    let n = bits.len();
    assert!(n.is_power_of_two(), "length must be a power of two");
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for j in block..block + h {
                bits[j + h] ^= bits[j];
            }
        }
        h *= 2;
    }
}

/// Draws a code with a uniformly random `K`-subset information set and,
/// for every frozen position, an independent random subset of prior indices
/// as its rule. Used for fuzzing decoders against the exact oracles.
pub fn random_dynamic_spec<R: rand::Rng>(
    n_log2: u32,
    dimension: usize,
    rng: &mut R,
) -> Result<CodeSpec> {
    let block_len = 1usize << n_log2;
    if dimension > block_len {
        return Err(Error::InvalidParameter(format!(
            "dimension {dimension} exceeds block length {block_len}"
        )));
    }
    let mut positions: Vec<usize> = (1..=block_len).collect();
    for i in (1..positions.len()).rev() {
        positions.swap(i, rng.random_range(0..=i));
    }
    let info_set: Vec<usize> = positions[..dimension].to_vec();
    let info: std::collections::BTreeSet<usize> = info_set.iter().copied().collect();
    let mut rules = BTreeMap::new();
    for i in 1..=block_len {
        if !info.contains(&i) {
            let deps: Vec<usize> = (1..i).filter(|_| rng.random_bool(0.3)).collect();
            rules.insert(i, deps);
        }
    }
    CodeSpec::new(n_log2, info_set, rules)
}

/// JSON fixture schema: `{"n": 2, "info_set": [2, 4], "rules": {"1": [], "3": []}}`.
///
/// All indices are 1-based, matching the domain model.
#[derive(Serialize, Deserialize)]
struct CodeSpecJson {
    n: u32,
    info_set: Vec<usize>,
    rules: BTreeMap<String, Vec<usize>>,
}

impl Serialize for CodeSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CodeSpecJson {
            n: self.n_log2,
            info_set: self.info_set.clone(),
            rules: self
                .frozen_rules
                .iter()
                .map(|(i, deps)| (i.to_string(), deps.clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CodeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = CodeSpecJson::deserialize(deserializer)?;
        let mut rules = BTreeMap::new();
        for (key, deps) in raw.rules {
            let i: usize = key
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("bad rule index {key:?}")))?;
            rules.insert(i, deps);
        }
        CodeSpec::new(raw.n, raw.info_set, rules).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The running example: N = 4, frozen {1, 3} static, info {2, 4}.
    pub(crate) fn tiny_spec() -> CodeSpec {
        CodeSpec::new(2, [2, 4], BTreeMap::from([(1, vec![]), (3, vec![])])).unwrap()
    }

    #[test]
    fn transform_matches_hand_computation() {
        // Rows of F tensor F are {1000, 1100, 1010, 1111}; e_2 maps to row 2.
        let mut x = vec![0, 1, 0, 0];
        polar_transform(&mut x);
        assert_eq!(x, vec![1, 1, 0, 0]);

        let mut zero = vec![0u8; 8];
        polar_transform(&mut zero);
        assert_eq!(zero, vec![0u8; 8]);
    }

    #[test]
    fn transform_is_involution() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 33) as u8 & 1
        };
        for n_log2 in 1..=8 {
            let n = 1usize << n_log2;
            let x: Vec<u8> = (0..n).map(|_| next()).collect();
            let mut y = x.clone();
            polar_transform(&mut y);
            polar_transform(&mut y);
            assert_eq!(x, y, "involution failed for N = {n}");
        }
    }

    #[test]
    fn encode_tiny_example() {
        let spec = tiny_spec();
        assert_eq!(spec.u_vector(&[1, 0]), vec![0, 1, 0, 0]);
        assert_eq!(spec.encode(&[1, 0]), vec![1, 1, 0, 0]);
        assert_eq!(spec.encode(&[0, 0]), vec![0, 0, 0, 0]);
    }

    #[test]
    fn membership_tiny_example() {
        let spec = tiny_spec();
        assert!(spec.is_codeword(&[1, 1, 0, 0]));
        assert!(!spec.is_codeword(&[1, 0, 0, 0]));
        assert!(spec.is_codeword(&[0, 0, 0, 0]));
    }

    #[test]
    fn parity_checks_tiny_example() {
        let spec = tiny_spec();
        assert_eq!(spec.parity_checks(), vec![vec![1, 1, 1, 1], vec![0, 0, 1, 1]]);
    }

    #[test]
    fn parity_checks_rate_one_empty() {
        let spec = CodeSpec::reed_muller(3, 3, FrozenKind::Static).unwrap();
        assert_eq!(spec.info_set(), &[1, 2, 3, 4, 5, 6, 7, 8]);
        assert!(spec.parity_checks().is_empty());
    }

    #[test]
    fn parity_checks_annihilate_codewords() {
        let spec = CodeSpec::reed_muller(4, 2, FrozenKind::Convolutional).unwrap();
        let h = spec.parity_checks();
        assert_eq!(h.len(), spec.block_len() - spec.dimension());
        let mut msg = vec![0u8; spec.dimension()];
        for t in 0..16 {
            for (b, bit) in msg.iter_mut().enumerate() {
                *bit = ((t >> (b % 4)) ^ (t * 31 / (b + 1))) as u8 & 1;
            }
            let c = spec.encode(&msg);
            assert!(spec.is_codeword(&c));
            for row in &h {
                let dot: u8 = row.iter().zip(&c).map(|(a, b)| a & b).fold(0, |x, y| x ^ y);
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn convolutional_rules() {
        let rules = make_frozen_rules(8, &[8], FrozenKind::Convolutional);
        assert_eq!(rules[&7], vec![1, 2, 4, 5]); // i - 6, i - 5, i - 3, i - 2
        assert_eq!(rules[&3], Vec::<usize>::new()); // rule defined only for i > 6
        let stat = make_frozen_rules(8, &[8], FrozenKind::Static);
        assert!(stat.values().all(|deps| deps.is_empty()));
    }

    #[test]
    fn future_frozen_counts_tiny_example() {
        let spec = tiny_spec();
        // Counts after prefix lengths 0..=4: frozen positions are {1, 3}.
        assert_eq!(spec.future_frozen_counts(), &[2, 1, 1, 0, 0]);
        let ff = spec.future_frozen_counts();
        assert_eq!(ff[0] as usize, spec.block_len() - spec.dimension());
        assert_eq!(*ff.last().unwrap(), 0);
        assert!(ff.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn spec_validation_errors() {
        // Overlapping info and frozen position.
        assert!(CodeSpec::new(2, [1, 2], BTreeMap::from([(1, vec![]), (3, vec![])])).is_err());
        // Rule referencing a future index.
        assert!(CodeSpec::new(2, [2, 4], BTreeMap::from([(1, vec![]), (3, vec![4])])).is_err());
        // Not a partition.
        assert!(CodeSpec::new(2, [2], BTreeMap::from([(1, vec![])])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec = CodeSpec::reed_muller(3, 1, FrozenKind::Convolutional).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: CodeSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
        // 1-based fixture schema.
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["info_set"], serde_json::json!([4, 6, 7, 8]));
        assert_eq!(v["rules"]["7"], serde_json::json!([1, 2, 4, 5]));
    }
}
