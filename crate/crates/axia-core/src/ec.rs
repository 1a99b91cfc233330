//! Factorized evaluation-condition (EC) spaces.
//!
//! A space is an ordered list of factors, each with an ordered list of atomic
//! values. One point of the space (a `Config`) picks one value index per
//! factor. Configs are enumerated in mixed-radix order with the first listed
//! factor most significant; when a constraint excludes combinations, ordinals
//! index only the feasible configs, so downstream samplers never see an
//! infeasible point.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EcError {
    #[error("factor `{0}` has no values")]
    EmptyFactor(String),
    #[error("factor `{0}` has duplicate values")]
    DuplicateValue(String),
    #[error("space has no feasible config")]
    EmptySpace,
    #[error("ordinal {ordinal} out of range for space of size {size}")]
    OrdinalOutOfRange { ordinal: usize, size: usize },
    #[error("config is not feasible in this space")]
    InfeasibleConfig,
    #[error("sample size {n} out of range 1..={size}")]
    SampleSize { n: usize, size: usize },
    #[error("distribution shape does not match space ({0})")]
    DistributionShape(String),
    #[error("factor weights invalid: {0}")]
    BadWeights(String),
    #[error("unknown constraint id `{0}`")]
    UnknownConstraint(String),
    #[error("space file: {0}")]
    File(String),
}

/// One atomic factor value: a number, a fixed tuple of numbers, or a label.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Num(f64),
    Tuple(Vec<f64>),
    Label(String),
}

impl Value {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[f64]> {
        match self {
            Value::Tuple(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_label(&self) -> Option<&str> {
        match self {
            Value::Label(s) => Some(s),
            _ => None,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Num(a), Value::Num(b)) => a.to_bits() == b.to_bits(),
            (Value::Tuple(a), Value::Tuple(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
            }
            (Value::Label(a), Value::Label(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Value {}

/// One dimension of an EC space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Factor {
    pub name: String,
    pub values: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    /// Optional real-world occurrence weights, normalized on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl Factor {
    pub fn new(name: &str, values: Vec<Value>) -> Self {
        Factor { name: name.to_string(), values, unit: None, weights: None }
    }

    pub fn nums(name: &str, values: &[f64]) -> Self {
        Self::new(name, values.iter().map(|&v| Value::Num(v)).collect())
    }

    pub fn labels(name: &str, values: &[&str]) -> Self {
        Self::new(name, values.iter().map(|s| Value::Label(s.to_string())).collect())
    }

    pub fn tuples(name: &str, values: &[&[f64]]) -> Self {
        Self::new(name, values.iter().map(|t| Value::Tuple(t.to_vec())).collect())
    }

    pub fn cardinality(&self) -> usize {
        self.values.len()
    }
}

/// A feasibility predicate over raw factor index vectors.
///
/// Constraints are code, identified by a stable id so that space files can
/// reference them. The predicate sees the factor list and the per-factor value
/// indices of a candidate config.
#[derive(Clone, Copy)]
pub struct Constraint {
    pub id: &'static str,
    pub pred: fn(&[Factor], &[usize]) -> bool,
}

impl std::fmt::Debug for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Constraint({})", self.id)
    }
}

/// One point of an EC space: a value index per factor, in factor order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Config {
    pub indices: Vec<usize>,
}

impl Config {
    pub fn new(indices: Vec<usize>) -> Self {
        Config { indices }
    }
}

/// A factorized EC space, optionally constrained.
#[derive(Debug, Clone)]
pub struct EcSpace {
    factors: Vec<Factor>,
    constraint: Option<Constraint>,
    /// Raw mixed-radix codes of the feasible configs, ascending.
    /// Only materialized when a constraint is present.
    feasible: Option<Vec<u32>>,
}

impl EcSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self, EcError> {
        Self::with_constraint(factors, None)
    }

    pub fn with_constraint(factors: Vec<Factor>, constraint: Option<Constraint>) -> Result<Self, EcError> {
        for f in &factors {
            if f.values.is_empty() {
                return Err(EcError::EmptyFactor(f.name.clone()));
            }
            for (i, v) in f.values.iter().enumerate() {
                if f.values[..i].contains(v) {
                    return Err(EcError::DuplicateValue(f.name.clone()));
                }
            }
            if let Some(w) = &f.weights {
                if w.len() != f.values.len() {
                    return Err(EcError::BadWeights(format!("factor `{}`", f.name)));
                }
            }
        }
        let raw: usize = factors.iter().map(Factor::cardinality).product();
        let feasible = match constraint {
            Some(c) => {
                let mut idx = vec![0usize; factors.len()];
                let mut list = Vec::new();
                for code in 0..raw {
                    decode_raw(&factors, code, &mut idx);
                    if (c.pred)(&factors, &idx) {
                        list.push(code as u32);
                    }
                }
                if list.is_empty() {
                    return Err(EcError::EmptySpace);
                }
                Some(list)
            }
            None => {
                if raw == 0 {
                    return Err(EcError::EmptySpace);
                }
                None
            }
        };
        Ok(EcSpace { factors, constraint, feasible })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn constraint_id(&self) -> Option<&'static str> {
        self.constraint.map(|c| c.id)
    }

    pub fn factor_index(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name == name)
    }

    /// Number of feasible configs.
    pub fn size(&self) -> usize {
        match &self.feasible {
            Some(list) => list.len(),
            None => self.factors.iter().map(Factor::cardinality).product(),
        }
    }

    /// The config at a feasible ordinal, in mixed-radix order.
    pub fn config_at(&self, ordinal: usize) -> Result<Config, EcError> {
        let size = self.size();
        if ordinal >= size {
            return Err(EcError::OrdinalOutOfRange { ordinal, size });
        }
        let code = match &self.feasible {
            Some(list) => list[ordinal] as usize,
            None => ordinal,
        };
        let mut idx = vec![0usize; self.factors.len()];
        decode_raw(&self.factors, code, &mut idx);
        Ok(Config::new(idx))
    }

    /// Inverse of [`config_at`](Self::config_at).
    pub fn ordinal_of(&self, config: &Config) -> Result<usize, EcError> {
        if config.indices.len() != self.factors.len() {
            return Err(EcError::InfeasibleConfig);
        }
        for (f, &i) in self.factors.iter().zip(&config.indices) {
            if i >= f.cardinality() {
                return Err(EcError::InfeasibleConfig);
            }
        }
        let code = encode_raw(&self.factors, &config.indices);
        match &self.feasible {
            Some(list) => list
                .binary_search(&(code as u32))
                .map_err(|_| EcError::InfeasibleConfig),
            None => Ok(code),
        }
    }

    /// The value the config selects for the named factor position.
    pub fn value(&self, config: &Config, factor: usize) -> &Value {
        &self.factors[factor].values[config.indices[factor]]
    }

    /// `n` distinct configs with equal inclusion probability (partial
    /// Fisher-Yates over the ordinal range).
    pub fn sample_uniform_without_replacement(
        &self,
        n: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Config>, EcError> {
        let size = self.size();
        if n == 0 || n > size {
            return Err(EcError::SampleSize { n, size });
        }
        let mut ordinals: Vec<usize> = (0..size).collect();
        for i in 0..n {
            let j = rng.gen_range(i..size);
            ordinals.swap(i, j);
        }
        ordinals[..n]
            .iter()
            .map(|&o| self.config_at(o))
            .collect()
    }

    /// `n` configs drawn with replacement under a factorized distribution.
    pub fn sample_weighted(
        &self,
        dist: &FactorDistribution,
        n: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Config>, EcError> {
        dist.check_shape(self)?;
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let mut idx = Vec::with_capacity(self.factors.len());
            for w in &dist.weights {
                idx.push(draw_index(w, rng));
            }
            let cfg = Config::new(idx);
            // Constrained spaces reject infeasible draws; only ever active on
            // spaces where weighted sampling is not on the method menu, so the
            // loop is a completeness measure, not a hot path.
            if let Some(c) = self.constraint {
                if !(c.pred)(&self.factors, &cfg.indices) {
                    continue;
                }
            }
            out.push(cfg);
        }
        Ok(out)
    }
}

fn decode_raw(factors: &[Factor], code: usize, out: &mut [usize]) {
    let mut rest = code;
    for (slot, f) in out.iter_mut().zip(factors).rev() {
        let m = f.cardinality();
        *slot = rest % m;
        rest /= m;
    }
}

fn encode_raw(factors: &[Factor], indices: &[usize]) -> usize {
    let mut code = 0usize;
    for (f, &i) in factors.iter().zip(indices) {
        code = code * f.cardinality() + i;
    }
    code
}

fn draw_index(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Family tag of a factorized sampling distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistFamily {
    Power,
    Gaussian,
    MixedLog,
    /// Weights supplied externally (space file).
    Custom,
}

impl std::fmt::Display for DistFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DistFamily::Power => "power",
            DistFamily::Gaussian => "gaussian",
            DistFamily::MixedLog => "mixed-log",
            DistFamily::Custom => "custom",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for DistFamily {
    type Err = EcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "power" => Ok(DistFamily::Power),
            "gaussian" => Ok(DistFamily::Gaussian),
            "mixed-log" | "mixed_log" => Ok(DistFamily::MixedLog),
            "custom" => Ok(DistFamily::Custom),
            other => Err(EcError::BadWeights(format!("unknown family `{other}`"))),
        }
    }
}

/// Per-factor weight vectors; the joint probability of a config is the
/// product of its per-factor weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorDistribution {
    pub family: DistFamily,
    pub weights: Vec<Vec<f64>>,
}

impl FactorDistribution {
    /// weight ∝ rank⁻² (1-based rank in listed order).
    pub fn power(space: &EcSpace) -> Self {
        Self::from_rank_fn(space, DistFamily::Power, |rank, _| {
            let r = rank as f64 + 1.0;
            1.0 / (r * r)
        })
    }

    /// Discretized half-normal anchored on the first listed value,
    /// sigma = cardinality/4. Anchoring at an end rather than the middle is
    /// what gives the per-factor weights their orders-of-magnitude spread; a
    /// middle-centered bell over few values is close to uniform and produces
    /// no real-world sampling skew at all.
    pub fn gaussian(space: &EcSpace) -> Self {
        Self::from_rank_fn(space, DistFamily::Gaussian, |rank, m| {
            let sigma = (m as f64 / 4.0).max(1e-9);
            let z = rank as f64 / sigma;
            (-0.5 * z * z).exp()
        })
    }

    /// Equal mixture of the power weights and a logarithmic decay
    /// (weight ∝ 1/(1+ln rank)).
    pub fn mixed_log(space: &EcSpace) -> Self {
        let mut weights = Vec::with_capacity(space.factors.len());
        for f in space.factors() {
            let m = f.cardinality();
            let log_raw: Vec<f64> = (0..m).map(|k| 1.0 / (1.0 + ((k + 1) as f64).ln())).collect();
            let log_z: f64 = log_raw.iter().sum();
            let pow_raw: Vec<f64> = (0..m).map(|k| 1.0 / ((k + 1) as f64 * (k + 1) as f64)).collect();
            let pow_z: f64 = pow_raw.iter().sum();
            let w: Vec<f64> = log_raw
                .iter()
                .zip(&pow_raw)
                .map(|(l, p)| 0.5 * l / log_z + 0.5 * p / pow_z)
                .collect();
            weights.push(w);
        }
        FactorDistribution { family: DistFamily::MixedLog, weights }
    }

    pub fn by_family(space: &EcSpace, family: DistFamily) -> Result<Self, EcError> {
        match family {
            DistFamily::Power => Ok(Self::power(space)),
            DistFamily::Gaussian => Ok(Self::gaussian(space)),
            DistFamily::MixedLog => Ok(Self::mixed_log(space)),
            DistFamily::Custom => Self::from_factor_weights(space),
        }
    }

    /// Uniform weights; handy as a reference distribution in tests.
    pub fn uniform(space: &EcSpace) -> Self {
        let weights = space
            .factors()
            .iter()
            .map(|f| vec![1.0 / f.cardinality() as f64; f.cardinality()])
            .collect();
        FactorDistribution { family: DistFamily::Custom, weights }
    }

    /// Weights carried by the space's factor entries.
    pub fn from_factor_weights(space: &EcSpace) -> Result<Self, EcError> {
        let mut weights = Vec::with_capacity(space.factors.len());
        for f in space.factors() {
            let w = f
                .weights
                .as_ref()
                .ok_or_else(|| EcError::BadWeights(format!("factor `{}` carries no weights", f.name)))?;
            if w.iter().any(|&x| x < 0.0 || !x.is_finite()) {
                return Err(EcError::BadWeights(format!("factor `{}`", f.name)));
            }
            let z: f64 = w.iter().sum();
            if z <= 0.0 {
                return Err(EcError::BadWeights(format!("factor `{}` weights sum to 0", f.name)));
            }
            weights.push(w.iter().map(|x| x / z).collect());
        }
        Ok(FactorDistribution { family: DistFamily::Custom, weights })
    }

    fn from_rank_fn(space: &EcSpace, family: DistFamily, raw: fn(usize, usize) -> f64) -> Self {
        let weights = space
            .factors()
            .iter()
            .map(|f| {
                let m = f.cardinality();
                let v: Vec<f64> = (0..m).map(|k| raw(k, m)).collect();
                let z: f64 = v.iter().sum();
                v.into_iter().map(|x| x / z).collect()
            })
            .collect();
        FactorDistribution { family, weights }
    }

    pub fn check_shape(&self, space: &EcSpace) -> Result<(), EcError> {
        if self.weights.len() != space.factors().len() {
            return Err(EcError::DistributionShape(format!(
                "{} weight vectors for {} factors",
                self.weights.len(),
                space.factors().len()
            )));
        }
        for (w, f) in self.weights.iter().zip(space.factors()) {
            if w.len() != f.cardinality() {
                return Err(EcError::DistributionShape(format!("factor `{}`", f.name)));
            }
        }
        Ok(())
    }

    /// Joint probability of one config: the product of per-factor weights.
    pub fn joint_weight(&self, config: &Config) -> f64 {
        config
            .indices
            .iter()
            .zip(&self.weights)
            .map(|(&i, w)| w[i])
            .product()
    }
}

/// On-disk form of an EC space: one factor per entry, plus an optional
/// constraint id resolved through [`resolve_constraint`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<u8>,
    pub factors: Vec<Factor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<String>,
}

impl SpaceFile {
    pub fn from_space(space: &EcSpace, task: Option<u8>) -> Self {
        SpaceFile {
            task,
            factors: space.factors().to_vec(),
            constraint: space.constraint_id().map(str::to_string),
        }
    }

    pub fn to_space(&self, resolve: impl Fn(&str) -> Option<Constraint>) -> Result<EcSpace, EcError> {
        let constraint = match &self.constraint {
            Some(id) => Some(resolve(id).ok_or_else(|| EcError::UnknownConstraint(id.clone()))?),
            None => None,
        };
        EcSpace::with_constraint(self.factors.clone(), constraint)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("space file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, EcError> {
        serde_json::from_str(text).map_err(|e| EcError::File(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;

    fn small_space() -> EcSpace {
        EcSpace::new(vec![Factor::nums("a", &[0.0, 1.0, 2.0]), Factor::nums("b", &[10.0, 20.0])])
            .unwrap()
    }

    #[test]
    fn size_matches_cardinality_product() {
        let s = EcSpace::new(vec![
            Factor::nums("p", &[1.0, 2.0, 3.0, 4.0, 5.0]),
            Factor::nums("q", &(0..10).map(|i| i as f64).collect::<Vec<_>>()),
            Factor::nums("r", &[1.0, 2.0, 3.0, 4.0]),
            Factor::nums("s", &(0..10).map(|i| i as f64 + 0.5).collect::<Vec<_>>()),
        ])
        .unwrap();
        assert_eq!(s.size(), 2000);
        let singleton = EcSpace::new(vec![Factor::nums("only", &[42.0])]).unwrap();
        assert_eq!(singleton.size(), 1);
    }

    #[test]
    fn mixed_radix_endpoints() {
        let s = small_space();
        assert_eq!(s.config_at(0).unwrap().indices, vec![0, 0]);
        assert_eq!(s.config_at(s.size() - 1).unwrap().indices, vec![2, 1]);
        assert!(s.config_at(s.size()).is_err());
    }

    #[test]
    fn ordinal_round_trip_exhaustive() {
        let s = small_space();
        for o in 0..s.size() {
            let c = s.config_at(o).unwrap();
            assert_eq!(s.ordinal_of(&c).unwrap(), o);
        }
    }

    #[test]
    fn exhaustive_sample_is_permutation() {
        let s = small_space();
        let mut rng = stream(1, "ec-test", 0);
        let all = s.sample_uniform_without_replacement(s.size(), &mut rng).unwrap();
        let mut ords: Vec<usize> = all.iter().map(|c| s.ordinal_of(c).unwrap()).collect();
        ords.sort_unstable();
        assert_eq!(ords, (0..s.size()).collect::<Vec<_>>());
    }

    #[test]
    fn single_draw_is_deterministic() {
        let s = small_space();
        let a = s
            .sample_uniform_without_replacement(1, &mut stream(9, "ec-test", 1))
            .unwrap();
        let b = s
            .sample_uniform_without_replacement(1, &mut stream(9, "ec-test", 1))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_single_draws_hit_each_config_at_quarter_rate() {
        let s = EcSpace::new(vec![Factor::nums("a", &[0.0, 1.0]), Factor::nums("b", &[0.0, 1.0])])
            .unwrap();
        let mut counts = [0usize; 4];
        for i in 0..10000 {
            let mut rng = stream(3, "ec-freq", i);
            let c = &s.sample_uniform_without_replacement(1, &mut rng).unwrap()[0];
            counts[s.ordinal_of(c).unwrap()] += 1;
        }
        for &c in &counts {
            let f = c as f64 / 10000.0;
            assert!((f - 0.25).abs() < 0.02, "freq {f}");
        }
    }

    #[test]
    fn weighted_point_mass_is_degenerate() {
        let s = small_space();
        let dist = FactorDistribution {
            family: DistFamily::Custom,
            weights: vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0]],
        };
        let mut rng = stream(4, "ec-point", 0);
        let draws = s.sample_weighted(&dist, 50, &mut rng).unwrap();
        assert!(draws.iter().all(|c| c.indices == vec![1, 0]));
    }

    #[test]
    fn weighted_uniform_matches_uniform_frequencies() {
        let s = EcSpace::new(vec![Factor::nums("a", &[0.0, 1.0]), Factor::nums("b", &[0.0, 1.0])])
            .unwrap();
        let dist = FactorDistribution::uniform(&s);
        let mut rng = stream(5, "ec-wuni", 0);
        let draws = s.sample_weighted(&dist, 10000, &mut rng).unwrap();
        let mut counts = [0usize; 4];
        for c in &draws {
            counts[s.ordinal_of(c).unwrap()] += 1;
        }
        for &c in &counts {
            let f = c as f64 / 10000.0;
            assert!((f - 0.25).abs() < 0.02, "freq {f}");
        }
    }

    #[test]
    fn power_weights_put_seven_tenths_on_first_of_four() {
        // 1/k² over 4 values: 1 / (1 + 1/4 + 1/9 + 1/16) = 0.7025.
        let s = EcSpace::new(vec![Factor::nums("a", &[1.0, 2.0, 3.0, 4.0])]).unwrap();
        let dist = FactorDistribution::power(&s);
        assert!((dist.weights[0][0] - 0.7025).abs() < 1e-3);
        let mut rng = stream(6, "ec-pow", 0);
        let draws = s.sample_weighted(&dist, 10000, &mut rng).unwrap();
        let first = draws.iter().filter(|c| c.indices[0] == 0).count() as f64 / 10000.0;
        assert!((first - 0.70).abs() < 0.03, "first-value frequency {first}");
    }

    #[test]
    fn joint_weights_sum_to_one_without_constraint() {
        let s = small_space();
        for dist in [
            FactorDistribution::power(&s),
            FactorDistribution::gaussian(&s),
            FactorDistribution::mixed_log(&s),
        ] {
            let total: f64 = (0..s.size())
                .map(|o| dist.joint_weight(&s.config_at(o).unwrap()))
                .sum();
            assert!((total - 1.0).abs() < 1e-9, "{:?}: {total}", dist.family);
        }
    }

    #[test]
    fn space_file_round_trips_bit_exactly() {
        let mut f1 = Factor::nums("a", &[0.1, 0.2, 0.30000000000000004]);
        f1.weights = Some(vec![0.5, 0.25, 0.25]);
        let f2 = Factor::labels("mode", &["slow", "fast"]);
        let f3 = Factor::tuples("xyz", &[&[1.0, 5.0, 10.0], &[-2.0, -8.0, -15.0]]);
        let space = EcSpace::new(vec![f1, f2, f3]).unwrap();
        let file = SpaceFile::from_space(&space, Some(1));
        let json = file.to_json();
        let back = SpaceFile::from_json(&json).unwrap();
        assert_eq!(json, back.to_json());
        let space2 = back.to_space(|_| None).unwrap();
        assert_eq!(space2.size(), space.size());
        for o in 0..space.size() {
            for k in 0..space.factors().len() {
                let a = space.value(&space.config_at(o).unwrap(), k).clone();
                let b = space2.value(&space2.config_at(o).unwrap(), k).clone();
                assert!(a == b);
            }
        }
    }

    proptest! {
        #[test]
        fn sampling_without_replacement_has_no_duplicates(n in 1usize..6, seed in 0u64..500) {
            let s = small_space();
            let mut rng = stream(seed, "ec-prop", 0);
            let draws = s.sample_uniform_without_replacement(n, &mut rng).unwrap();
            let mut ords: Vec<usize> = draws.iter().map(|c| s.ordinal_of(c).unwrap()).collect();
            ords.sort_unstable();
            ords.dedup();
            prop_assert_eq!(ords.len(), n);
        }

        #[test]
        fn sampling_is_reproducible(n in 1usize..6, seed in 0u64..500) {
            let s = small_space();
            let a = s.sample_uniform_without_replacement(n, &mut stream(seed, "ec-prop2", 0)).unwrap();
            let b = s.sample_uniform_without_replacement(n, &mut stream(seed, "ec-prop2", 0)).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn joint_weight_is_product(o in 0usize..6) {
            let s = small_space();
            let dist = FactorDistribution::gaussian(&s);
            let c = s.config_at(o).unwrap();
            let manual: f64 = c.indices.iter().zip(&dist.weights).map(|(&i, w)| w[i]).product();
            prop_assert_eq!(dist.joint_weight(&c), manual);
        }
    }
}
