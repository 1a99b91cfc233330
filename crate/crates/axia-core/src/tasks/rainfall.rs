//! Task 2: ab-initio hourly precipitation series and regression-model scoring.
//!
//! One series is a year of hourly values from a moist-thermodynamics closed
//! form with four independent normal noise streams (vapor, airflow,
//! temperature, observation). Four deterministic regressor surrogates are
//! scored on a chronological 80/20 split by MSE, RMSE and MAE. Negative
//! values are legal: clamping would mask the observation-noise knob.

use rand_chacha::ChaCha8Rng;

use crate::ec::{EcSpace, Factor};
use crate::rng::{normal, stream};
use crate::tasks::regress::dot;

pub const HOURS: usize = 8760;
/// Hours per staggering quarter; object rank k sees `k` quarters.
pub const STAGGER_QUARTER: usize = 2190;

pub const AIR_DENSITY: f64 = 3.6;
pub const LATENT_HEAT: f64 = 2.5e6;
pub const MOIST_LAPSE_RATE: f64 = 0.006;
pub const WATER_GAS_CONSTANT: f64 = 461.0;
/// Scale applied to the vapor noise stream; keeps relative humidity
/// fluctuation physical while the other noise knobs stay config-driven.
pub const VAPOR_NOISE_SCALE: f64 = 0.1;

/// One Task-2 evaluation condition.
#[derive(Debug, Clone, Copy)]
pub struct RainConfig {
    /// Saturation specific humidity.
    pub humidity: f64,
    /// Updraft airflow speed.
    pub updraft: f64,
    /// Temperature in kelvin.
    pub temperature: f64,
    pub airflow_noise: f64,
    pub temp_noise: f64,
    pub obs_noise: f64,
}

fn hourly_value(cfg: &RainConfig, eps: f64, eta: f64, xi: f64, nu: f64) -> f64 {
    let numerator = AIR_DENSITY
        * cfg.humidity
        * (1.0 + VAPOR_NOISE_SCALE * eps)
        * LATENT_HEAT
        * MOIST_LAPSE_RATE
        * cfg.updraft
        * (1.0 + cfg.airflow_noise * eta);
    let t = cfg.temperature + cfg.temp_noise * xi;
    numerator / (WATER_GAS_CONSTANT * t * t) + cfg.obs_noise * nu
}

/// A full year of hourly values, deterministic given `(cfg, seed)`.
pub fn rainfall_series(cfg: &RainConfig, seed: u64) -> Vec<f64> {
    let mut vapor = stream(seed, "rain/vapor", 0);
    let mut airflow = stream(seed, "rain/airflow", 0);
    let mut temp = stream(seed, "rain/temp", 0);
    let mut obs = stream(seed, "rain/obs", 0);
    (0..HOURS)
        .map(|_| {
            hourly_value(
                cfg,
                normal(&mut vapor),
                normal(&mut airflow),
                normal(&mut temp),
                normal(&mut obs),
            )
        })
        .collect()
}

/// The noise-free closed form, exposed for calibration checks.
pub fn noise_free_value(cfg: &RainConfig) -> f64 {
    hourly_value(cfg, 0.0, 0.0, 0.0, 0.0)
}

/// Intervention staggering: object rank k (1..=4) sees the first
/// `2190·k` hours; rank 4 is the unchanged series.
pub fn staggered_series(series: &[f64], object_rank: usize) -> &[f64] {
    assert!((1..=4).contains(&object_rank), "object rank 1..=4");
    &series[..STAGGER_QUARTER * object_rank]
}

/// The four regressor surrogates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RainModel {
    /// Ordinary least squares on daily/yearly harmonics.
    Linear,
    /// The same basis with per-feature cubic expansion and a ridge penalty.
    SplineAdditive,
    /// Bagged depth-4 regression trees on harmonics plus raw time.
    TreeBagger,
    /// Pure Fourier basis, eight yearly harmonics, least squares.
    FourierBasis,
}

impl RainModel {
    pub const ALL: [RainModel; 4] =
        [RainModel::Linear, RainModel::SplineAdditive, RainModel::TreeBagger, RainModel::FourierBasis];

    pub fn id(self) -> &'static str {
        match self {
            RainModel::Linear => "linear",
            RainModel::SplineAdditive => "spline_additive",
            RainModel::TreeBagger => "tree_bagger",
            RainModel::FourierBasis => "fourier_basis",
        }
    }

    /// Object rank used by the staggering method (1-based, in listed order).
    pub fn stagger_rank(self) -> usize {
        match self {
            RainModel::Linear => 1,
            RainModel::SplineAdditive => 2,
            RainModel::TreeBagger => 3,
            RainModel::FourierBasis => 4,
        }
    }
}

/// Error scores on the held-out segment; `rmse` is `sqrt(mse)` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
}

pub(crate) fn scores_of(predicted: &[f64], truth: &[f64]) -> Scores {
    assert_eq!(predicted.len(), truth.len());
    assert!(!truth.is_empty());
    let n = truth.len() as f64;
    let mut se = 0.0;
    let mut ae = 0.0;
    for (p, y) in predicted.iter().zip(truth) {
        let d = p - y;
        se += d * d;
        ae += d.abs();
    }
    let mse = se / n;
    Scores { mse, rmse: mse.sqrt(), mae: ae / n }
}

const DAILY_PERIOD: f64 = 24.0;
const YEARLY_PERIOD: f64 = 8760.0;

fn harmonics(t: f64) -> [f64; 4] {
    let d = std::f64::consts::TAU * t / DAILY_PERIOD;
    let y = std::f64::consts::TAU * t / YEARLY_PERIOD;
    [d.sin(), d.cos(), y.sin(), y.cos()]
}

const LINEAR_K: usize = 5;
const CUBIC_K: usize = 13;
const FOURIER_K: usize = 17;

fn linear_features(t: f64, out: &mut [f64]) {
    let h = harmonics(t);
    out[0] = 1.0;
    out[1..5].copy_from_slice(&h);
}

fn cubic_features(t: f64, out: &mut [f64]) {
    let h = harmonics(t);
    out[0] = 1.0;
    for (slot, f) in out[1..].chunks_exact_mut(3).zip(h) {
        slot[0] = f;
        slot[1] = f * f;
        slot[2] = f * f * f;
    }
}

fn fourier_features(t: f64, out: &mut [f64]) {
    out[0] = 1.0;
    for k in 1..=8usize {
        let w = std::f64::consts::TAU * k as f64 * t / YEARLY_PERIOD;
        out[2 * k - 1] = w.sin();
        out[2 * k] = w.cos();
    }
}

fn tree_features(t: f64) -> [f64; 5] {
    let h = harmonics(t);
    [h[0], h[1], h[2], h[3], t]
}

/// Fit the model on the first 80% of the series and score the rest.
pub fn regressor_scores(model: RainModel, series: &[f64], seed: u64) -> Scores {
    let split = series.len() * 4 / 5;
    let (train, test) = series.split_at(split);
    let predictions: Vec<f64> = match model {
        RainModel::Linear => fit_predict(train, test, split, LINEAR_K, linear_features, 0.0),
        RainModel::SplineAdditive => fit_predict(train, test, split, CUBIC_K, cubic_features, 1e-3),
        RainModel::FourierBasis => fit_predict(train, test, split, FOURIER_K, fourier_features, 0.0),
        RainModel::TreeBagger => {
            let forest = Forest::fit(train, &mut stream(seed, "rain/bagging", 0));
            (split..series.len()).map(|t| forest.predict(tree_features(t as f64))).collect()
        }
    };
    scores_of(&predictions, test)
}

fn fit_predict(
    train: &[f64],
    test: &[f64],
    split: usize,
    k: usize,
    fill: fn(f64, &mut [f64]),
    ridge: f64,
) -> Vec<f64> {
    let mut flat = vec![0.0f64; train.len() * k];
    for (t, row) in flat.chunks_exact_mut(k).enumerate() {
        fill(t as f64, row);
    }
    let w = crate::tasks::regress::fit_least_squares_flat(&flat, k, train, ridge);
    let mut row = vec![0.0f64; k];
    (split..split + test.len())
        .map(|t| {
            fill(t as f64, &mut row);
            dot(&w, &row)
        })
        .collect()
}

// ---- bagged regression trees -------------------------------------------------

const TREES: usize = 25;
const MAX_DEPTH: usize = 4;
const BINS: usize = 32;
const FEATURES: usize = 5;

struct Node {
    feature: usize,
    /// Inclusive upper bin of the left child.
    bin: u8,
    children: Option<(usize, usize)>,
    value: f64,
}

/// Bagged depth-limited regression trees over globally binned features:
/// every feature is discretized once into 32 equal-width bins over the
/// training range, nodes split on bin boundaries via fused histogram scans,
/// and prediction re-bins the query point with the same edges.
struct Forest {
    trees: Vec<Vec<Node>>,
    lo: [f64; FEATURES],
    inv_width: [f64; FEATURES],
}

impl Forest {
    fn fit(train: &[f64], rng: &mut ChaCha8Rng) -> Forest {
        use rand::Rng;
        let n = train.len();
        let mut lo = [f64::INFINITY; FEATURES];
        let mut hi = [f64::NEG_INFINITY; FEATURES];
        let mut rows: Vec<[f64; FEATURES]> = Vec::with_capacity(n);
        for t in 0..n {
            let row = tree_features(t as f64);
            for f in 0..FEATURES {
                lo[f] = lo[f].min(row[f]);
                hi[f] = hi[f].max(row[f]);
            }
            rows.push(row);
        }
        let mut inv_width = [0.0; FEATURES];
        for f in 0..FEATURES {
            inv_width[f] = if hi[f] > lo[f] { BINS as f64 / (hi[f] - lo[f]) } else { 0.0 };
        }
        // One u8 bin per (sample, feature), interleaved per sample.
        let mut bins: Vec<u8> = Vec::with_capacity(n * FEATURES);
        for row in &rows {
            for f in 0..FEATURES {
                bins.push((((row[f] - lo[f]) * inv_width[f]) as usize).min(BINS - 1) as u8);
            }
        }
        let mut trees = Vec::with_capacity(TREES);
        let mut samples: Vec<u32> = vec![0; n];
        for _ in 0..TREES {
            for s in &mut samples {
                *s = rng.gen_range(0..n) as u32;
            }
            let mut nodes = Vec::new();
            build_node(&bins, train, &mut samples, 0, &mut nodes);
            trees.push(nodes);
        }
        Forest { trees, lo, inv_width }
    }

    fn predict(&self, feats: [f64; FEATURES]) -> f64 {
        let mut bins = [0u8; FEATURES];
        for f in 0..FEATURES {
            let b = ((feats[f] - self.lo[f]) * self.inv_width[f]).floor();
            bins[f] = (b.max(0.0) as usize).min(BINS - 1) as u8;
        }
        let mut acc = 0.0;
        for nodes in &self.trees {
            let mut at = 0usize;
            loop {
                let node = &nodes[at];
                match node.children {
                    Some((left, right)) => {
                        at = if bins[node.feature] <= node.bin { left } else { right };
                    }
                    None => {
                        acc += node.value;
                        break;
                    }
                }
            }
        }
        acc / self.trees.len() as f64
    }
}

/// Grow one node over `samples` (an index arena partitioned in place).
fn build_node(
    bins: &[u8],
    y: &[f64],
    samples: &mut [u32],
    depth: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let id = nodes.len();
    let n = samples.len() as f64;
    nodes.push(Node { feature: 0, bin: 0, children: None, value: 0.0 });
    // Fused pass: node sum plus all per-feature histograms at once.
    let mut sum = 0.0f64;
    let mut counts = [[0u32; BINS]; FEATURES];
    let mut sums = [[0.0f64; BINS]; FEATURES];
    for &i in samples.iter() {
        let yi = y[i as usize];
        sum += yi;
        let row = &bins[i as usize * FEATURES..i as usize * FEATURES + FEATURES];
        for (f, &b) in row.iter().enumerate() {
            counts[f][b as usize] += 1;
            sums[f][b as usize] += yi;
        }
    }
    nodes[id].value = sum / n;
    if depth >= MAX_DEPTH || samples.len() < 4 {
        return id;
    }
    let mut best: Option<(usize, u8, f64)> = None; // (feature, bin, gain)
    let base_score = sum * sum / n;
    for f in 0..FEATURES {
        let mut nl = 0u32;
        let mut sl = 0.0;
        for b in 0..BINS - 1 {
            nl += counts[f][b];
            sl += sums[f][b];
            if nl == 0 || nl as usize == samples.len() {
                continue;
            }
            let nr = n - nl as f64;
            let sr = sum - sl;
            let gain = sl * sl / nl as f64 + sr * sr / nr - base_score;
            if gain > best.map_or(1e-12, |b| b.2) {
                best = Some((f, b as u8, gain));
            }
        }
    }
    if let Some((feature, bin, _)) = best {
        // Stable in-place partition keeps the recursion allocation-free.
        let mut mid = 0usize;
        for i in 0..samples.len() {
            if bins[samples[i] as usize * FEATURES + feature] <= bin {
                samples.swap(mid, i);
                mid += 1;
            }
        }
        if mid == 0 || mid == samples.len() {
            return id;
        }
        let (left_slice, right_slice) = samples.split_at_mut(mid);
        let left = build_node(bins, y, left_slice, depth + 1, nodes);
        let right = build_node(bins, y, right_slice, depth + 1, nodes);
        nodes[id].feature = feature;
        nodes[id].bin = bin;
        nodes[id].children = Some((left, right));
    }
    id
}

/// The Task-2 EC space: humidity x updraft x temperature x three noise knobs.
pub fn space() -> EcSpace {
    EcSpace::new(vec![
        Factor::nums("q_S", &[0.01, 0.02, 0.04]),
        Factor::nums("w", &[0.01, 0.1]),
        Factor::nums("T", &[253.0, 261.0, 269.0, 277.0, 285.0, 293.0, 301.0, 309.0, 317.0, 325.0]),
        Factor::nums("sigma_W", &[0.01, 0.03]),
        Factor::nums("sigma_T", &[0.5, 1.0, 1.5, 2.0]),
        Factor::nums("sigma_R", &[0.1, 0.2, 0.3, 0.4, 0.5]),
    ])
    .expect("task 2 space is valid")
}

/// Decode one config of [`space`] into simulator inputs.
pub fn config_from(space: &EcSpace, cfg: &crate::ec::Config) -> RainConfig {
    let num = |k: usize| space.value(cfg, k).as_num().unwrap();
    RainConfig {
        humidity: num(0),
        updraft: num(1),
        temperature: num(2),
        airflow_noise: num(3),
        temp_noise: num(4),
        obs_noise: num(5),
    }
}
