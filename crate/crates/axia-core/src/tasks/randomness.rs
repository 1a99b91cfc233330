//! Task 5: logistic-map sum sequences probed by four classical randomness
//! tests.
//!
//! The sequences are fully deterministic, so a test is "correct" exactly when
//! it refuses to call them random. Each test reduces the real-valued sequence
//! to its classical statistic: frequency and runs binarize against the median,
//! the permutations test ranks overlapping length-3 windows (ties broken by
//! position), and birthday spacings buckets values into 2^10 bins and counts
//! duplicate spacings against a Poisson tail.

use crate::ec::{EcSpace, Factor};
use crate::special::{chi2_sf, erfc, poisson_sf_ge};

/// p-values below this declare the sequence non-random.
pub const DECLARE_THRESHOLD: f64 = 0.01;

/// Orbit clamp for the diverging negative-coefficient maps.
pub const ORBIT_CLAMP: f64 = 1e6;

/// Per-map offset added to the scalar initial value so the maps decorrelate.
pub const MAP_OFFSET: f64 = 0.013;

const BIRTHDAY_BINS: u64 = 1 << 10;

/// One Task-5 evaluation condition.
#[derive(Debug, Clone, Copy)]
pub struct LogisticConfig {
    /// Number of summed maps.
    pub maps: usize,
    /// Scalar initial value; map i starts at `init + (i-1)·0.013` wrapped
    /// into (0, 1).
    pub init: f64,
    /// Mapping coefficient r.
    pub coeff: f64,
    /// Output sequence length.
    pub len: usize,
}

/// The summed logistic sequence; element n is the n-th iterate summed over
/// maps (the initial values are not emitted).
pub fn logistic_sequence(cfg: &LogisticConfig) -> Vec<f64> {
    let mut states: Vec<f64> = (0..cfg.maps)
        .map(|i| {
            let v = cfg.init + i as f64 * MAP_OFFSET;
            let wrapped = v - v.floor();
            debug_assert!(wrapped > 0.0 && wrapped < 1.0, "offset init stays interior");
            wrapped
        })
        .collect();
    let mut out = Vec::with_capacity(cfg.len);
    for _ in 0..cfg.len {
        let mut sum = 0.0;
        for x in &mut states {
            *x = (cfg.coeff * *x * (1.0 - *x)).clamp(-ORBIT_CLAMP, ORBIT_CLAMP);
            sum += *x;
        }
        out.push(sum);
    }
    out
}

/// The four test objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandTest {
    Frequency,
    Runs,
    OverlappingPermutations,
    BirthdaySpacings,
}

impl RandTest {
    pub const ALL: [RandTest; 4] = [
        RandTest::Frequency,
        RandTest::Runs,
        RandTest::OverlappingPermutations,
        RandTest::BirthdaySpacings,
    ];

    pub fn id(self) -> &'static str {
        match self {
            RandTest::Frequency => "frequency",
            RandTest::Runs => "runs",
            RandTest::OverlappingPermutations => "overlapping_permutations",
            RandTest::BirthdaySpacings => "birthday_spacings",
        }
    }

    /// Minimum sequence length the statistic is defined for.
    pub fn min_len(self) -> usize {
        match self {
            RandTest::Frequency | RandTest::Runs => 8,
            RandTest::OverlappingPermutations => 15,
            RandTest::BirthdaySpacings => 16,
        }
    }
}

/// Outcome of one test on one sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestVerdict {
    pub p_value: f64,
    pub declared_random: bool,
    /// The sequence was below the test's minimum length.
    pub short: bool,
}

impl TestVerdict {
    fn from_p(p: f64) -> Self {
        let p = p.clamp(0.0, 1.0);
        TestVerdict { p_value: p, declared_random: p >= DECLARE_THRESHOLD, short: false }
    }

    fn short() -> Self {
        TestVerdict { p_value: 0.0, declared_random: false, short: true }
    }
}

pub fn run_test(test: RandTest, seq: &[f64]) -> TestVerdict {
    if seq.len() < test.min_len() {
        return TestVerdict::short();
    }
    let p = match test {
        RandTest::Frequency => frequency_p(seq),
        RandTest::Runs => runs_p(seq),
        RandTest::OverlappingPermutations => permutations_p(seq),
        RandTest::BirthdaySpacings => birthday_p(seq),
    };
    TestVerdict::from_p(p)
}

fn median(seq: &[f64]) -> f64 {
    let mut sorted = seq.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn bits_vs_median(seq: &[f64]) -> Vec<bool> {
    let m = median(seq);
    seq.iter().map(|&v| v >= m).collect()
}

fn frequency_p(seq: &[f64]) -> f64 {
    let bits = bits_vs_median(seq);
    let s: i64 = bits.iter().map(|&b| if b { 1 } else { -1 }).sum();
    let s_obs = s.abs() as f64 / (bits.len() as f64).sqrt();
    erfc(s_obs / std::f64::consts::SQRT_2)
}

fn runs_p(seq: &[f64]) -> f64 {
    let bits = bits_vs_median(seq);
    let n = bits.len() as f64;
    let ones = bits.iter().filter(|&&b| b).count() as f64;
    let zeros = n - ones;
    if ones == 0.0 || zeros == 0.0 {
        return 0.0;
    }
    let runs = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let mu = 2.0 * ones * zeros / n + 1.0;
    let var = 2.0 * ones * zeros * (2.0 * ones * zeros - n) / (n * n * (n - 1.0));
    if var <= 0.0 {
        return 0.0;
    }
    let z = (runs as f64 - mu) / var.sqrt();
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

fn permutations_p(seq: &[f64]) -> f64 {
    // Rank pattern of each overlapping length-3 window; ties resolve to the
    // earlier position, making the statistic total on constant stretches.
    let mut counts = [0u64; 6];
    for w in seq.windows(3) {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| w[a].total_cmp(&w[b]).then(a.cmp(&b)));
        let id = match order {
            [0, 1, 2] => 0,
            [0, 2, 1] => 1,
            [1, 0, 2] => 2,
            [1, 2, 0] => 3,
            [2, 0, 1] => 4,
            [2, 1, 0] => 5,
            _ => unreachable!(),
        };
        counts[id] += 1;
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / 6.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    chi2_sf(chi2, 5.0)
}

fn birthday_p(seq: &[f64]) -> f64 {
    let m = seq.len();
    let lo = seq.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = seq.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut days: Vec<u64> = if hi > lo {
        seq.iter()
            .map(|&v| ((((v - lo) / (hi - lo)) * BIRTHDAY_BINS as f64) as u64).min(BIRTHDAY_BINS - 1))
            .collect()
    } else {
        vec![0; m]
    };
    days.sort_unstable();
    let spacings: Vec<u64> = days.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sorted = spacings.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let duplicates = (spacings.len() - sorted.len()) as u64;
    // Classical intensity m^3/(4n), capped at (m-1)/4: the asymptotic formula
    // overshoots the spacing count itself once m grows past n^(1/3)-scale,
    // which would make even the all-duplicates extreme look unremarkable.
    let lambda = ((m as f64).powi(3) / (4.0 * BIRTHDAY_BINS as f64)).min((m as f64 - 1.0) / 4.0);
    poisson_sf_ge(duplicates, lambda)
}

/// Aggregate the two Task-5 indexes over a set of verdicts: `true_rate` is
/// the fraction declared non-random (the correct call for these sequences),
/// `avg_p` the mean p-value.
pub fn randomness_indexes(verdicts: &[TestVerdict]) -> (f64, f64) {
    assert!(!verdicts.is_empty());
    let n = verdicts.len() as f64;
    let correct = verdicts.iter().filter(|v| !v.declared_random).count() as f64;
    let p_sum: f64 = verdicts.iter().map(|v| v.p_value).sum();
    (correct / n, p_sum / n)
}

/// The Task-5 EC space: map count x initial value x coefficient x length.
pub fn space() -> EcSpace {
    EcSpace::new(vec![
        Factor::nums("N", &(1..=10).map(|i| i as f64).collect::<Vec<_>>()),
        Factor::nums("X0", &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]),
        Factor::nums("r", &[-1.8, -1.5, 3.6, 3.8]),
        Factor::nums("len", &[10.0, 20.0, 50.0, 100.0]),
    ])
    .expect("task 5 space is valid")
}

/// Decode one config of [`space`] into simulator inputs.
pub fn config_from(space: &EcSpace, cfg: &crate::ec::Config) -> LogisticConfig {
    LogisticConfig {
        maps: space.value(cfg, 0).as_num().unwrap() as usize,
        init: space.value(cfg, 1).as_num().unwrap(),
        coeff: space.value(cfg, 2).as_num().unwrap(),
        len: space.value(cfg, 3).as_num().unwrap() as usize,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn first_iterate_hand_value() {
        let cfg = LogisticConfig { maps: 1, init: 0.5, coeff: 3.6, len: 3 };
        let seq = logistic_sequence(&cfg);
        assert!((seq[0] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_yields_constant_sequence() {
        // The interior fixed point 1 - 1/r is repelling (|f'| = r - 2 > 1),
        // so float rounding drifts away exponentially; ten iterates keep the
        // amplified rounding well under the tolerance.
        let r = 3.6;
        let cfg = LogisticConfig { maps: 1, init: 1.0 - 1.0 / r, coeff: r, len: 10 };
        let seq = logistic_sequence(&cfg);
        for v in &seq {
            assert!((v - seq[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn sequences_are_deterministic() {
        let cfg = LogisticConfig { maps: 7, init: 0.3, coeff: 3.8, len: 100 };
        assert_eq!(logistic_sequence(&cfg), logistic_sequence(&cfg));
    }

    #[test]
    fn negative_coefficient_orbits_stay_clamped() {
        let cfg = LogisticConfig { maps: 2, init: 0.9, coeff: -1.8, len: 100 };
        let seq = logistic_sequence(&cfg);
        assert!(seq.iter().all(|v| v.is_finite() && v.abs() <= 2.0 * ORBIT_CLAMP));
    }

    #[test]
    fn frequency_on_balanced_alternating_stream_is_one() {
        let seq: Vec<f64> = (0..64).map(|i| (i % 2) as f64).collect();
        let v = run_test(RandTest::Frequency, &seq);
        assert_eq!(v.p_value, 1.0);
        assert!(v.declared_random);
    }

    #[test]
    fn runs_on_alternating_stream_is_near_zero() {
        let seq: Vec<f64> = (0..64).map(|i| (i % 2) as f64).collect();
        let v = run_test(RandTest::Runs, &seq);
        assert!(v.p_value < 1e-10, "p {}", v.p_value);
        assert!(!v.declared_random);
    }

    #[test]
    fn every_test_rejects_a_constant_sequence() {
        let seq = vec![0.25; 64];
        for t in RandTest::ALL {
            let v = run_test(t, &seq);
            assert!(!v.declared_random, "{t:?} p={}", v.p_value);
        }
    }

    #[test]
    fn short_sequences_are_flagged() {
        let seq = vec![0.1; 12];
        let v = run_test(RandTest::BirthdaySpacings, &seq);
        assert!(v.short);
        assert_eq!(v.p_value, 0.0);
        assert!(!v.declared_random);
        assert!(!run_test(RandTest::Frequency, &seq).short);
    }

    #[test]
    fn index_aggregation_counts() {
        let declared = TestVerdict { p_value: 0.5, declared_random: true, short: false };
        let rejected = TestVerdict { p_value: 0.0, declared_random: false, short: false };
        let (tr, ap) = randomness_indexes(&[declared, rejected, declared, rejected]);
        assert_eq!(tr, 0.5);
        assert_eq!(ap, 0.25);
        let (tr, ap) = randomness_indexes(&[rejected, rejected]);
        assert_eq!((tr, ap), (1.0, 0.0));
    }

    #[test]
    fn raising_the_threshold_never_lowers_true_rate() {
        let sp = space();
        let verdict_at = |threshold: f64| {
            let mut rejected = 0usize;
            for o in (0..sp.size()).step_by(37) {
                let cfg = config_from(&sp, &sp.config_at(o).unwrap());
                let seq = logistic_sequence(&cfg);
                for t in RandTest::ALL {
                    let v = run_test(t, &seq);
                    if v.p_value < threshold {
                        rejected += 1;
                    }
                }
            }
            rejected
        };
        assert!(verdict_at(0.05) >= verdict_at(0.01));
        assert!(verdict_at(0.2) >= verdict_at(0.05));
    }

    #[test]
    fn task_space_has_1440_configs() {
        assert_eq!(space().size(), 1440);
    }

    proptest! {
        #[test]
        fn p_values_are_probabilities(values in proptest::collection::vec(-10.0f64..10.0, 4..80)) {
            for t in RandTest::ALL {
                let v = run_test(t, &values);
                prop_assert!((0.0..=1.0).contains(&v.p_value), "{:?} {}", t, v.p_value);
            }
        }
    }
}
