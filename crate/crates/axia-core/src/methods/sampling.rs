//! Sampling-based methods: entire-space random sampling (`eva`), real-world
//! weighted observation (`obs`), and randomized controlled trials (`rct`).

use rand_chacha::ChaCha8Rng;

use crate::ec::FactorDistribution;
use crate::stats::{confidence_interval, estimate_from, CiRule, Estimate, Interval};
use crate::table::ResultTable;

use super::MethodError;

/// Simple random sampling without replacement over the config space; each
/// sampled config is read at every stored repetition and averaged.
pub fn eva(
    table: &ResultTable,
    object: usize,
    index: usize,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Estimate, MethodError> {
    table.require_complete()?;
    let size = table.size();
    if budget == 0 || budget > size {
        return Err(MethodError::BudgetOutOfRange { budget, max: size });
    }
    let configs = table.space().sample_uniform_without_replacement(budget, rng)?;
    let values: Vec<f64> = configs
        .iter()
        .map(|c| table.rep_mean(table.space().ordinal_of(c).unwrap(), object, index))
        .collect();
    Ok(estimate_from(&values, (budget as u32 * table.reps()) as u64)?)
}

/// Weighted sampling with replacement under the task's real-world factor
/// distribution. Duplicated draws re-read the table and are charged as such.
pub fn obs(
    table: &ResultTable,
    object: usize,
    index: usize,
    budget: usize,
    dist: &FactorDistribution,
    rng: &mut ChaCha8Rng,
) -> Result<Estimate, MethodError> {
    table.require_complete()?;
    if budget == 0 {
        return Err(MethodError::BudgetOutOfRange { budget, max: table.size() });
    }
    let draws = table.space().sample_weighted(dist, budget, rng)?;
    let values: Vec<f64> = draws
        .iter()
        .map(|c| table.rep_mean(table.space().ordinal_of(c).unwrap(), object, index))
        .collect();
    Ok(estimate_from(&values, (budget as u32 * table.reps()) as u64)?)
}

/// Outcome of one randomized controlled trial over all objects.
#[derive(Debug, Clone)]
pub struct RctOutcome {
    /// Per-object estimates, in table object order.
    pub estimates: Vec<Estimate>,
    /// Zero-centred difference intervals for each object pair (i, j), i < j.
    pub differences: Vec<(usize, usize, Interval)>,
}

/// Disjoint uniform config subsets per object: one shared draw without
/// replacement is split into consecutive per-object chunks, so no config is
/// evaluated for two objects.
pub fn rct(
    table: &ResultTable,
    index: usize,
    budget_per_object: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RctOutcome, MethodError> {
    rct_with_level(table, index, budget_per_object, 0.95, CiRule::Paper, rng)
}

pub fn rct_with_level(
    table: &ResultTable,
    index: usize,
    budget_per_object: usize,
    level: f64,
    rule: CiRule,
    rng: &mut ChaCha8Rng,
) -> Result<RctOutcome, MethodError> {
    table.require_complete()?;
    let objects = table.objects().len();
    let total = budget_per_object * objects;
    if budget_per_object == 0 || total > table.size() {
        return Err(MethodError::BudgetOutOfRange {
            budget: budget_per_object,
            max: table.size() / objects,
        });
    }
    let configs = table.space().sample_uniform_without_replacement(total, rng)?;
    let mut estimates = Vec::with_capacity(objects);
    let mut samples: Vec<Vec<f64>> = Vec::with_capacity(objects);
    for (object, chunk) in configs.chunks(budget_per_object).enumerate() {
        let values: Vec<f64> = chunk
            .iter()
            .map(|c| table.rep_mean(table.space().ordinal_of(c).unwrap(), object, index))
            .collect();
        estimates.push(estimate_from(&values, (budget_per_object as u32 * table.reps()) as u64)?);
        samples.push(values);
    }
    let mut differences = Vec::new();
    for i in 0..objects {
        for j in i + 1..objects {
            differences.push((i, j, difference_interval(&estimates[i], &estimates[j], level, rule)));
        }
    }
    Ok(RctOutcome { estimates, differences })
}

/// Interval on the mean difference of two estimates: pooled standard error
/// with the quantile rule applied at the smaller sample size.
pub fn difference_interval(a: &Estimate, b: &Estimate, level: f64, rule: CiRule) -> Interval {
    let diff = a.mean - b.mean;
    let se = (a.std * a.std / a.n as f64 + b.std * b.std / b.n as f64).sqrt();
    let n = a.n.min(b.n);
    // Reuse the single-sample quantile rule by phrasing the difference as an
    // estimate with the pooled spread.
    let pooled = Estimate { mean: diff, std: se * (n as f64).sqrt(), n, cost: a.cost + b.cost };
    confidence_interval(&pooled, level, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ec::{EcSpace, Factor};
    use crate::rng::stream;
    use crate::table::ResultTable;

    fn grid_table(size: usize) -> ResultTable {
        let space =
            EcSpace::new(vec![Factor::nums("x", &(0..size).map(|i| i as f64).collect::<Vec<_>>())])
                .unwrap();
        ResultTable::from_fn(1, space, &["lorenz", "roessler"], &["lyapunov", "ks"], 1, |c, o, i, _| {
            c as f64 + 100.0 * o as f64 + 10000.0 * i as f64
        })
    }

    #[test]
    fn eva_full_budget_reproduces_the_population_mean() {
        let table = grid_table(64);
        let mut rng = stream(0, "t", 0);
        let est = eva(&table, 1, 0, 64, &mut rng).unwrap();
        let want = (0..64).map(|c| c as f64 + 100.0).sum::<f64>() / 64.0;
        assert!((est.mean - want).abs() < 1e-12);
        assert_eq!(est.cost, 64);
        assert_eq!(est.n, 64);
    }

    #[test]
    fn eva_cost_matches_reads() {
        let table = grid_table(50);
        table.reset_reads();
        let mut rng = stream(1, "t", 0);
        let est = eva(&table, 0, 0, 20, &mut rng).unwrap();
        assert_eq!(est.cost, table.reads());
    }

    #[test]
    fn eva_rejects_oversized_budget() {
        let table = grid_table(10);
        let mut rng = stream(0, "t", 0);
        assert!(matches!(
            eva(&table, 0, 0, 11, &mut rng),
            Err(MethodError::BudgetOutOfRange { .. })
        ));
    }

    #[test]
    fn obs_point_mass_pins_the_estimate() {
        let table = grid_table(8);
        let mut weights = vec![0.0; 8];
        weights[3] = 1.0;
        let dist = FactorDistribution { family: crate::ec::DistFamily::Custom, weights: vec![weights] };
        let mut rng = stream(2, "t", 0);
        let est = obs(&table, 0, 0, 25, &dist, &mut rng).unwrap();
        assert_eq!(est.mean, 3.0);
        assert_eq!(est.std, 0.0);
        assert_eq!(est.cost, 25);
    }

    #[test]
    fn obs_uniform_matches_eva_in_expectation() {
        let table = grid_table(16);
        let dist = FactorDistribution::uniform(table.space());
        let mut obs_mean = 0.0;
        let mut eva_mean = 0.0;
        let reps = 200;
        for seed in 0..reps {
            let mut rng = stream(seed, "obs-vs-eva", 0);
            obs_mean += obs(&table, 0, 0, 8, &dist, &mut rng).unwrap().mean;
            let mut rng = stream(seed, "obs-vs-eva", 1);
            eva_mean += eva(&table, 0, 0, 8, &mut rng).unwrap().mean;
        }
        obs_mean /= reps as f64;
        eva_mean /= reps as f64;
        // Both estimate the same population mean (7.5); Monte-Carlo slack.
        assert!((obs_mean - eva_mean).abs() < 0.5, "{obs_mean} vs {eva_mean}");
    }

    #[test]
    fn rct_chunks_are_disjoint_and_exhaustive_when_divisible() {
        let table = grid_table(64);
        table.reset_reads();
        let mut rng = stream(3, "t", 0);
        let out = rct(&table, 0, 32, &mut rng).unwrap();
        assert_eq!(out.estimates.len(), 2);
        // 2 objects x 32 configs = the whole space: disjointness means the
        // union of both samples reads every config exactly once.
        assert_eq!(table.reads(), 64);
        let total_cost: u64 = out.estimates.iter().map(|e| e.cost).sum();
        assert_eq!(total_cost, table.reads());
    }

    #[test]
    fn rct_rejects_budgets_beyond_the_partition() {
        let table = grid_table(10);
        let mut rng = stream(3, "t", 0);
        assert!(matches!(
            rct(&table, 0, 6, &mut rng),
            Err(MethodError::BudgetOutOfRange { .. })
        ));
    }

    #[test]
    fn identical_object_difference_contains_zero_most_of_the_time() {
        // Same-object comparison on disjoint samples: the zero point must sit
        // inside the difference interval in at least 90% of 50 repeats.
        let space = EcSpace::new(vec![Factor::nums(
            "x",
            &(0..200).map(|i| i as f64).collect::<Vec<_>>(),
        )])
        .unwrap();
        // Two objects with identical populations.
        let table = ResultTable::from_fn(1, space, &["a", "b"], &["i", "j"], 1, |c, _, i, _| {
            ((c * 37) % 101) as f64 + 10000.0 * i as f64
        });
        let mut hits = 0;
        for seed in 0..50 {
            let mut rng = stream(seed, "rct-diff", 0);
            let out = rct(&table, 0, 40, &mut rng).unwrap();
            let (_, _, interval) = out.differences[0];
            if interval.contains(0.0) {
                hits += 1;
            }
        }
        assert!(hits >= 45, "zero inside the interval in {hits}/50 repeats");
    }
}
