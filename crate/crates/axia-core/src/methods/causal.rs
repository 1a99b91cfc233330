//! Causal-inference methods: exact adjustment over the full space
//! (`ci_do`) and masked structural-model estimation (`ci_scm`).

use crate::ec::FactorDistribution;
use crate::stats::Estimate;
use crate::table::{population_values, ResultTable};

use super::MethodError;

/// Exact adjustment with uniform weighting: reads the whole table once and is
/// bit-identical to the ground-truth summary by construction.
pub fn do_calculus(table: &ResultTable, object: usize, index: usize) -> Result<Estimate, MethodError> {
    table.require_complete()?;
    let values = population_values(table, object, index);
    let (mean, std) = crate::stats::kahan_mean_std(&values);
    Ok(Estimate {
        mean,
        std,
        n: values.len() as u64,
        cost: (table.size() as u32 * table.reps()) as u64,
    })
}

/// Masked structural-model estimate.
///
/// On the chaos task the masked dimension's do-expression marginalizes every
/// factor under the declared distribution, so the estimate is the
/// distribution-weighted mean over the full space (equal to exact adjustment
/// when the distribution is uniform). On the rainfall task the causal diagram
/// collapses the conditional to the reference noise configuration, so only
/// the slice with every noise knob at its reference value is read.
pub fn scm_masked(
    table: &ResultTable,
    mask: &str,
    dist: &FactorDistribution,
    object: usize,
    index: usize,
) -> Result<Estimate, MethodError> {
    table.require_complete()?;
    dist.check_shape(table.space())?;
    let space = table.space();
    let maskable: &[&str] = match table.task() {
        1 => &["abc", "xyz"],
        2 => &["sigma_W", "sigma_T", "sigma_R"],
        task => {
            return Err(MethodError::NotApplicable { method: "ci_scm".into(), task });
        }
    };
    if !maskable.contains(&mask) {
        return Err(MethodError::UnknownFactor(format!(
            "`{mask}` is not maskable on task {} (expected one of {maskable:?})",
            table.task()
        )));
    }
    let mut weighted: Vec<(f64, f64)> = Vec::new();
    match table.task() {
        1 => {
            for ordinal in 0..space.size() {
                let cfg = space.config_at(ordinal).unwrap();
                weighted.push((dist.joint_weight(&cfg), table.rep_mean(ordinal, object, index)));
            }
        }
        _ => {
            // Conditioning slice: every noise factor at its reference (first)
            // value; the remaining factors marginalize under `dist`.
            let noise_positions: Vec<usize> = ["sigma_W", "sigma_T", "sigma_R"]
                .iter()
                .map(|n| space.factor_index(n).expect("task 2 noise factors"))
                .collect();
            for ordinal in 0..space.size() {
                let cfg = space.config_at(ordinal).unwrap();
                if noise_positions.iter().any(|&p| cfg.indices[p] != 0) {
                    continue;
                }
                let w: f64 = cfg
                    .indices
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| !noise_positions.contains(p))
                    .map(|(p, &i)| dist.weights[p][i])
                    .product();
                weighted.push((w, table.rep_mean(ordinal, object, index)));
            }
        }
    }
    let total_w: f64 = weighted.iter().map(|(w, _)| w).sum();
    if total_w <= 0.0 {
        return Err(MethodError::BadSpec("distribution has zero mass on the slice".into()));
    }
    let mean: f64 = weighted.iter().map(|(w, v)| w * v).sum::<f64>() / total_w;
    let var: f64 =
        weighted.iter().map(|(w, v)| w * (v - mean) * (v - mean)).sum::<f64>() / total_w;
    let n = weighted.len() as u64;
    Ok(Estimate { mean, std: var.sqrt(), n, cost: n * table.reps() as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ec::{EcSpace, Factor, FactorDistribution};
    use crate::table::ResultTable;

    fn chaos_shaped_table() -> ResultTable {
        // Tiny table with task id 1 and factor names matching the chaos task.
        let space = EcSpace::new(vec![
            Factor::nums("p", &[0.01, 0.005]),
            Factor::nums("abc", &[0.0, 1.0, 2.0]),
            Factor::nums("N", &[200.0, 400.0]),
            Factor::nums("xyz", &[0.0, 1.0]),
        ])
        .unwrap();
        ResultTable::from_fn(1, space, &["lorenz", "roessler"], &["lyapunov", "ks"], 1, |c, o, i, _| {
            (c as f64).sin() + o as f64 + 3.0 * i as f64
        })
    }

    #[test]
    fn do_calculus_matches_population_summary_bit_exactly() {
        let t = chaos_shaped_table();
        let est = do_calculus(&t, 1, 0).unwrap();
        let values = population_values(&t, 1, 0);
        let (mean, std) = crate::stats::kahan_mean_std(&values);
        assert_eq!(est.mean, mean);
        assert_eq!(est.std, std);
        assert_eq!(est.cost, t.size() as u64);
        assert_eq!(est.n, t.size() as u64);
    }

    #[test]
    fn do_calculus_cost_equals_reads() {
        let t = chaos_shaped_table();
        t.reset_reads();
        let est = do_calculus(&t, 0, 1).unwrap();
        assert_eq!(est.cost, t.reads());
    }

    #[test]
    fn scm_with_uniform_distribution_reduces_to_exact_adjustment() {
        let t = chaos_shaped_table();
        let dist = FactorDistribution::uniform(t.space());
        let scm = scm_masked(&t, "abc", &dist, 0, 0).unwrap();
        let exact = do_calculus(&t, 0, 0).unwrap();
        assert!((scm.mean - exact.mean).abs() < 1e-12);
        assert_eq!(scm.cost, exact.cost);
    }

    #[test]
    fn scm_rejects_unmaskable_factor() {
        let t = chaos_shaped_table();
        let dist = FactorDistribution::uniform(t.space());
        assert!(matches!(
            scm_masked(&t, "p", &dist, 0, 0),
            Err(MethodError::UnknownFactor(_))
        ));
    }

    fn rainfall_shaped_table() -> ResultTable {
        let space = EcSpace::new(vec![
            Factor::nums("q_S", &[0.01, 0.02, 0.04]),
            Factor::nums("w", &[0.01, 0.1]),
            Factor::nums("T", &[253.0, 261.0]),
            Factor::nums("sigma_W", &[0.01, 0.03]),
            Factor::nums("sigma_T", &[0.5, 1.0]),
            Factor::nums("sigma_R", &[0.1, 0.2]),
        ])
        .unwrap();
        ResultTable::from_fn(2, space, &["linear"], &["mse"], 1, |c, _, _, _| c as f64)
    }

    #[test]
    fn rainfall_mask_collapses_to_the_reference_slice() {
        let t = rainfall_shaped_table();
        let dist = FactorDistribution::uniform(t.space());
        t.reset_reads();
        let est = scm_masked(&t, "sigma_R", &dist, 0, 0).unwrap();
        // Slice: 3 * 2 * 2 = 12 of the 96 configs.
        assert_eq!(est.n, 12);
        assert_eq!(est.cost, 12);
        assert_eq!(t.reads(), 12);
        // Weighted mean over the slice only; slice ordinals are those whose
        // noise digits are all zero, i.e. ordinal % 8 == 0 in this layout.
        let want: f64 = (0..96).filter(|o| o % 8 == 0).map(|o| o as f64).sum::<f64>() / 12.0;
        assert!((est.mean - want).abs() < 1e-12);
    }
}
