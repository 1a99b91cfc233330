//! Quasi-experimental methods: non-randomized controlled trials on fixed
//! contiguous partitions (`qe_nrct`) and intervention staggering
//! (`qe_stagger`).

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::ec::EcSpace;
use crate::stats::{estimate_from, Estimate};
use crate::table::ResultTable;

use super::{sampling::eva, MethodError};

/// The fixed config partition evaluated for one object.
///
/// Energy task: the three-module bucket splits into halves for the first two
/// objects and the four-module bucket into halves for the last two. Games
/// task: contiguous (round-count, noise) blocks, pairwise disjoint.
pub fn nrct_partition(task: u8, space: &EcSpace, object: usize) -> Result<Vec<usize>, MethodError> {
    match task {
        4 => {
            let pattern_pos =
                space.factor_index("M").ok_or_else(|| MethodError::UnknownFactor("M".into()))?;
            let bucket = |pattern_index: usize| -> Vec<usize> {
                (0..space.size())
                    .filter(|&o| {
                        space.config_at(o).unwrap().indices[pattern_pos] == pattern_index
                    })
                    .collect()
            };
            let (bucket_index, take_first) = match object {
                0 => (1, true),  // three-module bucket, first half
                1 => (1, false), // three-module bucket, second half
                2 => (3, true),  // four-module bucket, first half
                3 => (3, false),
                other => {
                    return Err(MethodError::BadSpec(format!(
                        "task 4 defines partitions for objects 0..4, got {other}"
                    )))
                }
            };
            let ordinals = bucket(bucket_index);
            let half = ordinals.len() / 2;
            Ok(if take_first { ordinals[..half].to_vec() } else { ordinals[half..].to_vec() })
        }
        6 => {
            let n_pos =
                space.factor_index("n").ok_or_else(|| MethodError::UnknownFactor("n".into()))?;
            let eps_pos = space
                .factor_index("epsilon")
                .ok_or_else(|| MethodError::UnknownFactor("epsilon".into()))?;
            // (short rounds?, noise band) per object, in table object order.
            let (short_rounds, band) = match object {
                0 => (true, 1),  // always_defect: n in {2,5}, eps in [0.2, 0.4)
                1 => (false, 1), // always_cooperate
                2 => (false, 0), // tit_for_tat: eps in [0.0, 0.2)
                3 => (false, 2), // generous_tft: eps in [0.4, 1.0]
                4 => (true, 2),  // mixed
                5 => (true, 0),  // consequence
                other => {
                    return Err(MethodError::BadSpec(format!(
                        "task 6 defines partitions for objects 0..6, got {other}"
                    )))
                }
            };
            Ok((0..space.size())
                .filter(|&o| {
                    let cfg = space.config_at(o).unwrap();
                    let rounds = space.value(&cfg, n_pos).as_num().unwrap();
                    let eps = space.value(&cfg, eps_pos).as_num().unwrap();
                    let rounds_ok = if short_rounds { rounds <= 5.0 } else { rounds >= 10.0 };
                    let eps_ok = match band {
                        0 => (0.0..0.2).contains(&eps),
                        1 => (0.2..0.4).contains(&eps),
                        _ => eps >= 0.4,
                    };
                    rounds_ok && eps_ok
                })
                .collect())
        }
        task => Err(MethodError::NotApplicable { method: "qe_nrct".into(), task }),
    }
}

/// Estimate over the object's fixed partition, sub-sampled uniformly when the
/// budget is below the partition size.
pub fn nrct(
    table: &ResultTable,
    object: usize,
    index: usize,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Estimate, MethodError> {
    table.require_complete()?;
    let mut partition = nrct_partition(table.task(), table.space(), object)?;
    if budget == 0 {
        return Err(MethodError::BudgetOutOfRange { budget, max: partition.len() });
    }
    let used = if budget < partition.len() {
        for i in 0..budget {
            let j = rng.gen_range(i..partition.len());
            partition.swap(i, j);
        }
        &partition[..budget]
    } else {
        &partition[..]
    };
    let values: Vec<f64> =
        used.iter().map(|&o| table.rep_mean(o, object, index)).collect();
    Ok(estimate_from(&values, (used.len() as u32 * table.reps()) as u64)?)
}

/// Intervention staggering: the sampling pipeline of `eva` run against the
/// staggered companion table, whose per-object results come from that
/// object's time prefix. Ground truth stays on the primary table.
pub fn stagger(
    primary: &ResultTable,
    staggered: &ResultTable,
    object: usize,
    index: usize,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Estimate, MethodError> {
    if primary.task() != 2 || staggered.task() != 2 || primary.size() != staggered.size() {
        return Err(MethodError::MissingStaggered);
    }
    eva(staggered, object, index, budget, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::table::ResultTable;
    use crate::tasks;

    #[test]
    fn energy_partitions_are_sixty_materials_each() {
        let space = tasks::energy::space();
        let mut seen = vec![false; space.size()];
        for object in 0..4 {
            let part = nrct_partition(4, &space, object).unwrap();
            assert_eq!(part.len(), 60, "object {object}");
            for o in part {
                assert!(!seen[o], "partitions overlap at ordinal {o}");
                seen[o] = true;
            }
        }
    }

    #[test]
    fn games_partitions_tile_the_space() {
        let space = tasks::games::space();
        let mut seen = vec![false; space.size()];
        let mut total = 0;
        for object in 0..6 {
            let part = nrct_partition(6, &space, object).unwrap();
            assert_eq!(part.len(), 720, "object {object}");
            total += part.len();
            for o in part {
                assert!(!seen[o], "partitions overlap at ordinal {o}");
                seen[o] = true;
            }
        }
        assert_eq!(total, space.size());
    }

    #[test]
    fn tit_for_tat_partition_excludes_high_noise() {
        let space = tasks::games::space();
        let eps_pos = space.factor_index("epsilon").unwrap();
        for o in nrct_partition(6, &space, 2).unwrap() {
            let cfg = space.config_at(o).unwrap();
            let eps = space.value(&cfg, eps_pos).as_num().unwrap();
            assert!(eps < 0.2, "ordinal {o} has eps {eps}");
        }
    }

    #[test]
    fn nrct_caps_the_budget_at_the_partition() {
        let space = tasks::games::space();
        let table = ResultTable::from_fn(6, space, &["a", "b", "c", "d", "e", "f"], &["i"], 1, |c, _, _, _| {
            c as f64
        });
        table.reset_reads();
        let mut rng = stream(0, "nrct", 0);
        let small = nrct(&table, 0, 0, 30, &mut rng).unwrap();
        assert_eq!(small.n, 30);
        assert_eq!(small.cost, 30);
        assert_eq!(table.reads(), 30);
        let capped = nrct(&table, 0, 0, 100_000, &mut stream(0, "nrct", 1)).unwrap();
        assert_eq!(capped.n, 720);
        assert_eq!(capped.cost, 720);
    }

    #[test]
    fn stagger_requires_matching_tables() {
        let space = tasks::games::space();
        let t = ResultTable::from_fn(6, space, &["a"], &["i"], 1, |_, _, _, _| 0.0);
        let mut rng = stream(0, "st", 0);
        assert!(matches!(
            stagger(&t, &t, 0, 0, 5, &mut rng),
            Err(MethodError::MissingStaggered)
        ));
    }
}
