//! Factorial design-of-experiments methods.
//!
//! Per factor, the listed values split into contiguous blocks (two, or `l`),
//! the lower-indexed block absorbing any remainder first. One representative
//! per block is drawn uniformly by the caller's seed and the representatives
//! are fully crossed. The fractional variant keeps the runs whose trailing
//! `p` factor signs each equal the product of the leading `k-p` signs, which
//! yields exactly `2^(k-p)` runs contained in the full factorial built from
//! the same representatives.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::ec::{Config, EcSpace};
use crate::stats::{estimate_from, Estimate};
use crate::table::ResultTable;

use super::MethodError;

/// Which factorial family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoeKind {
    /// Full two-level factorial, `2^k` runs.
    TwoLevel,
    /// `2^(k-p)` fractional factorial.
    Fractional(u32),
    /// `l^k` multi-level factorial.
    MultiLevel(u32),
}

/// A concrete run list over feasible configs.
#[derive(Debug, Clone)]
pub struct DoeDesign {
    pub runs: Vec<Config>,
}

/// Run count of a design on this space, validating splittability.
pub fn design_runs(space: &EcSpace, kind: DoeKind) -> Result<usize, MethodError> {
    let k = space.factors().len() as u32;
    let levels = match kind {
        DoeKind::TwoLevel => 2u32,
        DoeKind::Fractional(p) => {
            if p == 0 || p >= k {
                return Err(MethodError::BadSpec(format!(
                    "fraction p={p} out of range for k={k}"
                )));
            }
            2
        }
        DoeKind::MultiLevel(l) => l,
    };
    for f in space.factors() {
        if f.cardinality() < levels as usize {
            return Err(MethodError::FactorTooSmall {
                factor: f.name.clone(),
                needed: levels as usize,
            });
        }
    }
    let runs = match kind {
        DoeKind::TwoLevel => 1usize << k,
        DoeKind::Fractional(p) => 1usize << (k - p),
        DoeKind::MultiLevel(l) => (l as usize).pow(k),
    };
    Ok(runs)
}

/// Draw one design: block representatives per factor, then the crossing.
pub fn doe_design(
    space: &EcSpace,
    kind: DoeKind,
    rng: &mut ChaCha8Rng,
) -> Result<DoeDesign, MethodError> {
    design_runs(space, kind)?;
    let levels = match kind {
        DoeKind::TwoLevel | DoeKind::Fractional(_) => 2usize,
        DoeKind::MultiLevel(l) => l as usize,
    };
    let k = space.factors().len();
    // Representative value index per (factor, block).
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(k);
    for f in space.factors() {
        let m = f.cardinality();
        let base = m / levels;
        let extra = m % levels;
        let mut cursor = 0usize;
        let mut choices = Vec::with_capacity(levels);
        for block in 0..levels {
            let len = base + usize::from(block < extra);
            choices.push(cursor + rng.gen_range(0..len));
            cursor += len;
        }
        reps.push(choices);
    }
    let mut runs = Vec::new();
    let total = levels.pow(k as u32);
    let mut digits = vec![0usize; k];
    for code in 0..total {
        let mut rest = code;
        for slot in digits.iter_mut().rev() {
            *slot = rest % levels;
            rest /= levels;
        }
        if let DoeKind::Fractional(p) = kind {
            // Sign of a two-level digit: low block -1, high block +1.
            let lead_negatives =
                digits[..k - p as usize].iter().filter(|&&d| d == 0).count();
            let lead_sign_positive = lead_negatives % 2 == 0;
            let keep = digits[k - p as usize..]
                .iter()
                .all(|&d| (d == 1) == lead_sign_positive);
            if !keep {
                continue;
            }
        }
        let indices: Vec<usize> = digits.iter().enumerate().map(|(f, &d)| reps[f][d]).collect();
        let config = Config::new(indices);
        if space.ordinal_of(&config).is_err() {
            return Err(MethodError::BadSpec(
                "design crossing hits an infeasible config".into(),
            ));
        }
        runs.push(config);
    }
    Ok(DoeDesign { runs })
}

/// Mean/std over the design runs, each run averaged over its first `reps`
/// stored repetitions.
pub fn doe_estimate(
    table: &ResultTable,
    object: usize,
    index: usize,
    design: &DoeDesign,
    reps: u32,
) -> Result<Estimate, MethodError> {
    table.require_complete()?;
    if reps == 0 || reps > table.reps() {
        return Err(MethodError::RepsExceeded { requested: reps, available: table.reps() });
    }
    let values: Vec<f64> = design
        .runs
        .iter()
        .map(|c| {
            let ordinal = table.space().ordinal_of(c).expect("design runs are feasible");
            let mut acc = 0.0;
            for rep in 0..reps {
                acc += table.value(ordinal, object, index, rep);
            }
            acc / reps as f64
        })
        .collect();
    Ok(estimate_from(&values, (design.runs.len() as u32 * reps) as u64)?)
}

/// Pool `q` independently drawn designs into one estimate; the accuracy-cost
/// curve of a DoE method walks along `q = 1, 2, 3, ...`, i.e. cost points at
/// multiples of the single-design cost.
pub fn doe_estimate_pooled(
    table: &ResultTable,
    object: usize,
    index: usize,
    kind: DoeKind,
    reps: u32,
    q: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Estimate, MethodError> {
    table.require_complete()?;
    if reps == 0 || reps > table.reps() {
        return Err(MethodError::RepsExceeded { requested: reps, available: table.reps() });
    }
    let mut values = Vec::new();
    let mut cost = 0u64;
    for _ in 0..q.max(1) {
        let design = doe_design(table.space(), kind, rng)?;
        for c in &design.runs {
            let ordinal = table.space().ordinal_of(c).expect("design runs are feasible");
            let mut acc = 0.0;
            for rep in 0..reps {
                acc += table.value(ordinal, object, index, rep);
            }
            values.push(acc / reps as f64);
        }
        cost += (design.runs.len() as u32 * reps) as u64;
    }
    Ok(estimate_from(&values, cost)?)
}
