//! Ground truth, coverage-accuracy curves over budgets, C@0.9A, and the
//! per-method summary report.
//!
//! Accuracy of a method at a budget: run it K times with derived seeds, build
//! a confidence interval from each estimate, and report the fraction of
//! intervals containing the ground-truth mean. Budgets are quoted in
//! evaluations (config reads times repetitions); each method maps a budget to
//! the config samples it can afford, so design methods land on multiples of
//! their design cost and full-space methods collapse to a single cost point.

use serde::Serialize;
use serde_json::json;

use crate::methods::{self, Context, MethodError, MethodKind, MethodSpec};
use crate::rng::derive_seed;
use crate::stats::{confidence_interval, kahan_mean_std, CiRule, Interval};
use crate::table::{population_values, ResultTable};

/// Evaluation viability threshold: a method is viable once its coverage
/// accuracy passes this line, and C@0.9A is the first cost that does.
pub const VIABILITY_THRESHOLD: f64 = 0.9;

/// Default budget grid (in evaluations) for accuracy-cost curves.
pub const DEFAULT_BUDGETS: [u64; 8] = [10, 20, 30, 40, 60, 100, 150, 200];

/// Default meta-repetition count.
pub const DEFAULT_K: u32 = 50;

/// Default interval level.
pub const DEFAULT_LEVEL: f64 = 0.95;

/// Full-enumeration summary for one (object, index).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundTruth {
    pub mean: f64,
    /// Population standard deviation over rep-averaged config values.
    pub std: f64,
    pub size: usize,
    pub reps: u32,
}

/// Mean over all configs (repetitions averaged first), canonical ordinal
/// order, compensated summation.
pub fn ground_truth(
    table: &ResultTable,
    object: usize,
    index: usize,
) -> Result<GroundTruth, MethodError> {
    table.require_complete()?;
    let values = population_values(table, object, index);
    let (mean, std) = kahan_mean_std(&values);
    Ok(GroundTruth { mean, std, size: table.size(), reps: table.reps() })
}

/// Meta-loop parameters.
#[derive(Debug, Clone, Copy)]
pub struct MetaParams {
    pub k: u32,
    pub level: f64,
    pub rule: CiRule,
    pub master_seed: u64,
}

impl Default for MetaParams {
    fn default() -> Self {
        MetaParams { k: DEFAULT_K, level: DEFAULT_LEVEL, rule: CiRule::Paper, master_seed: 0 }
    }
}

/// Coverage accuracy of `spec` at one budget (in evaluations).
pub fn accuracy_at(
    spec: &MethodSpec,
    ctx: &Context,
    object: usize,
    index: usize,
    budget_evals: u64,
    params: &MetaParams,
) -> Result<f64, MethodError> {
    let (accuracy, _) = accuracy_and_cost(spec, ctx, object, index, budget_evals, params)?;
    Ok(accuracy)
}

fn accuracy_and_cost(
    spec: &MethodSpec,
    ctx: &Context,
    object: usize,
    index: usize,
    budget_evals: u64,
    params: &MetaParams,
) -> Result<(f64, u64), MethodError> {
    let gt = ground_truth(ctx.table, object, index)?;
    let configs = configs_for_budget(spec, ctx.table, budget_evals)?;
    let label = spec.to_string();
    let mut intervals: Vec<Interval> = Vec::with_capacity(params.k as usize);
    let mut cost = 0u64;
    for i in 0..params.k {
        let seed = derive_seed(params.master_seed, &label, i as u64);
        let est = methods::estimate(spec, ctx, object, index, configs, seed)?;
        cost = est.cost;
        intervals.push(confidence_interval(&est, params.level, params.rule));
    }
    let accuracy = crate::stats::coverage_accuracy(&intervals, gt.mean)?;
    Ok((accuracy, cost))
}

/// Config samples a method can afford within `budget_evals` evaluations.
fn configs_for_budget(
    spec: &MethodSpec,
    table: &ResultTable,
    budget_evals: u64,
) -> Result<usize, MethodError> {
    let reps = table.reps() as u64;
    match spec.kind {
        MethodKind::CiDo | MethodKind::CiScm => Ok(0), // full-space methods ignore budgets
        MethodKind::Doe2k | MethodKind::Doe2kr | MethodKind::Doe2kmp | MethodKind::DoeLk => {
            let runs = methods::doe::design_runs(table.space(), methods::doe_kind_of(spec))? as u64;
            let per_design = runs * spec.design_reps() as u64;
            let q = budget_evals / per_design;
            if q == 0 {
                return Err(MethodError::BudgetOutOfRange {
                    budget: budget_evals as usize,
                    max: per_design as usize,
                });
            }
            Ok((q * runs) as usize)
        }
        _ => {
            let configs = (budget_evals / reps) as usize;
            if configs == 0 {
                return Err(MethodError::BudgetOutOfRange {
                    budget: budget_evals as usize,
                    max: table.size(),
                });
            }
            Ok(configs)
        }
    }
}

/// One point of an accuracy-cost curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub cost: u64,
    pub accuracy: f64,
}

/// Accuracy over realized cost for one (method, task, object, index).
#[derive(Debug, Clone, Serialize)]
pub struct AccuracyCostCurve {
    pub method: String,
    pub task: u8,
    pub object: String,
    pub index: String,
    pub k: u32,
    pub level: f64,
    pub points: Vec<CurvePoint>,
}

impl AccuracyCostCurve {
    /// CSV body: `cost,accuracy`, one point per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cost,accuracy\n");
        for p in &self.points {
            out.push_str(&format!("{},{:.6}\n", p.cost, p.accuracy));
        }
        out
    }
}

/// Build one curve over the requested budgets (evaluations, ascending).
/// Budgets a method cannot realize (design does not fit, sample exceeds the
/// space) are skipped; realized costs are deduplicated so the point list is
/// strictly increasing in cost.
pub fn build_curve(
    spec: &MethodSpec,
    ctx: &Context,
    object: usize,
    index: usize,
    budgets_evals: &[u64],
    params: &MetaParams,
) -> Result<AccuracyCostCurve, MethodError> {
    let table = ctx.table;
    let task = table.task();
    if !spec.kind.applicable(task) {
        return Err(MethodError::NotApplicable { method: spec.to_string(), task });
    }
    if budgets_evals.is_empty() || budgets_evals.windows(2).any(|w| w[0] >= w[1]) {
        return Err(MethodError::BadSpec("budgets must be non-empty and strictly ascending".into()));
    }
    let mut points: Vec<CurvePoint> = Vec::new();
    for &budget in budgets_evals {
        match accuracy_and_cost(spec, ctx, object, index, budget, params) {
            Ok((accuracy, cost)) => {
                if points.last().map_or(true, |p| p.cost < cost) {
                    points.push(CurvePoint { cost, accuracy });
                }
            }
            Err(MethodError::BudgetOutOfRange { .. }) => continue,
            Err(other) => return Err(other),
        }
    }
    if points.is_empty() {
        return Err(MethodError::BadSpec(format!(
            "no requested budget is feasible for `{spec}` on task {task}"
        )));
    }
    Ok(AccuracyCostCurve {
        method: spec.to_string(),
        task,
        object: table.objects()[object].clone(),
        index: table.indexes()[index].clone(),
        k: params.k,
        level: params.level,
        points,
    })
}

/// Smallest cost whose accuracy reaches the viability threshold; `None` is
/// the infinity sentinel.
pub fn c_at_09a(curve: &AccuracyCostCurve) -> Option<u64> {
    curve
        .points
        .iter()
        .find(|p| p.accuracy >= VIABILITY_THRESHOLD)
        .map(|p| p.cost)
}

/// Report cost classes; thresholds are a reporting convention, recorded here:
/// low <= 100 evaluations, middle <= 1000, high beyond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CostClass {
    Low,
    Middle,
    High,
}

impl CostClass {
    fn of(evals: u64) -> CostClass {
        if evals <= 100 {
            CostClass::Low
        } else if evals <= 1000 {
            CostClass::Middle
        } else {
            CostClass::High
        }
    }
}

/// Summary row for one method across all its stored curves.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub method: String,
    pub tasks: Vec<u8>,
    pub curves: usize,
    pub accuracy_min: f64,
    pub accuracy_max: f64,
    pub cost_class: CostClass,
    /// `None` is the infinity sentinel.
    pub c_at_09a_min: Option<u64>,
    pub c_at_09a_max: Option<u64>,
}

/// Table-style report over stored curves; every number in it is computed
/// from the curves, nothing is free-typed.
#[derive(Debug, Clone, Serialize)]
pub struct MetaReport {
    pub rows: Vec<ReportRow>,
}

pub fn build_report(curves: &[AccuracyCostCurve]) -> MetaReport {
    let mut rows: Vec<ReportRow> = Vec::new();
    for curve in curves {
        let row = match rows.iter_mut().find(|r| r.method == curve.method) {
            Some(row) => row,
            None => {
                rows.push(ReportRow {
                    method: curve.method.clone(),
                    tasks: Vec::new(),
                    curves: 0,
                    accuracy_min: f64::INFINITY,
                    accuracy_max: f64::NEG_INFINITY,
                    cost_class: CostClass::Low,
                    c_at_09a_min: None,
                    c_at_09a_max: None,
                });
                rows.last_mut().unwrap()
            }
        };
        row.curves += 1;
        if !row.tasks.contains(&curve.task) {
            row.tasks.push(curve.task);
        }
        for p in &curve.points {
            row.accuracy_min = row.accuracy_min.min(p.accuracy);
            row.accuracy_max = row.accuracy_max.max(p.accuracy);
        }
        match (c_at_09a(curve), row.curves) {
            (Some(c), 1) => {
                row.c_at_09a_min = Some(c);
                row.c_at_09a_max = Some(c);
            }
            (Some(c), _) => {
                row.c_at_09a_min = Some(row.c_at_09a_min.map_or(c, |m| m.min(c)));
                // An existing None max means some curve never got there.
                if row.c_at_09a_max.is_some() {
                    row.c_at_09a_max = Some(row.c_at_09a_max.unwrap().max(c));
                }
            }
            (None, _) => {
                row.c_at_09a_max = None;
                if row.curves == 1 {
                    row.c_at_09a_min = None;
                }
            }
        }
    }
    // Characteristic cost: cheapest viable cost if any curve is viable,
    // otherwise the deepest cost probed.
    for row in &mut rows {
        let characteristic = row.c_at_09a_min.unwrap_or_else(|| {
            curves
                .iter()
                .filter(|c| c.method == row.method)
                .flat_map(|c| c.points.iter().map(|p| p.cost))
                .max()
                .unwrap_or(0)
        });
        row.cost_class = CostClass::of(characteristic);
    }
    MetaReport { rows }
}

impl MetaReport {
    /// JSON with the infinity sentinel rendered as the string `"inf"`.
    pub fn to_json(&self) -> serde_json::Value {
        let sentinel =
            |v: Option<u64>| v.map_or_else(|| json!("inf"), |c| json!(c));
        json!({
            "rows": self.rows.iter().map(|r| {
                json!({
                    "method": r.method,
                    "tasks": r.tasks,
                    "curves": r.curves,
                    "accuracy_range": [r.accuracy_min, r.accuracy_max],
                    "cost_class": match r.cost_class {
                        CostClass::Low => "low",
                        CostClass::Middle => "middle",
                        CostClass::High => "high",
                    },
                    "c_at_0_9a_range": [sentinel(r.c_at_09a_min), sentinel(r.c_at_09a_max)],
                })
            }).collect::<Vec<_>>()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ec::{EcSpace, Factor};
    use crate::table::ResultTable;
    use proptest::prelude::*;

    fn line_table(size: usize, reps: u32) -> ResultTable {
        let space =
            EcSpace::new(vec![Factor::nums("x", &(0..size).map(|i| i as f64).collect::<Vec<_>>())])
                .unwrap();
        ResultTable::from_fn(5, space, &["frequency", "runs"], &["true_rate", "avg_p"], reps, |c, o, i, r| {
            ((c * 13 + 7 * o + 3 * i) % 101) as f64 + 0.01 * r as f64
        })
    }

    #[test]
    fn ground_truth_hand_values() {
        let space = EcSpace::new(vec![Factor::nums("x", &[0.0, 1.0])]).unwrap();
        let constant = ResultTable::from_fn(5, space.clone(), &["o"], &["i"], 1, |_, _, _, _| 7.5);
        let gt = ground_truth(&constant, 0, 0).unwrap();
        assert_eq!((gt.mean, gt.std), (7.5, 0.0));
        let pair = ResultTable::from_fn(5, space, &["o"], &["i"], 1, |c, _, _, _| {
            if c == 0 { 1.0 } else { 3.0 }
        });
        assert_eq!(ground_truth(&pair, 0, 0).unwrap().mean, 2.0);
    }

    #[test]
    fn ground_truth_is_reorder_stable_to_1e12() {
        let table = line_table(999, 1);
        let gt = ground_truth(&table, 1, 1).unwrap();
        let mut values = population_values(&table, 1, 1);
        values.reverse();
        let (reordered, _) = kahan_mean_std(&values);
        assert!((gt.mean - reordered).abs() <= 1e-12 * gt.mean.abs().max(1.0));
    }

    #[test]
    fn eva_at_full_budget_is_always_covered() {
        let table = line_table(64, 1);
        let ctx = Context::new(&table);
        let spec = MethodSpec::parse("eva").unwrap();
        let acc =
            accuracy_at(&spec, &ctx, 0, 0, 64, &MetaParams { k: 50, ..Default::default() }).unwrap();
        assert_eq!(acc, 1.0);
    }

    #[test]
    fn exact_adjustment_is_always_covered() {
        let table = line_table(64, 1);
        let ctx = Context::new(&table);
        let spec = MethodSpec::parse("ci_do").unwrap();
        let acc = accuracy_at(&spec, &ctx, 1, 0, 1, &MetaParams::default()).unwrap();
        assert_eq!(acc, 1.0);
    }

    #[test]
    fn budgets_scale_by_stored_repetitions() {
        let table = line_table(64, 3);
        let ctx = Context::new(&table);
        let spec = MethodSpec::parse("eva").unwrap();
        let curve =
            build_curve(&spec, &ctx, 0, 0, &[30, 60], &MetaParams { k: 5, ..Default::default() })
                .unwrap();
        // 30 evaluations at r=3 affords 10 configs -> realized cost 30.
        assert_eq!(curve.points.iter().map(|p| p.cost).collect::<Vec<_>>(), vec![30, 60]);
    }

    #[test]
    fn single_budget_curve_has_one_point() {
        let table = line_table(16, 1);
        let ctx = Context::new(&table);
        let spec = MethodSpec::parse("eva").unwrap();
        let curve = build_curve(&spec, &ctx, 0, 0, &[8], &MetaParams::default()).unwrap();
        assert_eq!(curve.points.len(), 1);
    }

    #[test]
    fn curve_rejects_unsorted_budgets_and_na_methods() {
        let table = line_table(16, 1);
        let ctx = Context::new(&table);
        let spec = MethodSpec::parse("eva").unwrap();
        assert!(build_curve(&spec, &ctx, 0, 0, &[8, 4], &MetaParams::default()).is_err());
        // Observation has no declared distribution on this task id (5).
        let obs = MethodSpec::parse("obs").unwrap();
        assert!(matches!(
            build_curve(&obs, &ctx, 0, 0, &[8], &MetaParams::default()),
            Err(MethodError::NotApplicable { .. })
        ));
    }

    #[test]
    fn c_at_09a_examples() {
        let mk = |points: Vec<(u64, f64)>| AccuracyCostCurve {
            method: "eva".into(),
            task: 5,
            object: "frequency".into(),
            index: "true_rate".into(),
            k: 50,
            level: 0.95,
            points: points.into_iter().map(|(cost, accuracy)| CurvePoint { cost, accuracy }).collect(),
        };
        assert_eq!(c_at_09a(&mk(vec![(10, 0.5), (30, 0.92), (60, 0.95)])), Some(30));
        assert_eq!(c_at_09a(&mk(vec![(10, 0.5), (30, 0.8)])), None);
        assert_eq!(c_at_09a(&mk(vec![(30, 0.95)])), Some(30));
    }

    #[test]
    fn report_rows_aggregate_across_curves() {
        let mk = |method: &str, points: Vec<(u64, f64)>| AccuracyCostCurve {
            method: method.into(),
            task: 5,
            object: "o".into(),
            index: "i".into(),
            k: 50,
            level: 0.95,
            points: points.into_iter().map(|(cost, accuracy)| CurvePoint { cost, accuracy }).collect(),
        };
        let report = build_report(&[
            mk("eva", vec![(10, 1.0)]),
            mk("obs", vec![(10, 0.2), (100, 0.4)]),
            mk("obs", vec![(10, 0.3), (100, 0.95)]),
        ]);
        let eva = report.rows.iter().find(|r| r.method == "eva").unwrap();
        assert_eq!((eva.accuracy_min, eva.accuracy_max), (1.0, 1.0));
        assert_eq!((eva.c_at_09a_min, eva.c_at_09a_max), (Some(10), Some(10)));
        let obs = report.rows.iter().find(|r| r.method == "obs").unwrap();
        // One curve never reaches 0.9: the max is the infinity sentinel.
        assert_eq!(obs.c_at_09a_min, Some(100));
        assert_eq!(obs.c_at_09a_max, None);
        let j = report.to_json();
        assert_eq!(j["rows"][1]["c_at_0_9a_range"][1], "inf");
    }

    proptest! {
        #[test]
        fn improving_points_never_raises_c_at_09a(
            accs in proptest::collection::vec(0.0f64..1.0, 1..10),
            bumps in proptest::collection::vec(0.0f64..0.5, 1..10),
        ) {
            let mk = |accs: &[f64]| AccuracyCostCurve {
                method: "eva".into(), task: 5, object: "o".into(), index: "i".into(),
                k: 50, level: 0.95,
                points: accs.iter().enumerate()
                    .map(|(i, &a)| CurvePoint { cost: (i as u64 + 1) * 10, accuracy: a })
                    .collect(),
            };
            let improved: Vec<f64> = accs
                .iter()
                .zip(bumps.iter().chain(std::iter::repeat(&0.0)))
                .map(|(&a, &b)| (a + b).min(1.0))
                .collect();
            let before = c_at_09a(&mk(&accs)).unwrap_or(u64::MAX);
            let after = c_at_09a(&mk(&improved)).unwrap_or(u64::MAX);
            prop_assert!(after <= before);
        }
    }
}
