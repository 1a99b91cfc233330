//! The eleven estimation methods.
//!
//! Each method consumes a [`ResultTable`], a config budget and a seed, and
//! produces an [`Estimate`] whose `cost` equals the `(config, repetition)`
//! reads it performed. Applicability per task follows the evaluation-design
//! matrix; a method asked to run on a task it does not cover raises a typed
//! [`MethodError::NotApplicable`] instead of degrading silently.

mod causal;
pub(crate) mod doe;
mod quasi;
mod sampling;

pub use causal::{do_calculus, scm_masked};
pub use doe::{design_runs, doe_design, doe_estimate, doe_estimate_pooled, DoeDesign, DoeKind};
pub use quasi::{nrct, nrct_partition, stagger};
pub use sampling::{eva, obs, rct, RctOutcome};

use thiserror::Error;

use crate::ec::{DistFamily, EcError, FactorDistribution};
use crate::rng::stream;
use crate::stats::{Estimate, StatsError};
use crate::table::{ResultTable, TableError};

#[derive(Debug, Error)]
pub enum MethodError {
    #[error("method `{method}` is not applicable to task {task}")]
    NotApplicable { method: String, task: u8 },
    #[error("budget of {budget} configs out of range 1..={max}")]
    BudgetOutOfRange { budget: usize, max: usize },
    #[error("no observation distribution declared for task {0}")]
    MissingDistribution(u8),
    #[error("factor `{factor}` too small to split into {needed} parts")]
    FactorTooSmall { factor: String, needed: usize },
    #[error("method requests {requested} repetitions, table stores {available}")]
    RepsExceeded { requested: u32, available: u32 },
    #[error("unknown factor `{0}`")]
    UnknownFactor(String),
    #[error("method spec: {0}")]
    BadSpec(String),
    #[error("staggered companion table required but not provided")]
    MissingStaggered,
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Ec(#[from] EcError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Method families, named as they appear in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Obs,
    Doe2k,
    Doe2kr,
    Doe2kmp,
    DoeLk,
    Rct,
    CiDo,
    CiScm,
    QeNrct,
    QeStagger,
    Eva,
}

impl MethodKind {
    pub const ALL: [MethodKind; 11] = [
        MethodKind::Obs,
        MethodKind::Doe2k,
        MethodKind::Doe2kr,
        MethodKind::Doe2kmp,
        MethodKind::DoeLk,
        MethodKind::Rct,
        MethodKind::CiDo,
        MethodKind::CiScm,
        MethodKind::QeNrct,
        MethodKind::QeStagger,
        MethodKind::Eva,
    ];

    pub fn id(self) -> &'static str {
        match self {
            MethodKind::Obs => "obs",
            MethodKind::Doe2k => "doe_2k",
            MethodKind::Doe2kr => "doe_2kr",
            MethodKind::Doe2kmp => "doe_2kmp",
            MethodKind::DoeLk => "doe_lk",
            MethodKind::Rct => "rct",
            MethodKind::CiDo => "ci_do",
            MethodKind::CiScm => "ci_scm",
            MethodKind::QeNrct => "qe_nrct",
            MethodKind::QeStagger => "qe_stagger",
            MethodKind::Eva => "eva",
        }
    }

    pub fn from_id(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.id() == s)
    }

    /// The evaluation-design applicability matrix (tasks 1..=8).
    ///
    /// Staggering is wired to the rainfall task only: it is the one task
    /// whose result is a time series with a defined prefix semantics.
    pub fn applicable_tasks(self) -> &'static [u8] {
        match self {
            MethodKind::Obs => &[1, 2, 3],
            MethodKind::Doe2k => &[1, 2, 3, 5, 6, 7, 8],
            MethodKind::Doe2kr => &[7, 8],
            MethodKind::Doe2kmp => &[3, 5],
            MethodKind::DoeLk => &[1, 3, 5, 6, 7],
            MethodKind::Rct => &[1, 2, 3, 4, 5, 6, 7, 8],
            MethodKind::CiDo => &[1, 2, 3, 4, 5, 6, 7, 8],
            MethodKind::CiScm => &[1, 2],
            MethodKind::QeNrct => &[4, 6],
            MethodKind::QeStagger => &[2],
            MethodKind::Eva => &[1, 2, 3, 4, 5, 6, 7, 8],
        }
    }

    pub fn applicable(self, task: u8) -> bool {
        self.applicable_tasks().contains(&task)
    }
}

/// The default observation distribution family of a task, where declared.
pub fn default_dist_family(task: u8) -> Option<DistFamily> {
    match task {
        1 => Some(DistFamily::Power),
        2 => Some(DistFamily::Gaussian),
        3 => Some(DistFamily::MixedLog),
        _ => None,
    }
}

/// A parsed method specification, e.g. `doe_lk:l=4` or
/// `ci_scm:task=2,mask=sigma_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub kind: MethodKind,
    /// Levels per factor for `doe_lk` (3 or 4).
    pub l: Option<u32>,
    /// Fraction exponent for `doe_2kmp`.
    pub p: Option<u32>,
    /// Repetitions consumed per design run (DoE families).
    pub r: Option<u32>,
    /// Masked factor name for `ci_scm`.
    pub mask: Option<String>,
    /// Distribution family override for `obs`/`ci_scm`.
    pub dist: Option<DistFamily>,
    /// Task the spec is pinned to, when stated inline.
    pub task: Option<u8>,
    /// Optional single-point budget, in evaluations.
    pub budget: Option<u64>,
}

impl MethodSpec {
    pub fn new(kind: MethodKind) -> Self {
        MethodSpec { kind, l: None, p: None, r: None, mask: None, dist: None, task: None, budget: None }
    }

    pub fn parse(text: &str) -> Result<Self, MethodError> {
        let (head, params) = match text.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (text, None),
        };
        let kind = MethodKind::from_id(head.trim())
            .ok_or_else(|| MethodError::BadSpec(format!("unknown method `{head}`")))?;
        let mut spec = MethodSpec::new(kind);
        if let Some(params) = params {
            for pair in params.split(',') {
                let (key, value) = pair
                    .split_once('=')
                    .ok_or_else(|| MethodError::BadSpec(format!("expected key=value, got `{pair}`")))?;
                let (key, value) = (key.trim(), value.trim());
                let bad = |what: &str| MethodError::BadSpec(format!("bad {what} `{value}`"));
                match key {
                    "l" => spec.l = Some(value.parse().map_err(|_| bad("l"))?),
                    "p" => spec.p = Some(value.parse().map_err(|_| bad("p"))?),
                    "r" => spec.r = Some(value.parse().map_err(|_| bad("r"))?),
                    "mask" => spec.mask = Some(value.to_string()),
                    "dist" => spec.dist = Some(value.parse().map_err(|_| bad("dist"))?),
                    "task" => spec.task = Some(value.parse().map_err(|_| bad("task"))?),
                    "budget" => spec.budget = Some(value.parse().map_err(|_| bad("budget"))?),
                    other => {
                        return Err(MethodError::BadSpec(format!("unknown key `{other}`")));
                    }
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), MethodError> {
        match self.kind {
            MethodKind::DoeLk => {
                let l = self.l.unwrap_or(4);
                if !(l == 3 || l == 4) {
                    return Err(MethodError::BadSpec(format!("doe_lk supports l=3 or l=4, got {l}")));
                }
            }
            MethodKind::Doe2kmp => {
                if self.p == Some(0) {
                    return Err(MethodError::BadSpec("doe_2kmp needs p >= 1".into()));
                }
            }
            _ => {}
        }
        if self.l.is_some() && self.kind != MethodKind::DoeLk {
            return Err(MethodError::BadSpec("l is only valid for doe_lk".into()));
        }
        if self.p.is_some() && self.kind != MethodKind::Doe2kmp {
            return Err(MethodError::BadSpec("p is only valid for doe_2kmp".into()));
        }
        Ok(())
    }

    /// Effective levels for `doe_lk`.
    pub fn levels(&self) -> u32 {
        self.l.unwrap_or(4)
    }

    /// Effective fraction exponent for `doe_2kmp`.
    pub fn fraction(&self) -> u32 {
        self.p.unwrap_or(1)
    }

    /// Design repetitions: `doe_2kr` defaults to 3, other designs to 1.
    pub fn design_reps(&self) -> u32 {
        self.r.unwrap_or(if self.kind == MethodKind::Doe2kr { 3 } else { 1 })
    }
}

impl std::fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut params: Vec<String> = Vec::new();
        if let Some(l) = self.l {
            params.push(format!("l={l}"));
        }
        if let Some(p) = self.p {
            params.push(format!("p={p}"));
        }
        if let Some(r) = self.r {
            params.push(format!("r={r}"));
        }
        if let Some(mask) = &self.mask {
            params.push(format!("mask={mask}"));
        }
        if let Some(dist) = self.dist {
            params.push(format!("dist={dist}"));
        }
        if let Some(task) = self.task {
            params.push(format!("task={task}"));
        }
        if let Some(budget) = self.budget {
            params.push(format!("budget={budget}"));
        }
        if params.is_empty() {
            f.write_str(self.kind.id())
        } else {
            write!(f, "{}:{}", self.kind.id(), params.join(","))
        }
    }
}

impl std::str::FromStr for MethodSpec {
    type Err = MethodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Tables a method run can draw on: the primary table plus, for the
/// staggering method, its prefix-trained companion.
pub struct Context<'a> {
    pub table: &'a ResultTable,
    pub staggered: Option<&'a ResultTable>,
}

impl<'a> Context<'a> {
    pub fn new(table: &'a ResultTable) -> Self {
        Context { table, staggered: None }
    }

    pub fn with_staggered(table: &'a ResultTable, staggered: &'a ResultTable) -> Self {
        Context { table, staggered: Some(staggered) }
    }
}

/// Run one method once. `budget_configs` counts config samples; methods that
/// need the full space ignore it. The estimate's `cost` field reports the
/// evaluations actually consumed.
pub fn estimate(
    spec: &MethodSpec,
    ctx: &Context,
    object: usize,
    index: usize,
    budget_configs: usize,
    seed: u64,
) -> Result<Estimate, MethodError> {
    let table = ctx.table;
    let task = table.task();
    if !spec.kind.applicable(task) {
        return Err(MethodError::NotApplicable { method: spec.to_string(), task });
    }
    if let Some(pinned) = spec.task {
        if pinned != task {
            return Err(MethodError::BadSpec(format!(
                "spec pinned to task {pinned} but table is task {task}"
            )));
        }
    }
    let mut rng = stream(seed, "method", 0);
    match spec.kind {
        MethodKind::Eva => eva(table, object, index, budget_configs, &mut rng),
        MethodKind::Obs => {
            let dist = spec_distribution(spec, table)?;
            obs(table, object, index, budget_configs, &dist, &mut rng)
        }
        MethodKind::Rct => {
            let outcome = rct(table, index, budget_configs, &mut rng)?;
            Ok(outcome.estimates[object])
        }
        MethodKind::Doe2k | MethodKind::Doe2kr | MethodKind::Doe2kmp | MethodKind::DoeLk => {
            let kind = doe_kind_of(spec);
            let reps = spec.design_reps();
            let runs = doe::design_runs(table.space(), kind)?;
            let q = (budget_configs / runs).max(1) as u32;
            doe_estimate_pooled(table, object, index, kind, reps, q, &mut rng)
        }
        MethodKind::CiDo => do_calculus(table, object, index),
        MethodKind::CiScm => {
            let dist = spec_distribution(spec, table)?;
            let mask = spec.mask.clone().unwrap_or_else(|| default_mask(task));
            scm_masked(table, &mask, &dist, object, index)
        }
        MethodKind::QeNrct => nrct(table, object, index, budget_configs, &mut rng),
        MethodKind::QeStagger => {
            let staggered = ctx.staggered.ok_or(MethodError::MissingStaggered)?;
            stagger(table, staggered, object, index, budget_configs, &mut rng)
        }
    }
}

/// The DoE flavor of a spec; panics on non-DoE kinds.
pub fn doe_kind_of(spec: &MethodSpec) -> DoeKind {
    match spec.kind {
        MethodKind::Doe2k | MethodKind::Doe2kr => DoeKind::TwoLevel,
        MethodKind::Doe2kmp => DoeKind::Fractional(spec.fraction()),
        MethodKind::DoeLk => DoeKind::MultiLevel(spec.levels()),
        other => panic!("{other:?} is not a DoE method"),
    }
}

fn default_mask(task: u8) -> String {
    match task {
        1 => "abc".to_string(),
        2 => "sigma_W".to_string(),
        _ => String::new(),
    }
}

fn spec_distribution(
    spec: &MethodSpec,
    table: &ResultTable,
) -> Result<FactorDistribution, MethodError> {
    let family = match spec.dist {
        Some(f) => f,
        None => default_dist_family(table.task())
            .ok_or(MethodError::MissingDistribution(table.task()))?,
    };
    Ok(FactorDistribution::by_family(table.space(), family)?)
}
