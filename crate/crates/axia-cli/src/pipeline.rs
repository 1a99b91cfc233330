//! Command implementations: table plumbing, curve/report/plot emission, and
//! manifest execution. Every output file is derived from (manifest, cached
//! tables) alone and is written with fixed formatting, so re-running a
//! manifest reproduces the bytes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use axia_core::meta::{
    build_curve, build_report, AccuracyCostCurve, CurvePoint, MetaParams, DEFAULT_BUDGETS,
};
use axia_core::methods::{Context, MethodKind, MethodSpec};
use axia_core::stats::CiRule;
use axia_core::table::{cache_dir, cache_file, synth_cached, ResultTable};
use axia_core::tasks;

use crate::{AppError, CommonRun};

// ---- list ---------------------------------------------------------------------

pub fn list(materials: bool) -> Result<(), AppError> {
    println!("tasks:");
    for def in tasks::all_tasks() {
        let space = tasks::space_for_task(def.id).expect("registered task");
        println!(
            "  {} {:<24} configs {:<5} reps {} objects [{}] indexes [{}]{}",
            def.id,
            def.name,
            space.size(),
            def.reps,
            def.objects.join(", "),
            def.indexes.join(", "),
            if def.simulated { "" } else { " (ingested)" },
        );
    }
    println!("\nmethods (applicability per task 1..8):");
    for kind in MethodKind::ALL {
        let marks: Vec<String> = (1..=8)
            .map(|t| if kind.applicable(t) { format!("{t}") } else { "-".to_string() })
            .collect();
        println!("  {:<11} [{}]", kind.id(), marks.join(" "));
    }
    if materials {
        println!("\nenergy-task materials (formula, exact formation energy kJ/mol):");
        for m in tasks::energy::enumerate_materials() {
            let e = tasks::energy::formation_energy_exact(&m).expect("legal material");
            println!("  {:<28} {:9.1}", m.formula(), e);
        }
    }
    Ok(())
}

// ---- table access ---------------------------------------------------------------

fn load_or_synth(task: u8, seed: u64, cache: &Path, staggered: bool) -> Result<ResultTable, AppError> {
    let def = tasks::task(task)
        .ok_or_else(|| AppError::Usage(format!("unknown task {task} (expected 1..=8)")))?;
    if def.simulated {
        Ok(synth_cached(task, seed, cache, staggered)?)
    } else {
        let path = ingested_path(cache, task);
        if !path.exists() {
            return Err(AppError::Data(format!(
                "task {task} is externally measured; ingest its table first (expected {})",
                path.display()
            )));
        }
        Ok(ResultTable::load(&path, false)?)
    }
}

fn ingested_path(cache: &Path, task: u8) -> PathBuf {
    cache.join(format!("task{task}_ingested.csv"))
}

pub fn synth(common: &CommonRun, staggered: bool) -> Result<(), AppError> {
    if staggered && common.task != 2 {
        return Err(AppError::Usage("--staggered applies to task 2 only".into()));
    }
    let cache = cache_dir(common.cache_dir.as_deref());
    let table = load_or_synth(common.task, common.master_seed(), &cache, staggered)?;
    let path = cache_file(&cache, common.task, common.master_seed(), staggered);
    println!(
        "task {} table: {} configs x {} objects x {} indexes x r={} at {}",
        common.task,
        table.size(),
        table.objects().len(),
        table.indexes().len(),
        table.reps(),
        path.display()
    );
    Ok(())
}

pub fn ingest(file: &Path, allow_sparse: bool, cache: Option<&Path>) -> Result<(), AppError> {
    let table = ResultTable::load(file, allow_sparse)?;
    let cache = cache_dir(cache);
    std::fs::create_dir_all(&cache)?;
    let dest = ingested_path(&cache, table.task());
    table.save(&dest)?;
    println!(
        "ingested task {} ({} configs, {} objects, {} indexes, r={}{}) -> {}",
        table.task(),
        table.size(),
        table.objects().len(),
        table.indexes().len(),
        table.reps(),
        if table.is_sparse() { ", sparse" } else { "" },
        dest.display()
    );
    Ok(())
}

pub fn ground_truth(common: &CommonRun, out: Option<&Path>) -> Result<(), AppError> {
    let cache = cache_dir(common.cache_dir.as_deref());
    let table = load_or_synth(common.task, common.master_seed(), &cache, false)?;
    let mut csv = String::from("task,object,index,mean,std,size,reps\n");
    for (obj_i, obj) in table.objects().iter().enumerate() {
        for (idx_i, idx) in table.indexes().iter().enumerate() {
            let gt = axia_core::meta::ground_truth(&table, obj_i, idx_i)?;
            csv.push_str(&format!(
                "{},{},{},{:.16e},{:.16e},{},{}\n",
                table.task(),
                obj,
                idx,
                gt.mean,
                gt.std,
                gt.size,
                gt.reps
            ));
        }
    }
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(format!("gt_task{}.csv", common.task)));
    std::fs::write(&path, csv)?;
    println!("ground truth -> {}", path.display());
    Ok(())
}

// ---- curves ---------------------------------------------------------------------

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_alphanumeric() { c } else { '-' }).collect()
}

fn curve_file_name(curve: &AccuracyCostCurve) -> String {
    format!(
        "task{}__{}__{}__{}.csv",
        curve.task,
        sanitize(&curve.method),
        sanitize(&curve.object),
        sanitize(&curve.index)
    )
}

struct CurveJob {
    object: usize,
    index: usize,
}

#[allow(clippy::too_many_arguments)]
fn build_task_curves(
    table: &ResultTable,
    staggered: Option<&ResultTable>,
    spec: &MethodSpec,
    object: Option<&str>,
    index: Option<&str>,
    budgets: &[u64],
    params: &MetaParams,
) -> Result<Vec<AccuracyCostCurve>, AppError> {
    let ctx = match staggered {
        Some(s) => Context::with_staggered(table, s),
        None => Context::new(table),
    };
    let mut jobs = Vec::new();
    for (obj_i, obj) in table.objects().iter().enumerate() {
        if object.is_some_and(|o| o != obj) {
            continue;
        }
        for (idx_i, idx) in table.indexes().iter().enumerate() {
            if index.is_some_and(|i| i != idx) {
                continue;
            }
            jobs.push(CurveJob { object: obj_i, index: idx_i });
        }
    }
    if jobs.is_empty() {
        return Err(AppError::Usage("no (object, index) matches the filters".into()));
    }
    let results: Vec<Result<AccuracyCostCurve, axia_core::methods::MethodError>> = jobs
        .par_iter()
        .map(|job| build_curve(spec, &ctx, job.object, job.index, budgets, params))
        .collect();
    let mut curves = Vec::with_capacity(results.len());
    for r in results {
        curves.push(r?);
    }
    Ok(curves)
}

#[allow(clippy::too_many_arguments)]
pub fn curve(
    common: &CommonRun,
    method: &str,
    object: Option<&str>,
    index: Option<&str>,
    budgets: &[u64],
    k: u32,
    level: f64,
    rule: CiRule,
    out: &Path,
) -> Result<(), AppError> {
    let spec = MethodSpec::parse(method)?;
    let cache = cache_dir(common.cache_dir.as_deref());
    let seed = common.master_seed();
    let table = load_or_synth(common.task, seed, &cache, false)?;
    if !spec.kind.applicable(common.task) {
        return Err(not_applicable(&spec, common.task));
    }
    let staggered = if spec.kind == MethodKind::QeStagger {
        Some(load_or_synth(2, seed, &cache, true)?)
    } else {
        None
    };
    let params = MetaParams { k, level, rule, master_seed: seed };
    let curves =
        build_task_curves(&table, staggered.as_ref(), &spec, object, index, budgets, &params)?;
    std::fs::create_dir_all(out)?;
    for c in &curves {
        let path = out.join(curve_file_name(c));
        std::fs::write(&path, c.to_csv())?;
        println!("{}", path.display());
    }
    Ok(())
}

fn not_applicable(spec: &MethodSpec, task: u8) -> AppError {
    AppError::from(axia_core::methods::MethodError::NotApplicable {
        method: spec.to_string(),
        task,
    })
}

// ---- report / plot ----------------------------------------------------------------

fn read_curves(dir: &Path) -> Result<Vec<AccuracyCostCurve>, AppError> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "csv")
                && p.file_name().is_some_and(|n| n.to_string_lossy().starts_with("task"))
        })
        .collect();
    entries.sort();
    let mut curves = Vec::new();
    for path in entries {
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        let parts: Vec<&str> = name.split("__").collect();
        if parts.len() != 4 {
            continue;
        }
        let task: u8 = parts[0]
            .strip_prefix("task")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| AppError::Data(format!("bad curve file name `{name}`")))?;
        let text = std::fs::read_to_string(&path)?;
        let mut points = Vec::new();
        for line in text.lines().skip(1) {
            let (cost, acc) = line
                .split_once(',')
                .ok_or_else(|| AppError::Data(format!("bad curve row in {name}")))?;
            points.push(CurvePoint {
                cost: cost.parse().map_err(|_| AppError::Data(format!("bad cost in {name}")))?,
                accuracy: acc
                    .parse()
                    .map_err(|_| AppError::Data(format!("bad accuracy in {name}")))?,
            });
        }
        curves.push(AccuracyCostCurve {
            method: parts[1].to_string(),
            task,
            object: parts[2].to_string(),
            index: parts[3].to_string(),
            k: 0,
            level: 0.0,
            points,
        });
    }
    if curves.is_empty() {
        return Err(AppError::Data(format!("no curve CSVs under {}", dir.display())));
    }
    Ok(curves)
}

pub fn report(curves_dir: &Path, out: Option<&Path>) -> Result<(), AppError> {
    let curves = read_curves(curves_dir)?;
    let report = build_report(&curves);
    let json = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    let path =
        out.map(Path::to_path_buf).unwrap_or_else(|| curves_dir.join("report.json"));
    std::fs::write(&path, json + "\n")?;
    println!("report -> {}", path.display());
    Ok(())
}

pub fn plot(curves_dir: &Path, out: Option<&Path>) -> Result<(), AppError> {
    let curves = read_curves(curves_dir)?;
    let out = out.map(Path::to_path_buf).unwrap_or_else(|| curves_dir.to_path_buf());
    std::fs::create_dir_all(&out)?;
    let mut groups: BTreeMap<(u8, String, String), Vec<AccuracyCostCurve>> = BTreeMap::new();
    for c in curves {
        groups.entry((c.task, c.object.clone(), c.index.clone())).or_default().push(c);
    }
    for ((task, object, index), group) in groups {
        let title = format!("task {task} / {object} / {index}");
        let svg = axia_core::plot::render_svg(&title, &group);
        let path = out.join(format!("task{task}__{object}__{index}.svg"));
        std::fs::write(&path, svg)?;
        println!("{}", path.display());
    }
    Ok(())
}

// ---- manifest -----------------------------------------------------------------------

/// A reproducible run description; re-running it restores every output file
/// byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tasks: Vec<u8>,
    pub methods: Vec<String>,
    #[serde(default)]
    pub budgets: Option<Vec<u64>>,
    #[serde(default = "default_k")]
    pub k: u32,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub ci_rule: CiRule,
    pub out_dir: PathBuf,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub plots: bool,
}

fn default_k() -> u32 {
    axia_core::meta::DEFAULT_K
}

fn default_level() -> f64 {
    axia_core::meta::DEFAULT_LEVEL
}

pub fn run_manifest(path: &Path) -> Result<(), AppError> {
    let text = std::fs::read_to_string(path)?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| AppError::Usage(format!("manifest: {e}")))?;
    let budgets = manifest.budgets.clone().unwrap_or_else(|| DEFAULT_BUDGETS.to_vec());
    if budgets.is_empty() || budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AppError::Usage("manifest budgets must be strictly ascending".into()));
    }
    let specs: Result<Vec<MethodSpec>, _> =
        manifest.methods.iter().map(|m| MethodSpec::parse(m)).collect();
    let specs = specs?;
    let cache = cache_dir(manifest.cache_dir.as_deref());
    let params = MetaParams {
        k: manifest.k,
        level: manifest.level,
        rule: manifest.ci_rule,
        master_seed: manifest.seed,
    };
    std::fs::create_dir_all(&manifest.out_dir)?;
    let mut all_curves = Vec::new();
    for &task in &manifest.tasks {
        let table = load_or_synth(task, manifest.seed, &cache, false)?;
        let needs_stagger =
            task == 2 && specs.iter().any(|s| s.kind == MethodKind::QeStagger);
        let staggered = if needs_stagger {
            Some(load_or_synth(2, manifest.seed, &cache, true)?)
        } else {
            None
        };
        for spec in &specs {
            if !spec.kind.applicable(task) {
                eprintln!("note: `{spec}` is not applicable to task {task}; skipped");
                continue;
            }
            let curves = build_task_curves(
                &table,
                staggered.as_ref(),
                spec,
                None,
                None,
                &budgets,
                &params,
            )?;
            for c in &curves {
                let file = manifest.out_dir.join(curve_file_name(c));
                std::fs::write(&file, c.to_csv())?;
            }
            all_curves.extend(curves);
        }
    }
    if all_curves.is_empty() {
        return Err(AppError::Usage("manifest produced no curves".into()));
    }
    let report = build_report(&all_curves);
    let json = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    std::fs::write(manifest.out_dir.join("report.json"), json + "\n")?;
    if manifest.plots {
        let mut groups: BTreeMap<(u8, String, String), Vec<AccuracyCostCurve>> = BTreeMap::new();
        for c in all_curves {
            groups.entry((c.task, c.object.clone(), c.index.clone())).or_default().push(c);
        }
        for ((task, object, index), group) in groups {
            let title = format!("task {task} / {object} / {index}");
            let svg = axia_core::plot::render_svg(&title, &group);
            std::fs::write(
                manifest.out_dir.join(format!("task{task}__{object}__{index}.svg")),
                svg,
            )?;
        }
    }
    println!("run complete -> {}", manifest.out_dir.display());
    Ok(())
}
