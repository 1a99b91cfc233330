//! The evaluation tasks: six simulators plus the two externally measured
//! spaces (CPU timing, LLM scoring) whose tables are ingested rather than
//! synthesized.

pub mod chaos;
pub mod energy;
pub mod games;
pub mod population;
pub mod rainfall;
pub mod randomness;
pub(crate) mod regress;

use crate::ec::{Constraint, EcSpace, Factor};

/// The fixed preset seeds. Simulated tasks store a single repetition driven
/// by the first seed (their stochastic streams are pinned rather than
/// re-rolled, which is what removes the need for repeated trials); the
/// externally measured tasks arrive with three physical reruns per config.
pub const REP_SEEDS: [u64; 3] = [0, 37, 42];

/// Static description of one task.
#[derive(Debug, Clone, Copy)]
pub struct TaskDef {
    pub id: u8,
    pub name: &'static str,
    pub objects: &'static [&'static str],
    pub indexes: &'static [&'static str],
    /// Stored repetitions per (config, object, index).
    pub reps: u32,
    /// Synthesized in-process (tasks 1-6) versus ingested from measurements.
    pub simulated: bool,
}

const TASKS: [TaskDef; 8] = [
    TaskDef {
        id: 1,
        name: "attractor chaos",
        objects: &["lorenz", "roessler"],
        indexes: &["lyapunov", "ks"],
        reps: 1,
        simulated: true,
    },
    TaskDef {
        id: 2,
        name: "rainfall regression",
        objects: &["linear", "spline_additive", "tree_bagger", "fourier_basis"],
        indexes: &["mse", "rmse", "mae"],
        reps: 1,
        simulated: true,
    },
    TaskDef {
        id: 3,
        name: "population dynamics",
        objects: &["bacteria", "yeast", "algae"],
        indexes: &["avg_pop", "std_pop", "half_life", "growth_rate"],
        reps: 1,
        simulated: true,
    },
    TaskDef {
        id: 4,
        name: "formation energy",
        objects: &["mean_by_pattern", "bond_count_linear", "least_squares", "margin_regressor"],
        indexes: &["mape", "smape"],
        reps: 1,
        simulated: true,
    },
    TaskDef {
        id: 5,
        name: "randomness verification",
        objects: &["frequency", "runs", "overlapping_permutations", "birthday_spacings"],
        indexes: &["true_rate", "avg_p"],
        reps: 1,
        simulated: true,
    },
    TaskDef {
        id: 6,
        name: "game strategies",
        objects: &[
            "always_defect",
            "always_cooperate",
            "tit_for_tat",
            "generous_tft",
            "mixed",
            "consequence",
        ],
        indexes: &["total_earning", "net_earning"],
        reps: 1,
        simulated: true,
    },
    TaskDef {
        id: 7,
        name: "cpu timing",
        objects: &["cpu_a", "cpu_b"],
        indexes: &["run_time"],
        reps: 3,
        simulated: false,
    },
    TaskDef {
        id: 8,
        name: "llm scoring",
        objects: &["llm_a", "llm_b", "llm_c"],
        indexes: &["accuracy"],
        reps: 3,
        simulated: false,
    },
];

pub fn all_tasks() -> &'static [TaskDef] {
    &TASKS
}

pub fn task(id: u8) -> Option<&'static TaskDef> {
    TASKS.iter().find(|t| t.id == id)
}

/// The canonical EC space of a task.
pub fn space_for_task(id: u8) -> Option<EcSpace> {
    match id {
        1 => Some(chaos::space()),
        2 => Some(rainfall::space()),
        3 => Some(population::space()),
        4 => Some(energy::space()),
        5 => Some(randomness::space()),
        6 => Some(games::space()),
        7 => Some(cpu_space()),
        8 => Some(llm_space()),
        _ => None,
    }
}

/// Resolve a constraint id referenced by a space file.
pub fn resolve_constraint(id: &str) -> Option<Constraint> {
    match id {
        "energy_materials" => Some(energy::MATERIAL_CONSTRAINT),
        _ => None,
    }
}

/// Declared Task-7 space: thread counts 1..=128 plus 200/256/300, three
/// optimization levels, ten problem sizes.
pub fn cpu_space() -> EcSpace {
    let mut threads: Vec<f64> = (1..=128).map(|t| t as f64).collect();
    threads.extend([200.0, 256.0, 300.0]);
    EcSpace::new(vec![
        Factor::nums("th", &threads),
        Factor::labels("c", &["O1", "O2", "O3"]),
        Factor::nums("size", &(1..=10).map(|s| s as f64).collect::<Vec<_>>()),
    ])
    .expect("task 7 space is valid")
}

/// Declared Task-8 space: shots, prompting style, choice permutation,
/// language, choice modification, role.
pub fn llm_space() -> EcSpace {
    EcSpace::new(vec![
        Factor::nums("sh", &(0..=7).map(|s| s as f64).collect::<Vec<_>>()),
        Factor::labels("cot", &["none", "cot1", "cot2", "cot3"]),
        Factor::labels("p", &["none", "swap-wrong", "swap-correct-wrong", "swap-all"]),
        Factor::labels("lan", &["chinese", "english", "german"]),
        Factor::labels("mod", &["none", "random"]),
        Factor::labels("role", &["none", "mathematician", "student", "math-teacher"]),
    ])
    .expect("task 8 space is valid")
}
