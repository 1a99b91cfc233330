//! Task 3: species colonies on a grid, scored by four stability indexes.
//!
//! Each cell holds a count. Per step, every occupied cell tries to add one
//! individual to each in-bounds 4-neighbor with probability
//! `min(1, s·κ_res)·(1 − occupancy/cap)` (occupancy read from the pre-step
//! grid), loses one individual with probability 0.05, and counts clamp at the
//! per-cell ceiling `ceil(L·κ_cap/4)`. Updates are synchronous
//! (double-buffered); the RNG is consumed in row-major cell order with a fixed
//! neighbor order, which pins the whole run to the seed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::ec::{EcSpace, Factor};
use crate::rng::stream;

pub const DEATH_PROBABILITY: f64 = 0.05;

/// Capacity-sensitivity coefficients ordered bacteria > yeast > algae.
const CAPACITY_COEF: [f64; 3] = [24.0, 11.0, 7.0];
/// Resource-demand coefficients ordered yeast > algae > bacteria.
const RESOURCE_COEF: [f64; 3] = [0.3, 0.6, 0.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    Bacteria,
    Yeast,
    Algae,
}

impl Species {
    pub const ALL: [Species; 3] = [Species::Bacteria, Species::Yeast, Species::Algae];

    pub fn id(self) -> &'static str {
        match self {
            Species::Bacteria => "bacteria",
            Species::Yeast => "yeast",
            Species::Algae => "algae",
        }
    }

    fn ordinal(self) -> usize {
        match self {
            Species::Bacteria => 0,
            Species::Yeast => 1,
            Species::Algae => 2,
        }
    }

    /// Per-cell count ceiling at environment capacity `L`.
    pub fn cell_cap(self, capacity: u32) -> u32 {
        (capacity as f64 * CAPACITY_COEF[self.ordinal()] / 4.0).ceil() as u32
    }

    /// Per-neighbor reproduction probability before the crowding factor.
    pub fn reproduction_rate(self, resource: f64) -> f64 {
        (resource * RESOURCE_COEF[self.ordinal()]).min(1.0)
    }
}

/// The six initial seeding patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitPattern {
    UpCentered,
    DownCentered,
    LeftCentered,
    RightCentered,
    Centered,
    Spread,
}

impl InitPattern {
    pub const ALL: [InitPattern; 6] = [
        InitPattern::UpCentered,
        InitPattern::DownCentered,
        InitPattern::LeftCentered,
        InitPattern::RightCentered,
        InitPattern::Centered,
        InitPattern::Spread,
    ];

    pub fn label(self) -> &'static str {
        match self {
            InitPattern::UpCentered => "up centered",
            InitPattern::DownCentered => "down centered",
            InitPattern::LeftCentered => "left centered",
            InitPattern::RightCentered => "right centered",
            InitPattern::Centered => "centered",
            InitPattern::Spread => "spread",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|p| p.label() == label)
    }
}

/// One Task-3 evaluation condition.
#[derive(Debug, Clone, Copy)]
pub struct ColonyConfig {
    pub side: usize,
    pub pattern: InitPattern,
    pub steps: usize,
    /// Environment capacity L.
    pub capacity: u32,
    /// Resource density s.
    pub resource: f64,
}

/// Seed the grid: edge/center patterns place a `ceil(a/5)`-sided block of
/// count-1 cells; `spread` sets every 4th cell, so the seeded population
/// scales with grid area just like the block patterns do.
pub fn initial_grid(side: usize, pattern: InitPattern) -> Vec<u16> {
    let mut grid = vec![0u16; side * side];
    let block = side.div_ceil(5);
    let centered = (side - block) / 2;
    let (row0, col0) = match pattern {
        InitPattern::UpCentered => (0, centered),
        InitPattern::DownCentered => (side - block, centered),
        InitPattern::LeftCentered => (centered, 0),
        InitPattern::RightCentered => (centered, side - block),
        InitPattern::Centered => (centered, centered),
        InitPattern::Spread => {
            for r in (0..side).step_by(4) {
                for c in (0..side).step_by(4) {
                    grid[r * side + c] = 1;
                }
            }
            return grid;
        }
    };
    for r in row0..row0 + block {
        for c in col0..col0 + block {
            grid[r * side + c] = 1;
        }
    }
    grid
}

/// Run the automaton from an explicit grid, reporting per-step totals and
/// handing each post-step grid to `inspect`.
pub fn simulate_grid(
    mut grid: Vec<u16>,
    side: usize,
    species: Species,
    steps: usize,
    capacity: u32,
    resource: f64,
    rng: &mut ChaCha8Rng,
    mut inspect: impl FnMut(&[u16]),
) -> Vec<u64> {
    let cap = species.cell_cap(capacity);
    let rate = species.reproduction_rate(resource);
    let mut history = Vec::with_capacity(steps + 1);
    history.push(total(&grid));
    inspect(&grid);
    let mut next = vec![0i32; side * side];
    for _ in 0..steps {
        for (n, &g) in next.iter_mut().zip(&grid) {
            *n = g as i32;
        }
        for r in 0..side {
            for c in 0..side {
                let at = r * side + c;
                if grid[at] == 0 {
                    continue;
                }
                for (dr, dc) in [(-1isize, 0isize), (1, 0), (0, -1), (0, 1)] {
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if nr < 0 || nc < 0 || nr >= side as isize || nc >= side as isize {
                        continue;
                    }
                    let target = nr as usize * side + nc as usize;
                    let crowding = 1.0 - grid[target] as f64 / cap as f64;
                    if rng.gen::<f64>() < rate * crowding {
                        next[target] += 1;
                    }
                }
                if rng.gen::<f64>() < DEATH_PROBABILITY {
                    next[at] -= 1;
                }
            }
        }
        for (g, n) in grid.iter_mut().zip(&next) {
            *g = (*n).clamp(0, cap as i32) as u16;
        }
        history.push(total(&grid));
        inspect(&grid);
    }
    history
}

fn total(grid: &[u16]) -> u64 {
    grid.iter().map(|&c| c as u64).sum()
}

/// Full run for one (config, species, seed): per-step total populations,
/// `steps + 1` entries.
pub fn simulate_colony(cfg: &ColonyConfig, species: Species, seed: u64) -> Vec<u64> {
    let mut rng = stream(seed, "colony", 0);
    simulate_grid(
        initial_grid(cfg.side, cfg.pattern),
        cfg.side,
        species,
        cfg.steps,
        cfg.capacity,
        cfg.resource,
        &mut rng,
        |_| {},
    )
}

/// The four stability indexes of one population history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityIndexes {
    pub avg_pop: f64,
    pub std_pop: f64,
    /// First step at which the population is at most half its start; the
    /// sentinel `steps + 1` when it never halves. An initially empty colony
    /// never had a population to halve, so it also reports the sentinel.
    pub half_life: f64,
    pub growth_rate: f64,
}

pub fn stability_indexes(history: &[u64]) -> StabilityIndexes {
    assert!(history.len() >= 1, "history holds at least the initial count");
    let n = history.len() - 1;
    let values: Vec<f64> = history.iter().map(|&p| p as f64).collect();
    let (avg, std) = crate::stats::mean_std(&values).expect("non-empty history");
    let start = values[0];
    let sentinel = (n + 1) as f64;
    let half_life = if start == 0.0 {
        sentinel
    } else {
        values
            .iter()
            .position(|&p| p <= start / 2.0)
            .map(|t| t as f64)
            .unwrap_or(sentinel)
    };
    let growth_rate = (values[n] - start) / start.max(1.0);
    StabilityIndexes { avg_pop: avg, std_pop: std, half_life, growth_rate }
}

/// The Task-3 EC space: grid side x initial pattern x steps x capacity x resource.
pub fn space() -> EcSpace {
    EcSpace::new(vec![
        Factor::nums("a", &[10.0, 20.0, 50.0, 100.0]),
        Factor::labels("A_init", &InitPattern::ALL.map(InitPattern::label)),
        Factor::nums("n", &[5.0, 10.0, 25.0, 100.0]),
        Factor::nums("L", &[4.0, 5.0, 6.0, 7.0]),
        Factor::nums("s", &[1.0, 1.5, 2.0, 2.5]),
    ])
    .expect("task 3 space is valid")
}

/// Decode one config of [`space`] into simulator inputs.
pub fn config_from(space: &EcSpace, cfg: &crate::ec::Config) -> ColonyConfig {
    ColonyConfig {
        side: space.value(cfg, 0).as_num().unwrap() as usize,
        pattern: InitPattern::from_label(space.value(cfg, 1).as_label().unwrap()).unwrap(),
        steps: space.value(cfg, 2).as_num().unwrap() as usize,
        capacity: space.value(cfg, 3).as_num().unwrap() as u32,
        resource: space.value(cfg, 4).as_num().unwrap(),
    }
}
