//! Task 6: noisy, discounted iterated price-war tournaments.
//!
//! "Make a discount" plays the defect role: mutual discounting pays (b, b),
//! discounting alone pays the discounter d and the holdout a, and mutual
//! holding pays (c, c); with a < b < c < d every grid tuple forms a
//! prisoner's dilemma. Strategies observe executed (post-noise) actions.
//!
//! Strategy randomness (the mixed and generous strategies) runs on streams
//! keyed by config and pairing only, never by the caller's seed: at zero
//! noise a match replays identically under any seed, which is what makes the
//! zero-noise grid rows exactly repeatable. The seed drives the noise streams
//! alone.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::ec::{EcSpace, Factor};
use crate::rng::stream;

/// Probability that generous tit-for-tat forgives an observed defection.
pub const FORGIVENESS: f64 = 0.3;
/// Defection probability of the mixed strategy.
pub const MIXED_RATE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Discount,
    Hold,
}

impl Action {
    fn flip(self) -> Action {
        match self {
            Action::Discount => Action::Hold,
            Action::Hold => Action::Discount,
        }
    }
}

/// One Task-6 evaluation condition.
#[derive(Debug, Clone, Copy)]
pub struct GameConfig {
    pub rounds: usize,
    /// (a, b, c, d) with a < b < c < d.
    pub payoffs: (f64, f64, f64, f64),
    /// Per-round earning decay factor.
    pub decay: f64,
    /// Probability of executing the wrong decision.
    pub noise: f64,
}

/// The six strategy objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    AlwaysDefect,
    AlwaysCooperate,
    TitForTat,
    GenerousTitForTat,
    Mixed,
    Consequence,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 6] = [
        StrategyKind::AlwaysDefect,
        StrategyKind::AlwaysCooperate,
        StrategyKind::TitForTat,
        StrategyKind::GenerousTitForTat,
        StrategyKind::Mixed,
        StrategyKind::Consequence,
    ];

    pub fn id(self) -> &'static str {
        match self {
            StrategyKind::AlwaysDefect => "always_defect",
            StrategyKind::AlwaysCooperate => "always_cooperate",
            StrategyKind::TitForTat => "tit_for_tat",
            StrategyKind::GenerousTitForTat => "generous_tft",
            StrategyKind::Mixed => "mixed",
            StrategyKind::Consequence => "consequence",
        }
    }
}

struct Player {
    kind: StrategyKind,
    rng: ChaCha8Rng,
    observed: Vec<Action>,
}

impl Player {
    fn decide(&mut self) -> Action {
        match self.kind {
            StrategyKind::AlwaysDefect => Action::Discount,
            StrategyKind::AlwaysCooperate => Action::Hold,
            StrategyKind::TitForTat => self.observed.last().copied().unwrap_or(Action::Hold),
            StrategyKind::GenerousTitForTat => match self.observed.last() {
                Some(Action::Discount) => {
                    if self.rng.gen::<f64>() < FORGIVENESS {
                        Action::Hold
                    } else {
                        Action::Discount
                    }
                }
                _ => Action::Hold,
            },
            StrategyKind::Mixed => {
                if self.rng.gen::<f64>() < MIXED_RATE {
                    Action::Discount
                } else {
                    Action::Hold
                }
            }
            StrategyKind::Consequence => match self.observed.as_slice() {
                [.., Action::Discount, Action::Discount] => Action::Discount,
                _ => Action::Hold,
            },
        }
    }
}

fn payoff(cfg: &GameConfig, a: Action, b: Action) -> (f64, f64) {
    let (s, p, r, t) = cfg.payoffs; // sucker, punishment, reward, temptation
    match (a, b) {
        (Action::Discount, Action::Discount) => (p, p),
        (Action::Discount, Action::Hold) => (t, s),
        (Action::Hold, Action::Discount) => (s, t),
        (Action::Hold, Action::Hold) => (r, r),
    }
}

/// Identifies the per-(config, pairing) strategy streams.
#[derive(Debug, Clone, Copy)]
pub struct MatchSite {
    pub config_ordinal: u64,
    pub pair_code: u64,
}

impl MatchSite {
    pub fn new(config_ordinal: usize, first: usize, second: usize) -> Self {
        let (lo, hi) = if first <= second { (first, second) } else { (second, first) };
        MatchSite { config_ordinal: config_ordinal as u64, pair_code: (lo * 6 + hi) as u64 }
    }
}

/// Play one match; `seed` drives only the execution-noise streams. Returns
/// the discounted earnings of each side.
///
/// Self-play (both sides the same strategy) runs both sides on identical
/// streams, so the match mirrors exactly and contributes symmetric earnings.
pub fn play_match(
    first: StrategyKind,
    second: StrategyKind,
    cfg: &GameConfig,
    site: MatchSite,
    seed: u64,
) -> (f64, f64) {
    let strat_key = site.config_ordinal << 8 | site.pair_code;
    let mirrored = first == second;
    let (strat_b, noise_b_label) =
        if mirrored { ("game/strat-a", "game/noise-a") } else { ("game/strat-b", "game/noise-b") };
    let mut a = Player {
        kind: first,
        rng: stream(0, "game/strat-a", strat_key),
        observed: Vec::with_capacity(cfg.rounds),
    };
    let mut b = Player {
        kind: second,
        rng: stream(0, strat_b, strat_key),
        observed: Vec::with_capacity(cfg.rounds),
    };
    let mut noise_a = stream(seed, "game/noise-a", strat_key);
    let mut noise_b = stream(seed, noise_b_label, strat_key);
    let mut earnings = (0.0, 0.0);
    let mut weight = 1.0;
    for _ in 0..cfg.rounds {
        let mut act_a = a.decide();
        let mut act_b = b.decide();
        if noise_a.gen::<f64>() < cfg.noise {
            act_a = act_a.flip();
        }
        if noise_b.gen::<f64>() < cfg.noise {
            act_b = act_b.flip();
        }
        let (va, vb) = payoff(cfg, act_a, act_b);
        earnings.0 += weight * va;
        earnings.1 += weight * vb;
        weight *= cfg.decay;
        a.observed.push(act_b);
        b.observed.push(act_a);
    }
    earnings
}

/// One round-robin at one config: every unordered strategy pair (self-play
/// included) plays a single match. Entry `[i][j]` is strategy i's earning
/// against j from that shared match.
pub fn round_robin(cfg: &GameConfig, config_ordinal: usize, seed: u64) -> [[f64; 6]; 6] {
    let mut table = [[0.0f64; 6]; 6];
    for i in 0..6 {
        for j in i..6 {
            let site = MatchSite::new(config_ordinal, i, j);
            let (ui, uj) =
                play_match(StrategyKind::ALL[i], StrategyKind::ALL[j], cfg, site, seed);
            table[i][j] = ui;
            table[j][i] = uj;
        }
    }
    table
}

/// Total and net earning of one object at one config: mean own earning over
/// its six matches, minus the mean earning of its opponents in those matches.
pub fn tournament_entry(object: usize, table: &[[f64; 6]; 6]) -> (f64, f64) {
    let own: f64 = (0..6).map(|j| table[object][j]).sum::<f64>() / 6.0;
    let opponents: f64 = (0..6).map(|j| table[j][object]).sum::<f64>() / 6.0;
    (own, own - opponents)
}

/// The Task-6 EC space: rounds x payoff tuple x decay x noise.
pub fn space() -> EcSpace {
    let payoffs: &[&[f64]] = &[
        &[2.0, 4.0, 5.0, 6.0],
        &[1.0, 4.0, 5.0, 6.0],
        &[2.0, 4.0, 6.0, 7.0],
        &[1.0, 4.0, 6.0, 7.0],
        &[2.0, 3.0, 5.0, 7.0],
        &[1.0, 3.0, 5.0, 7.0],
        &[2.0, 3.0, 6.0, 7.0],
        &[1.0, 3.0, 6.0, 7.0],
        &[2.0, 5.0, 6.0, 7.0],
        &[1.0, 5.0, 6.0, 7.0],
    ];
    EcSpace::new(vec![
        Factor::nums("n", &[2.0, 5.0, 10.0, 100.0]),
        Factor::tuples("payoffs", payoffs),
        Factor::nums("delta", &[0.5, 0.58, 0.66, 0.74, 0.82, 0.9, 0.95, 0.975, 0.99]),
        Factor::nums(
            "epsilon",
            &[0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 1.0],
        ),
    ])
    .expect("task 6 space is valid")
}

/// Decode one config of [`space`] into simulator inputs.
pub fn config_from(space: &EcSpace, cfg: &crate::ec::Config) -> GameConfig {
    let payoffs = space.value(cfg, 1).as_tuple().unwrap();
    GameConfig {
        rounds: space.value(cfg, 0).as_num().unwrap() as usize,
        payoffs: (payoffs[0], payoffs[1], payoffs[2], payoffs[3]),
        decay: space.value(cfg, 2).as_num().unwrap(),
        noise: space.value(cfg, 3).as_num().unwrap(),
    }
}
