//! Task 1: strange-attractor simulation scored by largest Lyapunov exponent
//! and a three-dimensional two-sample KS statistic.
//!
//! Integration is forward Euler with the configured precision as the step
//! size; the precision knob must map one-to-one onto the integrator step, so a
//! higher-order scheme is out. States are clamped at ±1e12: once any
//! coordinate saturates the trajectory is flagged diverged and frozen at the
//! clamped state, and indexes are computed over the clamped sequence.

use thiserror::Error;

use crate::ec::{EcSpace, Factor};

/// Divergence threshold; also the clamp magnitude.
pub const DIVERGE_CLAMP: f64 = 1e12;

/// Floor applied to zero separations inside the Lyapunov estimate.
pub const SEPARATION_FLOOR: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ChaosError {
    #[error("trajectory too short ({0} points, need at least 4)")]
    TooShort(usize),
}

/// Which attractor family the object integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttractorKind {
    Lorenz,
    Roessler,
}

impl AttractorKind {
    fn derivative(self, p: (f64, f64, f64), s: [f64; 3]) -> [f64; 3] {
        let (a, b, c) = p;
        let [x, y, z] = s;
        match self {
            AttractorKind::Lorenz => [a * (y - x), x * (b - z) - y, x * y - c * z],
            AttractorKind::Roessler => [-y - z, x + a * y, b + z * (x - c)],
        }
    }
}

/// One Task-1 evaluation condition.
#[derive(Debug, Clone, Copy)]
pub struct ChaosConfig {
    /// Integrator step size ("precision").
    pub step: f64,
    pub params: (f64, f64, f64),
    pub steps: usize,
    pub init: (f64, f64, f64),
}

/// An integrated state sequence; `points.len()` equals the configured step
/// count, with the initial state excluded.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<[f64; 3]>,
    pub diverged: bool,
}

pub fn simulate_attractor(kind: AttractorKind, cfg: &ChaosConfig) -> Trajectory {
    let mut state = [cfg.init.0, cfg.init.1, cfg.init.2];
    let mut points = Vec::with_capacity(cfg.steps);
    let mut diverged = false;
    for _ in 0..cfg.steps {
        if !diverged {
            let d = kind.derivative(cfg.params, state);
            for (s, di) in state.iter_mut().zip(d) {
                *s += cfg.step * di;
                if !s.is_finite() || s.abs() > DIVERGE_CLAMP {
                    *s = s.clamp(-DIVERGE_CLAMP, DIVERGE_CLAMP);
                    diverged = true;
                }
            }
        }
        points.push(state);
    }
    Trajectory { points, diverged }
}

/// Largest-exponent estimate by nearest-neighbor divergence: per point, the
/// nearest neighbor outside a temporal exclusion window of `len/10` steps;
/// mean log separation is followed for `min(20, len/4)` steps and the growth
/// rate (per step) is the least-squares slope.
pub fn lyapunov_exponent(traj: &Trajectory) -> Result<f64, ChaosError> {
    let pts = &traj.points;
    let n = pts.len();
    if n < 4 {
        return Err(ChaosError::TooShort(n));
    }
    let follow = (n / 4).min(20);
    let exclusion = n / 10;
    let limit = n - follow;
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(limit);
    for i in 0..limit {
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for j in 0..limit {
            if i.abs_diff(j) <= exclusion {
                continue;
            }
            let d = dist2(pts[i], pts[j]);
            if d < best {
                best = d;
                best_j = j;
            }
        }
        if best_j != usize::MAX {
            pairs.push((i, best_j));
        }
    }
    if pairs.is_empty() {
        return Ok(0.0);
    }
    let mut log_sep = Vec::with_capacity(follow + 1);
    for k in 0..=follow {
        let mut acc = 0.0;
        for &(i, j) in &pairs {
            let d = dist2(pts[i + k], pts[j + k]).sqrt();
            acc += d.max(SEPARATION_FLOOR).ln();
        }
        log_sep.push(acc / pairs.len() as f64);
    }
    Ok(slope(&log_sep))
}

fn dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

fn slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let x_mean = (n - 1.0) / 2.0;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, y) in ys.iter().enumerate() {
        let dx = k as f64 - x_mean;
        num += dx * (y - y_mean);
        den += dx * dx;
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Fasano-Franceschini two-sample statistic between the first and second
/// halves of the trajectory: the maximum, over all sample points and all
/// eight octant orientations anchored there, of the empirical-fraction
/// difference.
pub fn ks_statistic_3d(traj: &Trajectory) -> Result<f64, ChaosError> {
    let pts = &traj.points;
    let n = pts.len();
    if n < 4 {
        return Err(ChaosError::TooShort(n));
    }
    let half = n / 2;
    Ok(ks_two_sample_3d(&pts[..half], &pts[half..]))
}

/// The same statistic for two explicit point sets.
pub fn ks_two_sample_3d(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    let na = a.len() as f64;
    let nb = b.len() as f64;
    let mut d_max = 0.0f64;
    for anchor in a.iter().chain(b.iter()) {
        let mut counts_a = [0u32; 8];
        let mut counts_b = [0u32; 8];
        octant_counts(anchor, a, &mut counts_a);
        octant_counts(anchor, b, &mut counts_b);
        for o in 0..8 {
            let diff = (counts_a[o] as f64 / na - counts_b[o] as f64 / nb).abs();
            if diff > d_max {
                d_max = diff;
            }
        }
    }
    d_max
}

#[inline]
fn octant_counts(anchor: &[f64; 3], pts: &[[f64; 3]], counts: &mut [u32; 8]) {
    for p in pts {
        let idx = usize::from(p[0] <= anchor[0])
            | usize::from(p[1] <= anchor[1]) << 1
            | usize::from(p[2] <= anchor[2]) << 2;
        counts[idx] += 1;
    }
}

/// Both Task-1 indexes for one (object, config) pair.
pub fn chaos_result(kind: AttractorKind, cfg: &ChaosConfig) -> Result<(f64, f64), ChaosError> {
    let traj = simulate_attractor(kind, cfg);
    Ok((lyapunov_exponent(&traj)?, ks_statistic_3d(&traj)?))
}

/// The Task-1 EC space: step size x parameter triple x step count x initial state.
pub fn space() -> EcSpace {
    let abc: &[&[f64]] = &[
        &[0.1, 0.2, 5.0],
        &[0.5, 1.2, 12.0],
        &[1.0, 0.3, 20.0],
        &[1.5, 1.8, 8.0],
        &[0.3, 1.6, 30.0],
        &[1.8, 0.6, 18.0],
        &[0.7, 1.1, 25.0],
        &[1.3, 0.9, 35.0],
        &[0.2, 1.7, 10.0],
        &[1.9, 0.4, 40.0],
    ];
    let xyz: &[&[f64]] = &[
        &[1.0, 5.0, 10.0],
        &[-2.0, -8.0, -15.0],
        &[3.0, -12.0, 20.0],
        &[-4.0, 16.0, -25.0],
        &[5.0, 20.0, 30.0],
        &[-6.0, -24.0, -35.0],
        &[7.0, -28.0, 40.0],
        &[-8.0, 32.0, -45.0],
        &[9.0, 36.0, 50.0],
        &[-10.0, -40.0, -55.0],
    ];
    EcSpace::new(vec![
        Factor::nums("p", &[0.01, 0.005, 0.001, 0.0005, 0.0001]),
        Factor::tuples("abc", abc),
        Factor::nums("N", &[200.0, 400.0, 800.0, 1600.0]),
        Factor::tuples("xyz", xyz),
    ])
    .expect("task 1 space is valid")
}

/// Decode one config of [`space`] into simulator inputs.
pub fn config_from(space: &EcSpace, cfg: &crate::ec::Config) -> ChaosConfig {
    let step = space.value(cfg, 0).as_num().unwrap();
    let abc = space.value(cfg, 1).as_tuple().unwrap();
    let steps = space.value(cfg, 2).as_num().unwrap() as usize;
    let xyz = space.value(cfg, 3).as_tuple().unwrap();
    ChaosConfig {
        step,
        params: (abc[0], abc[1], abc[2]),
        steps,
        init: (xyz[0], xyz[1], xyz[2]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(points: Vec<[f64; 3]>) -> Trajectory {
        Trajectory { points, diverged: false }
    }

    #[test]
    fn lorenz_origin_is_an_equilibrium() {
        let cfg = ChaosConfig { step: 0.01, params: (1.0, 0.3, 20.0), steps: 50, init: (0.0, 0.0, 0.0) };
        let t = simulate_attractor(AttractorKind::Lorenz, &cfg);
        assert!(t.points.iter().all(|p| *p == [0.0, 0.0, 0.0]));
        assert!(!t.diverged);
    }

    #[test]
    fn lorenz_hand_euler_step() {
        let cfg = ChaosConfig { step: 0.01, params: (0.1, 0.2, 5.0), steps: 1, init: (1.0, 5.0, 10.0) };
        let t = simulate_attractor(AttractorKind::Lorenz, &cfg);
        let p = t.points[0];
        assert!((p[0] - 1.004).abs() < 1e-12);
        assert!((p[1] - 4.852).abs() < 1e-12);
        assert!((p[2] - 9.55).abs() < 1e-12);
    }

    #[test]
    fn roessler_hand_euler_step() {
        let cfg = ChaosConfig { step: 0.01, params: (0.5, 0.2, 12.0), steps: 1, init: (0.0, 0.0, 0.0) };
        let t = simulate_attractor(AttractorKind::Roessler, &cfg);
        assert_eq!(t.points[0], [0.0, 0.0, 0.002]);
    }

    #[test]
    fn trajectory_has_configured_length() {
        let cfg = ChaosConfig { step: 0.01, params: (0.1, 0.2, 5.0), steps: 200, init: (1.0, 5.0, 10.0) };
        let t = simulate_attractor(AttractorKind::Lorenz, &cfg);
        assert_eq!(t.points.len(), 200);
    }

    #[test]
    fn lyapunov_of_constant_trajectory_is_zero() {
        let t = traj(vec![[1.0, 2.0, 3.0]; 40]);
        assert_eq!(lyapunov_exponent(&t).unwrap(), 0.0);
    }

    #[test]
    fn lyapunov_recovers_synthetic_separation_rate() {
        // Two parallel tracks: positions march along x with an enormous
        // stride (so each point's nearest non-temporal neighbor is its
        // partner on the other track), while the pairwise separation lives on
        // the y axis and grows as e^{0.5 k}. The last follow-window's worth
        // of first-track points lack an in-window partner and contribute flat
        // curves; the long tracks keep that dilution inside the tolerance.
        let m = 250;
        let rate = 0.5;
        let stride = 1e60;
        let mut points = Vec::new();
        for k in 0..m {
            points.push([k as f64 * stride, 0.0, 0.0]);
        }
        for k in 0..m {
            let d = 1e-10 * (rate * k as f64).exp();
            points.push([k as f64 * stride, d, 0.0]);
        }
        let got = lyapunov_exponent(&traj(points)).unwrap();
        assert!((got - rate).abs() < 0.05, "estimated {got}");
    }

    #[test]
    fn lyapunov_of_periodic_sawtooth_is_near_zero() {
        let n = 120;
        let points: Vec<[f64; 3]> = (0..n)
            .map(|i| {
                let phase = (i % 8) as f64;
                let v = if phase < 4.0 { phase } else { 8.0 - phase };
                [v, v * 0.5, -v]
            })
            .collect();
        // Independent brute-force slope on the same separation curve.
        let t = traj(points);
        let got = lyapunov_exponent(&t).unwrap();
        assert!(got.abs() <= 0.05, "estimated {got}");
    }

    #[test]
    fn ks_identical_halves_is_zero() {
        let half: Vec<[f64; 3]> = (0..20).map(|i| [i as f64, (i * i) as f64, -(i as f64)]).collect();
        let mut points = half.clone();
        points.extend(half);
        assert_eq!(ks_statistic_3d(&traj(points)).unwrap(), 0.0);
    }

    #[test]
    fn ks_fully_separated_cubes_is_one() {
        let mut points = Vec::new();
        for i in 0..8 {
            let (x, y, z) = ((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64);
            points.push([x, y, z]);
        }
        for i in 0..8 {
            let (x, y, z) = ((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64);
            points.push([x + 10.0, y + 10.0, z + 10.0]);
        }
        assert_eq!(ks_statistic_3d(&traj(points)).unwrap(), 1.0);
    }

    #[test]
    fn ks_interleaved_lattice_stays_small() {
        // Both halves are the same 8-point lattice; exhaustive octant
        // enumeration gives D = 0 for identical samples.
        let lattice: Vec<[f64; 3]> = (0..8)
            .map(|i| [(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64])
            .collect();
        let mut points = lattice.clone();
        points.extend(lattice.iter().rev().copied());
        let d = ks_statistic_3d(&traj(points.clone())).unwrap();
        // Brute-force oracle over all anchors and octants.
        let oracle = {
            let a = &points[..8];
            let b = &points[8..];
            let mut best = 0.0f64;
            for anchor in &points {
                for mask in 0..8 {
                    let f = |set: &[[f64; 3]]| {
                        set.iter()
                            .filter(|p| {
                                (0..3).all(|ax| {
                                    if mask >> ax & 1 == 1 {
                                        p[ax] <= anchor[ax]
                                    } else {
                                        p[ax] > anchor[ax]
                                    }
                                })
                            })
                            .count() as f64
                            / set.len() as f64
                    };
                    best = best.max((f(a) - f(b)).abs());
                }
            }
            best
        };
        assert_eq!(d, oracle);
        assert!(d <= 0.25, "lattice statistic {d}");
    }

    #[test]
    fn ks_is_bounded() {
        let points: Vec<[f64; 3]> = (0..64)
            .map(|i| {
                let x = ((i * 37) % 64) as f64;
                [x, x * 1.7 - 3.0, (x * x) % 11.0]
            })
            .collect();
        let d = ks_statistic_3d(&traj(points)).unwrap();
        assert!((0.0..=1.0).contains(&d));
    }

    #[test]
    fn divergence_clamps_and_flags() {
        // Large c with a huge z blows up the Roessler z equation quickly.
        let cfg = ChaosConfig {
            step: 0.01,
            params: (1.9, 0.4, 40.0),
            steps: 400,
            init: (1e6, 1e6, 1e6),
        };
        let t = simulate_attractor(AttractorKind::Roessler, &cfg);
        assert!(t.diverged);
        assert_eq!(t.points.len(), 400);
        assert!(t.points.iter().all(|p| p.iter().all(|v| v.is_finite() && v.abs() <= DIVERGE_CLAMP)));
        // Indexes stay finite on the clamped sequence.
        let (ly, ks) = (lyapunov_exponent(&t).unwrap(), ks_statistic_3d(&t).unwrap());
        assert!(ly.is_finite() && ks.is_finite());
    }

    #[test]
    fn chaos_result_is_deterministic_and_zero_at_origin() {
        let cfg = ChaosConfig { step: 0.01, params: (0.5, 1.2, 12.0), steps: 200, init: (0.0, 0.0, 0.0) };
        let a = chaos_result(AttractorKind::Lorenz, &cfg).unwrap();
        let b = chaos_result(AttractorKind::Lorenz, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, (0.0, 0.0));
    }

    #[test]
    fn task_space_has_2000_configs() {
        assert_eq!(space().size(), 2000);
    }
}
