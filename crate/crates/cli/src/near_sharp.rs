//! Seeded search for interior angle configurations just above the
//! `sum |beta| <= 2` univalence bound whose polygon crosses itself.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sc_blaschke::intersect::find_self_intersection;
use sc_blaschke::scmap::{
    grid_injectivity_formula, sum_abs_beta, trace_formula, Injectivity, ScFormula, DEFAULT_NODES,
    DEFAULT_RHO,
};
use sc_blaschke::MapKind;

pub const SEARCH_SEED: u64 = 2024;
pub const MAX_SUM_ABS_BETA: f64 = 2.3;
pub const SEARCH_SAMPLES: usize = 4096;

/// The first hit of [`search`] with [`SEARCH_SEED`], as `(t, beta)` pairs.
/// Every vertex is finite and `sum |beta| = 2.159`.
pub const FROZEN: [(f64, f64); 9] = [
    (0.33974938714196046, 0.24172630209866808),
    (2.898134548689274, -0.0529146943539441),
    (3.5565511613344354, 0.09366290942481527),
    (4.0044412293762095, 0.47616651094048484),
    (4.453315701429865, 0.3530478825005828),
    (4.651058424639272, 0.3200276588178155),
    (4.9001290147127285, 0.09487473932998805),
    (5.553114559012688, -0.3585091333213898),
    (5.7233241801667845, -0.16808217543702064),
];

/// Random configuration: 5 to 9 vertices, 1 to 3 of them concave with total
/// concave mass in `[0.5, 0.65)`, every `|beta| < 1/2`.
fn candidate<R: Rng>(rng: &mut R) -> Option<Vec<(f64, f64)>> {
    let nv = rng.gen_range(5..=9);
    let concave = rng.gen_range(1..=3);
    let mass = 0.5 + rng.gen_range(0.0..0.15);
    let mut ts: Vec<f64> = (0..nv).map(|_| rng.gen_range(0.0..TAU)).collect();
    ts.sort_by(f64::total_cmp);
    let mut betas = vec![0.0; nv];
    let cuts: Vec<f64> = (0..concave).map(|_| rng.gen_range(0.1..1.0)).collect();
    let cut_sum: f64 = cuts.iter().sum();
    for k in 0..concave {
        betas[k] = -mass * cuts[k] / cut_sum;
    }
    let weights: Vec<f64> = (concave..nv).map(|_| rng.gen_range(0.1..1.0)).collect();
    let weight_sum: f64 = weights.iter().sum();
    for k in concave..nv {
        betas[k] = weights[k - concave] / weight_sum * (1.0 + mass);
    }
    if betas.iter().any(|b| b.abs() >= 0.5) {
        return None;
    }
    let mut order: Vec<usize> = (0..nv).collect();
    order.shuffle(rng);
    Some((0..nv).map(|k| (ts[k], betas[order[k]])).collect())
}

/// Whether both the sampled image of `|z| = 0.99` and the traced polygon
/// cross themselves.
pub fn self_intersects(config: &[(f64, f64)]) -> bool {
    let f = ScFormula::new(MapKind::Interior, config, Complex64::new(1.0, 0.0));
    if grid_injectivity_formula(&f, DEFAULT_RHO, SEARCH_SAMPLES) != Injectivity::SelfIntersecting {
        return false;
    }
    trace_formula(&f, DEFAULT_NODES)
        .is_ok_and(|t| find_self_intersection(&t.finite_positions()).is_some())
}

/// First configuration with `2 < sum |beta| <= 2.3` that [`self_intersects`],
/// within `max_draws` draws.
pub fn search(seed: u64, max_draws: usize) -> Option<Vec<(f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_draws {
        let Some(config) = candidate(&mut rng) else {
            continue;
        };
        let betas: Vec<f64> = config.iter().map(|v| v.1).collect();
        let s = sum_abs_beta(&betas);
        if s <= 2.0 || s > MAX_SUM_ABS_BETA {
            continue;
        }
        if self_intersects(&config) {
            return Some(config);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_configuration_is_near_sharp() {
        let betas: Vec<f64> = FROZEN.iter().map(|v| v.1).collect();
        let sum: f64 = betas.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        let s = sum_abs_beta(&betas);
        assert!(s > 2.0 && s <= MAX_SUM_ABS_BETA);
        assert!(self_intersects(&FROZEN));
    }
}
