//! Seeded random map specs.
//!
//! Each trial draws a kind and degrees, then draws zeros uniformly in the
//! disk of radius [`ZERO_RHO`] until the spec is admissible and its image
//! curve is simple. When that starves (admissible specs thin out quickly as
//! `d2` grows) the trial falls back to synthesizing a spec from a random
//! angle configuration with the same degrees.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sc_blaschke::scmap::{grid_injectivity, Injectivity, DEFAULT_RHO};
use sc_blaschke::synth::{close_exterior_angles, spec_from_angles};
use sc_blaschke::{
    solve_prevertices, BlaschkeProduct, MapKind, MapSpec, PrevertexSet, DEFAULT_TOL,
};

pub const ZERO_RHO: f64 = 0.99;
pub const MAX_REDRAWS: usize = 50;
pub const MAX_D1: usize = 6;
pub const MAX_D2: usize = 3;
/// Samples for the injectivity filter.
pub const FILTER_SAMPLES: usize = 2048;

/// How an accepted spec was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    UniformZeros,
    AngleConfiguration,
}

/// An admissible draw together with its injectivity verdict.
#[derive(Debug, Clone)]
pub struct Draw {
    pub set: PrevertexSet,
    pub injectivity: Injectivity,
}

#[derive(Debug, Clone)]
pub struct Trial {
    pub index: usize,
    pub kind: MapKind,
    pub d1: usize,
    pub d2: usize,
    /// The accepted spec, if any draw was admissible and simple.
    pub accepted: Option<(Draw, Source)>,
    /// Every admissible draw, accepted or not.
    pub admissible: Vec<Draw>,
    pub warnings: Vec<String>,
}

/// Independent stream per trial so trials can run in any order.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn disk_point<R: Rng>(rng: &mut R, rho: f64) -> Complex64 {
    Complex64::from_polar(rho * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

fn product<R: Rng>(rng: &mut R, degree: usize) -> BlaschkeProduct {
    let zeros: Vec<Complex64> = (0..degree).map(|_| disk_point(rng, ZERO_RHO)).collect();
    BlaschkeProduct::from_zeros(rng.gen_range(0.0..TAU), &zeros)
        .expect("zeros drawn inside the disk")
}

pub fn uniform_spec<R: Rng>(rng: &mut R, kind: MapKind, d1: usize, d2: usize) -> Option<MapSpec> {
    let b1 = product(rng, d1);
    let b2 = product(rng, d2);
    MapSpec::new(kind, b1, b2).ok()
}

/// Random pre-vertices with exactly `d2` negative angles. Exterior
/// configurations are projected onto the closure conditions.
pub fn angle_configuration<R: Rng>(
    rng: &mut R,
    kind: MapKind,
    d1: usize,
    d2: usize,
) -> Option<Vec<(f64, f64)>> {
    let nv = d1 + d2 + kind.power();
    let mut ts: Vec<f64> = (0..nv).map(|_| rng.gen_range(0.0..TAU)).collect();
    ts.sort_by(f64::total_cmp);
    let mut idx: Vec<usize> = (0..nv).collect();
    idx.shuffle(rng);
    let mut betas = vec![0.0; nv];
    let mut concave = 0.0;
    for &k in &idx[..d2] {
        betas[k] = -rng.gen_range(0.02..0.35);
        concave += betas[k];
    }
    let weights: Vec<f64> = (0..nv).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = idx[d2..].iter().map(|&k| weights[k]).sum();
    for &k in &idx[d2..] {
        betas[k] = weights[k] / total * (1.0 - concave);
    }
    if kind == MapKind::Exterior {
        betas = close_exterior_angles(&ts, &betas)?;
        let negative = betas.iter().filter(|b| **b < 0.0).count();
        if negative != d2 || betas.iter().any(|b| b.abs() >= 0.5) {
            return None;
        }
    }
    Some(ts.into_iter().zip(betas).collect())
}

fn admissible(spec: &MapSpec) -> Option<Draw> {
    let set = solve_prevertices(spec, DEFAULT_TOL).ok()?;
    let injectivity = grid_injectivity(&set, Complex64::new(1.0, 0.0), DEFAULT_RHO, FILTER_SAMPLES);
    Some(Draw { set, injectivity })
}

pub fn run_trial(seed: u64, index: usize) -> Trial {
    let mut rng = trial_rng(seed, index);
    let kind = if rng.gen_bool(0.5) {
        MapKind::Interior
    } else {
        MapKind::Exterior
    };
    let d1 = rng.gen_range(0..=MAX_D1);
    let d2 = rng.gen_range(0..=MAX_D2);
    let mut trial = Trial {
        index,
        kind,
        d1,
        d2,
        accepted: None,
        admissible: Vec::new(),
        warnings: Vec::new(),
    };
    for _ in 0..MAX_REDRAWS {
        let Some(draw) = uniform_spec(&mut rng, kind, d1, d2)
            .as_ref()
            .and_then(admissible)
        else {
            continue;
        };
        trial.admissible.push(draw.clone());
        if draw.injectivity == Injectivity::Injective {
            trial.accepted = Some((draw, Source::UniformZeros));
            return trial;
        }
    }
    trial.warnings.push(format!(
        "trial {index}: sampler starvation for {} d1={d1} d2={d2} after {MAX_REDRAWS} uniform draws",
        kind.name()
    ));
    for _ in 0..MAX_REDRAWS {
        let Some(config) = angle_configuration(&mut rng, kind, d1, d2) else {
            continue;
        };
        let Ok(spec) = spec_from_angles(kind, &config) else {
            continue;
        };
        if spec.d1() != d1 || spec.d2() != d2 {
            continue;
        }
        let Some(draw) = admissible(&spec) else {
            continue;
        };
        trial.admissible.push(draw.clone());
        if draw.injectivity == Injectivity::Injective {
            trial.accepted = Some((draw, Source::AngleConfiguration));
            return trial;
        }
    }
    trial.warnings.push(format!(
        "trial {index}: no spec found by the angle-configuration fallback"
    ));
    trial
}
