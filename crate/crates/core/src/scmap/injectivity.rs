//! A sampled injectivity check on a circle close to the boundary, and the
//! half-disk sign condition used by the symmetric univalence criterion.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::ScFormula;
use crate::intersect::find_self_intersection;
use crate::prevertex::{MapKind, PrevertexSet};
use crate::quadrature;

pub const DEFAULT_RHO: f64 = 0.99;
/// Sample counts below this are raised to it.
pub const MIN_INJECTIVITY_SAMPLES: usize = 2048;
const STEP_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Injectivity {
    Injective,
    SelfIntersecting,
}

/// Samples `f(rho e^{it})` and reports whether the closed polyline crosses itself.
///
/// This is a heuristic: it only resolves crossings coarser than the sampling.
pub fn grid_injectivity(
    pvs: &PrevertexSet,
    scale: Complex64,
    rho: f64,
    samples: usize,
) -> Injectivity {
    grid_injectivity_formula(&ScFormula::from_prevertices(pvs, scale), rho, samples)
}

/// Same as [`grid_injectivity`] for an explicit formula.
pub fn grid_injectivity_formula(f: &ScFormula, rho: f64, samples: usize) -> Injectivity {
    let curve = circle_image(f, rho, samples.max(MIN_INJECTIVITY_SAMPLES));
    match find_self_intersection(&curve) {
        Some(_) => Injectivity::SelfIntersecting,
        None => Injectivity::Injective,
    }
}

/// `f(rho e^{i t_j}) - f(rho)` at `t_j = 2 pi j / samples`, accumulated
/// step by step with 8-point Gauss-Legendre.
pub fn circle_image(f: &ScFormula, rho: f64, samples: usize) -> Vec<Complex64> {
    let h = TAU / samples as f64;
    let mut out = Vec::with_capacity(samples);
    let mut acc = Complex64::default();
    for j in 0..samples {
        out.push(acc);
        let t = j as f64 * h;
        acc += quadrature::gauss_legendre(|s| f.circle_tangent(rho, s), t, t + h, STEP_NODES);
    }
    out
}

/// Checks `Im f(z) > 0` on a polar grid of the upper half-disk.
///
/// Only meaningful for interior maps normalized by `f(0) = 0`; exterior
/// formulas always fail. The grid has `radii` circles up to `0.98` and
/// `angles` rays strictly inside `(0, pi)`.
pub fn symmetry_hypothesis_check(f: &ScFormula, radii: usize, angles: usize) -> bool {
    if f.kind() != MapKind::Interior {
        return false;
    }
    (1..=radii).all(|i| {
        let r = 0.98 * i as f64 / radii as f64;
        (1..=angles).all(|j| {
            let theta = PI * j as f64 / (angles + 1) as f64;
            let q = f.value(Complex64::from_polar(r, theta), 16, 1e-10);
            q.value.im > 0.0
        })
    })
}
