//! The boundary function `phi(t) = arg(e^{imt} B1/B2 (e^{it}))` and what it
//! says about the polygon: exterior angles, convex/concave labels, vertex
//! counts, winding, univalence criteria and the traced image boundary.

mod formula;
mod injectivity;
mod trace;
mod univalence;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::prevertex::{MapKind, MapSpec, Prevertex, PrevertexSet, VertexLabel};
use crate::quadrature;

pub use formula::ScFormula;
pub use injectivity::{
    grid_injectivity, grid_injectivity_formula, symmetry_hypothesis_check, Injectivity,
    DEFAULT_RHO, MIN_INJECTIVITY_SAMPLES,
};
pub use trace::{
    trace_formula, trace_polygon, PolygonTrace, TraceEdge, TraceVertex, DEFAULT_NODES, MIN_NODES,
    RAY_CUTOFF,
};
pub use univalence::{
    sum_abs_beta, symmetric_threshold, univalence_bound, univalence_bound_symmetric,
    SymmetricOutcome, Verdict,
};

/// `|phi'|` below this is a degenerate vertex rather than a label.
pub const DEGENERATE_PHI_PRIME: f64 = 1e-10;

/// Minimum sample count for [`winding_degree`].
pub const MIN_WINDING_SAMPLES: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScmapError {
    #[error("degenerate vertex: |phi'| = {0:e} is below the labeling threshold")]
    DegenerateAngle(f64),
    #[error("vertex counts {counts:?} disagree with degrees d1={d1}, d2={d2}")]
    CountMismatch {
        counts: VertexCounts,
        d1: usize,
        d2: usize,
    },
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("argument jumps by more than pi near t={0}; increase samples")]
    UnwrapFailure(f64),
    #[error("angle sum {0} differs from 1")]
    AngleSum(f64),
    #[error("configuration is not conjugate-symmetric: {0}")]
    AsymmetricInput(String),
    #[error("symmetric endpoint angle {0} has modulus above 1/2")]
    EndpointAngleRange(f64),
    #[error("edge {0} between two infinite vertices has no finite anchor")]
    DivergentEdge(usize),
    #[error("need at least {min} quadrature nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },
}

/// `phi'(t) = m + |B1'(e^{it})| - |B2'(e^{it})|`.
pub fn phi_prime(spec: &MapSpec, t: f64) -> f64 {
    spec.power() as f64 + spec.b1().boundary_derivative_magnitude(t)
        - spec.b2().boundary_derivative_magnitude(t)
}

/// `beta = 1 / phi'` and the label from the sign of `phi'`.
pub fn angle_from_phi_prime(phi_prime: f64) -> Result<(f64, VertexLabel), ScmapError> {
    if !(phi_prime.abs() >= DEGENERATE_PHI_PRIME) {
        return Err(ScmapError::DegenerateAngle(phi_prime));
    }
    let label = if phi_prime > 0.0 {
        VertexLabel::Convex
    } else {
        VertexLabel::Concave
    };
    Ok((1.0 / phi_prime, label))
}

/// Recomputes every `beta`, `phi'` and label from the spec's boundary function.
pub fn exterior_angles(pvs: &PrevertexSet) -> Result<PrevertexSet, ScmapError> {
    let points = pvs
        .points()
        .iter()
        .map(|p| Prevertex::at(pvs.spec(), p.t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PrevertexSet::from_points(pvs.spec().clone(), points))
}

/// Label statistics around the circle, including the wrap-around pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VertexCounts {
    pub convex: usize,
    pub concave: usize,
    /// Convex followed by convex.
    pub a_runs: usize,
    /// One of each kind.
    pub b_switches: usize,
    /// Concave followed by concave.
    pub c_runs: usize,
}

impl VertexCounts {
    pub fn from_labels(labels: &[VertexLabel]) -> Self {
        let n = labels.len();
        let mut counts = VertexCounts::default();
        for (k, &label) in labels.iter().enumerate() {
            match label {
                VertexLabel::Convex => counts.convex += 1,
                VertexLabel::Concave => counts.concave += 1,
            }
            match (label, labels[(k + 1) % n]) {
                (VertexLabel::Convex, VertexLabel::Convex) => counts.a_runs += 1,
                (VertexLabel::Concave, VertexLabel::Concave) => counts.c_runs += 1,
                _ => counts.b_switches += 1,
            }
        }
        counts
    }
}

/// Counts labels and checks `concave = d2`, `convex = d1 + m`.
pub fn vertex_counts(pvs: &PrevertexSet) -> Result<VertexCounts, ScmapError> {
    let labels: Vec<_> = pvs.points().iter().map(|p| p.label).collect();
    let counts = VertexCounts::from_labels(&labels);
    let spec = pvs.spec();
    if counts.concave != spec.d2() || counts.convex != spec.d1() + spec.power() {
        return Err(ScmapError::CountMismatch {
            counts,
            d1: spec.d1(),
            d2: spec.d2(),
        });
    }
    Ok(counts)
}

/// Expected topological degree of `w` on the circle: `m + d1 - d2`.
pub fn expected_degree(spec: &MapSpec) -> i64 {
    spec.power() as i64 + spec.d1() as i64 - spec.d2() as i64
}

/// Net turns of `w(e^{it})` over `[0, 2pi]` by sampled unwrapping.
///
/// Each step takes the principal increment of `arg w`, which is exact when
/// `|phi'|` integrates to less than `pi` over the step; a step where the
/// bound from [`phi_prime_bound`] does not guarantee that is reported.
pub fn winding_degree(spec: &MapSpec, samples: usize) -> Result<i64, ScmapError> {
    if samples < MIN_WINDING_SAMPLES {
        return Err(ScmapError::TooFewSamples {
            min: MIN_WINDING_SAMPLES,
            got: samples,
        });
    }
    let step = TAU / samples as f64;
    let mut total = 0.0;
    let mut w_prev = spec.boundary_w(0.0);
    for j in 1..=samples {
        let t = j as f64 * step;
        if phi_prime_bound(spec, t - step, step) * step >= PI {
            return Err(ScmapError::UnwrapFailure(t));
        }
        let w = spec.boundary_w(t);
        total += (w / w_prev).arg();
        w_prev = w;
    }
    Ok((total / TAU).round() as i64)
}

/// Upper bound for `|phi'|` on `[t, t + h]`.
///
/// A zero `a` contributes the Poisson kernel `(1 - |a|^2)/|e^{is} - a|^2`, and
/// `|e^{is} - a| >= max(|e^{it} - a| - h, 1 - |a|)` on the arc.
pub fn phi_prime_bound(spec: &MapSpec, t: f64, h: f64) -> f64 {
    let z = Complex64::from_polar(1.0, t);
    let kernel = |a: Complex64| {
        let r = a.norm();
        let d = ((z - a).norm() - h).max(1.0 - r);
        (1.0 - r * r) / (d * d)
    };
    let zeros = spec.b1().zero_values().chain(spec.b2().zero_values());
    spec.power() as f64 + zeros.map(kernel).sum::<f64>()
}

/// Panels per unit of `1 - |a|` for the closest zero.
const PANEL_WIDTH_FACTOR: f64 = 4.0;
const MAX_PANELS: usize = 1 << 14;

/// `int_{t0}^{t1} phi'(t) dt` by adaptive Gauss-Legendre on panels no wider
/// than a few times the distance from the closest zero to the circle.
pub fn phi_increment(spec: &MapSpec, t0: f64, t1: f64) -> f64 {
    let gap = 1.0 - spec.max_zero_modulus();
    let len = t1 - t0;
    let panels = (len / (PANEL_WIDTH_FACTOR * gap))
        .ceil()
        .clamp(1.0, MAX_PANELS as f64) as usize;
    let h = len / panels as f64;
    let tol = 1e-11 / panels as f64;
    (0..panels)
        .map(|k| {
            let a = t0 + k as f64 * h;
            let b = if k + 1 == panels { t1 } else { a + h };
            quadrature::adaptive_real(&|t| phi_prime(spec, t), a, b, tol)
        })
        .sum()
}

/// `int phi'` over each arc between consecutive pre-vertices (the last arc wraps).
pub fn arc_increments(pvs: &PrevertexSet) -> Vec<f64> {
    let ts = pvs.ts();
    let n = ts.len();
    (0..n)
        .map(|k| {
            let t0 = ts[k];
            let t1 = if k + 1 < n { ts[k + 1] } else { ts[0] + TAU };
            phi_increment(pvs.spec(), t0, t1)
        })
        .collect()
}

/// The increment the label pair predicts: `2pi`, `0` or `-2pi`.
pub fn expected_increment(from: VertexLabel, to: VertexLabel) -> f64 {
    match (from, to) {
        (VertexLabel::Convex, VertexLabel::Convex) => TAU,
        (VertexLabel::Concave, VertexLabel::Concave) => -TAU,
        _ => 0.0,
    }
}

/// `int_0^{2pi} phi'`; equals `2pi (m + d1 - d2)`.
pub fn total_variation(spec: &MapSpec) -> f64 {
    phi_increment(spec, 0.0, TAU)
}

pub(crate) fn kind_exponent(kind: MapKind) -> i32 {
    match kind {
        MapKind::Interior => 0,
        MapKind::Exterior => 2,
    }
}
