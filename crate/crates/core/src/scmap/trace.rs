//! Tracing the image polygon: vertex positions, edge polylines, interior
//! angles and a path-independence check.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::{ScFormula, ScmapError};
use crate::prevertex::PrevertexSet;
use crate::quadrature::{self, QuadOutcome};

pub const DEFAULT_NODES: usize = 32;
/// Edges running to an infinite vertex stop this far (in `t`) from its pre-vertex.
pub const RAY_CUTOFF: f64 = 1e-3;
const CONVERGENCE_TOL: f64 = 1e-8;
const EDGE_SAMPLES: usize = 24;
pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceVertex {
    Finite {
        position: Complex64,
        /// Measured from the adjacent edge directions, in `(0, 2pi]`.
        interior_angle: f64,
    },
    Infinite,
}

impl TraceVertex {
    pub fn position(&self) -> Option<Complex64> {
        match *self {
            TraceVertex::Finite { position, .. } => Some(position),
            TraceVertex::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEdge {
    pub from: usize,
    pub to: usize,
    /// Image of the arc, ordered by increasing `t`.
    pub points: Vec<Complex64>,
    /// Unit tangent of the (straight) edge.
    pub direction: Complex64,
    /// The edge leaves through an infinite vertex at its start.
    pub start_ray: bool,
    /// The edge leaves through an infinite vertex at its end.
    pub end_ray: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonTrace {
    pub vertices: Vec<TraceVertex>,
    pub edges: Vec<TraceEdge>,
    /// Largest relative disagreement between routes to the same boundary point.
    pub path_error: f64,
    /// Largest node-doubling difference seen in any quadrature.
    pub quadrature_error: f64,
    /// Largest node count any quadrature used.
    pub nodes: usize,
}

impl PolygonTrace {
    /// `|measured - (pi - 2 pi beta)|` modulo `2pi`, for finite vertices.
    pub fn angle_errors(&self, betas: &[f64]) -> Vec<Option<f64>> {
        self.vertices
            .iter()
            .zip(betas)
            .map(|(v, &b)| match *v {
                TraceVertex::Finite { interior_angle, .. } => {
                    let d = (interior_angle - (PI - TAU * b)).rem_euclid(TAU);
                    Some(d.min(TAU - d))
                }
                TraceVertex::Infinite => None,
            })
            .collect()
    }

    pub fn finite_positions(&self) -> Vec<Complex64> {
        self.vertices.iter().filter_map(|v| v.position()).collect()
    }
}

/// Traces the polygon for solved pre-vertices with leading constant `scale`.
pub fn trace_polygon(
    pvs: &PrevertexSet,
    scale: Complex64,
    nodes: usize,
) -> Result<PolygonTrace, ScmapError> {
    trace_formula(&ScFormula::from_prevertices(pvs, scale), nodes)
}

struct Tracer<'a> {
    f: &'a ScFormula,
    nodes: usize,
    used: usize,
    error: f64,
}

impl Tracer<'_> {
    fn record(&mut self, q: QuadOutcome) -> Complex64 {
        self.used = self.used.max(q.nodes);
        self.error = self.error.max(q.error / q.value.norm().max(1.0));
        q.value
    }

    fn tangent(&self, t: f64) -> Complex64 {
        self.f.circle_tangent(1.0, t)
    }

    /// `int_{from}^{to} f'(e^{it}) i e^{it} dt` with `|t - from|^alpha` behavior at `from`
    /// and the nearest other singularity `reach` away from `from`.
    fn boundary_integral(&mut self, from: f64, to: f64, alpha: f64, reach: f64) -> Complex64 {
        let g = |t: f64| self.tangent(t);
        let first = (0.5 * reach / (to - from).abs()).min(1.0);
        let q = quadrature::singular_end_adaptive(
            &g,
            from,
            to,
            alpha,
            first,
            self.nodes,
            CONVERGENCE_TOL,
        );
        self.record(q)
    }
}

/// Same as [`trace_polygon`] for an explicit formula.
pub fn trace_formula(f: &ScFormula, nodes: usize) -> Result<PolygonTrace, ScmapError> {
    if nodes < MIN_NODES {
        return Err(ScmapError::TooFewNodes {
            min: MIN_NODES,
            got: nodes,
        });
    }
    let n = f.len();
    let ts = f.ts();
    let mut tr = Tracer {
        f,
        nodes,
        used: 0,
        error: 0.0,
    };
    if n == 0 {
        return Ok(PolygonTrace {
            vertices: Vec::new(),
            edges: Vec::new(),
            path_error: 0.0,
            quadrature_error: 0.0,
            nodes: 0,
        });
    }

    // unwrapped t of vertex k + j
    let t_at = |k: usize, j: usize| ts[(k + j) % n] + TAU * ((k + j) / n) as f64;
    let gap_after = |k: usize| t_at(k, 1) - ts[k];
    let gap_before = |k: usize| gap_after((k + n - 1) % n);
    let finite: Vec<bool> = (0..n).map(|k| f.is_finite(k)).collect();

    let mut positions = vec![None; n];
    for k in 0..n {
        if finite[k] {
            let q = f.vertex_value(k, nodes, CONVERGENCE_TOL);
            positions[k] = Some(tr.record(q));
        }
    }

    let mut path_error: f64 = 0.0;
    let mut edges = Vec::with_capacity(n);
    for k in 0..n {
        let next = (k + 1) % n;
        let t0 = ts[k];
        let t1 = t_at(k, 1);
        let tm = 0.5 * (t0 + t1);
        let half = 0.5 * (t1 - t0);
        let reach0 = gap_before(k).min(2.0 * half);
        let reach1 = gap_after(next).min(2.0 * half);

        let from_left =
            positions[k].map(|p| p + tr.boundary_integral(t0, tm, f.vertex_exponent(k), reach0));
        let from_right = positions[next]
            .map(|p| p + tr.boundary_integral(t1, tm, f.vertex_exponent(next), reach1));
        let radial = {
            let q = f.value(Complex64::from_polar(1.0, tm), nodes, CONVERGENCE_TOL);
            let converged = q.error <= CONVERGENCE_TOL * q.value.norm().max(1.0);
            (tr.record(q), converged)
        };
        let anchor = match (from_left, from_right) {
            (Some(l), _) => l,
            (None, Some(r)) => r,
            (None, None) => {
                if !(radial.0.re.is_finite() && radial.0.im.is_finite()) || !radial.1 {
                    return Err(ScmapError::DivergentEdge(k));
                }
                radial.0
            }
        };
        for route in [from_left, from_right, Some(radial.0)]
            .into_iter()
            .flatten()
        {
            path_error = path_error.max((route - anchor).norm() / anchor.norm().max(1.0));
        }

        let start_ray = !finite[k];
        let end_ray = !finite[next];
        let lo = if start_ray { t0 + RAY_CUTOFF } else { t0 };
        let hi = if end_ray { t1 - RAY_CUTOFF } else { t1 };
        let mut points = Vec::with_capacity(EDGE_SAMPLES + 1);
        for j in 0..=EDGE_SAMPLES {
            let t = lo + (hi - lo) * j as f64 / EDGE_SAMPLES as f64;
            let p = if j == 0 && !start_ray {
                positions[k].unwrap()
            } else if j == EDGE_SAMPLES && !end_ray {
                positions[next].unwrap()
            } else if t <= tm && !start_ray {
                positions[k].unwrap() + tr.boundary_integral(t0, t, f.vertex_exponent(k), reach0)
            } else if t > tm && !end_ray {
                positions[next].unwrap()
                    + tr.boundary_integral(t1, t, f.vertex_exponent(next), reach1)
            } else if t == tm {
                anchor
            } else {
                // regular at tm, near-singular toward the infinite end past t
                let reach = (t - t0).min(t1 - t);
                anchor - tr.boundary_integral(t, tm, 0.0, reach)
            };
            points.push(p);
        }
        let d = tr.tangent(tm);
        edges.push(TraceEdge {
            from: k,
            to: next,
            points,
            direction: d / d.norm(),
            start_ray,
            end_ray,
        });
    }

    let orientation = match f.kind() {
        crate::prevertex::MapKind::Interior => 1.0,
        crate::prevertex::MapKind::Exterior => -1.0,
    };
    let vertices = (0..n)
        .map(|k| match positions[k] {
            Some(position) => {
                let incoming = edges[(k + n - 1) % n].direction;
                let outgoing = edges[k].direction;
                // exterior maps traverse the polygon clockwise
                let turn = (outgoing / incoming).arg() * orientation;
                let mut interior_angle = PI - turn;
                if interior_angle <= 0.0 {
                    interior_angle += TAU;
                }
                TraceVertex::Finite {
                    position,
                    interior_angle,
                }
            }
            None => TraceVertex::Infinite,
        })
        .collect();

    Ok(PolygonTrace {
        vertices,
        edges,
        path_error,
        quadrature_error: tr.error,
        nodes: tr.used,
    })
}
