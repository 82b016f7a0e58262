//! Pre-vertices: the unit-circle roots of `z^m B1(z) = B2(z)`.
//!
//! `m = 1` for maps onto the interior of a polygon and `m = 2` for maps onto
//! the exterior (normalized by `f(0) = inf`). Two independent routes are
//! provided: the polynomial solver [`solve_prevertices`] and the boundary
//! sampling oracle [`oracle_prevertices`].

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::blaschke::{common_zero_check, normalize_angle, BlaschkeProduct, UnitComplex};
use crate::poly::{aberth_roots, AberthOptions, Polynomial};
use crate::scmap::{self, ScmapError};

/// Default admissibility tolerance on `||z| - 1|`.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Leading coefficients below this modulus count as a degree collapse.
pub const DEGREE_COLLAPSE_EPS: f64 = 1e-12;

/// Minimum sample count for the boundary oracle.
pub const MIN_ORACLE_SAMPLES: usize = 1024;

/// Bracket width at which the oracle stops bisecting.
pub const ORACLE_BISECTION_TOL: f64 = 1e-12;

/// Steps shorter than this are no longer subdivided by the oracle.
pub const ORACLE_MIN_STEP: f64 = 1e-9;

/// Tolerance on the angle sum of a solved pre-vertex set, relative to
/// `max(1, sum |beta|)`.
pub const ANGLE_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrevertexError {
    #[error("common zero between B1 and B2")]
    CommonZero,
    #[error("degree collapse: leading coefficient {modulus:e} is numerically zero")]
    DegreeCollapse { modulus: f64 },
    #[error("inadmissible spec: {0}")]
    Inadmissible(Inadmissibility),
    #[error("tolerance {0:e} outside [1e-12, 1e-6]")]
    InvalidTolerance(f64),
    #[error("oracle needs at least {MIN_ORACLE_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Angle(#[from] ScmapError),
}

/// Why the gate rejected a spec.
#[derive(Debug, Clone, PartialEq)]
pub enum Inadmissibility {
    OffCircle { re: f64, im: f64, deviation: f64 },
    Cluster { separation: f64 },
    AngleSum { sum: f64 },
    ExteriorAngleRange { beta: f64 },
    NotConverged,
}

impl std::fmt::Display for Inadmissibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Inadmissibility::OffCircle { re, im, deviation } => {
                write!(
                    f,
                    "root {re}{im:+}i is off the unit circle by {deviation:e}"
                )
            }
            Inadmissibility::Cluster { separation } => {
                write!(f, "root cluster with separation {separation:e}")
            }
            Inadmissibility::AngleSum { sum } => write!(f, "angle sum {sum} differs from 1"),
            Inadmissibility::ExteriorAngleRange { beta } => {
                write!(f, "exterior map angle beta={beta} outside (-1, 1)")
            }
            Inadmissibility::NotConverged => write!(f, "root iteration did not converge"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    Interior,
    Exterior,
}

impl MapKind {
    /// The power `m` in `z^m B1 = B2`.
    pub fn power(self) -> usize {
        match self {
            MapKind::Interior => 1,
            MapKind::Exterior => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MapKind::Interior => "interior",
            MapKind::Exterior => "exterior",
        }
    }
}

/// A Schwarz-Christoffel map described by its Blaschke pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    kind: MapKind,
    b1: BlaschkeProduct,
    b2: BlaschkeProduct,
}

impl MapSpec {
    pub fn new(
        kind: MapKind,
        b1: BlaschkeProduct,
        b2: BlaschkeProduct,
    ) -> Result<Self, PrevertexError> {
        if !common_zero_check(&b1, &b2) {
            return Err(PrevertexError::CommonZero);
        }
        Ok(MapSpec { kind, b1, b2 })
    }

    pub fn interior(b1: BlaschkeProduct, b2: BlaschkeProduct) -> Result<Self, PrevertexError> {
        Self::new(MapKind::Interior, b1, b2)
    }

    pub fn exterior(b1: BlaschkeProduct, b2: BlaschkeProduct) -> Result<Self, PrevertexError> {
        Self::new(MapKind::Exterior, b1, b2)
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn b1(&self) -> &BlaschkeProduct {
        &self.b1
    }

    pub fn b2(&self) -> &BlaschkeProduct {
        &self.b2
    }

    pub fn d1(&self) -> usize {
        self.b1.degree()
    }

    pub fn d2(&self) -> usize {
        self.b2.degree()
    }

    /// `n = d1 + d2`.
    pub fn n(&self) -> usize {
        self.d1() + self.d2()
    }

    pub fn power(&self) -> usize {
        self.kind.power()
    }

    /// `n + 1` (interior) or `n + 2` (exterior).
    pub fn prevertex_count(&self) -> usize {
        self.n() + self.power()
    }

    /// Largest modulus over all zeros of `B1` and `B2`.
    pub fn max_zero_modulus(&self) -> f64 {
        self.b1.max_zero_modulus().max(self.b2.max_zero_modulus())
    }

    /// `w(e^{it}) = e^{imt} B1(e^{it}) / B2(e^{it})`, unimodular.
    pub fn boundary_w(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.power() as f64 * t) * self.b1.eval_boundary(t)
            / self.b2.eval_boundary(t)
    }

    /// The spec of `z -> f(e^{i sigma} z)`; its pre-vertices are those of
    /// `self` shifted by `-sigma`.
    pub fn rotated(&self, sigma: f64) -> MapSpec {
        let b1 = self
            .b1
            .precompose_rotation(sigma)
            .rotate(self.power() as f64 * sigma);
        let b2 = self.b2.precompose_rotation(sigma);
        MapSpec {
            kind: self.kind,
            b1,
            b2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    Convex,
    Concave,
}

impl VertexLabel {
    pub fn name(self) -> &'static str {
        match self {
            VertexLabel::Convex => "convex",
            VertexLabel::Concave => "concave",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prevertex {
    pub t: f64,
    pub z: UnitComplex,
    /// Exterior angle divided by `2 pi`.
    pub beta: f64,
    pub phi_prime: f64,
    pub label: VertexLabel,
}

impl Prevertex {
    /// Fills angle data at `t` from the boundary function of `spec`.
    pub fn at(spec: &MapSpec, t: f64) -> Result<Self, ScmapError> {
        let t = normalize_angle(t);
        let phi_prime = scmap::phi_prime(spec, t);
        let (beta, label) = scmap::angle_from_phi_prime(phi_prime)?;
        Ok(Prevertex {
            t,
            z: UnitComplex::from_angle(t),
            beta,
            phi_prime,
            label,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrevertexSet {
    spec: MapSpec,
    points: Vec<Prevertex>,
}

impl PrevertexSet {
    /// Assembles a set from already computed points, sorting by `t`.
    pub fn from_points(spec: MapSpec, mut points: Vec<Prevertex>) -> Self {
        points.sort_by(|a, b| a.t.total_cmp(&b.t));
        PrevertexSet { spec, points }
    }

    pub fn spec(&self) -> &MapSpec {
        &self.spec
    }

    pub fn points(&self) -> &[Prevertex] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ts(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn betas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.beta).collect()
    }

    pub fn beta_sum(&self) -> f64 {
        self.points.iter().map(|p| p.beta).sum()
    }

    /// Consecutive separations `t_{k+1} - t_k`, the last one wrapping through `2 pi`.
    pub fn gaps(&self) -> Vec<f64> {
        circular_gaps(&self.ts())
    }
}

/// Consecutive gaps of a sorted list of angles in `[0, 2pi)`, wrapping around.
pub fn circular_gaps(ts: &[f64]) -> Vec<f64> {
    match ts.len() {
        0 => Vec::new(),
        1 => vec![TAU],
        n => (0..n)
            .map(|k| {
                if k + 1 < n {
                    ts[k + 1] - ts[k]
                } else {
                    ts[0] + TAU - ts[k]
                }
            })
            .collect(),
    }
}

fn numerator(b: &BlaschkeProduct) -> Polynomial {
    Polynomial::from_roots(b.zero_values())
}

fn denominator(b: &BlaschkeProduct) -> Polynomial {
    b.zero_values()
        .fold(Polynomial::constant(Complex64::new(1.0, 0.0)), |p, a| {
            p.mul_linear(Complex64::new(1.0, 0.0), -a.conj())
        })
}

/// Coefficients (ascending) of
/// `P(z) = z^m c1 prod(z - a_k) prod(1 - conj(b_j) z) - c2 prod(z - b_j) prod(1 - conj(a_k) z)`.
pub fn to_polynomial(spec: &MapSpec) -> Result<Polynomial, PrevertexError> {
    let lhs = numerator(&spec.b1)
        .mul_polynomial(&denominator(&spec.b2))
        .shift(spec.power())
        .scale(spec.b1.rotation().value());
    let rhs = numerator(&spec.b2)
        .mul_polynomial(&denominator(&spec.b1))
        .scale(spec.b2.rotation().value());
    let p = lhs.sub(&rhs);
    let lead = p.leading();
    if lead.norm() < DEGREE_COLLAPSE_EPS {
        return Err(PrevertexError::DegreeCollapse {
            modulus: lead.norm(),
        });
    }
    Ok(p)
}

/// Pre-vertices by simultaneous iteration on [`to_polynomial`], gated on
/// unit modulus and simplicity.
pub fn solve_prevertices(spec: &MapSpec, tol: f64) -> Result<PrevertexSet, PrevertexError> {
    if !(1e-12..=1e-6).contains(&tol) {
        return Err(PrevertexError::InvalidTolerance(tol));
    }
    let p = to_polynomial(spec)?;
    let outcome = aberth_roots(&p, AberthOptions::default());
    for r in &outcome.roots {
        let deviation = (r.norm() - 1.0).abs();
        if !(deviation <= tol) {
            return Err(PrevertexError::Inadmissible(Inadmissibility::OffCircle {
                re: r.re,
                im: r.im,
                deviation,
            }));
        }
    }
    let roots = outcome.roots;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let separation = (roots[i] - roots[j]).norm();
            if separation <= 10.0 * tol {
                return Err(PrevertexError::Inadmissible(Inadmissibility::Cluster {
                    separation,
                }));
            }
        }
    }
    if !outcome.converged && roots.len() > 1 {
        return Err(PrevertexError::Inadmissible(Inadmissibility::NotConverged));
    }

    let points = roots
        .iter()
        .map(|r| Prevertex::at(spec, r.arg()))
        .collect::<Result<Vec<_>, _>>()?;
    let set = PrevertexSet::from_points(spec.clone(), points);

    let sum = set.beta_sum();
    let scale = set
        .points
        .iter()
        .map(|p| p.beta.abs())
        .sum::<f64>()
        .max(1.0);
    if (sum - 1.0).abs() > ANGLE_SUM_TOL * scale {
        return Err(PrevertexError::Inadmissible(Inadmissibility::AngleSum {
            sum,
        }));
    }
    if spec.kind() == MapKind::Exterior {
        if let Some(p) = set.points.iter().find(|p| !(p.beta > -1.0 && p.beta < 1.0)) {
            return Err(PrevertexError::Inadmissible(
                Inadmissibility::ExteriorAngleRange { beta: p.beta },
            ));
        }
    }
    Ok(set)
}

/// Locates every `t` with `w(e^{it}) = 1` from samples of `arg w`,
/// independently of the polynomial route.
///
/// Steps start on a uniform grid. A step is discarded when the bound on
/// `|phi'|` shows `arg w` cannot reach zero on it, bisected when `arg w`
/// changes sign across it, and otherwise split in half.
pub fn oracle_prevertices(spec: &MapSpec, samples: usize) -> Result<Vec<f64>, PrevertexError> {
    if samples < MIN_ORACLE_SAMPLES {
        return Err(PrevertexError::TooFewSamples(samples));
    }
    let g = |t: f64| spec.boundary_w(t).arg();
    let step = TAU / samples as f64;
    let mut roots = Vec::new();
    let mut g_prev = g(0.0);
    for j in 0..samples {
        let a = j as f64 * step;
        let b = if j + 1 == samples {
            TAU
        } else {
            (j + 1) as f64 * step
        };
        let g_next = g(b);
        oracle_step(spec, &g, (a, g_prev), (b, g_next), &mut roots);
        g_prev = g_next;
    }
    let mut roots: Vec<f64> = roots.into_iter().map(normalize_angle).collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < ORACLE_BISECTION_TOL);
    if roots.len() > 1 && roots[0] + TAU - roots[roots.len() - 1] < ORACLE_BISECTION_TOL {
        roots.pop();
    }
    Ok(roots)
}

fn oracle_step<G: Fn(f64) -> f64>(
    spec: &MapSpec,
    g: &G,
    (a, ga): (f64, f64),
    (b, gb): (f64, f64),
    roots: &mut Vec<f64>,
) {
    let h = b - a;
    // widened so that rounding never discards a step that holds a root
    let variation = scmap::phi_prime_bound(spec, a, h) * h * (1.0 + 1e-6) + 1e-12;
    let resolved = variation < FRAC_PI_2;
    if resolved && ga.abs() + gb.abs() > variation {
        return;
    }
    if h <= ORACLE_MIN_STEP {
        if ga == 0.0 {
            roots.push(a);
        } else if resolved && ga * gb < 0.0 {
            roots.push(bisect_arg(g, a, b, ga));
        }
        return;
    }
    if resolved && ga * gb < 0.0 {
        let r = bisect_arg(g, a, b, ga);
        roots.push(r);
        let (left, right) = (r - ORACLE_MIN_STEP, r + ORACLE_MIN_STEP);
        if left > a {
            oracle_step(spec, g, (a, ga), (left, g(left)), roots);
        }
        if right < b {
            oracle_step(spec, g, (right, g(right)), (b, gb), roots);
        }
        return;
    }
    let m = 0.5 * (a + b);
    let gm = g(m);
    oracle_step(spec, g, (a, ga), (m, gm), roots);
    oracle_step(spec, g, (m, gm), (b, gb), roots);
}

fn bisect_arg<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64, mut ga: f64) -> f64 {
    while b - a > ORACLE_BISECTION_TOL {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (ga < 0.0) == (gm < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
