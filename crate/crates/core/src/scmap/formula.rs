//! The Schwarz-Christoffel derivative and values of `f` obtained by
//! integrating it along rays.
//!
//! Interior maps: `f'(z) = a prod (1 - z conj(z_k))^{-2 beta_k}`.
//! Exterior maps: `f'(z) = a z^{-2} prod (1 - z conj(z_k))^{2 beta_k}`.

use num_complex::Complex64;

use crate::prevertex::{MapKind, PrevertexSet};
use crate::quadrature::{self, QuadOutcome};

/// Inside this radius the exterior map is summed from its Laurent series.
const SERIES_RADIUS: f64 = 0.25;
const SERIES_TERMS: usize = 48;

#[derive(Debug, Clone)]
pub struct ScFormula {
    kind: MapKind,
    ts: Vec<f64>,
    points: Vec<Complex64>,
    betas: Vec<f64>,
    scale: Complex64,
    /// Taylor coefficients of `prod (1 - z conj(z_k))^{2 beta_k}` (exterior only).
    series: Vec<Complex64>,
}

impl ScFormula {
    /// Pre-vertices are given as `(t_k, beta_k)` and kept sorted by `t`.
    pub fn new(kind: MapKind, vertices: &[(f64, f64)], scale: Complex64) -> Self {
        let mut v = vertices.to_vec();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let ts: Vec<f64> = v.iter().map(|p| p.0).collect();
        let betas: Vec<f64> = v.iter().map(|p| p.1).collect();
        let points: Vec<Complex64> = ts.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let series = match kind {
            MapKind::Interior => Vec::new(),
            MapKind::Exterior => product_series(&points, &betas, 1.0, SERIES_TERMS),
        };
        ScFormula {
            kind,
            ts,
            points,
            betas,
            scale,
            series,
        }
    }

    pub fn from_prevertices(pvs: &PrevertexSet, scale: Complex64) -> Self {
        let v: Vec<(f64, f64)> = pvs.points().iter().map(|p| (p.t, p.beta)).collect();
        Self::new(pvs.spec().kind(), &v, scale)
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    fn exponent(&self) -> i32 {
        super::kind_exponent(self.kind)
    }

    fn sign(&self) -> f64 {
        match self.kind {
            MapKind::Interior => -1.0,
            MapKind::Exterior => 1.0,
        }
    }

    /// Power of `|z - z_k|` in `f'` near pre-vertex `k`.
    pub fn vertex_exponent(&self, k: usize) -> f64 {
        2.0 * self.sign() * self.betas[k]
    }

    /// Whether `f(z_k)` is finite, i.e. the vertex exponent exceeds `-1`.
    pub fn is_finite(&self, k: usize) -> bool {
        self.vertex_exponent(k) > -1.0
    }

    /// Coefficient of `1/z` in `f'`; zero when `f` is single-valued.
    pub fn residue(&self) -> Complex64 {
        match self.kind {
            MapKind::Interior => Complex64::default(),
            MapKind::Exterior => self.scale * self.series[1],
        }
    }

    /// `f'(z)` with principal-branch powers.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let log: Complex64 = self
            .points
            .iter()
            .zip(&self.betas)
            .map(|(zk, &b)| 2.0 * self.sign() * b * (Complex64::new(1.0, 0.0) - z * zk.conj()).ln())
            .sum();
        self.scale * log.exp() * z.powi(-self.exponent())
    }

    /// `d/dt f(rho e^{it})`.
    pub fn circle_tangent(&self, rho: f64, t: f64) -> Complex64 {
        let z = Complex64::from_polar(rho, t);
        self.derivative(z) * Complex64::i() * z
    }

    /// Distance from `z` to the nearest pre-vertex.
    pub fn singular_distance(&self, z: Complex64) -> f64 {
        self.points
            .iter()
            .map(|p| (z - p).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Where radial integration starts and the value of `f` there.
    fn base(&self, direction: Complex64) -> (Complex64, Complex64) {
        match self.kind {
            MapKind::Interior => (Complex64::default(), Complex64::default()),
            MapKind::Exterior => {
                let z0 = direction / direction.norm() * SERIES_RADIUS;
                (z0, self.exterior_series_value(z0))
            }
        }
    }

    /// `-a/z + r log z + sum_{j>=2} a p_j z^{j-1}/(j-1)` for small `|z|`.
    fn exterior_series_value(&self, z: Complex64) -> Complex64 {
        let mut sum = Complex64::default();
        let mut power = Complex64::new(1.0, 0.0);
        for j in 2..self.series.len() {
            power *= z;
            sum += self.series[j] * power / (j - 1) as f64;
        }
        -self.scale / z + self.residue() * z.ln() + self.scale * sum
    }

    /// `f(z)` for `0 < |z| <= 1` away from pre-vertices.
    ///
    /// Interior maps are normalized by `f(0) = 0`, exterior ones by
    /// `f(z) + a/z -> 0` as `z -> 0`.
    pub fn value(&self, z: Complex64, nodes: usize, rel_tol: f64) -> QuadOutcome {
        if self.kind == MapKind::Exterior && z.norm() <= SERIES_RADIUS {
            return QuadOutcome {
                value: self.exterior_series_value(z),
                error: 0.0,
                nodes: 0,
            };
        }
        if self.kind == MapKind::Interior && z == Complex64::default() {
            return QuadOutcome {
                value: z,
                error: 0.0,
                nodes: 0,
            };
        }
        let (z0, f0) = self.base(z);
        let d = z - z0;
        let first = 0.5 * self.singular_distance(z) / d.norm();
        let g = |s: f64| self.derivative(z0 + d * s) * d;
        let out =
            quadrature::singular_end_adaptive(&g, 1.0, 0.0, 0.0, first.min(1.0), nodes, rel_tol);
        QuadOutcome {
            value: f0 - out.value,
            ..out
        }
    }

    /// `f(z_k)` for a finite vertex.
    pub fn vertex_value(&self, k: usize, nodes: usize, rel_tol: f64) -> QuadOutcome {
        let zk = self.points[k];
        let (z0, f0) = self.base(zk);
        let d = zk - z0;
        let neighbor = self
            .points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, p)| (p - zk).norm())
            .fold(f64::INFINITY, f64::min);
        let first = (0.5 * neighbor / d.norm()).min(1.0);
        let g = |s: f64| self.derivative(z0 + d * s) * d;
        let out = quadrature::singular_end_adaptive(
            &g,
            1.0,
            0.0,
            self.vertex_exponent(k),
            first,
            nodes,
            rel_tol,
        );
        QuadOutcome {
            value: f0 - out.value,
            ..out
        }
    }
}

/// Taylor coefficients of `prod (1 - z conj z_k)^{2 sign beta_k}`.
fn product_series(points: &[Complex64], betas: &[f64], sign: f64, terms: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::default(); terms];
    for (j, cj) in c.iter_mut().enumerate().skip(1) {
        *cj = points
            .iter()
            .zip(betas)
            .map(|(p, &b)| -2.0 * sign * b * p.conj().powi(j as i32))
            .sum::<Complex64>()
            / j as f64;
    }
    let mut p = vec![Complex64::default(); terms];
    p[0] = Complex64::new(1.0, 0.0);
    for j in 1..terms {
        let s: Complex64 = (1..=j).map(|i| c[i] * i as f64 * p[j - i]).sum();
        p[j] = s / j as f64;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn koebe() -> ScFormula {
        ScFormula::new(
            MapKind::Interior,
            &[(0.0, 1.5), (PI, -0.5)],
            Complex64::new(1.0, 0.0),
        )
    }

    #[test]
    fn koebe_derivative_and_values() {
        let f = koebe();
        let z = Complex64::new(0.3, -0.4);
        let one = Complex64::new(1.0, 0.0);
        let exact = (one + z) / (one - z).powi(3);
        assert!((f.derivative(z) - exact).norm() < 1e-14);
        let v = f.value(z, 32, 1e-12);
        assert!((v.value - z / (one - z).powi(2)).norm() < 1e-12);
        let tip = f.vertex_value(1, 32, 1e-12);
        assert_abs_diff_eq!(tip.value.re, -0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(tip.value.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn exterior_series_matches_derivative() {
        let f = ScFormula::new(
            MapKind::Exterior,
            &[(0.0, 0.25), (PI / 2.0, 0.25), (PI, 0.25), (1.5 * PI, 0.25)],
            Complex64::new(1.0, 0.0),
        );
        assert!(f.residue().norm() < 1e-15);
        // f(z) = -1/z + series; compare the radial value just past the series disk
        let z = Complex64::from_polar(0.6, 0.3);
        let h = 1e-5;
        let fp = (f.value(z + h, 32, 1e-13).value - f.value(z - h, 32, 1e-13).value) / (2.0 * h);
        assert!((fp - f.derivative(z)).norm() < 1e-6 * f.derivative(z).norm());
        let inside = Complex64::from_polar(0.2, 1.1);
        let fp = (f.value(inside + h, 32, 1e-13).value - f.value(inside - h, 32, 1e-13).value)
            / (2.0 * h);
        assert!((fp - f.derivative(inside)).norm() < 1e-6 * f.derivative(inside).norm());
    }

    #[test]
    fn exterior_square_vertices_are_symmetric() {
        let f = ScFormula::new(
            MapKind::Exterior,
            &[(0.0, 0.25), (PI / 2.0, 0.25), (PI, 0.25), (1.5 * PI, 0.25)],
            Complex64::new(1.0, 0.0),
        );
        let v: Vec<_> = (0..4).map(|k| f.vertex_value(k, 32, 1e-12).value).collect();
        for k in 0..4 {
            assert!((v[(k + 1) % 4] - v[k] * Complex64::i().conj()).norm() < 1e-9);
            assert!(f.is_finite(k));
        }
    }
}
