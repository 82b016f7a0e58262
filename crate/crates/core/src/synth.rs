//! The inverse direction: Blaschke products from a pre-vertex/angle
//! configuration.
//!
//! For an interior map `f''/f' = -2 sum beta_k/(z - z_k)`, and solving
//! `f''/f' = 2R/(1 - zR)` for `R = B1/B2` gives `R = -P/(Q - zP)` with
//! `Q = prod (z - z_k)` and `P = sum beta_k prod_{j != k} (z - z_j)`.
//! For an exterior map `f''/f' = 2 (sum beta_k/(z - z_k) - 1/z)` and
//! `z f''/f' = 2/(z^2 R - 1)` give `R = P/(z (zP - Q))`.
//! Zeros of `R` inside the disk belong to `B1`, poles inside the disk to `B2`.

use num_complex::Complex64;
use thiserror::Error;

use crate::blaschke::{BlaschkeError, BlaschkeProduct, UnitComplex};
use crate::poly::{aberth_roots, AberthOptions, Polynomial};
use crate::prevertex::{MapKind, MapSpec, PrevertexError, ANGLE_SUM_TOL};

/// Roots closer than this to the unit circle make the split ambiguous.
pub const CIRCLE_MARGIN: f64 = 1e-9;
/// Tolerance on `|sum beta_k conj(z_k)|` for exterior configurations.
pub const RESIDUE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("need at least {0} pre-vertices")]
    TooFew(usize),
    #[error("angle sum {0} differs from 1")]
    AngleSum(f64),
    #[error("exterior configuration has nonzero residue {0:e}")]
    Residue(f64),
    #[error("a zero or pole of B1/B2 lies on the unit circle")]
    OnCircle,
    #[error("degrees {d1} + {d2} do not add up to {n}")]
    DegreeMismatch { d1: usize, d2: usize, n: usize },
    #[error(transparent)]
    Blaschke(#[from] BlaschkeError),
    #[error(transparent)]
    Spec(#[from] PrevertexError),
}

fn split_inside(p: &Polynomial) -> Result<Vec<Complex64>, SynthError> {
    let p = p.trimmed(1e-13 * p.max_coeff_modulus());
    let roots = aberth_roots(&p, AberthOptions::default()).roots;
    if roots.iter().any(|r| (r.norm() - 1.0).abs() < CIRCLE_MARGIN) {
        return Err(SynthError::OnCircle);
    }
    Ok(roots.into_iter().filter(|r| r.norm() < 1.0).collect())
}

/// Builds the map spec whose pre-vertices are `e^{i t_k}` with angles `beta_k`.
pub fn spec_from_angles(kind: MapKind, vertices: &[(f64, f64)]) -> Result<MapSpec, SynthError> {
    let m = kind.power();
    if vertices.len() < m {
        return Err(SynthError::TooFew(m));
    }
    let sum: f64 = vertices.iter().map(|v| v.1).sum();
    if (sum - 1.0).abs() > ANGLE_SUM_TOL {
        return Err(SynthError::AngleSum(sum));
    }
    let zs: Vec<Complex64> = vertices
        .iter()
        .map(|v| Complex64::from_polar(1.0, v.0))
        .collect();
    let one = Complex64::new(1.0, 0.0);
    let q = Polynomial::from_roots(zs.iter().copied());
    let mut p = Polynomial::constant(Complex64::default());
    for (k, v) in vertices.iter().enumerate() {
        let others = zs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, z)| *z);
        let term = Polynomial::from_roots(others).scale(Complex64::new(v.1, 0.0));
        p = p.sub(&term.scale(-one));
    }
    let zp = p.shift(1);
    let (numerator, denominator) = match kind {
        MapKind::Interior => (p.scale(-one), q.sub(&zp)),
        MapKind::Exterior => {
            let residue: Complex64 = vertices.iter().zip(&zs).map(|(v, z)| v.1 * z.conj()).sum();
            if residue.norm() > RESIDUE_TOL {
                return Err(SynthError::Residue(residue.norm()));
            }
            // P(0) vanishes with the residue; divide it out
            let mut c = p.coeffs().to_vec();
            c.remove(0);
            (Polynomial::new(c), zp.sub(&q))
        }
    };
    let a = split_inside(&numerator)?;
    let b = split_inside(&denominator)?;
    let n = vertices.len() - m;
    if a.len() + b.len() != n {
        return Err(SynthError::DegreeMismatch {
            d1: a.len(),
            d2: b.len(),
            n,
        });
    }
    let b1 = BlaschkeProduct::from_zeros(0.0, &a)?;
    let b2 = BlaschkeProduct::from_zeros(0.0, &b)?;
    // fix the rotation from R at a boundary point away from the pre-vertices
    let t = probe_angle(vertices);
    let z = Complex64::from_polar(1.0, t);
    let r = numerator.eval(z) / denominator.eval(z);
    let phase = r / (b1.eval_boundary(t) / b2.eval_boundary(t));
    let b1 = BlaschkeProduct::new(UnitComplex::from_complex(phase), b1.zeros().to_vec());
    Ok(MapSpec::new(kind, b1, b2)?)
}

/// Midpoint of the widest gap between the given angles.
fn probe_angle(vertices: &[(f64, f64)]) -> f64 {
    let mut ts: Vec<f64> = vertices
        .iter()
        .map(|v| v.0.rem_euclid(std::f64::consts::TAU))
        .collect();
    ts.sort_by(f64::total_cmp);
    let n = ts.len();
    (0..n)
        .map(|k| {
            let next = if k + 1 < n {
                ts[k + 1]
            } else {
                ts[0] + std::f64::consts::TAU
            };
            (next - ts[k], 0.5 * (ts[k] + next))
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map_or(0.0, |g| g.1)
}

/// Smallest correction of `betas` for which the exterior closure conditions
/// `sum beta_k = 1` and `sum beta_k e^{-i t_k} = 0` hold.
///
/// Returns `None` when the constraints are degenerate (fewer than three
/// distinct directions).
pub fn close_exterior_angles(ts: &[f64], betas: &[f64]) -> Option<Vec<f64>> {
    if ts.len() != betas.len() || ts.len() < 3 {
        return None;
    }
    let rows: [Vec<f64>; 3] = [
        vec![1.0; ts.len()],
        ts.iter().map(|t| t.cos()).collect(),
        ts.iter().map(|t| t.sin()).collect(),
    ];
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut gram = [[0.0; 3]; 3];
    for (i, row) in gram.iter_mut().enumerate() {
        for (j, g) in row.iter_mut().enumerate() {
            *g = dot(&rows[i], &rows[j]);
        }
    }
    let residual = [
        dot(&rows[0], betas) - 1.0,
        dot(&rows[1], betas),
        dot(&rows[2], betas),
    ];
    let y = solve3(gram, residual)?;
    Some(
        betas
            .iter()
            .enumerate()
            .map(|(k, b)| b - (0..3).map(|i| rows[i][k] * y[i]).sum::<f64>())
            .collect(),
    )
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cramer's rule; `None` for a numerically singular matrix.
fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let d = det3(&a);
    let scale = a.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    if d.abs() <= 1e-12 * scale.powi(3) {
        return None;
    }
    let mut x = [0.0; 3];
    for (i, xi) in x.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][i] = b[r];
        }
        *xi = det3(&m) / d;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prevertex::{solve_prevertices, DEFAULT_TOL};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn koebe_from_angles() {
        let spec = spec_from_angles(MapKind::Interior, &[(0.0, 1.5), (PI, -0.5)]).unwrap();
        assert_eq!((spec.d1(), spec.d2()), (0, 1));
        let b = spec.b2().zeros()[0].value();
        assert!((b - Complex64::new(-0.5, 0.0)).norm() < 1e-12);
        let set = solve_prevertices(&spec, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(set.betas()[0], 1.5, epsilon = 1e-10);
    }

    #[test]
    fn square_from_angles() {
        let v: Vec<_> = (0..4).map(|k| (PI / 2.0 * k as f64, 0.25)).collect();
        let spec = spec_from_angles(MapKind::Interior, &v).unwrap();
        assert_eq!((spec.d1(), spec.d2()), (3, 0));
        // a triple zero at the origin: Aberth resolves it to about eps^(1/3)
        for z in spec.b1().zeros() {
            assert!(z.modulus() < 1e-4);
        }
        let ext = spec_from_angles(MapKind::Exterior, &v).unwrap();
        assert_eq!((ext.d1(), ext.d2()), (2, 0));
    }

    #[test]
    fn round_trip_through_the_solver() {
        let v = [
            (0.3, 0.45),
            (1.9, -0.2),
            (2.6, 0.35),
            (4.0, 0.55),
            (5.1, -0.15),
        ];
        let spec = spec_from_angles(MapKind::Interior, &v).unwrap();
        assert_eq!(spec.d2(), 2);
        let set = solve_prevertices(&spec, DEFAULT_TOL).unwrap();
        for (p, (t, b)) in set.points().iter().zip(v) {
            assert_abs_diff_eq!(p.t, t, epsilon = 1e-9);
            assert_abs_diff_eq!(p.beta, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn closed_exterior_configuration_synthesizes() {
        let ts = [0.2, 1.5, 2.9, 4.1, 5.3];
        let b = close_exterior_angles(&ts, &[0.3, 0.1, 0.25, -0.1, 0.3]).unwrap();
        let sum: f64 = b.iter().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
        let residue: Complex64 = ts
            .iter()
            .zip(&b)
            .map(|(t, b)| Complex64::from_polar(*b, -t))
            .sum();
        assert!(residue.norm() < 1e-12);
        let v: Vec<_> = ts.iter().copied().zip(b.iter().copied()).collect();
        let spec = spec_from_angles(MapKind::Exterior, &v).unwrap();
        let set = solve_prevertices(&spec, DEFAULT_TOL).unwrap();
        for (p, beta) in set.points().iter().zip(&b) {
            assert_abs_diff_eq!(p.beta, *beta, epsilon = 1e-9);
        }
        assert_eq!(
            close_exterior_angles(&[0.0, 0.0, 0.0], &[0.3, 0.3, 0.4]),
            None
        );
    }

    #[test]
    fn exterior_needs_zero_residue() {
        let v = [(0.0, 0.5), (2.0, 0.3), (4.0, 0.2)];
        assert!(matches!(
            spec_from_angles(MapKind::Exterior, &v),
            Err(SynthError::Residue(_))
        ));
        assert!(matches!(
            spec_from_angles(MapKind::Interior, &[(0.0, 0.5), (1.0, 0.4)]),
            Err(SynthError::AngleSum(_))
        ));
    }
}
