//! Sufficient univalence criteria on the exterior angles.

use std::f64::consts::PI;

use super::ScmapError;
use crate::prevertex::ANGLE_SUM_TOL;

/// Slack on the `sum |beta| <= 2` comparison.
pub const BOUND_SLACK: f64 = 1e-12;
/// Conjugate pairs must match this closely in both `t` and `beta`.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

pub fn sum_abs_beta(betas: &[f64]) -> f64 {
    betas.iter().map(|b| b.abs()).sum()
}

fn check_angle_sum(betas: &[f64]) -> Result<(), ScmapError> {
    let sum: f64 = betas.iter().sum();
    if (sum - 1.0).abs() > ANGLE_SUM_TOL {
        return Err(ScmapError::AngleSum(sum));
    }
    Ok(())
}

/// Passes iff `sum |beta_k| <= 2`. A failure is inconclusive.
pub fn univalence_bound(betas: &[f64]) -> Result<Verdict, ScmapError> {
    check_angle_sum(betas)?;
    Ok(Verdict::from_bool(sum_abs_beta(betas) <= 2.0 + BOUND_SLACK))
}

/// `3 + max(theta+ - pi, 0)/pi + max(theta- - pi, 0)/pi` with `theta = pi (1 - 2 beta)`.
pub fn symmetric_threshold(beta_plus: f64, beta_minus: f64) -> f64 {
    let excess = |b: f64| (PI * (1.0 - 2.0 * b) - PI).max(0.0) / PI;
    3.0 + excess(beta_plus) + excess(beta_minus)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricOutcome {
    pub verdict: Verdict,
    pub sum_abs_beta: f64,
    pub threshold: f64,
    /// Angle at the pre-vertex `z = 1`.
    pub beta_plus: f64,
    /// Angle at the pre-vertex `z = -1`.
    pub beta_minus: f64,
}

/// The relaxed bound for configurations symmetric under `z -> conj(z)`.
///
/// `vertices` are `(t, beta)` pairs. Pre-vertices must sit at `t = 0` and
/// `t = pi`, every other one must have a mirror at `2pi - t` with the same
/// angle, and the endpoint angles must satisfy `|beta| <= 1/2`. The caller is
/// responsible for the hypothesis `Im f(z) / Im z > 0`
/// (see [`super::symmetry_hypothesis_check`]).
pub fn univalence_bound_symmetric(vertices: &[(f64, f64)]) -> Result<SymmetricOutcome, ScmapError> {
    let betas: Vec<f64> = vertices.iter().map(|v| v.1).collect();
    check_angle_sum(&betas)?;
    let circ = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    };
    let find = |t: f64| {
        vertices
            .iter()
            .find(|v| circ(v.0, t) <= SYMMETRY_TOL)
            .map(|v| v.1)
    };
    let beta_plus =
        find(0.0).ok_or_else(|| ScmapError::AsymmetricInput("no pre-vertex at z = 1".into()))?;
    let beta_minus =
        find(PI).ok_or_else(|| ScmapError::AsymmetricInput("no pre-vertex at z = -1".into()))?;
    for &(t, b) in vertices {
        let mirror = vertices
            .iter()
            .any(|&(s, c)| circ(s, -t) <= SYMMETRY_TOL && (c - b).abs() <= SYMMETRY_TOL);
        if !mirror {
            return Err(ScmapError::AsymmetricInput(format!(
                "pre-vertex at t={t} with beta={b} has no mirror"
            )));
        }
    }
    for b in [beta_plus, beta_minus] {
        if b.abs() > 0.5 {
            return Err(ScmapError::EndpointAngleRange(b));
        }
    }
    let s = sum_abs_beta(&betas);
    let threshold = symmetric_threshold(beta_plus, beta_minus);
    Ok(SymmetricOutcome {
        verdict: Verdict::from_bool(s <= threshold + BOUND_SLACK),
        sum_abs_beta: s,
        threshold,
        beta_plus,
        beta_minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn plain_bound() {
        assert_eq!(univalence_bound(&[1.5, -0.5]).unwrap(), Verdict::Pass);
        assert_eq!(univalence_bound(&[0.25; 4]).unwrap(), Verdict::Pass);
        assert_eq!(univalence_bound(&[1.6, -0.3, -0.3]).unwrap(), Verdict::Fail);
        assert!(matches!(
            univalence_bound(&[0.5, 0.4]),
            Err(ScmapError::AngleSum(_))
        ));
        // concave apex with interior angle pi*lambda between two equal convex vertices
        for lambda in [1.0, 1.3, 1.7, 2.0] {
            let betas = [
                (1.0 + lambda) / 4.0,
                (1.0 + lambda) / 4.0,
                (1.0 - lambda) / 2.0,
            ];
            assert_abs_diff_eq!(sum_abs_beta(&betas), lambda, epsilon = 1e-15);
            assert!(univalence_bound(&betas).unwrap().passed());
        }
    }

    #[test]
    fn thresholds() {
        assert_abs_diff_eq!(symmetric_threshold(0.5, 0.5), 3.0);
        assert_abs_diff_eq!(symmetric_threshold(-0.5, -0.5), 5.0);
        assert_abs_diff_eq!(symmetric_threshold(-0.5, 0.0), 4.0);
        for b in [-0.5, -0.2, 0.0, 0.3, 0.5] {
            let th = symmetric_threshold(b, b);
            assert!((3.0..=5.0).contains(&th));
        }
    }

    #[test]
    fn symmetric_configurations() {
        // beta at 0 and pi equal to -1/2, a conjugate pair carrying the rest
        let v = [(0.0, -0.5), (1.0, 1.0), (PI, -0.5), (2.0 * PI - 1.0, 1.0)];
        let out = univalence_bound_symmetric(&v).unwrap();
        assert_abs_diff_eq!(out.threshold, 5.0);
        assert_abs_diff_eq!(out.sum_abs_beta, 3.0);
        assert_eq!(out.verdict, Verdict::Pass);
        assert_eq!(
            univalence_bound(&[-0.5, 1.0, -0.5, 1.0]).unwrap(),
            Verdict::Fail
        );
    }

    #[test]
    fn symmetric_input_errors() {
        let lopsided = [(0.0, 0.2), (1.0, 0.3), (PI, 0.2), (2.0 * PI - 1.1, 0.3)];
        assert!(matches!(
            univalence_bound_symmetric(&lopsided),
            Err(ScmapError::AsymmetricInput(_))
        ));
        let no_end = [(1.0, 0.5), (2.0 * PI - 1.0, 0.5)];
        assert!(matches!(
            univalence_bound_symmetric(&no_end),
            Err(ScmapError::AsymmetricInput(_))
        ));
        let wide = [(0.0, -0.7), (1.0, 0.6), (PI, 0.5), (2.0 * PI - 1.0, 0.6)];
        assert!(matches!(
            univalence_bound_symmetric(&wide),
            Err(ScmapError::EndpointAngleRange(_))
        ));
    }
}
