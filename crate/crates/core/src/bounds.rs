//! Separation of consecutive pre-vertices and lower bounds on the zero radius.
//!
//! All equations here have monotone right-hand sides and are solved by plain
//! bisection.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::blaschke::{BlaschkeError, BlaschkeProduct};
use crate::prevertex::{MapKind, MapSpec, PrevertexError};
use crate::scmap::Verdict;

pub const BISECTION_TOL: f64 = 1e-12;
pub const MAX_BISECTION_ITERS: usize = 200;
/// Constant used to widen the small-radius window by `C eps^2`.
pub const WINDOW_SLACK_C: f64 = 10.0;
pub const MAX_WINDOW_EPS: f64 = 0.05;
/// Slack on both sides of the mixed separation inequalities.
pub const MIXED_SLACK: f64 = 1e-9;
pub const MIN_CONVEXITY_SAMPLES: usize = 512;
/// Relative slack on `|z B1| <= |B2|`; the Koebe spec attains equality on the circle.
pub const CONVEXITY_SLACK: f64 = 1e-12;
const CONVEXITY_RINGS: usize = 16;

/// `2 - sqrt(3)`.
pub fn convexity_radius() -> f64 {
    2.0 - 3f64.sqrt()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("degree n must be at least 1")]
    ZeroDegree,
    #[error("radius {0} is outside [0, 1)")]
    RadiusOutOfRange(f64),
    #[error("eps {0} is outside [0, 0.05]")]
    EpsOutOfRange(f64),
    #[error("separation {0} is outside (0, 2pi)")]
    SeparationOutOfRange(f64),
    #[error("precondition failed: {0}")]
    PreconditionFailure(String),
    #[error(transparent)]
    Blaschke(#[from] BlaschkeError),
    #[error(transparent)]
    Prevertex(#[from] PrevertexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremal {
    MinSep,
    MaxSep,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationBound {
    pub kind: MapKind,
    pub n: usize,
    pub r: f64,
    pub two_theta_min: f64,
    pub two_psi_max: f64,
}

fn check_n_r(n: usize, r: f64) -> Result<(), BoundsError> {
    if n == 0 {
        return Err(BoundsError::ZeroDegree);
    }
    if !(0.0..1.0).contains(&r) {
        return Err(BoundsError::RadiusOutOfRange(r));
    }
    Ok(())
}

fn lambda(r: f64) -> f64 {
    (1.0 + r) / (1.0 - r)
}

/// `m theta + 2 n arctan(lam tan(theta/2)) - pi`.
pub fn separation_residual(kind: MapKind, n: usize, lam: f64, theta: f64) -> f64 {
    kind.power() as f64 * theta + 2.0 * n as f64 * (lam * (theta / 2.0).tan()).atan() - PI
}

fn bisect(kind: MapKind, n: usize, lam: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, PI / kind.power() as f64);
    for _ in 0..MAX_BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if separation_residual(kind, n, lam, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= BISECTION_TOL {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest possible gap `2 theta` between consecutive pre-vertices of a
/// convex map whose `n` zeros lie in `|z| <= r`.
pub fn min_separation(kind: MapKind, n: usize, r: f64) -> Result<f64, BoundsError> {
    check_n_r(n, r)?;
    Ok(2.0 * bisect(kind, n, lambda(r)))
}

/// Largest possible gap `2 psi`; same setting as [`min_separation`].
pub fn max_separation(kind: MapKind, n: usize, r: f64) -> Result<f64, BoundsError> {
    check_n_r(n, r)?;
    Ok(2.0 * bisect(kind, n, 1.0 / lambda(r)))
}

pub fn separation_bound(kind: MapKind, n: usize, r: f64) -> Result<SeparationBound, BoundsError> {
    Ok(SeparationBound {
        kind,
        n,
        r,
        two_theta_min: min_separation(kind, n, r)?,
        two_psi_max: max_separation(kind, n, r)?,
    })
}

/// `(pi/(m + (1+2 eps) n), pi/(m + (1-2 eps) n))`, the leading-order window
/// for `theta` and `psi` when every zero has modulus at most `eps`.
pub fn small_radius_window(kind: MapKind, n: usize, eps: f64) -> Result<(f64, f64), BoundsError> {
    if n == 0 {
        return Err(BoundsError::ZeroDegree);
    }
    if !(0.0..=MAX_WINDOW_EPS).contains(&eps) {
        return Err(BoundsError::EpsOutOfRange(eps));
    }
    let m = kind.power() as f64;
    let n = n as f64;
    Ok((
        PI / (m + (1.0 + 2.0 * eps) * n),
        PI / (m + (1.0 - 2.0 * eps) * n),
    ))
}

/// Principal root `e^{i phi/k}` of the unimodular equation defining the
/// extremal configuration.
pub fn extremal_direction(kind: MapKind, n: usize, which: Extremal) -> Complex64 {
    let k = n + kind.power();
    // right-hand side is (-1)^p
    let p = match (which, kind) {
        (Extremal::MinSep, _) => 1,
        (Extremal::MaxSep, MapKind::Interior) => n,
        (Extremal::MaxSep, MapKind::Exterior) => n + 1,
    };
    let phi = if p % 2 == 1 { PI } else { 0.0 };
    Complex64::from_polar(1.0, phi / k as f64)
}

/// The degree-`n` product with every zero at `r u`, `u` from [`extremal_direction`].
pub fn extremal_configuration(
    kind: MapKind,
    n: usize,
    r: f64,
    which: Extremal,
) -> Result<BlaschkeProduct, BoundsError> {
    check_n_r(n, r)?;
    let u = extremal_direction(kind, n, which);
    Ok(BlaschkeProduct::from_zeros(0.0, &vec![u * r; n])?)
}

/// The convex map spec `(B, 1)` built on [`extremal_configuration`].
pub fn extremal_spec(
    kind: MapKind,
    n: usize,
    r: f64,
    which: Extremal,
) -> Result<MapSpec, BoundsError> {
    let b = extremal_configuration(kind, n, r, which)?;
    Ok(MapSpec::new(kind, b, BlaschkeProduct::identity())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexPair {
    ConvexConvex,
    ConcaveConcave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Violated,
}

/// Both sides of the mixed separation inequality and the value they bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedSides {
    pub lower: f64,
    pub target: f64,
    pub upper: f64,
}

impl MixedSides {
    pub fn consistency(&self) -> Consistency {
        if self.lower <= self.target + MIXED_SLACK && self.target <= self.upper + MIXED_SLACK {
            Consistency::Consistent
        } else {
            Consistency::Violated
        }
    }
}

/// With `delta = two_delta/2`, `x = tan(delta/2)`:
/// `m' delta + 2 d1 atan(x/lam) - 2 d2 atan(lam x) <= T <= m' delta + 2 d1 atan(lam x) - 2 d2 atan(x/lam)`,
/// `T = pi` or `-pi` by pair type and `m' = 1` (interior) or `2` (exterior).
pub fn mixed_separation_sides(
    kind: MapKind,
    d1: usize,
    d2: usize,
    r: f64,
    two_delta: f64,
    pair: VertexPair,
) -> Result<MixedSides, BoundsError> {
    if !(0.0..1.0).contains(&r) {
        return Err(BoundsError::RadiusOutOfRange(r));
    }
    if !(two_delta > 0.0 && two_delta < 2.0 * PI) {
        return Err(BoundsError::SeparationOutOfRange(two_delta));
    }
    let delta = two_delta / 2.0;
    let x = (delta / 2.0).tan();
    let lam = lambda(r);
    let (d1, d2) = (d1 as f64, d2 as f64);
    let lead = kind.power() as f64 * delta;
    let target = match pair {
        VertexPair::ConvexConvex => PI,
        VertexPair::ConcaveConcave => -PI,
    };
    Ok(MixedSides {
        lower: lead + 2.0 * d1 * (x / lam).atan() - 2.0 * d2 * (lam * x).atan(),
        target,
        upper: lead + 2.0 * d1 * (lam * x).atan() - 2.0 * d2 * (x / lam).atan(),
    })
}

pub fn mixed_separation_check(
    kind: MapKind,
    d1: usize,
    d2: usize,
    r: f64,
    two_delta: f64,
    pair: VertexPair,
) -> Result<Consistency, BoundsError> {
    Ok(mixed_separation_sides(kind, d1, d2, r, two_delta, pair)?.consistency())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusBound {
    pub kind: MapKind,
    pub d1: usize,
    pub d2: usize,
    pub r_min: f64,
}

/// Lower bound on the largest zero modulus of any spec arising from a
/// univalent map with `d2 >= 1` concave vertices.
pub fn zero_radius_lower_bound(
    kind: MapKind,
    d1: usize,
    d2: usize,
) -> Result<RadiusBound, BoundsError> {
    if d2 == 0 {
        return Err(BoundsError::PreconditionFailure(
            "d2 must be at least 1; convex maps place no restriction on the zeros".into(),
        ));
    }
    let (a, b) = (d1 as f64, d2 as f64);
    let r_min = match kind {
        MapKind::Interior => {
            let s = (4.0 * a * b + 9.0).sqrt();
            let q = (1.0 + 4.0 * a * b).sqrt();
            ((s + 3.0 - 2.0 * b) / (s + 3.0 + 2.0 * b))
                .max((2.0 * b - 1.0 - q) / (2.0 * b + 1.0 + q))
        }
        MapKind::Exterior => {
            let s = (a * b + 4.0).sqrt();
            let q = (1.0 + a * b).sqrt();
            ((s + 2.0 - b) / (s + 2.0 + b)).max((b - 1.0 - q) / (b + 1.0 + q))
        }
    };
    Ok(RadiusBound {
        kind,
        d1,
        d2,
        r_min,
    })
}

/// Checks `|z B1(z)| <= |B2(z)|` on `|z| = 2 - sqrt(3)` and on inner rings.
///
/// Every interior spec coming from a univalent map passes.
pub fn convexity_radius_check(spec: &MapSpec, samples: usize) -> Result<Verdict, BoundsError> {
    if spec.kind() != MapKind::Interior {
        return Err(BoundsError::PreconditionFailure(
            "convexity radius check needs an interior spec".into(),
        ));
    }
    if samples < MIN_CONVEXITY_SAMPLES {
        return Err(BoundsError::PreconditionFailure(format!(
            "need at least {MIN_CONVEXITY_SAMPLES} samples, got {samples}"
        )));
    }
    let rho = convexity_radius();
    let holds = |z: Complex64| -> Result<bool, BoundsError> {
        let lhs = (z * spec.b1().eval(z)?).norm();
        Ok(lhs <= spec.b2().eval(z)?.norm() * (1.0 + CONVEXITY_SLACK))
    };
    if spec.b2().eval(Complex64::default())?.norm() == 0.0 {
        return Ok(Verdict::Fail);
    }
    for ring in 1..=CONVEXITY_RINGS {
        let radius = rho * ring as f64 / CONVEXITY_RINGS as f64;
        for j in 0..samples {
            let z = Complex64::from_polar(radius, 2.0 * PI * j as f64 / samples as f64);
            if !holds(z)? {
                return Ok(Verdict::Fail);
            }
        }
    }
    Ok(Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prevertex::{circular_gaps, solve_prevertices, DEFAULT_TOL};
    use approx::assert_abs_diff_eq;

    const KINDS: [MapKind; 2] = [MapKind::Interior, MapKind::Exterior];

    #[test]
    fn zero_radius_gives_equal_gaps() {
        for kind in KINDS {
            for n in 1..8 {
                let expected = 2.0 * PI / (n + kind.power()) as f64;
                assert_abs_diff_eq!(
                    min_separation(kind, n, 0.0).unwrap(),
                    expected,
                    epsilon = 1e-11
                );
                assert_abs_diff_eq!(
                    max_separation(kind, n, 0.0).unwrap(),
                    expected,
                    epsilon = 1e-11
                );
            }
        }
    }

    #[test]
    fn half_radius_single_zero() {
        let k = MapKind::Interior;
        assert_abs_diff_eq!(
            min_separation(k, 1, 0.5).unwrap(),
            2.0 * PI / 3.0,
            epsilon = 1e-11
        );
        assert_abs_diff_eq!(
            max_separation(k, 1, 0.5).unwrap(),
            4.0 * PI / 3.0,
            epsilon = 1e-11
        );
    }

    #[test]
    fn roots_satisfy_their_equations() {
        for kind in KINDS {
            for n in 1..9 {
                for i in 0..10 {
                    let r = i as f64 / 10.0;
                    let th = min_separation(kind, n, r).unwrap() / 2.0;
                    let ps = max_separation(kind, n, r).unwrap() / 2.0;
                    assert!(separation_residual(kind, n, lambda(r), th).abs() < 1e-10);
                    assert!(separation_residual(kind, n, 1.0 / lambda(r), ps).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn monotone_in_r_and_n() {
        for kind in KINDS {
            for n in 1..9 {
                let mins: Vec<f64> = (0..10)
                    .map(|i| min_separation(kind, n, i as f64 / 10.0).unwrap())
                    .collect();
                let maxs: Vec<f64> = (0..10)
                    .map(|i| max_separation(kind, n, i as f64 / 10.0).unwrap())
                    .collect();
                assert!(mins.windows(2).all(|w| w[1] < w[0]));
                assert!(maxs.windows(2).all(|w| w[1] > w[0]));
                for i in 0..10 {
                    let r = i as f64 / 10.0;
                    assert!(min_separation(kind, n + 1, r).unwrap() < mins[i]);
                    assert!(mins[i] <= maxs[i]);
                }
            }
        }
    }

    #[test]
    fn windows() {
        let (lo, hi) = small_radius_window(MapKind::Interior, 4, 0.0).unwrap();
        assert_abs_diff_eq!(lo, PI / 5.0);
        assert_abs_diff_eq!(hi, PI / 5.0);
        let (lo, hi) = small_radius_window(MapKind::Interior, 4, 0.01).unwrap();
        assert_abs_diff_eq!(lo, PI / 5.08, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, PI / 4.92, epsilon = 1e-15);
        let (lo, hi) = small_radius_window(MapKind::Exterior, 4, 0.01).unwrap();
        assert_abs_diff_eq!(lo, PI / 6.08, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, PI / 5.92, epsilon = 1e-15);
        assert!(small_radius_window(MapKind::Interior, 4, 0.06).is_err());
    }

    #[test]
    fn extremal_directions() {
        let d = extremal_direction(MapKind::Interior, 1, Extremal::MinSep);
        assert!((d - Complex64::i()).norm() < 1e-15);
        let d = extremal_direction(MapKind::Interior, 2, Extremal::MinSep);
        assert!((d - Complex64::from_polar(1.0, PI / 3.0)).norm() < 1e-15);
        let d = extremal_direction(MapKind::Exterior, 2, Extremal::MaxSep);
        assert!((d - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        for kind in KINDS {
            for n in 1..7 {
                let k = (n + kind.power()) as i32;
                let c = extremal_direction(kind, n, Extremal::MinSep);
                assert!((c.powi(k) + 1.0).norm() < 1e-13);
                let d = extremal_direction(kind, n, Extremal::MaxSep);
                let sign = if (n + kind.power() - 1) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                assert!((d.powi(k) - sign).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn extremal_configuration_attains_the_bounds() {
        for kind in KINDS {
            for n in 1..5 {
                for r in [0.1, 0.5, 0.9] {
                    let spec = extremal_spec(kind, n, r, Extremal::MinSep).unwrap();
                    let gaps = circular_gaps(&solve_prevertices(&spec, DEFAULT_TOL).unwrap().ts());
                    let g = gaps.iter().copied().fold(f64::INFINITY, f64::min);
                    assert_abs_diff_eq!(g, min_separation(kind, n, r).unwrap(), epsilon = 1e-7);
                    let spec = extremal_spec(kind, n, r, Extremal::MaxSep).unwrap();
                    let gaps = circular_gaps(&solve_prevertices(&spec, DEFAULT_TOL).unwrap().ts());
                    let g = gaps.iter().copied().fold(0.0, f64::max);
                    assert_abs_diff_eq!(g, max_separation(kind, n, r).unwrap(), epsilon = 1e-7);
                }
            }
        }
    }

    #[test]
    fn mixed_check_sharp_case() {
        // zeros at -r and r: the conjugate convex pair sits on the far side
        let r = 0.6;
        let spec = MapSpec::interior(
            BlaschkeProduct::from_zeros(0.0, &[Complex64::new(-r, 0.0)]).unwrap(),
            BlaschkeProduct::from_zeros(0.0, &[Complex64::new(r, 0.0)]).unwrap(),
        )
        .unwrap();
        let set = solve_prevertices(&spec, DEFAULT_TOL).unwrap();
        let convex: Vec<f64> = set
            .points()
            .iter()
            .filter(|p| p.beta > 0.0)
            .map(|p| p.t)
            .collect();
        let two_theta = (convex[1] - convex[0]).abs();
        let sides = mixed_separation_sides(
            MapKind::Interior,
            1,
            1,
            r,
            two_theta,
            VertexPair::ConvexConvex,
        )
        .unwrap();
        assert_abs_diff_eq!(sides.upper, PI, epsilon = 1e-9);
        assert_eq!(sides.consistency(), Consistency::Consistent);
    }

    #[test]
    fn mixed_check_reduces_at_zero_radius() {
        for d1 in 1..5 {
            let gap = 2.0 * PI / (d1 + 1) as f64;
            let s = mixed_separation_sides(
                MapKind::Interior,
                d1,
                0,
                0.0,
                gap,
                VertexPair::ConvexConvex,
            )
            .unwrap();
            assert_abs_diff_eq!(s.lower, s.upper, epsilon = 1e-14);
            assert_eq!(s.consistency(), Consistency::Consistent);
            let bad = mixed_separation_check(
                MapKind::Interior,
                d1,
                0,
                0.0,
                0.8 * gap,
                VertexPair::ConvexConvex,
            )
            .unwrap();
            assert_eq!(bad, Consistency::Violated);
        }
    }

    #[test]
    fn radius_bounds() {
        let b = zero_radius_lower_bound(MapKind::Interior, 0, 1).unwrap();
        assert_abs_diff_eq!(b.r_min, 0.5, epsilon = 1e-15);
        for n in 1..20 {
            let b = zero_radius_lower_bound(MapKind::Interior, n - 1, 1).unwrap();
            let s = ((4 * n + 5) as f64).sqrt();
            assert_abs_diff_eq!(b.r_min, (s + 1.0) / (s + 5.0), epsilon = 1e-14);
            assert!(b.r_min >= 0.5);
        }
        let b = zero_radius_lower_bound(MapKind::Exterior, 0, 1).unwrap();
        assert_abs_diff_eq!(b.r_min, 0.6, epsilon = 1e-15);
        assert!(matches!(
            zero_radius_lower_bound(MapKind::Interior, 3, 0),
            Err(BoundsError::PreconditionFailure(_))
        ));
    }

    #[test]
    fn convexity_radius_examples() {
        let koebe = MapSpec::interior(
            BlaschkeProduct::identity(),
            BlaschkeProduct::from_zeros(0.0, &[Complex64::new(-0.5, 0.0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(convexity_radius_check(&koebe, 512).unwrap(), Verdict::Pass);
        let convex = MapSpec::interior(
            BlaschkeProduct::from_zeros(
                0.7,
                &[Complex64::new(0.2, 0.5), Complex64::new(-0.9, 0.0)],
            )
            .unwrap(),
            BlaschkeProduct::identity(),
        )
        .unwrap();
        assert_eq!(convexity_radius_check(&convex, 512).unwrap(), Verdict::Pass);
        let near = MapSpec::interior(
            BlaschkeProduct::identity(),
            BlaschkeProduct::from_zeros(0.0, &[Complex64::new(0.1, 0.0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(convexity_radius_check(&near, 512).unwrap(), Verdict::Fail);
        assert!(convexity_radius_check(&koebe, 100).is_err());
    }
}
