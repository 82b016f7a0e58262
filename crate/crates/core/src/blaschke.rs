//! Finite Blaschke products `c * prod (z - a_k) / (1 - conj(a_k) z)` on the unit disk.
//!
//! Zeros are kept in insertion order; nothing here depends on an ordering.
//! The rotation is stored as an angle so `|c| = 1` holds by construction.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Zeros closer than this to the unit circle are rejected.
pub const DISK_MARGIN: f64 = 1e-12;

/// Evaluation points this close to a pole are rejected.
pub const POLE_GUARD: f64 = 1e-14;

/// Two zeros closer than this are treated as a common zero.
pub const COMMON_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlaschkeError {
    #[error("zero {re}+{im}i is not strictly inside the unit disk")]
    ZeroOutsideDisk { re: f64, im: f64 },
    #[error("evaluation point coincides with a pole at {re}+{im}i")]
    PoleEvaluation { re: f64, im: f64 },
    #[error("non-finite input")]
    NonFinite,
}

/// A point on the unit circle, stored by its argument in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct UnitComplex {
    angle: f64,
}

impl UnitComplex {
    pub const ONE: UnitComplex = UnitComplex { angle: 0.0 };

    pub fn from_angle(angle: f64) -> Self {
        UnitComplex {
            angle: normalize_angle(angle),
        }
    }

    pub fn from_degrees(deg: f64) -> Self {
        Self::from_angle(deg.to_radians())
    }

    /// Projects a nonzero complex number onto the circle.
    pub fn from_complex(z: Complex64) -> Self {
        Self::from_angle(z.arg())
    }

    pub fn angle(self) -> f64 {
        self.angle
    }

    pub fn value(self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }
}

impl std::ops::Mul for UnitComplex {
    type Output = UnitComplex;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: UnitComplex) -> UnitComplex {
        Self::from_angle(self.angle + other.angle)
    }
}

impl Default for UnitComplex {
    fn default() -> Self {
        Self::ONE
    }
}

/// Maps any finite angle into `[0, 2pi)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// A zero of a Blaschke product, strictly inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskZero(Complex64);

impl DiskZero {
    pub fn new(value: Complex64) -> Result<Self, BlaschkeError> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(BlaschkeError::NonFinite);
        }
        if value.norm() >= 1.0 - DISK_MARGIN {
            return Err(BlaschkeError::ZeroOutsideDisk {
                re: value.re,
                im: value.im,
            });
        }
        Ok(DiskZero(value))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }

    /// The pole `1 / conj(a)` of the factor, or `None` for `a = 0`.
    pub fn pole(self) -> Option<Complex64> {
        if self.0 == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self.0.conj())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BlaschkeProduct {
    rotation: UnitComplex,
    zeros: Vec<DiskZero>,
}

impl BlaschkeProduct {
    pub fn new(rotation: UnitComplex, zeros: Vec<DiskZero>) -> Self {
        BlaschkeProduct { rotation, zeros }
    }

    /// The constant product `B = 1`.
    pub fn identity() -> Self {
        Self::default()
    }

    /// Validates every zero; the rotation is given as an angle in radians.
    pub fn from_zeros(rotation_angle: f64, zeros: &[Complex64]) -> Result<Self, BlaschkeError> {
        let zeros = zeros
            .iter()
            .map(|&z| DiskZero::new(z))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(UnitComplex::from_angle(rotation_angle), zeros))
    }

    pub fn rotation(&self) -> UnitComplex {
        self.rotation
    }

    pub fn zeros(&self) -> &[DiskZero] {
        &self.zeros
    }

    pub fn zero_values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.zeros.iter().map(|z| z.value())
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Largest zero modulus, `0` for a constant product.
    pub fn max_zero_modulus(&self) -> f64 {
        self.zeros.iter().map(|z| z.modulus()).fold(0.0, f64::max)
    }

    /// `c * prod (z - a_k) / (1 - conj(a_k) z)`, factor by factor.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, BlaschkeError> {
        let one = Complex64::new(1.0, 0.0);
        let mut acc = self.rotation.value();
        for zero in &self.zeros {
            if let Some(pole) = zero.pole() {
                if (z - pole).norm() <= POLE_GUARD {
                    return Err(BlaschkeError::PoleEvaluation {
                        re: pole.re,
                        im: pole.im,
                    });
                }
            }
            let a = zero.value();
            acc *= (z - a) / (one - a.conj() * z);
        }
        Ok(acc)
    }

    /// Evaluates at `e^{it}`; the circle never meets a pole.
    pub fn eval_boundary(&self, t: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, t);
        let one = Complex64::new(1.0, 0.0);
        self.zeros.iter().fold(self.rotation.value(), |acc, zero| {
            let a = zero.value();
            acc * (z - a) / (one - a.conj() * z)
        })
    }

    /// `|B'(e^{it})| = sum (1 - |a_k|^2) / |e^{it} - a_k|^2`.
    pub fn boundary_derivative_magnitude(&self, t: f64) -> f64 {
        let z = Complex64::from_polar(1.0, t);
        self.zeros
            .iter()
            .map(|zero| {
                let a = zero.value();
                (1.0 - a.norm_sqr()) / (z - a).norm_sqr()
            })
            .sum()
    }

    /// The product of two Blaschke products: rotations multiply, zeros concatenate.
    pub fn product(&self, other: &BlaschkeProduct) -> BlaschkeProduct {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        BlaschkeProduct::new(self.rotation * other.rotation, zeros)
    }

    /// `B(e^{i sigma} z)` written again as a Blaschke product: zeros rotate by
    /// `-sigma` and the rotation picks up `e^{i sigma d}`.
    pub fn precompose_rotation(&self, sigma: f64) -> BlaschkeProduct {
        let turn = Complex64::from_polar(1.0, -sigma);
        let zeros = self
            .zeros
            .iter()
            .map(|z| DiskZero(z.value() * turn))
            .collect();
        BlaschkeProduct::new(
            UnitComplex::from_angle(self.rotation.angle() + sigma * self.degree() as f64),
            zeros,
        )
    }

    /// Multiplies the rotation by `e^{i angle}`.
    pub fn rotate(&self, angle: f64) -> BlaschkeProduct {
        BlaschkeProduct::new(
            UnitComplex::from_angle(self.rotation.angle() + angle),
            self.zeros.clone(),
        )
    }
}

impl fmt::Display for BlaschkeProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^{{{:.6}i}}", self.rotation.angle())?;
        for z in &self.zeros {
            let a = z.value();
            write!(f, " (z-({:.6}{:+.6}i))/(1-conj(a)z)", a.re, a.im)?;
        }
        Ok(())
    }
}

/// True when no zero of `b1` lies within [`COMMON_ZERO_TOL`] of a zero of `b2`.
pub fn common_zero_check(b1: &BlaschkeProduct, b2: &BlaschkeProduct) -> bool {
    b1.zeros.iter().all(|a| {
        b2.zeros
            .iter()
            .all(|b| (a.value() - b.value()).norm() > COMMON_ZERO_TOL)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_product(rng: &mut ChaCha8Rng, degree: usize, radius: f64) -> BlaschkeProduct {
        let zeros: Vec<_> = (0..degree)
            .map(|_| {
                let r = radius * rng.gen::<f64>().sqrt();
                Complex64::from_polar(r, rng.gen_range(0.0..TAU))
            })
            .collect();
        BlaschkeProduct::from_zeros(rng.gen_range(0.0..TAU), &zeros).unwrap()
    }

    #[test]
    fn constant_product_is_one() {
        let b = BlaschkeProduct::identity();
        assert_eq!(b.degree(), 0);
        assert_eq!(b.eval(c(0.3, -0.7)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn identity_map() {
        let b = BlaschkeProduct::from_zeros(0.0, &[c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!((b.eval(c(0.5, 0.0)).unwrap() - c(0.5, 0.0)).norm(), 0.0);
        assert_abs_diff_eq!(b.boundary_derivative_magnitude(1.234), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn boundary_value_is_one_at_one() {
        let b = BlaschkeProduct::from_zeros(0.0, &[c(-0.6, 0.0)]).unwrap();
        assert_abs_diff_eq!(
            (b.eval(c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn koebe_factor_derivative_at_pi() {
        let b = BlaschkeProduct::from_zeros(0.0, &[c(-0.5, 0.0)]).unwrap();
        assert_abs_diff_eq!(b.boundary_derivative_magnitude(PI), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn opposite_pair_factor_derivative_at_zero() {
        for r in [0.1, 0.3, 0.6, 0.9] {
            let b = BlaschkeProduct::from_zeros(0.0, &[c(r, 0.0)]).unwrap();
            assert_abs_diff_eq!(
                b.boundary_derivative_magnitude(0.0),
                (1.0 + r) / (1.0 - r),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn rejects_zeros_on_or_outside_circle() {
        assert!(DiskZero::new(c(1.0, 0.0)).is_err());
        assert!(DiskZero::new(c(0.0, 1.0 - 1e-13)).is_err());
        assert!(DiskZero::new(c(f64::NAN, 0.0)).is_err());
        assert!(DiskZero::new(c(0.0, 0.999)).is_ok());
    }

    #[test]
    fn pole_is_rejected() {
        let b = BlaschkeProduct::from_zeros(0.0, &[c(0.5, 0.0)]).unwrap();
        assert!(matches!(
            b.eval(c(2.0, 0.0)),
            Err(BlaschkeError::PoleEvaluation { .. })
        ));
        assert!(b.eval(c(2.0, 1e-6)).is_ok());
    }

    #[test]
    fn common_zero_examples() {
        let p = BlaschkeProduct::from_zeros(0.0, &[c(0.3, 0.0)]).unwrap();
        let m = BlaschkeProduct::from_zeros(0.0, &[c(-0.3, 0.0)]).unwrap();
        assert!(common_zero_check(&p, &m));
        assert!(!common_zero_check(&p, &p));
        let b1 = BlaschkeProduct::from_zeros(0.0, &[c(-0.6, 0.0)]).unwrap();
        let b2 = BlaschkeProduct::from_zeros(0.0, &[c(0.6, 0.0)]).unwrap();
        assert!(common_zero_check(&b1, &b2));
    }

    #[test]
    fn unit_complex_normalizes() {
        assert_abs_diff_eq!(
            UnitComplex::from_angle(-PI / 2.0).angle(),
            1.5 * PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(UnitComplex::from_angle(TAU).angle(), 0.0);
        assert!(UnitComplex::from_angle(-1e-300).angle() < TAU);
        assert_abs_diff_eq!(
            UnitComplex::from_degrees(90.0).value().im,
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn maximum_modulus_by_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let degree = rng.gen_range(1..8);
            let b = random_product(&mut rng, degree, 0.95);
            for _ in 0..50 {
                let z =
                    Complex64::from_polar(0.999 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU));
                assert!(b.eval(z).unwrap().norm() < 1.0);
                let t = rng.gen_range(0.0..TAU);
                assert_abs_diff_eq!(b.eval_boundary(t).norm(), 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn derivative_matches_argument_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let degree = rng.gen_range(0..7);
            let b = random_product(&mut rng, degree, 0.9);
            let t = rng.gen_range(0.0..TAU);
            let h = 1e-5;
            let fd = (b.eval_boundary(t + h) / b.eval_boundary(t - h)).arg() / (2.0 * h);
            let exact = b.boundary_derivative_magnitude(t);
            assert!(
                (fd - exact).abs() <= 1e-6 * exact.max(1.0),
                "{fd} vs {exact}"
            );
        }
    }

    #[test]
    fn product_of_evaluations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (d1, d2) = (rng.gen_range(0..5), rng.gen_range(0..5));
            let b1 = random_product(&mut rng, d1, 0.9);
            let b2 = random_product(&mut rng, d2, 0.9);
            let z = Complex64::from_polar(rng.gen::<f64>(), rng.gen_range(0.0..TAU));
            let lhs = b1.product(&b2).eval(z).unwrap();
            let rhs = b1.eval(z).unwrap() * b2.eval(z).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn precomposed_rotation_matches_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = random_product(&mut rng, 4, 0.8);
        let sigma = PI / 7.0;
        let rotated = b.precompose_rotation(sigma);
        for _ in 0..20 {
            let z = Complex64::from_polar(rng.gen::<f64>(), rng.gen_range(0.0..TAU));
            let direct = b.eval(Complex64::from_polar(1.0, sigma) * z).unwrap();
            assert!((rotated.eval(z).unwrap() - direct).norm() < 1e-12);
        }
    }
}
