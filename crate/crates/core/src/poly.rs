//! Dense complex polynomials and a simultaneous (Aberth-Ehrlich) root finder.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// Coefficients in ascending power order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    /// `prod (z - r_k)`.
    pub fn from_roots(roots: impl IntoIterator<Item = Complex64>) -> Self {
        roots
            .into_iter()
            .fold(Self::constant(Complex64::new(1.0, 0.0)), |p, r| {
                p.mul_linear(-r, Complex64::new(1.0, 0.0))
            })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Formal degree: coefficient count minus one.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Product by sequential convolution.
    pub fn mul_polynomial(&self, other: &Polynomial) -> Polynomial {
        let a = self.coeffs();
        let b = other.coeffs();
        let mut out = vec![Complex64::default(); a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Polynomial::new(out)
    }

    /// Multiplies by `c0 + c1 z`.
    pub fn mul_linear(&self, c0: Complex64, c1: Complex64) -> Self {
        let mut out = vec![Complex64::default(); self.coeffs.len() + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            out[k] += a * c0;
            out[k + 1] += a * c1;
        }
        Polynomial { coeffs: out }
    }

    /// Multiplies by `z^m`.
    pub fn shift(&self, m: usize) -> Self {
        let mut out = vec![Complex64::default(); m];
        out.extend_from_slice(&self.coeffs);
        Polynomial { coeffs: out }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or_default()
                    - other.coeffs.get(k).copied().unwrap_or_default()
            })
            .collect();
        Polynomial { coeffs }
    }

    /// Drops trailing coefficients with modulus at most `eps`.
    pub fn trimmed(&self, eps: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= eps) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, &c| acc * z + c)
    }

    /// Horner evaluation of `(p(z), p'(z))`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::default();
        let mut dp = Complex64::default();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::constant(Complex64::default());
        }
        Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AberthOptions {
    pub max_iter: usize,
    pub polish_steps: usize,
}

impl Default for AberthOptions {
    fn default() -> Self {
        AberthOptions {
            max_iter: 500,
            polish_steps: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RootsOutcome {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Starting points on the unit circle, each nudged off it by `1e-3` times an
/// index-dependent phase so that no two starts share a symmetry orbit.
pub fn circle_starts(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let base = Complex64::from_polar(1.0, (TAU * k as f64 + 0.4) / n as f64);
            base * (Complex64::new(1.0, 0.0)
                + 1e-3 * Complex64::from_polar(1.0, 2.0 * k as f64 + 1.0))
        })
        .collect()
}

/// All roots of `p` by Aberth-Ehrlich iteration followed by Newton polishing.
///
/// The leading coefficient must be nonzero.
pub fn aberth_roots(p: &Polynomial, opts: AberthOptions) -> RootsOutcome {
    let n = p.degree();
    if n == 0 {
        return RootsOutcome {
            roots: Vec::new(),
            iterations: 0,
            converged: true,
        };
    }
    let lead = p.leading();
    let monic = p.scale(Complex64::new(1.0, 0.0) / lead);
    if n == 1 {
        return RootsOutcome {
            roots: vec![-monic.coeffs[0]],
            iterations: 0,
            converged: true,
        };
    }

    let mut z = circle_starts(n);
    let mut done = vec![false; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (pv, dpv) = monic.eval_with_derivative(z[k]);
            if pv.norm() <= rounding_bound(&monic, z[k].norm()) {
                done[k] = true;
                continue;
            }
            let ratio = pv / dpv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[k] -= step;
            let rel = step.norm() / z[k].norm().max(1.0);
            if rel < 4.0 * f64::EPSILON {
                done[k] = true;
            }
            max_step = max_step.max(rel);
        }
        if done.iter().all(|&d| d) || max_step < 4.0 * f64::EPSILON {
            converged = true;
            break;
        }
    }

    for root in z.iter_mut() {
        newton_polish(&monic, root, opts.polish_steps);
    }

    RootsOutcome {
        roots: z,
        iterations,
        converged,
    }
}

/// Size of `|p(z)|` that Horner rounding alone can produce at `|z| = r`.
fn rounding_bound(p: &Polynomial, r: f64) -> f64 {
    let s = p.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
    4.0 * (p.coeffs.len() as f64) * f64::EPSILON * s
}

/// At most `steps` Newton steps, stopping as soon as `|p|` no longer decreases.
pub fn newton_polish(p: &Polynomial, z: &mut Complex64, steps: usize) {
    let (mut pv, mut dpv) = p.eval_with_derivative(*z);
    for _ in 0..steps {
        if pv == Complex64::default() || dpv == Complex64::default() {
            return;
        }
        let candidate = *z - pv / dpv;
        let (cp, cdp) = p.eval_with_derivative(candidate);
        if !(cp.norm() < pv.norm()) {
            return;
        }
        *z = candidate;
        pv = cp;
        dpv = cdp;
    }
}
