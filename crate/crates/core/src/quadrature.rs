//! Gauss-Legendre and Gauss-Jacobi quadrature helpers.
//!
//! Node/weight tables come from `gauss-quad` (Golub-Welsch) and are cached per
//! thread. The integrators here add the pieces the map code needs: an
//! endpoint-singular integral `int_a^b F` with `F ~ |t - a|^alpha` near `a`,
//! geometric panel grading away from that endpoint, and node doubling.

use std::cell::RefCell;
use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::rc::Rc;

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi, GaussLegendre};
use num_complex::Complex64;

type Rule = Rc<[(f64, f64)]>;

thread_local! {
    static LEGENDRE: RefCell<HashMap<usize, Rule>> = RefCell::new(HashMap::new());
    static JACOBI: RefCell<HashMap<(usize, u64, u64), Rule>> = RefCell::new(HashMap::new());
}

/// Largest node count the doubling loops will try.
pub const MAX_NODES: usize = 512;

/// Nodes and weights on `[-1, 1]` for the weight `1`.
pub fn legendre_rule(n: usize) -> Rule {
    LEGENDRE.with(|cache| {
        cache
            .borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let deg = NonZeroUsize::new(n.max(1)).expect("nonzero");
                GaussLegendre::new(deg).as_node_weight_pairs().into()
            })
            .clone()
    })
}

/// Nodes and weights on `[-1, 1]` for the weight `(1 - x)^alpha (1 + x)^beta`.
///
/// Panics if either exponent is not above `-1`.
pub fn jacobi_rule(n: usize, alpha: f64, beta: f64) -> Rule {
    if alpha == 0.0 && beta == 0.0 {
        return legendre_rule(n);
    }
    JACOBI.with(|cache| {
        cache
            .borrow_mut()
            .entry((n, alpha.to_bits(), beta.to_bits()))
            .or_insert_with(|| {
                let deg = NonZeroUsize::new(n.max(1)).expect("nonzero");
                let a = FiniteAboveNegOneF64::new(alpha).expect("alpha > -1");
                let b = FiniteAboveNegOneF64::new(beta).expect("beta > -1");
                GaussJacobi::new(deg, a, b).as_node_weight_pairs().into()
            })
            .clone()
    })
}

/// Plain `n`-point Gauss-Legendre on `[a, b]` (either orientation).
pub fn gauss_legendre<F>(mut f: F, a: f64, b: f64, n: usize) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let sum: Complex64 = legendre_rule(n)
        .iter()
        .map(|&(x, w)| f(mid + half * x) * w)
        .sum();
    sum * half
}

/// `int_a^b F(t) dt` where `F(t) = |t - a|^alpha G(t)` with `G` smooth.
///
/// One Gauss-Jacobi panel of length `first * |b - a|` absorbs the power at `a`;
/// the rest of the interval is covered by Gauss-Legendre panels whose lengths
/// double moving away from `a`. `F` is evaluated directly; the weight is
/// divided back out at each node.
pub fn singular_end<F>(f: &F, a: f64, b: f64, alpha: f64, first: f64, nodes: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let len = b - a;
    let first = first.clamp(0.0, 1.0);
    let h = if first <= 0.0 { 1.0 } else { first };
    let end0 = a + h * len;
    let mut total = jacobi_panel(f, a, end0, alpha, nodes);
    let mut lo = h;
    while lo < 1.0 {
        let hi = (2.0 * lo).min(1.0);
        total += gauss_legendre(f, a + lo * len, a + hi * len, nodes);
        lo = hi;
    }
    total
}

fn jacobi_panel<F>(f: &F, a: f64, b: f64, alpha: f64, nodes: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let half = 0.5 * (b - a);
    if alpha == 0.0 {
        return gauss_legendre(f, a, b, nodes);
    }
    // weight (1 + x)^alpha puts the singular end at x = -1, i.e. t = a
    let sum: Complex64 = jacobi_rule(nodes, 0.0, alpha)
        .iter()
        .map(|&(x, w)| {
            let t = a + half * (1.0 + x);
            f(t) / (1.0 + x).powf(alpha) * w
        })
        .sum();
    sum * half
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome {
    pub value: Complex64,
    /// Difference between the last two node counts.
    pub error: f64,
    pub nodes: usize,
}

/// [`singular_end`] with node doubling from `nodes` until two successive
/// estimates differ by at most `rel_tol * max(1, |value|)`.
pub fn singular_end_adaptive<F>(
    f: &F,
    a: f64,
    b: f64,
    alpha: f64,
    first: f64,
    nodes: usize,
    rel_tol: f64,
) -> QuadOutcome
where
    F: Fn(f64) -> Complex64,
{
    let mut n = nodes.max(2);
    let mut prev = singular_end(f, a, b, alpha, first, n);
    loop {
        let next_n = 2 * n;
        let next = singular_end(f, a, b, alpha, first, next_n);
        let error = (next - prev).norm();
        if error <= rel_tol * next.norm().max(1.0) || next_n >= MAX_NODES {
            return QuadOutcome {
                value: next,
                error,
                nodes: next_n,
            };
        }
        prev = next;
        n = next_n;
    }
}

/// Adaptive bisection with 16-point Gauss-Legendre for real integrands.
///
/// The tolerance is absolute, halved per split, but never pushed below the
/// rounding level of the integral of `|f|`.
pub fn adaptive_real<F>(f: &F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let (whole, abs) = gl_real(f, a, b);
    let floor = ROUNDING_FACTOR * f64::EPSILON * abs;
    adaptive_step(f, a, b, whole, tol, floor, 0)
}

const ROUNDING_FACTOR: f64 = 256.0;
const MAX_DEPTH: u32 = 40;

/// The rule applied to `f` and to `|f|`.
fn gl_real<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let (mut sum, mut abs) = (0.0, 0.0);
    for &(x, w) in legendre_rule(16).iter() {
        let v = f(mid + half * x) * w;
        sum += v;
        abs += v.abs();
    }
    (half * sum, half.abs() * abs)
}

fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    floor: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (left, _) = gl_real(f, a, m);
    let (right, _) = gl_real(f, m, b);
    if (left + right - whole).abs() <= tol.max(floor) || depth >= MAX_DEPTH {
        return left + right;
    }
    adaptive_step(f, a, m, left, 0.5 * tol, floor, depth + 1)
        + adaptive_step(f, m, b, right, 0.5 * tol, floor, depth + 1)
}
