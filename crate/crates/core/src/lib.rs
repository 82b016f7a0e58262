//! Schwarz-Christoffel maps of the disk described by a pair of finite
//! Blaschke products.
//!
//! A map onto the interior of an `(n+1)`-gon has pre-Schwarzian
//! `f''/f' = 2 (B1/B2) / (1 - z B1/B2)`; a map onto the exterior of an
//! `(n+2)`-gon satisfies `z f''/f' = 2 / (z^2 B1/B2 - 1)`. Given `(B1, B2)` this
//! crate finds the pre-vertices, the exterior angles and their convex/concave
//! labels, runs the univalence criteria, traces the image polygon, and
//! evaluates the separation and zero-radius bounds.
//!
//! ```
//! use num_complex::Complex64;
//! use sc_blaschke::{solve_prevertices, BlaschkeProduct, MapSpec, DEFAULT_TOL};
//!
//! // the Koebe function: B1 = 1, B2 = (z + 1/2) / (1 + z/2)
//! let b2 = BlaschkeProduct::from_zeros(0.0, &[Complex64::new(-0.5, 0.0)]).unwrap();
//! let spec = MapSpec::interior(BlaschkeProduct::identity(), b2).unwrap();
//! let set = solve_prevertices(&spec, DEFAULT_TOL).unwrap();
//! assert_eq!(set.len(), 2);
//! assert!((set.betas()[0] - 1.5).abs() < 1e-12);
//! ```

// `!(x < y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blaschke;
pub mod bounds;
pub mod intersect;
pub mod poly;
pub mod prevertex;
pub mod quadrature;
pub mod scmap;
pub mod synth;

pub use blaschke::{BlaschkeError, BlaschkeProduct, DiskZero, UnitComplex};
pub use bounds::{BoundsError, Extremal, RadiusBound, SeparationBound};
pub use prevertex::{
    oracle_prevertices, solve_prevertices, MapKind, MapSpec, Prevertex, PrevertexError,
    PrevertexSet, VertexLabel, DEFAULT_TOL,
};
pub use scmap::{Injectivity, PolygonTrace, ScFormula, ScmapError, Verdict, VertexCounts};
