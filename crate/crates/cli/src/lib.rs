//! Library side of the `scmap` command-line tool: JSON documents, the
//! analysis pipeline, SVG figures, the seeded sampler and the verification
//! suites.

// `!(x < y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analyze;
pub mod document;
pub mod error;
pub mod near_sharp;
pub mod sampler;
pub mod svg;
pub mod verify;

pub use error::{CliError, ExitStatus};
