//! Exact computations around homological stability of unordered
//! configuration spaces: valuations, the mod-p homology of `C_k(R^n)`,
//! degree actions on section spaces, stability verdicts for closed
//! manifolds, and winding-number classes of planar configuration loops.

pub mod conf_algebra;
pub mod degree_calculus;
pub mod error;
pub mod json;
pub mod loop_homology;
pub mod padic;
pub mod sphere_les;
pub mod stability_oracle;

pub use error::{Error, Result};
