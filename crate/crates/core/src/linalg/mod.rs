//! Exact integer and rational linear algebra.

pub mod dense;
pub mod rational;
pub mod snf;
pub mod sparse;

pub use snf::{smith_normal_form, smith_normal_form_with_transforms, SmithForm, SmithTransforms};
pub use sparse::{SparseIntMatrix, SparseVec};
