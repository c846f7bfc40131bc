//! Finite subset spaces of based simplicial sets and their exact homology.

pub mod error;
pub mod groupcoh;
pub mod homology;
pub mod linalg;
pub mod simplicial;
pub mod spectral;
pub mod subsetspace;

pub use error::{Error, Result};
