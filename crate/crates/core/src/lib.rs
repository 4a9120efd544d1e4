//! Hecke eigenfunctions on the 2-sphere built from the Hurwitz order, their
//! restrictions to arithmetic geodesic families, theta lifts, CM forms, and the
//! approximate functional equation toolkit used to study restriction norms.

pub mod afe;
pub mod error;
pub mod geodesics;
pub mod harmonics;
pub mod hecke;
pub mod hurwitz;
pub mod restriction;
pub mod theta;

pub use error::{Error, Result};
