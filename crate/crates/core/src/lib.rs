//! Sharp lower bounds for the first nonzero eigenvalue of the Laplacian on
//! manifolds with `Ric ≥ (n-1)κ` and diameter `D`, together with the
//! one-dimensional modulus-of-continuity flows and the warped-product models on
//! which they are attained.

pub mod bounds;
pub mod error;
pub mod moc_pde;
pub mod params;
pub mod specialfn;
pub mod sturm;
pub mod warped;

pub use error::{Error, Result};
pub use params::ModelParams;
