//! Exact computer algebra for the quantum-shuffle calculus: braid group
//! algebra elements evaluated as exact operators on labeled tensor
//! products, the shuffle Hopf algebra and its Nichols quotient data, Hopf
//! bimodules and Yetter-Drinfeld modules with their fusion product, the
//! configuration-space chain complex, and the complete rank-1 (p,1)
//! specialization over Q(zeta_{4p}).

pub mod braid;
pub mod cyclotomic;
pub mod error;
pub mod hopf;
pub mod linalg;
pub mod p1;
pub mod qcombin;
pub mod rep;
pub mod scalar;
pub mod strata;
pub mod suite;
pub mod ydmod;

pub use error::{Error, Result};
