//! Volume bounds and bigness criteria for ball quotients attached to
//! Hermitian lattices of signature `(1, n)` over imaginary quadratic fields.

pub mod bigser;
pub mod criteria;
pub mod error;
pub mod hlattice;
pub mod linalg;
pub mod par;
pub mod plocal;
pub mod qfield;
pub mod specfun;
pub mod volume;

pub use error::{Error, Result};
