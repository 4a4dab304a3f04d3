//! Numerical verification toolkit for the elliptic quantum group `E_{p,q}(GL_n)`.

pub mod algebra;
pub mod braid;
pub mod cherednik;
pub mod cobraiding;
pub mod config;
pub mod efactors;
pub mod error;
pub mod evalrep;
pub mod exterior;
pub mod numerics;
pub mod perm;
pub mod report;
pub mod rmatrix;
pub mod suites;

pub use error::{EllError, Result};
pub use numerics::{Params, C64};
