//! Multifractal analysis of the doubling map with the Thue-Morse potential
//! `f_c(x) = log|cos pi(x + c)|`.
//!
//! - [`dyadic`]: exact circle points, doubling, the potential, Birkhoff sums.
//! - [`orbit`]: periodic-orbit enumeration and the dynamical extremes.
//! - [`singularity`]: the orbit of the singular point, binding periods,
//!   Monte Carlo estimates and quadrature-based estimates.
//! - [`thermo`]: Markov subsystems, pressure, Legendre transforms, spectra.
//! - [`cover`]: exact counting certificates for self-return covers.

pub mod cover;
pub mod dyadic;
pub mod error;
pub mod numeric;
pub mod orbit;
pub mod singularity;
pub mod thermo;

pub use error::{Error, Result};
