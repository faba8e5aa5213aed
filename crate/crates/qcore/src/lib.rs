//! Dense linear-algebra substrate for desk-scale quantum simulation.
//!
//! Everything is complex double precision on [`nalgebra`] matrices. Multi-register
//! objects use row-major index order: the first register is the most significant,
//! and within a qubit circuit qubit 0 is the leftmost tensor factor.
//!
//! The crate provides
//! - pure and mixed states ([`BipartiteState`], [`DensityOp`]),
//! - gate circuits over a Clifford+T set ([`GateCircuit`]),
//! - Stinespring channels ([`ChannelDesc`]),
//! - distances, matrix functions and the SVD threshold `sgn_eta`,
//! - seeded randomness, including uniform Clifford sampling.

pub mod channel;
pub mod circuit;
pub mod clifford;
mod error;
pub mod linalg;
pub mod random;
pub mod registers;
pub mod state;

pub use channel::ChannelDesc;
pub use circuit::{Gate, GateCircuit, GateOp};
pub use error::{Error, Result};
pub use linalg::{fidelity, sgn_eta, trace_distance};
pub use random::Seed;
pub use state::{BipartiteState, DensityOp};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Complex scalar.
pub type C64 = Complex64;
/// Dense complex matrix.
pub type CMat = DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = DVector<C64>;

/// Tolerance for exact constructions.
pub const TOL_EXACT: f64 = 1e-9;
/// Tolerance for statistical estimates.
pub const TOL_STAT: f64 = 1e-6;
/// Tolerance used when validating states and operators.
pub const TOL_VALIDATE: f64 = 1e-10;
/// Largest total dimension for density-matrix work.
pub const CAP_DENSITY: usize = 4096;
/// Largest number of amplitudes for pure-state work.
pub const CAP_PURE: usize = 1 << 20;

/// Shorthand for a complex number.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Real scalar as a complex number.
#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub(crate) fn check_density_cap(d: usize) -> Result<()> {
    if d > CAP_DENSITY {
        return Err(Error::CapExceeded { what: "density matrix dimension", size: d, cap: CAP_DENSITY });
    }
    Ok(())
}

pub(crate) fn check_pure_cap(d: usize) -> Result<()> {
    if d > CAP_PURE {
        return Err(Error::CapExceeded { what: "state vector length", size: d, cap: CAP_PURE });
    }
    Ok(())
}

/// Fails with [`Error::CapExceeded`] when `d` exceeds the density-matrix cap.
pub fn ensure_density_cap(d: usize) -> Result<()> {
    check_density_cap(d)
}

/// Fails with [`Error::CapExceeded`] when `d` exceeds the state-vector cap.
pub fn ensure_pure_cap(d: usize) -> Result<()> {
    check_pure_cap(d)
}
