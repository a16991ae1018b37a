//! Exact-arithmetic toolkit for the degeneracy analysis of the Jacobians
//! of the hyperelliptic curves y² = xᵐ − 1.
//!
//! The crate provides the pieces needed to decide how degenerate such a
//! Jacobian is: complex-multiplication combinatorics of its Prym factors,
//! integral projection matrices between Mumford–Tate tori, censuses of
//! exceptional Hodge cycles, exact and numerical Sato–Tate moments, and
//! Frobenius/Jacobi-sum arithmetic over small finite fields.  All linear
//! algebra is over Z (or Q with explicit denominators); modular arithmetic
//! only ever appears as an accelerator whose output is re-verified exactly.

pub mod cm;
pub mod cyclotomic;
pub mod error;
pub mod ff;
pub mod frobenius;
pub mod hodge;
pub mod lattice;
pub mod laurent;
pub mod matrix;
pub mod moments;
pub mod modq;
pub mod mt;
pub mod stickelberger;
pub mod sweep;

pub use error::{CmError, CyclotomicError, FrobeniusError, HodgeError, LatticeError, MomentError, MtError};
pub use lattice::{Lattice, LatticeIndex};
pub use matrix::IntegerMatrix;
