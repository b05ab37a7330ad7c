//! Exact symbolic computation engine for Gaudin algebras with irregular
//! singularities over general linear Lie (super)algebras.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere. The crate builds the quantum and classical
//! L-matrices of interest, takes column determinants and Berezinians over
//! windowed pseudo-differential operator rings, pushes them into a Weyl
//! superalgebra acting on a bosonic/fermionic Fock space, and compares
//! both sides of the duality identities coefficient by coefficient.

pub mod envalg;
pub mod error;
pub mod fockrep;
pub mod gaudin;
pub mod linalg;
pub mod ncmatrix;
pub mod psdo;
pub mod report;
pub mod ring;
pub mod scenario;
pub mod suites;
pub mod superpoly;
pub mod weylalg;

pub mod duality;

pub use error::AlgebraError;
pub use ring::{Homogeneity, Parity, Ring};
