//! Riemannian optimization of restricted Hartree-Fock energies on a periodic
//! real-space grid, using the H¹ metric on the Stiefel and Grassmann
//! manifolds.
//!
//! Orbitals are [`Field`]s sampled on a [`Grid`]; every linear operator is a
//! Fourier multiplier ([`KernelSpec`]). [`HfProblem`] evaluates the energy,
//! [`stiefel`] and [`grassmann`] supply the geometry, and [`optim`] holds the
//! solvers.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod grassmann;
pub mod hartree_fock;
pub mod linalg;
pub mod molecule;
pub mod optim;
pub mod orbitals;
pub mod stiefel;

pub use error::{Error, Result};
pub use field::{Field, Grid, KernelSpec, Space};
pub use hartree_fock::{HfProblem, MeanField};
pub use linalg::SmallMatrix;
pub use molecule::{GuessSpec, Molecule};
pub use orbitals::OrbitalVector;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/hartree_fock.md")]
    mod hartree_fock {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
}
