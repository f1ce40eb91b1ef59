//! Hamiltonians of quantum stochastic evolutions as singular perturbations.
//!
//! The crate covers two levels of the same construction:
//!
//! * [`one_particle`]: the generator `i∂` on the punctured line, its
//!   boundary functionals, defect vectors, the Sobolev decomposition of the
//!   adjoint's domain and the phase conditions selecting self-adjoint
//!   extensions, together with the regularized-potential scattering phase
//!   it is contrasted with.
//! * [`slh`] and [`fock`]: the second-quantized version, mapping a
//!   Hermitian coupling matrix `E` (and optional gauge `Z`) to the Itô,
//!   model, Galilean and dressing matrices and the triple `(S, L, H)`, and
//!   checking the resulting boundary conditions and Hamiltonian action on a
//!   truncated Fock space.
//!
//! [`linalg`] holds the dense complex matrix plumbing and [`cli`] the batch
//! front end behind the `slh-ext` binary.

pub mod cli;
pub mod fock;
pub mod linalg;
pub mod one_particle;
pub mod random;
pub mod slh;

pub use linalg::{BlockOperatorMatrix, ComplexMatrix, SubspaceBasis, C64};
