//! Eigenvalues and eigenfunctions of radial Schrödinger problems in `D`
//! dimensions via the asymptotic iteration method (AIM).
//!
//! The building blocks are [`jets`] (truncated Taylor arithmetic), the
//! iteration engine in [`aim`], the potential reductions in [`potentials`],
//! closed-form polynomials in [`specfun`], normalized states in
//! [`wavefunctions`] and the [`quadrature`] they rely on. [`grid_oracle`]
//! provides an independent finite-volume check of the spectra.

pub mod aim;
pub mod grid_oracle;
pub mod jets;
pub mod potentials;
pub mod quadrature;
pub mod specfun;
pub mod verify;
pub mod wavefunctions;

pub use aim::{solve_state, AimError, AimProblem, AimResult};
pub use jets::{Jet, JetError};
pub use potentials::{closed_form_energy, reduce, PotentialKind, PotentialSpec, ReducedProblem};
pub use wavefunctions::{build_state, RadialState};
