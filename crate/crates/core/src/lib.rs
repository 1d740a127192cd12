//! Numerical laboratory for entanglement in identical-boson systems.
//!
//! Everything is built on a truncated occupation-number (Fock) basis over a
//! finite list of modes. Density operators are dense complex matrices over
//! that basis. On top of the basis machinery the crate provides:
//!
//! - [`measurement`]: projective measurement algebra (conditioned states,
//!   conditional means and variances, unrecorded measurements).
//! - [`ssr`]: particle-number super-selection diagnostics, U(1) twirling,
//!   number-sector decomposition, quantum correlation functions, phase
//!   states and reference-frame internalisation.
//! - [`states`]: constructors for the named states used throughout
//!   (coherent, Bell, GHZ, binomial, Werner, Verstraete, ...), with
//!   separable mixtures kept as explicit components.
//! - [`witnesses`]: CHSH, the correlation inequality, GHZ parity, spin-EPR
//!   conditional variances and the particle entanglement measure.
//! - [`lhv`]: discrete local-hidden-variable models.
//! - [`dynamics`]: beam splitters, entanglement extraction, the
//!   atom-molecule Ramsey process and number-conservation checks.
//!
//! Units have ħ = 1 throughout.

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod lhv;
pub mod measurement;
pub mod operator;
pub mod random;
pub mod ssr;
pub mod states;
pub mod tol;
pub mod witnesses;

pub use error::{Error, Result};
pub use fock::{build_basis, BasisState, FockSpace, Mode, ModeSystem, Partition, Statistics};
pub use operator::{DensityOperator, Operator, PureState, Spectrum};

pub use num_complex::Complex64;
