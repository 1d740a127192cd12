//! Numerical tolerances shared across modules.

/// Hermiticity residual ‖ρ − ρ†‖_F allowed for a density operator.
pub const HERMITIAN: f64 = 1e-12;
/// |Tr ρ − 1| allowed for a density operator.
pub const TRACE: f64 = 1e-12;
/// Most negative eigenvalue tolerated before a matrix is declared non-positive.
pub const PSD: f64 = 1e-10;
/// Slack on Tr ρ² ≤ 1.
pub const PURITY: f64 = 1e-12;
/// |‖ψ‖ − 1| allowed for a pure state.
pub const NORM: f64 = 1e-12;
/// Hermiticity required of Hamiltonians and observables.
pub const OPERATOR_HERMITIAN: f64 = 1e-10;
/// Outcome probabilities below this cannot be conditioned on.
pub const PROB_FLOOR: f64 = 1e-12;
/// Default eigenvalue clustering tolerance, relative to the spectral range.
pub const MERGE: f64 = 1e-8;
/// Sectors with weight below this are dropped from decompositions.
pub const SECTOR_PRUNE: f64 = 1e-14;
/// Margin separating a genuine witness violation from eigensolver noise.
pub const DECISION: f64 = 1e-9;
/// Largest Poisson tail allowed beyond a coherent-state cutoff.
pub const POISSON_TAIL: f64 = 1e-10;
