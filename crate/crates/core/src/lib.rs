//! Optimal-control synthesis for single-measurement entanglement readout on
//! two qubits.
//!
//! Given a two-qubit density matrix `ρ₀`, the synthesizer finds a
//! piecewise-constant schedule of the six-parameter Hamiltonian
//!
//! ```text
//! H = κ_A σx⊗1 + κ_B 1⊗σx + ε_A σz⊗1 + ε_B 1⊗σz + ζ σz⊗σz + ν σx⊗σx
//! ```
//!
//! such that `Tr((σz⊗σz) ρ(t_f))` equals the concurrence of `ρ₀`. The crate is
//! organised bottom-up:
//!
//! - [`linalg`]: fixed-size dense complex linear algebra (Hermitian
//!   eigendecomposition, unitary exponentials, PSD square roots).
//! - [`quantum`]: density matrices, the control Hamiltonian, concurrence,
//!   spectrum bounds of the ZZ measurement, state sampling.
//! - [`controllability`]: dynamical Lie algebra closure and the
//!   density-matrix-controllability verdict.
//! - [`control`]: forward/backward propagation, the adjoint gradient and the
//!   gradient-descent synthesizer.
//! - [`harness`]: seeded batch experiments, summaries and file outputs.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod controllability;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod quantum;

pub use error::{Error, Result};
