//! Collision-model simulator and analytics for exciton transfer along a
//! qubit chain coupled to a partial-swap homogenizer reservoir.
//!
//! The model: a photon injects a single excitation into the first monomer of
//! an `N`-site qubit chain. The protocol then alternates
//!
//! 1. a *decoherence phase* — every monomer collides pairwise with each of
//!    the `M` reservoir qubits through a partial-swap unitary
//!    `P(η) = cos η · I + i sin η · SWAP`, and
//! 2. a *transfer phase* — the bond `(k, k+1)` of an XX chain Hamiltonian
//!    propagates the excitation one step for a short time `t`,
//!
//! until the excitation has had `N-1` chances to hop, after which the chain
//! state is recombined into an output photon register. Two reservoir
//! policies are supported: **Markov** (reservoir re-initialized to the
//! maximally mixed state before each monomer's collision round) and
//! **NonMarkov** (reservoir persists and accumulates memory).
//!
//! Crate layout:
//!
//! * [`linalg`] — dense complex matrices, Pauli strings, Bloch vectors,
//!   partial trace, Hermitian matrix exponential.
//! * [`channels`] — the partial-swap collision channel in both density-matrix
//!   and Bloch form, plus reservoir state handling.
//! * [`dynamics`] — XX chain Hamiltonians and exact / order-truncated
//!   propagators.
//! * [`protocol`] — the full photon-injection protocol and its trace record.
//! * [`analytics`] — closed-form coefficient pipelines (damping powers, the
//!   `F`/`G` collision recursion, final-state coefficient tables) and the
//!   bundled reference fixtures they are measured against.
//! * [`witness`] — the temporal witness of non-classicality: conservation
//!   residuals, coherence scoring, and the classical no-go contrast.
//!
//! Everything is deterministic: no operation consumes ambient randomness
//! (property-style checks take an explicit seed).

pub mod analytics;
pub mod channels;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod protocol;
pub mod tol;
pub mod witness;

pub use error::{CoreError, Result};
