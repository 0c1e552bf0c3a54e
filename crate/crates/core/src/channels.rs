//! Collision channels: SWAP / partial-SWAP unitaries and the quantum
//! homogenizer, in both the density-matrix picture and the Bloch-vector
//! fast path.
//!
//! A decoherence collision couples one monomer to one reservoir qubit via
//! `PSWAP(η) = cosη·I + i·sinη·SWAP` and traces the partner back out. The
//! reservoir policy decides what the next collision sees:
//!
//! * [`Environment::Markov`] — the reservoir is re-initialized to the
//!   maximally mixed state before each monomer's collision round
//!   (memoryless).
//! * [`Environment::NonMarkov`] — reservoir qubits persist across
//!   collisions and protocol iterations, retaining memory of every monomer
//!   they have met.
//!
//! For separable ẑ-diagonal states the whole dance closes over Bloch
//! vectors; [`bloch_pswap_update`] is that closed form, cross-checked
//! against the density path to 1e-12 in the test suite.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::linalg::{embed_two_qubit, partial_trace, BlochVector, ComplexMatrix, I1};
use crate::tol;

/// Reservoir memory policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Environment {
    /// Reservoir re-initialized to I/2 per qubit before every monomer's
    /// collision round.
    Markov,
    /// Reservoir qubits persist across all collisions and iterations.
    NonMarkov,
}

impl Environment {
    /// Canonical lowercase name (used in CLI flags and CSV output).
    pub fn as_str(&self) -> &'static str {
        match self {
            Environment::Markov => "markov",
            Environment::NonMarkov => "nonmarkov",
        }
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Environment {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "markov" => Ok(Environment::Markov),
            "nonmarkov" | "non-markov" => Ok(Environment::NonMarkov),
            other => Err(CoreError::invalid(format!(
                "unknown environment '{other}' (expected markov|nonmarkov)"
            ))),
        }
    }
}

/// One recorded collision in a homogenization round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionRecord {
    /// Monomer index (0-based chain site).
    pub monomer_index: usize,
    /// Reservoir qubit index (0-based).
    pub reservoir_index: usize,
    /// Protocol iteration the collision belongs to (1-based; 0 when unused).
    pub iteration: usize,
    pub s_before: BlochVector,
    pub s_after: BlochVector,
    pub r_before: BlochVector,
    pub r_after: BlochVector,
}

/// Bloch-vector reservoir with its memory policy and coupling strength.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirState {
    qubits: Vec<BlochVector>,
    policy: Environment,
    eta: f64,
}

impl ReservoirState {
    /// Fresh maximally mixed reservoir of `m` qubits.
    pub fn maximally_mixed(m: usize, policy: Environment, eta: f64) -> Result<Self> {
        if m == 0 {
            return Err(CoreError::invalid(
                "reservoir must hold at least one qubit".to_string(),
            ));
        }
        if !eta.is_finite() {
            return Err(CoreError::invalid(format!(
                "mixing angle must be finite, got {eta}"
            )));
        }
        Ok(ReservoirState {
            qubits: vec![BlochVector::mixed(); m],
            policy,
            eta,
        })
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn policy(&self) -> Environment {
        self.policy
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn qubits(&self) -> &[BlochVector] {
        &self.qubits
    }

    /// Re-initialize every qubit to the maximally mixed state.
    pub fn reset(&mut self) {
        for q in self.qubits.iter_mut() {
            *q = BlochVector::mixed();
        }
    }

    /// Largest qubit Bloch norm (physical states stay ≤ 1).
    pub fn max_bloch_norm(&self) -> f64 {
        self.qubits.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Check the physicality invariant on every qubit.
    pub fn validate(&self) -> Result<()> {
        if self.max_bloch_norm() > 1.0 + tol::EXACT_ALGEBRA {
            return Err(CoreError::Numerical(format!(
                "reservoir qubit left the Bloch ball: |r| = {}",
                self.max_bloch_norm()
            )));
        }
        Ok(())
    }
}

/// The 4×4 SWAP unitary (|01⟩ ↔ |10⟩).
pub fn swap_unitary() -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(4);
    let one = Complex64::new(1.0, 0.0);
    s[(0, 0)] = one;
    s[(1, 2)] = one;
    s[(2, 1)] = one;
    s[(3, 3)] = one;
    s
}

/// The partial-swap unitary `PSWAP(η) = cosη·I + i·sinη·SWAP`.
///
/// `pswap_unitary(0) = I`; `pswap_unitary(π/2) = i·SWAP`. Any real η is
/// accepted; the physically meaningful range is [0, π/2].
pub fn pswap_unitary(eta: f64) -> ComplexMatrix {
    let c = Complex64::new(eta.cos(), 0.0);
    swap_unitary()
        .scale(I1 * eta.sin())
        .add(&ComplexMatrix::identity(4).scale(c))
}

/// Bloch-picture collision update for a monomer `s` against a reservoir
/// qubit `r`:
///
/// ```text
/// s' = cos²η·s + sin²η·r − cosη·sinη (r × s)
/// r' = sin²η·s + cos²η·r + cosη·sinη (r × s)
/// ```
///
/// Exact for product inputs; agrees with the density-matrix path
/// ([`apply_pswap_density`] + partial trace) to 1e-12.
pub fn bloch_pswap_update(
    s: &BlochVector,
    r: &BlochVector,
    eta: f64,
) -> (BlochVector, BlochVector) {
    let c2 = eta.cos() * eta.cos();
    let s2 = eta.sin() * eta.sin();
    let cs = eta.cos() * eta.sin();
    let rxs = r.cross(s);
    let s_new = BlochVector::new(
        c2 * s.x + s2 * r.x - cs * rxs.x,
        c2 * s.y + s2 * r.y - cs * rxs.y,
        c2 * s.z + s2 * r.z - cs * rxs.z,
    );
    let r_new = BlochVector::new(
        s2 * s.x + c2 * r.x + cs * rxs.x,
        s2 * s.y + c2 * r.y + cs * rxs.y,
        s2 * s.z + c2 * r.z + cs * rxs.z,
    );
    (s_new, r_new)
}

/// One monomer's full homogenization round in the Bloch picture: the monomer
/// meets reservoir qubits 0..M−1 in index order. Under the Markov policy the
/// reservoir is re-initialized first, so a ẑ-aligned monomer contracts by
/// exactly cos^{2M}η; under NonMarkov the mutated qubits are retained.
///
/// Pure function: returns the new monomer vector, the new reservoir, and one
/// record per collision.
pub fn homogenize_monomer(
    s: &BlochVector,
    res: &ReservoirState,
) -> (BlochVector, ReservoirState, Vec<CollisionRecord>) {
    let mut res_out = res.clone();
    if res_out.policy == Environment::Markov {
        res_out.reset();
    }
    let mut s_cur = *s;
    let mut records = Vec::with_capacity(res_out.len());
    for l in 0..res_out.len() {
        let r_before = res_out.qubits[l];
        let s_before = s_cur;
        let (s_new, r_new) = bloch_pswap_update(&s_cur, &r_before, res_out.eta);
        s_cur = s_new;
        res_out.qubits[l] = r_new;
        records.push(CollisionRecord {
            monomer_index: 0,
            reservoir_index: l,
            iteration: 0,
            s_before,
            s_after: s_new,
            r_before,
            r_after: r_new,
        });
    }
    (s_cur, res_out, records)
}

/// Conjugate a joint density matrix by the partial swap embedded on qubit
/// subsystems `site_a`, `site_b` of a register with subsystem dimensions
/// `dims`. Trace, Hermiticity, and positivity are preserved (unitary
/// conjugation).
pub fn apply_pswap_density(
    rho_joint: &ComplexMatrix,
    site_a: usize,
    site_b: usize,
    dims: &[usize],
    eta: f64,
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if rho_joint.dim() != total {
        return Err(CoreError::invalid(format!(
            "apply_pswap_density: state dim {} does not match dims product {total}",
            rho_joint.dim()
        )));
    }
    if dims.iter().any(|&d| d != 2) {
        return Err(CoreError::invalid(
            "apply_pswap_density supports qubit subsystems only".to_string(),
        ));
    }
    let u = embed_two_qubit(&pswap_unitary(eta), dims.len(), site_a, site_b)?;
    Ok(rho_joint.conjugate_by(&u))
}

/// Density-picture collision: attach one reservoir qubit (given as a 2×2
/// density matrix) as the least-significant subsystem, apply `PSWAP(η)`
/// between chain site `site` and the attached qubit, and trace each side
/// back out.
///
/// Returns `(chain_after, qubit_after)`. This is the engine step for
/// entangled chain states; the qubit re-enters the reservoir as its reduced
/// state (see the protocol module).
pub fn collide_density(
    rho_chain: &ComplexMatrix,
    n_qubits: usize,
    site: usize,
    qubit: &ComplexMatrix,
    eta: f64,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if rho_chain.dim() != 1 << n_qubits {
        return Err(CoreError::invalid(format!(
            "collide_density: chain dim {} does not match {n_qubits} qubits",
            rho_chain.dim()
        )));
    }
    if qubit.dim() != 2 {
        return Err(CoreError::invalid(
            "collide_density: reservoir qubit must be 2x2".to_string(),
        ));
    }
    if site >= n_qubits {
        return Err(CoreError::invalid(format!(
            "collide_density: site {site} out of range for {n_qubits} qubits"
        )));
    }
    let joint = rho_chain.kron(qubit);
    let dims = vec![2usize; n_qubits + 1];
    let collided = apply_pswap_density(&joint, site, n_qubits, &dims, eta)?;
    let keep_chain: Vec<usize> = (0..n_qubits).collect();
    let chain_after = partial_trace(&collided, &dims, &keep_chain)?;
    let qubit_after = partial_trace(&collided, &dims, &[n_qubits])?;
    Ok((chain_after, qubit_after))
}
