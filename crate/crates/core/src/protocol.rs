//! The full iterated experiment: photon injection, per-iteration
//! decoherence and transfer phases, recombination, and trace recording.
//!
//! Protocol shape for an N-monomer chain: inject the excitation on monomer
//! 1, then run N−1 iterations of (decoherence phase, transfer phase on the
//! bond activated at that iteration), then recombine. The N-th recorded
//! iteration is the recombination readout; no further decoherence round
//! runs after the last transfer, so the recorded coefficient tables match
//! the closed-form final-state tables of the analytics module.
//!
//! Two engines share the protocol driver:
//!
//! * `Exact` — dense density matrices, exact unitary collisions and
//!   transfers.
//! * `Perturbative2` — the state is carried as a degree-2 polynomial in t
//!   ([`Jet`]): collisions act on each coefficient layer exactly, transfers
//!   use the truncated commutator expansion. This reproduces the
//!   selective-retention algebra of the closed forms with no finite-t
//!   pollution: layer 1 holds the O(t) hop coefficients, layer 2 the O(t²)
//!   chain terms.
//!
//! Reservoir handling is identical in both: each reservoir qubit persists
//! as its reduced state between collisions (non-Markov memory); the Markov
//! policy re-initializes every qubit to I/2 before each monomer's round and
//! books the discarded Bloch-z into a ledger so the global conservation
//! account stays exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::analytics::{hop_normalization, pair_hop_slots, three_site_slots, CoefficientTable};
use crate::channels::pswap_unitary;
use crate::channels::{collide_density, CollisionRecord, Environment};
use crate::dynamics::expectation;
use crate::dynamics::{
    build_xx_hamiltonian, propagate_with_hamiltonian, single_excitation_index, Jet, PropagatorMode,
    XXChainSpec,
};
use crate::error::{CoreError, Result};
use crate::linalg::{
    density_to_bloch, embed_two_qubit, partial_trace, pauli_string_matrix, BlochVector,
    ComplexMatrix, PauliString, SitePauli,
};

/// Hard cap on the joint register (chain + one attached reservoir qubit).
pub const MAX_JOINT_QUBITS: usize = 10;

/// Which state representation drives the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    /// Dense density matrix, exact unitaries.
    Exact,
    /// Degree-2 polynomial-in-t density matrix (truncated commutator
    /// transfers, exact collisions per layer).
    Perturbative2,
}

impl EngineKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EngineKind::Exact => "exact",
            EngineKind::Perturbative2 => "pert2",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EngineKind {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(EngineKind::Exact),
            "pert2" | "perturbative2" => Ok(EngineKind::Perturbative2),
            other => Err(CoreError::invalid(format!(
                "unknown engine '{other}' (expected exact|pert2)"
            ))),
        }
    }
}

/// Full configuration of one protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    /// N ≥ 2 monomers.
    pub n_monomers: usize,
    /// M ≥ 1 reservoir qubits.
    pub n_reservoir: usize,
    /// Partial-swap strength η.
    pub eta: f64,
    /// Transfer-phase duration.
    pub t: f64,
    /// Chain couplings and fields; `spec.n_sites` must equal `n_monomers`.
    pub spec: XXChainSpec,
    pub environment: Environment,
    pub engine: EngineKind,
}

impl ChainConfig {
    /// Config with uniform couplings J = 1 and fields B = 0 (the defaults
    /// under which the coefficient tables are pure functions of η).
    pub fn with_defaults(
        n_monomers: usize,
        n_reservoir: usize,
        eta: f64,
        t: f64,
        environment: Environment,
        engine: EngineKind,
    ) -> ChainConfig {
        ChainConfig {
            n_monomers,
            n_reservoir,
            eta,
            t,
            spec: XXChainSpec::uniform(n_monomers, 1.0, 0.0),
            environment,
            engine,
        }
    }

    /// Validate sizes, parameter ranges, and the resource cap
    /// (chain + attached collision qubit ≤ [`MAX_JOINT_QUBITS`]).
    pub fn validate(&self) -> Result<()> {
        if self.n_monomers < 2 {
            return Err(CoreError::invalid(format!(
                "n_monomers must be >= 2, got {}",
                self.n_monomers
            )));
        }
        if self.n_reservoir < 1 {
            return Err(CoreError::invalid(format!(
                "n_reservoir must be >= 1, got {}",
                self.n_reservoir
            )));
        }
        if !self.eta.is_finite() {
            return Err(CoreError::invalid(format!(
                "eta must be finite, got {}",
                self.eta
            )));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(CoreError::invalid(format!(
                "t must be finite and >= 0, got {}",
                self.t
            )));
        }
        if self.spec.n_sites != self.n_monomers {
            return Err(CoreError::invalid(format!(
                "spec.n_sites = {} does not match n_monomers = {}",
                self.spec.n_sites, self.n_monomers
            )));
        }
        self.spec.validate()?;
        if self.n_monomers + 1 > MAX_JOINT_QUBITS {
            return Err(CoreError::ResourceCap(format!(
                "run needs {} joint qubits (chain {} + 1 collision qubit); cap is {}",
                self.n_monomers + 1,
                self.n_monomers,
                MAX_JOINT_QUBITS
            )));
        }
        Ok(())
    }
}

/// The recombined photon: a site register of dimension N+1 (vacuum + which
/// monomer re-emitted).
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonState {
    /// p₀..p_N; index 0 is the no-excitation weight.
    pub populations: Vec<f64>,
    /// Inter-site coherences keyed by ordered 1-based site pairs (i, j),
    /// i ≠ j; Hermitian-symmetric by construction.
    pub coherences: BTreeMap<(usize, usize), Complex64>,
}

impl PhotonState {
    /// Σ_{i≠j} |c(i,j)| — the interference-capability measure consumed by
    /// the witness module.
    pub fn coherence_sum(&self) -> f64 {
        self.coherences.values().map(|c| c.norm()).sum()
    }

    pub fn population_sum(&self) -> f64 {
        self.populations.iter().sum()
    }

    /// Coherence for a site pair (0 if absent).
    pub fn coherence(&self, i: usize, j: usize) -> Complex64 {
        self.coherences
            .get(&(i, j))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// What the iteration did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    /// Decoherence round over all monomers followed by the transfer on the
    /// iteration's bond.
    DecoherenceAndTransfer,
    /// Final readout; the chain is not evolved further.
    Recombination,
}

/// Snapshot of one protocol iteration.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    /// 1-based iteration index.
    pub iteration: usize,
    pub phase: PhaseKind,
    /// Monomer Bloch-z values after the iteration.
    pub monomer_z: Vec<f64>,
    /// Reservoir Bloch-z values after the iteration.
    pub reservoir_z: Vec<f64>,
    /// Chain density matrix after the iteration (jets evaluated at t).
    pub chain_snapshot: ComplexMatrix,
    /// Collision log of the iteration's decoherence phase (empty for the
    /// recombination record).
    pub collisions: Vec<CollisionRecord>,
    /// Extracted hopping coefficients after the iteration.
    pub coefficients: CoefficientTable,
    /// Conservation account (chain Σz + reservoir Σz + discard ledger).
    pub conservation_total: f64,
}

/// Immutable record of a full run.
#[derive(Debug, Clone)]
pub struct ProtocolTrace {
    pub config: ChainConfig,
    /// Exactly N records for an N-monomer run; the last is the
    /// recombination readout.
    pub iterations: Vec<IterationRecord>,
    pub photon: PhotonState,
    /// Max |conservation account − initial| observed across all phases.
    pub conservation_residual: f64,
    pub initial_conservation_total: f64,
}

impl ProtocolTrace {
    /// Structural completeness: one record per monomer.
    pub fn is_complete(&self) -> bool {
        self.iterations.len() == self.config.n_monomers
            && self
                .iterations
                .last()
                .map(|r| r.phase == PhaseKind::Recombination)
                .unwrap_or(false)
    }

    /// The final extracted coefficient table.
    pub fn final_coefficients(&self) -> Option<&CoefficientTable> {
        self.iterations.last().map(|r| &r.coefficients)
    }
}

/// Initial chain state |10…0⟩⟨10…0|: the absorbed photon localizes the
/// excitation on monomer 1. The injection swap conserves ΣZ: the photon's
/// excitation is handed to the chain and the photon register drops out of
/// the bookkeeping until recombination.
pub fn inject_photon(config: &ChainConfig) -> ComplexMatrix {
    let n = config.n_monomers;
    let idx = single_excitation_index(n, 0);
    let mut rho = ComplexMatrix::zeros(1 << n);
    rho[(idx, idx)] = Complex64::new(1.0, 0.0);
    rho
}

fn maximally_mixed_qubit() -> ComplexMatrix {
    ComplexMatrix::identity(2).scale(Complex64::new(0.5, 0.0))
}

enum ChainBody {
    Exact(ComplexMatrix),
    Jet(Jet),
}

enum Bath {
    Exact(Vec<ComplexMatrix>),
    Jet(Vec<Jet>),
}

/// Stateful protocol driver. The protocol phases map to methods:
/// `decoherence_phase`, `transfer_phase`, `recombine`; [`run_protocol`]
/// wires them into the standard schedule.
pub struct ProtocolEngine {
    config: ChainConfig,
    chain: ChainBody,
    bath: Bath,
    /// Markov-policy ledger: Bloch-z removed from the system by reservoir
    /// re-initialization.
    discarded_z: f64,
}

impl ProtocolEngine {
    pub fn new(config: ChainConfig) -> Result<ProtocolEngine> {
        config.validate()?;
        let rho0 = inject_photon(&config);
        let m = config.n_reservoir;
        let (chain, bath) = match config.engine {
            EngineKind::Exact => (
                ChainBody::Exact(rho0),
                Bath::Exact(vec![maximally_mixed_qubit(); m]),
            ),
            EngineKind::Perturbative2 => (
                ChainBody::Jet(Jet::from_state(rho0, 2)),
                Bath::Jet(vec![Jet::from_state(maximally_mixed_qubit(), 2); m]),
            ),
        };
        Ok(ProtocolEngine {
            config,
            chain,
            bath,
            discarded_z: 0.0,
        })
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    /// Chain density matrix at the run's t (jets evaluated).
    pub fn chain_density(&self) -> ComplexMatrix {
        match &self.chain {
            ChainBody::Exact(rho) => rho.clone(),
            ChainBody::Jet(jet) => jet.value(self.config.t),
        }
    }

    /// The chain jet (perturbative engine only).
    pub fn chain_jet(&self) -> Option<&Jet> {
        match &self.chain {
            ChainBody::Jet(jet) => Some(jet),
            ChainBody::Exact(_) => None,
        }
    }

    /// Reservoir qubit density matrices at the run's t.
    pub fn reservoir_densities(&self) -> Vec<ComplexMatrix> {
        match &self.bath {
            Bath::Exact(qs) => qs.clone(),
            Bath::Jet(qs) => qs.iter().map(|q| q.value(self.config.t)).collect(),
        }
    }

    /// Monomer Bloch-z values (diagonal bookkeeping; jets report the
    /// t-independent layer-0 values, which the dance reproduces exactly).
    pub fn monomer_z(&self) -> Vec<f64> {
        let rho = match &self.chain {
            ChainBody::Exact(rho) => rho.clone(),
            ChainBody::Jet(jet) => jet.layer(0).clone(),
        };
        let n = self.config.n_monomers;
        (0..n).map(|site| site_z(&rho, n, site)).collect()
    }

    /// Reservoir Bloch-z values (layer 0 for jets).
    pub fn reservoir_z(&self) -> Vec<f64> {
        match &self.bath {
            Bath::Exact(qs) => qs.iter().map(qubit_z).collect(),
            Bath::Jet(qs) => qs.iter().map(|q| qubit_z(q.layer(0))).collect(),
        }
    }

    /// Conservation account: chain Σz + reservoir Σz + discard ledger,
    /// evaluated at the run's t. Collisions and transfers preserve it
    /// algebraically; Markov resets move z into the ledger.
    pub fn conservation_total(&self) -> f64 {
        let t = self.config.t;
        let n = self.config.n_monomers;
        let chain_sum: f64 = {
            let rho = match &self.chain {
                ChainBody::Exact(rho) => rho.clone(),
                ChainBody::Jet(jet) => jet.value(t),
            };
            (0..n).map(|site| site_z(&rho, n, site)).sum()
        };
        let bath_sum: f64 = match &self.bath {
            Bath::Exact(qs) => qs.iter().map(qubit_z).sum(),
            Bath::Jet(qs) => qs.iter().map(|q| qubit_z(&q.value(t))).sum(),
        };
        chain_sum + bath_sum + self.discarded_z
    }

    /// One decoherence phase (`k` is the 1-based iteration, recorded into
    /// the collision log): every monomer in order collides with every
    /// reservoir qubit in order; the Markov policy re-initializes the
    /// reservoir before each monomer's round.
    pub fn decoherence_phase(&mut self, k: usize) -> Result<Vec<CollisionRecord>> {
        let n = self.config.n_monomers;
        let m = self.config.n_reservoir;
        let eta = self.config.eta;
        let t = self.config.t;
        let mut records = Vec::with_capacity(n * m);
        for monomer in 0..n {
            if self.config.environment == Environment::Markov {
                match &mut self.bath {
                    Bath::Exact(qs) => {
                        for q in qs.iter_mut() {
                            self.discarded_z += qubit_z(q);
                            *q = maximally_mixed_qubit();
                        }
                    }
                    Bath::Jet(qs) => {
                        for q in qs.iter_mut() {
                            self.discarded_z += qubit_z(&q.value(t));
                            *q = Jet::from_state(maximally_mixed_qubit(), 2);
                        }
                    }
                }
            }
            for qubit in 0..m {
                let (s_before, r_before) = self.site_and_qubit_bloch(monomer, qubit)?;
                match (&mut self.chain, &mut self.bath) {
                    (ChainBody::Exact(rho), Bath::Exact(qs)) => {
                        let (chain_after, qubit_after) =
                            collide_density(rho, n, monomer, &qs[qubit], eta)?;
                        *rho = chain_after;
                        qs[qubit] = qubit_after;
                    }
                    (ChainBody::Jet(jet), Bath::Jet(qs)) => {
                        let (chain_after, qubit_after) =
                            jet_collide(jet, n, monomer, &qs[qubit], eta)?;
                        *jet = chain_after;
                        qs[qubit] = qubit_after;
                    }
                    _ => unreachable!("engine state kinds always match"),
                }
                let (s_after, r_after) = self.site_and_qubit_bloch(monomer, qubit)?;
                records.push(CollisionRecord {
                    monomer_index: monomer,
                    reservoir_index: qubit,
                    iteration: k,
                    s_before,
                    s_after,
                    r_before,
                    r_after,
                });
            }
        }
        Ok(records)
    }

    /// One transfer phase: propagate the chain under the Hamiltonian of
    /// bond k (1-based iteration k activates 0-based bond k−1), with every
    /// field term active. Exact engine: unitary conjugation; perturbative
    /// engine: truncated commutator layer mixing.
    pub fn transfer_phase(&mut self, k: usize) -> Result<()> {
        if k < 1 || k >= self.config.n_monomers {
            return Err(CoreError::invalid(format!(
                "transfer_phase: iteration {k} out of range 1..{}",
                self.config.n_monomers
            )));
        }
        let bond_spec = self.config.spec.restricted_to_bond(k - 1)?;
        let h = build_xx_hamiltonian(&bond_spec)?;
        match &mut self.chain {
            ChainBody::Exact(rho) => {
                *rho = propagate_with_hamiltonian(rho, &h, self.config.t, PropagatorMode::Exact)?;
            }
            ChainBody::Jet(jet) => {
                *jet = jet.transfer(&h);
            }
        }
        Ok(())
    }

    /// Recombination readout: swap the excitation back onto the photon
    /// register. Populations p_i (i ≥ 1) are the diagonal
    /// single-excitation weights; p₀ is the no-re-emission weight
    /// 1 − Σ_{i≥1} p_i. For the exact engine p₀ natively contains both the
    /// chain vacuum |0…0⟩ and the multi-excitation weight the mixed
    /// reservoir injects into ground monomers — neither hands a single
    /// excitation to the photon, so both are loss. Coherences are the
    /// ⟨e_i|ρ|e_j⟩ matrix elements, i.e. the coefficients of the photon
    /// ladder strings α+_iα−_j.
    pub fn recombine(&self) -> Result<PhotonState> {
        let n = self.config.n_monomers;
        let rho = self.chain_density();
        let mut populations = vec![0.0f64; n + 1];
        let mut site_sum = 0.0f64;
        for site in 0..n {
            let idx = single_excitation_index(n, site);
            let p = rho[(idx, idx)].re;
            populations[site + 1] = p;
            site_sum += p;
        }
        populations[0] = 1.0 - site_sum;
        let mut coherences = BTreeMap::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let a = single_excitation_index(n, i);
                let b = single_excitation_index(n, j);
                let c = rho[(a, b)];
                coherences.insert((i + 1, j + 1), c);
                coherences.insert((j + 1, i + 1), c.conj());
            }
        }
        Ok(PhotonState {
            populations,
            coherences,
        })
    }

    /// Extract the hopping-coefficient table from the current chain state.
    ///
    /// Entries (N ≥ 2, t·J₁ ≠ 0): `hop12_antisym`, `hop12_sym` — pair-(1,2)
    /// slots normalized by −¼itJ₁. For N = 3 additionally the raw t²-layer
    /// chain terms `chain13_{sym,antisym}_{z2,id}_raw` (measured slot ÷ t²)
    /// and the bond-2 residuals `hop23_antisym_residual`,
    /// `hop23_sym_residual` (normalized by −¼itJ₂). With t = 0 or J = 0 the
    /// normalized entries are omitted (nothing to normalize against).
    pub fn coefficient_table(&self) -> Result<CoefficientTable> {
        let n = self.config.n_monomers;
        let t = self.config.t;
        let rho = self.chain_density();
        let dims = vec![2usize; n];
        let mut table = CoefficientTable::default();
        let j1 = self.config.spec.couplings[0];
        if t * j1 != 0.0 {
            let rho12 = partial_trace(&rho, &dims, &[0, 1])?;
            let (antisym, sym) = pair_hop_slots(&rho12)?;
            let norm = hop_normalization(t, j1);
            table.push("hop12_antisym", antisym / norm);
            table.push("hop12_sym", sym / norm);
        }
        if n == 3 && t != 0.0 {
            let slots = three_site_slots(&rho)?;
            let t2 = Complex64::new(t * t, 0.0);
            table.push("chain13_sym_z2_raw", slots.sym_z / t2);
            table.push("chain13_sym_id_raw", slots.sym_id / t2);
            table.push("chain13_antisym_z2_raw", slots.antisym_z / t2);
            table.push("chain13_antisym_id_raw", slots.antisym_id / t2);
            let j2 = self.config.spec.couplings[1];
            if t * j2 != 0.0 {
                let rho23 = partial_trace(&rho, &dims, &[1, 2])?;
                let (antisym, sym) = pair_hop_slots(&rho23)?;
                let norm = hop_normalization(t, j2);
                table.push("hop23_antisym_residual", antisym / norm);
                table.push("hop23_sym_residual", sym / norm);
            }
        }
        Ok(table)
    }

    fn site_and_qubit_bloch(
        &self,
        monomer: usize,
        qubit: usize,
    ) -> Result<(BlochVector, BlochVector)> {
        let n = self.config.n_monomers;
        let chain0 = match &self.chain {
            ChainBody::Exact(rho) => rho.clone(),
            ChainBody::Jet(jet) => jet.layer(0).clone(),
        };
        let reduced = partial_trace(&chain0, &vec![2usize; n], &[monomer])?;
        let s = density_to_bloch(&reduced)?;
        let q2 = match &self.bath {
            Bath::Exact(qs) => qs[qubit].clone(),
            Bath::Jet(qs) => qs[qubit].layer(0).clone(),
        };
        let r = density_to_bloch(&q2)?;
        Ok((s, r))
    }
}

/// One jet-engine collision: pair the chain and qubit layers bilinearly
/// (degree d of the joint = Σ_{a+b=d} chain_a ⊗ qubit_b), conjugate each
/// joint layer by the embedded PSWAP, and trace each side back out. Exact
/// per layer — the only truncation is the jet degree itself.
pub fn jet_collide(
    chain: &Jet,
    n_qubits: usize,
    site: usize,
    qubit: &Jet,
    eta: f64,
) -> Result<(Jet, Jet)> {
    if chain.dim() != 1 << n_qubits {
        return Err(CoreError::invalid(format!(
            "jet_collide: chain dim {} does not match {n_qubits} qubits",
            chain.dim()
        )));
    }
    if qubit.dim() != 2 {
        return Err(CoreError::invalid(
            "jet_collide: reservoir jet must be 2x2".to_string(),
        ));
    }
    if site >= n_qubits {
        return Err(CoreError::invalid(format!(
            "jet_collide: site {site} out of range for {n_qubits} qubits"
        )));
    }
    let degree = chain.degree().max(qubit.degree());
    let dims = vec![2usize; n_qubits + 1];
    let u = embed_two_qubit(&pswap_unitary(eta), n_qubits + 1, site, n_qubits)?;
    let keep_chain: Vec<usize> = (0..n_qubits).collect();
    let mut chain_layers = Vec::with_capacity(degree + 1);
    let mut qubit_layers = Vec::with_capacity(degree + 1);
    for d in 0..=degree {
        let mut joint = ComplexMatrix::zeros(1 << (n_qubits + 1));
        for a in 0..=d.min(chain.degree()) {
            let b = d - a;
            if b <= qubit.degree() {
                joint = joint.add(&chain.layer(a).kron(qubit.layer(b)));
            }
        }
        let collided = joint.conjugate_by(&u);
        chain_layers.push(partial_trace(&collided, &dims, &keep_chain)?);
        qubit_layers.push(partial_trace(&collided, &dims, &[n_qubits])?);
    }
    Ok((
        Jet::from_layers(chain_layers)?,
        Jet::from_layers(qubit_layers)?,
    ))
}

/// Run the standard schedule: inject → (decoherence, transfer) × (N−1) →
/// recombine, recording one [`IterationRecord`] per iteration (the N-th is
/// the recombination readout). Deterministic for a fixed config.
pub fn run_protocol(config: &ChainConfig) -> Result<ProtocolTrace> {
    let mut engine = ProtocolEngine::new(config.clone())?;
    let n = config.n_monomers;
    let initial_total = engine.conservation_total();
    let mut residual = 0.0f64;
    let mut iterations: Vec<IterationRecord> = Vec::with_capacity(n);
    for k in 1..n {
        let collisions = engine.decoherence_phase(k)?;
        residual = residual.max((engine.conservation_total() - initial_total).abs());
        engine.transfer_phase(k)?;
        residual = residual.max((engine.conservation_total() - initial_total).abs());
        iterations.push(IterationRecord {
            iteration: k,
            phase: PhaseKind::DecoherenceAndTransfer,
            monomer_z: engine.monomer_z(),
            reservoir_z: engine.reservoir_z(),
            chain_snapshot: engine.chain_density(),
            collisions,
            coefficients: engine.coefficient_table()?,
            conservation_total: engine.conservation_total(),
        });
    }
    let photon = engine.recombine()?;
    residual = residual.max((engine.conservation_total() - initial_total).abs());
    iterations.push(IterationRecord {
        iteration: n,
        phase: PhaseKind::Recombination,
        monomer_z: engine.monomer_z(),
        reservoir_z: engine.reservoir_z(),
        chain_snapshot: engine.chain_density(),
        collisions: Vec::new(),
        coefficients: engine.coefficient_table()?,
        conservation_total: engine.conservation_total(),
    });
    Ok(ProtocolTrace {
        config: config.clone(),
        iterations,
        photon,
        conservation_residual: residual,
        initial_conservation_total: initial_total,
    })
}

fn site_z(rho: &ComplexMatrix, n: usize, site: usize) -> f64 {
    let z =
        pauli_string_matrix(&PauliString::with(n, &[(site, SitePauli::Z)]).expect("valid site"));
    expectation(&z, rho).re
}

fn qubit_z(rho2: &ComplexMatrix) -> f64 {
    (rho2[(0, 0)] - rho2[(1, 1)]).re
}
