//! XX-chain Hamiltonians, exact and perturbative transfer-phase
//! propagation, and conservation diagnostics.
//!
//! The chain Hamiltonian is built in the ladder form
//!
//! ```text
//! H = ¼ Σ_k J_k (σ+_k σ−_{k+1} + σ−_k σ+_{k+1}) − Σ_n B_n Z_n
//! ```
//!
//! with `σ± = X ± iY` (no ½), which is identically `½ Σ J (XX + YY) − Σ B Z`;
//! the test suite asserts that identity numerically rather than assuming it.
//!
//! Perturbative propagation is *degree-truncated*: a state is carried as a
//! short polynomial in t (a [`Jet`]), and one transfer step maps layer d to
//! `ρ_d − i[H, ρ_{d−1}] − ½[H,[H, ρ_{d−2}]]`. This keeps every retained
//! coefficient free of higher-order contamination — the order-2 engine's
//! layer-1 coefficients are exact polynomials in cosη, independent of t —
//! and preserves the trace exactly (commutators are traceless).

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::linalg::{
    eigh, matrix_exp_hermitian, pauli_string_matrix, ComplexMatrix, PauliString, SitePauli, I1,
};

/// Open XX chain description: `n_sites` qubits, `couplings[k]` on bond
/// (k, k+1), longitudinal field `fields[n]` on site n. Energy units, ħ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct XXChainSpec {
    pub n_sites: usize,
    pub couplings: Vec<f64>,
    pub fields: Vec<f64>,
}

impl XXChainSpec {
    /// Uniform chain: all couplings `j`, all fields `b`.
    pub fn uniform(n_sites: usize, j: f64, b: f64) -> Self {
        XXChainSpec {
            n_sites,
            couplings: vec![j; n_sites.saturating_sub(1)],
            fields: vec![b; n_sites],
        }
    }

    /// Structural validation: open chain needs N−1 couplings and N fields.
    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(CoreError::invalid(
                "chain needs at least one site".to_string(),
            ));
        }
        if self.couplings.len() != self.n_sites - 1 {
            return Err(CoreError::invalid(format!(
                "expected {} couplings for {} sites, got {}",
                self.n_sites - 1,
                self.n_sites,
                self.couplings.len()
            )));
        }
        if self.fields.len() != self.n_sites {
            return Err(CoreError::invalid(format!(
                "expected {} fields for {} sites, got {}",
                self.n_sites,
                self.n_sites,
                self.fields.len()
            )));
        }
        if let Some(j) = self.couplings.iter().find(|j| !j.is_finite()) {
            return Err(CoreError::invalid(format!("non-finite coupling {j}")));
        }
        if let Some(b) = self.fields.iter().find(|b| !b.is_finite()) {
            return Err(CoreError::invalid(format!("non-finite field {b}")));
        }
        Ok(())
    }

    /// Copy of this spec with every coupling except bond `k` (0-based)
    /// zeroed; all field terms stay active. This is the transfer-phase
    /// Hamiltonian support for protocol iteration k+1.
    pub fn restricted_to_bond(&self, k: usize) -> Result<XXChainSpec> {
        if k + 1 >= self.n_sites {
            return Err(CoreError::invalid(format!(
                "bond {k} out of range for {} sites",
                self.n_sites
            )));
        }
        let mut couplings = vec![0.0; self.couplings.len()];
        couplings[k] = self.couplings[k];
        Ok(XXChainSpec {
            n_sites: self.n_sites,
            couplings,
            fields: self.fields.clone(),
        })
    }
}

/// Build the chain Hamiltonian in the ladder (σ±) form.
pub fn build_xx_hamiltonian(spec: &XXChainSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut h = ComplexMatrix::zeros(1 << n);
    for (k, &j) in spec.couplings.iter().enumerate() {
        if j == 0.0 {
            continue;
        }
        let pm = pauli_string_matrix(&PauliString::with(
            n,
            &[(k, SitePauli::Plus), (k + 1, SitePauli::Minus)],
        )?);
        let mp = pauli_string_matrix(&PauliString::with(
            n,
            &[(k, SitePauli::Minus), (k + 1, SitePauli::Plus)],
        )?);
        h = h.add(&pm.add(&mp).scale(Complex64::new(0.25 * j, 0.0)));
    }
    for (site, &b) in spec.fields.iter().enumerate() {
        if b == 0.0 {
            continue;
        }
        let z = pauli_string_matrix(&PauliString::with(n, &[(site, SitePauli::Z)])?);
        h = h.add(&z.scale(Complex64::new(-b, 0.0)));
    }
    Ok(h)
}

/// Build the same Hamiltonian in the Pauli (XY) form
/// `½ Σ J (X_kX_{k+1} + Y_kY_{k+1}) − Σ B Z`. Used to assert the two printed
/// forms coincide; not the production path.
pub fn build_xx_hamiltonian_xy_form(spec: &XXChainSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut h = ComplexMatrix::zeros(1 << n);
    for (k, &j) in spec.couplings.iter().enumerate() {
        if j == 0.0 {
            continue;
        }
        let xx = pauli_string_matrix(&PauliString::with(
            n,
            &[(k, SitePauli::X), (k + 1, SitePauli::X)],
        )?);
        let yy = pauli_string_matrix(&PauliString::with(
            n,
            &[(k, SitePauli::Y), (k + 1, SitePauli::Y)],
        )?);
        h = h.add(&xx.add(&yy).scale(Complex64::new(0.5 * j, 0.0)));
    }
    for (site, &b) in spec.fields.iter().enumerate() {
        if b == 0.0 {
            continue;
        }
        let z = pauli_string_matrix(&PauliString::with(n, &[(site, SitePauli::Z)])?);
        h = h.add(&z.scale(Complex64::new(-b, 0.0)));
    }
    Ok(h)
}

/// The total-Z operator Σ_n Z_n on an `n`-qubit register.
pub fn total_z(n: usize) -> ComplexMatrix {
    let mut z = ComplexMatrix::zeros(1 << n);
    for site in 0..n {
        let zn = pauli_string_matrix(
            &PauliString::with(n, &[(site, SitePauli::Z)]).expect("site in range"),
        );
        z = z.add(&zn);
    }
    z
}

/// Frobenius norm of the commutator `[op, z_total]` — the conservation
/// diagnostic. Zero (to rounding) for every chain Hamiltonian and every
/// (partial-)swap, which is the model's conservation law.
pub fn check_conservation(op: &ComplexMatrix, z_total: &ComplexMatrix) -> f64 {
    op.commutator(z_total).frobenius_norm()
}

/// Propagation mode for the transfer phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorMode {
    /// `exp(−iHt)` via spectral decomposition.
    Exact,
    /// Degree-1 truncation: `ρ − it[H, ρ]`.
    PerturbativeOrder1,
    /// Degree-2 truncation: `ρ − it[H, ρ] − ½t²[H,[H, ρ]]`.
    PerturbativeOrder2,
}

/// A realized propagator for one (Hamiltonian, t, mode) triple.
///
/// In the perturbative modes `matrix` holds the truncated series
/// `I − itH (− ½t²H²)` for inspection; state propagation itself goes through
/// [`propagate`]/[`Jet::transfer`], whose commutator form preserves the
/// trace exactly instead of only to O(t³).
#[derive(Debug, Clone)]
pub struct Propagator {
    pub matrix: ComplexMatrix,
    pub t: f64,
    pub mode: PropagatorMode,
}

impl Propagator {
    /// Build the propagator matrix for `h` over time `t`.
    pub fn build(h: &ComplexMatrix, t: f64, mode: PropagatorMode) -> Result<Propagator> {
        let matrix = match mode {
            PropagatorMode::Exact => matrix_exp_hermitian(h, t)?,
            PropagatorMode::PerturbativeOrder1 => {
                ComplexMatrix::identity(h.dim()).sub(&h.scale(I1 * t))
            }
            PropagatorMode::PerturbativeOrder2 => ComplexMatrix::identity(h.dim())
                .sub(&h.scale(I1 * t))
                .sub(&h.matmul(h).scale(Complex64::new(0.5 * t * t, 0.0))),
        };
        Ok(Propagator { matrix, t, mode })
    }
}

/// Propagate a density matrix under the chain Hamiltonian of `spec` for
/// time `t`.
pub fn propagate(
    rho: &ComplexMatrix,
    spec: &XXChainSpec,
    t: f64,
    mode: PropagatorMode,
) -> Result<ComplexMatrix> {
    let h = build_xx_hamiltonian(spec)?;
    propagate_with_hamiltonian(rho, &h, t, mode)
}

/// Propagate under an explicit Hamiltonian matrix.
pub fn propagate_with_hamiltonian(
    rho: &ComplexMatrix,
    h: &ComplexMatrix,
    t: f64,
    mode: PropagatorMode,
) -> Result<ComplexMatrix> {
    if rho.dim() != h.dim() {
        return Err(CoreError::invalid(format!(
            "propagate: state dim {} does not match Hamiltonian dim {}",
            rho.dim(),
            h.dim()
        )));
    }
    match mode {
        PropagatorMode::Exact => {
            let u = matrix_exp_hermitian(h, t)?;
            Ok(rho.conjugate_by(&u))
        }
        PropagatorMode::PerturbativeOrder1 => {
            let comm = h.commutator(rho);
            Ok(rho.sub(&comm.scale(I1 * t)))
        }
        PropagatorMode::PerturbativeOrder2 => {
            let comm = h.commutator(rho);
            let double = h.commutator(&comm);
            Ok(rho
                .sub(&comm.scale(I1 * t))
                .sub(&double.scale(Complex64::new(0.5 * t * t, 0.0))))
        }
    }
}

/// A density matrix carried as a truncated polynomial in t:
/// `ρ(t) = L₀ + L₁·t + L₂·t² (+ …)`, one coefficient matrix per degree.
///
/// Layers above 0 need not be Hermitian individually; the reconstructed
/// value at real t is. Collisions (t-independent linear maps) act on each
/// layer; a transfer step mixes adjacent layers per the truncated
/// Baker–Campbell–Hausdorff expansion.
#[derive(Debug, Clone)]
pub struct Jet {
    layers: Vec<ComplexMatrix>,
}

impl Jet {
    /// Jet of a t-independent state, padded with zero layers up to `degree`.
    pub fn from_state(rho: ComplexMatrix, degree: usize) -> Jet {
        let dim = rho.dim();
        let mut layers = Vec::with_capacity(degree + 1);
        layers.push(rho);
        for _ in 0..degree {
            layers.push(ComplexMatrix::zeros(dim));
        }
        Jet { layers }
    }

    /// Build directly from coefficient layers (degree = layers.len() − 1).
    pub fn from_layers(layers: Vec<ComplexMatrix>) -> Result<Jet> {
        if layers.is_empty() {
            return Err(CoreError::invalid(
                "jet needs at least one layer".to_string(),
            ));
        }
        let dim = layers[0].dim();
        if layers.iter().any(|l| l.dim() != dim) {
            return Err(CoreError::invalid(
                "jet layers must share a dimension".to_string(),
            ));
        }
        Ok(Jet { layers })
    }

    /// Truncation degree.
    pub fn degree(&self) -> usize {
        self.layers.len() - 1
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.layers[0].dim()
    }

    /// Coefficient matrix of t^d.
    pub fn layer(&self, d: usize) -> &ComplexMatrix {
        &self.layers[d]
    }

    /// All coefficient layers, degree order.
    pub fn layers(&self) -> &[ComplexMatrix] {
        &self.layers
    }

    /// Evaluate the polynomial at a concrete t.
    pub fn value(&self, t: f64) -> ComplexMatrix {
        let mut acc = self.layers[0].clone();
        let mut tp = 1.0;
        for layer in self.layers.iter().skip(1) {
            tp *= t;
            acc = acc.add(&layer.scale(Complex64::new(tp, 0.0)));
        }
        acc
    }

    /// One transfer step under `h` with unit time per layer degree:
    /// `L'_d = L_d − i[H, L_{d−1}] − ½[H,[H, L_{d−2}]]`, truncated at the
    /// jet's degree. Trace of every layer is preserved exactly.
    pub fn transfer(&self, h: &ComplexMatrix) -> Jet {
        let mut out = Vec::with_capacity(self.layers.len());
        for d in 0..self.layers.len() {
            let mut acc = self.layers[d].clone();
            if d >= 1 {
                acc = acc.sub(&h.commutator(&self.layers[d - 1]).scale(I1));
            }
            if d >= 2 {
                let inner = h.commutator(&self.layers[d - 2]);
                acc = acc.sub(&h.commutator(&inner).scale(Complex64::new(0.5, 0.0)));
            }
            out.push(acc);
        }
        Jet { layers: out }
    }
}

/// Expectation value `Tr(op·ρ)`.
pub fn expectation(op: &ComplexMatrix, rho: &ComplexMatrix) -> Complex64 {
    op.matmul(rho).trace()
}

/// Basis index of the single-excitation state with only `site` excited
/// (|0…010…0⟩ with the 1 at `site`; qubit 0 most significant).
pub fn single_excitation_index(n: usize, site: usize) -> usize {
    1usize << (n - 1 - site)
}

/// Restrict an operator to the single-excitation sector: the N×N block
/// ⟨e_i|A|e_j⟩ over the states with exactly one excited site.
pub fn single_excitation_block(a: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let mut block = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            block[(i, j)] = a[(single_excitation_index(n, i), single_excitation_index(n, j))];
        }
    }
    block
}

/// Weight of a state inside a ΣZ eigenvalue sector: the sum of diagonal
/// entries over basis states with exactly `k` excited qubits.
pub fn excitation_sector_weight(rho: &ComplexMatrix, n: usize, k: u32) -> f64 {
    let mut acc = 0.0;
    for idx in 0..(1usize << n) {
        if (idx as u64).count_ones() == k {
            acc += rho[(idx, idx)].re;
        }
    }
    acc
}

/// Eigenvalues of a Hermitian operator (ascending) — convenience wrapper.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.0)
}
