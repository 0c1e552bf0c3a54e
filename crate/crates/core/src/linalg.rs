//! Dense complex linear algebra sized for small multi-qubit registers.
//!
//! Everything here is deliberately plain: row-major `Vec<Complex64>` storage,
//! O(n³) products, and a cyclic-Jacobi Hermitian eigensolver. Registers in
//! this crate top out at a handful of qubits (the exact engine caps the
//! joint register at 2^10 amplitudes), where this is both fast and, more
//! importantly, free of platform-dependent backends — byte-identical output
//! matters to the CLI layer.
//!
//! Conventions used throughout the crate:
//!
//! * Qubit 0 is the most significant bit of the basis index.
//! * Ladder operators carry no 1/2: `σ± = X ± iY`, so `σ+ = [[0,2],[0,0]]`.
//! * A Bloch vector `(x, y, z)` encodes `ρ = (I + xX + yY + zZ)/2`; the
//!   excited (populated) monomer state is `z = −1`.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Complex unit shorthand.
pub const I1: Complex64 = Complex64::new(0.0, 1.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major slice of `n*n` entries.
    pub fn from_rows(n: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(CoreError::invalid(format!(
                "matrix data length {} does not match dimension {n}",
                entries.len()
            )));
        }
        Ok(ComplexMatrix {
            n,
            data: entries.to_vec(),
        })
    }

    /// Build from real row-major entries.
    pub fn from_real_rows(n: usize, entries: &[f64]) -> Result<Self> {
        let data: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(n, &data)
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matmul");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch in add");
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o += r;
        }
        out
    }

    /// Entrywise difference.
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sub");
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o -= r;
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o *= c;
        }
        out
    }

    /// Commutator `[self, rhs]`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs).sub(&rhs.matmul(self))
    }

    /// Trace.
    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Kronecker product `self ⊗ rhs` (self supplies the high-order bits).
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.n, rhs.n);
        let mut out = Self::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let s = self[(i, j)];
                if s.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out[(i * b + k, j * b + l)] = s * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Conjugation `U * self * U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.dagger())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Kronecker product of a sequence of matrices, left factor most significant.
pub fn kron_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for f in factors {
        out = out.kron(f);
    }
    out
}

/// Partial trace over a register of qubit subsystems.
///
/// `dims` lists each subsystem dimension (most significant first); `keep`
/// lists the subsystem indices to retain, in ascending order. The result is
/// ordered by the kept subsystems.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if rho.dim() != total {
        return Err(CoreError::invalid(format!(
            "partial_trace: matrix dim {} does not match subsystem dims product {total}",
            rho.dim()
        )));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() || keep.iter().any(|&k| k >= dims.len()) {
        return Err(CoreError::invalid(
            "partial_trace: keep indices must be unique and in range".to_string(),
        ));
    }
    let drop: Vec<usize> = (0..dims.len()).filter(|i| !sorted.contains(i)).collect();
    let dk: usize = sorted.iter().map(|&i| dims[i]).product::<usize>().max(1);
    let dd: usize = drop.iter().map(|&i| dims[i]).product::<usize>().max(1);

    // Index helpers: decompose a flat index into per-subsystem digits.
    let strides: Vec<usize> = {
        let mut s = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    };
    let compose = |kept_digits: &[usize], drop_digits: &[usize]| -> usize {
        let mut idx = 0;
        for (pos, &sub) in sorted.iter().enumerate() {
            idx += kept_digits[pos] * strides[sub];
        }
        for (pos, &sub) in drop.iter().enumerate() {
            idx += drop_digits[pos] * strides[sub];
        }
        idx
    };
    let digits = |mut flat: usize, subs: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize; subs.len()];
        for (pos, &sub) in subs.iter().enumerate().rev() {
            out[pos] = flat % dims[sub];
            flat /= dims[sub];
        }
        out
    };

    let mut out = ComplexMatrix::zeros(dk);
    for ki in 0..dk {
        let kd_i = digits(ki, &sorted);
        for kj in 0..dk {
            let kd_j = digits(kj, &sorted);
            let mut acc = Complex64::new(0.0, 0.0);
            for d in 0..dd {
                let dd_d = digits(d, &drop);
                acc += rho[(compose(&kd_i, &dd_d), compose(&kd_j, &dd_d))];
            }
            out[(ki, kj)] = acc;
        }
    }
    Ok(out)
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, V)` with `A = V diag(w) V†`, eigenvalues ascending.
/// Converges quadratically; for the ≤ 32×32 Hermitian matrices used here the
/// off-diagonal mass reaches rounding level in well under the sweep cap.
pub fn eigh(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = a.dim();
    if a.hermiticity_defect() > 1e-10 * (1.0 + a.frobenius_norm()) {
        return Err(CoreError::invalid(
            "eigh: matrix is not Hermitian".to_string(),
        ));
    }
    let mut m = a.clone();
    // Symmetrize exactly to keep the iteration clean.
    for i in 0..n {
        for j in 0..n {
            let h = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = h;
            m[(j, i)] = h.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let norm = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = 1e-15 * norm;
    const MAX_SWEEPS: usize = 60;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[(i, j)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                // Phase that makes the (p,q) entry real positive, then a real
                // Jacobi rotation on the 2×2 block.
                let phase = apq / apq.norm(); // e^{iφ}
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * apq.norm());
                let tsign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = tsign / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Combined unitary G: columns p,q mix with
                //   G[p][p] = c, G[p][q] = s,
                //   G[q][p] = -s·conj(phase), G[q][q] = c·conj(phase).
                let gqp = -s * phase.conj();
                let gqq = c * phase.conj();
                // A <- G† A  (rows p,q)
                for k in 0..n {
                    let arow_p = m[(p, k)];
                    let arow_q = m[(q, k)];
                    m[(p, k)] = c * arow_p + gqp.conj() * arow_q;
                    m[(q, k)] = s * arow_p + gqq.conj() * arow_q;
                }
                // A <- A G  (columns p,q)
                for k in 0..n {
                    let acol_p = m[(k, p)];
                    let acol_q = m[(k, q)];
                    m[(k, p)] = acol_p * c + acol_q * gqp;
                    m[(k, q)] = acol_p * s + acol_q * gqq;
                }
                // V <- V G
                for k in 0..n {
                    let vcol_p = v[(k, p)];
                    let vcol_q = v[(k, q)];
                    v[(k, p)] = vcol_p * c + vcol_q * gqp;
                    v[(k, q)] = vcol_p * s + vcol_q * gqq;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let w: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut vs = ComplexMatrix::zeros(n);
    for (new_col, &(_, old_col)) in pairs.iter().enumerate() {
        for r in 0..n {
            vs[(r, new_col)] = v[(r, old_col)];
        }
    }
    Ok((w, vs))
}

/// Unitary propagator `exp(−i H t)` of a Hermitian `H`, via spectral
/// decomposition. The result is unitary to working precision.
pub fn matrix_exp_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let (w, v) = eigh(h)?;
    let n = h.dim();
    // U = V e^{-i w t} V†
    let mut phased = v.clone();
    for (col, &lambda) in w.iter().enumerate() {
        let ph = (-I1 * lambda * t).exp();
        for row in 0..n {
            phased[(row, col)] *= ph;
        }
    }
    Ok(phased.matmul(&v.dagger()))
}

// ---------------------------------------------------------------------------
// Pauli strings
// ---------------------------------------------------------------------------

/// Single-site Pauli / ladder factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SitePauli {
    I,
    X,
    Y,
    Z,
    /// `σ+ = X + iY = [[0,2],[0,0]]` — no 1/2 prefactor.
    Plus,
    /// `σ− = X − iY = [[0,0],[2,0]]`.
    Minus,
}

impl SitePauli {
    /// The 2×2 matrix of this factor.
    pub fn matrix(self) -> ComplexMatrix {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let two = Complex64::new(2.0, 0.0);
        let entries = match self {
            SitePauli::I => [one, z, z, one],
            SitePauli::X => [z, one, one, z],
            SitePauli::Y => [z, -I1, I1, z],
            SitePauli::Z => [one, z, z, -one],
            SitePauli::Plus => [z, two, z, z],
            SitePauli::Minus => [z, z, two, z],
        };
        ComplexMatrix::from_rows(2, &entries).expect("2x2 literal")
    }
}

/// A product of single-site factors over an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    factors: Vec<SitePauli>,
}

impl PauliString {
    /// All-identity string on `n` sites.
    pub fn identity(n: usize) -> Self {
        PauliString {
            factors: vec![SitePauli::I; n],
        }
    }

    /// String with the given factors placed at `(site, factor)` positions,
    /// identity elsewhere. Each site may appear at most once.
    pub fn with(n: usize, placed: &[(usize, SitePauli)]) -> Result<Self> {
        let mut s = Self::identity(n);
        for &(site, f) in placed {
            if site >= n {
                return Err(CoreError::invalid(format!(
                    "PauliString site {site} out of range for {n} qubits"
                )));
            }
            if s.factors[site] != SitePauli::I {
                return Err(CoreError::invalid(format!(
                    "PauliString site {site} assigned twice"
                )));
            }
            s.factors[site] = f;
        }
        Ok(s)
    }

    /// Number of sites.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// True if all factors are identity.
    pub fn is_empty(&self) -> bool {
        self.factors.iter().all(|f| *f == SitePauli::I)
    }

    /// Site factors.
    pub fn factors(&self) -> &[SitePauli] {
        &self.factors
    }
}

/// Dense matrix of a Pauli string (site 0 most significant).
pub fn pauli_string_matrix(s: &PauliString) -> ComplexMatrix {
    let mats: Vec<ComplexMatrix> = s.factors().iter().map(|f| f.matrix()).collect();
    let refs: Vec<&ComplexMatrix> = mats.iter().collect();
    kron_all(&refs)
}

/// Embed a 4×4 two-qubit operator acting on qubits `(a, b)` of an `n`-qubit
/// register (qubit 0 most significant; `a` supplies the high-order bit of the
/// operator's own 2-qubit index).
pub fn embed_two_qubit(
    u: &ComplexMatrix,
    n_qubits: usize,
    a: usize,
    b: usize,
) -> Result<ComplexMatrix> {
    if u.dim() != 4 {
        return Err(CoreError::invalid(format!(
            "embed_two_qubit expects a 4x4 operator, got {}",
            u.dim()
        )));
    }
    if a == b || a >= n_qubits || b >= n_qubits {
        return Err(CoreError::invalid(format!(
            "embed_two_qubit: qubit pair ({a},{b}) invalid for {n_qubits} qubits"
        )));
    }
    let dim = 1usize << n_qubits;
    let bit = |index: usize, q: usize| (index >> (n_qubits - 1 - q)) & 1;
    let mut out = ComplexMatrix::zeros(dim);
    for row in 0..dim {
        let (ra, rb) = (bit(row, a), bit(row, b));
        for ca in 0..2usize {
            for cb in 0..2usize {
                let amp = u[(2 * ra + rb, 2 * ca + cb)];
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let mut col = row;
                col &= !(1 << (n_qubits - 1 - a));
                col &= !(1 << (n_qubits - 1 - b));
                col |= ca << (n_qubits - 1 - a);
                col |= cb << (n_qubits - 1 - b);
                out[(row, col)] += amp;
            }
        }
    }
    Ok(out)
}

/// Hilbert–Schmidt projection coefficient `Tr(P†ρ) / Tr(P†P)`.
///
/// For mutually orthogonal strings this is a left inverse of linear
/// combination: projecting `Σ cᵢ Pᵢ` onto `Pᵢ` recovers `cᵢ`.
pub fn hs_project(p: &ComplexMatrix, rho: &ComplexMatrix) -> Complex64 {
    let pd = p.dagger();
    let num = pd.matmul(rho).trace();
    let den = pd.matmul(p).trace();
    num / den
}

// ---------------------------------------------------------------------------
// Bloch vectors
// ---------------------------------------------------------------------------

/// Bloch vector of a single qubit: `ρ = (I + xX + yY + zZ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// Construct; the physical ball |r| ≤ 1 is not enforced here (callers
    /// validate where it matters).
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    /// Maximally mixed state.
    pub fn mixed() -> Self {
        BlochVector::new(0.0, 0.0, 0.0)
    }

    /// Diagonal state with the given z component.
    pub fn diagonal(z: f64) -> Self {
        BlochVector::new(0.0, 0.0, z)
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Cross product `self × other`.
    pub fn cross(&self, other: &BlochVector) -> BlochVector {
        BlochVector::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }
}

/// Density matrix of a Bloch vector.
pub fn bloch_to_density(b: &BlochVector) -> ComplexMatrix {
    let half = Complex64::new(0.5, 0.0);
    let x = Complex64::new(b.x, 0.0);
    let y = Complex64::new(b.y, 0.0);
    let z = Complex64::new(b.z, 0.0);
    let entries = [
        half * (Complex64::new(1.0, 0.0) + z),
        half * (x - I1 * y),
        half * (x + I1 * y),
        half * (Complex64::new(1.0, 0.0) - z),
    ];
    ComplexMatrix::from_rows(2, &entries).expect("2x2 literal")
}

/// Bloch vector of a 2×2 density matrix (Hermitian part is read off; callers
/// owning non-Hermitian layers use the matrix API directly).
pub fn density_to_bloch(rho: &ComplexMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(CoreError::invalid(format!(
            "density_to_bloch expects a 2x2 matrix, got {}",
            rho.dim()
        )));
    }
    let x = (rho[(0, 1)] + rho[(1, 0)]).re;
    let y = (rho[(1, 0)] - rho[(0, 1)]).im;
    let z = (rho[(0, 0)] - rho[(1, 1)]).re;
    Ok(BlochVector::new(x, y, z))
}
