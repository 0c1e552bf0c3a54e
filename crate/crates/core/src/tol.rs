//! Centralized numerical tolerances.
//!
//! Every comparison threshold used by the library, the verification suite and
//! the acceptance tests is defined here with its justification. No ad-hoc
//! magic numbers at call sites.

/// Operator identities that hold exactly in the algebra (commutators that
/// vanish, unitarity of spectral exponentials, Hermiticity preservation).
/// f64 matrix products of our sizes (≤ 32×32) accumulate well under 1e-13;
/// 1e-12 leaves headroom.
pub const EXACT_ALGEBRA: f64 = 1e-12;

/// Equivalence of two independent formulations of the same quantity
/// (Bloch-form vs density-form channel, recursion vs collision engine).
/// Both sides are short f64 pipelines; agreement is ~1e-14 in practice.
pub const FORMULATION_EQUIV: f64 = 1e-12;

/// Unitarity of the Hermitian matrix exponential. The Jacobi eigensolver
/// drives off-diagonal mass below 1e-14 of the norm; the reconstructed
/// U U† − I lands near 1e-14 for our dimensions. 1e-9 is the published
/// contract bound, kept loose for larger registers.
pub const UNITARITY: f64 = 1e-9;

/// Recovery of coefficients by Hilbert–Schmidt projection over a set of
/// ≤ 10 mutually orthogonal Pauli strings.
pub const HS_RECOVERY: f64 = 1e-10;

/// Conservation-law drift of the global ⟨ΣZ⟩ account (chain + reservoir +
/// discard ledger) over a full exact-engine protocol run. Each collision and
/// transfer conserves the account to machine precision; a run performs tens
/// of steps.
pub const CONSERVATION_DRIFT: f64 = 1e-9;

/// Probability bookkeeping on the recombined photon register.
pub const PHOTON_NORM: f64 = 1e-9;

/// Engine-vs-closed-form agreement for coefficient extraction at matched
/// truncation order. The closed forms replicate the truncated propagation
/// exactly, so this is pure rounding noise (~1e-13 observed).
pub const ENGINE_VS_CLOSED_FORM: f64 = 1e-9;

/// Reference-table regression: table values are printed to 3–4 significant
/// digits, so half-ulp of the printed representation.
pub const TABLE_F: f64 = 5e-4;

/// Reference-table regression for the |G| column (printed to 2 digits of a
/// 1e-4 .. 1e-3 scale quantity).
pub const TABLE_G: f64 = 1e-4;

/// Integer-ness of fitted log-cos damping exponents. The truncated engine's
/// layer-1 coefficient is an exact cosine power, so fits return integers to
/// rounding error.
pub const EXPONENT_FIT: f64 = 1e-6;

/// Weak-coupling collapse bounds (reference claims on [0, 0.3]).
pub const WEAK_F_GAP: f64 = 2e-3;
pub const WEAK_S_GAP: f64 = 2e-2;
pub const WEAK_G_BOUND: f64 = 5e-3;

/// Sharpness of the classical no-go variance check.
pub const NOGO_VARIANCE: f64 = 1e-12;

/// Relative tolerance for spot checks of the bundled polynomial-expansion
/// fixtures against the live recursion.
pub const FIXTURE_SPOT_REL: f64 = 1e-3;

/// Default witness threshold scale factor: coherence must exceed
/// `1e-6 · t · J₁` for the task to count as achieved.
pub const WITNESS_THRESHOLD_SCALE: f64 = 1e-6;

/// Log-log slope window for the exact-vs-order-2 error scaling check.
pub const SLOPE_TARGET: f64 = 3.0;
pub const SLOPE_WINDOW: f64 = 0.1;
