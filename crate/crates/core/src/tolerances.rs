//! Numerical thresholds used across the crate.
//!
//! These are policy constants, not machine epsilons: they state when a
//! quantity stops being physically meaningful, and they are echoed into run
//! reports so every result carries the thresholds it was computed under.

/// A state counts as normalized when |⟨ψ|ψ⟩ − 1| stays below this.
pub const NORMALIZATION: f64 = 1e-12;

/// Hermiticity gate for flagged operators: max |M − M†| entrywise.
pub const HERMITICITY: f64 = 1e-12;

/// Minimum magnitude for post-selection amplitudes and τ denominators.
/// Below this the weak value is numerically meaningless. For N-spin product
/// selections the gate applies per spin factor (i.e. to |⟨fin|in⟩|^(1/N)).
pub const ORTHOGONALITY: f64 = 1e-8;

/// τ counts as real when |Im τ| stays below this.
pub const REAL_TAU: f64 = 1e-10;

/// Maximum probability density tolerated at the first/last grid sample.
pub const BOUNDARY_DENSITY: f64 = 1e-12;

/// Weak-regime margin g(t_B)·t_B above which first-order results get a
/// warning flag.
pub const WEAK_MARGIN_WARN: f64 = 1e-2;

/// Norms below this floor count as the zero vector.
pub const ZERO_STATE_FLOOR: f64 = 1e-15;
