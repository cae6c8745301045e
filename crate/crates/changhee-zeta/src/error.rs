use thiserror::Error;

/// Errors shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter failed validation (wrong regime, non-finite, empty, ...).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A closed-form denominator 1 - q^{l w_j} u^{v_j} vanished (or came
    /// within `POLE_THRESHOLD` of vanishing) at binomial index `l`, axis `axis`.
    #[error("pole in closed form: |1 - q^(l*w_j) u^(v_j)| below threshold at l={l}, axis={axis}")]
    Pole { l: u32, axis: usize },

    /// Exact-rational pole: q^{l w_j} u^{v_j} == 1 identically.
    #[error("exact pole: q^(l*w_j) u^(v_j) = 1 at l={l}, axis={axis}")]
    ExactPole { l: u32, axis: usize },

    /// A series term had a q-bracket base too close to zero to raise to a
    /// complex power.
    #[error("zero q-bracket base encountered in series term")]
    ZeroBracket,

    /// Per-axis damping factor |u^{v_i}| >= 1: the lattice series diverges.
    #[error("divergent damping on axis {axis}: |u^(v_i)| = {ratio} >= 1")]
    DivergentDamping { axis: usize, ratio: f64 },

    /// Requested tolerance needs more terms than the configured cap.
    #[error("tolerance unreachable: {required} terms needed, cap is {max_terms}")]
    ToleranceUnreachable { required: u128, max_terms: u64 },

    /// Series division by a series with zero constant term.
    #[error("series division by zero constant term")]
    ZeroConstantTerm,

    /// Series arithmetic on mismatched truncation orders.
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    /// Float coefficient extraction beyond the exact-factorial range.
    #[error("coefficient index {n} exceeds the float factorial range (max {max}); use the rational path")]
    FactorialRange { n: usize, max: usize },

    /// Gamma function evaluated at a nonpositive integer.
    #[error("gamma function pole at nonpositive integer {re}")]
    GammaPole { re: f64 },

    /// Mellin quadrature requested outside its Re(s) > 1 regime.
    #[error("quadrature requires Re(s) > 1, got Re(s) = {re_s}")]
    QuadratureDomain { re_s: f64 },

    /// The generating-function decay constant came out nonpositive, so no
    /// integration cutoff can be certified.
    #[error("nonpositive decay constant {value}: cannot certify the integral tail")]
    NonpositiveDecay { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
