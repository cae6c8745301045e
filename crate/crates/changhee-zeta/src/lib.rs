//! Changhee q-Euler numbers and Barnes-type multiple q-zeta functions over
//! the complex field, with machine verification of the identities that
//! connect them.
//!
//! For |q| < 1 and a damping base |u| < 1, the rank-r Changhee q-Euler
//! polynomials are produced by the lattice generating function
//!
//! ```text
//! F(t) = (1-u)^r  sum over n_1..n_r >= 0 of
//!        u^{n_1 v_1 + .. + n_r v_r} exp([w + n_1 w_1 + .. + n_r w_r]_q t)
//! ```
//!
//! where `[x]_q = (1 - q^x)/(1 - q)` is the q-bracket. The same numbers have
//! a finite binomial closed form, and the associated q-zeta function
//!
//! ```text
//! zeta_q(s) = sum over n_1..n_r of u^{sum v_i n_i} / [w + sum n_i w_i]_q^s
//! ```
//!
//! is entire in s (the damping makes the series converge everywhere) with
//! special values zeta_q(-n) = H_{n,q}/(1-u)^r at the negative integers and
//! a Mellin-transform representation through F(-t). Every one of these
//! connections is computable here by at least two independent routes:
//!
//! - [`changhee`]: the closed forms, the direct series oracle with certified
//!   truncation bounds, and generating-function point evaluation;
//! - [`powerseries`]: truncated formal power series over complex or exact
//!   rational scalars, and the classical Frobenius-Euler / Euler-Barnes /
//!   Barnes-Bernoulli generating functions;
//! - [`zeta`]: the q-zeta series evaluators, their negative-integer special
//!   values, and the Euler-Barnes multiple zeta in its |u| > 1 regime;
//! - [`mellin`]: a complex Lanczos gamma and adaptive Gauss-Kronrod
//!   quadrature that checks the Mellin identity numerically;
//! - [`exactcheck`]: an arbitrary-precision rational oracle with no rounding
//!   at all, for rational parameters;
//! - [`verify`]: seeded cross-route verification suites;
//! - [`cli`]: the `chzeta` command-line front end.
//!
//! Run the suites from the shell with `chzeta verify --suite all --seed 7`;
//! the runnable examples under `examples/` walk through each capability.

pub mod changhee;
pub mod cli;
mod error;
pub mod exactcheck;
mod lattice;
pub mod mellin;
pub mod powerseries;
pub mod qcore;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use qcore::QParams;

/// Default cap on series term counts; the CLI reads `CHANGHEE_MAX_TERMS`
/// to override it.
pub const DEFAULT_MAX_TERMS: u64 = 100_000_000;
