//! Single and multiple Changhee q-zeta functions, their special values at
//! negative integers, and the (|u| > 1)-damped Euler-Barnes multiple zeta
//! function.
//!
//! With |u| < 1 the defining q-zeta series converges absolutely for every
//! s in C (the q-brackets are uniformly bounded and the damping factor is
//! geometric), so no analytic continuation machinery is needed: the series
//! evaluator covers the whole plane and the closed forms supply the
//! negative-integer values independently.

use num_complex::Complex64;

use crate::changhee::h_multiple_closed;
use crate::error::{Error, Result};
use crate::lattice::{CompensatedComplex, Growth, LatticeGeometry};
use crate::qcore::QParams;
use crate::DEFAULT_MAX_TERMS;

/// A truncated-series value with its certified truncation error.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    /// Certified bound on everything the truncation dropped; at most the
    /// requested tolerance on success.
    pub tail_bound: f64,
    /// prod (L_i + 1) over the swept box.
    pub terms_used: u64,
    /// Per-axis cutoffs L_1..L_r.
    pub truncation: Vec<u64>,
}

/// Bracket bases smaller than this cannot be raised to a complex power.
const ZERO_BRACKET_THRESHOLD: f64 = 1e-13;

fn check_s(s: Complex64) -> Result<()> {
    if !crate::qcore::finite(s) {
        return Err(Error::InvalidParameter {
            name: "s",
            reason: "must have finite real and imaginary parts".into(),
        });
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("tolerance must be a positive finite number, got {tol}"),
        });
    }
    Ok(())
}

fn check_positive_shift(p: &QParams) -> Result<()> {
    if p.w().re <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "w",
            reason: "the zeta series requires Re(w) > 0 (the n = 0 bracket must not vanish)".into(),
        });
    }
    Ok(())
}

/// s as a nonnegative bracket power when s is a real integer <= 0.
fn as_negative_integer(s: Complex64) -> Option<u32> {
    if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 && s.re >= -(u32::MAX as f64) {
        Some((-s.re) as u32)
    } else {
        None
    }
}

/// Changhee q-zeta function zeta_q(s, w, u | w_1; v_1), rank 1.
pub fn zeta_single(s: Complex64, p: &QParams, tol: f64) -> Result<Evaluation> {
    if p.rank() != 1 {
        return Err(Error::InvalidParameter {
            name: "weights",
            reason: format!("zeta_single needs rank 1, got {}", p.rank()),
        });
    }
    zeta_multiple(s, p, tol)
}

/// Multiple Changhee q-zeta function
/// zeta_q^(r)(s, u, w | w_1..w_r; v_1..v_r) =
///     sum over n_1..n_r of u^{sum v_i n_i} / [w + sum n_i w_i]_q^s.
pub fn zeta_multiple(s: Complex64, p: &QParams, tol: f64) -> Result<Evaluation> {
    zeta_multiple_with_limit(s, p, tol, DEFAULT_MAX_TERMS)
}

pub fn zeta_multiple_with_limit(
    s: Complex64,
    p: &QParams,
    tol: f64,
    max_terms: u64,
) -> Result<Evaluation> {
    check_s(s)?;
    check_tol(tol)?;
    check_positive_shift(p)?;
    let geo = LatticeGeometry::new(p)?;
    let growth = match as_negative_integer(s) {
        Some(n) => Growth::IntPower(n),
        None => Growth::CPower(s),
    };
    let plan = geo.plan(&growth, tol, max_terms)?;
    zeta_sum(&geo, s, &plan.cutoffs, plan.tail, plan.terms)
}

/// Evaluates the zeta sum over an explicit cutoff box (no certified tail).
/// Used to check that refining the truncation stays within the reported
/// tail bound.
#[cfg(test)]
pub(crate) fn zeta_sum_at_cutoffs(s: Complex64, p: &QParams, cutoffs: &[u64]) -> Result<Evaluation> {
    let geo = LatticeGeometry::new(p)?;
    let terms = cutoffs.iter().map(|l| l + 1).product();
    zeta_sum(&geo, s, cutoffs, f64::NAN, terms)
}

fn zeta_sum(
    geo: &LatticeGeometry,
    s: Complex64,
    cutoffs: &[u64],
    tail: f64,
    terms: u64,
) -> Result<Evaluation> {
    let mut acc = CompensatedComplex::new();
    let mut zero_base = false;
    match as_negative_integer(s) {
        Some(n) => {
            geo.sum(cutoffs, |bracket, damp| {
                let mut power = Complex64::new(1.0, 0.0);
                for _ in 0..n {
                    power *= bracket;
                }
                acc.add(damp * power);
            });
        }
        None => {
            geo.sum(cutoffs, |bracket, damp| {
                if bracket.norm() < ZERO_BRACKET_THRESHOLD {
                    zero_base = true;
                    return;
                }
                acc.add(damp * (-s * bracket.ln()).exp());
            });
        }
    }
    if zero_base {
        return Err(Error::ZeroBracket);
    }
    Ok(Evaluation {
        value: acc.value(),
        tail_bound: tail,
        terms_used: terms,
        truncation: cutoffs.to_vec(),
    })
}

/// Special value zeta_q^(r)(-n, ...) = H_{n,q}^(r)(...) / (1-u)^r, an exact
/// finite computation through the closed form.
pub fn zeta_neg_int(n: u32, p: &QParams) -> Result<Complex64> {
    Ok(h_multiple_closed(n, p)? / p.one_minus_u_pow_rank())
}

/// Euler-Barnes multiple zeta function
/// zeta_r(s, w, u | a_1..a_r) = sum over m_1..m_r of
///     u^{-(m_1+..+m_r)} / (w + sum m_i a_i)^s,
/// in its own |u| > 1 regime; Re(w) > 0 and Re(a_i) > 0 keep the bases in
/// the right half-plane, where the principal power is unambiguous.
pub fn euler_barnes_zeta(
    s: Complex64,
    w: Complex64,
    u: Complex64,
    a: &[Complex64],
    tol: f64,
) -> Result<Evaluation> {
    let cutoffs = euler_barnes_plan(s, w, u, a, tol, DEFAULT_MAX_TERMS)?;
    euler_barnes_at_cutoffs(s, w, u, a, &cutoffs.0, cutoffs.1)
}

fn euler_barnes_validate(s: Complex64, w: Complex64, u: Complex64, a: &[Complex64]) -> Result<()> {
    check_s(s)?;
    for (name, z) in [("w", w), ("u", u)] {
        if !crate::qcore::finite(z) {
            return Err(Error::InvalidParameter {
                name,
                reason: "must have finite real and imaginary parts".into(),
            });
        }
    }
    if u.norm() <= 1.0 {
        return Err(Error::InvalidParameter {
            name: "u",
            reason: format!("|u| = {} must be > 1 for the Euler-Barnes zeta", u.norm()),
        });
    }
    if w.re <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "w",
            reason: format!("Re(w) = {} must be > 0", w.re),
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter {
            name: "a",
            reason: "at least one parameter a_j is required".into(),
        });
    }
    for (i, ai) in a.iter().enumerate() {
        if !crate::qcore::finite(*ai) || ai.re <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: format!("Re(a_{}) must be > 0 and finite", i + 1),
            });
        }
    }
    Ok(())
}

/// Per-axis cutoff selection. The damping ratio is g = 1/|u| on every axis.
/// For Re(s) >= 0 the dropped terms are bounded by
///     exp(|Im s| pi/2) Re(w)^{-Re s} g^{sum m_i};
/// for Re(s) < 0 the polynomial growth |base|^{-Re s} is absorbed into a
/// slightly larger geometric ratio sqrt(g) with the computable constant
/// sup_x (1+x)^p g^{x/2}.
fn euler_barnes_plan(
    s: Complex64,
    w: Complex64,
    u: Complex64,
    a: &[Complex64],
    tol: f64,
    max_terms: u64,
) -> Result<(Vec<u64>, f64)> {
    euler_barnes_validate(s, w, u, a)?;
    check_tol(tol)?;
    let r = a.len();
    let g = 1.0 / u.norm();
    let twist = (std::f64::consts::FRAC_PI_2 * s.im.abs()).exp();
    let (gamma, prefactor) = if s.re >= 0.0 {
        (g, twist * w.re.powf(-s.re))
    } else {
        let p = -s.re;
        let m: f64 = a.iter().map(|ai| ai.norm()).fold(w.norm(), f64::max);
        let gamma = g.sqrt();
        let eta = -gamma.ln();
        let x_star = (p / eta - 1.0).max(0.0);
        let c_axis = (1.0 + x_star).powf(p) * (-eta * x_star).exp();
        (gamma, twist * m.powf(p) * c_axis.powi(r as i32))
    };
    let cross = (1.0 - gamma).powi(-(r as i32 - 1));
    let rhs = tol * (1.0 - gamma) / (r as f64 * prefactor * cross);
    let l = if rhs >= 1.0 {
        2u64
    } else {
        (rhs.ln() / gamma.ln()).ceil().max(2.0) as u64
    };
    let cutoffs = vec![l; r];
    let tail: f64 = (0..r)
        .map(|_| prefactor * gamma.powi(l as i32 + 1) / (1.0 - gamma) * cross)
        .sum();
    crate::lattice::check_budget(&cutoffs, max_terms)?;
    if !(tail <= tol) {
        return Err(Error::ToleranceUnreachable {
            required: cutoffs.iter().map(|l| *l as u128 + 1).product(),
            max_terms,
        });
    }
    Ok((cutoffs, tail))
}

pub(crate) fn euler_barnes_at_cutoffs(
    s: Complex64,
    w: Complex64,
    u: Complex64,
    a: &[Complex64],
    cutoffs: &[u64],
    tail: f64,
) -> Result<Evaluation> {
    euler_barnes_validate(s, w, u, a)?;
    let inv_u = Complex64::new(1.0, 0.0) / u;
    let neg_int = as_negative_integer(s);
    let mut acc = CompensatedComplex::new();
    fn sweep(
        level: usize,
        base: Complex64,
        damp: Complex64,
        a: &[Complex64],
        inv_u: Complex64,
        cutoffs: &[u64],
        term: &mut impl FnMut(Complex64, Complex64),
    ) {
        let mut b = base;
        let mut d = damp;
        if level + 1 == a.len() {
            for _ in 0..=cutoffs[level] {
                term(b, d);
                b += a[level];
                d *= inv_u;
            }
        } else {
            for _ in 0..=cutoffs[level] {
                sweep(level + 1, b, d, a, inv_u, cutoffs, term);
                b += a[level];
                d *= inv_u;
            }
        }
    }
    match neg_int {
        Some(n) => {
            let mut term = |b: Complex64, d: Complex64| {
                let mut power = Complex64::new(1.0, 0.0);
                for _ in 0..n {
                    power *= b;
                }
                acc.add(d * power);
            };
            sweep(0, w, Complex64::new(1.0, 0.0), a, inv_u, cutoffs, &mut term);
        }
        None => {
            let mut term = |b: Complex64, d: Complex64| {
                acc.add(d * (-s * b.ln()).exp());
            };
            sweep(0, w, Complex64::new(1.0, 0.0), a, inv_u, cutoffs, &mut term);
        }
    }
    Ok(Evaluation {
        value: acc.value(),
        tail_bound: tail,
        terms_used: cutoffs.iter().map(|l| l + 1).product(),
        truncation: cutoffs.to_vec(),
    })
}
