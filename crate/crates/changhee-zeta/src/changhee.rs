//! Closed-form evaluators for Changhee q-Euler numbers and polynomials, the
//! direct-series oracle, and pointwise evaluation of their generating
//! function.
//!
//! The closed form is the finite binomial sum
//!
//! ```text
//! (1-u)^r / (1-q)^n * sum_{l=0}^{n} C(n,l) (-1)^l q^{lw}
//!                     / prod_j (1 - q^{l w_j} u^{v_j}),
//! ```
//!
//! a polynomial identity because C(n,l) = 0 beyond l = n. The series oracle
//! sums the damped lattice expansion of the generating function directly and
//! reports a certified truncation bound, giving an independent route to the
//! same numbers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{CompensatedComplex, Growth, LatticeGeometry};
use crate::qcore::{binomial, QParams};
use crate::zeta::Evaluation;
use crate::DEFAULT_MAX_TERMS;

/// Closed-form denominators closer to zero than this raise [`Error::Pole`]
/// instead of returning a huge value.
pub const POLE_THRESHOLD: f64 = 1e-13;

/// Which evaluation path produced a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    ClosedForm,
    SeriesOracle,
    GfCoeff,
}

/// A Changhee q-Euler number with its provenance and certified error bound.
///
/// `error_bound` is exactly 0 for the closed form (a finite sum) and the
/// certified truncation tail for the series routes.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangheeNumber {
    pub n: u32,
    pub value: Complex64,
    pub route: Route,
    pub error_bound: f64,
}

impl ChangheeNumber {
    pub fn closed(n: u32, p: &QParams) -> Result<Self> {
        Ok(Self {
            n,
            value: h_multiple_closed(n, p)?,
            route: Route::ClosedForm,
            error_bound: 0.0,
        })
    }

    pub fn oracle(n: u32, p: &QParams, tol: f64) -> Result<Self> {
        let eval = h_series_oracle(n, p, tol)?;
        Ok(Self {
            n,
            value: eval.value,
            route: Route::SeriesOracle,
            error_bound: eval.tail_bound,
        })
    }

    pub fn gf(n: u32, p: &QParams) -> Result<Self> {
        let coeffs = crate::powerseries::gf_changhee_coeffs(n as usize, p, None)?;
        Ok(Self {
            n,
            value: coeffs[n as usize],
            route: Route::GfCoeff,
            error_bound: crate::powerseries::GF_CHANGHEE_TAIL,
        })
    }
}

/// The shared binomial closed form (Theorem-3 shape), any rank, any shift.
/// Also reports the sum's absolute term mass: the alternating binomial sum
/// cancels heavily as |1-q| shrinks and n grows, and f64 roundoff scales
/// with the mass, not with the (much smaller) value.
fn closed_form_core(n: u32, p: &QParams) -> Result<(Complex64, f64)> {
    let one = Complex64::new(1.0, 0.0);
    let q = p.q();
    let u = p.u();
    let ln_q = q.ln();
    let u_pow_v: Vec<Complex64> = if u == Complex64::new(0.0, 0.0) {
        vec![Complex64::new(0.0, 0.0); p.rank()]
    } else {
        let ln_u = u.ln();
        p.dampings().iter().map(|v| (v * ln_u).exp()).collect()
    };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0f64;
    for l in 0..=n {
        let lc = Complex64::new(l as f64, 0.0);
        let q_lw = (lc * p.w() * ln_q).exp();
        let mut den = one;
        for (j, (wj, uv)) in p.weights().iter().zip(&u_pow_v).enumerate() {
            let factor = one - (lc * wj * ln_q).exp() * uv;
            if factor.norm() < POLE_THRESHOLD {
                return Err(Error::Pole { l, axis: j });
            }
            den *= factor;
        }
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let term = Complex64::new(sign * binomial(n, l) as f64, 0.0) * q_lw / den;
        sum += term;
        mass += term.norm();
    }
    let mut one_minus_q_pow = one;
    for _ in 0..n {
        one_minus_q_pow *= one - q;
    }
    let scale = p.one_minus_u_pow_rank() / one_minus_q_pow;
    Ok((scale * sum, scale.norm() * mass))
}

/// Changhee q-Euler number H_{n,q}(u^{-1} | w_1; v_1): rank 1, shift w = 0.
pub fn h_single_closed(n: u32, p: &QParams) -> Result<Complex64> {
    if p.rank() != 1 {
        return Err(Error::InvalidParameter {
            name: "weights",
            reason: format!("h_single_closed needs rank 1, got {}", p.rank()),
        });
    }
    if p.w() != Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidParameter {
            name: "w",
            reason: "h_single_closed is the w = 0 number; use h_poly_closed".into(),
        });
    }
    Ok(closed_form_core(n, p)?.0)
}

/// Changhee q-Euler polynomial H_{n,q}(u^{-1}, w | w_1; v_1): rank 1.
pub fn h_poly_closed(n: u32, p: &QParams) -> Result<Complex64> {
    if p.rank() != 1 {
        return Err(Error::InvalidParameter {
            name: "weights",
            reason: format!("h_poly_closed needs rank 1, got {}", p.rank()),
        });
    }
    Ok(closed_form_core(n, p)?.0)
}

/// Multiple Changhee q-Euler polynomial
/// H_{n,q}^(r)(u^{-1}, w | w_1..w_r; v_1..v_r).
pub fn h_multiple_closed(n: u32, p: &QParams) -> Result<Complex64> {
    Ok(closed_form_core(n, p)?.0)
}

/// Closed-form value together with its absolute term mass, the scale at
/// which f64 roundoff of the cancelling binomial sum lives. Cross-route
/// comparisons should measure disagreement against this mass.
pub fn h_multiple_closed_with_mass(n: u32, p: &QParams) -> Result<(Complex64, f64)> {
    closed_form_core(n, p)
}

/// Direct summation of (1-u)^r sum u^{sum n_i v_i} [w + sum n_i w_i]_q^n
/// with a certified geometric tail bound at or below `tol`.
pub fn h_series_oracle(n: u32, p: &QParams, tol: f64) -> Result<Evaluation> {
    h_series_oracle_with_limit(n, p, tol, DEFAULT_MAX_TERMS)
}

pub fn h_series_oracle_with_limit(n: u32, p: &QParams, tol: f64, max_terms: u64) -> Result<Evaluation> {
    let prefactor = p.one_minus_u_pow_rank();
    let scale = prefactor.norm().max(f64::MIN_POSITIVE);
    let geo = LatticeGeometry::new(p)?;
    let plan = geo.plan(&Growth::IntPower(n), tol / scale, max_terms)?;
    let mut acc = CompensatedComplex::new();
    geo.sum(&plan.cutoffs, |bracket, damp| {
        let mut power = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            power *= bracket;
        }
        acc.add(damp * power);
    });
    Ok(Evaluation {
        value: prefactor * acc.value(),
        tail_bound: plan.tail * scale,
        terms_used: plan.terms,
        truncation: plan.cutoffs,
    })
}

/// Pointwise value of the generating function
/// F(t) = (1-u)^r sum u^{sum n_i v_i} exp([w + sum n_i w_i]_q t)
/// with a certified tail bound. The brackets are uniformly bounded, so the
/// damped series converges for every finite t.
pub fn f_eval(t: Complex64, p: &QParams, tol: f64) -> Result<Evaluation> {
    f_eval_with_limit(t, p, tol, DEFAULT_MAX_TERMS)
}

pub fn f_eval_with_limit(t: Complex64, p: &QParams, tol: f64, max_terms: u64) -> Result<Evaluation> {
    if !crate::qcore::finite(t) {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: "must have finite real and imaginary parts".into(),
        });
    }
    let prefactor = p.one_minus_u_pow_rank();
    let scale = prefactor.norm().max(f64::MIN_POSITIVE);
    let geo = LatticeGeometry::new(p)?;
    let plan = geo.plan(&Growth::Exp(t), tol / scale, max_terms)?;
    let mut acc = CompensatedComplex::new();
    geo.sum(&plan.cutoffs, |bracket, damp| {
        acc.add(damp * (bracket * t).exp());
    });
    Ok(Evaluation {
        value: prefactor * acc.value(),
        tail_bound: plan.tail * scale,
        terms_used: plan.terms,
        truncation: plan.cutoffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::q_bracket;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn single_number_degree_zero() {
        // n = 0, v_1 = 1: (1-u)/(1-u) = 1.
        let p = QParams::single_real(0.5, 0.3, 0.0, 1.0, 1.0).unwrap();
        assert!(close(h_single_closed(0, &p).unwrap(), c(1.0, 0.0), 1e-15));
        // general v_1: (1-u)/(1-u^{v_1}).
        let p = QParams::single_real(0.5, 0.3, 0.0, 1.0, 2.0).unwrap();
        let expect = (1.0 - 0.3) / (1.0 - 0.09);
        assert!(close(h_single_closed(0, &p).unwrap(), c(expect, 0.0), 1e-15));
    }

    #[test]
    fn single_number_worked_value() {
        // q = 1/2, u = 1/3, w_1 = 1, v_1 = 1, n = 1: exactly 2/5.
        let p = QParams::single_real(0.5, 1.0 / 3.0, 0.0, 1.0, 1.0).unwrap();
        assert!(close(h_single_closed(1, &p).unwrap(), c(0.4, 0.0), 1e-15));
    }

    #[test]
    fn single_number_vs_oracle() {
        let p = QParams::single_real(0.4, 0.2, 0.0, 2.0, 1.0).unwrap();
        let closed = h_single_closed(3, &p).unwrap();
        let oracle = h_series_oracle(3, &p, 1e-12).unwrap();
        assert!(oracle.tail_bound <= 1e-12);
        assert!(close(closed, oracle.value, 1e-11));
    }

    #[test]
    fn single_rejects_wrong_shape() {
        let p = QParams::single_real(0.5, 0.3, 1.0, 1.0, 1.0).unwrap();
        assert!(h_single_closed(1, &p).is_err());
        let p2 = QParams::new(
            c(0.5, 0.0),
            c(0.3, 0.0),
            c(0.0, 0.0),
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        assert!(h_single_closed(1, &p2).is_err());
        assert!(h_poly_closed(1, &p2).is_err());
    }

    #[test]
    fn poly_at_zero_shift_is_the_number() {
        let p = QParams::single_real(0.5, 0.25, 0.0, 1.5, 2.0).unwrap();
        for n in 0..=8 {
            assert_eq!(h_poly_closed(n, &p).unwrap(), h_single_closed(n, &p).unwrap());
        }
    }

    #[test]
    fn poly_degree_zero() {
        let p = QParams::single_real(0.5, 0.25, 1.0, 1.0, 2.0).unwrap();
        let expect = (1.0 - 0.25) / (1.0 - 0.0625);
        assert!(close(h_poly_closed(0, &p).unwrap(), c(expect, 0.0), 1e-15));
    }

    #[test]
    fn poly_vs_direct_series() {
        // n = 2, q = 1/2, u = 1/4, w = 1, w_1 = 1, v_1 = 2 against the
        // hand-rolled damped sum (1-u) sum_l u^{2l} [1+l]_q^2.
        let p = QParams::single_real(0.5, 0.25, 1.0, 1.0, 2.0).unwrap();
        let closed = h_poly_closed(2, &p).unwrap();
        let mut direct = c(0.0, 0.0);
        for l in 0..400 {
            let damp = 0.25f64.powi(2 * l);
            let b = q_bracket(c(1.0 + l as f64, 0.0), c(0.5, 0.0)).unwrap();
            direct += c(0.75 * damp, 0.0) * b * b;
        }
        assert!(close(closed, direct, 1e-11));
    }

    #[test]
    fn multiple_reduces_to_poly() {
        let p = QParams::single_real(0.45, 0.2, 0.7, 1.3, 0.8).unwrap();
        for n in 0..=12 {
            assert_eq!(h_multiple_closed(n, &p).unwrap(), h_poly_closed(n, &p).unwrap());
        }
    }

    #[test]
    fn multiple_degree_zero() {
        let p = QParams::new(
            c(0.5, 0.0),
            c(0.3, 0.0),
            c(0.2, 0.0),
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(1.0, 0.0), c(3.0, 0.0)],
        )
        .unwrap();
        let u = 0.3f64;
        let expect = (1.0 - u) * (1.0 - u) / ((1.0 - u) * (1.0 - u.powi(3)));
        assert!(close(h_multiple_closed(0, &p).unwrap(), c(expect, 0.0), 1e-14));
    }

    #[test]
    fn multiple_permutation_near_invariant() {
        let pa = QParams::new(
            c(0.5, 0.0),
            c(0.3, 0.0),
            c(0.4, 0.0),
            vec![c(1.0, 0.0), c(2.5, 0.0)],
            vec![c(2.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let pb = QParams::new(
            c(0.5, 0.0),
            c(0.3, 0.0),
            c(0.4, 0.0),
            vec![c(2.5, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(2.0, 0.0)],
        )
        .unwrap();
        for n in 0..=6 {
            let a = h_multiple_closed(n, &pa).unwrap();
            let b = h_multiple_closed(n, &pb).unwrap();
            assert!(close(a, b, 1e-13 * a.norm().max(1.0)));
        }
    }

    #[test]
    fn pole_is_detected() {
        // Pick w_1 = ln(1/u)/ln(q) so that q^{w_1} u = 1 exactly at l = 1.
        let q = c(0.0, 0.5);
        let u = c(0.5, 0.0) * c((-1.0f64).cos(), (-1.0f64).sin());
        let w1 = -u.ln() / q.ln();
        assert!(w1.re > 0.0, "constructed weight must stay admissible");
        let p = QParams::single(q, u, c(0.0, 0.0), w1, c(1.0, 0.0)).unwrap();
        match h_single_closed(2, &p) {
            Err(Error::Pole { l: 1, axis: 0 }) => {}
            other => panic!("expected pole at l=1, got {other:?}"),
        }
    }

    #[test]
    fn oracle_geometric_identity() {
        // n = 0, r = 1, v_1 = 1: (1-u) sum u^l = 1.
        let p = QParams::single_real(0.5, 0.6, 0.0, 1.0, 1.0).unwrap();
        let eval = h_series_oracle(0, &p, 1e-13).unwrap();
        assert!(close(eval.value, c(1.0, 0.0), 1e-12));
        assert!(eval.tail_bound <= 1e-13);
        assert_eq!(eval.terms_used, eval.truncation.iter().map(|l| l + 1).product::<u64>());
    }

    #[test]
    fn oracle_matches_worked_value() {
        let p = QParams::single_real(0.5, 1.0 / 3.0, 0.0, 1.0, 1.0).unwrap();
        let eval = h_series_oracle(1, &p, 1e-12).unwrap();
        assert!(close(eval.value, c(0.4, 0.0), 1e-11));
    }

    #[test]
    fn oracle_matches_closed_rank_two() {
        let p = QParams::new(
            c(0.3, 0.0),
            c(0.2, 0.0),
            c(1.0, 0.0),
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let closed = h_multiple_closed(1, &p).unwrap();
        let eval = h_series_oracle(1, &p, 1e-12).unwrap();
        assert!(close(closed, eval.value, 1e-11));
    }

    #[test]
    fn oracle_budget_error() {
        let p = QParams::single_real(0.5, 0.8, 0.0, 1.0, 0.3).unwrap();
        assert!(matches!(
            h_series_oracle_with_limit(2, &p, 1e-12, 50),
            Err(Error::ToleranceUnreachable { .. })
        ));
    }

    #[test]
    fn f_eval_at_zero() {
        let p = QParams::single_real(0.5, 0.3, 0.0, 1.0, 1.0).unwrap();
        let eval = f_eval(c(0.0, 0.0), &p, 1e-13).unwrap();
        assert!(close(eval.value, c(1.0, 0.0), 1e-12));

        let p2 = QParams::new(
            c(0.5, 0.0),
            c(0.3, 0.0),
            c(0.2, 0.0),
            vec![c(1.0, 0.0), c(1.5, 0.0)],
            vec![c(2.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let eval2 = f_eval(c(0.0, 0.0), &p2, 1e-13).unwrap();
        let u = 0.3f64;
        let expect = (1.0 - u) * (1.0 - u) / ((1.0 - u * u) * (1.0 - u));
        assert!(close(eval2.value, c(expect, 0.0), 1e-12));
    }

    #[test]
    fn f_eval_derivative_matches_first_coefficient() {
        let p = QParams::new(
            c(0.5, 0.0),
            c(0.3, 0.0),
            c(0.6, 0.0),
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let h = 1e-5;
        let fp = f_eval(c(h, 0.0), &p, 1e-13).unwrap().value;
        let fm = f_eval(c(-h, 0.0), &p, 1e-13).unwrap().value;
        let derivative = (fp - fm) / c(2.0 * h, 0.0);
        let h1 = h_multiple_closed(1, &p).unwrap();
        assert!(close(derivative, h1, 1e-8));
    }

    #[test]
    fn argument_shift_law() {
        // H_n(w) = sum_k C(n,k) [w]_q^{n-k} q^{wk} H_k.
        let q = c(0.5, 0.0);
        let w = c(0.8, 0.0);
        let p0 = QParams::single(q, c(0.25, 0.0), c(0.0, 0.0), c(1.2, 0.0), c(1.0, 0.0)).unwrap();
        let pw = p0.with_shift(w).unwrap();
        let bracket = q_bracket(w, q).unwrap();
        let qw = (w * q.ln()).exp();
        for n in 0..=6u32 {
            let lhs = h_poly_closed(n, &pw).unwrap();
            let mut rhs = c(0.0, 0.0);
            for k in 0..=n {
                let mut bpow = c(1.0, 0.0);
                for _ in 0..(n - k) {
                    bpow *= bracket;
                }
                let mut qwk = c(1.0, 0.0);
                for _ in 0..k {
                    qwk *= qw;
                }
                rhs += c(binomial(n, k) as f64, 0.0) * bpow * qwk * h_single_closed(k, &p0).unwrap();
            }
            assert!(close(lhs, rhs, 1e-10 * lhs.norm().max(1.0)));
        }
    }

    #[test]
    fn routes_carry_error_bounds() {
        let p = QParams::single_real(0.5, 0.3, 0.0, 1.0, 1.0).unwrap();
        let closed = ChangheeNumber::closed(2, &p).unwrap();
        assert_eq!(closed.error_bound, 0.0);
        assert_eq!(closed.route, Route::ClosedForm);
        let oracle = ChangheeNumber::oracle(2, &p, 1e-12).unwrap();
        assert!(oracle.error_bound > 0.0 && oracle.error_bound <= 1e-12);
        let gf = ChangheeNumber::gf(2, &p).unwrap();
        assert!(close(closed.value, oracle.value, 1e-11));
        assert!(close(closed.value, gf.value, 1e-11));
    }
}
