//! Exact arbitrary-precision rational oracle: re-evaluates the closed form
//! and the generating-function coefficient with no rounding at all, for
//! rational q, u and integer exponent parameters (the subdomain where every
//! power is itself rational).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qcore::QParams;
use num_complex::Complex64;

pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact binomial coefficient as a BigInt; 0 when k > n.
pub fn binomial_big(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn rat_pow(base: &Rational, mut e: u64) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

/// Rational parameter bundle for the exact oracle: 0 < q < 1, 0 < u < 1,
/// nonnegative integer shift, positive integer weights and dampings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactParams {
    q: Rational,
    u: Rational,
    w: u64,
    weights: Vec<u64>,
    dampings: Vec<u64>,
}

impl ExactParams {
    pub fn new(q: Rational, u: Rational, w: u64, weights: Vec<u64>, dampings: Vec<u64>) -> Result<Self> {
        let one = Rational::one();
        if !(q.is_positive() && q < one) {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: "exact mode needs 0 < q < 1".into(),
            });
        }
        if !(u.is_positive() && u < one) {
            return Err(Error::InvalidParameter {
                name: "u",
                reason: "exact mode needs 0 < u < 1".into(),
            });
        }
        if weights.is_empty() || weights.len() != dampings.len() {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "weights and dampings must be nonempty and of equal length".into(),
            });
        }
        if weights.iter().chain(&dampings).any(|&e| e == 0) {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "weights and dampings must be positive integers".into(),
            });
        }
        Ok(Self {
            q,
            u,
            w,
            weights,
            dampings,
        })
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    /// Float view of the same parameters, for drift comparisons.
    pub fn to_qparams(&self) -> QParams {
        let c = |r: &Rational| Complex64::new(to_f64(r), 0.0);
        QParams::new(
            c(&self.q),
            c(&self.u),
            Complex64::new(self.w as f64, 0.0),
            self.weights.iter().map(|&w| Complex64::new(w as f64, 0.0)).collect(),
            self.dampings.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect(),
        )
        .expect("validated exact parameters are a valid float bundle")
    }
}

/// Nearest f64 to an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn prefactor(p: &ExactParams, n: u32) -> Rational {
    let one = Rational::one();
    let one_minus_u = &one - &p.u;
    let one_minus_q = &one - &p.q;
    rat_pow(&one_minus_u, p.rank() as u64) / rat_pow(&one_minus_q, n as u64)
}

/// Exact value of the rank-r closed form
/// (1-u)^r/(1-q)^n sum_l C(n,l)(-1)^l q^{lw} / prod_j (1 - q^{l w_j} u^{v_j}).
pub fn exact_h_multiple(n: u32, p: &ExactParams) -> Result<Rational> {
    let one = Rational::one();
    let mut sum = Rational::zero();
    for l in 0..=n {
        let q_lw = rat_pow(&p.q, l as u64 * p.w);
        let mut den = Rational::one();
        for (j, (&wj, &vj)) in p.weights.iter().zip(&p.dampings).enumerate() {
            let factor = &one - rat_pow(&p.q, l as u64 * wj) * rat_pow(&p.u, vj);
            if factor.is_zero() {
                return Err(Error::ExactPole { l, axis: j });
            }
            den *= factor;
        }
        let mut term = Rational::from_integer(binomial_big(n, l)) * q_lw / den;
        if l % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    Ok(prefactor(p, n) * sum)
}

/// Closed geometric sum 1/(1 - ratio); the ratio 1 is an exact pole.
fn geometric_sum(ratio: Rational, l: u32, axis: usize) -> Result<Rational> {
    let den = Rational::one() - ratio;
    if den.is_zero() {
        return Err(Error::ExactPole { l, axis });
    }
    Ok(den.recip())
}

/// Independent route to the same number: expand [w + sum n_i w_i]_q^n by the
/// q-binomial theorem, which turns each lattice axis into a geometric series
/// u^{v_i n_i} q^{l w_i n_i} summed in closed form, axis by axis.
/// Must equal [`exact_h_multiple`] identically.
pub fn exact_gf_coeff(n: u32, p: &ExactParams) -> Result<Rational> {
    let mut acc = Rational::zero();
    for l in 0..=n {
        let mut lattice = Rational::from_integer(binomial_big(n, l)) * rat_pow(&p.q, l as u64 * p.w);
        for (j, (&wj, &vj)) in p.weights.iter().zip(&p.dampings).enumerate() {
            let ratio = rat_pow(&p.u, vj) * rat_pow(&p.q, l as u64 * wj);
            lattice *= geometric_sum(ratio, l, j)?;
        }
        if l % 2 == 1 {
            lattice = -lattice;
        }
        acc += lattice;
    }
    Ok(prefactor(p, n) * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::changhee::h_multiple_closed;

    #[test]
    fn worked_value_exact() {
        let p = ExactParams::new(rational(1, 2), rational(1, 3), 0, vec![1], vec![1]).unwrap();
        assert_eq!(exact_h_multiple(1, &p).unwrap(), rational(2, 5));
        assert_eq!(exact_gf_coeff(1, &p).unwrap(), rational(2, 5));
    }

    #[test]
    fn rank_two_constant_is_one() {
        let p = ExactParams::new(rational(2, 5), rational(1, 7), 0, vec![1, 2], vec![1, 1]).unwrap();
        assert_eq!(exact_h_multiple(0, &p).unwrap(), Rational::one());
    }

    #[test]
    fn routes_agree_identically() {
        let p = ExactParams::new(rational(2, 5), rational(1, 7), 0, vec![1, 2], vec![1, 1]).unwrap();
        for n in 0..=12 {
            assert_eq!(exact_h_multiple(n, &p).unwrap(), exact_gf_coeff(n, &p).unwrap());
        }
    }

    #[test]
    fn permutation_invariance_exact() {
        let pa = ExactParams::new(rational(1, 3), rational(2, 9), 1, vec![1, 3], vec![2, 1]).unwrap();
        let pb = ExactParams::new(rational(1, 3), rational(2, 9), 1, vec![3, 1], vec![1, 2]).unwrap();
        for n in 0..=8 {
            assert_eq!(exact_h_multiple(n, &pa).unwrap(), exact_h_multiple(n, &pb).unwrap());
        }
    }

    #[test]
    fn float_path_drift() {
        let p = ExactParams::new(rational(1, 2), rational(1, 3), 2, vec![1, 2], vec![1, 1]).unwrap();
        let qp = p.to_qparams();
        for n in 0..=8 {
            let exact = to_f64(&exact_h_multiple(n, &p).unwrap());
            let float = h_multiple_closed(n, &qp).unwrap();
            assert!(float.im.abs() < 1e-12 * exact.abs().max(1.0));
            assert!(
                (float.re - exact).abs() <= 1e-12 * exact.abs().max(1.0),
                "drift at n = {n}: float {} vs exact {}",
                float.re,
                exact
            );
        }
    }

    #[test]
    fn validation() {
        assert!(ExactParams::new(rational(3, 2), rational(1, 3), 0, vec![1], vec![1]).is_err());
        assert!(ExactParams::new(rational(1, 2), rational(-1, 3), 0, vec![1], vec![1]).is_err());
        assert!(ExactParams::new(rational(1, 2), rational(1, 3), 0, vec![], vec![]).is_err());
        assert!(ExactParams::new(rational(1, 2), rational(1, 3), 0, vec![1], vec![0]).is_err());
        assert!(ExactParams::new(rational(1, 2), rational(1, 3), 0, vec![1, 2], vec![1]).is_err());
    }

    #[test]
    fn binomials_match_the_float_table() {
        for n in 0..=20u32 {
            for k in 0..=n {
                assert_eq!(binomial_big(n, k), BigInt::from(crate::qcore::binomial(n, k)));
            }
        }
    }
}
