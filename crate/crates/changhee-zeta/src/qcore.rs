//! Foundational q-arithmetic: q-brackets, principal-branch complex powers,
//! exact binomial coefficients, and the validated parameter bundle shared by
//! every evaluator.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this distance from q = 1, `q_bracket` switches to its analytic
/// limit [x]_q -> x to avoid catastrophic cancellation in (1-q^x)/(1-q).
pub const Q_LIMIT_THRESHOLD: f64 = 1e-12;

/// Largest `n` for which `factorial(n)` fits in u128.
pub const FACTORIAL_MAX: u32 = 34;

pub(crate) fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn require_finite(name: &'static str, z: Complex64) -> Result<()> {
    if finite(z) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must have finite real and imaginary parts".into(),
        })
    }
}

/// Principal-branch complex power q^x = exp(x Log q), Log q with imaginary
/// part in (-pi, pi].
pub fn q_power(x: Complex64, q: Complex64) -> Result<Complex64> {
    require_finite("x", x)?;
    require_finite("q", q)?;
    if q == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidParameter {
            name: "q",
            reason: "q = 0 has no principal logarithm".into(),
        });
    }
    if x == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok((x * q.ln()).exp())
}

/// q-bracket [x]_q = (1 - q^x)/(1 - q), with the limit branch [x]_q = x
/// taken when |q - 1| < `Q_LIMIT_THRESHOLD`.
///
/// At q = 0 the bracket degenerates: [0]_0 = 0 and [x]_0 = 1 for Re(x) > 0;
/// other exponents have no finite value and are rejected.
pub fn q_bracket(x: Complex64, q: Complex64) -> Result<Complex64> {
    require_finite("x", x)?;
    require_finite("q", q)?;
    if x == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if q == Complex64::new(0.0, 0.0) {
        if x.re > 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        return Err(Error::InvalidParameter {
            name: "q",
            reason: "q = 0 with Re(x) <= 0 has no finite q-bracket".into(),
        });
    }
    let one = Complex64::new(1.0, 0.0);
    if (q - one).norm() < Q_LIMIT_THRESHOLD {
        return Ok(x);
    }
    Ok((one - q_power(x, q)?) / (one - q))
}

/// Exact binomial coefficient C(n, k); returns 0 when k > n.
///
/// The k > n convention is what makes the closed-form binomial sums finite.
/// Exact through n = 131; panics on u128 overflow beyond that.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) because acc = C(n, i).
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial coefficient overflows u128")
            / (i as u128 + 1);
    }
    acc
}

/// Exact factorial as u128; panics for n > `FACTORIAL_MAX`.
pub fn factorial(n: u32) -> u128 {
    assert!(n <= FACTORIAL_MAX, "factorial({n}) overflows u128");
    (1..=n as u128).product()
}

/// Validated parameter bundle for the Changhee q-Euler / q-zeta evaluators.
///
/// Carries the base q (|q| < 1, q != 0), the damping base u (|u| < 1), the
/// shift w (Re(w) >= 0; the zeta evaluators additionally require Re(w) > 0),
/// and rank-r weight/damping exponent vectors with positive real parts.
#[derive(Debug, Clone, PartialEq)]
pub struct QParams {
    q: Complex64,
    u: Complex64,
    w: Complex64,
    weights: Vec<Complex64>,
    dampings: Vec<Complex64>,
}

impl QParams {
    pub fn new(
        q: Complex64,
        u: Complex64,
        w: Complex64,
        weights: Vec<Complex64>,
        dampings: Vec<Complex64>,
    ) -> Result<Self> {
        require_finite("q", q)?;
        require_finite("u", u)?;
        require_finite("w", w)?;
        if q == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: "q must be nonzero".into(),
            });
        }
        if q.norm() >= 1.0 {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: format!("|q| = {} must be < 1", q.norm()),
            });
        }
        if u.norm() >= 1.0 {
            return Err(Error::InvalidParameter {
                name: "u",
                reason: format!("|u| = {} must be < 1", u.norm()),
            });
        }
        if w.re < 0.0 {
            return Err(Error::InvalidParameter {
                name: "w",
                reason: format!("Re(w) = {} must be >= 0", w.re),
            });
        }
        if weights.is_empty() {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "at least one weight is required".into(),
            });
        }
        if weights.len() != dampings.len() {
            return Err(Error::InvalidParameter {
                name: "dampings",
                reason: format!(
                    "rank mismatch: {} weights vs {} dampings",
                    weights.len(),
                    dampings.len()
                ),
            });
        }
        for (i, wi) in weights.iter().enumerate() {
            require_finite("weights", *wi)?;
            if wi.re <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "weights",
                    reason: format!("Re(w_{}) = {} must be > 0", i + 1, wi.re),
                });
            }
        }
        for (i, vi) in dampings.iter().enumerate() {
            require_finite("dampings", *vi)?;
            if vi.re <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "dampings",
                    reason: format!("Re(v_{}) = {} must be > 0", i + 1, vi.re),
                });
            }
        }
        Ok(Self {
            q,
            u,
            w,
            weights,
            dampings,
        })
    }

    /// Rank-1 bundle.
    pub fn single(q: Complex64, u: Complex64, w: Complex64, w1: Complex64, v1: Complex64) -> Result<Self> {
        Self::new(q, u, w, vec![w1], vec![v1])
    }

    /// Rank-1 bundle with real parameters.
    pub fn single_real(q: f64, u: f64, w: f64, w1: f64, v1: f64) -> Result<Self> {
        Self::single(
            Complex64::new(q, 0.0),
            Complex64::new(u, 0.0),
            Complex64::new(w, 0.0),
            Complex64::new(w1, 0.0),
            Complex64::new(v1, 0.0),
        )
    }

    /// Same bundle with a different shift w.
    pub fn with_shift(&self, w: Complex64) -> Result<Self> {
        Self::new(self.q, self.u, w, self.weights.clone(), self.dampings.clone())
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn u(&self) -> Complex64 {
        self.u
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn dampings(&self) -> &[Complex64] {
        &self.dampings
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    /// (1 - u)^rank, the prefactor of every generating function here.
    pub fn one_minus_u_pow_rank(&self) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        let base = Complex64::new(1.0, 0.0) - self.u;
        for _ in 0..self.rank() {
            acc *= base;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bracket_at_zero_exponent() {
        assert_eq!(q_bracket(c(0.0, 0.0), c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn bracket_integer_exponent() {
        // [2]_q = 1 + q
        let b = q_bracket(c(2.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((b - c(1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn bracket_limit_branch() {
        let b = q_bracket(c(3.7, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(b, c(3.7, 0.0));
        let b = q_bracket(c(3.7, 0.0), c(1.0 - 1e-13, 0.0)).unwrap();
        assert_eq!(b, c(3.7, 0.0));
    }

    #[test]
    fn bracket_q_zero() {
        assert_eq!(q_bracket(c(2.0, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!(q_bracket(c(-1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn power_examples() {
        let p = q_power(c(2.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((p - c(0.25, 0.0)).norm() < 1e-16);
        assert_eq!(q_power(c(0.0, 0.0), c(0.3, 0.7)).unwrap(), c(1.0, 0.0));
        let half = q_power(c(0.5, 0.0), c(0.25, 0.0)).unwrap();
        assert!((half - c(0.5, 0.0)).norm() < 1e-15);
        assert!(q_power(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn principal_branch() {
        // Log(-1) = i*pi, so (-0.5)^0.5 must sit in the upper half plane.
        let p = q_power(c(0.5, 0.0), c(-0.25, 0.0)).unwrap();
        assert!(p.im > 0.0);
        assert!((p.norm() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(4, 7), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn pascal_rule_through_60() {
        for n in 1..=60u32 {
            for k in 1..=n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(5), 120);
        assert_eq!(factorial(20), 2432902008176640000);
    }

    #[test]
    fn params_validation() {
        assert!(QParams::single_real(0.5, 0.3, 0.0, 1.0, 1.0).is_ok());
        assert!(QParams::single_real(0.0, 0.3, 0.0, 1.0, 1.0).is_err());
        assert!(QParams::single_real(1.1, 0.3, 0.0, 1.0, 1.0).is_err());
        assert!(QParams::single_real(0.5, 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(QParams::single_real(0.5, 0.3, -0.1, 1.0, 1.0).is_err());
        assert!(QParams::single_real(0.5, 0.3, 0.0, 0.0, 1.0).is_err());
        assert!(QParams::single_real(0.5, 0.3, 0.0, 1.0, -2.0).is_err());
        assert!(QParams::new(
            c(0.5, 0.0),
            c(0.3, 0.0),
            c(1.0, 0.0),
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(1.0, 0.0)],
        )
        .is_err());
        assert!(QParams::single(c(f64::NAN, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).is_err());
    }

    proptest! {
        // q_bracket(x,q)*(1-q) + q^x = 1
        #[test]
        fn bracket_power_identity(
            xr in -3.0f64..3.0, xi in -2.0f64..2.0,
            qr in -0.9f64..0.9, qi in -0.9f64..0.9,
        ) {
            let q = c(qr, qi);
            prop_assume!(q.norm() > 1e-3 && q.norm() < 0.95);
            let x = c(xr, xi);
            let power = q_power(x, q).unwrap();
            let lhs = q_bracket(x, q).unwrap() * (c(1.0, 0.0) - q) + power;
            let scale = power.norm().max(1.0);
            prop_assert!((lhs - c(1.0, 0.0)).norm() < 1e-13 * scale);
        }

        // [x+y]_q = [x]_q + q^x [y]_q
        #[test]
        fn bracket_addition_law(
            xr in 0.0f64..3.0, yr in 0.0f64..3.0,
            xi in -1.0f64..1.0, yi in -1.0f64..1.0,
            qr in 0.05f64..0.9,
        ) {
            let q = c(qr, 0.0);
            let x = c(xr, xi);
            let y = c(yr, yi);
            let lhs = q_bracket(x + y, q).unwrap();
            let rhs = q_bracket(x, q).unwrap() + q_power(x, q).unwrap() * q_bracket(y, q).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
