//! Truncated formal power series arithmetic, generic over complex and
//! exact-rational scalars, plus coefficient extraction for the generating
//! functions: Frobenius-Euler, Euler-Barnes, Barnes multiple Bernoulli, and
//! the multiple Changhee q-Euler expansion.

use num_complex::Complex64;
use num_traits::{One, Zero};
use std::ops::{Div, Neg, Sub};

use crate::error::{Error, Result};
use crate::lattice::{self, Growth};
use crate::qcore::QParams;

/// Scalar types a [`TruncatedSeries`] can carry.
pub trait SeriesScalar:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Div<Output = Self>
{
    fn from_u64(n: u64) -> Self;
}

impl SeriesScalar for Complex64 {
    fn from_u64(n: u64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl SeriesScalar for num_rational::BigRational {
    fn from_u64(n: u64) -> Self {
        num_rational::BigRational::from_integer(num_bigint::BigInt::from(n))
    }
}

/// Coefficients a_0..a_N of a formal series truncated at degree N.
/// Arithmetic never reads (or produces) anything beyond degree N.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: SeriesScalar> TruncatedSeries<T> {
    /// Wraps an explicit coefficient list; `coeffs[k]` is the t^k coefficient.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        Self { coeffs }
    }

    /// The constant series c + 0 t + ... + 0 t^order.
    pub fn constant(value: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// e^{x t} truncated at `order`: coefficients x^k / k!.
    pub fn exp_of(x: &T, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(T::one());
        for k in 1..=order {
            let prev = coeffs[k - 1].clone();
            coeffs.push(prev * x.clone() / T::from_u64(k as u64));
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    fn check_orders(&self, rhs: &Self) -> Result<()> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: rhs.order(),
            });
        }
        Ok(())
    }

    /// Degree-wise Cauchy product truncated at the common order.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_orders(rhs)?;
        let n = self.order();
        let mut coeffs = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(Self { coeffs })
    }

    /// Series quotient: the unique g with g * den = self through the
    /// truncation order. Requires a nonzero constant term in `den`.
    pub fn div(&self, den: &Self) -> Result<Self> {
        self.check_orders(den)?;
        if den.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let lead = den.coeffs[0].clone();
        let mut coeffs = vec![T::zero(); n + 1];
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = acc - den.coeffs[j].clone() * coeffs[k - j].clone();
            }
            coeffs[k] = acc / lead.clone();
        }
        Ok(Self { coeffs })
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::constant(T::one(), self.order());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

/// n! * c_n for n = 0..n_max, turning series coefficients into the
/// conventionally normalized polynomial/number sequences.
pub fn scaled_coeffs<T: SeriesScalar>(series: &TruncatedSeries<T>, n_max: usize) -> Vec<T> {
    assert!(n_max <= series.order(), "series truncated below n_max");
    let mut out = Vec::with_capacity(n_max + 1);
    let mut fact = T::one();
    for n in 0..=n_max {
        if n > 0 {
            fact = fact * T::from_u64(n as u64);
        }
        out.push(series.coeff(n).clone() * fact.clone());
    }
    out
}

/// Float coefficient extraction stays within the range where n! converts to
/// f64 exactly; larger indices belong to the rational path.
pub const FLOAT_COEFF_MAX: usize = 20;

fn check_float_range(n_max: usize) -> Result<()> {
    if n_max > FLOAT_COEFF_MAX {
        return Err(Error::FactorialRange {
            n: n_max,
            max: FLOAT_COEFF_MAX,
        });
    }
    Ok(())
}

/// ((1-u)/(e^t-u))^r e^{xt} truncated at `order`.
pub fn frobenius_euler_series<T: SeriesScalar>(
    order: usize,
    u: &T,
    x: &T,
    r: u32,
) -> Result<TruncatedSeries<T>> {
    if (T::one() - u.clone()).is_zero() {
        return Err(Error::InvalidParameter {
            name: "u",
            reason: "u = 1 makes the generating function singular".into(),
        });
    }
    let mut den_factor = TruncatedSeries::exp_of(&T::one(), order);
    den_factor.coeffs[0] = den_factor.coeffs[0].clone() - u.clone();
    let den = den_factor.pow(r)?;
    let mut scale = T::one();
    for _ in 0..r {
        scale = scale * (T::one() - u.clone());
    }
    let num = TruncatedSeries::exp_of(x, order).scale(&scale);
    num.div(&den)
}

/// (1-u)^r e^{wt} / prod_j (e^{a_j t} - u) truncated at `order`.
pub fn euler_barnes_series<T: SeriesScalar>(
    order: usize,
    u: &T,
    w: &T,
    a: &[T],
) -> Result<TruncatedSeries<T>> {
    if (T::one() - u.clone()).is_zero() {
        return Err(Error::InvalidParameter {
            name: "u",
            reason: "u = 1 makes the generating function singular".into(),
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter {
            name: "a",
            reason: "at least one parameter a_j is required".into(),
        });
    }
    let mut den = TruncatedSeries::constant(T::one(), order);
    let mut scale = T::one();
    for (j, aj) in a.iter().enumerate() {
        if aj.is_zero() {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: format!("a_{} must be nonzero", j + 1),
            });
        }
        let mut factor = TruncatedSeries::exp_of(aj, order);
        factor.coeffs[0] = factor.coeffs[0].clone() - u.clone();
        den = den.mul(&factor)?;
        scale = scale * (T::one() - u.clone());
    }
    let num = TruncatedSeries::exp_of(w, order).scale(&scale);
    num.div(&den)
}

/// t^r e^{xt} / prod_j (e^{a_j t} - 1) truncated at `order`.
///
/// Each factor e^{a_j t} - 1 = a_j t g_j(t) with g_j(0) = 1, so the t^r is
/// cancelled symbolically and the value is e^{xt} / (prod a_j * prod g_j);
/// no zero constant term is ever divided by.
pub fn barnes_bernoulli_series<T: SeriesScalar>(
    order: usize,
    x: &T,
    a: &[T],
) -> Result<TruncatedSeries<T>> {
    if a.is_empty() {
        return Err(Error::InvalidParameter {
            name: "a",
            reason: "at least one parameter a_j is required".into(),
        });
    }
    let mut den = TruncatedSeries::constant(T::one(), order);
    let mut scale = T::one();
    for (j, aj) in a.iter().enumerate() {
        if aj.is_zero() {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: format!("a_{} must be nonzero", j + 1),
            });
        }
        // g_j(t) = (e^{a_j t} - 1)/(a_j t): coefficients a_j^k / (k+1)!.
        let mut g = Vec::with_capacity(order + 1);
        g.push(T::one());
        for k in 1..=order {
            let prev = g[k - 1].clone();
            g.push(prev * aj.clone() / T::from_u64(k as u64 + 1));
        }
        den = den.mul(&TruncatedSeries::new(g))?;
        scale = scale * aj.clone();
    }
    let num = TruncatedSeries::exp_of(x, order).scale(&(T::one() / scale));
    num.div(&den)
}

/// Frobenius-Euler polynomials H_n^(r)(u, x) for n = 0..n_max.
pub fn gf_frobenius_euler(n_max: usize, u: Complex64, x: Complex64, r: u32) -> Result<Vec<Complex64>> {
    check_float_range(n_max)?;
    let series = frobenius_euler_series(n_max, &u, &x, r)?;
    Ok(scaled_coeffs(&series, n_max))
}

/// Euler-Barnes polynomials H_n^(r)(w, u | a_1..a_r) for n = 0..n_max.
pub fn gf_euler_barnes(n_max: usize, u: Complex64, w: Complex64, a: &[Complex64]) -> Result<Vec<Complex64>> {
    check_float_range(n_max)?;
    let series = euler_barnes_series(n_max, &u, &w, a)?;
    Ok(scaled_coeffs(&series, n_max))
}

/// Barnes multiple Bernoulli polynomials B_n(x, r | a_1..a_r) for n = 0..n_max.
pub fn gf_barnes_bernoulli(n_max: usize, x: Complex64, a: &[Complex64]) -> Result<Vec<Complex64>> {
    check_float_range(n_max)?;
    let series = barnes_bernoulli_series(n_max, &x, a)?;
    Ok(scaled_coeffs(&series, n_max))
}

/// Certified tail target for the truncated damping sums in
/// [`gf_changhee_coeffs`].
pub const GF_CHANGHEE_TAIL: f64 = 1e-14;

/// Multiple Changhee q-Euler polynomials H_{n,q}^(r) for n = 0..n_max, read
/// off the rank-r lattice expansion of the generating function:
/// (1-u)^r sum over n_1..n_r of u^{sum n_i v_i} [w + sum n_i w_i]_q^n.
///
/// `trunc` overrides the per-axis cutoff of the damping sums; `None` selects
/// cutoffs from the certified geometric tail bound at `GF_CHANGHEE_TAIL`.
pub fn gf_changhee_coeffs(n_max: usize, p: &QParams, trunc: Option<u64>) -> Result<Vec<Complex64>> {
    let geo = lattice::LatticeGeometry::new(p)?;
    let growth = Growth::IntPower(n_max as u32);
    let cutoffs = match trunc {
        Some(l) => {
            let cutoffs = vec![l; p.rank()];
            lattice::check_budget(&cutoffs, lattice::DEFAULT_MAX_TERMS)?;
            cutoffs
        }
        None => {
            let scale = p.one_minus_u_pow_rank().norm().max(f64::MIN_POSITIVE);
            let plan = geo.plan(&growth, GF_CHANGHEE_TAIL / scale, lattice::DEFAULT_MAX_TERMS)?;
            plan.cutoffs
        }
    };
    let mut acc = vec![lattice::CompensatedComplex::new(); n_max + 1];
    geo.sum(&cutoffs, |bracket, damp| {
        let mut power = Complex64::new(1.0, 0.0);
        for slot in acc.iter_mut() {
            slot.add(damp * power);
            power *= bracket;
        }
    });
    let prefactor = p.one_minus_u_pow_rank();
    Ok(acc.into_iter().map(|s| prefactor * s.value()).collect())
}
