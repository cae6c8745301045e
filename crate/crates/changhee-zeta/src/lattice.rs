//! Internal engine for the rank-r damped lattice sums
//!
//! ```text
//! sum over (n_1..n_r) of  u^{sum_i n_i v_i} * K([w + sum_i n_i w_i]_q)
//! ```
//!
//! shared by the series oracle, the q-zeta evaluators, the generating
//! function point evaluation, and the coefficient sweep. Terms are swept in
//! lexicographic order of (n_1..n_r) with n_1 outermost, products updated
//! incrementally per axis, and accumulated with Neumaier compensation, so a
//! given (parameters, cutoffs) pair always reproduces the same bits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::QParams;

pub(crate) const DEFAULT_MAX_TERMS: u64 = crate::DEFAULT_MAX_TERMS;

/// Neumaier-compensated scalar accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator (independent Neumaier per component).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedComplex {
    re: Neumaier,
    im: Neumaier,
}

impl CompensatedComplex {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// How the kernel K grows with the bracket, which decides the tail constants.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Growth {
    /// K(b) = b^n for some n in 0..=`0`; covers a whole power sweep because
    /// the constants are monotone in n.
    IntPower(u32),
    /// K(b) = b^{-s} = exp(-s Log b).
    CPower(Complex64),
    /// K(b) = exp(b t).
    Exp(Complex64),
}

/// Per-axis cutoffs plus the certified bound on everything they drop.
#[derive(Debug, Clone)]
pub(crate) struct Plan {
    pub cutoffs: Vec<u64>,
    pub tail: f64,
    pub terms: u64,
}

/// Incremental products and magnitudes for one parameter bundle.
///
/// Writing x = w + sum n_i w_i, the per-term data are q^x (multiplicative
/// across axes with steps q^{w_i}) and u^{sum n_i v_i} (steps u^{v_i}).
/// Magnitudes: a = |q^w|, beta_i = |q^{w_i}|, g_i = |u^{v_i}|; every bracket
/// satisfies |[x]_q| <= (1 + a * prod beta_i^{n_i}) / |1-q|.
pub(crate) struct LatticeGeometry {
    q_w: Complex64,
    inv_one_minus_q: Complex64,
    step_q: Vec<Complex64>,
    step_u: Vec<Complex64>,
    a: f64,
    beta: Vec<f64>,
    g: Vec<f64>,
    inv_one_minus_q_mag: f64,
}

impl LatticeGeometry {
    pub(crate) fn new(p: &QParams) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        let ln_q = p.q().ln();
        let q_w = (p.w() * ln_q).exp();
        let u_is_zero = p.u() == Complex64::new(0.0, 0.0);
        let ln_u = if u_is_zero { Complex64::new(0.0, 0.0) } else { p.u().ln() };
        let mut step_q = Vec::with_capacity(p.rank());
        let mut step_u = Vec::with_capacity(p.rank());
        let mut beta = Vec::with_capacity(p.rank());
        let mut g = Vec::with_capacity(p.rank());
        for (i, (wi, vi)) in p.weights().iter().zip(p.dampings()).enumerate() {
            let sq = (wi * ln_q).exp();
            let su = if u_is_zero {
                Complex64::new(0.0, 0.0)
            } else {
                (vi * ln_u).exp()
            };
            let gi = su.norm();
            if gi >= 1.0 {
                return Err(Error::DivergentDamping { axis: i, ratio: gi });
            }
            step_q.push(sq);
            step_u.push(su);
            beta.push(sq.norm());
            g.push(gi);
        }
        Ok(Self {
            q_w,
            inv_one_minus_q: one / (one - p.q()),
            step_q,
            step_u,
            a: q_w.norm(),
            beta,
            g,
            inv_one_minus_q_mag: 1.0 / (one - p.q()).norm(),
        })
    }

    pub(crate) fn rank(&self) -> usize {
        self.step_q.len()
    }

    /// Uniform bracket magnitude bound over the whole lattice.
    pub(crate) fn bracket_upper(&self) -> f64 {
        (1.0 + self.a) * self.inv_one_minus_q_mag
    }

    /// Lower bound on Re [x]_q over the whole lattice:
    /// Re(1/(1-q)) - sup|q^x| / |1-q|, with sup|q^x| = a when every axis has
    /// |q^{w_i}| <= 1. `None` when no uniform supremum exists.
    pub(crate) fn bracket_real_lower(&self) -> Option<f64> {
        if self.beta.iter().all(|&b| b <= 1.0) {
            Some(self.inv_one_minus_q.re - self.a * self.inv_one_minus_q_mag)
        } else {
            None
        }
    }

    /// prod_i 1/(1 - g_i): bounds the full damping sum over the lattice.
    pub(crate) fn damping_sum_bound(&self) -> f64 {
        self.g.iter().map(|&g| 1.0 / (1.0 - g)).product()
    }

    /// Per-axis geometric ratios gamma_i and the uniform prefactor C such
    /// that every dropped term is bounded by C * prod gamma_i^{n_i}. For
    /// `CPower` the prefactor depends on the cutoffs (the bracket lower bound
    /// tightens as the dropped region moves out), hence the `cutoffs` input.
    fn tail_constants(&self, growth: &Growth, cutoffs: &[u64]) -> Result<(Vec<f64>, f64)> {
        let b_up = self.bracket_upper();
        match *growth {
            Growth::IntPower(n) => {
                let mut gamma = Vec::with_capacity(self.rank());
                for (i, (&gi, &bi)) in self.g.iter().zip(&self.beta).enumerate() {
                    let gm = gi * bi.max(1.0).powi(n as i32);
                    if gm >= 1.0 {
                        return Err(Error::DivergentDamping { axis: i, ratio: gm });
                    }
                    gamma.push(gm);
                }
                Ok((gamma, b_up.powi(n as i32).max(1.0)))
            }
            Growth::CPower(s) => {
                for (i, &bi) in self.beta.iter().enumerate() {
                    if bi >= 1.0 {
                        return Err(Error::InvalidParameter {
                            name: "weights",
                            reason: format!(
                                "|q^(w_{})| = {bi} >= 1: the zeta tail cannot be certified",
                                i + 1
                            ),
                        });
                    }
                }
                // sup |q^x| over the dropped region: some axis exceeds its
                // cutoff, the others only shrink the product further.
                let mut a_tail: f64 = 0.0;
                for (&bi, &li) in self.beta.iter().zip(cutoffs) {
                    a_tail = a_tail.max(self.a * bi.powi((li + 1).min(10_000) as i32));
                }
                let twist = (std::f64::consts::PI * s.im.abs()).exp();
                let lo = ((1.0 - a_tail) * self.inv_one_minus_q_mag).max(0.0);
                let hi_pow = b_up.powf(-s.re);
                let lo_pow = if s.re > 0.0 {
                    if lo <= 0.0 {
                        f64::INFINITY
                    } else {
                        lo.powf(-s.re)
                    }
                } else {
                    0.0
                };
                Ok((self.g.clone(), twist * hi_pow.max(lo_pow)))
            }
            Growth::Exp(t) => Ok((self.g.clone(), (b_up * t.norm()).exp())),
        }
    }

    /// Certified bound on the sum of all dropped terms, by the union of the
    /// r half-open tail slabs:
    ///     C * sum_i gamma_i^{L_i+1}/(1-gamma_i) * prod_{j != i} 1/(1-gamma_j).
    fn tail_bound(gamma: &[f64], c: f64, cutoffs: &[u64]) -> f64 {
        let mut total = 0.0;
        for i in 0..gamma.len() {
            let mut slab = c * gamma[i].powi((cutoffs[i] + 1).min(1_000_000) as i32) / (1.0 - gamma[i]);
            for (j, &gj) in gamma.iter().enumerate() {
                if j != i {
                    slab /= 1.0 - gj;
                }
            }
            total += slab;
        }
        total
    }

    /// Selects per-axis cutoffs whose certified tail is below `tol`.
    pub(crate) fn plan(&self, growth: &Growth, tol: f64, max_terms: u64) -> Result<Plan> {
        let r = self.rank();
        let mut cutoffs = vec![2u64; r];
        for round in 0..64 {
            let (gamma, c) = self.tail_constants(growth, &cutoffs)?;
            // Split the budget evenly across the r tail slabs.
            let mut next = Vec::with_capacity(r);
            for i in 0..r {
                let gi = gamma[i];
                if gi <= 1e-300 {
                    next.push(1u64);
                    continue;
                }
                let mut cross = 1.0;
                for (j, &gj) in gamma.iter().enumerate() {
                    if j != i {
                        cross /= 1.0 - gj;
                    }
                }
                let rhs = tol * (1.0 - gi) / (r as f64 * c * cross);
                let li = if rhs >= 1.0 {
                    2.0
                } else {
                    (rhs.ln() / gi.ln()).ceil().max(2.0)
                };
                next.push(li.min(2e18) as u64);
            }
            let grown = next
                .iter()
                .zip(&cutoffs)
                .map(|(&n, &old)| n.max(old))
                .collect::<Vec<_>>();
            let (gamma, c) = self.tail_constants(growth, &grown)?;
            let tail = Self::tail_bound(&gamma, c, &grown);
            cutoffs = grown;
            if tail.is_finite() && tail <= tol {
                let terms = check_budget(&cutoffs, max_terms)?;
                return Ok(Plan {
                    cutoffs,
                    tail,
                    terms,
                });
            }
            // Not yet certified (CPower prefactor still loose): widen.
            for l in cutoffs.iter_mut() {
                *l = *l + *l / 4 + 4;
            }
            if round >= 8 {
                check_budget(&cutoffs, max_terms)?;
            }
        }
        Err(Error::ToleranceUnreachable {
            required: u128::MAX,
            max_terms,
        })
    }

    /// Sweeps the full box [0..=L_1] x ... x [0..=L_r] in lexicographic
    /// order, feeding each term's bracket and damping factor to `kernel`.
    pub(crate) fn sum(&self, cutoffs: &[u64], mut kernel: impl FnMut(Complex64, Complex64)) {
        assert_eq!(cutoffs.len(), self.rank());
        self.sweep(0, self.q_w, Complex64::new(1.0, 0.0), cutoffs, &mut kernel);
    }

    fn sweep(
        &self,
        level: usize,
        pq: Complex64,
        pu: Complex64,
        cutoffs: &[u64],
        kernel: &mut impl FnMut(Complex64, Complex64),
    ) {
        let one = Complex64::new(1.0, 0.0);
        let mut q = pq;
        let mut u = pu;
        if level + 1 == self.rank() {
            let step_q = self.step_q[level];
            let step_u = self.step_u[level];
            for _ in 0..=cutoffs[level] {
                kernel((one - q) * self.inv_one_minus_q, u);
                q *= step_q;
                u *= step_u;
            }
        } else {
            for _ in 0..=cutoffs[level] {
                self.sweep(level + 1, q, u, cutoffs, kernel);
                q *= self.step_q[level];
                u *= self.step_u[level];
            }
        }
    }

    /// Flattens the swept terms into (damping, bracket) pairs, for callers
    /// that evaluate many kernels over one lattice.
    pub(crate) fn collect_terms(&self, cutoffs: &[u64]) -> Vec<(Complex64, Complex64)> {
        let mut terms = Vec::new();
        self.sum(cutoffs, |bracket, damp| terms.push((damp, bracket)));
        terms
    }
}

/// Total term count for a cutoff box, checked against the cap.
pub(crate) fn check_budget(cutoffs: &[u64], max_terms: u64) -> Result<u64> {
    let mut terms: u128 = 1;
    for &l in cutoffs {
        terms = terms.saturating_mul(l as u128 + 1);
    }
    if terms > max_terms as u128 {
        return Err(Error::ToleranceUnreachable {
            required: terms,
            max_terms,
        });
    }
    Ok(terms as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_tail() {
        let mut s = Neumaier::default();
        s.add(1e16);
        s.add(0.3);
        s.add(0.3);
        s.add(-1e16);
        assert!((s.value() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn geometry_rejects_divergent_damping() {
        // Imaginary damping exponent against a negative base pushes |u^{v}|
        // past 1.
        let p = QParams::single(
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.8, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.3, -2.0),
        )
        .unwrap();
        assert!(matches!(
            LatticeGeometry::new(&p),
            Err(Error::DivergentDamping { .. })
        ));
    }

    #[test]
    fn plan_tail_certified_geometric() {
        let p = QParams::single_real(0.5, 0.5, 1.0, 1.0, 1.0).unwrap();
        let geo = LatticeGeometry::new(&p).unwrap();
        let plan = geo.plan(&Growth::IntPower(0), 1e-12, DEFAULT_MAX_TERMS).unwrap();
        assert!(plan.tail <= 1e-12);
        // K = 1: the sum is sum u^l over the box, tail is the dropped
        // geometric remainder u^{L+1}/(1-u); the certified bound must cover it.
        let dropped = 0.5f64.powi(plan.cutoffs[0] as i32 + 1) / 0.5;
        assert!(dropped <= plan.tail * 1.0000001);
    }

    #[test]
    fn sum_matches_geometric_closed_form() {
        let p = QParams::single_real(0.5, 0.5, 1.0, 1.0, 1.0).unwrap();
        let geo = LatticeGeometry::new(&p).unwrap();
        let plan = geo.plan(&Growth::IntPower(0), 1e-13, DEFAULT_MAX_TERMS).unwrap();
        let mut acc = CompensatedComplex::new();
        geo.sum(&plan.cutoffs, |_, damp| acc.add(damp));
        assert!((acc.value().re - 2.0).abs() < 1e-12);
        assert!(acc.value().im.abs() < 1e-15);
    }

    #[test]
    fn budget_overflow_reported() {
        let err = check_budget(&[1_000_000, 1_000_000], 1_000_000).unwrap_err();
        assert!(matches!(err, Error::ToleranceUnreachable { .. }));
    }

    #[test]
    fn zero_damping_base_collapses_axis() {
        let p = QParams::single_real(0.5, 0.0, 1.0, 1.0, 1.0).unwrap();
        let geo = LatticeGeometry::new(&p).unwrap();
        let plan = geo.plan(&Growth::IntPower(1), 1e-12, DEFAULT_MAX_TERMS).unwrap();
        let mut acc = CompensatedComplex::new();
        geo.sum(&plan.cutoffs, |bracket, damp| acc.add(damp * bracket));
        // Only the n=0 term survives: [w]_q = [1]_q = 1.
        assert!((acc.value().re - 1.0).abs() < 1e-14);
    }
}
