//! Named verification suites: seeded random-draw cross-checks of every
//! identity the crate computes, runnable through the CLI (`verify`) and the
//! acceptance tests.
//!
//! Residual convention: route disagreement is measured as
//! |a - b| / max(1, m) where m is the reference route's roundoff scale --
//! the absolute term mass of the closed form's alternating binomial sum
//! (|b| itself when no cancellation-aware mass applies). The identities are
//! exact, but f64 agreement can only be relative to that mass: the closed
//! form carries a (1-q)^{-n} amplification and cancels heavily near the
//! disk edge, so an absolute reading of the thresholds is unattainable
//! there, while for O(1) well-conditioned values the scaled and absolute
//! readings coincide.
//!
//! Draws whose certified truncation plan exceeds the term budget are
//! redrawn (deterministically, from the same stream); the parameter ranges
//! are unchanged, the sample merely skips tuples whose series cannot be
//! summed within the cap.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::changhee::{h_multiple_closed, h_multiple_closed_with_mass, h_series_oracle_with_limit};
use crate::exactcheck::{self, exact_gf_coeff, exact_h_multiple, rational, ExactParams};
use crate::lattice::{Growth, LatticeGeometry};
use crate::mellin::mellin_zeta_quadrature_with_limit;
use crate::powerseries;
use crate::qcore::QParams;
use crate::zeta::{zeta_multiple_with_limit, zeta_neg_int};
use crate::error::Error;

/// The named suites exposed by `verify --suite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteId {
    Thm2,
    Thm3,
    Thm4,
    Thm5,
    Mellin,
    QLimit,
    Exact,
    All,
}

impl SuiteId {
    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Thm2 => "thm2",
            SuiteId::Thm3 => "thm3",
            SuiteId::Thm4 => "thm4",
            SuiteId::Thm5 => "thm5",
            SuiteId::Mellin => "mellin",
            SuiteId::QLimit => "qlimit",
            SuiteId::Exact => "exact",
            SuiteId::All => "all",
        }
    }

    pub fn individual() -> [SuiteId; 7] {
        [
            SuiteId::Thm2,
            SuiteId::Thm3,
            SuiteId::Thm4,
            SuiteId::Thm5,
            SuiteId::Mellin,
            SuiteId::QLimit,
            SuiteId::Exact,
        ]
    }
}

impl std::str::FromStr for SuiteId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thm2" => Ok(SuiteId::Thm2),
            "thm3" => Ok(SuiteId::Thm3),
            "thm4" => Ok(SuiteId::Thm4),
            "thm5" => Ok(SuiteId::Thm5),
            "mellin" => Ok(SuiteId::Mellin),
            "qlimit" => Ok(SuiteId::QLimit),
            "exact" => Ok(SuiteId::Exact),
            "all" => Ok(SuiteId::All),
            other => Err(format!(
                "unknown suite `{other}` (expected thm2|thm3|thm4|thm5|mellin|qlimit|exact|all)"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Overrides each suite's default sample count.
    pub samples: Option<u64>,
    pub seed: u64,
    pub max_terms: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: None,
            seed: 7,
            max_terms: crate::DEFAULT_MAX_TERMS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub lines: Vec<String>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Runs one suite (or all of them) and returns deterministic outcomes.
pub fn run_suite(id: SuiteId, opts: &VerifyOptions) -> Vec<SuiteOutcome> {
    match id {
        SuiteId::Thm2 => vec![suite_thm2(opts)],
        SuiteId::Thm3 => vec![suite_thm3(opts)],
        SuiteId::Thm4 => vec![suite_thm4(opts)],
        SuiteId::Thm5 => vec![suite_thm5(opts)],
        SuiteId::Mellin => vec![suite_mellin(opts)],
        SuiteId::QLimit => vec![suite_qlimit(opts)],
        SuiteId::Exact => vec![suite_exact(opts)],
        SuiteId::All => SuiteId::individual()
            .into_iter()
            .flat_map(|s| run_suite(s, opts))
            .collect(),
    }
}

/// Renders outcomes as the byte-stable report the CLI prints.
pub fn render_report(outcomes: &[SuiteOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        for line in &o.lines {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!(
            "suite {}: max residual {:.3e} (tolerance {:.1e}) -> {}\n",
            o.name,
            o.max_residual,
            o.tolerance,
            if o.passed { "PASS" } else { "FAIL" }
        ));
    }
    out
}

pub fn all_passed(outcomes: &[SuiteOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}

/// |a - b| / max(1, |b|): relative once the reference leaves the unit scale,
/// absolute below it.
fn residual(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Same, but against an explicit roundoff scale (the closed form's term
/// mass) instead of the reference magnitude.
fn residual_at_scale(a: Complex64, b: Complex64, mass: f64) -> f64 {
    (a - b).norm() / mass.max(1.0)
}

fn draw_range(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// Uniform on the disk |z| <= rmax, rejecting |z| < 0.05 so logs stay tame.
fn draw_disk(rng: &mut ChaCha8Rng, rmax: f64) -> Complex64 {
    loop {
        let re = rng.gen_range(-rmax..rmax);
        let im = rng.gen_range(-rmax..rmax);
        let z = Complex64::new(re, im);
        let n = z.norm();
        if n >= 0.05 && n <= rmax {
            return z;
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const REDRAW_CAP: u32 = 1000;

/// Probes whether the worst-power series plan fits the budget (and a
/// per-draw cap that keeps suite runtimes bounded).
fn plan_fits(p: &QParams, n_max: u32, tol: f64, max_terms: u64, cap: u64) -> bool {
    let geo = match LatticeGeometry::new(p) {
        Ok(g) => g,
        Err(_) => return false,
    };
    match geo.plan(&Growth::IntPower(n_max), tol, max_terms) {
        Ok(plan) => plan.terms <= cap,
        Err(_) => false,
    }
}

// suite thm2: rank-1 closed form vs series oracle vs generating-function
// coefficients, q and u anywhere in the 0.8-disk.
fn suite_thm2(opts: &VerifyOptions) -> SuiteOutcome {
    let samples = opts.samples.unwrap_or(200);
    let tol = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut max_res: f64 = 0.0;
    let mut redraws = 0u32;
    let mut done = 0u64;
    while done < samples && redraws < REDRAW_CAP {
        let q = draw_disk(&mut rng, 0.8);
        let u = draw_disk(&mut rng, 0.8);
        let w1 = draw_range(&mut rng, 0.2, 3.0);
        let v1 = draw_range(&mut rng, 0.2, 3.0);
        let p = QParams::single(q, u, real(0.0), real(w1), real(v1)).expect("draw in range");
        let closed: Vec<(Complex64, f64)> =
            match (0..=8).map(|n| h_multiple_closed_with_mass(n, &p)).collect() {
                Ok(v) => v,
                Err(_) => {
                    redraws += 1;
                    continue;
                }
            };
        let scale = closed.iter().map(|(z, _)| z.norm()).fold(1.0, f64::max);
        if !plan_fits(&p, 8, 1e-12 * scale, opts.max_terms, 10_000_000) {
            redraws += 1;
            continue;
        }
        let mut ok = true;
        let mut cutoff_max = 0u64;
        for (n, &(cl, mass)) in closed.iter().enumerate() {
            let sc = cl.norm().max(1.0);
            match h_series_oracle_with_limit(n as u32, &p, 1e-12 * sc, opts.max_terms) {
                Ok(eval) => {
                    max_res = max_res.max(residual_at_scale(eval.value, cl, mass));
                    cutoff_max = cutoff_max.max(eval.truncation[0]);
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            redraws += 1;
            continue;
        }
        if let Ok(gf) = powerseries::gf_changhee_coeffs(8, &p, Some(cutoff_max)) {
            for (n, &(cl, mass)) in closed.iter().enumerate() {
                max_res = max_res.max(residual_at_scale(gf[n], cl, mass));
            }
        }
        done += 1;
    }
    let passed = done == samples && max_res <= tol;
    SuiteOutcome {
        name: "thm2",
        lines: vec![format!(
            "suite thm2: rank-1 closed form vs series oracle vs gf coefficients, samples={done} n=0..8 seed={} redraws={redraws}",
            opts.seed
        )],
        max_residual: max_res,
        tolerance: tol,
        passed,
    }
}

// suite thm3: rank-2/3 closed form vs series oracle (and gf sweep at the
// oracle's cutoffs).
fn suite_thm3(opts: &VerifyOptions) -> SuiteOutcome {
    let samples = opts.samples.unwrap_or(100);
    let tol = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
    let mut max_res: f64 = 0.0;
    let mut redraws = 0u32;
    let mut done = 0u64;
    while done < samples && redraws < REDRAW_CAP {
        let rank = 2 + (done % 2) as usize;
        let q = draw_disk(&mut rng, 0.8);
        let u = draw_disk(&mut rng, 0.8);
        let w = draw_range(&mut rng, 0.2, 3.0);
        let weights: Vec<Complex64> = (0..rank).map(|_| real(draw_range(&mut rng, 0.2, 3.0))).collect();
        let dampings: Vec<Complex64> = (0..rank).map(|_| real(draw_range(&mut rng, 0.2, 3.0))).collect();
        let p = QParams::new(q, u, real(w), weights, dampings).expect("draw in range");
        let closed: Vec<(Complex64, f64)> =
            match (0..=8).map(|n| h_multiple_closed_with_mass(n, &p)).collect() {
                Ok(v) => v,
                Err(_) => {
                    redraws += 1;
                    continue;
                }
            };
        let scale = closed.iter().map(|(z, _)| z.norm()).fold(1.0, f64::max);
        if !plan_fits(&p, 8, 1e-12 * scale, opts.max_terms, 20_000_000) {
            redraws += 1;
            continue;
        }
        let mut ok = true;
        let mut cutoff_max = 0u64;
        for (n, &(cl, mass)) in closed.iter().enumerate() {
            let sc = cl.norm().max(1.0);
            match h_series_oracle_with_limit(n as u32, &p, 1e-12 * sc, opts.max_terms) {
                Ok(eval) => {
                    max_res = max_res.max(residual_at_scale(eval.value, cl, mass));
                    cutoff_max = cutoff_max.max(eval.truncation.iter().copied().max().unwrap_or(0));
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            redraws += 1;
            continue;
        }
        if crate::lattice::check_budget(&vec![cutoff_max; p.rank()], opts.max_terms).is_ok() {
            if let Ok(gf) = powerseries::gf_changhee_coeffs(8, &p, Some(cutoff_max)) {
                for (n, &(cl, mass)) in closed.iter().enumerate() {
                    max_res = max_res.max(residual_at_scale(gf[n], cl, mass));
                }
            }
        }
        done += 1;
    }
    let passed = done == samples && max_res <= tol;
    SuiteOutcome {
        name: "thm3",
        lines: vec![format!(
            "suite thm3: rank-2/3 closed form vs series routes, samples={done} n=0..8 seed={} redraws={redraws}",
            opts.seed
        )],
        max_residual: max_res,
        tolerance: tol,
        passed,
    }
}

fn draw_real_positive_params(rng: &mut ChaCha8Rng, rank: usize, zero_shift: bool) -> QParams {
    let q = draw_range(rng, 0.05, 0.8);
    let u = draw_range(rng, 0.05, 0.8);
    let w = if zero_shift { 0.0 } else { draw_range(rng, 0.2, 3.0) };
    let weights: Vec<Complex64> = (0..rank).map(|_| real(draw_range(rng, 0.2, 3.0))).collect();
    let dampings: Vec<Complex64> = (0..rank).map(|_| real(draw_range(rng, 0.2, 3.0))).collect();
    QParams::new(real(q), real(u), real(w), weights, dampings).expect("draw in range")
}

// suite thm4: zeta_single(-n) against h_poly_closed(n)/(1-u), rank 1.
fn suite_thm4(opts: &VerifyOptions) -> SuiteOutcome {
    let samples = opts.samples.unwrap_or(200);
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(2));
    let mut max_res: f64 = 0.0;
    let mut redraws = 0u32;
    let mut done = 0u64;
    while done < samples && redraws < REDRAW_CAP {
        let p = draw_real_positive_params(&mut rng, 1, false);
        let damp = (Complex64::new(1.0, 0.0) - p.u()).norm();
        let mut ok = true;
        for n in 0..=8u32 {
            let (h, mass) =
                h_multiple_closed_with_mass(n, &p).expect("real-positive draws are pole-free");
            let reference = h / (Complex64::new(1.0, 0.0) - p.u());
            let sc = reference.norm().max(1.0);
            match zeta_multiple_with_limit(real(-(n as f64)), &p, 1e-11 * sc, opts.max_terms) {
                Ok(eval) => {
                    max_res = max_res.max(residual_at_scale(eval.value, reference, mass / damp))
                }
                Err(Error::ToleranceUnreachable { .. }) => {
                    ok = false;
                    break;
                }
                Err(e) => panic!("unexpected evaluator error in thm4: {e}"),
            }
        }
        if !ok {
            redraws += 1;
            continue;
        }
        done += 1;
    }
    let passed = done == samples && max_res <= tol;
    SuiteOutcome {
        name: "thm4",
        lines: vec![format!(
            "suite thm4: zeta_single(-n) vs closed form/(1-u), samples={done} n=0..8 seed={} redraws={redraws}",
            opts.seed
        )],
        max_residual: max_res,
        tolerance: tol,
        passed,
    }
}

// suite thm5: zeta_multiple(-n) against h_multiple_closed(n)/(1-u)^r for
// ranks 2 and 3.
fn suite_thm5(opts: &VerifyOptions) -> SuiteOutcome {
    let samples = opts.samples.unwrap_or(100);
    let tol = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(3));
    let mut max_res: f64 = 0.0;
    let mut redraws = 0u32;
    let mut done = 0u64;
    while done < samples && redraws < REDRAW_CAP {
        let rank = 2 + (done % 2) as usize;
        let p = draw_real_positive_params(&mut rng, rank, false);
        let ref6 = zeta_neg_int(6, &p).expect("real-positive draws are pole-free");
        if !plan_fits(&p, 6, 1e-9 * ref6.norm().max(1.0), opts.max_terms, 20_000_000) {
            redraws += 1;
            continue;
        }
        let mut ok = true;
        for n in 0..=6u32 {
            let reference = zeta_neg_int(n, &p).expect("real-positive draws are pole-free");
            let sc = reference.norm().max(1.0);
            match zeta_multiple_with_limit(real(-(n as f64)), &p, 1e-9 * sc, opts.max_terms) {
                Ok(eval) => max_res = max_res.max(residual(eval.value, reference)),
                Err(Error::ToleranceUnreachable { .. }) => {
                    ok = false;
                    break;
                }
                Err(e) => panic!("unexpected evaluator error in thm5: {e}"),
            }
        }
        if !ok {
            redraws += 1;
            continue;
        }
        done += 1;
    }
    let passed = done == samples && max_res <= tol;
    SuiteOutcome {
        name: "thm5",
        lines: vec![format!(
            "suite thm5: zeta_multiple(-n) vs closed form/(1-u)^r, ranks 2-3, samples={done} n=0..6 seed={} redraws={redraws}",
            opts.seed
        )],
        max_residual: max_res,
        tolerance: tol,
        passed,
    }
}

// suite mellin: quadrature route vs series route at s in {2, 3, 3.5}.
// Dampings are drawn from [0.5, 3] and |q|, |u| from [0.05, 0.6]: the
// integrand cost per node is the lattice size, which those ranges keep
// small; the identity itself is parameter-uniform.
fn suite_mellin(opts: &VerifyOptions) -> SuiteOutcome {
    let samples = opts.samples.unwrap_or(20);
    let tol = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(4));
    let mut max_res: f64 = 0.0;
    let mut redraws = 0u32;
    let mut done = 0u64;
    while done < samples && redraws < REDRAW_CAP {
        let rank = 1 + (done % 2) as usize;
        let q = draw_range(&mut rng, 0.05, 0.6);
        let u = draw_range(&mut rng, 0.05, 0.6);
        let w = draw_range(&mut rng, 0.2, 3.0);
        let weights: Vec<Complex64> = (0..rank).map(|_| real(draw_range(&mut rng, 0.2, 3.0))).collect();
        let dampings: Vec<Complex64> = (0..rank).map(|_| real(draw_range(&mut rng, 0.5, 3.0))).collect();
        let p = QParams::new(real(q), real(u), real(w), weights, dampings).expect("draw in range");
        let mut ok = true;
        for s in [2.0, 3.0, 3.5] {
            let series = match zeta_multiple_with_limit(real(s), &p, 1e-9, opts.max_terms) {
                Ok(eval) => eval.value,
                Err(_) => {
                    ok = false;
                    break;
                }
            };
            let sc = series.norm().max(1.0);
            match mellin_zeta_quadrature_with_limit(real(s), &p, 1e-7 * sc, opts.max_terms) {
                Ok(quad) => max_res = max_res.max(residual(quad.value, series)),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            redraws += 1;
            continue;
        }
        done += 1;
    }
    let passed = done == samples && max_res <= tol;
    SuiteOutcome {
        name: "mellin",
        lines: vec![format!(
            "suite mellin: quadrature vs series at s in {{2, 3, 3.5}}, ranks 1-2, samples={done} seed={} redraws={redraws}",
            opts.seed
        )],
        max_residual: max_res,
        tolerance: tol,
        passed,
    }
}

// suite qlimit: at q = 1 - eps with unit dampings, the closed form must
// approach the classical Euler-Barnes value taken at 1/u, deviating linearly
// in eps: halving eps halves the deviation (ratio window [1.8, 2.2]).
//
// The 1/u convention is forced by the generating functions: as q -> 1 the
// lattice expansion becomes (1-u)^r e^{wt} prod 1/(1 - u e^{w_i t}), which
// is the classical series at parameter 1/u.
fn suite_qlimit(_opts: &VerifyOptions) -> SuiteOutcome {
    let fixtures: [(f64, f64, &[f64]); 5] = [
        (0.3, 0.5, &[1.0]),
        (0.5, 1.0, &[2.0]),
        (0.25, 0.8, &[1.0, 2.0]),
        (0.4, 0.0, &[1.5, 1.0]),
        (0.2, 0.6, &[1.0, 1.0, 2.0]),
    ];
    let tol = 0.2;
    let mut max_dev: f64 = 0.0;
    let mut lines = vec![
        "suite qlimit: first-order q->1 convergence to Euler-Barnes values at 1/u".to_string(),
    ];
    let mut passed = true;
    for (u, w, weights) in fixtures {
        let a: Vec<Complex64> = weights.iter().map(|&x| real(x)).collect();
        let classical = powerseries::gf_euler_barnes(3, real(1.0 / u), real(w), &a)
            .expect("fixture parameters are valid");
        let dev = |eps: f64, n: u32| -> f64 {
            let p = QParams::new(
                real(1.0 - eps),
                real(u),
                real(w),
                a.clone(),
                vec![real(1.0); a.len()],
            )
            .expect("fixture parameters are valid");
            (h_multiple_closed(n, &p).expect("pole-free fixtures") - classical[n as usize]).norm()
        };
        for n in 1..=3u32 {
            let d1 = dev(1e-3, n);
            let d2 = dev(5e-4, n);
            let ratio = d1 / d2;
            max_dev = max_dev.max((ratio - 2.0).abs());
            if !(1.8..=2.2).contains(&ratio) {
                passed = false;
                lines.push(format!(
                    "  ratio out of window: u={u} w={w} r={} n={n} ratio={ratio:.6}",
                    a.len()
                ));
            }
        }
    }
    SuiteOutcome {
        name: "qlimit",
        lines,
        max_residual: max_dev,
        tolerance: tol,
        passed,
    }
}

// suite exact: bit-exact agreement of the two rational routes, the float
// drift bound, and the classical Bernoulli/Euler anchors.
fn suite_exact(_opts: &VerifyOptions) -> SuiteOutcome {
    let fixtures: Vec<ExactParams> = vec![
        ExactParams::new(rational(1, 2), rational(1, 3), 0, vec![1], vec![1]),
        ExactParams::new(rational(2, 5), rational(1, 7), 0, vec![1, 2], vec![1, 1]),
        ExactParams::new(rational(1, 3), rational(2, 9), 1, vec![1, 3], vec![2, 1]),
        ExactParams::new(rational(3, 7), rational(1, 5), 2, vec![2], vec![3]),
        ExactParams::new(rational(1, 4), rational(3, 8), 0, vec![1, 1, 2], vec![1, 2, 1]),
        ExactParams::new(rational(5, 9), rational(4, 9), 1, vec![1], vec![2]),
        ExactParams::new(rational(2, 3), rational(1, 6), 3, vec![2, 3], vec![1, 2]),
        ExactParams::new(rational(1, 5), rational(2, 5), 0, vec![4], vec![1]),
        ExactParams::new(rational(4, 7), rational(3, 11), 2, vec![1, 2, 3], vec![2, 1, 1]),
        ExactParams::new(rational(7, 10), rational(1, 9), 1, vec![3, 1], vec![1, 4]),
    ]
    .into_iter()
    .map(|p| p.expect("fixtures are valid"))
    .collect();

    let mut passed = true;
    let mut max_drift: f64 = 0.0;
    let mut lines = vec![format!(
        "suite exact: {} rational fixtures, bit-exact route equality n=0..12, float drift n=0..8",
        fixtures.len()
    )];
    for (i, p) in fixtures.iter().enumerate() {
        for n in 0..=12u32 {
            let a = exact_h_multiple(n, p).expect("fixtures are pole-free");
            let b = exact_gf_coeff(n, p).expect("fixtures are pole-free");
            if a != b {
                passed = false;
                lines.push(format!("  route mismatch at fixture {i}, n={n}"));
            }
        }
        let qp = p.to_qparams();
        for n in 0..=8u32 {
            let exact = exactcheck::to_f64(&exact_h_multiple(n, p).expect("pole-free"));
            let float = h_multiple_closed(n, &qp).expect("pole-free");
            let drift = (float - Complex64::new(exact, 0.0)).norm() / exact.abs().max(1.0);
            max_drift = max_drift.max(drift);
            if drift > 1e-12 {
                passed = false;
                lines.push(format!("  float drift {drift:.3e} at fixture {i}, n={n}"));
            }
        }
    }

    // Classical anchors: Bernoulli numbers from the rank-1 Barnes series and
    // the Euler-number recurrence at u = -1, both in exact arithmetic.
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    let bern = powerseries::scaled_coeffs(
        &powerseries::barnes_bernoulli_series(15, &BigRational::zero(), &[BigRational::one()])
            .expect("valid"),
        15,
    );
    let expected = [
        rational(1, 1),
        rational(-1, 2),
        rational(1, 6),
        rational(0, 1),
        rational(-1, 30),
    ];
    for (n, want) in expected.iter().enumerate() {
        if &bern[n] != want {
            passed = false;
            lines.push(format!("  Bernoulli anchor failed at n={n}"));
        }
    }
    for k in (3..=15usize).step_by(2) {
        if !bern[k].is_zero() {
            passed = false;
            lines.push(format!("  odd Bernoulli B_{k} nonzero"));
        }
    }
    let euler = powerseries::scaled_coeffs(
        &powerseries::frobenius_euler_series(12, &rational(-1, 1), &BigRational::zero(), 1)
            .expect("valid"),
        12,
    );
    for n in 1..=12usize {
        let mut acc = euler[n].clone();
        for k in 0..=n {
            acc += BigRational::from_integer(exactcheck::binomial_big(n as u32, k as u32))
                * euler[k].clone();
        }
        if !acc.is_zero() {
            passed = false;
            lines.push(format!("  Euler recurrence failed at n={n}"));
        }
    }

    SuiteOutcome {
        name: "exact",
        lines,
        max_residual: max_drift,
        tolerance: 1e-12,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for id in SuiteId::individual() {
            assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
        }
        assert_eq!("all".parse::<SuiteId>().unwrap(), SuiteId::All);
        assert!("bogus".parse::<SuiteId>().is_err());
    }

    #[test]
    fn report_is_deterministic_for_a_small_suite() {
        let opts = VerifyOptions {
            samples: Some(5),
            ..VerifyOptions::default()
        };
        let a = render_report(&run_suite(SuiteId::Thm4, &opts));
        let b = render_report(&run_suite(SuiteId::Thm4, &opts));
        assert_eq!(a, b);
        assert!(a.contains("PASS"));
    }

    #[test]
    fn exact_suite_passes() {
        let outcomes = run_suite(SuiteId::Exact, &VerifyOptions::default());
        assert!(all_passed(&outcomes), "{}", render_report(&outcomes));
    }
}
