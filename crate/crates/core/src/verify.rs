//! Inequality checks over a seeded corpus of radial non-increasing profiles.
//!
//! Each check reports a signed relative slack per sample (`(rhs - lhs)/max`,
//! nonnegative when the inequality holds) and passes when the worst slack is
//! at least `-tolerance` and no structural condition failed.

use std::f64::consts::{E, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::{c1_bound, c2_bound};
use crate::error::{domain, Error, Result};
use crate::radial::{gn_quotient, nash_quotient, norm_triple, RadialGrid, RadialProfile};
use crate::specfun::{ball_volume, nash_constant, optimal_profile, spectral_data, Eigenfunction};

/// Radial test-function families; all are non-increasing in `r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `exp(-(r/s)²)`, truncated at `8s`.
    Gaussian { s: f64 },
    /// `1 + cos(πr/R)` on `[0, R]`.
    CosineBump { radius: f64 },
    /// `(1 - (r/R)²)^k` on `[0, R]`.
    PolyBump { radius: f64, k: u32 },
    /// `1 - r/R` on `[0, R]`.
    Tent { radius: f64 },
    /// `c·(1 - φ₁(r/σ))` on `[0, σ]`.
    ScaledOptimizer { sigma: f64, c: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestFunctionSpec {
    pub d: usize,
    #[serde(flatten)]
    pub family: Family,
}

impl TestFunctionSpec {
    pub fn new(d: usize, family: Family) -> Self {
        TestFunctionSpec { d, family }
    }

    pub fn is_optimizer(&self) -> bool {
        matches!(self.family, Family::ScaledOptimizer { .. })
    }
}

/// Sample a spec on `n_knots` uniform knots over its support.
pub fn generate(spec: &TestFunctionSpec, n_knots: usize) -> Result<RadialProfile> {
    let d = spec.d;
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(domain("generate", format!("{name} = {v} must be positive")))
        }
    };
    match spec.family {
        Family::Gaussian { s } => {
            positive("s", s)?;
            let f = move |r: f64| (-(r / s).powi(2)).exp();
            let df = move |r: f64| -2.0 * r / (s * s) * (-(r / s).powi(2)).exp();
            RadialProfile::sample(d, 8.0 * s, n_knots, f, Some(&df))
        }
        Family::CosineBump { radius } => {
            positive("R", radius)?;
            let k = PI / radius;
            RadialProfile::sample(
                d,
                radius,
                n_knots,
                move |r| 1.0 + (k * r).cos(),
                Some(&move |r: f64| -k * (k * r).sin()),
            )
        }
        Family::PolyBump { radius, k } => {
            positive("R", radius)?;
            if k == 0 {
                return Err(domain("generate", "poly_bump exponent must be ≥ 1"));
            }
            let kf = k as f64;
            RadialProfile::sample(
                d,
                radius,
                n_knots,
                move |r| (1.0 - (r / radius).powi(2)).max(0.0).powi(k as i32),
                Some(&move |r: f64| {
                    let x = r / radius;
                    -2.0 * kf * x / radius * (1.0 - x * x).max(0.0).powi(k as i32 - 1)
                }),
            )
        }
        Family::Tent { radius } => {
            positive("R", radius)?;
            RadialProfile::sample(
                d,
                radius,
                n_knots,
                move |r| (1.0 - r / radius).max(0.0),
                Some(&move |_| -1.0 / radius),
            )
        }
        Family::ScaledOptimizer { sigma, c } => {
            positive("σ", sigma)?;
            positive("c", c)?;
            optimal_profile(d, n_knots)?.dilated(1.0 / sigma)?.scaled(c)
        }
    }
}

/// `n` specs in dimension `d`, drawn deterministically from `seed`.
pub fn corpus(d: usize, n: usize, seed: u64) -> Vec<TestFunctionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (d as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..n)
        .map(|i| {
            let family = match i % 5 {
                0 => Family::Gaussian {
                    s: rng.gen_range(0.2..3.0),
                },
                1 => Family::CosineBump {
                    radius: rng.gen_range(0.3..5.0),
                },
                2 => Family::PolyBump {
                    radius: rng.gen_range(0.3..5.0),
                    k: rng.gen_range(1..=4),
                },
                3 => Family::Tent {
                    radius: rng.gen_range(0.3..5.0),
                },
                _ => Family::ScaledOptimizer {
                    sigma: rng.gen_range(0.3..3.0),
                    c: rng.gen_range(0.2..5.0),
                },
            };
            TestFunctionSpec::new(d, family)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub samples: usize,
    pub worst_slack: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: Option<u64>,
    /// At most the first 16 failure descriptions.
    pub failures: Vec<String>,
}

struct Tally {
    name: String,
    tolerance: f64,
    samples: usize,
    worst: f64,
    failures: Vec<String>,
    failed: usize,
}

impl Tally {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Tally {
            name: name.into(),
            tolerance,
            samples: 0,
            worst: f64::INFINITY,
            failures: Vec::new(),
            failed: 0,
        }
    }

    fn slack(&mut self, label: &str, slack: f64) {
        self.worst = self.worst.min(slack);
        if !(slack >= -self.tolerance) {
            self.fail(format!("{label}: slack {slack:.3e}"));
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < 16 {
            self.failures.push(msg);
        }
    }

    fn finish(self, seed: Option<u64>) -> CheckReport {
        CheckReport {
            name: self.name,
            samples: self.samples,
            worst_slack: if self.samples == 0 { 0.0 } else { self.worst },
            tolerance: self.tolerance,
            pass: self.failed == 0,
            seed,
            failures: self.failures,
        }
    }
}

/// `(rhs - lhs)/|rhs|`, zero when both sides vanish.
fn rel_slack(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else {
        (rhs - lhs) / rhs.abs().max(lhs.abs())
    }
}

/// Relative L² distance to the optimizer `1 - φ₁` after matching `‖·‖₁` and
/// `‖·‖₂` by an amplitude and a dilation.
pub fn optimizer_distance(u: &RadialProfile) -> Result<f64> {
    let d = u.d();
    let opt = optimal_profile(d, 4097)?;
    let (tu, to) = (norm_triple(u, 1.0)?, norm_triple(&opt, 1.0)?);
    // a·u(b·x): L1 ↦ a·b^{-d}·L1, M ↦ a²·b^{-d}·M
    let a = (to.l2 / tu.l2) * (tu.lp / to.lp);
    let b = (a * tu.lp / to.lp).powf(1.0 / d as f64);
    let radius = (u.support_radius() / b).max(1.0);
    let grid = RadialGrid::new(d, radius, 8192)?;
    let diff: Vec<f64> = grid
        .knots()
        .map(|r| (a * u.eval(b * r) - opt.eval(r)).powi(2))
        .collect();
    Ok((grid.integrate(&diff) / to.l2).sqrt())
}

/// Nash's inequality with `C_Nash`; only optimizers may come within `1e-3`.
pub fn check_nash(
    samples: &[(TestFunctionSpec, RadialProfile)],
    seed: Option<u64>,
) -> Result<CheckReport> {
    let mut tally = Tally::new("nash", 1e-6);
    for (spec, u) in samples {
        let c = nash_constant(spec.d as f64)?;
        let slack = 1.0 - nash_quotient(u)? / c;
        let label = format!("{spec:?}");
        tally.samples += 1;
        tally.slack(&label, slack);
        if spec.is_optimizer() && slack > 1e-5 {
            tally.fail(format!("{label}: optimizer slack {slack:.3e} > 1e-5"));
        }
        if slack < 1e-3 {
            let dist = optimizer_distance(u)?;
            if dist > 0.05 {
                tally.fail(format!(
                    "{label}: slack {slack:.3e} but distance {dist:.3e}"
                ));
            }
        }
    }
    Ok(tally.finish(seed))
}

/// `Q_p[u] ≥ C_GN(p)` with `C_GN` from the ground state `ground`, which is
/// itself checked to be the minimizer.
pub fn check_gn(
    samples: &[(TestFunctionSpec, RadialProfile)],
    p: f64,
    ground: &RadialProfile,
    seed: Option<u64>,
) -> Result<CheckReport> {
    let mut tally = Tally::new(format!("gn(p={p})"), 1e-4);
    let c_gn = gn_quotient(ground, p)?;
    for (spec, u) in samples {
        tally.samples += 1;
        tally.slack(&format!("{spec:?}"), gn_quotient(u, p)? / c_gn - 1.0);
    }
    Ok(tally.finish(seed))
}

/// Slacks of the truncation argument at radius `radius`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CarlenLossSlacks {
    pub outside: f64,
    pub inside: f64,
    pub mass: f64,
    pub assembled: f64,
}

/// `R_⋆` minimizing `(R²/λ₁)‖∇u‖₂² + ‖u‖₁²/(ω_d R^d)`.
pub fn optimal_truncation_radius(u: &RadialProfile) -> Result<f64> {
    let d = u.d() as f64;
    let t = norm_triple(u, 1.0)?;
    let lambda1 = spectral_data(d)?.lambda1;
    Ok((d * lambda1 * t.lp * t.lp / (2.0 * ball_volume(d) * t.grad)).powf(1.0 / (d + 2.0)))
}

pub fn carlen_loss_slacks(u: &RadialProfile, radius: f64) -> Result<CarlenLossSlacks> {
    if !(radius > 0.0) {
        return Err(domain(
            "carlen_loss",
            format!("R = {radius} must be positive"),
        ));
    }
    let v = u.values();
    let scale = v.iter().cloned().fold(0.0, f64::max);
    if v.windows(2).any(|w| w[1] > w[0] + 1e-14 * scale) {
        return Err(Error::InvalidProfile(
            "profile is not non-increasing".into(),
        ));
    }
    let d = u.d() as f64;
    let grid = u.grid();
    let lambda1 = spectral_data(d)?.lambda1;
    let ball = ball_volume(d) * radius.powf(d);
    let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
    let t = norm_triple(u, 1.0)?;
    let (l1, l2) = (t.lp, t.l2);
    let support = u.support_radius();
    let r = radius.min(support);
    let l1_in = grid.integrate_range(v, 0.0, r);
    let l2_in = grid.integrate_range(&sq, 0.0, r);
    let l1_out = grid.integrate_range(v, r, support);
    let l2_out = grid.integrate_range(&sq, r, support);
    let outside_rhs = l1_in / ball * l1_out;
    // a shell carrying no resolvable mass is the trivial case 0 ≤ 0
    let outside = if l2_out.max(outside_rhs) <= 1e-13 * l2 {
        0.0
    } else {
        rel_slack(l2_out, outside_rhs)
    };
    let poincare = radius * radius / lambda1 * t.grad;
    Ok(CarlenLossSlacks {
        outside,
        inside: rel_slack(l2_in, poincare + l1_in * l1_in / ball),
        mass: rel_slack(l1_in * l1, l1 * l1),
        assembled: rel_slack(l2, poincare + l1 * l1 / ball),
    })
}

/// The truncation argument at `R_⋆/2`, `R_⋆` and `2R_⋆` for every sample.
pub fn check_carlen_loss(
    samples: &[(TestFunctionSpec, RadialProfile)],
    seed: Option<u64>,
) -> Result<CheckReport> {
    let mut tally = Tally::new("carlen_loss", 1e-6);
    for (spec, u) in samples {
        let star = optimal_truncation_radius(u)?;
        for factor in [0.5, 1.0, 2.0] {
            let s = carlen_loss_slacks(u, factor * star)?;
            let label = format!("{spec:?} at {factor}·R*");
            tally.samples += 1;
            for (part, x) in [
                ("outside", s.outside),
                ("inside", s.inside),
                ("mass", s.mass),
                ("assembled", s.assembled),
            ] {
                tally.slack(&format!("{label} {part}"), x);
            }
        }
    }
    Ok(tally.finish(seed))
}

/// `(∫_{B_R}|v|², (R²/λ₁)∫_{B_R}|∇v|²)` for a signed radial `v` with the
/// mean removed.
fn poincare_sides(
    d: usize,
    radius: f64,
    v: impl Fn(f64) -> f64,
    dv: impl Fn(f64) -> f64,
) -> Result<(f64, f64)> {
    let grid = RadialGrid::new(d, radius, 4096)?;
    let raw: Vec<f64> = grid.knots().map(&v).collect();
    let mean = grid.integrate(&raw) / (ball_volume(d as f64) * radius.powi(d as i32));
    let centered: Vec<f64> = raw.iter().map(|x| (x - mean).powi(2)).collect();
    let grad: Vec<f64> = grid.knots().map(|r| dv(r).powi(2)).collect();
    let lambda1 = spectral_data(d as f64)?.lambda1;
    Ok((
        grid.integrate(&centered),
        radius * radius / lambda1 * grid.integrate(&grad),
    ))
}

/// Poincaré on `B_R` for the eigenfunction (equality), zero, and random
/// radial polynomials.
pub fn check_poincare_ball(d: usize, radius: f64, count: usize, seed: u64) -> Result<CheckReport> {
    if !(radius > 0.0) {
        return Err(domain(
            "check_poincare_ball",
            format!("R = {radius} must be positive"),
        ));
    }
    let mut tally = Tally::new(format!("poincare_ball(R={radius})"), 1e-6);
    let ef = Eigenfunction::new(d)?;
    let (lhs, rhs) = poincare_sides(
        d,
        radius,
        |r| ef.value((r / radius).min(1.0)).unwrap_or(f64::NAN),
        |r| {
            ef.derivs((r / radius).min(1.0))
                .map_or(f64::NAN, |x| x[1] / radius)
        },
    )?;
    tally.samples += 1;
    let eq = rel_slack(lhs, rhs);
    tally.slack("eigenfunction", eq);
    if eq.abs() > 1e-6 {
        tally.fail(format!("eigenfunction ratio off by {eq:.3e}"));
    }
    let (lhs, rhs) = poincare_sides(d, radius, |_| 0.0, |_| 0.0)?;
    tally.samples += 1;
    tally.slack("zero", rel_slack(lhs, rhs));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let c: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v = |r: f64| {
            let x = r / radius;
            c.iter().rev().fold(0.0, |acc, ck| acc * x + ck)
        };
        let dv = |r: f64| {
            let x = r / radius;
            let mut acc = 0.0;
            for k in (1..c.len()).rev() {
                acc = acc * x + k as f64 * c[k];
            }
            acc / radius
        };
        let (lhs, rhs) = poincare_sides(d, radius, v, dv)?;
        tally.samples += 1;
        tally.slack(&format!("polynomial #{i}"), rel_slack(lhs, rhs));
    }
    Ok(tally.finish(Some(seed)))
}

/// Slacks of the two entropy steps and of `N[u] ≤ C₁(d)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EntropySlacks {
    pub jensen: f64,
    pub log_sobolev: f64,
    pub nash_vs_c1: f64,
}

/// `∫ u² log u / ‖u‖₂²` with the zero set contributing 0.
fn entropy(u: &RadialProfile, l2_sq: f64) -> f64 {
    u.integrate_fn(|v| if v > 0.0 { v * v * v.ln() } else { 0.0 }) / l2_sq
}

pub fn entropy_slacks(u: &RadialProfile) -> Result<EntropySlacks> {
    let d = u.d() as f64;
    let t = norm_triple(u, 1.0)?;
    let ent = entropy(u, t.l2);
    let jensen = ent - (t.l2 / t.lp).ln();
    let bound = 0.5 * t.l2.ln() + 0.25 * d * (2.0 / (PI * d * E) * t.grad / t.l2).ln();
    Ok(EntropySlacks {
        jensen,
        log_sobolev: bound - ent,
        nash_vs_c1: 1.0 - nash_quotient(u)? / c1_bound(d)?,
    })
}

/// Jensen and log-Sobolev steps (slacks in log units) and `N ≤ C₁`.
pub fn check_entropy_chain(
    samples: &[(TestFunctionSpec, RadialProfile)],
    seed: Option<u64>,
) -> Result<CheckReport> {
    let mut tally = Tally::new("entropy_chain", 1e-6);
    for (spec, u) in samples {
        let s = entropy_slacks(u)?;
        let label = format!("{spec:?}");
        tally.samples += 1;
        tally.slack(&format!("{label} jensen"), s.jensen);
        tally.slack(&format!("{label} log_sobolev"), s.log_sobolev);
        tally.slack(&format!("{label} c1"), s.nash_vs_c1);
    }
    Ok(tally.finish(seed))
}

/// Worst slack of the split bound
/// `‖u‖₂² ≤ (2π)^{-d}·ω_d·ρ^d·‖u‖₁² + ρ^{-2}‖∇u‖₂²` over a log grid of `ρ`.
pub fn fourier_split_slack(u: &RadialProfile) -> Result<f64> {
    let d = u.d() as f64;
    let t = norm_triple(u, 1.0)?;
    let coef = ball_volume(d) / (2.0 * PI).powf(d) * t.lp * t.lp;
    // balancing scale of the two terms
    let rho0 = (t.grad / coef).powf(1.0 / (d + 2.0));
    let worst = (-40..=40)
        .map(|j| rho0 * 10f64.powf(j as f64 / 10.0))
        .map(|rho| rel_slack(t.l2, coef * rho.powf(d) + t.grad / (rho * rho)))
        .fold(f64::INFINITY, f64::min);
    Ok(worst)
}

/// Fourier split on a log grid, `N ≤ C₂(d)`, and in one dimension the
/// ordering `C₂ slack ≥ C₁ slack ≥ Nash slack`.
pub fn check_fourier_bound(
    samples: &[(TestFunctionSpec, RadialProfile)],
    seed: Option<u64>,
) -> Result<CheckReport> {
    let mut tally = Tally::new("fourier_split", 1e-6);
    for (spec, u) in samples {
        let d = spec.d as f64;
        let label = format!("{spec:?}");
        let q = nash_quotient(u)?;
        let s2 = 1.0 - q / c2_bound(d)?;
        tally.samples += 1;
        tally.slack(&format!("{label} split"), fourier_split_slack(u)?);
        tally.slack(&format!("{label} c2"), s2);
        if spec.d == 1 {
            let s1 = 1.0 - q / c1_bound(d)?;
            let sn = 1.0 - q / nash_constant(d)?;
            if !(s2 >= s1 && s1 >= sn) {
                tally.fail(format!(
                    "{label}: slack ordering {s2:.3e}, {s1:.3e}, {sn:.3e}"
                ));
            }
        }
    }
    Ok(tally.finish(seed))
}

/// Settings of a full verification run in one dimension.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteConfig {
    pub d: usize,
    pub seed: u64,
    pub samples: usize,
    pub n_knots: usize,
    pub shoot_tol: f64,
}

impl SuiteConfig {
    pub fn new(d: usize, seed: u64) -> Self {
        SuiteConfig {
            d,
            seed,
            samples: 100,
            n_knots: 2049,
            shoot_tol: 1e-10,
        }
    }
}

/// Every check on the seeded corpus, GN at `p ∈ {1.2, 1.5}`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let seed = Some(cfg.seed);
    let samples = corpus(cfg.d, cfg.samples, cfg.seed)
        .into_iter()
        .map(|spec| Ok((spec, generate(&spec, cfg.n_knots)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut reports = vec![check_nash(&samples, seed)?];
    for p in [1.2, 1.5] {
        let ground = crate::shooting::shoot(p, cfg.d, cfg.shoot_tol)?;
        reports.push(check_gn(&samples, p, &ground.profile, seed)?);
    }
    reports.push(check_carlen_loss(&samples, seed)?);
    for radius in [0.5, 1.0, 2.0] {
        reports.push(check_poincare_ball(cfg.d, radius, 20, cfg.seed)?);
    }
    reports.push(check_entropy_chain(&samples, seed)?);
    reports.push(check_fourier_bound(&samples, seed)?);
    Ok(reports)
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn random_corpus_respects_nash(d in 1usize..=4, seed in any::<u64>()) {
            let c = nash_constant(d as f64).unwrap();
            for spec in corpus(d, 5, seed) {
                let u = generate(&spec, 1025).unwrap();
                let q = nash_quotient(&u).unwrap();
                prop_assert!(q <= c * (1.0 + 1e-6), "{spec:?}: {q} > {c}");
            }
        }
    }
}
