//! L² decay of the heat flow against the Nash and Young envelopes.
//!
//! Evolution is analytic for Gaussian data in any dimension and by direct
//! quadrature convolution in one dimension.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::radial::{norm_triple, RadialProfile};
use crate::specfun::{nash_constant, optimal_profile, spectral_data};

/// `G(t, x) = (4πt)^{-d/2} exp(-|x|²/(4t))` at `|x| = rho`.
pub fn heat_kernel(t: f64, rho: f64, d: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain("heat_kernel", format!("t = {t} must be positive")));
    }
    Ok((4.0 * PI * t).powf(-0.5 * d as f64) * (-rho * rho / (4.0 * t)).exp())
}

/// `‖G(t, ·)‖₂ = (8πt)^{-d/4}`.
pub fn heat_kernel_l2(t: f64, d: usize) -> f64 {
    (8.0 * PI * t).powf(-0.25 * d as f64)
}

/// `(‖u₀‖₂^{-4/d} + (4/d)·C_Nash^{-1}·‖u₀‖₁^{-4/d}·t)^{-d/4}`.
pub fn nash_envelope(t: f64, l2_0: f64, l1_0: f64, d: usize) -> Result<f64> {
    nash_envelope_with(t, l2_0, l1_0, d, nash_constant(d as f64)?)
}

fn nash_envelope_with(t: f64, l2_0: f64, l1_0: f64, d: usize, c_nash: f64) -> Result<f64> {
    if !(l2_0 > 0.0 && l1_0 > 0.0) {
        return Err(domain("nash_envelope", "initial norms must be positive"));
    }
    if !(t >= 0.0) {
        return Err(domain(
            "nash_envelope",
            format!("t = {t} must be nonnegative"),
        ));
    }
    let df = d as f64;
    let q = 4.0 / df;
    let base = l2_0.powf(-q) + q / c_nash * l1_0.powf(-q) * t;
    Ok(base.powf(-0.25 * df))
}

/// `(8πt)^{-d/4}·‖u₀‖₁`; infinite at `t = 0`.
pub fn young_envelope(t: f64, l1_0: f64, d: usize) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(domain(
            "young_envelope",
            format!("t = {t} must be nonnegative"),
        ));
    }
    if !(l1_0 >= 0.0) {
        return Err(domain("young_envelope", "initial mass must be nonnegative"));
    }
    if l1_0 == 0.0 {
        return Ok(0.0);
    }
    if t == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(heat_kernel_l2(t, d) * l1_0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecaySample {
    pub t: f64,
    pub l2: f64,
    pub nash_env: f64,
    pub young_env: f64,
}

impl DecaySample {
    pub fn min_envelope(&self) -> f64 {
        self.nash_env.min(self.young_env)
    }

    /// Relative excess of `l2` over the tighter envelope; nonpositive when valid.
    pub fn excess(&self) -> f64 {
        self.l2 / self.min_envelope() - 1.0
    }
}

/// `l2` non-increasing along the samples.
pub fn is_monotone_decay(samples: &[DecaySample]) -> bool {
    samples.windows(2).all(|w| w[1].l2 <= w[0].l2)
}

/// Heat flow of `u₀ = G(ε, ·)`, which is `G(t + ε, ·)`.
pub fn evolve_gaussian(eps: f64, t: f64, d: usize) -> Result<DecaySample> {
    if !(eps > 0.0) {
        return Err(domain(
            "evolve_gaussian",
            format!("ε = {eps} must be positive"),
        ));
    }
    let l2_0 = heat_kernel_l2(eps, d);
    Ok(DecaySample {
        t,
        l2: heat_kernel_l2(t + eps, d),
        nash_env: nash_envelope(t, l2_0, 1.0, d)?,
        young_env: young_envelope(t, 1.0, d)?,
    })
}

/// Even function sampled on the symmetric grid `x_j = -L + j·dx`, `j = 0..=n`.
#[derive(Clone, Debug)]
pub struct Field1d {
    pub dx: f64,
    pub values: Vec<f64>,
}

impl Field1d {
    /// Samples of a one-dimensional profile, `n` even. The spacing puts the
    /// support edge on a knot and is never below `2·half_width/n`, so the
    /// window covers at least `half_width` on each side.
    pub fn from_profile(u0: &RadialProfile, half_width: f64, n: usize) -> Result<Self> {
        if u0.d() != 1 {
            return Err(domain(
                "Field1d::from_profile",
                "profile must be one-dimensional",
            ));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(domain(
                "Field1d::from_profile",
                format!("n = {n} must be even and ≥ 4"),
            ));
        }
        let radius = u0.support_radius();
        if !(half_width > radius) {
            return Err(domain(
                "Field1d::from_profile",
                "half-width must exceed the support",
            ));
        }
        let nominal = 2.0 * half_width / n as f64;
        let dx = radius / (radius / nominal).floor().max(1.0);
        let half = n / 2;
        let values = (0..=n)
            .map(|j| u0.eval((j as f64 - half as f64) * dx))
            .collect();
        Ok(Field1d { dx, values })
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.values.len() - 1) as f64 * self.dx
    }

    fn trapezoid(&self, f: impl Fn(f64) -> f64) -> f64 {
        let n = self.values.len() - 1;
        let inner: f64 = self.values[1..n].iter().map(|&v| f(v)).sum();
        self.dx * (inner + 0.5 * (f(self.values[0]) + f(self.values[n])))
    }

    pub fn l1(&self) -> f64 {
        self.trapezoid(f64::abs)
    }

    pub fn l2(&self) -> f64 {
        self.trapezoid(|v| v * v).sqrt()
    }

    pub fn l2_distance(&self, other: &Field1d) -> f64 {
        let n = self.values.len() - 1;
        let sq = |j: usize| (self.values[j] - other.values[j]).powi(2);
        let inner: f64 = (1..n).map(sq).sum();
        (self.dx * (inner + 0.5 * (sq(0) + sq(n)))).sqrt()
    }

    /// `G(t, ·) ∗ u` by the trapezoid rule on the same grid. Mass carried past
    /// the window edge is dropped.
    pub fn evolve(&self, t: f64) -> Result<Field1d> {
        let n = self.values.len() - 1;
        let kernel: Vec<f64> = (0..=n)
            .map(|k| heat_kernel(t, k as f64 * self.dx, 1))
            .collect::<Result<_>>()?;
        let weights: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(j, &v)| if j == 0 || j == n { 0.5 * v } else { v } * self.dx)
            .collect();
        let values = (0..=n)
            .map(|i| {
                weights
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| **w != 0.0)
                    .map(|(j, w)| w * kernel[i.abs_diff(j)])
                    .sum()
            })
            .collect();
        Ok(Field1d {
            dx: self.dx,
            values,
        })
    }
}

/// Fraction of a point mass at the support edge carried beyond the window.
fn escaped_fraction(gap: f64, t: f64) -> f64 {
    libm::erfc(gap / (2.0 * t.sqrt()))
}

/// Heat flow of a one-dimensional profile by quadrature convolution.
pub fn evolve_convolution_1d(
    u0: &RadialProfile,
    t: f64,
    half_width: f64,
    n: usize,
) -> Result<DecaySample> {
    if !(t > 0.0) {
        return Err(domain(
            "evolve_convolution_1d",
            format!("t = {t} must be positive"),
        ));
    }
    let radius = u0.support_radius();
    if half_width < radius + 6.0 * t.sqrt() {
        return Err(domain(
            "evolve_convolution_1d",
            format!("half-width {half_width} below R + 6√t"),
        ));
    }
    let field = Field1d::from_profile(u0, half_width, n)?;
    let tail = escaped_fraction(field.half_width() - radius, t);
    if tail > 1e-10 {
        return Err(Error::InsufficientWindow { tail, limit: 1e-10 });
    }
    let norms = norm_triple(u0, 1.0)?;
    let (l1_0, l2_0) = (norms.lp, norms.l2.sqrt());
    Ok(DecaySample {
        t,
        l2: field.evolve(t)?.l2(),
        nash_env: nash_envelope(t, l2_0, l1_0, 1)?,
        young_env: young_envelope(t, l1_0, 1)?,
    })
}

/// Half-width with escaped tail mass below `1e-10` for times up to `t_max`.
pub fn default_half_width(radius: f64, t_max: f64) -> f64 {
    radius + 10.0 * t_max.sqrt()
}

/// Comparison at `t = 0` of the decay rate `2‖∇u₀‖₂²` of `‖u‖₂²` with the
/// rate `2·C_Nash^{-1}·‖u₀‖₁^{-4/d}·‖u₀‖₂^{2+4/d}` of the squared envelope.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct T0Report {
    pub d: usize,
    pub decay_rate: f64,
    pub envelope_rate: f64,
    /// `envelope_rate / decay_rate`, the Nash quotient over `C_Nash`.
    pub ratio: f64,
    /// `1 - ratio`, nonnegative by Nash's inequality.
    pub gap: f64,
}

pub fn t0_sharpness_for(u0: &RadialProfile) -> Result<T0Report> {
    let d = u0.d();
    let df = d as f64;
    let t = norm_triple(u0, 1.0)?;
    let c = nash_constant(df)?;
    let decay_rate = 2.0 * t.grad;
    let envelope_rate = 2.0 / c * t.lp.powf(-4.0 / df) * t.l2.powf(1.0 + 2.0 / df);
    let ratio = envelope_rate / decay_rate;
    Ok(T0Report {
        d,
        decay_rate,
        envelope_rate,
        ratio,
        gap: 1.0 - ratio,
    })
}

/// Scaled optimizer `1 - φ₁(r/√λ₁)` on the ball of radius `√λ₁`.
pub fn scaled_optimizer(d: usize, n_knots: usize) -> Result<RadialProfile> {
    let r1 = spectral_data(d as f64)?.r1;
    optimal_profile(d, n_knots)?.dilated(1.0 / r1)
}

/// [`t0_sharpness_for`] on the scaled optimizer.
pub fn t0_sharpness_check(d: usize) -> Result<T0Report> {
    if !(1..=3).contains(&d) {
        return Err(domain(
            "t0_sharpness_check",
            format!("d = {d} outside 1..=3"),
        ));
    }
    t0_sharpness_for(&scaled_optimizer(d, 8193)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    Nash,
    Young,
}

/// Crossing time of the two envelopes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Crossover {
    pub t_star: f64,
    /// Envelope giving the smaller bound for `t < t*`.
    pub tighter_before: Envelope,
    /// Envelope giving the smaller bound for `t > t*`.
    pub tighter_after: Envelope,
}

/// Unique `t*` with `nash_envelope = young_envelope`, by bisection in `ln t`.
pub fn crossover(d: usize, l1_0: f64, l2_0: f64) -> Result<Crossover> {
    if !(l1_0 > 0.0 && l2_0 > 0.0) {
        return Err(domain("crossover", "initial norms must be positive"));
    }
    let c = nash_constant(d as f64)?;
    let gap = |t: f64| -> Result<f64> {
        Ok(nash_envelope_with(t, l2_0, l1_0, d, c)?.ln() - young_envelope(t, l1_0, d)?.ln())
    };
    let scale = (l1_0 / l2_0).powf(4.0 / d as f64);
    let (mut lo, mut hi) = ((1e-12 * scale).ln(), (1e12 * scale).ln());
    let (g_lo, g_hi) = (gap(lo.exp())?, gap(hi.exp())?);
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoCrossing {
            lo: lo.exp(),
            hi: hi.exp(),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid.exp())?.signum() == g_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tighter = |g: f64| {
        if g < 0.0 {
            Envelope::Nash
        } else {
            Envelope::Young
        }
    };
    Ok(Crossover {
        t_star: (0.5 * (lo + hi)).exp(),
        tighter_before: tighter(g_lo),
        tighter_after: tighter(g_hi),
    })
}

/// `8π - 4/(d·C_Nash)`, positive exactly when `1/(2πd) < C_Nash`.
pub fn gaussian_gap(d: usize) -> Result<f64> {
    Ok(8.0 * PI - 4.0 / (d as f64 * nash_constant(d as f64)?))
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn crossover_respects_scaling(
            d in 1usize..=6,
            l1 in 1e-2f64..1e2,
            l2 in 1e-2f64..1e2,
            c in 1e-2f64..1e2,
            sigma in 0.1f64..10.0,
        ) {
            let base = crossover(d, l1, l2).unwrap();
            let amp = crossover(d, c * l1, c * l2).unwrap();
            prop_assert!((amp.t_star / base.t_star - 1.0).abs() <= 1e-9);
            // u(x/σ): ‖u‖₁ gains σ^d, ‖u‖₂ gains σ^{d/2}, time scales as σ²
            let dd = d as f64;
            let dil = crossover(d, sigma.powf(dd) * l1, sigma.powf(0.5 * dd) * l2).unwrap();
            prop_assert!((dil.t_star / (sigma * sigma * base.t_star) - 1.0).abs() <= 1e-9);
            prop_assert_eq!(base.tighter_before, Envelope::Nash);
            prop_assert_eq!(base.tighter_after, Envelope::Young);
        }
    }
}
