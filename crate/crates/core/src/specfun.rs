//! Special functions behind the spectral characterization of the sharp Nash
//! constant: Gamma, unit-ball volume, Bessel `J_α` and its first zero, the
//! radial Neumann eigenfunction of the unit ball, and the optimal profile.
//!
//! `J_α` is evaluated from its ascending series. For the arguments used here
//! (`z ≲ 40`) the alternating terms grow up to `~e^z` before they cancel, so
//! the series is summed in double-double arithmetic and only the final
//! result is rounded to `f64`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::radial::RadialProfile;

/// Maximum number of series terms.
const MAX_TERMS: usize = 200;

mod dd {
    //! Minimal double-double arithmetic (hi + lo, |lo| ≤ ulp(hi)/2).

    #[derive(Clone, Copy, Debug)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    #[inline]
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        (s, err)
    }

    #[inline]
    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    #[inline]
    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    impl Dd {
        pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

        pub fn new(x: f64) -> Self {
            Dd { hi: x, lo: 0.0 }
        }

        pub fn exact_sum(a: f64, b: f64) -> Self {
            let (hi, lo) = two_sum(a, b);
            Dd { hi, lo }
        }

        pub fn exact_prod(a: f64, b: f64) -> Self {
            let (hi, lo) = two_prod(a, b);
            Dd { hi, lo }
        }

        pub fn add(self, o: Dd) -> Dd {
            let (s, e) = two_sum(self.hi, o.hi);
            let (t, f) = two_sum(self.lo, o.lo);
            let (s, e) = quick_two_sum(s, e + t);
            let (hi, lo) = quick_two_sum(s, e + f);
            Dd { hi, lo }
        }

        pub fn neg(self) -> Dd {
            Dd {
                hi: -self.hi,
                lo: -self.lo,
            }
        }

        pub fn mul(self, o: Dd) -> Dd {
            let (p, e) = two_prod(self.hi, o.hi);
            let e = e + (self.hi * o.lo + self.lo * o.hi);
            let (hi, lo) = quick_two_sum(p, e);
            Dd { hi, lo }
        }

        pub fn mul_f64(self, b: f64) -> Dd {
            let (p, e) = two_prod(self.hi, b);
            let e = e + self.lo * b;
            let (hi, lo) = quick_two_sum(p, e);
            Dd { hi, lo }
        }

        pub fn div(self, o: Dd) -> Dd {
            let q1 = self.hi / o.hi;
            let r = self.add(o.mul_f64(q1).neg());
            let q2 = r.hi / o.hi;
            let r = r.add(o.mul_f64(q2).neg());
            let q3 = r.hi / o.hi;
            let (hi, lo) = quick_two_sum(q1, q2);
            Dd { hi, lo }.add(Dd::new(q3))
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }

        pub fn abs_hi(self) -> f64 {
            self.hi.abs()
        }
    }
}

use dd::Dd;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler Gamma function for `x > 0` (Lanczos, g = 7).
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("gamma", format!("x = {x} must be positive")));
    }
    if x < 0.5 {
        // reflection keeps the Lanczos sum on its accurate half-line
        let g = gamma(1.0 - x)?;
        return Ok(PI / ((PI * x).sin() * g));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power so that t^(x+1/2) cannot overflow before e^-t damps it
    let half = 0.5 * (x + 0.5);
    let pw = t.powf(half);
    Ok((2.0 * PI).sqrt() * pw * (-t).exp() * pw * a)
}

/// Volume of the unit ball in `ℝ^d`, `π^{d/2} / Γ(d/2 + 1)`; `d` may be real.
pub fn ball_volume(d: f64) -> f64 {
    PI.powf(0.5 * d) / gamma(0.5 * d + 1.0).expect("d/2 + 1 > 0")
}

/// Surface measure of the unit sphere, `d·ω_d`.
pub fn sphere_area(d: f64) -> f64 {
    d * ball_volume(d)
}

fn check_order(op: &'static str, alpha: f64) -> Result<()> {
    if !(alpha >= -0.5) || !alpha.is_finite() {
        return Err(domain(op, format!("order {alpha} < -1/2")));
    }
    Ok(())
}

/// The entire function `g_α(x) = Γ(α+1)·(x/2)^{-α}·J_α(x)` and its first two
/// derivatives.
///
/// `g_α(x) = Σ_m (-x²/4)^m / (m!·(α+1)_m)`, so `g_α(0) = 1` and the
/// derivatives follow from term-by-term differentiation.
pub fn reduced_bessel(alpha: f64, x: f64) -> Result<[f64; 3]> {
    check_order("reduced_bessel", alpha)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(
            "reduced_bessel",
            format!("argument {x} must be ≥ 0"),
        ));
    }
    if x == 0.0 {
        return Ok([1.0, 0.0, -0.5 / (alpha + 1.0)]);
    }
    let half = 0.5 * x;
    let q = Dd::exact_prod(half, half);
    let mut term = Dd::new(1.0);
    let mut s0 = Dd::new(1.0);
    let mut s1 = Dd::ZERO;
    let mut s2 = Dd::ZERO;
    let mut peak = 1.0_f64;
    for m in 0..MAX_TERMS {
        let m1 = (m + 1) as f64;
        let denom = Dd::new(m1).mul(Dd::exact_sum(m1, alpha));
        term = term.mul(q).div(denom).neg();
        s0 = s0.add(term);
        s1 = s1.add(term.mul_f64(m1));
        s2 = s2.add(term.mul_f64(m1 * (2.0 * m1 - 1.0)));
        let mag = term.abs_hi();
        peak = peak.max(mag);
        let past_peak = q.hi < (m1 + 1.0) * (m1 + 1.0 + alpha);
        if past_peak && mag <= 1e-34 * peak {
            break;
        }
    }
    let g = s0.to_f64();
    let g1 = 2.0 * s1.to_f64() / x;
    let g2 = 2.0 * s2.to_f64() / (x * x);
    Ok([g, g1, g2])
}

/// Bessel function of the first kind `J_α(z)`, `α ≥ -1/2`, `z ≥ 0`.
pub fn bessel_j(alpha: f64, z: f64) -> Result<f64> {
    Ok(bessel_j_derivs(alpha, z)?[0])
}

/// `J_α'(z)` by term-by-term differentiation of the series.
pub fn bessel_j_prime(alpha: f64, z: f64) -> Result<f64> {
    Ok(bessel_j_derivs(alpha, z)?[1])
}

/// `[J_α(z), J_α'(z), J_α''(z)]`.
pub fn bessel_j_derivs(alpha: f64, z: f64) -> Result<[f64; 3]> {
    check_order("bessel_j", alpha)?;
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain("bessel_j", format!("negative argument z = {z}")));
    }
    let [g, g1, g2] = reduced_bessel(alpha, z)?;
    let pre = (0.5 * z).powf(alpha) / gamma(alpha + 1.0)?;
    if z == 0.0 {
        // J_0(0) = 1, J_α(0) = 0 for α > 0; derivatives only needed for z > 0
        let d1 = if alpha == 1.0 { 0.5 } else { 0.0 };
        return Ok([pre * g, d1, 0.0]);
    }
    let pre1 = alpha / z * pre;
    let pre2 = alpha * (alpha - 1.0) / (z * z) * pre;
    Ok([
        pre * g,
        pre1 * g + pre * g1,
        pre2 * g + 2.0 * pre1 * g1 + pre * g2,
    ])
}

/// Smallest positive zero of `J_α` for `α ∈ [-1/2, 30]`.
///
/// Scans `[max(α, 0.5), α + 10]` in steps of 0.1 for the first sign change
/// and refines it with 80 bisection steps.
pub fn bessel_first_zero(alpha: f64) -> Result<f64> {
    check_order("bessel_first_zero", alpha)?;
    if alpha > 30.0 {
        return Err(domain("bessel_first_zero", format!("order {alpha} > 30")));
    }
    // g_α has the sign of J_α on z > 0
    let f = |z: f64| reduced_bessel(alpha, z).map(|v| v[0]);
    let lo = alpha.max(0.5);
    let hi = alpha + 10.0;
    let steps = ((hi - lo) / 0.1).ceil() as usize;
    let mut a = lo;
    let mut fa = f(a)?;
    for i in 1..=steps {
        let b = (lo + 0.1 * i as f64).min(hi);
        let fb = f(b)?;
        if fb == 0.0 {
            return Ok(b);
        }
        if fa.signum() != fb.signum() {
            return bisect(a, b, fa, &f);
        }
        a = b;
        fa = fb;
    }
    Err(Error::NoSignChange { alpha, lo, hi })
}

fn bisect(mut a: f64, mut b: f64, mut fa: f64, f: &impl Fn(f64) -> Result<f64>) -> Result<f64> {
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Neumann spectral data of the unit ball in dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralData {
    pub d: f64,
    /// First positive zero of `J_{d/2}`.
    pub z: f64,
    /// Principal nonzero Neumann eigenvalue, `z²`.
    pub lambda1: f64,
    /// `√λ₁`, the support radius of the limiting profile.
    pub r1: f64,
}

/// `λ₁ = z_{d/2}²` for real `d ≥ 1`.
pub fn spectral_data(d: f64) -> Result<SpectralData> {
    check_dim("spectral_data", d)?;
    let z = bessel_first_zero(0.5 * d)?;
    Ok(SpectralData {
        d,
        z,
        lambda1: z * z,
        r1: z,
    })
}

pub(crate) fn check_dim(op: &'static str, d: f64) -> Result<()> {
    if !(d >= 1.0) || !d.is_finite() {
        return Err(domain(op, format!("dimension {d} < 1")));
    }
    Ok(())
}

/// Radial Neumann eigenfunction `φ₁` on the unit ball, normalized by `φ₁(1) = 1`.
///
/// `φ₁(r) = r^{-α}J_α(√λ₁ r) / J_α(√λ₁)` with `α = (d-2)/2`, evaluated as
/// `g_α(√λ₁ r) / g_α(√λ₁)`; the quotient is an even power series in `r`, so
/// the center needs no special treatment.
#[derive(Clone, Copy, Debug)]
pub struct Eigenfunction {
    pub d: usize,
    pub alpha: f64,
    pub spectral: SpectralData,
    norm: f64,
}

impl Eigenfunction {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(domain("eigenfunction_phi1", "d must be ≥ 1"));
        }
        let spectral = spectral_data(d as f64)?;
        let alpha = 0.5 * (d as f64 - 2.0);
        let norm = reduced_bessel(alpha, spectral.r1)?[0];
        Ok(Eigenfunction {
            d,
            alpha,
            spectral,
            norm,
        })
    }

    pub fn lambda1(&self) -> f64 {
        self.spectral.lambda1
    }

    /// `[φ₁(r), φ₁'(r), φ₁''(r)]` for `r ∈ [0, 1]`.
    pub fn derivs(&self, r: f64) -> Result<[f64; 3]> {
        if !(0.0..=1.0).contains(&r) {
            return Err(domain(
                "eigenfunction_phi1",
                format!("r = {r} outside [0, 1]"),
            ));
        }
        let k = self.spectral.r1;
        let [g, g1, g2] = reduced_bessel(self.alpha, k * r)?;
        Ok([g / self.norm, k * g1 / self.norm, k * k * g2 / self.norm])
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(self.derivs(r)?[0])
    }
}

/// `φ₁(r)` in integer dimension `d`.
pub fn eigenfunction_phi1(d: usize, r: f64) -> Result<f64> {
    Eigenfunction::new(d)?.value(r)
}

/// The optimal Nash profile `ū = 1 - φ₁` on `[0, 1]`, zero outside.
pub fn optimal_profile(d: usize, n_knots: usize) -> Result<RadialProfile> {
    if n_knots < 16 {
        return Err(domain(
            "optimal_profile",
            format!("n_knots = {n_knots} < 16"),
        ));
    }
    let phi = Eigenfunction::new(d)?;
    let n = n_knots - 1;
    let mut values = Vec::with_capacity(n_knots);
    let mut slopes = Vec::with_capacity(n_knots);
    for i in 0..=n {
        let r = i as f64 / n as f64;
        let [v, dv, _] = phi.derivs(r)?;
        values.push(1.0 - v);
        slopes.push(-dv);
    }
    // the boundary value is exact by construction
    values[n] = 0.0;
    slopes[n] = 0.0;
    RadialProfile::uniform(d, 1.0, values, Some(slopes))
}

/// Sharp constant in Nash's inequality,
/// `C = (d+2)^{1+2/d} / (d·λ₁·(2ω_d)^{2/d})`, for real `d ≥ 1`.
pub fn nash_constant(d: f64) -> Result<f64> {
    check_dim("nash_constant", d)?;
    let lambda1 = spectral_data(d)?.lambda1;
    Ok(nash_constant_from(d, lambda1))
}

pub(crate) fn nash_constant_from(d: f64, lambda1: f64) -> f64 {
    (d + 2.0).powf(1.0 + 2.0 / d) / (d * lambda1 * (2.0 * ball_volume(d)).powf(2.0 / d))
}
