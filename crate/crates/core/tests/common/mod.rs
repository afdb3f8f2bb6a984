//! Independent reference computations for the integration tests. Nothing
//! here calls into the library's numerical routines.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `Σ (-x²/4)^m / (m!·(ν+1)_m)`, which has the sign of `J_ν(x)` for `x > 0`.
pub fn bessel_shape(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let (mut term, mut sum) = (1.0f64, 1.0f64);
    for m in 1..400 {
        term *= q / (m as f64 * (nu + m as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) && m > 10 {
            break;
        }
    }
    sum
}

/// First positive zero of `J_ν` by scanning and bisecting the series.
pub fn bessel_zero(nu: f64) -> f64 {
    let (mut lo, mut hi) = (0.5f64, 0.5f64);
    while bessel_shape(nu, hi) > 0.0 {
        lo = hi;
        hi += 0.05;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bessel_shape(nu, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Tanh-sinh rule on `[0, 1]` for integrands given the distances to both
/// endpoints, so that endpoint singularities are evaluated without
/// cancellation.
pub fn tanh_sinh(f: impl Fn(f64, f64) -> f64) -> f64 {
    let h = 1.0 / 256.0;
    let mut sum = 0.0;
    for k in -1536i32..=1536 {
        let t = k as f64 * h;
        let s = 0.5 * PI * t.sinh();
        let w = 0.5 * PI * t.cosh() / s.cosh().powi(2);
        // x = (1 + tanh s)/2, 1 - x = (1 - tanh s)/2
        let x = 1.0 / (1.0 + (-2.0 * s).exp());
        let y = 1.0 / (1.0 + (2.0 * s).exp());
        if x <= 0.0 || y <= 0.0 || w == 0.0 {
            continue;
        }
        sum += 0.5 * w * f(x, y);
    }
    h * sum
}

/// Center value of the one-dimensional ground state: zero energy in
/// `½u'² = ½u² - u^p/p` at `u' = 0`.
pub fn center_1d(p: f64) -> f64 {
    (2.0 / p).powf(1.0 / (2.0 - p))
}

/// `∫₀^h du / √(2u^p/p - u²)`, the time the zero-energy orbit needs to
/// travel from the center value to 0.
pub fn support_radius_1d(p: f64) -> f64 {
    let h = center_1d(p);
    tanh_sinh(|x, y| {
        // u = h·x, h - u = h·y; 2u^p/p - u² = u²·((u/h)^{p-2} - 1)
        let u = h * x;
        let bracket = if x < 0.5 {
            x.powf(p - 2.0) - 1.0
        } else {
            ((p - 2.0) * (-y).ln_1p()).exp_m1()
        };
        h / (u * bracket.sqrt())
    })
}

/// `(u, u')` of the one-dimensional ground state `h·cos^k(r/k)`, `k = 2/(2-p)`.
pub fn ground_state_1d(p: f64, r: f64) -> (f64, f64) {
    let k = 2.0 / (2.0 - p);
    let h = center_1d(p);
    if r >= 0.5 * PI * k {
        return (0.0, 0.0);
    }
    let c = (r / k).cos();
    let s = (r / k).sin();
    (h * c.powf(k), -h * c.powf(k - 1.0) * s)
}

/// Reference values (50-digit arithmetic, rounded).
pub const Z_HALF_3: f64 = 4.493_409_457_909_064;
pub const LAMBDA1_D2: f64 = 14.681_970_642_123_893;
pub const LAMBDA1_D3: f64 = 20.190_728_556_426_63;
