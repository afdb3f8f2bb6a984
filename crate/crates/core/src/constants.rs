//! Optimal and comparison constants.
//!
//! Conventions: `C_Nash` is the supremum of the Nash quotient, `C_GN(p)` the
//! infimum of the Gagliardo-Nirenberg quotient. The two are related by
//! `C_GN(p) ≤ C_Nash^{-a/(a+b)}` with equality in the limit `p → 1`.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{domain, Result};
use crate::shooting::shoot;
use crate::specfun::{check_dim, gamma, nash_constant_from, spectral_data};

/// `a = d(2-p)`, `b = 2p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentPair {
    pub a: f64,
    pub b: f64,
}

impl ExponentPair {
    /// `a/(a+b)`, the power of `C_Nash^{-1}` bounding `C_GN`.
    pub fn holder(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    /// `b/(a+b)`, the power of `λ` in the scaling relation.
    pub fn scaling(&self) -> f64 {
        self.b / (self.a + self.b)
    }
}

pub fn exponents(p: f64, d: f64) -> ExponentPair {
    ExponentPair {
        a: d * (2.0 - p),
        b: 2.0 * p,
    }
}

/// `C_GN(p) = Q_p[u_p]` from a certified shooting solve.
pub fn cgn(p: f64, d: usize, tol: f64) -> Result<f64> {
    shoot(p, d, tol)?.cgn()
}

/// Scaling relation `K_GN(p, λ)` for a known `C_GN(p)`.
pub fn kgn(p: f64, lambda: f64, d: usize, c_gn: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(domain("kgn", format!("λ = {lambda} must be positive")));
    }
    if !(1.0..2.0).contains(&p) {
        return Err(domain("kgn", format!("p = {p} outside [1, 2)")));
    }
    let e = exponents(p, d as f64);
    let (ta, tb) = (e.holder(), e.scaling());
    let prefactor = (e.a + e.b) / (e.a.powf(ta) * e.b.powf(tb));
    Ok(prefactor * lambda.powf(tb) * c_gn)
}

/// Sharp Sobolev constant, `d > 2`.
pub fn sobolev_constant(d: f64) -> Result<f64> {
    if !(d > 2.0) || !d.is_finite() {
        return Err(domain("sobolev_constant", format!("d = {d} must exceed 2")));
    }
    let ratio = gamma(d)? / gamma(0.5 * d)?;
    Ok(ratio.powf(2.0 / d) / (d * (d - 2.0) * PI))
}

/// Upper bound through the logarithmic Sobolev inequality.
pub fn c1_bound(d: f64) -> Result<f64> {
    check_dim("c1_bound", d)?;
    Ok(2.0 / (PI * d * E))
}

/// Upper bound through the Fourier split.
pub fn c2_bound(d: f64) -> Result<f64> {
    check_dim("c2_bound", d)?;
    let q = 1.0 + 2.0 / d;
    Ok(((d + 2.0) / d).powf(q) * gamma(0.5 * d)?.powf(-2.0 / d) / (4.0 * PI))
}

/// Nash quotient of the heat kernel, a lower bound for `C_Nash`.
pub fn gaussian_lower(d: f64) -> f64 {
    1.0 / (2.0 * PI * d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantsRow {
    pub d: f64,
    pub lambda1: f64,
    pub c_nash: f64,
    pub c1: f64,
    pub c2: f64,
    pub sobolev: Option<f64>,
    pub gaussian_lower: f64,
}

impl ConstantsRow {
    pub fn min_upper(&self) -> f64 {
        let m = self.c1.min(self.c2);
        self.sobolev.map_or(m, |s| m.min(s))
    }

    /// `1/(2πd) < C_Nash ≤ min(C₁, C₂[, S_d])`.
    pub fn ordering_holds(&self) -> bool {
        self.gaussian_lower < self.c_nash && self.c_nash <= self.min_upper()
    }
}

pub fn constants_row(d: f64) -> Result<ConstantsRow> {
    let spec = spectral_data(d)?;
    Ok(ConstantsRow {
        d,
        lambda1: spec.lambda1,
        c_nash: nash_constant_from(d, spec.lambda1),
        c1: c1_bound(d)?,
        c2: c2_bound(d)?,
        sobolev: if d > 2.0 {
            Some(sobolev_constant(d)?)
        } else {
            None
        },
        gaussian_lower: gaussian_lower(d),
    })
}

/// `n` rows on the uniform grid `d_min..=d_max`; a single row sits at `d_min`.
pub fn figure_data(d_min: f64, d_max: f64, n: usize) -> Result<Vec<ConstantsRow>> {
    if n == 0 {
        return Err(domain("figure_data", "need at least one row"));
    }
    if !(d_min <= d_max) {
        return Err(domain(
            "figure_data",
            format!("empty range [{d_min}, {d_max}]"),
        ));
    }
    check_dim("figure_data", d_min)?;
    check_dim("figure_data", d_max)?;
    if n == 1 {
        return Ok(vec![constants_row(d_min)?]);
    }
    let span = d_max - d_min;
    (0..n)
        .map(|i| {
            let d = if i == n - 1 {
                d_max
            } else {
                d_min + span * i as f64 / (n - 1) as f64
            };
            constants_row(d)
        })
        .collect()
}
