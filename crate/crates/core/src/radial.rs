//! Sampled radial functions on `ℝ^d`, their norms, and the Nash and
//! Gagliardo-Nirenberg quotients.
//!
//! Profiles live on a uniform half-line grid `0 = r_0 < … < r_n = R`. Every
//! full-space integral is `d·ω_d·∫₀^R f(r) r^{d-1} dr`; the radial integral is
//! computed by integrating, on each cell, the cubic through the four nearest
//! knots against the exact weight `r^{d-1}`. The rule is exact whenever the
//! sampled function is a cubic in `r`, for every `d`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::specfun::sphere_area;

/// Uniform radial grid with `n` cells on `[0, radius]` in dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialGrid {
    d: usize,
    radius: f64,
    cells: usize,
}

impl RadialGrid {
    pub fn new(d: usize, radius: f64, cells: usize) -> Result<Self> {
        if d == 0 {
            return Err(domain("radial_grid", "d must be ≥ 1"));
        }
        if cells == 0 {
            return Err(Error::DegenerateProfile("fewer than 2 knots".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(domain(
                "radial_grid",
                format!("radius {radius} must be positive"),
            ));
        }
        Ok(RadialGrid { d, radius, cells })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.radius / self.cells as f64
    }

    pub fn knot(&self, i: usize) -> f64 {
        if i == self.cells {
            self.radius
        } else {
            self.radius * i as f64 / self.cells as f64
        }
    }

    pub fn knots(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.cells).map(move |i| self.knot(i))
    }

    /// Stencil start and local node offsets for cell `i`.
    fn stencil(&self, i: usize) -> (usize, Stencil) {
        let n = self.cells;
        let m = n.min(3);
        let start = i.saturating_sub(1).min(n - m);
        (start, Stencil::new(start as i64 - i as i64, m + 1))
    }

    /// `∫_{r_i + a·h}^{r_i + b·h} f(r) r^{d-1} dr` contributions of the stencil
    /// nodes of cell `i`, with `0 ≤ a ≤ b ≤ 1`.
    fn cell_weights(&self, i: usize, a: f64, b: f64, out: &mut [f64]) -> usize {
        let (start, st) = self.stencil(i);
        let h = self.spacing();
        let e = self.d - 1;
        let hd = h.powi(self.d as i32);
        let base = i as f64;
        for (q, w) in out.iter_mut().enumerate().take(st.len) {
            // (i + s)^e = Σ_k C(e,k) i^{e-k} s^k
            let mut acc = 0.0;
            let mut binom = 1.0;
            for k in 0..=e {
                let mut mom = 0.0;
                for (p, c) in st.coeffs[q].iter().enumerate().take(st.len) {
                    let pw = (p + k + 1) as i32;
                    mom += c * (b.powi(pw) - a.powi(pw)) / pw as f64;
                }
                acc += binom * base.powi((e - k) as i32) * mom;
                binom = binom * (e - k) as f64 / (k + 1) as f64;
            }
            *w = acc * hd;
        }
        start
    }

    /// Weights `w_i` with `Σ w_i f(r_i) ≈ ∫₀^R f(r) r^{d-1} dr`.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.len()];
        let mut cw = [0.0; 4];
        for i in 0..self.cells {
            let start = self.cell_weights(i, 0.0, 1.0, &mut cw);
            let len = self.cells.min(3) + 1;
            for q in 0..len {
                w[start + q] += cw[q];
            }
        }
        w
    }

    /// Full-space integral `d·ω_d·∫₀^R f r^{d-1} dr` of knot samples.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.len());
        let w = self.weights();
        sphere_area(self.d as f64) * w.iter().zip(f).map(|(w, f)| w * f).sum::<f64>()
    }

    /// Full-space integral over the shell `lo ≤ |x| ≤ hi` (clamped to the grid).
    pub fn integrate_range(&self, f: &[f64], lo: f64, hi: f64) -> f64 {
        debug_assert_eq!(f.len(), self.len());
        let h = self.spacing();
        let lo = lo.max(0.0);
        let hi = hi.min(self.radius);
        if hi <= lo {
            return 0.0;
        }
        let first = ((lo / h).floor() as usize).min(self.cells - 1);
        let last = ((hi / h).ceil() as usize).clamp(first + 1, self.cells);
        let len = self.cells.min(3) + 1;
        let mut cw = [0.0; 4];
        let mut acc = 0.0;
        for i in first..last {
            let r0 = self.knot(i);
            let a = ((lo - r0) / h).clamp(0.0, 1.0);
            let b = ((hi - r0) / h).clamp(0.0, 1.0);
            if b <= a {
                continue;
            }
            let start = self.cell_weights(i, a, b, &mut cw);
            for q in 0..len {
                acc += cw[q] * f[start + q];
            }
        }
        sphere_area(self.d as f64) * acc
    }
}

/// Lagrange basis on integer node offsets, as monomial coefficients in the
/// local cell coordinate `s ∈ [0, 1]`.
struct Stencil {
    len: usize,
    coeffs: [[f64; 4]; 4],
}

impl Stencil {
    fn new(first_offset: i64, len: usize) -> Self {
        let nodes: Vec<f64> = (0..len).map(|j| (first_offset + j as i64) as f64).collect();
        let mut coeffs = [[0.0; 4]; 4];
        for q in 0..len {
            let mut poly = [0.0; 4];
            poly[0] = 1.0;
            let mut deg = 0;
            let mut denom = 1.0;
            for (l, &x) in nodes.iter().enumerate() {
                if l == q {
                    continue;
                }
                // poly *= (s - x)
                for k in (0..=deg).rev() {
                    poly[k + 1] += poly[k];
                    poly[k] *= -x;
                }
                deg += 1;
                denom *= nodes[q] - x;
            }
            for k in 0..len {
                coeffs[q][k] = poly[k] / denom;
            }
        }
        Stencil { len, coeffs }
    }
}

/// A nonnegative radial function sampled on a uniform grid.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    grid: RadialGrid,
    values: Vec<f64>,
    slopes: Option<Vec<f64>>,
}

impl RadialProfile {
    /// Profile on `[0, radius]` with `values.len()` uniform knots.
    pub fn uniform(
        d: usize,
        radius: f64,
        values: Vec<f64>,
        slopes: Option<Vec<f64>>,
    ) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::DegenerateProfile("fewer than 2 knots".into()));
        }
        let grid = RadialGrid::new(d, radius, values.len() - 1)?;
        Self::on_grid(grid, values, slopes)
    }

    pub fn on_grid(grid: RadialGrid, values: Vec<f64>, slopes: Option<Vec<f64>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidProfile(format!(
                "{} values for {} knots",
                values.len(),
                grid.len()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidProfile(format!("value {v} at knot {i}")));
        }
        if let Some(s) = &slopes {
            if s.len() != values.len() || s.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidProfile("slopes do not match knots".into()));
            }
        }
        Ok(RadialProfile {
            grid,
            values,
            slopes,
        })
    }

    /// Profile from explicit knots, which must start at 0 and be uniform.
    pub fn from_knots(
        d: usize,
        knots: &[f64],
        values: Vec<f64>,
        slopes: Option<Vec<f64>>,
    ) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::DegenerateProfile("fewer than 2 knots".into()));
        }
        if knots[0] != 0.0 {
            return Err(Error::InvalidProfile(format!(
                "first knot {} ≠ 0",
                knots[0]
            )));
        }
        let radius = *knots.last().unwrap();
        let h = radius / (knots.len() - 1) as f64;
        for (i, w) in knots.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidProfile(format!(
                    "knots not increasing at {i}"
                )));
            }
            if ((w[1] - w[0]) - h).abs() > 1e-8 * h {
                return Err(Error::InvalidProfile(format!(
                    "non-uniform spacing at knot {i}"
                )));
            }
        }
        Self::uniform(d, radius, values, slopes)
    }

    /// Sample `f` (and optionally its derivative) on `n_knots` uniform knots.
    pub fn sample(
        d: usize,
        radius: f64,
        n_knots: usize,
        f: impl Fn(f64) -> f64,
        df: Option<&dyn Fn(f64) -> f64>,
    ) -> Result<Self> {
        if n_knots < 2 {
            return Err(Error::DegenerateProfile("fewer than 2 knots".into()));
        }
        let grid = RadialGrid::new(d, radius, n_knots - 1)?;
        let values = grid.knots().map(&f).collect();
        let slopes = df.map(|df| grid.knots().map(df).collect());
        Self::on_grid(grid, values, slopes)
    }

    pub fn d(&self) -> usize {
        self.grid.d
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn knots(&self) -> impl Iterator<Item = f64> + '_ {
        self.grid.knots()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support_radius(&self) -> f64 {
        self.grid.radius
    }

    pub fn has_slopes(&self) -> bool {
        self.slopes.is_some()
    }

    /// Stored slopes, or second-order finite differences when absent.
    pub fn slopes(&self) -> Vec<f64> {
        match &self.slopes {
            Some(s) => s.clone(),
            None => finite_difference(&self.values, self.grid.spacing()),
        }
    }

    /// Multiply the values (and slopes) by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| c * v).collect();
        let slopes = self
            .slopes
            .as_ref()
            .map(|s| s.iter().map(|v| c * v).collect());
        Self::on_grid(self.grid, values, slopes)
    }

    /// `x ↦ u(σ x)`: the same samples on a grid of radius `R/σ`.
    pub fn dilated(&self, sigma: f64) -> Result<Self> {
        let grid = RadialGrid::new(self.d(), self.grid.radius / sigma, self.grid.cells)?;
        let slopes = self
            .slopes
            .as_ref()
            .map(|s| s.iter().map(|v| sigma * v).collect());
        Self::on_grid(grid, self.values.clone(), slopes)
    }

    /// Interpolated value at radius `r`; zero beyond the last knot.
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        let n = self.grid.cells;
        if r > self.grid.radius {
            return 0.0;
        }
        let h = self.grid.spacing();
        let i = ((r / h).floor() as usize).min(n - 1);
        let s = (r - self.grid.knot(i)) / h;
        match &self.slopes {
            Some(dv) => {
                let (y0, y1) = (self.values[i], self.values[i + 1]);
                let (m0, m1) = (dv[i] * h, dv[i + 1] * h);
                let s2 = s * s;
                let s3 = s2 * s;
                (2.0 * s3 - 3.0 * s2 + 1.0) * y0
                    + (s3 - 2.0 * s2 + s) * m0
                    + (-2.0 * s3 + 3.0 * s2) * y1
                    + (s3 - s2) * m1
            }
            None => {
                let (start, st) = self.grid.stencil(i);
                let mut acc = 0.0;
                for q in 0..st.len {
                    let mut l = 0.0;
                    for k in (0..st.len).rev() {
                        l = l * s + st.coeffs[q][k];
                    }
                    acc += l * self.values[start + q];
                }
                acc
            }
        }
    }

    /// Full-space integral of `g(u)` over the support.
    pub fn integrate_fn(&self, g: impl Fn(f64) -> f64) -> f64 {
        let f: Vec<f64> = self.values.iter().map(|&u| g(u)).collect();
        self.grid.integrate(&f)
    }
}

fn finite_difference(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    if n == 2 {
        let s = (v[1] - v[0]) / h;
        return vec![s, s];
    }
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    out
}

/// `(‖∇u‖₂², ‖u‖_p^p, ‖u‖₂²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormTriple {
    pub grad: f64,
    pub lp: f64,
    pub l2: f64,
}

/// `‖u‖_q` on `ℝ^d`.
pub fn lp_norm(u: &RadialProfile, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(domain("lp_norm", format!("q = {q} < 1")));
    }
    Ok(u.integrate_fn(|v| v.powf(q)).powf(1.0 / q))
}

/// `‖∇u‖₂²`, from stored slopes or finite differences.
pub fn grad_l2_sq(u: &RadialProfile) -> Result<f64> {
    let s = u.slopes();
    let f: Vec<f64> = s.iter().map(|v| v * v).collect();
    Ok(u.grid.integrate(&f))
}

pub fn norm_triple(u: &RadialProfile, p: f64) -> Result<NormTriple> {
    if !(p >= 1.0) {
        return Err(domain("norm_triple", format!("p = {p} < 1")));
    }
    Ok(NormTriple {
        grad: grad_l2_sq(u)?,
        lp: u.integrate_fn(|v| v.powf(p)),
        l2: u.integrate_fn(|v| v * v),
    })
}

/// `‖u‖₂^{2+4/d} / (‖u‖₁^{4/d}·‖∇u‖₂²)`; bounded above by the sharp Nash constant.
pub fn nash_quotient(u: &RadialProfile) -> Result<f64> {
    let t = norm_triple(u, 1.0)?;
    nash_quotient_from(u.d() as f64, t.lp, t.l2, t.grad)
}

pub(crate) fn nash_quotient_from(d: f64, l1: f64, l2_sq: f64, grad: f64) -> Result<f64> {
    if !(l1 > 0.0) {
        return Err(Error::InvalidProfile("zero profile".into()));
    }
    if !(grad > 0.0) {
        return Err(Error::InvalidProfile("zero gradient".into()));
    }
    // M^{1+2/d} / (L1^{4/d} G), arranged to avoid overflow for large norms
    Ok(l2_sq * (l2_sq / (l1 * l1)).powf(2.0 / d) / grad)
}

/// Exponents `a = d(2-p)`, `b = 2p` of the Gagliardo-Nirenberg family.
pub fn gn_exponents(p: f64, d: f64) -> (f64, f64) {
    (d * (2.0 - p), 2.0 * p)
}

/// `Q_p[u] = ‖∇u‖₂^{2a/(a+b)}·‖u‖_p^{2b/(a+b)} / ‖u‖₂²`.
pub fn gn_quotient(u: &RadialProfile, p: f64) -> Result<f64> {
    if !(1.0..2.0).contains(&p) {
        return Err(domain("gn_quotient", format!("p = {p} outside [1, 2)")));
    }
    let t = norm_triple(u, p)?;
    gn_quotient_from(u.d() as f64, p, &t)
}

pub(crate) fn gn_quotient_from(d: f64, p: f64, t: &NormTriple) -> Result<f64> {
    if !(t.l2 > 0.0) {
        return Err(Error::InvalidProfile("zero profile".into()));
    }
    let (a, b) = gn_exponents(p, d);
    let s = a + b;
    // ‖u‖_p^{2b/(a+b)} = (‖u‖_p^p)^{2b/(p(a+b))}
    Ok(t.grad.powf(a / s) * t.lp.powf(2.0 * b / (p * s)) / t.l2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ball_volume;
    use std::f64::consts::PI;

    fn cos_bump(n: usize) -> RadialProfile {
        RadialProfile::sample(1, PI, n, |r| 1.0 + r.cos(), Some(&|r: f64| -r.sin())).unwrap()
    }

    #[test]
    fn cubic_moments_are_exact() {
        // ∫₀^R r^j r^{d-1} dr = R^{j+d}/(j+d)
        for d in 1..=6 {
            for cells in [3usize, 4, 7, 32] {
                let radius = 1.7;
                let g = RadialGrid::new(d, radius, cells).unwrap();
                let w = g.weights();
                for j in 0..=3 {
                    let got: f64 = g.knots().zip(&w).map(|(r, w)| w * r.powi(j)).sum();
                    let want = radius.powi(j + d as i32) / (j + d as i32) as f64;
                    assert!(((got - want) / want).abs() < 1e-12, "d={d} n={cells} j={j}");
                }
            }
        }
    }

    #[test]
    fn partial_range_is_exact_for_cubics() {
        let g = RadialGrid::new(3, 2.0, 40).unwrap();
        let f: Vec<f64> = g.knots().map(|r| 1.0 - r + r * r * r).collect();
        let prim = |r: f64| r.powi(3) / 3.0 - r.powi(4) / 4.0 + r.powi(6) / 6.0;
        let got = g.integrate_range(&f, 0.33, 1.61);
        let want = 4.0 * PI * (prim(1.61) - prim(0.33));
        assert!(((got - want) / want).abs() < 1e-12);
    }

    #[test]
    fn constant_on_ball() {
        for d in 1..=4 {
            let c = 2.5;
            let radius = 1.3;
            let u = RadialProfile::sample(d, radius, 33, |_| c, Some(&|_| 0.0)).unwrap();
            let want = c * ball_volume(d as f64) * radius.powi(d as i32);
            assert!((lp_norm(&u, 1.0).unwrap() - want).abs() < 1e-12 * want);
            assert_eq!(grad_l2_sq(&u).unwrap(), 0.0);
            assert!(nash_quotient(&u).is_err());
            let t = norm_triple(&u, 1.5).unwrap();
            let vol = ball_volume(d as f64) * radius.powi(d as i32);
            assert!((t.lp - c.powf(1.5) * vol).abs() < 1e-12 * t.lp);
            assert!((t.l2 - c * c * vol).abs() < 1e-12 * t.l2);
        }
    }

    #[test]
    fn one_plus_cosine_norms() {
        let u = cos_bump(1025);
        let t = norm_triple(&u, 1.0).unwrap();
        assert!((t.grad - PI).abs() < 1e-10);
        assert!((t.lp - 2.0 * PI).abs() < 1e-10);
        assert!((t.l2 - 3.0 * PI).abs() < 1e-10);
        assert!((lp_norm(&u, 2.0).unwrap() - (3.0 * PI).sqrt()).abs() < 1e-10);
        let q = nash_quotient(&u).unwrap();
        assert!((q - 27.0 / (16.0 * PI * PI)).abs() < 1e-10);
        let g = gn_quotient(&u, 1.0).unwrap();
        let want = 2f64.powf(4.0 / 3.0) * PI.powf(2.0 / 3.0) / 3.0;
        assert!((g - want).abs() < 1e-10);
    }

    #[test]
    fn finite_difference_fallback() {
        let with = cos_bump(2049);
        let without = RadialProfile::uniform(1, PI, with.values().to_vec(), None).unwrap();
        let a = grad_l2_sq(&with).unwrap();
        let b = grad_l2_sq(&without).unwrap();
        assert!((a - b).abs() < 1e-5);
    }

    #[test]
    fn tent_gradient() {
        let u = RadialProfile::sample(1, 1.0, 65, |r| 1.0 - r, Some(&|_| -1.0)).unwrap();
        assert!((grad_l2_sq(&u).unwrap() - 2.0).abs() < 1e-13);
        assert!((lp_norm(&u, 1.0).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_quotient_is_one_over_two_pi_d() {
        for d in 1..=3 {
            let u = RadialProfile::sample(
                d,
                8.0,
                4097,
                |r| (-r * r).exp(),
                Some(&|r: f64| -2.0 * r * (-r * r).exp()),
            )
            .unwrap();
            let q = nash_quotient(&u).unwrap();
            let want = 1.0 / (2.0 * PI * d as f64);
            assert!(((q - want) / want).abs() < 1e-9, "d = {d}: {q}");
        }
    }

    #[test]
    fn gn_quotient_tends_to_one_near_two() {
        let u = cos_bump(513);
        let q = gn_quotient(&u, 2.0 - 1e-9).unwrap();
        assert!((q - 1.0).abs() < 1e-6);
        assert!(gn_quotient(&u, 2.0).is_err());
        assert!(gn_quotient(&u, 0.9).is_err());
    }

    #[test]
    fn eval_interpolates() {
        let u = cos_bump(257);
        for i in 0..100 {
            let r = 0.0314 * i as f64;
            assert!((u.eval(r) - 1.0 - r.cos()).abs() < 1e-9);
        }
        assert_eq!(u.eval(4.0), 0.0);
        let v = RadialProfile::uniform(1, PI, u.values().to_vec(), None).unwrap();
        assert!((v.eval(1.234) - 1.0 - 1.234f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn profile_validation() {
        assert!(RadialProfile::uniform(1, 1.0, vec![1.0], None).is_err());
        assert!(RadialProfile::uniform(1, 1.0, vec![1.0, -0.1], None).is_err());
        assert!(RadialProfile::uniform(1, 1.0, vec![1.0, f64::NAN], None).is_err());
        assert!(RadialProfile::from_knots(1, &[0.0, 0.5, 1.1], vec![1.0; 3], None).is_err());
        assert!(RadialProfile::from_knots(1, &[0.1, 0.5, 0.9], vec![1.0; 3], None).is_err());
        assert!(RadialProfile::from_knots(1, &[0.0, 0.5, 1.0], vec![1.0; 3], None).is_ok());
    }
}
