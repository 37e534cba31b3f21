//! Spherical means of radial functions, reduced to one-dimensional integrals.
//!
//! For radial `f = φ(|x|)`, `g = ψ(|x|)` the bilinear mean is radial in `x`:
//! with `ρ = |x|`, `σ = ρ + t`, `δ = ρ - t`,
//!
//! ```text
//! S(f,g)(ρ,t) = (2π/ρ) ∫_{|δ|}^{σ} φ(√(σ² + δ² - v²)) ψ(v) v dv
//! ```
//!
//! and its weighted norm over `ℝ³ × ℝ` is a double integral in `(σ, δ)`.

use std::f64::consts::PI;

use super::quadrature::gauss_legendre;

/// A radial profile with support inside `[lo, hi]`.
pub struct RadialFn<'a> {
    pub profile: &'a dyn Fn(f64) -> f64,
    pub lo: f64,
    pub hi: f64,
}

impl<'a> RadialFn<'a> {
    pub fn new(profile: &'a dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Self {
        Self { profile, lo, hi }
    }

    fn eval(&self, r: f64) -> f64 {
        if r < self.lo || r > self.hi {
            0.0
        } else {
            (self.profile)(r)
        }
    }
}

/// Composite Gauss–Legendre rule on `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct Composite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: usize,
}

impl Composite {
    pub fn new(order: usize, panels: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { nodes, weights, panels: panels.max(1) }
    }

    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let width = (hi - lo) / self.panels as f64;
        let mut acc = 0.0;
        for p in 0..self.panels {
            let mid = lo + (p as f64 + 0.5) * width;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                acc += w * f(mid + 0.5 * width * x);
            }
        }
        acc * 0.5 * width
    }
}

/// Admissible `v = |x - tω|` range for given `(σ, δ)`.
fn v_range(phi: &RadialFn, psi: &RadialFn, sigma: f64, delta: f64) -> (f64, f64) {
    let sum = sigma * sigma + delta * delta;
    let lo = delta.abs().max(psi.lo).max((sum - phi.hi * phi.hi).max(0.0).sqrt());
    let hi = sigma.min(psi.hi).min((sum - phi.lo * phi.lo).max(0.0).sqrt());
    (lo, hi)
}

fn s_sigma_delta(phi: &RadialFn, psi: &RadialFn, sigma: f64, delta: f64, inner: &Composite) -> f64 {
    let rho = 0.5 * (sigma + delta);
    if rho <= 0.0 {
        return 0.0;
    }
    let (lo, hi) = v_range(phi, psi, sigma, delta);
    let sum = sigma * sigma + delta * delta;
    let integral = inner.integrate(lo, hi, |v| phi.eval((sum - v * v).max(0.0).sqrt()) * psi.eval(v) * v);
    2.0 * PI / rho * integral
}

/// `S(f,g)(x,t)` at `|x| = ρ > 0` for radial `f`, `g`.
pub fn radial_spherical_mean(phi: &RadialFn, psi: &RadialFn, rho: f64, t: f64, inner: &Composite) -> f64 {
    s_sigma_delta(phi, psi, rho + t, rho - t, inner)
}

/// `‖(1+|x|²+t²)^{a/2} S(f,g)‖` over `ℝ³ × ℝ`, with `S` extended oddly in `t`.
pub fn radial_s_norm(phi: &RadialFn, psi: &RadialFn, a: f64, outer: &Composite, inner: &Composite) -> f64 {
    let dmax = phi.hi.min(psi.hi);
    let smax = (phi.hi * phi.hi + psi.hi * psi.hi).sqrt();
    // dρ dt = dσ dδ / 2 over σ ≥ |δ|, and t ≥ 0 is doubled for the odd extension
    let total = outer.integrate(-dmax, dmax, |delta| {
        outer.integrate(delta.abs(), smax, |sigma| {
            let rho = 0.5 * (sigma + delta);
            let t = 0.5 * (sigma - delta);
            let s = s_sigma_delta(phi, psi, sigma, delta, inner);
            (1.0 + rho * rho + t * t).powf(a) * s * s * 4.0 * PI * rho * rho
        })
    });
    total.max(0.0).sqrt()
}

/// `‖⟨x⟩^a f‖_{L²(ℝ³)}` for radial `f`.
pub fn radial_weighted_norm(f: &RadialFn, a: f64, rule: &Composite) -> f64 {
    rule.integrate(f.lo, f.hi, |r| (1.0 + r * r).powf(a) * f.eval(r).powi(2) * 4.0 * PI * r * r)
        .sqrt()
}

/// Smooth bump equal to `exp(1 - 1/(1 - u²))` on `|u| < 1`, so that its peak is 1.
pub fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}
