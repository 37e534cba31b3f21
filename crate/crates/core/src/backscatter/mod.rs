//! The operators `A(f,g)(x,t)`, `B₂(f,g)` and the trilinear form `Q(f,g,h)`
//! in three space dimensions.
//!
//! `A` is assembled from spherical means, `A = ∂ₜ^m (c_n S + T)` with
//! `c_n = π(2π)^{-(n+1)/2}`; in `ℝ³` this is `A = S/(4π)`. `B₂` is the
//! time integral `B₂(f,g) = -4 ∫₀^∞ cos(t|D|) A(f,g)(·,t) dt`, accumulated
//! slice by slice in frequency space.

mod fourier;

pub use fourier::{a_fourier_check, FourierRow};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    bilinear_pairing, effective_radius, evaluate_spectral, forward_transform, inverse_transform,
    trapezoid_weights, GridSpec, ScalarField, SpaceTimeField, Space,
};
use crate::kernels::{p_polynomial, tail_operator_t};
use crate::spectral::energy_inside;
use crate::sphere::{drop_nyquist, Sampler, SphereQuadrature, SphericalMeans, SUPPORT_TAIL};

/// Space dimension of the grid pipeline.
pub const DIMENSION: usize = 3;

/// Margin applied to the interaction horizon when choosing the slice count.
pub const HORIZON_MARGIN: f64 = 1.2;

/// Uniform time grid `t_k = k·dt`, `k = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub dt: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, steps: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) || steps == 0 {
            return Err(Error::InvalidArgument(format!("invalid time grid: dt={dt}, steps={steps}")));
        }
        Ok(Self { dt, steps })
    }

    /// Step `h` and enough slices to pass the interaction horizon of `f`, `g`
    /// with a 20% margin.
    pub fn covering(spec: &GridSpec, f: &ScalarField, g: &ScalarField) -> Result<Self> {
        let (r1, r2) = pair_radii(f, g)?;
        let horizon = interaction_horizon(r1, r2);
        let dt = spec.spacing();
        Self::new(dt, ((HORIZON_MARGIN * horizon / dt).ceil() as usize).max(1))
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn t_max(&self) -> f64 {
        self.time(self.steps)
    }

    pub fn weights(&self) -> Vec<f64> {
        trapezoid_weights(self.steps + 1, self.dt)
    }
}

/// Effective support radius about the origin (energy tail `SUPPORT_TAIL`).
pub fn support_radius(f: &ScalarField) -> Result<f64> {
    effective_radius(f, [0.0; 3], SUPPORT_TAIL)
}

/// Largest `t` with `S(f,g)(·,t) ≠ 0` when `f`, `g` live in balls of radii
/// `r₁`, `r₂` about the origin: `2t ≤ |x + tω| + |x - tω| ≤ r₁ + r₂`.
pub fn interaction_horizon(r1: f64, r2: f64) -> f64 {
    0.5 * (r1 + r2)
}

/// Energy centroid of `|f|² + |g|²`.
fn pair_center(f: &ScalarField, g: &ScalarField) -> Result<[f64; 3]> {
    f.check_same_grid(g)?;
    let spec = f.spec();
    let (mut c, mut total) = ([0.0; 3], 0.0);
    for (i, (u, v)) in f.values().iter().zip(g.values()).enumerate() {
        let e = u.norm_sqr() + v.norm_sqr();
        let x = spec.point(i);
        for d in 0..3 {
            c[d] += e * x[d];
        }
        total += e;
    }
    Ok(if total > 0.0 { c.map(|v| v / total) } else { [0.0; 3] })
}

/// Effective support radii of `f`, `g` about their common energy centroid.
/// The interaction horizon only depends on these, so it is translation invariant.
pub fn pair_radii(f: &ScalarField, g: &ScalarField) -> Result<(f64, f64)> {
    let c = pair_center(f, g)?;
    Ok((effective_radius(f, c, SUPPORT_TAIL)?, effective_radius(g, c, SUPPORT_TAIL)?))
}

fn horizon_warning(f: &ScalarField, g: &ScalarField, time: &TimeGrid) -> Result<Option<String>> {
    let (r1, r2) = pair_radii(f, g)?;
    let horizon = interaction_horizon(r1, r2);
    Ok((time.t_max() < horizon).then(|| {
        format!("time grid ends at {:.3} before the interaction horizon {horizon:.3}; B2 is truncated", time.t_max())
    }))
}

/// `A(f,g)` on every slice of the time grid together with collected warnings.
#[derive(Debug, Clone)]
pub struct ARoute {
    pub field: SpaceTimeField,
    pub warnings: Vec<String>,
}

/// `A(f,g)(·,t_k)` for `k = 0..=steps`.
pub fn a_time_route(
    f: &ScalarField,
    g: &ScalarField,
    time: TimeGrid,
    quad: &SphereQuadrature,
    sampler: Sampler,
) -> Result<ARoute> {
    let means = SphericalMeans::new(f, g, quad, sampler)?;
    let slices: Vec<ScalarField> =
        (0..=time.steps).into_par_iter().map(|k| means.slice(time.time(k))).collect();
    let s = SpaceTimeField::new(*f.spec(), time.dt, slices)?;
    let warnings = means.wrap_warning(time.t_max()).into_iter().collect();
    Ok(ARoute { field: assemble_a(&s, DIMENSION)?, warnings })
}

/// `∂ₜ^m (c_n S + T)` from sampled spherical means `S`.
pub fn assemble_a(s: &SpaceTimeField, n: usize) -> Result<SpaceTimeField> {
    let p = p_polynomial(n)?;
    let c = PI * (2.0 * PI).powf(-(n as f64 + 1.0) / 2.0);
    let mut out = s.scale(Complex64::new(c, 0.0));
    if !p.is_zero() {
        out = out.axpy(Complex64::new(1.0, 0.0), &tail_operator_t(s, n)?)?;
    }
    for _ in 0..p.m() {
        out = time_derivative(&out)?;
    }
    Ok(out)
}

/// Centred difference in `t`, one-sided at both ends.
fn time_derivative(u: &SpaceTimeField) -> Result<SpaceTimeField> {
    let k = u.len();
    if k < 2 {
        return Err(Error::InvalidArgument("need two slices to differentiate in t".into()));
    }
    let dt = u.dt();
    let s = u.slices();
    let slices = (0..k)
        .map(|j| {
            let (lo, hi, span) = match j {
                0 => (0, 1, dt),
                _ if j == k - 1 => (k - 2, k - 1, dt),
                _ => (j - 1, j + 1, 2.0 * dt),
            };
            s[hi].axpy(Complex64::new(-1.0, 0.0), &s[lo]).map(|d| d.scale(Complex64::new(1.0 / span, 0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceTimeField::new(*u.spec(), dt, slices)
}

/// Calls `visit(k, t_k, A(·,t_k))` in increasing `k`. Slices are evaluated in
/// parallel blocks and handed over in order, so results do not depend on the
/// thread count.
fn visit_a_slices(
    means: &SphericalMeans,
    time: &TimeGrid,
    mut visit: impl FnMut(usize, f64, ScalarField) -> Result<()>,
) -> Result<()> {
    let block = rayon::current_num_threads().max(1);
    let scale = Complex64::new(1.0 / (4.0 * PI), 0.0);
    let ks: Vec<usize> = (1..=time.steps).collect();
    for chunk in ks.chunks(block) {
        let slices: Vec<ScalarField> =
            chunk.par_iter().map(|&k| means.slice(time.time(k)).scale(scale)).collect();
        for (&k, slice) in chunk.iter().zip(slices) {
            visit(k, time.time(k), slice)?;
        }
    }
    Ok(())
}

/// `∂ₜA(f,g)(·,0) = f g`, with the operands the sampler actually sees.
fn initial_slope(f: &ScalarField, g: &ScalarField, sampler: Sampler) -> Result<ScalarField> {
    let seen = |u: &ScalarField| -> Result<ScalarField> {
        match sampler {
            Sampler::Trilinear => Ok(u.clone()),
            Sampler::Spectral => {
                let mut hat = forward_transform(u)?;
                drop_nyquist(&mut hat);
                inverse_transform(&hat)
            }
        }
    };
    let (fs, gs) = (seen(f)?, seen(g)?);
    let values = fs.values().iter().zip(gs.values()).map(|(a, b)| a * b).collect();
    ScalarField::from_values(*f.spec(), Space::Position, values)
}

fn frequency_moduli(spec: &GridSpec) -> Vec<f64> {
    (0..spec.len()).map(|i| crate::grid::norm3(spec.frequency_point(i))).collect()
}

#[derive(Debug, Clone)]
pub struct B2Output {
    pub field: ScalarField,
    pub time: TimeGrid,
    pub warnings: Vec<String>,
}

/// `B₂(f,g) = -4 ∫ cos(t|D|) A(f,g)(·,t) dt` by the trapezoid rule with the
/// endpoint correction `(dt²/12) ∂ₜA(·,0)`; the integrand has died out at
/// the far end when the grid covers the interaction horizon.
pub fn b2(
    f: &ScalarField,
    g: &ScalarField,
    time: TimeGrid,
    quad: &SphereQuadrature,
    sampler: Sampler,
) -> Result<B2Output> {
    Ok(b2_and_pairings(f, g, None, time, quad, sampler)?.0)
}

/// B₂ plus, when `h` is given, the route `-4 Σ_k w_k ∫ A_k · cos(t_k|D|) h`.
fn b2_and_pairings(
    f: &ScalarField,
    g: &ScalarField,
    h: Option<&ScalarField>,
    time: TimeGrid,
    quad: &SphereQuadrature,
    sampler: Sampler,
) -> Result<(B2Output, Complex64)> {
    let spec = *f.spec();
    let means = SphericalMeans::new(f, g, quad, sampler)?;
    let mut warnings: Vec<String> = means.wrap_warning(time.t_max()).into_iter().collect();
    warnings.extend(horizon_warning(f, g, &time)?);
    let moduli = frequency_moduli(&spec);
    let weights = time.weights();
    let h_hat = h.map(forward_transform).transpose()?;
    let end = Complex64::new(time.dt * time.dt / 12.0, 0.0);
    let slope = initial_slope(f, g, sampler)?;
    let mut acc: Vec<Complex64> = forward_transform(&slope)?.values().iter().map(|v| v * end).collect();
    let mut route_ii = match h {
        Some(h) => bilinear_pairing(&slope, h)? * end,
        None => Complex64::new(0.0, 0.0),
    };
    visit_a_slices(&means, &time, |k, t, a| {
        let a_hat = forward_transform(&a)?;
        let w = weights[k];
        for ((s, v), lam) in acc.iter_mut().zip(a_hat.values()).zip(&moduli) {
            *s += v * (w * (t * lam).cos());
        }
        if let Some(hh) = &h_hat {
            let values = hh.values().iter().zip(&moduli).map(|(v, lam)| v * (t * lam).cos()).collect();
            let propagated = inverse_transform(&ScalarField::from_values(spec, Space::Frequency, values)?)?;
            route_ii += bilinear_pairing(&a, &propagated)? * w;
        }
        Ok(())
    })?;
    let field = inverse_transform(&ScalarField::from_values(spec, Space::Frequency, acc)?)?
        .scale(Complex64::new(-4.0, 0.0));
    Ok((B2Output { field, time, warnings }, route_ii * -4.0))
}

/// Both evaluations of `Q(f,g,h)` and their agreement.
#[derive(Debug, Clone, Serialize)]
pub struct QReport {
    #[serde(rename = "N")]
    pub n_grid: usize,
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "K")]
    pub steps: usize,
    pub dt: f64,
    /// `∫ h · B₂(f,g)`, real-bilinear
    pub value_route_i: Complex64,
    /// `-4 Σ_k w_k ∫ A(f,g)(·,t_k) · cos(t_k|D|)h` plus the same endpoint term as `B₂`
    pub value_route_ii: Complex64,
    pub rel_diff: f64,
    pub warnings: Vec<String>,
}

pub fn q_form(
    f: &ScalarField,
    g: &ScalarField,
    h: &ScalarField,
    time: TimeGrid,
    quad: &SphereQuadrature,
    sampler: Sampler,
) -> Result<QReport> {
    f.check_same_grid(h)?;
    h.expect_space(Space::Position)?;
    let (out, route_ii) = b2_and_pairings(f, g, Some(h), time, quad, sampler)?;
    let route_i = bilinear_pairing(h, &out.field)?;
    let scale = route_i.norm().max(route_ii.norm());
    let rel_diff = if scale == 0.0 { 0.0 } else { (route_i - route_ii).norm() / scale };
    Ok(QReport {
        n_grid: f.spec().n(),
        half_width: f.spec().half_width(),
        steps: time.steps,
        dt: time.dt,
        value_route_i: route_i,
        value_route_ii: route_ii,
        rel_diff,
        warnings: out.warnings,
    })
}

/// Fraction of the energy of `field` outside the ball of radius
/// `√(r₁² + r₂²) + 3h`, where `r₁`, `r₂` are the effective support radii of `f`, `g`.
pub fn support_check(f: &ScalarField, g: &ScalarField, field: &ScalarField) -> Result<f64> {
    let (r1, r2) = (support_radius(f)?, support_radius(g)?);
    let radius = (r1 * r1 + r2 * r2).sqrt() + 3.0 * field.spec().spacing();
    Ok((1.0 - energy_inside(field, [0.0; 3], radius)?).max(0.0))
}

/// Relative energy of the non-radial part of a position field: every node is
/// compared with the field's trigonometric interpolant at the same distance
/// from the origin along the first axis.
pub fn radial_defect(field: &ScalarField) -> Result<f64> {
    field.expect_space(Space::Position)?;
    let spec = *field.spec();
    let n = spec.n() as i64;
    let half = n / 2;
    let offset = |i: usize| -> i64 {
        let d = i as i64 - half;
        if d >= half { d - n } else { d }
    };
    let hat = forward_transform(field)?;
    let mut radial: std::collections::BTreeMap<i64, Complex64> = std::collections::BTreeMap::new();
    let mut total = 0.0;
    let mut defect = 0.0;
    for (idx, v) in field.values().iter().enumerate() {
        let [ix, iy, iz] = spec.unravel(idx);
        let key = offset(ix).pow(2) + offset(iy).pow(2) + offset(iz).pow(2);
        let reference = match radial.get(&key) {
            Some(r) => *r,
            None => {
                let rho = (key as f64).sqrt() * spec.spacing();
                if rho > spec.half_width() {
                    // corners of the cube: no on-axis reference inside the box
                    continue;
                }
                let r = evaluate_spectral(&hat, [rho, 0.0, 0.0])?;
                radial.insert(key, r);
                r
            }
        };
        total += v.norm_sqr();
        defect += (v - reference).norm_sqr();
    }
    Ok(if total == 0.0 { 0.0 } else { defect / total })
}
