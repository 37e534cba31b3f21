//! Pointwise comparison of the space-time transform of `A(f,g)` with the
//! spherical mean of the transforms:
//! `Â(ξ,τ) = S(f̂,ĝ)(ξ/2, τ/2) / (8i(2π)²)` in three dimensions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{forward_transform, ScalarField};
use crate::sphere::{sample_offgrid, Sampler, SphereQuadrature};

use super::{a_time_route, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierRow {
    pub xi: [f64; 3],
    pub tau: f64,
    /// transform of the computed `A` slices
    pub lhs: Complex64,
    /// spherical mean of the sampled transforms
    pub rhs: Complex64,
    pub rel_err: f64,
}

/// `h³ Σ_x u(x) e^{-i x·ξ}` at an arbitrary frequency.
fn transform_at(u: &ScalarField, xi: [f64; 3]) -> Complex64 {
    let spec = *u.spec();
    let n = spec.n();
    let coords = spec.coordinates();
    let phase = |w: f64| -> Vec<Complex64> { coords.iter().map(|&x| Complex64::from_polar(1.0, -x * w)).collect() };
    let (px, py, pz) = (phase(xi[0]), phase(xi[1]), phase(xi[2]));
    let vals = u.values();
    let mut acc = Complex64::new(0.0, 0.0);
    for ix in 0..n {
        for iy in 0..n {
            let base = spec.index(ix, iy, 0);
            let row: Complex64 = vals[base..base + n].iter().zip(&pz).map(|(v, p)| v * p).sum();
            acc += row * px[ix] * py[iy];
        }
    }
    acc * spec.cell_volume()
}

/// Evaluates both sides at each `(ξ, τ)`.
///
/// The left side transforms the `A` slices in `x` and uses that `A` is odd in
/// `t`: `∫_ℝ A e^{-itτ} dt = -2i ∫₀^∞ A sin(tτ) dt` (trapezoid rule). The right
/// side samples `f̂`, `ĝ` trilinearly on the frequency lattice.
pub fn a_fourier_check(
    f: &ScalarField,
    g: &ScalarField,
    points: &[([f64; 3], f64)],
    time: TimeGrid,
    quad: &SphereQuadrature,
    sampler: Sampler,
) -> Result<Vec<FourierRow>> {
    let spec = *f.spec();
    let band = PI / spec.spacing();
    for &(xi, tau) in points {
        if tau.abs() > band || xi.iter().any(|c| c.abs() > band) {
            return Err(Error::OutOfRange(format!("(ξ,τ)=({xi:?},{tau}) outside the resolvable band {band:.3}")));
        }
    }
    let a = a_time_route(f, g, time, quad, sampler)?.field;
    let weights = time.weights();
    let (f_hat, g_hat) = (forward_transform(f)?, forward_transform(g)?);
    let constant = Complex64::new(0.0, 8.0 * (2.0 * PI).powi(2)).inv();
    points
        .iter()
        .map(|&(xi, tau)| {
            let mut lhs = Complex64::new(0.0, 0.0);
            for (k, slice) in a.slices().iter().enumerate().skip(1) {
                lhs += transform_at(slice, xi) * (weights[k] * (time.time(k) * tau).sin());
            }
            lhs *= Complex64::new(0.0, -2.0);

            let center = [xi[0] / 2.0, xi[1] / 2.0, xi[2] / 2.0];
            let r = tau / 2.0;
            let plus: Vec<[f64; 3]> =
                quad.nodes().iter().map(|w| [center[0] + r * w[0], center[1] + r * w[1], center[2] + r * w[2]]).collect();
            let minus: Vec<[f64; 3]> =
                quad.nodes().iter().map(|w| [center[0] - r * w[0], center[1] - r * w[1], center[2] - r * w[2]]).collect();
            let fp = sample_offgrid(&f_hat, &plus);
            let gm = sample_offgrid(&g_hat, &minus);
            let s: Complex64 = fp.iter().zip(&gm).zip(quad.weights()).map(|((a, b), w)| a * b * *w).sum::<Complex64>() * r;
            let rhs = constant * s;
            let scale = lhs.norm().max(rhs.norm());
            let rel_err = if scale == 0.0 { 0.0 } else { (lhs - rhs).norm() / scale };
            Ok(FourierRow { xi, tau, lhs, rhs, rel_err })
        })
        .collect()
}
