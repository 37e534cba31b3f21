//! Pairings of the three-dimensional fundamental solution `E` with `φ ⊗ ψ`.
//!
//! Both routes reduce to profiles `u(t) = t φ̃(t)`, `v(t) = t ψ̃(t)`:
//! the direct route is `(16π²)^{-1} ∫ u′ v dt`, the propagator route is
//! `-(16π²)^{-1} ∫ u v′ dt`. Derivatives use centred differences with
//! one-sided end stencils; paired with trapezoid weights this difference
//! operator satisfies a discrete integration-by-parts identity, so swapping
//! the arguments negates the result up to the boundary term `u(T)v(T)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::trapezoid_weights;

use super::RadialProfile;

fn weighted(p: &RadialProfile) -> Vec<Complex64> {
    p.values().iter().enumerate().map(|(k, v)| v * (k as f64 * p.dt())).collect()
}

fn derivative(u: &[Complex64], dt: f64) -> Vec<Complex64> {
    let n = u.len();
    (0..n)
        .map(|k| match k {
            0 => (u[1] - u[0]) / dt,
            _ if k == n - 1 => (u[n - 1] - u[n - 2]) / dt,
            _ => (u[k + 1] - u[k - 1]) / (2.0 * dt),
        })
        .collect()
}

fn check(phi: &RadialProfile, psi: &RadialProfile) -> Result<()> {
    if phi.len() != psi.len() || phi.dt() != psi.dt() {
        return Err(Error::InvalidArgument("profiles must share their sample grid".into()));
    }
    Ok(())
}

fn pair(a: &[Complex64], b: &[Complex64], dt: f64) -> Complex64 {
    trapezoid_weights(a.len(), dt).iter().zip(a.iter().zip(b)).map(|(w, (x, y))| x * y * *w).sum::<Complex64>()
        / (16.0 * PI * PI)
}

/// `(16π²)^{-1} ∫ (tφ̃)′ tψ̃ dt`.
pub fn e_pairing_direct(phi: &RadialProfile, psi: &RadialProfile) -> Result<Complex64> {
    check(phi, psi)?;
    let (u, v) = (weighted(phi), weighted(psi));
    Ok(pair(&derivative(&u, phi.dt()), &v, phi.dt()))
}

/// `-∫ ⟨k₀(·,t),φ⟩ ∂ₜ⟨k₀(·,t),ψ⟩ dt` with `⟨k₀(·,t),φ⟩ = tφ̃(t)/(4π)`.
pub fn e_pairing_4am(phi: &RadialProfile, psi: &RadialProfile) -> Result<Complex64> {
    check(phi, psi)?;
    let (u, v) = (weighted(phi), weighted(psi));
    Ok(-pair(&u, &derivative(&v, psi.dt()), psi.dt()))
}

/// Magnitude scale `(16π²)^{-1} ∫ (|u′||v| + |u||v′|) dt` for relative comparisons.
pub fn e_pairing_scale(phi: &RadialProfile, psi: &RadialProfile) -> Result<f64> {
    check(phi, psi)?;
    let dt = phi.dt();
    let (u, v) = (weighted(phi), weighted(psi));
    let (du, dv) = (derivative(&u, dt), derivative(&v, dt));
    let w = trapezoid_weights(u.len(), dt);
    Ok((0..u.len()).map(|k| w[k] * (du[k].norm() * v[k].norm() + u[k].norm() * dv[k].norm())).sum::<f64>()
        / (16.0 * PI * PI))
}
