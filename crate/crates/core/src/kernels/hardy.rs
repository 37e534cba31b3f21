//! The averaging operator `H(t) = ∫_t^∞ h(r) dr / r` and the tail operator
//! `T = ∫_t^∞ p(t/r) r^{-1} S(·, r) dr`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{trapezoid_weights, ScalarField, SpaceTimeField, Space};

use super::p_polynomial;

/// Relative size of `h(T)` above which the truncation at `T` is reported.
const TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct HardyResult {
    /// `H(t_k)`; `H(0)` is infinite unless `h(0) = 0`
    pub values: Vec<f64>,
    pub integral_h2: f64,
    pub integral_hh2: f64,
    /// `∫H² / ∫h²`, zero for `h = 0`
    pub ratio: f64,
    pub warning: Option<String>,
}

/// Transforms samples `h(k·Δt)`, treating `h` as piecewise linear.
///
/// Each panel is integrated exactly against `1/r`.
pub fn hardy_transform(h: &[f64], dt: f64) -> Result<HardyResult> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {dt}")));
    }
    if h.len() < 3 {
        return Err(Error::InvalidArgument("need at least three samples".into()));
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("samples must be finite".into()));
    }
    let n = h.len();
    let peak = h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let warning = (h[n - 1].abs() > TAIL_TOLERANCE * peak).then(|| {
        format!("h does not decay before T = {:.3}: h(T)/max|h| = {:.2e}", (n - 1) as f64 * dt, h[n - 1].abs() / peak)
    });
    let mut values = vec![0.0; n];
    for k in (1..n - 1).rev() {
        let (r0, r1) = (k as f64 * dt, (k + 1) as f64 * dt);
        let slope = (h[k + 1] - h[k]) / dt;
        let intercept = h[k] - slope * r0;
        values[k] = values[k + 1] + intercept * (r1 / r0).ln() + slope * dt;
    }
    values[0] = if h[0] == 0.0 { values[1] + (h[1] - h[0]) } else { f64::INFINITY };

    let integral_h2: f64 = trapezoid_weights(n, dt).iter().zip(h).map(|(w, v)| w * v * v).sum();
    // ∫H² = 2∫H h after integrating t·(H²)' by parts; the product is much
    // smoother than H² near t = 0. On the first panel H ≈ A + B ln(Δt/t) with
    // A = H(Δt), B = h(0), integrated in closed form against h(0).
    let (a, b) = (values[1], h[0]);
    let first = dt * b * (a + b);
    let rest: f64 = trapezoid_weights(n - 1, dt)
        .iter()
        .zip(values[1..].iter().zip(&h[1..]))
        .map(|(w, (hh, v))| w * hh * v)
        .sum();
    let integral_hh2 = 2.0 * (first + rest);
    let ratio = if integral_h2 == 0.0 { 0.0 } else { integral_hh2 / integral_h2 };
    Ok(HardyResult { values, integral_h2, integral_hh2, ratio, warning })
}

/// `T(x, t_k) = ∫_{t_k}^{T} p(t_k/r) r^{-1} S(x, r) dr` by the trapezoid rule
/// on the slice grid. `S(x,r)/r` at `r = 0` is replaced by `S(x,Δt)/Δt`.
pub fn tail_operator_t(slices: &SpaceTimeField, n: usize) -> Result<SpaceTimeField> {
    let p = p_polynomial(n)?;
    let spec = *slices.spec();
    let count = slices.len();
    let dt = slices.dt();
    let zero = || ScalarField::zeros(spec, Space::Position);
    if p.is_zero() || count < 2 {
        return SpaceTimeField::new(spec, dt, (0..count).map(|_| zero()).collect());
    }
    let src = slices.slices();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let t = k as f64 * dt;
        let mut acc = vec![Complex64::new(0.0, 0.0); spec.len()];
        if k + 1 < count {
            for j in k..count {
                let w = if j == k || j == count - 1 { 0.5 * dt } else { dt };
                let (r, slice) = if j == 0 { (dt, &src[1]) } else { (j as f64 * dt, &src[j]) };
                let c = w * p.eval(t / r) / r;
                for (a, v) in acc.iter_mut().zip(slice.values()) {
                    *a += v * c;
                }
            }
        }
        out.push(ScalarField::from_values(spec, Space::Position, acc)?);
    }
    SpaceTimeField::new(spec, dt, out)
}
