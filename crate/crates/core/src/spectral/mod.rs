//! Fourier multipliers, wave propagators and weighted Sobolev norms.
//!
//! `⟨D⟩^b` multiplies the transform by `(1+|ξ|²)^{b/2}`, `⟨x⟩^a` multiplies
//! samples by `(1+|x|²)^{a/2}` and the `H_(a,b)` norm is `‖⟨x⟩^a ⟨D⟩^b f‖`.

mod dyadic;
mod probe;

pub use dyadic::{chi_profile, dyadic_cutoff, dyadic_decompose, dyadic_norm, DyadicPartition};
pub use probe::{commutator_growth_probe, ProbeEstimate, ProbeOptions, PROBE_CSV_HEADER};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{apply_multiplier, l2_norm, GridSpec, ScalarField, SpaceTimeField, Space};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevIndex {
    /// spatial weight exponent
    pub a: f64,
    /// derivative exponent
    pub b: f64,
}

impl SobolevIndex {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }
}

#[inline]
fn xi_sq(xi: [f64; 3]) -> f64 {
    xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
}

/// `⟨D⟩^b f`.
pub fn bessel_multiplier(f: &ScalarField, b: f64) -> ScalarField {
    if b == 0.0 {
        return f.clone();
    }
    apply_multiplier(f, |xi| Complex64::new((1.0 + xi_sq(xi)).powf(b / 2.0), 0.0))
}

/// `⟨x⟩^a f` for a position-space field.
pub fn spatial_weight(f: &ScalarField, a: f64) -> Result<ScalarField> {
    f.expect_space(Space::Position)?;
    if a == 0.0 {
        return Ok(f.clone());
    }
    let spec = *f.spec();
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(idx, v)| v * (1.0 + xi_sq(spec.point(idx))).powf(a / 2.0))
        .collect();
    ScalarField::from_values(spec, Space::Position, values)
}

/// `‖⟨x⟩^a ⟨D⟩^b f‖`.
pub fn sobolev_norm(f: &ScalarField, idx: SobolevIndex) -> Result<f64> {
    f.expect_space(Space::Position)?;
    Ok(l2_norm(&spatial_weight(&bessel_multiplier(f, idx.b), idx.a)?))
}

/// The equivalent norm with the factors in the other order, `‖⟨D⟩^b ⟨x⟩^a f‖`.
pub fn sobolev_norm_swapped(f: &ScalarField, idx: SobolevIndex) -> Result<f64> {
    f.expect_space(Space::Position)?;
    Ok(l2_norm(&bessel_multiplier(&spatial_weight(f, idx.a)?, idx.b)))
}

/// `cos(t|D|) f`.
pub fn cosine_propagator(f: &ScalarField, t: f64) -> Result<ScalarField> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(apply_multiplier(f, |xi| Complex64::new((t * xi_sq(xi).sqrt()).cos(), 0.0)))
}

/// `sin(t|D|)/|D| f`, with the multiplier's value `t` at `ξ = 0`.
pub fn sine_propagator(f: &ScalarField, t: f64) -> Result<ScalarField> {
    check_time(t)?;
    Ok(apply_multiplier(f, |xi| Complex64::new(sine_symbol(t, xi_sq(xi).sqrt()), 0.0)))
}

/// `sin(tλ)/λ`, continuous at `λ = 0`.
#[inline]
pub fn sine_symbol(t: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        t
    } else {
        (t * lambda).sin() / lambda
    }
}

/// `|D| f`.
pub fn abs_derivative(f: &ScalarField) -> ScalarField {
    apply_multiplier(f, |xi| Complex64::new(xi_sq(xi).sqrt(), 0.0))
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("propagator time must be nonnegative, got {t}")))
    }
}

/// `(Ku)(·, t_k) = cos(t_k |D|) u` on the grid `t_k = k·dt`, `k = 0..=steps`.
pub fn apply_k(u: &ScalarField, dt: f64, steps: usize) -> Result<SpaceTimeField> {
    u.expect_space(Space::Position)?;
    let hat = crate::grid::forward_transform(u)?;
    let spec = *u.spec();
    let slices = (0..=steps)
        .map(|k| {
            if k == 0 {
                return Ok(u.clone());
            }
            let t = k as f64 * dt;
            let propagated = apply_multiplier(&hat, |xi| Complex64::new((t * xi_sq(xi).sqrt()).cos(), 0.0));
            crate::grid::inverse_transform(&propagated)
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceTimeField::new(spec, dt, slices)
}

/// Fraction of `‖f‖²` carried by nodes with `|x - center| <= radius`.
pub fn energy_inside(f: &ScalarField, center: [f64; 3], radius: f64) -> Result<f64> {
    f.expect_space(Space::Position)?;
    let spec: &GridSpec = f.spec();
    let mut inside = 0.0;
    let mut total = 0.0;
    for (idx, v) in f.values().iter().enumerate() {
        let x = spec.point(idx);
        let d = [x[0] - center[0], x[1] - center[1], x[2] - center[2]];
        let e = v.norm_sqr();
        total += e;
        if xi_sq(d).sqrt() <= radius {
            inside += e;
        }
    }
    Ok(if total == 0.0 { 1.0 } else { inside / total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{forward_transform, sample_gaussian, translate, GaussianParams};

    fn spec() -> GridSpec {
        GridSpec::new(32, 8.0).unwrap()
    }

    fn bump() -> ScalarField {
        let p = GaussianParams {
            center: [0.4, -0.3, 0.2],
            modulation: [0.5, 0.0, 1.0],
            ..GaussianParams::centered(1.0)
        };
        sample_gaussian(spec(), &p)
    }

    fn rel(a: &ScalarField, b: &ScalarField) -> f64 {
        l2_norm(&a.sub(b).unwrap()) / l2_norm(b)
    }

    #[test]
    fn zero_exponents_are_identities() {
        let f = bump();
        assert_eq!(bessel_multiplier(&f, 0.0), f);
        assert_eq!(spatial_weight(&f, 0.0).unwrap(), f);
        assert_eq!(sobolev_norm(&f, SobolevIndex::new(0.0, 0.0)).unwrap(), l2_norm(&f));
    }

    #[test]
    fn exponents_invert() {
        let f = bump();
        assert!(rel(&bessel_multiplier(&bessel_multiplier(&f, 1.3), -1.3), &f) < 1e-12);
        assert!(rel(&spatial_weight(&spatial_weight(&f, 1.7).unwrap(), -1.7).unwrap(), &f) < 1e-12);
    }

    #[test]
    fn modulated_gaussian_bessel_ratio() {
        // wide Gaussian (width 4) modulated at |k| = 3
        let spec = GridSpec::new(64, 28.0).unwrap();
        let k = [3.0, 0.0, 0.0];
        let f = sample_gaussian(spec, &GaussianParams { modulation: k, ..GaussianParams::centered(4.0) });
        for b in [1.0, -1.0, 2.0] {
            let ratio = l2_norm(&bessel_multiplier(&f, b)) / l2_norm(&f);
            let expected = (1.0f64 + 9.0).powf(b / 2.0);
            assert!((ratio - expected).abs() / expected < 0.05, "b={b}: {ratio} vs {expected}");
        }
    }

    #[test]
    fn spatial_weight_of_narrow_bump() {
        let spec = GridSpec::new(64, 8.0).unwrap();
        for x0 in [[0.0, 0.0, 0.0], [3.0, 0.0, 0.0], [0.0, 3.0, 4.0]] {
            let f = sample_gaussian(spec, &GaussianParams { center: x0, ..GaussianParams::centered(0.5) });
            let a = 1.0;
            let ratio = l2_norm(&spatial_weight(&f, a).unwrap()) / l2_norm(&f);
            // |f|² is a Gaussian with per-axis variance w²/2
            let expected = (1.0 + crate::grid::norm3(x0).powi(2) + 1.5 * 0.25).sqrt();
            assert!((ratio - expected).abs() / expected < 1e-9, "{x0:?}: {ratio} vs {expected}");
        }
    }

    #[test]
    fn sobolev_norm_is_homogeneous() {
        let f = bump();
        let idx = SobolevIndex::new(0.7, -0.4);
        let c = Complex64::new(-2.5, 1.5);
        let lhs = sobolev_norm(&f.scale(c), idx).unwrap();
        let rhs = c.norm() * sobolev_norm(&f, idx).unwrap();
        assert!((lhs - rhs).abs() / rhs < 1e-12);
    }

    #[test]
    fn propagators_at_time_zero() {
        let f = bump();
        assert_eq!(cosine_propagator(&f, 0.0).unwrap(), f);
        assert!(sine_propagator(&f, 0.0).unwrap().max_abs() < 1e-15);
        assert!(cosine_propagator(&f, -1.0).is_err());
    }

    #[test]
    fn energy_split() {
        let f = bump();
        for t in [0.3, 1.0, 2.7] {
            let c = l2_norm(&cosine_propagator(&f, t).unwrap()).powi(2);
            let s = l2_norm(&abs_derivative(&sine_propagator(&f, t).unwrap())).powi(2);
            let total = l2_norm(&f).powi(2);
            assert!((c + s - total).abs() / total < 1e-12);
        }
    }

    #[test]
    fn cosine_solves_the_wave_equation() {
        let f = sample_gaussian(spec(), &GaussianParams::centered(1.0));
        let t = 0.8;
        let dt = 1e-3;
        let c = |s| cosine_propagator(&f, s).unwrap();
        let (m, z, p) = (c(t - dt), c(t), c(t + dt));
        let second = p.axpy(Complex64::new(-2.0, 0.0), &z).unwrap().axpy(Complex64::new(1.0, 0.0), &m).unwrap()
            .scale(Complex64::new(1.0 / (dt * dt), 0.0));
        let laplace = apply_multiplier(&z, |xi| Complex64::new(-xi_sq(xi), 0.0));
        assert!(rel(&second, &laplace) < 1e-4);
    }

    #[test]
    fn propagators_commute_with_translation() {
        let f = bump();
        let v = [0.37, 1.1, -0.6];
        for t in [0.5, 2.0] {
            let a = cosine_propagator(&translate(&f, v).unwrap(), t).unwrap();
            let b = translate(&cosine_propagator(&f, t).unwrap(), v).unwrap();
            assert!(a.sub(&b).unwrap().max_abs() < 1e-12);
            let a = sine_propagator(&translate(&f, v).unwrap(), t).unwrap();
            let b = translate(&sine_propagator(&f, t).unwrap(), v).unwrap();
            assert!(a.sub(&b).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn cosine_addition_formula_on_multipliers() {
        let s = spec();
        let (t, u) = (0.7, 1.9);
        let mut worst: f64 = 0.0;
        for idx in 0..s.len() {
            let lam = xi_sq(s.frequency_point(idx)).sqrt();
            let lhs = (t * lam).cos() * (u * lam).cos() - (t * lam).sin() * (u * lam).sin();
            worst = worst.max((lhs - ((t + u) * lam).cos()).abs());
        }
        assert!(worst < 1e-12);
    }

    #[test]
    fn k_operator_slices() {
        let s = GridSpec::new(48, 12.0).unwrap();
        let width = 0.5;
        let u = sample_gaussian(s, &GaussianParams::centered(width));
        let ku = apply_k(&u, s.spacing(), 12).unwrap();
        assert_eq!(ku.slices()[0], u);
        let r = 6.0 * width;
        for (k, slice) in ku.slices().iter().enumerate() {
            let t = ku.time(k);
            assert!(l2_norm(slice) <= l2_norm(&u) + 1e-12);
            let inside = energy_inside(slice, [0.0; 3], r + t + 3.0 * s.spacing()).unwrap();
            assert!(inside >= 1.0 - 1e-3, "t={t}: {inside}");
        }
    }

    #[test]
    fn orderings_agree_on_gaussian() {
        let f = bump();
        let idx = SobolevIndex::new(1.0, 1.0);
        let r = sobolev_norm(&f, idx).unwrap() / sobolev_norm_swapped(&f, idx).unwrap();
        assert!(r > 0.5 && r < 2.0);
        let _ = forward_transform(&f).unwrap();
    }
}
