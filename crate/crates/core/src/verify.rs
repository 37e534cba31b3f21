//! Identity suite: exact or near-exact identities of every module, evaluated
//! on one configuration and reported as `{name, measured, tolerance, pass}`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::backscatter::{a_time_route, b2, q_form, TimeGrid};
use crate::error::{Error, Result};
use crate::grid::{
    forward_transform, inverse_transform, l2_norm, sample_gaussian, translate, GaussianParams, GridSpec, ScalarField,
    Space,
};
use crate::kernels::{hardy_transform, p_polynomial};
use crate::spectral::{
    abs_derivative, apply_k, bessel_multiplier, chi_profile, commutator_growth_probe, cosine_propagator,
    dyadic_decompose, sine_propagator, spatial_weight, ProbeOptions,
};
use crate::sphere::{bilinear_spherical_s, sample_offgrid, spherical_pairing, Sampler, SphereQuadrature};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub spec: GridSpec,
    /// number of time steps `K` of the `A`/`B₂`/`Q` checks
    pub steps: usize,
    pub degree: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { spec: GridSpec::new(48, 12.0).expect("valid default grid"), steps: 20, degree: 14, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Default tolerance of every check, in execution order.
pub const CHECKS: &[(&str, f64)] = &[
    ("fft_round_trip", 1e-12),
    ("parseval", 1e-12),
    ("inverse_of_zero", 0.0),
    ("translate_unitary", 1e-12),
    ("bessel_round_trip", 1e-12),
    ("weight_round_trip", 1e-12),
    ("energy_split", 1e-12),
    ("k_first_slice", 0.0),
    ("k_slice_norm_excess", 1e-12),
    ("dyadic_telescoping", 1e-12),
    ("trilinear_linear", 1e-12),
    ("s_symmetry", 0.0),
    ("s_zero_slice", 0.0),
    ("pairing_odd", 1e-12),
    ("a_symmetry", 0.0),
    ("a_zero_slice", 0.0),
    ("b2_symmetry", 1e-12),
    ("q_routes", 1e-10),
    ("p_polynomial_n3", 0.0),
    ("hardy_zero", 0.0),
    ("commutator_t0", 0.0),
    ("commutator_b0", 1e-12),
];

fn rel_diff(a: &ScalarField, b: &ScalarField) -> Result<f64> {
    let d = l2_norm(&a.sub(b)?);
    let s = l2_norm(b);
    Ok(if s == 0.0 { d } else { d / s })
}

fn max_diff(a: &ScalarField, b: &ScalarField) -> Result<f64> {
    Ok(a.sub(b)?.max_abs())
}

/// Random values under a Gaussian envelope, so that weights stay moderate.
fn random_field(spec: GridSpec, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = spec.half_width();
    let values = (0..spec.len())
        .map(|i| {
            let x = spec.point(i);
            let env = (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (0.1 * l * l)).exp();
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * env
        })
        .collect();
    ScalarField::from_values(spec, Space::Position, values).expect("length matches grid")
}

fn gaussian(spec: GridSpec, center: [f64; 3], width: f64) -> ScalarField {
    sample_gaussian(spec, &GaussianParams { center, ..GaussianParams::centered(width) })
}

/// Runs every check; `overrides` replaces default tolerances by name.
pub fn run_suite(config: &VerifyConfig, overrides: &BTreeMap<String, f64>) -> Result<Vec<CheckResult>> {
    for name in overrides.keys() {
        if !CHECKS.iter().any(|(n, _)| n == name) {
            return Err(Error::InvalidArgument(format!("unknown check '{name}'")));
        }
    }
    let spec = config.spec;
    let quad = SphereQuadrature::for_degree(config.degree);
    let sampler = Sampler::Spectral;
    let time = TimeGrid::new(spec.spacing(), config.steps)?;
    let f = random_field(spec, config.seed);
    let fa = gaussian(spec, [0.3, -0.2, 0.1], 1.0);
    let fb = gaussian(spec, [-0.4, 0.5, 0.0], 1.3);
    let fc = gaussian(spec, [0.0, 0.2, -0.6], 0.9);

    let mut measured: Vec<f64> = Vec::with_capacity(CHECKS.len());

    let hat = forward_transform(&f)?;
    measured.push(rel_diff(&inverse_transform(&hat)?, &f)?);
    let e_pos: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * spec.cell_volume();
    let e_hat: f64 = hat.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * spec.frequency_cell_volume()
        / (2.0 * std::f64::consts::PI).powi(3);
    measured.push((e_hat - e_pos).abs() / e_pos);
    measured.push(inverse_transform(&ScalarField::zeros(spec, Space::Frequency))?.max_abs());
    measured.push((l2_norm(&translate(&f, [0.3, -1.1, 0.7])?) - l2_norm(&f)).abs() / l2_norm(&f));
    measured.push(rel_diff(&bessel_multiplier(&bessel_multiplier(&f, 1.5), -1.5), &f)?);
    measured.push(rel_diff(&spatial_weight(&spatial_weight(&f, 2.0)?, -2.0)?, &f)?);

    let t = 1.7;
    let split = l2_norm(&cosine_propagator(&f, t)?).powi(2) + l2_norm(&abs_derivative(&sine_propagator(&f, t)?)).powi(2);
    measured.push((split - l2_norm(&f).powi(2)).abs() / l2_norm(&f).powi(2));

    let k = apply_k(&f, spec.spacing(), 6)?;
    measured.push(max_diff(&k.slices()[0], &f)?);
    let nf = l2_norm(&f);
    measured.push(k.slice_norms().iter().map(|n| (n - nf).max(0.0)).fold(0.0, f64::max) / nf);

    let levels = 3;
    let pieces = dyadic_decompose(&f, levels)?;
    let mut sum = ScalarField::zeros(spec, Space::Position);
    for p in &pieces {
        sum = sum.axpy(Complex64::new(1.0, 0.0), p)?;
    }
    let scale = (-(levels as f64)).exp2();
    let expected = ScalarField::from_values(
        spec,
        Space::Position,
        f.values()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let x = spec.point(i);
                v * chi_profile(scale * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt())
            })
            .collect(),
    )?;
    measured.push(max_diff(&sum, &expected)?);

    let (la, lb, lc) = (0.7, -0.3, 1.1);
    let linear = ScalarField::from_fn(spec, |x| Complex64::new(la * x[0] + lb * x[1] + lc * x[2], 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed);
    let inner = spec.half_width() - 2.0 * spec.spacing();
    let points: Vec<[f64; 3]> =
        (0..200).map(|_| [0; 3].map(|_| rng.random_range(-inner..inner))).collect();
    let err = sample_offgrid(&linear, &points)
        .iter()
        .zip(&points)
        .map(|(v, x)| (v.re - (la * x[0] + lb * x[1] + lc * x[2])).abs() + v.im.abs())
        .fold(0.0, f64::max);
    measured.push(err / spec.half_width());

    let s_ab = bilinear_spherical_s(&fa, &fb, 1.3, &quad, sampler)?;
    let s_ba = bilinear_spherical_s(&fb, &fa, 1.3, &quad, sampler)?;
    measured.push(max_diff(&s_ab, &s_ba)?);
    measured.push(bilinear_spherical_s(&fa, &fb, 0.0, &quad, sampler)?.max_abs());

    let odd = ScalarField::from_fn(spec, |x| Complex64::new(x[0] * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp(), 0.0));
    measured.push(spherical_pairing(&odd, 0.8, &quad, sampler)?.norm() / (4.0 * std::f64::consts::PI * odd.max_abs()));

    let a_ab = a_time_route(&fa, &fb, time, &quad, sampler)?.field;
    let a_ba = a_time_route(&fb, &fa, time, &quad, sampler)?.field;
    measured.push(
        a_ab.slices().iter().zip(a_ba.slices()).map(|(x, y)| max_diff(x, y)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max),
    );
    measured.push(a_ab.slices()[0].max_abs());

    let b_ab = b2(&fa, &fb, time, &quad, sampler)?.field;
    let b_ba = b2(&fb, &fa, time, &quad, sampler)?.field;
    measured.push(rel_diff(&b_ab, &b_ba)?);
    measured.push(q_form(&fa, &fb, &fc, time, &quad, sampler)?.rel_diff);

    measured.push(if p_polynomial(3)?.is_zero() { 0.0 } else { 1.0 });
    measured.push(hardy_transform(&[0.0; 32], 0.05)?.ratio.abs());

    let probe_spec = GridSpec::new(16, spec.half_width())?;
    let opts = ProbeOptions { restarts: 2, iterations: 4, ..ProbeOptions::default() };
    measured.push((commutator_growth_probe(probe_spec, 1.0, 0.0, opts, config.seed).estimate - 1.0).abs());
    measured.push((commutator_growth_probe(probe_spec, 0.0, 3.0, opts, config.seed).estimate - 1.0).abs());

    Ok(CHECKS
        .iter()
        .zip(measured)
        .map(|(&(name, default), m)| {
            let tolerance = overrides.get(name).copied().unwrap_or(default);
            CheckResult { name: name.to_string(), measured: m, tolerance, pass: m <= tolerance }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_overrides_apply() {
        let config = VerifyConfig { spec: GridSpec::new(16, 6.0).unwrap(), steps: 4, degree: 14, seed: 3 };
        let results = run_suite(&config, &BTreeMap::new()).unwrap();
        assert_eq!(results.len(), CHECKS.len());
        for r in &results {
            assert!(r.pass, "{r:?}");
        }
        let strict = BTreeMap::from([("parseval".to_string(), -1.0)]);
        let results = run_suite(&config, &strict).unwrap();
        assert!(!results.iter().find(|r| r.name == "parseval").unwrap().pass);
        let bad = BTreeMap::from([("nope".to_string(), 1.0)]);
        assert!(run_suite(&config, &bad).is_err());
    }
}
