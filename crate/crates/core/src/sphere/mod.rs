//! Spherical means: quadrature on S², off-grid sampling, the bilinear operator
//! `S(f,g)(x,t) = t ∫_{S²} f(x+tω) g(x-tω) dω`, and surface-measure checks.

mod quadrature;
pub mod radial;
mod sampling;

pub use quadrature::{gauss_legendre, SphereQuadrature};
pub use sampling::{sample_offgrid, shifted_spectral, shifted_trilinear, Sampler};
pub(crate) use sampling::drop_nyquist;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::grid::{
    effective_radius, evaluate_spectral, forward_transform, GridSpec, ScalarField, Space,
};

/// Energy tail used to assign an effective support radius to a sampled field.
pub const SUPPORT_TAIL: f64 = 1e-14;

enum Operand {
    Grid(ScalarField),
    /// transform with its Nyquist planes removed
    Hat(ScalarField),
    /// as `Hat`, for a real field
    RealHat(ScalarField),
}

impl Operand {
    fn new(f: &ScalarField, sampler: Sampler) -> Result<Self> {
        f.expect_space(Space::Position)?;
        Ok(match sampler {
            Sampler::Trilinear => Operand::Grid(f.clone()),
            Sampler::Spectral => {
                let mut hat = forward_transform(f)?;
                sampling::drop_nyquist(&mut hat);
                if f.values().iter().all(|v| v.im == 0.0) {
                    Operand::RealHat(hat)
                } else {
                    Operand::Hat(hat)
                }
            }
        })
    }

    /// `(f(x + s), f(x - s))` on every node.
    fn shifted_pair(&self, s: [f64; 3]) -> (Vec<Complex64>, Vec<Complex64>) {
        let minus = [-s[0], -s[1], -s[2]];
        match self {
            Operand::Grid(f) => (shifted_trilinear(f, s), shifted_trilinear(f, minus)),
            Operand::Hat(h) => (
                shifted_spectral(h, s).expect("frequency operand"),
                shifted_spectral(h, minus).expect("frequency operand"),
            ),
            Operand::RealHat(h) => sampling::shifted_spectral_pair_real(h, s),
        }
    }
}

/// Prepared evaluator of `S(f, g)(·, t)` for many radii `t`.
pub struct SphericalMeans<'q> {
    spec: GridSpec,
    quad: &'q SphereQuadrature,
    f: Operand,
    /// `None` when `g` equals `f`
    g: Option<Operand>,
    reach: f64,
}

impl<'q> SphericalMeans<'q> {
    pub fn new(
        f: &ScalarField,
        g: &ScalarField,
        quad: &'q SphereQuadrature,
        sampler: Sampler,
    ) -> Result<Self> {
        f.check_same_grid(g)?;
        let same = f == g;
        let reach = effective_radius(f, [0.0; 3], SUPPORT_TAIL)?
            + if same { effective_radius(f, [0.0; 3], SUPPORT_TAIL)? } else { effective_radius(g, [0.0; 3], SUPPORT_TAIL)? };
        Ok(Self {
            spec: *f.spec(),
            quad,
            f: Operand::new(f, sampler)?,
            g: if same { None } else { Some(Operand::new(g, sampler)?) },
            reach,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Sum of the effective support radii of `f` and `g` about the origin.
    pub fn interaction_reach(&self) -> f64 {
        self.reach
    }

    /// Message when `x ± tω` can wrap around the periodic box into the support.
    pub fn wrap_warning(&self, t: f64) -> Option<String> {
        let l = self.spec.half_width();
        (2.0 * t + self.reach >= 2.0 * l).then(|| {
            format!("spherical mean at t={t:.3} may wrap around the box (reach {:.3}, L={l:.3})", self.reach)
        })
    }

    /// `S(f,g)(·, t)` on every node. Antipodal node pairs are combined as
    /// `F₊G₋ + F₋G₊`, which makes the result exactly symmetric in `(f, g)`.
    pub fn slice(&self, t: f64) -> ScalarField {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.spec.len()];
        if t == 0.0 {
            return ScalarField::from_values(self.spec, Space::Position, acc).unwrap();
        }
        for &(i, _) in self.quad.antipodal_pairs() {
            let w = self.quad.weights()[i];
            let om = self.quad.nodes()[i];
            let plus = [t * om[0], t * om[1], t * om[2]];
            let (f_plus, f_minus) = self.f.shifted_pair(plus);
            match &self.g {
                None => {
                    for ((a, fp), fm) in acc.iter_mut().zip(&f_plus).zip(&f_minus) {
                        *a += (fp * fm + fm * fp) * w;
                    }
                }
                Some(g) => {
                    let (g_plus, g_minus) = g.shifted_pair(plus);
                    for i in 0..acc.len() {
                        acc[i] += (f_plus[i] * g_minus[i] + f_minus[i] * g_plus[i]) * w;
                    }
                }
            }
        }
        for a in acc.iter_mut() {
            *a *= t;
        }
        ScalarField::from_values(self.spec, Space::Position, acc).unwrap()
    }
}

/// `S(f,g)(·, t) = t Σ_i w_i f(x + tω_i) g(x - tω_i)` on every node.
pub fn bilinear_spherical_s(
    f: &ScalarField,
    g: &ScalarField,
    t: f64,
    quad: &SphereQuadrature,
    sampler: Sampler,
) -> Result<ScalarField> {
    if t < 0.0 {
        return Err(crate::Error::InvalidArgument(format!("radius must be nonnegative, got {t}")));
    }
    Ok(SphericalMeans::new(f, g, quad, sampler)?.slice(t))
}

/// `Σ_i w_i f(t ω_i)`, the spherical integral of `f` over the sphere of radius `t`.
pub fn spherical_pairing(
    f: &ScalarField,
    t: f64,
    quad: &SphereQuadrature,
    sampler: Sampler,
) -> Result<Complex64> {
    Ok(spherical_pairing_series(f, &[t], quad, sampler)?[0])
}

/// [`spherical_pairing`] for several radii, transforming `f` once.
pub fn spherical_pairing_series(
    f: &ScalarField,
    radii: &[f64],
    quad: &SphereQuadrature,
    sampler: Sampler,
) -> Result<Vec<Complex64>> {
    f.expect_space(Space::Position)?;
    let hat = match sampler {
        Sampler::Spectral => Some(forward_transform(f)?),
        Sampler::Trilinear => None,
    };
    radii
        .iter()
        .map(|&t| {
            let pts: Vec<[f64; 3]> =
                quad.nodes().iter().map(|w| [t * w[0], t * w[1], t * w[2]]).collect();
            sampling::check_inside(f.spec(), &pts)?;
            let vals = match &hat {
                Some(h) => pts.iter().map(|p| evaluate_spectral(h, *p)).collect::<Result<Vec<_>>>()?,
                None => sample_offgrid(f, &pts),
            };
            Ok(vals.iter().zip(quad.weights()).map(|(v, w)| v * *w).sum())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapEstimate {
    pub measure: f64,
    /// one Monte-Carlo standard deviation
    pub sigma: f64,
    pub hits: usize,
    pub samples: usize,
}

/// Monte-Carlo estimate of `meas{ω ∈ S²: r/2 < |x - tω| < 2r, |x + tω| < s}`.
pub fn cap_measure_mc(x: [f64; 3], t: f64, r: f64, s: f64, samples: usize, seed: u64) -> CapEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let mut w = [0.0f64; 3];
        let mut n2 = 0.0;
        while n2 == 0.0 {
            for c in w.iter_mut() {
                *c = StandardNormal.sample(&mut rng);
            }
            n2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
        }
        let n = n2.sqrt();
        let om = [w[0] / n, w[1] / n, w[2] / n];
        let minus = crate::grid::norm3([x[0] - t * om[0], x[1] - t * om[1], x[2] - t * om[2]]);
        let plus = crate::grid::norm3([x[0] + t * om[0], x[1] + t * om[1], x[2] + t * om[2]]);
        if r / 2.0 < minus && minus < 2.0 * r && plus < s {
            hits += 1;
        }
    }
    let p = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
    let sigma = if samples == 0 { 0.0 } else { 4.0 * PI * (p * (1.0 - p) / samples as f64).sqrt() };
    CapEstimate { measure: 4.0 * PI * p, sigma, hits, samples }
}
