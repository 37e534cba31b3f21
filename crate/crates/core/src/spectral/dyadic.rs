//! Smooth dyadic partition of space: `χ_0 = χ`, `χ_j = χ(2^{-j}·) - χ(2^{1-j}·)`.


use crate::error::Result;
use crate::grid::{l2_norm, norm3, ScalarField, Space};

/// Radial cutoff: 1 on `r <= 1`, 0 on `r >= 2`, quintic smoothstep between.
pub fn chi_profile(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let u = r - 1.0;
        1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    }
}

/// `χ_j` evaluated at radius `r`.
pub fn dyadic_cutoff(j: usize, r: f64) -> f64 {
    if j == 0 {
        chi_profile(r)
    } else {
        let s = (-(j as f64)).exp2();
        chi_profile(s * r) - chi_profile(2.0 * s * r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicPartition {
    pub levels: usize,
}

impl DyadicPartition {
    pub fn new(levels: usize) -> Self {
        Self { levels }
    }

    /// Smallest `J` whose last cutoff `χ(2^{-J}x)` equals one on the whole box.
    pub fn covering(spec: &crate::grid::GridSpec) -> Self {
        let reach = spec.half_width() * 3f64.sqrt();
        let mut j = 0;
        while (j as f64).exp2() < reach {
            j += 1;
        }
        Self { levels: j }
    }

    pub fn piece(&self, j: usize, r: f64) -> f64 {
        dyadic_cutoff(j, r)
    }

    /// Radial interval outside which `χ_j` vanishes.
    pub fn annulus(j: usize) -> (f64, f64) {
        if j == 0 {
            (0.0, 2.0)
        } else {
            ((j as f64 - 1.0).exp2(), (j as f64 + 1.0).exp2())
        }
    }
}

/// Pieces `χ_j f`, `j = 0..=levels`.
pub fn dyadic_decompose(f: &ScalarField, levels: usize) -> Result<Vec<ScalarField>> {
    f.expect_space(Space::Position)?;
    let spec = *f.spec();
    (0..=levels)
        .map(|j| {
            let values = f
                .values()
                .iter()
                .enumerate()
                .map(|(idx, v)| v * dyadic_cutoff(j, norm3(spec.point(idx))))
                .collect();
            ScalarField::from_values(spec, Space::Position, values)
        })
        .collect()
}

/// `(Σ_j 2^{2ρj} ‖χ_j f‖²)^{1/2}`.
pub fn dyadic_norm(f: &ScalarField, rho: f64, levels: usize) -> Result<f64> {
    let pieces = dyadic_decompose(f, levels)?;
    Ok(pieces
        .iter()
        .enumerate()
        .map(|(j, p)| (2.0 * rho * j as f64).exp2() * l2_norm(p).powi(2))
        .sum::<f64>()
        .sqrt())
}
