//! Off-grid evaluation of sampled fields.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{apply_shift_phase, axis_phases, inverse_raw, inverse_transform, GridSpec, ScalarField, Space};

/// How `f(x + s)` is evaluated between grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampler {
    /// periodic trilinear interpolation, second order
    Trilinear,
    /// trigonometric interpolation without the Nyquist modes (exact periodic
    /// shift of the band-limited field)
    #[default]
    Spectral,
}

/// Continuous index coordinate of `p` along one axis.
#[inline]
fn axis_coordinate(spec: &GridSpec, space: Space, p: f64) -> f64 {
    match space {
        Space::Position => (p + spec.half_width()) / spec.spacing(),
        Space::Frequency => p / spec.frequency_spacing(),
    }
}

#[inline]
fn split(u: f64, n: usize) -> (usize, usize, f64) {
    let fl = u.floor();
    let frac = u - fl;
    let i0 = (fl as i64).rem_euclid(n as i64) as usize;
    (i0, (i0 + 1) % n, frac)
}

/// Periodic trilinear interpolation at arbitrary points. Frequency fields are
/// sampled on their own node lattice `ξ_k = πk/L`.
pub fn sample_offgrid(f: &ScalarField, points: &[[f64; 3]]) -> Vec<Complex64> {
    let spec = *f.spec();
    let n = spec.n();
    let vals = f.values();
    points
        .iter()
        .map(|p| {
            let (x0, x1, fx) = split(axis_coordinate(&spec, f.space(), p[0]), n);
            let (y0, y1, fy) = split(axis_coordinate(&spec, f.space(), p[1]), n);
            let (z0, z1, fz) = split(axis_coordinate(&spec, f.space(), p[2]), n);
            let v = |i, j, k| vals[spec.index(i, j, k)];
            let c00 = v(x0, y0, z0) * (1.0 - fz) + v(x0, y0, z1) * fz;
            let c01 = v(x0, y1, z0) * (1.0 - fz) + v(x0, y1, z1) * fz;
            let c10 = v(x1, y0, z0) * (1.0 - fz) + v(x1, y0, z1) * fz;
            let c11 = v(x1, y1, z0) * (1.0 - fz) + v(x1, y1, z1) * fz;
            let c0 = c00 * (1.0 - fy) + c01 * fy;
            let c1 = c10 * (1.0 - fy) + c11 * fy;
            c0 * (1.0 - fx) + c1 * fx
        })
        .collect()
}

/// Values of `x -> f(x + s)` on every node by trilinear interpolation. All
/// nodes share the same fractional offset, so this is an eight-point stencil.
pub fn shifted_trilinear(f: &ScalarField, s: [f64; 3]) -> Vec<Complex64> {
    let spec = *f.spec();
    let n = spec.n();
    let step = match f.space() {
        Space::Position => spec.spacing(),
        Space::Frequency => spec.frequency_spacing(),
    };
    let parts: Vec<(usize, f64)> = s
        .iter()
        .map(|&si| {
            let u = si / step;
            let fl = u.floor();
            ((fl as i64).rem_euclid(n as i64) as usize, u - fl)
        })
        .collect();
    let vals = f.values();
    let mut out = vec![Complex64::new(0.0, 0.0); spec.len()];
    for cx in 0..2 {
        let wx = if cx == 0 { 1.0 - parts[0].1 } else { parts[0].1 };
        for cy in 0..2 {
            let wy = if cy == 0 { 1.0 - parts[1].1 } else { parts[1].1 };
            for cz in 0..2 {
                let wz = if cz == 0 { 1.0 - parts[2].1 } else { parts[2].1 };
                let w = wx * wy * wz;
                if w == 0.0 {
                    continue;
                }
                let (dx, dy, dz) = (parts[0].0 + cx, parts[1].0 + cy, parts[2].0 + cz);
                for ix in 0..n {
                    let sx = (ix + dx) % n;
                    for iy in 0..n {
                        let sy = (iy + dy) % n;
                        let dst = spec.index(ix, iy, 0);
                        let src = spec.index(sx, sy, 0);
                        for iz in 0..n {
                            out[dst + iz] += vals[src + (iz + dz) % n] * w;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Values of `x -> f(x + s)` on every node from the field's transform.
pub fn shifted_spectral(hat: &ScalarField, s: [f64; 3]) -> Result<Vec<Complex64>> {
    hat.expect_space(Space::Frequency)?;
    let mut shifted = hat.clone();
    apply_shift_phase(shifted.values_mut(), hat.spec(), s);
    Ok(inverse_transform(&shifted)?.into_values())
}

/// Zeroes the Nyquist planes of a transform so that shifts of a real field
/// stay real.
pub(crate) fn drop_nyquist(hat: &mut ScalarField) {
    let spec = *hat.spec();
    let half = spec.n() / 2;
    let vals = hat.values_mut();
    for idx in 0..spec.len() {
        if spec.unravel(idx).contains(&half) {
            vals[idx] = Complex64::new(0.0, 0.0);
        }
    }
}

/// `(f(x + s), f(x - s))` for a real field from its transform (Nyquist planes
/// removed), packed into one inverse transform as `F₊ + iF₋`.
pub(crate) fn shifted_spectral_pair_real(hat: &ScalarField, s: [f64; 3]) -> (Vec<Complex64>, Vec<Complex64>) {
    let spec = *hat.spec();
    let n = spec.n();
    let (px, py, pz) = (axis_phases(&spec, s[0]), axis_phases(&spec, s[1]), axis_phases(&spec, s[2]));
    let i = Complex64::i();
    let mut packed = vec![Complex64::new(0.0, 0.0); spec.len()];
    for ix in 0..n {
        for iy in 0..n {
            let pxy = px[ix] * py[iy];
            let base = spec.index(ix, iy, 0);
            for iz in 0..n {
                // e^{is·ξ} + i e^{-is·ξ}
                let p = pxy * pz[iz];
                packed[base + iz] = hat.values()[base + iz] * (p + i * p.conj());
            }
        }
    }
    let out = inverse_raw(spec, packed);
    (
        out.iter().map(|v| Complex64::new(v.re, 0.0)).collect(),
        out.iter().map(|v| Complex64::new(v.im, 0.0)).collect(),
    )
}

pub(crate) fn check_inside(spec: &GridSpec, points: &[[f64; 3]]) -> Result<()> {
    let l = spec.half_width();
    for p in points {
        if p.iter().any(|c| c.abs() > l) {
            return Err(Error::OutOfRange(format!("point {p:?} lies outside the box")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{forward_transform, sample_gaussian, GaussianParams};
    use rand::{Rng, SeedableRng};

    #[test]
    fn nodes_are_reproduced() {
        let spec = GridSpec::new(16, 4.0).unwrap();
        let f = sample_gaussian(spec, &GaussianParams::centered(1.0));
        let idx = [spec.index(3, 9, 12), spec.index(0, 15, 8)];
        let pts: Vec<_> = idx.iter().map(|&i| spec.point(i)).collect();
        let got = sample_offgrid(&f, &pts);
        for (g, &i) in got.iter().zip(&idx) {
            assert_eq!(*g, f.values()[i]);
        }
    }

    #[test]
    fn linear_functions_are_exact_inside_cells() {
        let spec = GridSpec::new(16, 4.0).unwrap();
        let lin = |x: [f64; 3]| Complex64::new(0.3 * x[0] - 1.2 * x[1] + 0.7 * x[2] + 2.0, 0.5 * x[2]);
        let f = ScalarField::from_fn(spec, lin);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let pts: Vec<[f64; 3]> =
            (0..200).map(|_| [rng.random_range(-3.4..3.4), rng.random_range(-3.4..3.4), rng.random_range(-3.4..3.4)]).collect();
        for (p, v) in pts.iter().zip(sample_offgrid(&f, &pts)) {
            assert!((v - lin(*p)).norm() < 1e-12);
        }
    }

    fn max_error(n: usize, pts: &[[f64; 3]]) -> f64 {
        let spec = GridSpec::new(n, 6.0).unwrap();
        let p = GaussianParams::centered(1.0);
        let f = sample_gaussian(spec, &p);
        pts.iter().zip(sample_offgrid(&f, pts)).map(|(x, v)| (v - p.evaluate(*x)).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn trilinear_error_is_second_order() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<[f64; 3]> =
            (0..1000).map(|_| [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]).collect();
        let e1 = max_error(32, &pts);
        let e2 = max_error(64, &pts);
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.3, "order {order}");
        let h = 12.0 / 32.0;
        assert!(e1 <= 0.5 * h * h);
    }

    #[test]
    fn stencil_shift_matches_pointwise_sampling() {
        let spec = GridSpec::new(16, 4.0).unwrap();
        let f = sample_gaussian(spec, &GaussianParams { center: [0.3, 0.0, -0.2], ..GaussianParams::centered(1.0) });
        let s = [0.37, -1.21, 0.05];
        let shifted = shifted_trilinear(&f, s);
        let pts: Vec<[f64; 3]> = (0..spec.len())
            .map(|i| {
                let x = spec.point(i);
                [x[0] + s[0], x[1] + s[1], x[2] + s[2]]
            })
            .collect();
        for (a, b) in shifted.iter().zip(sample_offgrid(&f, &pts)) {
            assert!((a - b).norm() < 1e-14);
        }
        let spec = GridSpec::new(32, 8.0).unwrap();
        let p = GaussianParams { center: [0.3, 0.0, -0.2], ..GaussianParams::centered(1.0) };
        let f = sample_gaussian(spec, &p);
        let spectral = shifted_spectral(&forward_transform(&f).unwrap(), s).unwrap();
        for (i, v) in spectral.iter().enumerate() {
            let x = spec.point(i);
            let exact = p.evaluate([x[0] + s[0], x[1] + s[1], x[2] + s[2]]);
            assert!((v - exact).norm() < 1e-6);
        }
    }

    #[test]
    fn outside_points_are_flagged() {
        let spec = GridSpec::new(16, 4.0).unwrap();
        assert!(check_inside(&spec, &[[0.0, 4.5, 0.0]]).is_err());
        assert!(check_inside(&spec, &[[0.0, 3.5, 0.0]]).is_ok());
    }
}
