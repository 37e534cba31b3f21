//! Periodic computational cube, sampled fields and the continuous Fourier
//! transform approximation.
//!
//! Position nodes are `x_i = -L + i h` with `h = 2L/N`; frequency nodes are the
//! DFT frequencies `ξ_k = π k / L`, `k = -N/2 .. N/2-1`, stored in natural DFT
//! order (index `i` carries `k = i` for `i < N/2`, `k = i - N` otherwise).
//! The transform convention is `f̂(ξ) = ∫ f(x) e^{-i x·ξ} dx`, with `(2π)^{-3}`
//! on inversion.

mod fft;
pub mod io;
mod spacetime;

pub use spacetime::{trapezoid_weights, Parity, SpaceTimeField};

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field dimension. Full fields are only supported in three dimensions.
pub const DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n_points: usize,
    half_width: f64,
}

impl GridSpec {
    pub fn new(n_points: usize, half_width: f64) -> Result<Self> {
        if n_points < 16 || n_points % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and at least 16, got {n_points}"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        Ok(Self { n_points, half_width })
    }

    pub fn n(&self) -> usize {
        self.n_points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n_points as f64
    }

    /// Frequency spacing `π / L`.
    pub fn frequency_spacing(&self) -> f64 {
        PI / self.half_width
    }

    pub fn len(&self) -> usize {
        self.n_points.pow(3)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    pub fn frequency_cell_volume(&self) -> f64 {
        self.frequency_spacing().powi(3)
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.n_points + iy) * self.n_points + iz
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let n = self.n_points;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    #[inline]
    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Position of node `idx`.
    #[inline]
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let [ix, iy, iz] = self.unravel(idx);
        [self.coordinate(ix), self.coordinate(iy), self.coordinate(iz)]
    }

    /// Signed DFT wavenumber for index `i`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n_points as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    #[inline]
    pub fn frequency(&self, i: usize) -> f64 {
        self.wavenumber(i) as f64 * self.frequency_spacing()
    }

    /// Frequency vector of node `idx` in a frequency-space field.
    #[inline]
    pub fn frequency_point(&self, idx: usize) -> [f64; 3] {
        let [ix, iy, iz] = self.unravel(idx);
        [self.frequency(ix), self.frequency(iy), self.frequency(iz)]
    }

    /// Axis frequencies in storage order.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.frequency(i)).collect()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.coordinate(i)).collect()
    }

    /// Index of the node at the origin.
    pub fn origin_index(&self) -> usize {
        let c = self.n_points / 2;
        self.index(c, c, c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Position,
    Frequency,
}

/// Complex samples on an `N³` periodic grid, tagged with the space they live in.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    spec: GridSpec,
    space: Space,
    values: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(spec: GridSpec, space: Space) -> Self {
        Self { spec, space, values: vec![Complex64::new(0.0, 0.0); spec.len()] }
    }

    pub fn from_values(spec: GridSpec, space: Space, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                spec.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("field contains non-finite samples".into()));
        }
        Ok(Self { spec, space, values })
    }

    /// Samples a function of position on every node.
    pub fn from_fn(spec: GridSpec, f: impl Fn([f64; 3]) -> Complex64) -> Self {
        let values = (0..spec.len()).map(|idx| f(spec.point(idx))).collect();
        Self { spec, space: Space::Position, values }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn expect_space(&self, expected: Space) -> Result<()> {
        if self.space == expected {
            Ok(())
        } else {
            Err(Error::WrongSpace { expected, found: self.space })
        }
    }

    pub fn check_same_grid(&self, other: &ScalarField) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn scale(&self, c: Complex64) -> ScalarField {
        self.map(|v| v * c)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> ScalarField {
        ScalarField {
            spec: self.spec,
            space: self.space,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: Complex64, other: &ScalarField) -> Result<ScalarField> {
        self.check_same_grid(other)?;
        if self.space != other.space {
            return Err(Error::WrongSpace { expected: self.space, found: other.space });
        }
        Ok(ScalarField {
            spec: self.spec,
            space: self.space,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect(),
        })
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// Largest pointwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Point reflection `x -> -x` (index `i -> (N - i) mod N` on every axis).
    pub fn reflect(&self) -> ScalarField {
        let n = self.spec.n();
        let flip = |i: usize| (n - i) % n;
        let mut out = ScalarField::zeros(self.spec, self.space);
        for idx in 0..self.spec.len() {
            let [ix, iy, iz] = self.spec.unravel(idx);
            out.values[self.spec.index(flip(ix), flip(iy), flip(iz))] = self.values[idx];
        }
        out
    }

    /// Composition with an axis permutation: `out(x) = self(x_{perm[0]}, x_{perm[1]}, x_{perm[2]})`.
    pub fn permute_axes(&self, perm: [usize; 3]) -> ScalarField {
        let mut out = ScalarField::zeros(self.spec, self.space);
        for idx in 0..self.spec.len() {
            let i = self.spec.unravel(idx);
            out.values[idx] = self.values[self.spec.index(i[perm[0]], i[perm[1]], i[perm[2]])];
        }
        out
    }

    /// Keeps every `factor`-th node of a position field, mapping a fine grid
    /// of the same box onto a coarse one.
    pub fn restrict(&self, factor: usize) -> Result<ScalarField> {
        self.expect_space(Space::Position)?;
        let n = self.spec.n();
        if factor == 0 || n % factor != 0 {
            return Err(Error::InvalidArgument(format!("cannot restrict N={n} by {factor}")));
        }
        let coarse = GridSpec::new(n / factor, self.spec.half_width())?;
        let mut out = ScalarField::zeros(coarse, Space::Position);
        for idx in 0..coarse.len() {
            let [ix, iy, iz] = coarse.unravel(idx);
            out.values[idx] = self.values[self.spec.index(ix * factor, iy * factor, iz * factor)];
        }
        Ok(out)
    }

    /// Views a frequency-space field as a function sampled on a position grid
    /// whose nodes are the frequency nodes in ascending order.
    ///
    /// The resulting grid has half-width `π/h` and spacing `π/L`.
    pub fn frequency_as_position(&self) -> Result<ScalarField> {
        self.expect_space(Space::Frequency)?;
        let n = self.spec.n();
        let spec = GridSpec::new(n, PI / self.spec.spacing())?;
        let shift = |i: usize| (i + n / 2) % n;
        let mut out = ScalarField::zeros(spec, Space::Position);
        for idx in 0..self.spec.len() {
            let [ix, iy, iz] = self.spec.unravel(idx);
            out.values[spec.index(shift(ix), shift(iy), shift(iz))] = self.values[idx];
        }
        Ok(out)
    }
}

/// Multiplies by `scale·(-1)^{ix+iy+iz}`.
fn checkerboard(values: &mut [Complex64], n: usize, scale: f64) {
    for (row, line) in values.chunks_exact_mut(n).enumerate() {
        let (ix, iy) = (row / n, row % n);
        let mut sign = if (ix + iy) % 2 == 0 { scale } else { -scale };
        for v in line.iter_mut() {
            *v *= sign;
            sign = -sign;
        }
    }
}

/// Inverse transform of raw frequency values (no validation).
pub(crate) fn inverse_raw(spec: GridSpec, mut values: Vec<Complex64>) -> Vec<Complex64> {
    checkerboard(&mut values, spec.n(), (1.0 / (2.0 * spec.half_width())).powi(3));
    fft::fft3(&mut values, spec.n(), FftDirection::Inverse);
    values
}

/// Per-axis phases `exp(i s ξ_k)` on the frequency nodes.
pub(crate) fn axis_phases(spec: &GridSpec, s: f64) -> Vec<Complex64> {
    spec.frequencies().iter().map(|&xi| Complex64::from_polar(1.0, s * xi)).collect()
}

/// Approximates the continuous transform on the frequency nodes.
pub fn forward_transform(f: &ScalarField) -> Result<ScalarField> {
    f.expect_space(Space::Position)?;
    let spec = f.spec;
    let mut values = f.values.clone();
    fft::fft3(&mut values, spec.n(), FftDirection::Forward);
    checkerboard(&mut values, spec.n(), spec.cell_volume());
    Ok(ScalarField { spec, space: Space::Frequency, values })
}

/// Inverse of [`forward_transform`], including the `(2π)^{-3}` factor.
pub fn inverse_transform(f: &ScalarField) -> Result<ScalarField> {
    f.expect_space(Space::Frequency)?;
    let spec = f.spec;
    let scale = (1.0 / (2.0 * spec.half_width())).powi(3);
    let mut values = f.values.clone();
    checkerboard(&mut values, spec.n(), scale);
    fft::fft3(&mut values, spec.n(), FftDirection::Inverse);
    Ok(ScalarField { spec, space: Space::Position, values })
}

/// Applies a frequency-side multiplier `m(ξ)` to a field in either space;
/// the result is returned in the input's space.
pub fn apply_multiplier(
    f: &ScalarField,
    multiplier: impl Fn([f64; 3]) -> Complex64,
) -> ScalarField {
    let spec = f.spec;
    match f.space {
        Space::Frequency => {
            let mut out = f.clone();
            for (idx, v) in out.values.iter_mut().enumerate() {
                *v *= multiplier(spec.frequency_point(idx));
            }
            out
        }
        Space::Position => {
            let mut hat = forward_transform(f).expect("position field");
            for (idx, v) in hat.values.iter_mut().enumerate() {
                *v *= multiplier(spec.frequency_point(idx));
            }
            inverse_transform(&hat).expect("frequency field")
        }
    }
}

/// Multiplies a frequency-space field by the separable phase
/// `exp(i s·ξ)` in place. Applied before inversion this realizes
/// `x -> f(x + s)`.
pub(crate) fn apply_shift_phase(hat: &mut [Complex64], spec: &GridSpec, shift: [f64; 3]) {
    let freqs = spec.frequencies();
    let phase = |s: f64| -> Vec<Complex64> {
        freqs.iter().map(|&xi| Complex64::from_polar(1.0, s * xi)).collect()
    };
    let (px, py, pz) = (phase(shift[0]), phase(shift[1]), phase(shift[2]));
    let n = spec.n();
    for ix in 0..n {
        for iy in 0..n {
            let pxy = px[ix] * py[iy];
            let row = &mut hat[spec.index(ix, iy, 0)..spec.index(ix, iy, 0) + n];
            for (v, p) in row.iter_mut().zip(&pz) {
                *v *= pxy * p;
            }
        }
    }
}

/// Parameters of a modulated Gaussian
/// `amplitude · exp(-|x-c|²/(2w²)) · exp(i k·x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub center: [f64; 3],
    pub width: f64,
    pub modulation: [f64; 3],
    pub amplitude: Complex64,
}

impl GaussianParams {
    pub fn centered(width: f64) -> Self {
        Self {
            center: [0.0; 3],
            width,
            modulation: [0.0; 3],
            amplitude: Complex64::new(1.0, 0.0),
        }
    }

    /// Radius of the ball treated as the effective support (6 widths).
    pub fn support_radius(&self) -> f64 {
        6.0 * self.width
    }

    pub fn evaluate(&self, x: [f64; 3]) -> Complex64 {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for d in 0..DIM {
            r2 += (x[d] - self.center[d]).powi(2);
            phase += self.modulation[d] * x[d];
        }
        self.amplitude * (-r2 / (2.0 * self.width * self.width)).exp() * Complex64::from_polar(1.0, phase)
    }

    /// Returns a message when the effective support leaves the box.
    pub fn support_warning(&self, spec: &GridSpec) -> Option<String> {
        let reach = norm3(self.center) + self.support_radius();
        (reach >= spec.half_width()).then(|| {
            format!(
                "gaussian support reaches {reach:.3}, box half-width is {:.3}",
                spec.half_width()
            )
        })
    }
}

/// Samples a modulated Gaussian on the position grid.
pub fn sample_gaussian(spec: GridSpec, params: &GaussianParams) -> ScalarField {
    ScalarField::from_fn(spec, |x| params.evaluate(x))
}

fn check_pair(f: &ScalarField, g: &ScalarField) -> Result<()> {
    f.check_same_grid(g)?;
    if f.space != g.space {
        return Err(Error::WrongSpace { expected: f.space, found: g.space });
    }
    Ok(())
}

/// Quadrature weight of one node in the field's own space.
fn measure(f: &ScalarField) -> f64 {
    match f.space {
        Space::Position => f.spec.cell_volume(),
        Space::Frequency => f.spec.frequency_cell_volume() / (2.0 * PI).powi(3),
    }
}

/// L² norm: `h³`-weighted in position space; `(Δξ/2π)³`-weighted in
/// frequency space so that Parseval holds with equal norms.
pub fn l2_norm(f: &ScalarField) -> f64 {
    (f.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * measure(f)).sqrt()
}

/// Sesquilinear product `∫ f ḡ`.
pub fn inner_product(f: &ScalarField, g: &ScalarField) -> Result<Complex64> {
    check_pair(f, g)?;
    let s: Complex64 = f.values.iter().zip(&g.values).map(|(a, b)| a * b.conj()).sum();
    Ok(s * measure(f))
}

/// Real-bilinear pairing `∫ f g` (no conjugation).
pub fn bilinear_pairing(f: &ScalarField, g: &ScalarField) -> Result<Complex64> {
    check_pair(f, g)?;
    let s: Complex64 = f.values.iter().zip(&g.values).map(|(a, b)| a * b).sum();
    Ok(s * measure(f))
}

/// Periodic translation `x -> f(x - v)`, exact for band-limited fields.
pub fn translate(f: &ScalarField, v: [f64; 3]) -> Result<ScalarField> {
    f.expect_space(Space::Position)?;
    let mut hat = forward_transform(f)?;
    apply_shift_phase(&mut hat.values, &f.spec, [-v[0], -v[1], -v[2]]);
    inverse_transform(&hat)
}

/// Evaluates the trigonometric interpolant of a frequency-space field at an
/// arbitrary point: `(2π)^{-3} Σ F(ξ) e^{i x·ξ} Δξ³`.
pub fn evaluate_spectral(hat: &ScalarField, x: [f64; 3]) -> Result<Complex64> {
    hat.expect_space(Space::Frequency)?;
    let spec = hat.spec;
    let n = spec.n();
    let freqs = spec.frequencies();
    let phase = |s: f64| -> Vec<Complex64> {
        freqs.iter().map(|&xi| Complex64::from_polar(1.0, s * xi)).collect()
    };
    let (px, py, pz) = (phase(x[0]), phase(x[1]), phase(x[2]));
    let mut acc = Complex64::new(0.0, 0.0);
    for ix in 0..n {
        for iy in 0..n {
            let base = spec.index(ix, iy, 0);
            let row: Complex64 =
                hat.values[base..base + n].iter().zip(&pz).map(|(v, p)| v * p).sum();
            acc += row * px[ix] * py[iy];
        }
    }
    Ok(acc * (1.0 / (2.0 * spec.half_width())).powi(3))
}

/// Smallest radius about `center` outside of which the field carries at most
/// a fraction `tail` of its energy.
pub fn effective_radius(f: &ScalarField, center: [f64; 3], tail: f64) -> Result<f64> {
    f.expect_space(Space::Position)?;
    let mut pairs: Vec<(f64, f64)> = f
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let x = f.spec.point(i);
            (norm3([x[0] - center[0], x[1] - center[1], x[2] - center[2]]), v.norm_sqr())
        })
        .collect();
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let budget = tail * total;
    let mut outside = 0.0;
    for &(r, e) in &pairs {
        if outside + e > budget {
            return Ok(r);
        }
        outside += e;
    }
    Ok(0.0)
}

#[inline]
pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_field(spec: GridSpec, seed: u64) -> ScalarField {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let values =
            (0..spec.len()).map(|_| Complex64::new(rng.random(), rng.random())).collect();
        ScalarField::from_values(spec, Space::Position, values).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(15, 1.0).is_err());
        assert!(GridSpec::new(8, 1.0).is_err());
        assert!(GridSpec::new(16, 0.0).is_err());
        assert!(GridSpec::new(16, -1.0).is_err());
    }

    #[test]
    fn origin_is_a_node() {
        let spec = GridSpec::new(16, 3.0).unwrap();
        assert_eq!(spec.point(spec.origin_index()), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn gaussian_transform_matches_closed_form() {
        let spec = GridSpec::new(64, 10.0).unwrap();
        let f = sample_gaussian(spec, &GaussianParams::centered(1.0));
        let hat = forward_transform(&f).unwrap();
        let c = (2.0 * PI).powf(1.5);
        let mut worst: f64 = 0.0;
        for idx in 0..spec.len() {
            let xi = spec.frequency_point(idx);
            let r = norm3(xi);
            if r <= 4.0 {
                let exact = c * (-r * r / 2.0).exp();
                worst = worst.max((hat.values()[idx].re - exact).abs().max(hat.values()[idx].im.abs()) / exact);
            }
        }
        assert!(worst <= 1e-10, "worst relative error {worst}");
    }

    #[test]
    fn zero_maps_to_zero() {
        let spec = GridSpec::new(16, 2.0).unwrap();
        let z = ScalarField::zeros(spec, Space::Position);
        assert_eq!(forward_transform(&z).unwrap().max_abs(), 0.0);
        let zf = ScalarField::zeros(spec, Space::Frequency);
        assert_eq!(inverse_transform(&zf).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn wrong_space_is_rejected() {
        let spec = GridSpec::new(16, 2.0).unwrap();
        let z = ScalarField::zeros(spec, Space::Frequency);
        assert!(matches!(forward_transform(&z), Err(Error::WrongSpace { .. })));
        assert!(inverse_transform(&z.frequency_as_position().unwrap()).is_err());
        assert!(translate(&z, [0.0; 3]).is_err());
    }

    #[test]
    fn parseval_and_round_trip() {
        let spec = GridSpec::new(16, 3.0).unwrap();
        let f = random_field(spec, 7);
        let hat = forward_transform(&f).unwrap();
        let lhs = hat.values().iter().map(|v| v.norm_sqr()).sum::<f64>()
            * spec.frequency_cell_volume()
            / (2.0 * PI).powi(3);
        let rhs = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * spec.cell_volume();
        assert!((lhs - rhs).abs() / rhs < 1e-12);
        let back = inverse_transform(&hat).unwrap();
        assert!(l2_norm(&back.sub(&f).unwrap()) / l2_norm(&f) < 1e-12);
    }

    #[test]
    fn shifted_gaussian_round_trip() {
        let spec = GridSpec::new(32, 8.0).unwrap();
        let p = GaussianParams { center: [0.7, -1.1, 0.3], ..GaussianParams::centered(1.0) };
        let f = sample_gaussian(spec, &p);
        let back = inverse_transform(&forward_transform(&f).unwrap()).unwrap();
        assert!(back.sub(&f).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn gaussian_norm_and_peak() {
        let spec = GridSpec::new(48, 8.0).unwrap();
        let p = GaussianParams { amplitude: Complex64::new(2.0, 0.0), ..GaussianParams::centered(1.0) };
        let f = sample_gaussian(spec, &p);
        let expected = 4.0 * (PI * 1.0f64).powf(1.5);
        assert!((l2_norm(&f).powi(2) - expected).abs() / expected < 1e-8);
        assert_eq!(f.values()[spec.origin_index()], Complex64::new(2.0, 0.0));
        assert_eq!(f.max_abs(), 2.0);
        let ip = inner_product(&f, &f).unwrap();
        assert!((ip.re - l2_norm(&f).powi(2)).abs() < 1e-10 && ip.im.abs() < 1e-14);
    }

    #[test]
    fn grid_centered_copy_equals_index_roll() {
        let spec = GridSpec::new(40, 10.0).unwrap();
        let h = spec.spacing();
        let f = sample_gaussian(spec, &GaussianParams::centered(1.0));
        let moved =
            sample_gaussian(spec, &GaussianParams { center: [2.0 * h, -h, 0.0], ..GaussianParams::centered(1.0) });
        let n = spec.n();
        for idx in 0..spec.len() {
            let [ix, iy, iz] = spec.unravel(idx);
            let src = spec.index((ix + n - 2) % n, (iy + 1) % n, iz);
            assert!((moved.values()[idx] - f.values()[src]).norm() < 1e-12);
        }
    }

    #[test]
    fn translate_by_one_cell_is_a_roll() {
        let spec = GridSpec::new(16, 3.0).unwrap();
        let f = random_field(spec, 3);
        let moved = translate(&f, [spec.spacing(), 0.0, 0.0]).unwrap();
        let n = spec.n();
        for idx in 0..spec.len() {
            let [ix, iy, iz] = spec.unravel(idx);
            let src = spec.index((ix + n - 1) % n, iy, iz);
            assert!((moved.values()[idx] - f.values()[src]).norm() < 1e-12);
        }
        let same = translate(&f, [0.0; 3]).unwrap();
        assert!(same.sub(&f).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn translate_is_isometric() {
        let spec = GridSpec::new(16, 3.0).unwrap();
        let f = random_field(spec, 11);
        let moved = translate(&f, [0.37, -1.3, 2.2]).unwrap();
        assert!((l2_norm(&moved) - l2_norm(&f)).abs() / l2_norm(&f) < 1e-12);
    }

    #[test]
    fn spectral_evaluation_reproduces_nodes_and_gaussian() {
        let spec = GridSpec::new(48, 8.0).unwrap();
        let p = GaussianParams::centered(1.0);
        let f = sample_gaussian(spec, &p);
        let hat = forward_transform(&f).unwrap();
        let idx = spec.index(27, 13, 30);
        let v = evaluate_spectral(&hat, spec.point(idx)).unwrap();
        assert!((v - f.values()[idx]).norm() < 1e-12);
        let x = [0.31, -0.77, 1.23];
        assert!((evaluate_spectral(&hat, x).unwrap() - p.evaluate(x)).norm() < 1e-9);
    }

    #[test]
    fn frequency_view_orders_nodes() {
        let spec = GridSpec::new(16, 4.0).unwrap();
        let f = sample_gaussian(spec, &GaussianParams::centered(1.0));
        let hat = forward_transform(&f).unwrap();
        let view = hat.frequency_as_position().unwrap();
        assert!((view.spec().spacing() - spec.frequency_spacing()).abs() < 1e-15);
        // the zero frequency sits at the view's origin node
        assert_eq!(view.values()[view.spec().origin_index()], hat.values()[0]);
    }

    #[test]
    fn restrict_keeps_shared_nodes() {
        let fine = GridSpec::new(32, 4.0).unwrap();
        let p = GaussianParams::centered(1.0);
        let coarse = sample_gaussian(fine, &p).restrict(2).unwrap();
        let direct = sample_gaussian(GridSpec::new(16, 4.0).unwrap(), &p);
        assert!(coarse.sub(&direct).unwrap().max_abs() < 1e-15);
    }
}
