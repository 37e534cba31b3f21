//! Fields on `ℝ³ × [0, T]` sampled on a uniform nonnegative time grid.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{forward_transform, inverse_transform, GridSpec, ScalarField, Space};
use crate::error::{Error, Result};

/// Behaviour under `t -> -t`, used when a field is extended to all of `ℝ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    spec: GridSpec,
    dt: f64,
    slices: Vec<ScalarField>,
}

impl SpaceTimeField {
    /// Slice `k` is the field at `t_k = k·dt`.
    pub fn new(spec: GridSpec, dt: f64, slices: Vec<ScalarField>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        if slices.is_empty() {
            return Err(Error::InvalidArgument("space-time field needs at least one slice".into()));
        }
        for s in &slices {
            if *s.spec() != spec {
                return Err(Error::GridMismatch);
            }
            s.expect_space(Space::Position)?;
        }
        Ok(Self { spec, dt, slices })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn slices(&self) -> &[ScalarField] {
        &self.slices
    }

    pub fn into_slices(self) -> Vec<ScalarField> {
        self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.slices.len()).map(|k| self.time(k)).collect()
    }

    /// Trapezoid weights on the time grid.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        trapezoid_weights(self.slices.len(), self.dt)
    }

    pub fn slice_norms(&self) -> Vec<f64> {
        self.slices.iter().map(super::l2_norm).collect()
    }

    pub fn scale(&self, c: Complex64) -> SpaceTimeField {
        SpaceTimeField {
            spec: self.spec,
            dt: self.dt,
            slices: self.slices.iter().map(|s| s.scale(c)).collect(),
        }
    }

    pub fn axpy(&self, c: Complex64, other: &SpaceTimeField) -> Result<SpaceTimeField> {
        if self.spec != other.spec || self.slices.len() != other.slices.len() || self.dt != other.dt {
            return Err(Error::GridMismatch);
        }
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a.axpy(c, b))
            .collect::<Result<_>>()?;
        Ok(SpaceTimeField { spec: self.spec, dt: self.dt, slices })
    }

    /// `‖⟨(x,t)⟩^a ⟨D_{x,t}⟩^b u‖` over `ℝ³ × ℝ`, after extending `u` to
    /// negative times with the given parity. The extended field is treated as
    /// periodic in `t` with period `2T`; the last slice should have decayed.
    pub fn sobolev_norm(&self, a: f64, b: f64, parity: Parity) -> f64 {
        let k_last = self.slices.len() - 1;
        let period = 2 * k_last.max(1);
        let npts = self.spec.len();
        let sign = match parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        // extended index j in [-K, K) stored at position (j + K)
        let extended_time = |pos: usize| pos as f64 * self.dt - k_last as f64 * self.dt;
        let source = |pos: usize| -> (usize, f64) {
            let j = pos as i64 - k_last as i64;
            if j >= 0 {
                (j as usize, 1.0)
            } else {
                ((-j) as usize, sign)
            }
        };

        let mut data: Vec<Vec<Complex64>> = if b == 0.0 {
            (0..period)
                .map(|pos| {
                    let (k, s) = source(pos);
                    self.slices[k].values().iter().map(|v| v * s).collect()
                })
                .collect()
        } else {
            let hats: Vec<ScalarField> =
                self.slices.iter().map(|s| forward_transform(s).unwrap()).collect();
            let mut data: Vec<Vec<Complex64>> = (0..period)
                .map(|pos| {
                    let (k, s) = source(pos);
                    hats[k].values().iter().map(|v| v * s).collect()
                })
                .collect();
            let mut planner = FftPlanner::new();
            let fwd = planner.plan_fft_forward(period);
            let inv = planner.plan_fft_inverse(period);
            let dtau = 2.0 * std::f64::consts::PI / (period as f64 * self.dt);
            let taus: Vec<f64> = (0..period)
                .map(|j| {
                    let j = j as i64;
                    let p = period as i64;
                    (if j < p / 2 { j } else { j - p }) as f64 * dtau
                })
                .collect();
            let mut line = vec![Complex64::new(0.0, 0.0); period];
            for idx in 0..npts {
                let xi = self.spec.frequency_point(idx);
                let xi2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                for (pos, l) in line.iter_mut().enumerate() {
                    *l = data[pos][idx];
                }
                fwd.process(&mut line);
                for (l, tau) in line.iter_mut().zip(&taus) {
                    *l *= (1.0 + xi2 + tau * tau).powf(b / 2.0) / period as f64;
                }
                inv.process(&mut line);
                for (pos, l) in line.iter().enumerate() {
                    data[pos][idx] = *l;
                }
            }
            data.iter_mut()
                .map(|v| {
                    let f = ScalarField::from_values(self.spec, Space::Frequency, std::mem::take(v))
                        .unwrap();
                    inverse_transform(&f).unwrap().into_values()
                })
                .collect()
        };

        let mut total = 0.0;
        for (pos, slab) in data.iter_mut().enumerate() {
            let t = extended_time(pos);
            for (idx, v) in slab.iter().enumerate() {
                let x = self.spec.point(idx);
                let w = (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + t * t).powf(a);
                total += w * v.norm_sqr();
            }
        }
        (total * self.spec.cell_volume() * self.dt).sqrt()
    }
}

pub fn trapezoid_weights(count: usize, dt: f64) -> Vec<f64> {
    let mut w = vec![dt; count];
    if count == 1 {
        w[0] = 0.0;
    } else {
        w[0] = dt / 2.0;
        w[count - 1] = dt / 2.0;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{sample_gaussian, GaussianParams};

    #[test]
    fn separable_gaussian_norm() {
        // u(x,t) = t e^{-t²} e^{-|x|²/2}: ‖u‖² = ∫ t² e^{-2t²} dt · π^{3/2}
        let spec = GridSpec::new(32, 8.0).unwrap();
        let base = sample_gaussian(spec, &GaussianParams::centered(1.0));
        let dt = 0.1;
        let slices = (0..=60)
            .map(|k| {
                let t = k as f64 * dt;
                base.scale(Complex64::new(t * (-t * t).exp(), 0.0))
            })
            .collect();
        let u = SpaceTimeField::new(spec, dt, slices).unwrap();
        let expected = ((std::f64::consts::PI / 2.0).sqrt() / 4.0 * std::f64::consts::PI.powf(1.5)).sqrt();
        let plain = u.sobolev_norm(0.0, 0.0, Parity::Odd);
        assert!((plain - expected).abs() / expected < 1e-8, "{plain} vs {expected}");
        let via_fft = u.sobolev_norm(0.0, 1e-300, Parity::Odd);
        assert!((via_fft - expected).abs() / expected < 1e-8);
    }

    #[test]
    fn derivative_norm_adds_time_frequency() {
        // ‖⟨D⟩ u‖² = ‖u‖² + ‖∇u‖² + ‖∂_t u‖²
        let spec = GridSpec::new(32, 8.0).unwrap();
        let base = sample_gaussian(spec, &GaussianParams::centered(1.0));
        let dt = 0.1;
        let slices = (0..=60)
            .map(|k| {
                let t = k as f64 * dt;
                base.scale(Complex64::new(t * (-t * t).exp(), 0.0))
            })
            .collect();
        let u = SpaceTimeField::new(spec, dt, slices).unwrap();
        let pi = std::f64::consts::PI;
        let time_l2 = (pi / 2.0).sqrt() / 4.0; // ∫_ℝ t² e^{-2t²}
        let time_d = 3.0 * (pi / 2.0).sqrt() / 4.0; // ∫_ℝ (1-2t²)² e^{-2t²}
        let space_l2 = pi.powf(1.5);
        let space_grad = 1.5 * pi.powf(1.5);
        let expected = (time_l2 * space_l2 + time_l2 * space_grad + time_d * space_l2).sqrt();
        let got = u.sobolev_norm(0.0, 1.0, Parity::Odd);
        assert!((got - expected).abs() / expected < 1e-6, "{got} vs {expected}");
    }
}
