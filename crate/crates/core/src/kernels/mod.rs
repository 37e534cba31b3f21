//! One-dimensional oracles for the wave kernels in odd dimension `n`.
//!
//! Radial test functions enter only through their spherical integrals
//! `φ̃(t) = ∫_{S^{n-1}} φ(tω) dω`, sampled as a [`RadialProfile`].

mod hardy;
mod pairing;
mod table;

pub use hardy::{hardy_transform, tail_operator_t, HardyResult};
pub use pairing::{e_pairing_4am, e_pairing_direct, e_pairing_scale};
pub use table::{oracle_rows, oracle_csv, OracleRow, ORACLE_CSV_HEADER};

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::grid::{ScalarField, Space};
use crate::spectral::sine_propagator;
use crate::sphere::{spherical_pairing_series, Sampler, SphereQuadrature};

type Rational = Ratio<i128>;

/// Largest dimension whose coefficients fit comfortably in `i128`.
pub const MAX_DIMENSION: usize = 31;

/// `p(s) = (m! (4π)^{m+1})^{-1} (-d/ds)^{m+1} (1-s²)^m`, `m = (n-3)/2`,
/// stored as exact rationals `c_k` with `p(s) = π^{-(m+1)} Σ c_k s^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelPolynomial {
    n: usize,
    coefficients: Vec<Rational>,
}

fn factorial(k: usize) -> i128 {
    (1..=k as i128).product()
}

fn binomial(m: usize, j: usize) -> i128 {
    factorial(m) / (factorial(j) * factorial(m - j))
}

/// Exact kernel polynomial for odd `n ≥ 3`.
pub fn p_polynomial(n: usize) -> Result<KernelPolynomial> {
    if n < 3 || n % 2 == 0 || n > MAX_DIMENSION {
        return Err(Error::InvalidArgument(format!(
            "kernel polynomial needs odd 3 <= n <= {MAX_DIMENSION}, got {n}"
        )));
    }
    let m = (n - 3) / 2;
    // (1 - s²)^m in the monomial basis
    let mut coeffs = vec![Rational::from_integer(0); 2 * m + 1];
    for j in 0..=m {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        coeffs[2 * j] = Rational::from_integer(sign * binomial(m, j));
    }
    for _ in 0..=m {
        coeffs = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| -c * Rational::from_integer(k as i128))
            .collect();
    }
    let scale = Rational::new(1, factorial(m) * 4i128.pow(m as u32 + 1));
    let mut coefficients: Vec<Rational> = coeffs.into_iter().map(|c| c * scale).collect();
    while coefficients.last().is_some_and(|c| *c == Rational::from_integer(0)) {
        coefficients.pop();
    }
    Ok(KernelPolynomial { n, coefficients })
}

impl KernelPolynomial {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        (self.n - 3) / 2
    }

    /// Rational coefficients of `π^{m+1} p(s)`, lowest degree first.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let poly = self
            .coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * s + *c.numer() as f64 / *c.denom() as f64);
        poly * PI.powi(-(self.m() as i32 + 1))
    }

    /// `max_{|s| ≤ 1} |p(s)|`, from the endpoints and a dense interior sweep.
    pub fn max_abs_on_unit_interval(&self) -> f64 {
        (0..=4000).map(|i| self.eval(-1.0 + i as f64 / 2000.0).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for KernelPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Rational::from_integer(0))
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*s"),
                _ => format!("{c}*s^{k}"),
            })
            .collect();
        write!(f, "pi^-{}*({})", self.m() + 1, terms.join(" + "))
    }
}

/// Samples `φ̃(t_k)` on `t_k = k·Δt`, `k = 0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    dt: f64,
    values: Vec<Complex64>,
}

impl RadialProfile {
    pub fn new(dt: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("profile step must be positive, got {dt}")));
        }
        if values.len() < 2 {
            return Err(Error::InvalidArgument("profile needs at least two samples".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("profile contains non-finite values".into()));
        }
        Ok(Self { dt, values })
    }

    pub fn from_fn(dt: f64, len: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(dt, (0..len).map(|k| f(k as f64 * dt)).collect())
    }

    /// Spherical integrals of a position field about the origin.
    pub fn from_field(
        f: &ScalarField,
        dt: f64,
        len: usize,
        quad: &SphereQuadrature,
        sampler: Sampler,
    ) -> Result<Self> {
        let radii: Vec<f64> = (0..len).map(|k| k as f64 * dt).collect();
        Self::new(dt, spherical_pairing_series(f, &radii, quad, sampler)?)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.dt
    }

    /// Linear interpolation between nodes.
    pub fn value_at(&self, t: f64) -> Result<Complex64> {
        if !(0.0..=self.t_max() * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::OutOfRange(format!("t={t} outside profile range [0, {}]", self.t_max())));
        }
        let u = t / self.dt;
        let k = (u.floor() as usize).min(self.values.len() - 2);
        let frac = u - k as f64;
        Ok(self.values[k] * (1.0 - frac) + self.values[k + 1] * frac)
    }
}

/// `⟨κ₀(·,t), φ⟩ = π(2π)^{-(n+1)/2} t^{m+1} φ̃(t) + ∫_t^∞ p(t/r) r^m φ̃(r) dr`.
///
/// The integral uses the trapezoid rule on the profile nodes, with a partial
/// first panel from `t` to the next node.
pub fn kappa0_pairing(profile: &RadialProfile, t: f64, n: usize) -> Result<Complex64> {
    let p = p_polynomial(n)?;
    let m = p.m() as i32;
    let local = profile.value_at(t)?;
    let first = local * (PI * (2.0 * PI).powf(-(n as f64 + 1.0) / 2.0) * t.powi(m + 1));
    if p.is_zero() {
        return Ok(first);
    }
    let integrand = |r: f64, v: Complex64| -> Complex64 {
        let kernel = if r == 0.0 {
            // only reached at t = 0, where p(t/r) r^m -> p(0)·0^m
            if m == 0 { p.eval(0.0) } else { 0.0 }
        } else {
            p.eval(t / r) * r.powi(m)
        };
        v * kernel
    };
    let dt = profile.dt();
    let vals = profile.values();
    let next = ((t / dt).floor() as usize + 1).min(vals.len() - 1);
    let t_next = next as f64 * dt;
    let mut acc = (integrand(t, local) + integrand(t_next, vals[next])) * (0.5 * (t_next - t));
    for k in next..vals.len() - 1 {
        let (r0, r1) = (k as f64 * dt, (k + 1) as f64 * dt);
        acc += (integrand(r0, vals[k]) + integrand(r1, vals[k + 1])) * (0.5 * dt);
    }
    Ok(first + acc)
}

/// `⟨k₀(·,t), φ⟩` for `n = 3` through the multiplier `sin(t|D|)/|D|`:
/// propagate the reflection of `φ` and read the origin node.
pub fn k0_pairing_multiplier(phi: &ScalarField, t: f64) -> Result<Complex64> {
    phi.expect_space(Space::Position)?;
    let spec = *phi.spec();
    let origin = spec.origin_index();
    if spec.point(origin).iter().any(|c| *c != 0.0) {
        return Err(Error::InvalidGrid("origin is not a grid node".into()));
    }
    let propagated = sine_propagator(&phi.reflect(), t)?;
    Ok(propagated.values()[origin])
}
