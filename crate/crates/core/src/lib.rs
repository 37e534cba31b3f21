//! Quadratic backscattering operator `B₂` in three space dimensions.
//!
//! The crate computes `B₂(f, g)` and the trilinear form `Q(f, g, h)` on a
//! periodic grid by accumulating wave-propagated spherical means, checks the
//! result against an independent frequency-domain route, and provides the
//! weighted Sobolev machinery `H_(a,b)` used to probe continuity estimates.
//!
//! Modules, bottom up:
//!
//! - [`grid`]: periodic cube, continuous-Fourier-transform approximation, L² geometry.
//! - [`spectral`]: Fourier multipliers, wave propagators, Sobolev norms, dyadic pieces.
//! - [`sphere`]: quadrature on S², off-grid sampling, spherical means, radial reductions.
//! - [`kernels`]: one-dimensional oracles for the kernel polynomial, κ₀, k₀ and E.
//! - [`backscatter`]: the operators `A`, `B₂` and `Q`.
//! - [`normprobe`]: exponent-region predicates and empirical ratio sweeps.
//! - [`verify`]: the identity suite behind `quadscatter verify`.

pub mod backscatter;
pub mod error;
pub mod grid;
pub mod kernels;
pub mod normprobe;
pub mod spectral;
pub mod sphere;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{GridSpec, ScalarField, Space};

pub use num_complex::Complex64;

/// Version string recorded in every sidecar file.
pub const CODE_VERSION: &str = concat!("quadscatter ", env!("CARGO_PKG_VERSION"));
