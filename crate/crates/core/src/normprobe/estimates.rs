//! Numerical checks of the auxiliary estimates behind the continuity of `S`:
//! the cap-measure bound, the shell estimate and the dyadic off-diagonal decay.
//! Everything here is radial and reduces to one- and two-dimensional integrals.

use rayon::prelude::*;
use serde::Serialize;

use super::fit_slope;
use crate::spectral::dyadic_cutoff;
use crate::sphere::cap_measure_mc;
use crate::sphere::radial::{bump, radial_s_norm, radial_weighted_norm, Composite, RadialFn};

/// Least-squares slope of `ln y` against `ln x`: `(slope, stderr)`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    fit_slope(&lx, &ly)
}

#[derive(Debug, Clone, Serialize)]
pub struct CapSlope {
    pub s: Vec<f64>,
    pub measure: Vec<f64>,
    pub slope: f64,
    pub slope_stderr: f64,
}

/// Cap measure at `|x| = t = r` for `s = r 2^{-k}`, `k = 1..=levels`.
/// There the set is exactly a polar cap of measure `π s²/r²`.
pub fn cap_measure_slope(r: f64, levels: usize, samples: usize, seed: u64) -> CapSlope {
    let s: Vec<f64> = (1..=levels).map(|k| r * (-(k as f64)).exp2()).collect();
    let measure: Vec<f64> = s
        .iter()
        .enumerate()
        .map(|(i, &si)| cap_measure_mc([r, 0.0, 0.0], r, r, si, samples, seed.wrapping_add(i as u64)).measure)
        .collect();
    let (slope, slope_stderr) = loglog_slope(&s, &measure);
    CapSlope { s, measure, slope, slope_stderr }
}

/// Integration rules for the radial norms.
#[derive(Debug, Clone)]
pub struct RadialRules {
    pub outer: Composite,
    pub inner: Composite,
    pub line: Composite,
}

impl Default for RadialRules {
    fn default() -> Self {
        Self { outer: Composite::new(6, 48), inner: Composite::new(6, 12), line: Composite::new(8, 64) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShellRow {
    pub r: f64,
    pub s: f64,
    pub norm: f64,
    /// `(s/r)^{m+1} max(⟨r⟩^a, ⟨r+s⟩^a) ‖φ‖ ‖ψ‖` with `m = 0`
    pub bound: f64,
    pub ratio: f64,
}

/// `φ` a bump on `r/2 < |x| < 2r` and `ψ` a bump on `|x| < s`; compares
/// `‖S(φ,ψ)‖_(a,0)` with the shell bound for every `(r, s)` pair.
pub fn shell_ratio_table(pairs: &[(f64, f64)], a: f64, rules: &RadialRules) -> Vec<ShellRow> {
    pairs
        .par_iter()
        .map(|&(r, s)| {
            let phi_p = move |rho: f64| bump((rho - 1.25 * r) / (0.75 * r));
            let psi_p = move |rho: f64| bump(rho / s);
            let phi = RadialFn::new(&phi_p, 0.5 * r, 2.0 * r);
            let psi = RadialFn::new(&psi_p, 0.0, s);
            let norm = radial_s_norm(&phi, &psi, a, &rules.outer, &rules.inner);
            let japan = |v: f64| (1.0 + v * v).sqrt();
            let bound = (s / r)
                * japan(r).powf(a).max(japan(r + s).powf(a))
                * radial_weighted_norm(&phi, 0.0, &rules.line)
                * radial_weighted_norm(&psi, 0.0, &rules.line);
            ShellRow { r, s, norm, bound, ratio: norm / bound }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossRow {
    pub j: usize,
    pub k: usize,
    pub norm: f64,
    /// `‖S(χ_j f, χ_k g)‖_(a,0) 2^{ε|j-k|} / (s_j σ_k)`
    pub ratio: f64,
}

/// Off-diagonal decay table for radial `f = φ(|x|)`, `g = ψ(|x|)` and
/// `j, k < levels`, with `ε = 1 + min(a′,a″) - a` (`m = 0`).
pub fn dyadic_cross_table(
    phi: &(dyn Fn(f64) -> f64 + Sync),
    psi: &(dyn Fn(f64) -> f64 + Sync),
    (a1, a2, a): (f64, f64, f64),
    levels: usize,
    rules: &RadialRules,
) -> Vec<CrossRow> {
    let eps = 1.0 + a1.min(a2) - a;
    let range = |j: usize| if j == 0 { (0.0, 2.0) } else { ((j as f64 - 1.0).exp2(), (j as f64 + 1.0).exp2()) };
    let piece_norm = |prof: &(dyn Fn(f64) -> f64 + Sync), j: usize| {
        let p = |r: f64| dyadic_cutoff(j, r) * prof(r);
        let (lo, hi) = range(j);
        radial_weighted_norm(&RadialFn::new(&p, lo, hi), 0.0, &rules.line)
    };
    let pairs: Vec<(usize, usize)> = (0..levels).flat_map(|j| (0..levels).map(move |k| (j, k))).collect();
    pairs
        .par_iter()
        .map(|&(j, k)| {
            let pj = |r: f64| dyadic_cutoff(j, r) * phi(r);
            let pk = |r: f64| dyadic_cutoff(k, r) * psi(r);
            let (lj, hj) = range(j);
            let (lk, hk) = range(k);
            let norm = radial_s_norm(&RadialFn::new(&pj, lj, hj), &RadialFn::new(&pk, lk, hk), a, &rules.outer, &rules.inner);
            let sj = (a1 * j as f64).exp2() * piece_norm(phi, j);
            let sk = (a2 * k as f64).exp2() * piece_norm(psi, k);
            let gain = (eps * (j as f64 - k as f64).abs()).exp2();
            CrossRow { j, k, norm, ratio: norm * gain / (sj * sk) }
        })
        .collect()
}

/// `max / min` over positive finite entries.
pub fn spread(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for v in values.into_iter().filter(|v| v.is_finite() && *v > 0.0) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi == 0.0 {
        f64::NAN
    } else {
        hi / lo
    }
}
