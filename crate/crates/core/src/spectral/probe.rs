//! Lower-bound estimates of `‖⟨D⟩^b ⟨x⟩^{it} ⟨D⟩^{-b}‖_{L²→L²}`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::bessel_multiplier;
use crate::grid::{l2_norm, GridSpec, ScalarField, Space};

pub const PROBE_CSV_HEADER: &str = "b,t,estimate,trials,seed";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOptions {
    pub restarts: usize,
    pub iterations: usize,
    /// relative change of the estimate over the last iteration that counts as converged
    pub tolerance: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self { restarts: 8, iterations: 20, tolerance: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeEstimate {
    pub b: f64,
    pub t: f64,
    pub estimate: f64,
    pub converged: bool,
    pub trials: usize,
    pub seed: u64,
}

impl ProbeEstimate {
    pub fn csv_row(&self) -> String {
        format!("{},{},{:.12e},{},{}", self.b, self.t, self.estimate, self.trials, self.seed)
    }
}

fn log_weight(spec: &GridSpec, t: f64) -> Vec<Complex64> {
    (0..spec.len())
        .map(|idx| {
            let x = spec.point(idx);
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            Complex64::from_polar(1.0, 0.5 * t * (1.0 + r2).ln())
        })
        .collect()
}

fn pointwise(f: &ScalarField, w: &[Complex64], conj: bool) -> ScalarField {
    let values = f
        .values()
        .iter()
        .zip(w)
        .map(|(v, w)| if conj { v * w.conj() } else { v * w })
        .collect();
    ScalarField::from_values(*f.spec(), Space::Position, values).unwrap()
}

/// Power iteration on `P*P` from `restarts` random starts, `P = ⟨D⟩^b ⟨x⟩^{it} ⟨D⟩^{-b}`.
///
/// Every start is drawn from its own stream `seed + restart`, so the result does
/// not depend on scheduling. The returned value never exceeds the true grid norm.
pub fn commutator_growth_probe(
    spec: GridSpec,
    b: f64,
    t: f64,
    options: ProbeOptions,
    seed: u64,
) -> ProbeEstimate {
    let mut result = ProbeEstimate {
        b,
        t,
        estimate: 1.0,
        converged: true,
        trials: options.restarts,
        seed,
    };
    if t == 0.0 {
        return result;
    }
    let w = log_weight(&spec, t);
    let apply = |f: &ScalarField| bessel_multiplier(&pointwise(&bessel_multiplier(f, -b), &w, false), b);
    let adjoint = |f: &ScalarField| bessel_multiplier(&pointwise(&bessel_multiplier(f, b), &w, true), -b);

    let runs: Vec<(f64, bool)> = (0..options.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
            let values = (0..spec.len())
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im)
                })
                .collect();
            let mut v = ScalarField::from_values(spec, Space::Position, values).unwrap();
            let mut best = 0.0f64;
            let mut prev = 0.0f64;
            let mut converged = false;
            for _ in 0..options.iterations {
                let nv = l2_norm(&v);
                v = v.scale(Complex64::new(1.0 / nv, 0.0));
                let pv = apply(&v);
                let est = l2_norm(&pv);
                best = best.max(est);
                converged = prev > 0.0 && (est - prev).abs() <= options.tolerance * est;
                prev = est;
                v = adjoint(&pv);
            }
            (best, converged)
        })
        .collect();
    let (best, converged) = runs
        .iter()
        .copied()
        .fold((0.0f64, false), |(b0, c0), (b1, c1)| if b1 > b0 { (b1, c1) } else { (b0, c0 || c1) });
    result.estimate = best;
    result.converged = converged;
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        let spec = GridSpec::new(16, 4.0).unwrap();
        let opts = ProbeOptions { restarts: 2, iterations: 3, tolerance: 1e-3 };
        assert_eq!(commutator_growth_probe(spec, 1.0, 0.0, opts, 0).estimate, 1.0);
        let e = commutator_growth_probe(spec, 0.0, 3.0, opts, 0).estimate;
        assert!((e - 1.0).abs() < 1e-12, "{e}");
    }

    #[test]
    fn estimate_is_at_least_one_and_deterministic() {
        let spec = GridSpec::new(16, 4.0).unwrap();
        let opts = ProbeOptions { restarts: 2, iterations: 5, tolerance: 1e-3 };
        let a = commutator_growth_probe(spec, 1.0, 2.0, opts, 9);
        let b = commutator_growth_probe(spec, 1.0, 2.0, opts, 9);
        assert_eq!(a, b);
        assert!(a.estimate >= 1.0 - 1e-9);
        assert_eq!(a.csv_row().split(',').count(), PROBE_CSV_HEADER.split(',').count());
    }
}
