//! Comparison table of the one-dimensional kernel oracles.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{sample_gaussian, GaussianParams, GridSpec};

use super::{
    e_pairing_4am, e_pairing_direct, e_pairing_scale, hardy_transform, k0_pairing_multiplier,
    kappa0_pairing, p_polynomial, RadialProfile,
};

pub const ORACLE_CSV_HEADER: &str = "name,value,reference,rel_diff";

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub name: String,
    pub value: String,
    pub reference: String,
    pub rel_diff: Option<f64>,
}

impl OracleRow {
    fn numeric(name: impl Into<String>, value: f64, reference: f64) -> Self {
        let rel = if reference == 0.0 { value.abs() } else { (value - reference).abs() / reference.abs() };
        Self { name: name.into(), value: format!("{value:.12e}"), reference: format!("{reference:.12e}"), rel_diff: Some(rel) }
    }

    pub fn csv_row(&self) -> String {
        let rel = self.rel_diff.map(|r| format!("{r:.3e}")).unwrap_or_default();
        format!("{},{},{},{}", self.name, self.value, self.reference, rel)
    }
}

/// Kernel polynomials, κ₀/k₀ route agreement on `spec`, E-pairing routes and
/// Hardy ratios (the random suite is drawn from `seed`).
pub fn oracle_rows(spec: GridSpec, seed: u64) -> Result<Vec<OracleRow>> {
    let mut rows = Vec::new();
    for n in [3, 5, 7, 9] {
        rows.push(OracleRow {
            name: format!("p_polynomial_n{n}"),
            value: p_polynomial(n)?.to_string(),
            reference: String::new(),
            rel_diff: None,
        });
    }

    let dt = 0.005;
    let len = 2401;
    let gauss = RadialProfile::from_fn(dt, len, |t| Complex64::new(4.0 * PI * (-t * t / 2.0).exp(), 0.0))?;
    let c5 = 8.0 * PI * PI / 3.0;
    let gauss5 = RadialProfile::from_fn(dt, len, |t| Complex64::new(c5 * (-t * t / 2.0).exp(), 0.0))?;
    for t in [0.5, 0.8] {
        let v = kappa0_pairing(&gauss5, t, 5)?.re;
        let exact = (PI * (2.0 * PI).powi(-3) * t * t - 1.0 / (8.0 * PI * PI)) * c5 * (-t * t / 2.0).exp();
        rows.push(OracleRow::numeric(format!("kappa0_n5_t{t}"), v, exact));
    }

    let phi = sample_gaussian(spec, &GaussianParams::centered(1.0));
    for t in [0.2, 0.6, 1.0, 1.5] {
        let multiplier = k0_pairing_multiplier(&phi, t)?.re;
        let kappa = kappa0_pairing(&gauss, t, 3)?.re;
        rows.push(OracleRow::numeric(format!("k0_routes_t{t}"), multiplier, kappa));
    }

    let psi = RadialProfile::from_fn(dt, len, |t| Complex64::new(4.0 * PI * (1.0 + t * t) * (-t * t).exp(), 0.0))?;
    let direct = e_pairing_direct(&gauss, &psi)?.re;
    rows.push(OracleRow::numeric("e_pairing_routes", direct, e_pairing_4am(&gauss, &psi)?.re));
    let scale = e_pairing_scale(&gauss, &psi)?;
    let swap = (direct + e_pairing_direct(&psi, &gauss)?.re).abs() / scale;
    rows.push(OracleRow::numeric("e_pairing_antisymmetry", swap, 0.0));

    let hdt = 1e-3;
    let h: Vec<f64> = (0..40_001).map(|k| (-(k as f64) * hdt).exp()).collect();
    let exp_case = hardy_transform(&h, hdt)?;
    rows.push(OracleRow::numeric("hardy_exponential_integral", exp_case.integral_hh2, 2.0 * 2f64.ln()));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (c1, c2, w1, w2): (f64, f64, f64, f64) =
            (rng.random(), rng.random(), 0.2 + rng.random::<f64>(), 0.2 + rng.random::<f64>());
        let h: Vec<f64> = (0..10_001)
            .map(|k| {
                let t = k as f64 * 2e-3;
                c1 * (-t / w1).exp() + c2 * (-(t - 1.0).powi(2) / w2).exp()
            })
            .collect();
        worst = worst.max(hardy_transform(&h, 2e-3)?.ratio);
    }
    rows.push(OracleRow {
        name: "hardy_ratio_max".into(),
        value: format!("{worst:.6}"),
        reference: "4".into(),
        rel_diff: None,
    });
    Ok(rows)
}

pub fn oracle_csv(rows: &[OracleRow]) -> String {
    let mut out = String::from(ORACLE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_expected_rows() {
        let rows = oracle_rows(GridSpec::new(48, 12.0).unwrap(), 0).unwrap();
        let csv = oracle_csv(&rows);
        assert!(csv.starts_with(ORACLE_CSV_HEADER));
        assert!(csv.contains("p_polynomial_n3,0,,"));
        let get = |name: &str| rows.iter().find(|r| r.name == name).unwrap();
        assert!(get("e_pairing_routes").rel_diff.unwrap() <= 1e-3);
        assert!(get("hardy_ratio_max").value.parse::<f64>().unwrap() <= 4.0);
        for t in ["0.2", "0.6", "1", "1.5"] {
            assert!(get(&format!("k0_routes_t{t}")).rel_diff.unwrap() < 1e-2);
        }
    }
}
