use serde::Serialize;

use super::{evaluate_family, ExponentTuple, FamilyKind, FamilySpec, PipelineConfig, RatioReport};
use crate::error::{Error, Result};
use crate::grid::GaussianParams;

pub const SCAN_CSV_HEADER: &str =
    "family,param,a1,b1,a2,b2,a,b,in_main_region,in_A_region,ratio,slope,slope_stderr,warnings";

/// One family member under one exponent tuple; the slope is shared by the
/// rows of a `(σ, family)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub family: FamilyKind,
    pub param: f64,
    pub sigma: ExponentTuple,
    pub in_main_region: bool,
    pub in_a_region: bool,
    pub ratio: f64,
    pub slope: f64,
    pub slope_stderr: f64,
    pub warnings: String,
}

impl ScanRow {
    pub fn from_report(report: &RatioReport) -> Vec<ScanRow> {
        report
            .params
            .iter()
            .zip(&report.ratios)
            .zip(&report.warnings)
            .map(|((&param, &ratio), warnings)| ScanRow {
                family: report.family,
                param,
                sigma: report.sigma,
                in_main_region: report.in_main_region,
                in_a_region: report.in_a_region,
                ratio,
                slope: report.slope,
                slope_stderr: report.slope_stderr,
                // keep the column parseable
                warnings: warnings.join("; ").replace([',', '\n'], " "),
            })
            .collect()
    }

    pub fn csv_line(&self) -> String {
        let s = &self.sigma;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.10e},{:.6},{:.6},{}",
            self.family.name(),
            self.param,
            s.a1,
            s.b1,
            s.a2,
            s.b2,
            s.a,
            s.b,
            self.in_main_region,
            self.in_a_region,
            self.ratio,
            self.slope,
            self.slope_stderr,
            self.warnings
        )
    }
}

/// Header plus one line per row.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// Parses `σ₁;σ₂;...`. Inside a tuple each component may list alternatives
/// separated by `|`, which expands to the Cartesian product.
pub fn parse_sigma_list(s: &str) -> Result<Vec<ExponentTuple>> {
    let mut out = Vec::new();
    for tuple in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let comps: Vec<Vec<f64>> = tuple
            .split(',')
            .map(|c| {
                c.split('|')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad exponent '{v}' in '{tuple}'"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        if comps.len() != 6 {
            return Err(Error::Parse(format!("expected six exponents a1,b1,a2,b2,a,b, got '{tuple}'")));
        }
        let mut acc: Vec<Vec<f64>> = vec![vec![]];
        for c in &comps {
            acc = acc.iter().flat_map(|p| c.iter().map(move |v| [p.as_slice(), &[*v]].concat())).collect();
        }
        for v in acc {
            out.push(ExponentTuple::new(v[0], v[1], v[2], v[3], v[4], v[5])?);
        }
    }
    Ok(out)
}

/// Ratio sweeps for every `(σ, family)` pair. Each family is evaluated once
/// and its operator outputs are reused for all tuples.
pub fn region_scan(
    sigmas: &[ExponentTuple],
    families: &[FamilySpec],
    base: (&GaussianParams, &GaussianParams),
    config: &PipelineConfig,
) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    if sigmas.is_empty() {
        return Ok(rows);
    }
    for family in families {
        let outputs = evaluate_family(family, base, config)?;
        for sigma in sigmas {
            let report = RatioReport::from_outputs(family.kind, *sigma, config.target, &outputs, 0)?;
            rows.extend(ScanRow::from_report(&report));
        }
    }
    Ok(rows)
}
