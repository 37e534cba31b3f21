//! Exponent regions of the continuity estimates and empirical norm-ratio
//! probes along witness families.
//!
//! A probe measures `‖T(f,g)‖_(a,b) / (‖f‖_(a′,b′) ‖g‖_(a″,b″))` along a
//! one-parameter family of Gaussian pairs and fits the log-log slope. Such
//! slopes can only be consistent or inconsistent with boundedness; they do
//! not certify an estimate.

pub mod estimates;
mod scan;

pub use scan::{parse_sigma_list, region_scan, scan_csv, ScanRow, SCAN_CSV_HEADER};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backscatter::{a_time_route, b2, TimeGrid};
use crate::error::{Error, Result};
use crate::grid::{sample_gaussian, GaussianParams, GridSpec, Parity, ScalarField, SpaceTimeField};
use crate::spectral::{sobolev_norm, SobolevIndex};
use crate::sphere::{Sampler, SphereQuadrature};

/// `σ = (a′, b′, a″, b″, a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentTuple {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub a: f64,
    pub b: f64,
}

impl ExponentTuple {
    pub fn new(a1: f64, b1: f64, a2: f64, b2: f64, a: f64, b: f64) -> Result<Self> {
        let s = Self { a1, b1, a2, b2, a, b };
        if s.as_array().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("exponents must be finite: {s}")));
        }
        Ok(s)
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.a1, self.b1, self.a2, self.b2, self.a, self.b]
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{},{}", self.a1, self.b1, self.a2, self.b2, self.a, self.b)
    }
}

impl FromStr for ExponentTuple {
    type Err = Error;

    /// Six comma-separated numbers `a1,b1,a2,b2,a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::Parse(format!("expected six exponents a1,b1,a2,b2,a,b, got '{s}'")));
        }
        let v = parts
            .iter()
            .map(|p| p.parse::<f64>().map_err(|_| Error::Parse(format!("bad exponent '{p}' in '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }
}

/// Exponent conditions under which `B₂` maps `H_(a′,b′) × H_(a″,b″)` to `H_(a,b)`.
pub fn region_mainthm(s: &ExponentTuple, m: usize) -> bool {
    let m = m as f64;
    let (amin, bmin) = (s.a1.min(s.a2), s.b1.min(s.b2));
    0.0 < s.a
        && s.a < m + 0.5 + amin
        && s.a <= s.a1 + s.a2 - 0.5
        && 0.0 <= s.b
        && s.b < 1.0 + bmin
        && s.b + m <= s.b1 + s.b2
        && s.a + s.b < 0.5 + amin + bmin
}

/// Exponent conditions under which `A` maps `H_(a′,b′) × H_(a″,b″)` to `H_(a,b-m)`.
pub fn region_a(s: &ExponentTuple, m: usize) -> bool {
    let m = m as f64;
    let (amin, bmin) = (s.a1.min(s.a2), s.b1.min(s.b2));
    0.0 <= s.a
        && s.a < m + 1.0 + amin
        && s.a <= s.a1 + s.a2
        && s.b < m + 1.0 + bmin
        && s.b <= s.b1 + s.b2
        && s.a + s.b < m + 1.0 + amin + bmin
}

/// Conditions under which `S` maps `H_(a′,0) × H_(a″,0)` to `H_(a,0)`.
pub fn region_s(a1: f64, a2: f64, a: f64, m: usize) -> bool {
    a < m as f64 + 1.0 + a1.min(a2) && a <= a1 + a2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `(f(· - v), g(· - v))` with `v = param·e₁`
    Translate,
    /// `(f(λ·), g(λ·))` with `λ = param`
    Dilate,
    /// `(e^{ik·x} f, e^{ik·x} g)` with `k = param·e₁`
    Modulate,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Translate => "translate",
            FamilyKind::Dilate => "dilate",
            FamilyKind::Modulate => "modulate",
        }
    }

    /// Abscissa of the log-log fit.
    pub fn abscissa(&self, param: f64) -> f64 {
        match self {
            FamilyKind::Dilate => param.ln(),
            _ => 0.5 * (1.0 + param * param).ln(),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "translate" => Ok(FamilyKind::Translate),
            "dilate" => Ok(FamilyKind::Dilate),
            "modulate" => Ok(FamilyKind::Modulate),
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// A family kind with its parameter values, written `kind:p1,p2,...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub params: Vec<f64>,
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, list) =
            s.split_once(':').ok_or_else(|| Error::Parse(format!("expected kind:p1,p2,... got '{s}'")))?;
        let kind: FamilyKind = kind.parse()?;
        let params = list
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad family parameter '{p}'"))))
            .collect::<Result<Vec<_>>>()?;
        if params.is_empty() || params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Parse(format!("family '{s}' needs finite parameters")));
        }
        if kind == FamilyKind::Dilate && params.iter().any(|p| *p <= 0.0) {
            return Err(Error::Parse("dilation factors must be positive".into()));
        }
        Ok(Self { kind, params })
    }
}

/// One member of a witness family on its own grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Member {
    pub param: f64,
    pub spec: GridSpec,
    pub f: GaussianParams,
    pub g: GaussianParams,
    /// grid change relative to the base grid, for dilations
    pub adjustment: Option<String>,
}

/// Builds the family members. Dilations rescale the box by `1/λ`, so every
/// member is sampled at the same relative resolution.
pub fn witness_family(
    kind: FamilyKind,
    base: (&GaussianParams, &GaussianParams),
    params: &[f64],
    spec: GridSpec,
) -> Result<Vec<Member>> {
    params
        .iter()
        .map(|&p| {
            let (mut f, mut g) = (*base.0, *base.1);
            let mut member_spec = spec;
            let mut adjustment = None;
            match kind {
                FamilyKind::Translate => {
                    f.center[0] += p;
                    g.center[0] += p;
                }
                FamilyKind::Modulate => {
                    f.modulation[0] += p;
                    g.modulation[0] += p;
                }
                FamilyKind::Dilate => {
                    if p <= 0.0 {
                        return Err(Error::InvalidArgument(format!("dilation factor must be positive, got {p}")));
                    }
                    for q in [&mut f, &mut g] {
                        q.width /= p;
                        q.center = q.center.map(|c| c / p);
                        q.modulation = q.modulation.map(|k| k * p);
                    }
                    member_spec = GridSpec::new(spec.n(), spec.half_width() / p)?;
                    if p != 1.0 {
                        adjustment = Some(format!("L={:.6}", member_spec.half_width()));
                    }
                }
            }
            Ok(Member { param: p, spec: member_spec, f, g, adjustment })
        })
        .collect()
}

/// Operator whose norm ratio is probed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeTarget {
    /// `‖B₂(f,g)‖_(a,b)` on `ℝ³`
    #[default]
    B2,
    /// `‖A(f,g)‖_(a,b-m)` on `ℝ³ × ℝ`, `A` extended oddly in `t`
    A,
}

impl FromStr for ProbeTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "b2" => Ok(ProbeTarget::B2),
            "a" => Ok(ProbeTarget::A),
            other => Err(Error::Parse(format!("unknown probe target '{other}'"))),
        }
    }
}

/// Grid and quadrature shared by all members of a sweep.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub spec: GridSpec,
    /// slice count; by default the base pair's interaction horizon with margin
    pub steps: Option<usize>,
    pub quad: SphereQuadrature,
    pub sampler: Sampler,
    pub target: ProbeTarget,
}

impl PipelineConfig {
    pub fn new(spec: GridSpec, degree: usize) -> Self {
        Self { spec, steps: None, quad: SphereQuadrature::for_degree(degree), sampler: Sampler::default(), target: ProbeTarget::B2 }
    }

    fn time_for(&self, base_spec: &GridSpec, member: &Member, base: (&GaussianParams, &GaussianParams)) -> Result<TimeGrid> {
        let steps = match self.steps {
            Some(k) => k,
            None => {
                let f = sample_gaussian(*base_spec, base.0);
                let g = sample_gaussian(*base_spec, base.1);
                TimeGrid::covering(base_spec, &f, &g)?.steps
            }
        };
        TimeGrid::new(member.spec.spacing(), steps)
    }
}

#[derive(Debug, Clone)]
enum Evaluated {
    Field(ScalarField),
    SpaceTime(SpaceTimeField),
}

/// Operator output for one family member, reusable across exponent tuples.
#[derive(Debug, Clone)]
pub struct MemberOutput {
    pub member: Member,
    pub time: TimeGrid,
    f: ScalarField,
    g: ScalarField,
    out: Evaluated,
    pub warnings: Vec<String>,
}

impl MemberOutput {
    /// `‖T(f,g)‖ / (‖f‖_(a′,b′) ‖g‖_(a″,b″))` for the target `T`.
    pub fn ratio(&self, s: &ExponentTuple, m: usize) -> Result<f64> {
        let nf = sobolev_norm(&self.f, SobolevIndex::new(s.a1, s.b1))?;
        let ng = sobolev_norm(&self.g, SobolevIndex::new(s.a2, s.b2))?;
        let num = match &self.out {
            Evaluated::Field(b) => sobolev_norm(b, SobolevIndex::new(s.a, s.b))?,
            Evaluated::SpaceTime(a) => a.sobolev_norm(s.a, s.b - m as f64, Parity::Odd),
        };
        Ok(num / (nf * ng))
    }
}

/// Evaluates the target operator on every member (in parallel, ordered).
pub fn evaluate_family(
    family: &FamilySpec,
    base: (&GaussianParams, &GaussianParams),
    config: &PipelineConfig,
) -> Result<Vec<MemberOutput>> {
    let members = witness_family(family.kind, base, &family.params, config.spec)?;
    members
        .into_par_iter()
        .map(|member| {
            let time = config.time_for(&config.spec, &member, base)?;
            let f = sample_gaussian(member.spec, &member.f);
            let g = sample_gaussian(member.spec, &member.g);
            let mut warnings: Vec<String> = [member.f.support_warning(&member.spec), member.g.support_warning(&member.spec)]
                .into_iter()
                .flatten()
                .collect();
            let out = match config.target {
                ProbeTarget::B2 => {
                    let r = b2(&f, &g, time, &config.quad, config.sampler)?;
                    warnings.extend(r.warnings);
                    Evaluated::Field(r.field)
                }
                ProbeTarget::A => {
                    let r = a_time_route(&f, &g, time, &config.quad, config.sampler)?;
                    warnings.extend(r.warnings);
                    Evaluated::SpaceTime(r.field)
                }
            };
            if let Some(adj) = &member.adjustment {
                warnings.push(format!("grid adjusted: {adj}"));
            }
            Ok(MemberOutput { member, time, f, g, out, warnings })
        })
        .collect()
}

/// Least-squares line through `(x, y)`: `(slope, stderr)`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len().min(y.len());
    if n < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let sxx: f64 = x[..n].iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x[..n].iter().zip(&y[..n]).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return (f64::NAN, f64::NAN);
    }
    let slope = sxy / sxx;
    if n == 2 {
        return (slope, 0.0);
    }
    let ssr: f64 = x[..n].iter().zip(&y[..n]).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    (slope, (ssr / (n as f64 - 2.0) / sxx).sqrt())
}

/// Minimum number of trailing points used for the slope.
pub const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub family: FamilyKind,
    pub sigma: ExponentTuple,
    pub target: ProbeTarget,
    pub params: Vec<f64>,
    pub ratios: Vec<f64>,
    pub slope: f64,
    pub slope_stderr: f64,
    pub in_main_region: bool,
    pub in_a_region: bool,
    /// per family member
    pub warnings: Vec<Vec<String>>,
}

impl RatioReport {
    pub fn from_outputs(family: FamilyKind, sigma: ExponentTuple, target: ProbeTarget, outputs: &[MemberOutput], m: usize) -> Result<Self> {
        let params: Vec<f64> = outputs.iter().map(|o| o.member.param).collect();
        let ratios = outputs.iter().map(|o| o.ratio(&sigma, m)).collect::<Result<Vec<_>>>()?;
        let x: Vec<f64> = params.iter().map(|p| family.abscissa(*p)).collect();
        let y: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
        // all points when there are few, otherwise the trailing (asymptotic) ones
        let start = x.len().saturating_sub(x.len().max(MIN_FIT_POINTS));
        let (slope, slope_stderr) = fit_slope(&x[start..], &y[start..]);
        let warnings = outputs.iter().map(|o| o.warnings.clone()).collect();
        Ok(Self {
            family,
            sigma,
            target,
            params,
            ratios,
            slope,
            slope_stderr,
            in_main_region: region_mainthm(&sigma, m),
            in_a_region: region_a(&sigma, m),
            warnings,
        })
    }
}

/// Runs a family through the pipeline and reports the ratio trend for `sigma`.
pub fn ratio_sweep(
    family: &FamilySpec,
    base: (&GaussianParams, &GaussianParams),
    sigma: ExponentTuple,
    config: &PipelineConfig,
) -> Result<RatioReport> {
    let outputs = evaluate_family(family, base, config)?;
    RatioReport::from_outputs(family.kind, sigma, config.target, &outputs, 0)
}
