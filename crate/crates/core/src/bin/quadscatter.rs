use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use quadscatter::backscatter::{b2, support_check, TimeGrid};
use quadscatter::grid::io::{read_field, write_field};
use quadscatter::grid::{sample_gaussian, GaussianParams, GridSpec};
use quadscatter::kernels::{oracle_csv, oracle_rows};
use quadscatter::normprobe::{parse_sigma_list, region_scan, scan_csv, FamilySpec, PipelineConfig, ProbeTarget};
use quadscatter::spectral::{commutator_growth_probe, ProbeOptions, PROBE_CSV_HEADER};
use quadscatter::sphere::{Sampler, SphereQuadrature};
use quadscatter::verify::{run_suite, VerifyConfig};
use quadscatter::{Complex64, Error, CODE_VERSION};

/// Quadratic backscattering operator: verification suites, B₂ fields,
/// kernel oracles and norm-ratio probes.
#[derive(Debug, Parser, Serialize)]
#[command(name = "quadscatter", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Serialize)]
struct Global {
    /// grid points per axis (even, ≥ 16) [default: 48, or the input files' grid]
    #[arg(long, global = true)]
    n_grid: Option<usize>,
    /// box half-width L [default: 12, or the input files' grid]
    #[arg(long = "box", global = true)]
    half_width: Option<f64>,
    /// number of time steps K [default: 20 for verify, interaction horizon otherwise]
    #[arg(long, global = true)]
    t_steps: Option<usize>,
    /// exactness degree of the sphere quadrature
    #[arg(long, global = true, default_value_t = 14)]
    sphere_degree: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// worker threads (1 gives bitwise reproducible runs)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// output path; stdout for tables when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// tolerance override `name=value`, also accepted as `--tol.name value`
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
}

#[derive(Debug, Subcommand, Serialize)]
enum Command {
    /// Run the identity suite and print a JSON summary.
    Verify,
    /// Compute B₂(f,g) from two field files.
    B2 {
        f: PathBuf,
        g: PathBuf,
    },
    /// Sample a Gaussian into a field file.
    Gaussian {
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long, value_parser = parse_vec3, default_value = "0,0,0")]
        center: [f64; 3],
        #[arg(long, value_parser = parse_vec3, default_value = "0,0,0")]
        modulation: [f64; 3],
    },
    /// Region scan: norm ratios along witness families.
    Probe {
        /// exponent tuples `a1,b1,a2,b2,a,b` separated by `;`; `|` lists alternatives
        #[arg(long)]
        sigma: String,
        /// `translate:…`, `dilate:…` or `modulate:…`; repeatable
        #[arg(long, required = true)]
        family: Vec<String>,
        #[arg(long, default_value = "b2")]
        target: String,
        /// width of the base Gaussian pair
        #[arg(long, default_value_t = 1.0)]
        width: f64,
    },
    /// Commutator growth probe over (b, t) lists.
    Commutator {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        b: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
        t: Vec<f64>,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 20)]
        iterations: usize,
    },
    /// One-dimensional kernel oracle table.
    Kernels,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let value: f64 = value.parse().map_err(|_| format!("bad tolerance '{value}'"))?;
    Ok((name.to_string(), value))
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    v.try_into().map_err(|_| format!("expected three comma-separated numbers, got '{s}'"))
}

/// Rewrites `--tol.name=value` and `--tol.name value` into `--tol name=value`.
fn rewrite_tol_flags(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut args = args.peekable();
    while let Some(a) = args.next() {
        match a.strip_prefix("--tol.") {
            Some(rest) => {
                out.push("--tol".into());
                if rest.contains('=') {
                    out.push(rest.to_string());
                } else {
                    out.push(format!("{rest}={}", args.next().unwrap_or_default()));
                }
            }
            None => out.push(a),
        }
    }
    out
}

enum Failure {
    Checks,
    Usage(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(rewrite_tol_flags(std::env::args())) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn grid(global: &Global) -> Result<GridSpec, Error> {
    GridSpec::new(global.n_grid.unwrap_or(48), global.half_width.unwrap_or(12.0))
}

/// `<out without extension>.run.json`
fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("run.json")
}

fn write_sidecar(cli: &Cli, out: &Path, extra: serde_json::Value, started: Instant) -> Result<(), Error> {
    let doc = json!({
        "code_version": CODE_VERSION,
        "argv": std::env::args().collect::<Vec<_>>(),
        "config": cli,
        "seed": cli.global.seed,
        "wall_time_s": started.elapsed().as_secs_f64(),
        "details": extra,
    });
    fs::write(sidecar_path(out), serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

/// Writes a table to `--out` (with sidecar) or stdout.
fn emit_table(cli: &Cli, text: &str, extra: serde_json::Value, started: Instant) -> Result<(), Error> {
    match &cli.global.out {
        Some(path) => {
            fs::write(path, text)?;
            write_sidecar(cli, path, extra, started)
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let started = Instant::now();
    let g = &cli.global;
    let tol: BTreeMap<String, f64> = g.tol.iter().cloned().collect();
    match &cli.command {
        Command::Verify => {
            let config = VerifyConfig { spec: grid(g)?, steps: g.t_steps.unwrap_or(20), degree: g.sphere_degree, seed: g.seed };
            let results = run_suite(&config, &tol)?;
            let pass = results.iter().all(|r| r.pass);
            let summary = json!({ "config": config, "code_version": CODE_VERSION, "pass": pass, "checks": results });
            let text = serde_json::to_string_pretty(&summary).map_err(Error::from)? + "\n";
            emit_table(cli, &text, json!({ "pass": pass }), started)?;
            for r in results.iter().filter(|r| !r.pass) {
                eprintln!("FAIL {}: measured {:e} > tolerance {:e}", r.name, r.measured, r.tolerance);
            }
            if !pass {
                return Err(Failure::Checks);
            }
        }
        Command::B2 { f, g: gpath } => {
            let out = g.out.as_ref().ok_or_else(|| Error::InvalidArgument("b2 needs --out".into()))?;
            let ff = read_field(f)?;
            let gf = if gpath == f { ff.clone() } else { read_field(gpath)? };
            ff.check_same_grid(&gf)?;
            let spec = *ff.spec();
            if g.n_grid.is_some_and(|n| n != spec.n()) || g.half_width.is_some_and(|l| l != spec.half_width()) {
                return Err(Error::InvalidGrid("--n-grid/--box disagree with the input files".into()).into());
            }
            let time = match g.t_steps {
                Some(k) => TimeGrid::new(spec.spacing(), k)?,
                None => TimeGrid::covering(&spec, &ff, &gf)?,
            };
            let quad = SphereQuadrature::for_degree(g.sphere_degree);
            let result = b2(&ff, &gf, time, &quad, Sampler::Spectral)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            write_field(out, &result.field)?;
            let outside = support_check(&ff, &gf, &result.field)?;
            let extra = json!({
                "inputs": [f, gpath],
                "N": spec.n(),
                "L": spec.half_width(),
                "K": time.steps,
                "dt": time.dt,
                "degree": quad.degree(),
                "support_fraction_outside": outside,
                "warnings": result.warnings,
            });
            write_sidecar(cli, out, extra, started)?;
        }
        Command::Gaussian { width, center, modulation } => {
            let out = g.out.as_ref().ok_or_else(|| Error::InvalidArgument("gaussian needs --out".into()))?;
            let spec = grid(g)?;
            let params = GaussianParams {
                center: *center,
                modulation: *modulation,
                width: *width,
                amplitude: Complex64::new(1.0, 0.0),
            };
            if !(params.width > 0.0) {
                return Err(Error::InvalidArgument("width must be positive".into()).into());
            }
            if let Some(w) = params.support_warning(&spec) {
                eprintln!("warning: {w}");
            }
            write_field(out, &sample_gaussian(spec, &params))?;
            write_sidecar(cli, out, json!({ "gaussian": params }), started)?;
        }
        Command::Probe { sigma, family, target, width } => {
            let sigmas = parse_sigma_list(sigma)?;
            let families = family.iter().map(|f| f.parse::<FamilySpec>()).collect::<Result<Vec<_>, _>>()?;
            let mut config = PipelineConfig::new(grid(g)?, g.sphere_degree);
            config.steps = g.t_steps;
            config.target = target.parse::<ProbeTarget>()?;
            let base = GaussianParams::centered(*width);
            let rows = region_scan(&sigmas, &families, (&base, &base), &config)?;
            emit_table(cli, &scan_csv(&rows), json!({ "families": families, "sigmas": sigmas }), started)?;
        }
        Command::Commutator { b, t, restarts, iterations } => {
            let spec = GridSpec::new(g.n_grid.unwrap_or(24), g.half_width.unwrap_or(8.0))?;
            let opts = ProbeOptions { restarts: *restarts, iterations: *iterations, ..ProbeOptions::default() };
            let mut text = format!("{PROBE_CSV_HEADER}\n");
            for &bi in b {
                for &ti in t {
                    let est = commutator_growth_probe(spec, bi, ti, opts, g.seed);
                    text.push_str(&est.csv_row());
                    text.push('\n');
                }
            }
            emit_table(cli, &text, json!({ "N": spec.n(), "L": spec.half_width() }), started)?;
        }
        Command::Kernels => {
            let spec = grid(g)?;
            let rows = oracle_rows(spec, g.seed)?;
            emit_table(cli, &oracle_csv(&rows), json!({ "N": spec.n(), "L": spec.half_width() }), started)?;
        }
    }
    Ok(())
}
