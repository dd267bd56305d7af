//! Command-line entry point: case configuration, energy-grid evaluation,
//! spectral-singularity search, reflectivity minima, reference-catalog
//! reproduction, figure data series, and direct-integration cross-checks.
//! All outputs are CSV with LF line endings, 12 significant digits, and the
//! literal token `INF` where reflection/transmission diverge at a spectral
//! singularity. Output is byte-deterministic for a given invocation,
//! independent of the parallelism degree.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ginocchio::analysis::{
    self, certify, exclude_second_ss, find_minima, refine_ss, scan_ss_candidates,
    FreeParameter, SecondSsExclusion, SpectralSingularity,
};
use ginocchio::catalog::{
    absorptive_family_spec, spec_for, v0_delta, SINGULAR_ROWS,
};
use ginocchio::oracle::{integrate_rt, OracleConfig};
use ginocchio::potential::{
    classify_profile, default_profile_grid, potential_value, PotentialSpec, Sign,
};
use ginocchio::scattering::{amplitudes, diagnostics_with, EnergyPoint, ScatteringError};
use ginocchio::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ginocchio",
    version,
    about = "Scattering observables of the complex (non-Hermitian) Ginocchio potential"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate diagnostics and observables (F, G, H, J, R, T, U) on an energy grid.
    Eval(EvalArgs),
    /// Scan for spectral singularities, refine, certify, and report.
    FindSs(FindSsArgs),
    /// Locate and refine local minima of the reflectivity R(E).
    Minima(CaseArgs),
    /// Reproduce the embedded 20-row reference catalog; report per-row verdicts.
    Table1(RunArgs),
    /// Emit the data series of a named figure (fig1|fig2a|fig2b|fig2c|fig2d|fig3).
    Figure(FigureArgs),
    /// Compare closed-form R, T against direct numerical integration.
    OracleCheck(OracleCheckArgs),
}

/// Flags shared by the case-driven subcommands. Every flag can also be given
/// in the `--config` file as `key = value`; flags override the file.
#[derive(Args, Clone, Default)]
struct CaseArgs {
    /// Plain-text config file with `key = value` lines (nu, lambda, sign,
    /// emin, emax, points, time_reversed, parallel, out).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Quantum number ν as a complex literal like `-0.6+0.5i` or `2.5i`.
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// Deformation parameter λ > 0.
    #[arg(long)]
    lambda: Option<f64>,
    /// Sign of the λ²ν(ν+1) term: `+` or `-`.
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    /// Lower end of the energy grid (default 1).
    #[arg(long)]
    emin: Option<f64>,
    /// Upper end of the energy grid (default 1000).
    #[arg(long)]
    emax: Option<f64>,
    /// Number of grid points (default 2000).
    #[arg(long)]
    points: Option<usize>,
    /// Evaluate the time-reversed (k → −k) amplitudes.
    #[arg(long)]
    time_reversed: bool,
    /// Worker threads for grid evaluation (default: machine cores).
    #[arg(long)]
    parallel: Option<usize>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flags for subcommands that take no potential spec.
#[derive(Args, Clone, Default)]
struct RunArgs {
    /// Worker threads for grid evaluation (default: machine cores).
    #[arg(long)]
    parallel: Option<usize>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    case: CaseArgs,
    /// Append direct-integration columns (oracle_R, oracle_T, step_estimate).
    #[arg(long)]
    with_oracle: bool,
}

#[derive(Args)]
struct FindSsArgs {
    #[command(flatten)]
    case: CaseArgs,
    /// Which parameter the two-dimensional refinement may vary besides E.
    #[arg(long, value_enum, default_value_t = FreeParamArg::Lambda)]
    free: FreeParamArg,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure name: fig1, fig2a, fig2b, fig2c, fig2d, or fig3.
    name: String,
    /// Worker threads for grid evaluation (default: machine cores).
    #[arg(long)]
    parallel: Option<usize>,
    /// Directory for the panel CSV files (default: stream to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleCheckArgs {
    #[command(flatten)]
    case: CaseArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FreeParamArg {
    Lambda,
    ReNu,
    ImNu,
}

impl From<FreeParamArg> for FreeParameter {
    fn from(v: FreeParamArg) -> Self {
        match v {
            FreeParamArg::Lambda => FreeParameter::Lambda,
            FreeParamArg::ReNu => FreeParameter::ReNu,
            FreeParamArg::ImNu => FreeParameter::ImNu,
        }
    }
}

/// Failures mapped to the exit-code contract: usage/config errors exit 2,
/// numerical failures exit 3.
enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

/// A fully resolved case: config file and flags merged, defaults applied.
struct Resolved {
    spec: PotentialSpec,
    e_range: (f64, f64),
    points: usize,
    time_reversed: bool,
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            3
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Eval(args) => {
            init_parallel(effective_parallel(&args.case)?);
            let resolved = resolve(&args.case)?;
            cmd_eval(&resolved, args.with_oracle)
        }
        Command::FindSs(args) => {
            init_parallel(effective_parallel(&args.case)?);
            let resolved = resolve(&args.case)?;
            cmd_find_ss(&resolved, args.free.into())
        }
        Command::Minima(case) => {
            init_parallel(effective_parallel(&case)?);
            let resolved = resolve(&case)?;
            cmd_minima(&resolved)
        }
        Command::Table1(args) => {
            init_parallel(args.parallel);
            cmd_table1(args.out.as_deref())
        }
        Command::Figure(args) => {
            init_parallel(args.parallel);
            cmd_figure(&args.name, args.out.as_deref())
        }
        Command::OracleCheck(args) => {
            init_parallel(effective_parallel(&args.case)?);
            let resolved = resolve_with_defaults(&args.case, 1.0, 1000.0, 20)?;
            cmd_oracle_check(&resolved)
        }
    }
}

fn init_parallel(n: Option<usize>) {
    if let Some(n) = n {
        // Ignore the error if a pool already exists (tests call run() twice).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parse a complex literal: `a+bi`, `a-bi`, `bi`, `a`, `i`, `-i`.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if !t.ends_with('i') {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| {
            format!("cannot parse '{s}' as a complex number (expected a+bi)")
        });
    }
    let body = &t[..t.len() - 1];
    // Split at the last +/- that is neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im_str {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        other => other.parse::<f64>().map_err(|_| ()),
    };
    let re = if re_str.is_empty() { Ok(0.0) } else { re_str.parse::<f64>().map_err(|_| ()) };
    match (re, im) {
        (Ok(re), Ok(im)) => Ok(Complex64::new(re, im)),
        _ => Err(format!("cannot parse '{s}' as a complex number (expected a+bi)")),
    }
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s.trim() {
        "+" => Ok(Sign::Plus),
        "-" => Ok(Sign::Minus),
        other => Err(format!("sign must be '+' or '-', got '{other}'")),
    }
}

fn read_config(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "config {}:{}: expected 'key = value', got '{raw}'",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    const KNOWN: [&str; 9] =
        ["nu", "lambda", "sign", "emin", "emax", "points", "time_reversed", "parallel", "out"];
    for key in map.keys() {
        if !KNOWN.contains(&key.as_str()) {
            return Err(CliError::usage(format!("config: unknown key '{key}'")));
        }
    }
    Ok(map)
}

fn effective_parallel(args: &CaseArgs) -> Result<Option<usize>, CliError> {
    if args.parallel.is_some() {
        return Ok(args.parallel);
    }
    if let Some(path) = &args.config {
        let map = read_config(path)?;
        if let Some(v) = map.get("parallel") {
            return v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| CliError::usage(format!("config: bad parallel '{v}'")));
        }
    }
    Ok(None)
}

fn resolve(args: &CaseArgs) -> Result<Resolved, CliError> {
    resolve_with_defaults(args, 1.0, 1000.0, 2000)
}

fn resolve_with_defaults(
    args: &CaseArgs,
    def_emin: f64,
    def_emax: f64,
    def_points: usize,
) -> Result<Resolved, CliError> {
    let map = match &args.config {
        Some(path) => read_config(path)?,
        None => HashMap::new(),
    };
    let get_f64 = |key: &str| -> Result<Option<f64>, CliError> {
        map.get(key)
            .map(|v| v.parse::<f64>().map_err(|_| CliError::usage(format!("config: bad {key} '{v}'"))))
            .transpose()
    };
    let nu_str = args.nu.clone().or_else(|| map.get("nu").cloned());
    let lambda = match args.lambda {
        Some(v) => Some(v),
        None => get_f64("lambda")?,
    };
    let sign_str = args.sign.clone().or_else(|| map.get("sign").cloned());
    let emin = match args.emin {
        Some(v) => v,
        None => get_f64("emin")?.unwrap_or(def_emin),
    };
    let emax = match args.emax {
        Some(v) => v,
        None => get_f64("emax")?.unwrap_or(def_emax),
    };
    let points = match args.points {
        Some(v) => v,
        None => match map.get("points") {
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("config: bad points '{v}'")))?,
            None => def_points,
        },
    };
    let time_reversed = args.time_reversed
        || match map.get("time_reversed").map(String::as_str) {
            Some("true") | Some("1") => true,
            Some("false") | Some("0") | None => false,
            Some(other) => {
                return Err(CliError::usage(format!("config: bad time_reversed '{other}'")))
            }
        };
    let out = args.out.clone().or_else(|| map.get("out").map(PathBuf::from));

    let nu_str = nu_str.ok_or_else(|| CliError::usage("missing --nu (or config nu)"))?;
    let lambda = lambda.ok_or_else(|| CliError::usage("missing --lambda (or config lambda)"))?;
    let sign_str = sign_str.ok_or_else(|| CliError::usage("missing --sign (or config sign)"))?;
    let nu = parse_complex(&nu_str).map_err(CliError::Usage)?;
    let sign = parse_sign(&sign_str).map_err(CliError::Usage)?;
    let spec = PotentialSpec::new(nu, lambda, sign)
        .map_err(|e| CliError::usage(format!("invalid potential parameters: {e}")))?;
    if !(emin > 0.0 && emax > emin) {
        return Err(CliError::usage(format!(
            "invalid energy range ({emin}, {emax}): need 0 < emin < emax"
        )));
    }
    if points < 2 {
        return Err(CliError::usage(format!("points must be at least 2, got {points}")));
    }
    Ok(Resolved { spec, e_range: (emin, emax), points, time_reversed, out })
}

/// 12-significant-digit scientific serialization; infinities become the
/// sentinel token `INF`.
fn sci(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "INF".into() } else { "-INF".into() }
    } else if x.is_nan() {
        "NAN".into()
    } else {
        format!("{x:.11e}")
    }
}

fn spec_echo(spec: &PotentialSpec, time_reversed: bool) -> String {
    format!(
        "# spec: nu = {}{}{}i, lambda = {}, sign = {}, time_reversed = {}\n",
        spec.nu.re,
        if spec.nu.im < 0.0 { "" } else { "+" },
        spec.nu.im,
        spec.lambda,
        spec.sign,
        time_reversed
    )
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// One evaluated grid row for `eval`/`oracle-check`.
struct EvalRow {
    e: f64,
    f: f64,
    g: f64,
    h: f64,
    j: f64,
    /// `None` when the singularity sentinel (or overflow guard) fired.
    rtu: Option<(f64, f64, f64)>,
}

fn eval_rows(resolved: &Resolved) -> Result<Vec<EvalRow>, CliError> {
    let grid = analysis::log_grid(resolved.e_range, resolved.points);
    let spec = &resolved.spec;
    let tr = resolved.time_reversed;
    let rows: Vec<Result<EvalRow, String>> = grid
        .par_iter()
        .map(|&e| {
            let ep = EnergyPoint::new(e).map_err(|err| format!("E = {e}: {err}"))?;
            let d = diagnostics_with(&ep, spec, tr, Default::default(), Default::default());
            let rtu = match amplitudes(&ep, spec, tr) {
                Ok(a) => {
                    if a.big_r.is_nan() || a.big_t.is_nan() {
                        return Err(format!("E = {e}: non-finite amplitudes"));
                    }
                    Some((a.big_r, a.big_t, a.u))
                }
                Err(ScatteringError::AtSingularity { .. })
                | Err(ScatteringError::NumericalOverflow { .. }) => None,
                Err(err) => return Err(format!("E = {e}: {err}")),
            };
            Ok(EvalRow { e, f: d.f(), g: d.g(), h: d.h(), j: d.j(), rtu })
        })
        .collect();
    rows.into_iter().collect::<Result<Vec<_>, _>>().map_err(CliError::Numerical)
}

fn cmd_eval(resolved: &Resolved, with_oracle: bool) -> Result<u8, CliError> {
    let rows = eval_rows(resolved)?;
    let spec = &resolved.spec;
    let re_v0 = spec.v_at_origin().re;
    let mut csv = spec_echo(spec, resolved.time_reversed);
    csv.push_str("E,re_v0,F,G,H,J,R,T,U");
    if with_oracle {
        csv.push_str(",oracle_R,oracle_T,step_estimate");
    }
    csv.push('\n');
    // Oracle columns are computed in deterministic grid order.
    let oracle_cols: Vec<Option<(f64, f64, f64)>> = if with_oracle {
        rows.par_iter()
            .map(|row| {
                let ep = EnergyPoint::new(row.e).expect("grid energies are positive");
                let config = OracleConfig::for_spec(spec, &ep);
                integrate_rt(&ep, spec, &config)
                    .ok()
                    .map(|r| (r.big_r, r.big_t, r.step_estimate))
            })
            .collect()
    } else {
        vec![None; rows.len()]
    };
    for (row, oracle) in rows.iter().zip(&oracle_cols) {
        let (r, t, u) = match row.rtu {
            Some((r, t, u)) => (sci(r), sci(t), sci(u)),
            None => ("INF".into(), "INF".into(), "INF".into()),
        };
        let _ = write!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            sci(row.e),
            sci(re_v0),
            sci(row.f),
            sci(row.g),
            sci(row.h),
            sci(row.j),
            r,
            t,
            u
        );
        if with_oracle {
            match oracle {
                Some((or, ot, est)) => {
                    let _ = write!(csv, ",{},{},{}", sci(*or), sci(*ot), sci(*est));
                }
                None => csv.push_str(",INF,INF,INF"),
            }
        }
        csv.push('\n');
    }
    emit(resolved.out.as_deref(), &csv)?;
    Ok(0)
}

/// Scan + refine + certify over the resolved range; returns certified
/// singularities, deduplicated by (n, relative E*).
fn certified_singularities(
    resolved: &Resolved,
    free: FreeParameter,
) -> Result<Vec<(SpectralSingularity, analysis::Certification)>, CliError> {
    let cands = scan_ss_candidates(&resolved.spec, resolved.e_range, resolved.points)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let mut found: Vec<(SpectralSingularity, analysis::Certification)> = Vec::new();
    for cand in cands.iter().filter(|c| c.f_distance < 0.5) {
        let Ok(ss) = refine_ss(&resolved.spec, free, cand) else { continue };
        let cert = certify(&ss);
        if !cert.is_certified() {
            continue;
        }
        let dup = found.iter().any(|(prev, _)| {
            prev.n == ss.n && (prev.e_star - ss.e_star).abs() < 1e-6 * ss.e_star
        });
        if !dup {
            found.push((ss, cert));
        }
    }
    Ok(found)
}

fn cmd_find_ss(resolved: &Resolved, free: FreeParameter) -> Result<u8, CliError> {
    let found = certified_singularities(resolved, free)?;
    let free_name = match free {
        FreeParameter::Lambda => "lambda",
        FreeParameter::ReNu => "re_nu",
        FreeParameter::ImNu => "im_nu",
    };
    let mut csv = spec_echo(&resolved.spec, resolved.time_reversed);
    let _ = write!(csv, "# certified spectral singularities: {}\n", found.len());
    csv.push_str(
        "E_star,n,residual,free_parameter,refined_value,min_flank_R,min_flank_T,second_ss_excluded,min_H\n",
    );
    for (ss, cert) in &found {
        let refined_value = match free {
            FreeParameter::Lambda => ss.refined_spec.lambda,
            FreeParameter::ReNu => ss.refined_spec.nu.re,
            FreeParameter::ImNu => ss.refined_spec.nu.im,
        };
        let exclusion = exclude_second_ss(&ss.refined_spec, resolved.e_range, resolved.points)
            .map_err(|e| CliError::usage(e.to_string()))?;
        let (excluded, min_h) = match exclusion {
            SecondSsExclusion::Excluded { min_h, .. } => (true, min_h),
            SecondSsExclusion::NotExcluded { h, .. } => (false, h),
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            sci(ss.e_star),
            ss.n,
            sci(ss.residual),
            free_name,
            sci(refined_value),
            sci(cert.min_flank_big_r),
            sci(cert.min_flank_big_t),
            excluded,
            sci(min_h)
        );
    }
    emit(resolved.out.as_deref(), &csv)?;
    Ok(if found.is_empty() { 1 } else { 0 })
}

fn cmd_minima(resolved: &Resolved) -> Result<u8, CliError> {
    let report = find_minima(&resolved.spec, resolved.e_range, resolved.points)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let mut csv = spec_echo(&resolved.spec, resolved.time_reversed);
    csv.push_str("E,R,reflectionless\n");
    for m in &report.minima {
        let _ = writeln!(csv, "{},{},{}", sci(m.e), sci(m.big_r), m.is_reflectionless);
    }
    emit(resolved.out.as_deref(), &csv)?;
    Ok(0)
}

/// Best certified reproduction of one catalog row: scan around the printed
/// E*, refine with each free parameter, keep the certified result closest
/// to the printed energy.
fn reproduce_row(
    row: &ginocchio::catalog::CatalogRow,
) -> Option<(SpectralSingularity, analysis::Certification)> {
    let spec = spec_for(row);
    let range = (0.2 * row.e_star, 3.0 * row.e_star);
    let cands = scan_ss_candidates(&spec, range, 2000).ok()?;
    let mut best: Option<(SpectralSingularity, analysis::Certification)> = None;
    for cand in cands.iter().filter(|c| c.f_distance < 0.5) {
        for free in [FreeParameter::Lambda, FreeParameter::ReNu, FreeParameter::ImNu] {
            let Ok(ss) = refine_ss(&spec, free, cand) else { continue };
            let cert = certify(&ss);
            if !cert.is_certified() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((prev, _)) => {
                    (ss.e_star - row.e_star).abs() < (prev.e_star - row.e_star).abs()
                }
            };
            if better {
                best = Some((ss, cert));
            }
        }
    }
    best
}

fn cmd_table1(out: Option<&Path>) -> Result<u8, CliError> {
    let mut csv = String::from("# reference catalog reproduction\n");
    csv.push_str(
        "index,sign,nu,lambda,e_star_printed,e_star_found,rel_e_error,n_printed,n_found,\
         v0_delta_re,v0_delta_im,profile_printed,profile_found,e_ok,n_ok,v0_ok,profile_ok,flagged,row_pass\n",
    );
    let mut all_pass = true;
    let results: Vec<_> = SINGULAR_ROWS.par_iter().map(reproduce_row).collect();
    for (row, result) in SINGULAR_ROWS.iter().zip(results) {
        let spec = spec_for(row);
        let d = v0_delta(row);
        let v0_ok_plain = d.re.abs() <= 0.01 && d.im.abs() <= 0.01;
        let v0_ok_flagged = row.v0_flagged && (d.re - 5.0).abs() <= 0.01 && d.im.abs() <= 0.01;
        let v0_ok = v0_ok_plain || v0_ok_flagged;
        let profile_found = classify_profile(&spec, &default_profile_grid(spec.lambda));
        let profile_ok = profile_found == row.profile;
        let (e_found, n_found, e_ok, n_ok) = match &result {
            Some((ss, _)) => {
                let rel = (ss.e_star - row.e_star).abs() / row.e_star;
                (ss.e_star, ss.n, rel <= 0.01, ss.n == row.n)
            }
            None => (f64::NAN, 0, false, false),
        };
        let rel_e = if e_found.is_nan() { f64::NAN } else { (e_found - row.e_star).abs() / row.e_star };
        let row_pass = e_ok && n_ok && v0_ok && profile_ok;
        all_pass &= row_pass;
        let _ = writeln!(
            csv,
            "{},{},{}{}{}i,{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.index,
            row.sign,
            row.nu.re,
            if row.nu.im < 0.0 { "" } else { "+" },
            row.nu.im,
            row.lambda,
            sci(row.e_star),
            sci(e_found),
            sci(rel_e),
            row.n,
            n_found,
            sci(d.re),
            sci(d.im),
            row.profile,
            profile_found,
            e_ok,
            n_ok,
            v0_ok,
            profile_ok,
            row.v0_flagged,
            row_pass
        );
    }
    csv.push_str("# absorptive families (no spectral singularity expected)\n");
    csv.push_str("index,a,b,candidates,certified,no_ss_confirmed\n");
    for index in [19usize, 20] {
        for (a, b) in [(1.3, 2.7), (5.5, 0.9), (7.2, 6.4)] {
            let spec = absorptive_family_spec(index, a, b);
            let resolved = Resolved {
                spec,
                e_range: (1e-3, 1000.0),
                points: 2000,
                time_reversed: false,
                out: None,
            };
            let cands =
                scan_ss_candidates(&resolved.spec, resolved.e_range, resolved.points)
                    .map_err(|e| CliError::usage(e.to_string()))?;
            let certified = certified_singularities(&resolved, FreeParameter::Lambda)?;
            let confirmed = certified.is_empty();
            all_pass &= confirmed;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{}",
                index,
                a,
                b,
                cands.len(),
                certified.len(),
                confirmed
            );
        }
    }
    emit(out, &csv)?;
    Ok(if all_pass { 0 } else { 1 })
}

/// Series of (E, R, T) rows with sentinel-aware serialization.
fn rt_series(spec: &PotentialSpec, e_range: (f64, f64), points: usize) -> Vec<(f64, String, String)> {
    analysis::log_grid(e_range, points)
        .par_iter()
        .map(|&e| {
            let ep = EnergyPoint::new(e).expect("grid energies are positive");
            match amplitudes(&ep, spec, false) {
                Ok(a) => (e, sci(a.big_r), sci(a.big_t)),
                Err(_) => (e, "INF".into(), "INF".into()),
            }
        })
        .collect()
}

fn diagnostics_series(spec: &PotentialSpec, e_range: (f64, f64), points: usize) -> Vec<(f64, f64, f64, f64, f64)> {
    analysis::log_grid(e_range, points)
        .par_iter()
        .map(|&e| {
            let ep = EnergyPoint::new(e).expect("grid energies are positive");
            let d = diagnostics_with(&ep, spec, false, Default::default(), Default::default());
            (e, d.f(), d.g(), d.h(), d.j())
        })
        .collect()
}

fn profile_panel(spec: &PotentialSpec, im_scale: f64) -> String {
    let mut csv = String::from(if im_scale == 1.0 {
        "x,re_v,im_v\n"
    } else {
        "x,re_v,im_v_x10\n"
    });
    for &x in &default_profile_grid(spec.lambda) {
        let v = potential_value(x, spec);
        let _ = writeln!(csv, "{},{},{}", sci(x), sci(v.re), sci(v.im * im_scale));
    }
    csv
}

fn cmd_figure(name: &str, out: Option<&Path>) -> Result<u8, CliError> {
    let mut panels: Vec<(String, String)> = Vec::new();
    match name {
        "fig1" => {
            // Deep-well case with the spectral singularity at E ≈ 166.72,
            // parameters refined before plotting.
            let row = ginocchio::catalog::singular_row(11);
            let spec = spec_for(row);
            let range = (1.0, 400.0);
            let cands = scan_ss_candidates(&spec, (0.2 * row.e_star, 3.0 * row.e_star), 2000)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let refined = cands
                .iter()
                .filter(|c| c.f_distance < 0.5)
                .find_map(|c| refine_ss(&spec, FreeParameter::Lambda, c).ok())
                .map(|ss| ss.refined_spec)
                .unwrap_or(spec);
            let mut a = String::from("E,R,T\n");
            for (e, r, t) in rt_series(&refined, range, 2000) {
                let _ = writeln!(a, "{},{},{}", sci(e), r, t);
            }
            panels.push(("fig1_a.csv".into(), a));
            panels.push(("fig1_b.csv".into(), profile_panel(&refined, 1.0)));
            let diag = diagnostics_series(&refined, range, 2000);
            let mut c = String::from("E,F,G\n");
            let mut dcsv = String::from("E,H,J\n");
            for (e, f, g, h, j) in diag {
                let _ = writeln!(c, "{},{},{}", sci(e), sci(f), sci(g));
                let _ = writeln!(dcsv, "{},{},{}", sci(e), sci(h), sci(j));
            }
            panels.push(("fig1_c.csv".into(), c));
            panels.push(("fig1_d.csv".into(), dcsv));
        }
        "fig2a" | "fig2b" | "fig2c" | "fig2d" => {
            // Barrier family at λ = 6: non-Hermitian reflectivity against
            // its Hermitian companion. Panels differ in the overall sign
            // and the sign of Im ν.
            let (sign, im) = match name {
                "fig2a" => (Sign::Plus, 2.0),
                "fig2b" => (Sign::Minus, 2.0),
                "fig2c" => (Sign::Plus, -2.0),
                _ => (Sign::Minus, -2.0),
            };
            let non_h = PotentialSpec::new(Complex64::new(-0.6, im), 6.0, sign)
                .expect("valid figure parameters");
            let herm = PotentialSpec::new(Complex64::new(-0.5, im), 6.0, sign)
                .expect("valid figure parameters");
            let range = (1.0, 1000.0);
            let series_n = rt_series(&non_h, range, 2000);
            let series_h = rt_series(&herm, range, 2000);
            let mut csv = String::from("E,R_nonhermitian,R_hermitian\n");
            for ((e, rn, _), (_, rh, _)) in series_n.iter().zip(&series_h) {
                let _ = writeln!(csv, "{},{},{}", sci(*e), rn, rh);
            }
            panels.push((format!("{name}.csv"), csv));
        }
        "fig3" => {
            // Shallow well-with-side-barriers case: singularity at E = 24.01
            // coexisting with deep reflectivity minima; the potential's
            // imaginary part is small and plotted ×10.
            let row = ginocchio::catalog::singular_row(17);
            let spec = spec_for(row);
            let herm = PotentialSpec::new(Complex64::new(-0.5, 0.5), 7.0, Sign::Minus)
                .expect("valid figure parameters");
            let range = (1.0, 200.0);
            let series_n = rt_series(&spec, range, 2000);
            let series_h = rt_series(&herm, range, 2000);
            let mut a = String::from("E,R,T,R_hermitian\n");
            for ((e, r, t), (_, rh, _)) in series_n.iter().zip(&series_h) {
                let _ = writeln!(a, "{},{},{},{}", sci(*e), r, t, rh);
            }
            panels.push(("fig3_a.csv".into(), a));
            panels.push(("fig3_b.csv".into(), profile_panel(&spec, 10.0)));
            let diag = diagnostics_series(&spec, range, 2000);
            let mut c = String::from("E,F,G\n");
            let mut dcsv = String::from("E,H,J\n");
            for (e, f, g, h, j) in diag {
                let _ = writeln!(c, "{},{},{}", sci(e), sci(f), sci(g));
                let _ = writeln!(dcsv, "{},{},{}", sci(e), sci(h), sci(j));
            }
            panels.push(("fig3_c.csv".into(), c));
            panels.push(("fig3_d.csv".into(), dcsv));
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown figure '{other}' (expected fig1, fig2a, fig2b, fig2c, fig2d, or fig3)"
            )))
        }
    }
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
            for (file, content) in &panels {
                let path = dir.join(file);
                std::fs::write(&path, content)
                    .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
            }
        }
        None => {
            let mut all = String::new();
            for (file, content) in &panels {
                let _ = writeln!(all, "# file: {file}");
                all.push_str(content);
            }
            print!("{all}");
        }
    }
    Ok(0)
}

fn cmd_oracle_check(resolved: &Resolved) -> Result<u8, CliError> {
    let rows = eval_rows(resolved)?;
    let spec = &resolved.spec;
    let mut csv = spec_echo(spec, resolved.time_reversed);
    csv.push_str("E,R,T,oracle_R,oracle_T,rel_err_R,rel_err_T,step_estimate,a_magnitude\n");
    let oracle_results: Vec<_> = rows
        .par_iter()
        .map(|row| {
            let ep = EnergyPoint::new(row.e).expect("grid energies are positive");
            let config = OracleConfig::for_spec(spec, &ep);
            integrate_rt(&ep, spec, &config)
        })
        .collect();
    let mut all_ok = true;
    let agree = |x: f64, y: f64| (x - y).abs() <= 1e-3 * x.abs().max(y.abs()).max(1e-6);
    for (row, oracle) in rows.iter().zip(oracle_results) {
        let oracle = oracle.map_err(|e| CliError::Numerical(format!("E = {}: {e}", row.e)))?;
        match row.rtu {
            Some((r, t, _)) => {
                let rel_r = (r - oracle.big_r).abs() / r.abs().max(oracle.big_r.abs()).max(1e-6);
                let rel_t = (t - oracle.big_t).abs() / t.abs().max(oracle.big_t.abs()).max(1e-6);
                if !(agree(r, oracle.big_r) && agree(t, oracle.big_t)) {
                    all_ok = false;
                }
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{},{}",
                    sci(row.e),
                    sci(r),
                    sci(t),
                    sci(oracle.big_r),
                    sci(oracle.big_t),
                    sci(rel_r),
                    sci(rel_t),
                    sci(oracle.step_estimate),
                    sci(oracle.a_magnitude)
                );
            }
            None => {
                // On a singular point the closed form has no finite value;
                // report the oracle side alone and exclude from the verdict.
                let _ = writeln!(
                    csv,
                    "{},INF,INF,{},{},NAN,NAN,{},{}",
                    sci(row.e),
                    sci(oracle.big_r),
                    sci(oracle.big_t),
                    sci(oracle.step_estimate),
                    sci(oracle.a_magnitude)
                );
            }
        }
    }
    let _ = writeln!(csv, "# agreement_within_1e-3 = {all_ok}");
    emit(resolved.out.as_deref(), &csv)?;
    Ok(if all_ok { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals_parse() {
        assert_eq!(parse_complex("-0.6+0.5i").unwrap(), Complex64::new(-0.6, 0.5));
        assert_eq!(parse_complex("1-4.5i").unwrap(), Complex64::new(1.0, -4.5));
        assert_eq!(parse_complex("-2.65i").unwrap(), Complex64::new(0.0, -2.65));
        assert_eq!(parse_complex("3.75").unwrap(), Complex64::new(3.75, 0.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-2+2e-3i").unwrap(), Complex64::new(0.01, 0.002));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn sign_literals_parse() {
        assert_eq!(parse_sign("+").unwrap(), Sign::Plus);
        assert_eq!(parse_sign("-").unwrap(), Sign::Minus);
        assert!(parse_sign("x").is_err());
    }

    #[test]
    fn sci_formats_sentinels() {
        assert_eq!(sci(f64::INFINITY), "INF");
        assert_eq!(sci(1.0), "1.00000000000e0");
    }
}
