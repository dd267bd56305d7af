//! Search procedures built on the closed-form diagnostics: locating
//! spectral-singularity candidates on an energy grid, two-parameter Newton
//! refinement, certification against the amplitude blow-up, exclusion of a
//! second singularity via positivity of `H(E)`, reflectivity-minima
//! detection, and unitarity (`U = 1`) crossings.

use crate::potential::PotentialSpec;
use crate::scattering::{
    amplitudes, diagnostics, diagnostics_with, EnergyPoint, MuBranch, ScatteringError,
    SignBinding, SingularityDiagnostics,
};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

/// Residual tolerance (on both `|F − n|` and `|G|`) below which a refined
/// singularity counts as converged.
pub const CERTIFICATION_TOL: f64 = 1e-9;

/// Bisection target for grid roots of `G(E)`.
const G_BISECT_TOL: f64 = 1e-10;

/// Relative energy tolerance for golden-section refinement of minima.
const GOLDEN_REL_TOL: f64 = 1e-8;

/// Relative energy tolerance for unitarity-crossing bisection.
const CROSSING_REL_TOL: f64 = 1e-8;

/// Reflectivity below which a minimum is flagged as reflectionless.
pub const REFLECTIONLESS_TOL: f64 = 1e-9;

/// Errors from the search and refinement procedures.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum AnalysisError {
    /// Energy range must satisfy `0 < min < max`.
    #[error("invalid energy range ({0}, {1}): need 0 < min < max")]
    InvalidRange(f64, f64),
    /// Grids below 100 points are too coarse to trust sign-change scans.
    #[error("grid must have at least 100 points, got {0}")]
    GridTooSmall(usize),
    /// Seed is not close enough to an integer to define the target `n`.
    #[error("seed too far from an integer: |F - n| = {f_distance} >= 0.5")]
    DegenerateSeed {
        /// The seed's distance from its nearest integer.
        f_distance: f64,
    },
    /// Newton failed to converge; carries the best iterate found.
    #[error(
        "no convergence after {iterations} iterations: best E = {e}, parameter = {parameter}, residuals ({residual_f:.3e}, {residual_g:.3e})"
    )]
    NoConvergence {
        /// Iterations performed.
        iterations: usize,
        /// Best energy iterate.
        e: f64,
        /// Best free-parameter iterate.
        parameter: f64,
        /// `|F − n|` at the best iterate.
        residual_f: f64,
        /// `|G|` at the best iterate.
        residual_g: f64,
    },
}

/// A grid root of `G(E)` whose `F` value sits near a non-positive integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsCandidate {
    /// Bisected energy of the `G` zero.
    pub e_hat: f64,
    /// Nearest integer to `F(Ê)` (always ≤ 0; positive hits are discarded).
    pub nearest_n: i64,
    /// `|F(Ê) − n|`.
    pub f_distance: f64,
}

/// Which potential parameter the Newton refinement may vary alongside `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeParameter {
    /// Vary the deformation parameter λ.
    Lambda,
    /// Vary `Re ν`.
    ReNu,
    /// Vary `Im ν`.
    ImNu,
}

impl FreeParameter {
    fn read(&self, spec: &PotentialSpec) -> f64 {
        match self {
            FreeParameter::Lambda => spec.lambda,
            FreeParameter::ReNu => spec.nu.re,
            FreeParameter::ImNu => spec.nu.im,
        }
    }

    fn apply(&self, spec: &PotentialSpec, value: f64) -> Option<PotentialSpec> {
        let (nu, lambda) = match self {
            FreeParameter::Lambda => (spec.nu, value),
            FreeParameter::ReNu => (Complex64::new(value, spec.nu.im), spec.lambda),
            FreeParameter::ImNu => (Complex64::new(spec.nu.re, value), spec.lambda),
        };
        PotentialSpec::new(nu, lambda, spec.sign).ok()
    }
}

/// A refined, converged spectral singularity.
#[derive(Debug, Clone)]
pub struct SpectralSingularity {
    /// The singular energy.
    pub e_star: f64,
    /// The non-positive integer value of `Δ(E*)`.
    pub n: i64,
    /// `|Δ(E*) − n|` after refinement.
    pub residual: f64,
    /// The spec with the refined free parameter (identical to the input when
    /// the printed parameters already solve the system).
    pub refined_spec: PotentialSpec,
}

/// Independent certification evidence for a refined singularity.
#[derive(Debug, Clone, Copy)]
pub struct Certification {
    /// `|Δ(E*) − n|`.
    pub residual: f64,
    /// Smaller of the two flank reflectivities at `E*(1 ± 1e−6)`.
    pub min_flank_big_r: f64,
    /// Smaller of the two flank transmissions at `E*(1 ± 1e−6)`.
    pub min_flank_big_t: f64,
    /// Whether the amplitude evaluator's singularity sentinel fires at `E*`.
    pub sentinel_triggered: bool,
}

impl Certification {
    /// All certification conditions: converged residual, both flanks blown
    /// up past 1e4, and the sentinel firing inside the bracket.
    pub fn is_certified(&self) -> bool {
        self.residual < CERTIFICATION_TOL
            && self.min_flank_big_r > 1e4
            && self.min_flank_big_t > 1e4
            && self.sentinel_triggered
    }
}

/// One refined local reflectivity minimum.
#[derive(Debug, Clone, Copy)]
pub struct ReflectivityMinimum {
    /// Energy of the minimum.
    pub e: f64,
    /// Reflectivity at the minimum.
    pub big_r: f64,
    /// `R < 1e−9` at the minimum.
    pub is_reflectionless: bool,
}

/// All strict local reflectivity minima on a grid, refined and sorted by `E`.
#[derive(Debug, Clone, Default)]
pub struct MinimaReport {
    /// The minima, ascending in energy.
    pub minima: Vec<ReflectivityMinimum>,
}

/// Outcome of the `H(E) > 0` check that rules out a second singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SecondSsExclusion {
    /// `H` stayed positive at every grid point and every refined `H` minimum.
    Excluded {
        /// The smallest `H` seen.
        min_h: f64,
        /// Where it occurred.
        at_e: f64,
    },
    /// `H ≤ 0` somewhere: a second singularity cannot be ruled out.
    NotExcluded {
        /// A witness energy with `H ≤ 0`.
        witness_e: f64,
        /// The offending `H` value.
        h: f64,
    },
}

/// Unitarity structure of `U(E) = R + T` over a range.
#[derive(Debug, Clone, Default)]
pub struct UnitarityReport {
    /// Energies where `U − 1` changes sign, bisected to relative 1e−8.
    pub crossings: Vec<f64>,
    /// Degenerate Hermitian outcome: `U = 1` across the whole grid, so
    /// "crossings" are meaningless and the list is left empty.
    pub everywhere_unitary: bool,
}

fn validate_range(e_range: (f64, f64), grid_points: usize) -> Result<(), AnalysisError> {
    let (lo, hi) = e_range;
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) {
        return Err(AnalysisError::InvalidRange(lo, hi));
    }
    if grid_points < 100 {
        return Err(AnalysisError::GridTooSmall(grid_points));
    }
    Ok(())
}

/// Log-spaced energy grid over `[lo, hi]` inclusive.
pub fn log_grid(e_range: (f64, f64), grid_points: usize) -> Vec<f64> {
    let (lo, hi) = e_range;
    let (llo, lhi) = (lo.ln(), hi.ln());
    let n = grid_points.max(2);
    (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn diag_at(spec: &PotentialSpec, e: f64) -> SingularityDiagnostics {
    let ep = EnergyPoint::new(e).expect("grid energies are positive");
    diagnostics(&ep, spec)
}

fn g_at(spec: &PotentialSpec, e: f64) -> f64 {
    diag_at(spec, e).g()
}

/// Reflectivity/transmission with singular and overflowed points mapped to +∞.
fn big_rt_at(spec: &PotentialSpec, e: f64) -> (f64, f64) {
    let ep = EnergyPoint::new(e).expect("grid energies are positive");
    match amplitudes(&ep, spec, false) {
        Ok(a) => (a.big_r, a.big_t),
        Err(ScatteringError::AtSingularity { .. })
        | Err(ScatteringError::NumericalOverflow { .. }) => (f64::INFINITY, f64::INFINITY),
        Err(e) => panic!("unexpected amplitude failure on positive grid: {e}"),
    }
}

/// Scan a log grid for zeros of `G(E)` whose `F` lands near an integer
/// `n ≤ 0`. Zeros with a nearest integer above 0 are discarded (no Gamma
/// pole there).
pub fn scan_ss_candidates(
    spec: &PotentialSpec,
    e_range: (f64, f64),
    grid_points: usize,
) -> Result<Vec<SsCandidate>, AnalysisError> {
    validate_range(e_range, grid_points)?;
    let grid = log_grid(e_range, grid_points);
    let g: Vec<f64> = grid.par_iter().map(|&e| g_at(spec, e)).collect();
    let mut out = Vec::new();
    for i in 0..grid.len() - 1 {
        let (mut a, mut b) = (grid[i], grid[i + 1]);
        let (mut ga, gb) = (g[i], g[i + 1]);
        let root = if ga == 0.0 {
            Some(a)
        } else if ga * gb < 0.0 {
            // Bisect the bracketed sign change down to |G| < 1e−10.
            let mut mid = 0.5 * (a + b);
            for _ in 0..200 {
                mid = 0.5 * (a + b);
                let gm = g_at(spec, mid);
                if gm.abs() < G_BISECT_TOL {
                    break;
                }
                if ga * gm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    ga = gm;
                }
            }
            Some(mid)
        } else {
            None
        };
        if let Some(e_hat) = root {
            let f = diag_at(spec, e_hat).f();
            let n = f.round();
            if n <= 0.0 {
                out.push(SsCandidate {
                    e_hat,
                    nearest_n: n as i64,
                    f_distance: (f - n).abs(),
                });
            }
        }
    }
    Ok(out)
}

/// Refine a scan candidate by solving `F(E, p) = n`, `G(E, p) = 0` for the
/// energy and one free potential parameter with a damped finite-difference
/// Newton iteration (relative step 1e−6).
///
/// Damping halves the step while the summed squared residual fails to
/// decrease; iteration continues past the convergence threshold while still
/// improving so the returned point is as close to the exact root as the
/// arithmetic allows (this is what lets the amplitude evaluator's sentinel
/// fire exactly at `E*`).
pub fn refine_ss(
    spec: &PotentialSpec,
    free_parameter: FreeParameter,
    seed: &SsCandidate,
) -> Result<SpectralSingularity, AnalysisError> {
    if !(seed.f_distance < 0.5) {
        return Err(AnalysisError::DegenerateSeed { f_distance: seed.f_distance });
    }
    let n = seed.nearest_n as f64;
    let residuals = |e: f64, p: f64| -> Option<(f64, f64)> {
        if e <= 0.0 {
            return None;
        }
        let s = free_parameter.apply(spec, p)?;
        let d = diag_at(&s, e);
        Some((d.f() - n, d.g()))
    };

    let mut e = seed.e_hat;
    let mut p = free_parameter.read(spec);
    let (mut f0, mut g0) =
        residuals(e, p).ok_or(AnalysisError::InvalidRange(e, e))?;
    let mut best = (e, p, f0.abs(), g0.abs());
    let mut iterations = 0usize;

    for it in 0..100 {
        iterations = it + 1;
        // Finite-difference Jacobian, relative step 1e−6 with a small floor
        // so parameters near zero still move.
        let he = 1e-6 * e.abs().max(1e-3);
        let hp = 1e-6 * p.abs().max(1e-3);
        let (fe, ge) = match residuals(e + he, p) {
            Some(v) => v,
            None => break,
        };
        let (fp, gp) = match residuals(e, p + hp) {
            Some(v) => v,
            None => break,
        };
        let j11 = (fe - f0) / he;
        let j12 = (fp - f0) / hp;
        let j21 = (ge - g0) / he;
        let j22 = (gp - g0) / hp;
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let de = -(j22 * f0 - j12 * g0) / det;
        let dp = -(-j21 * f0 + j11 * g0) / det;

        // Damped acceptance on the summed squared residual.
        let merit0 = f0 * f0 + g0 * g0;
        let mut s = 1.0;
        let mut accepted = None;
        loop {
            let (en, pn) = (e + s * de, p + s * dp);
            if let Some((fn_, gn)) = residuals(en, pn) {
                if fn_ * fn_ + gn * gn < merit0 || s < 1e-6 {
                    accepted = Some((en, pn, fn_, gn));
                    break;
                }
            }
            s *= 0.5;
            if s < 1e-12 {
                break;
            }
        }
        let Some((en, pn, fn_, gn)) = accepted else { break };
        e = en;
        p = pn;
        f0 = fn_;
        g0 = gn;
        if f0.abs().max(g0.abs()) < best.2.max(best.3) {
            best = (e, p, f0.abs(), g0.abs());
        }
        // Converged and no longer improving at double precision: stop.
        if f0.abs() < 1e-14 && g0.abs() < 1e-14 {
            break;
        }
    }

    let (eb, pb, rf, rg) = best;
    if rf < CERTIFICATION_TOL && rg < CERTIFICATION_TOL {
        let refined_spec = free_parameter
            .apply(spec, pb)
            .expect("accepted iterates have valid parameters");
        Ok(SpectralSingularity {
            e_star: eb,
            n: seed.nearest_n,
            residual: rf.hypot(rg),
            refined_spec,
        })
    } else {
        Err(AnalysisError::NoConvergence {
            iterations,
            e: eb,
            parameter: pb,
            residual_f: rf,
            residual_g: rg,
        })
    }
}

/// Certify a refined singularity independently of the refinement itself:
/// evaluate the amplitudes on the flanks `E*(1 ± 1e−6)` (they must exceed
/// 1e4 in both `R` and `T`) and at `E*` (the sentinel must fire).
pub fn certify(ss: &SpectralSingularity) -> Certification {
    let spec = &ss.refined_spec;
    let flank = |e: f64| big_rt_at(spec, e);
    let (r_lo, t_lo) = flank(ss.e_star * (1.0 - 1e-6));
    let (r_hi, t_hi) = flank(ss.e_star * (1.0 + 1e-6));
    let ep = EnergyPoint::new(ss.e_star).expect("singular energy is positive");
    let sentinel_triggered = matches!(
        amplitudes(&ep, spec, false),
        Err(ScatteringError::AtSingularity { .. })
    );
    Certification {
        residual: ss.residual,
        min_flank_big_r: r_lo.min(r_hi),
        min_flank_big_t: t_lo.min(t_hi),
        sentinel_triggered,
    }
}

/// Golden-section minimization of `f` on `[a, b]` to relative width `rel`.
fn golden_min(mut a: f64, mut b: f64, rel: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a) <= rel * b.abs().max(1.0e-300) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Find all strict local minima of `R(E)` on a log grid, refined by
/// golden-section search, flagging reflectionless ones (`R < 1e−9`).
pub fn find_minima(
    spec: &PotentialSpec,
    e_range: (f64, f64),
    grid_points: usize,
) -> Result<MinimaReport, AnalysisError> {
    validate_range(e_range, grid_points)?;
    let grid = log_grid(e_range, grid_points);
    let r: Vec<f64> = grid.par_iter().map(|&e| big_rt_at(spec, e).0).collect();
    let mut minima = Vec::new();
    for i in 1..grid.len() - 1 {
        if r[i].is_finite() && r[i] < r[i - 1] && r[i] < r[i + 1] {
            let (e_min, r_min) =
                golden_min(grid[i - 1], grid[i + 1], GOLDEN_REL_TOL, |e| {
                    big_rt_at(spec, e).0
                });
            minima.push(ReflectivityMinimum {
                e: e_min,
                big_r: r_min,
                is_reflectionless: r_min < REFLECTIONLESS_TOL,
            });
        }
    }
    minima.sort_by(|a, b| a.e.total_cmp(&b.e));
    Ok(MinimaReport { minima })
}

/// Rule out (or fail to rule out) a second singularity by checking
/// `H(E) > 0` at every grid point and at golden-section-refined minima of
/// `H`.
///
/// Under the default labeling `H = Re √q + 1/2 ≥ 1/2`, so exclusion always
/// holds; [`exclude_second_ss_with`] accepts the flipped labeling, under
/// which `H` can dip negative, to exercise the non-excluded outcome.
pub fn exclude_second_ss(
    spec: &PotentialSpec,
    e_range: (f64, f64),
    grid_points: usize,
) -> Result<SecondSsExclusion, AnalysisError> {
    exclude_second_ss_with(spec, e_range, grid_points, MuBranch::Principal)
}

/// [`exclude_second_ss`] with an explicit `μ`-branch labeling.
pub fn exclude_second_ss_with(
    spec: &PotentialSpec,
    e_range: (f64, f64),
    grid_points: usize,
    branch: MuBranch,
) -> Result<SecondSsExclusion, AnalysisError> {
    validate_range(e_range, grid_points)?;
    let h_at = |e: f64| {
        let ep = EnergyPoint::new(e).expect("grid energies are positive");
        diagnostics_with(&ep, spec, false, SignBinding::default(), branch).h()
    };
    let grid = log_grid(e_range, grid_points);
    let h: Vec<f64> = grid.par_iter().map(|&e| h_at(e)).collect();
    let mut min_h = f64::INFINITY;
    let mut at_e = grid[0];
    for (&e, &hv) in grid.iter().zip(&h) {
        if hv < min_h {
            min_h = hv;
            at_e = e;
        }
        if hv <= 0.0 {
            return Ok(SecondSsExclusion::NotExcluded { witness_e: e, h: hv });
        }
    }
    for i in 1..grid.len() - 1 {
        if h[i] < h[i - 1] && h[i] < h[i + 1] {
            let (e_min, h_min) =
                golden_min(grid[i - 1], grid[i + 1], GOLDEN_REL_TOL, h_at);
            if h_min < min_h {
                min_h = h_min;
                at_e = e_min;
            }
            if h_min <= 0.0 {
                return Ok(SecondSsExclusion::NotExcluded { witness_e: e_min, h: h_min });
            }
        }
    }
    Ok(SecondSsExclusion::Excluded { min_h, at_e })
}

/// Locate energies where `U(E) = R + T` crosses 1, bisected to relative
/// 1e−8. A Hermitian spec has `U ≡ 1`; that degenerate case is reported via
/// the `everywhere_unitary` flag with an empty crossing list.
pub fn unitarity_crossings(
    spec: &PotentialSpec,
    e_range: (f64, f64),
    grid_points: usize,
) -> Result<UnitarityReport, AnalysisError> {
    validate_range(e_range, grid_points)?;
    let grid = log_grid(e_range, grid_points);
    let u: Vec<f64> = grid
        .par_iter()
        .map(|&e| {
            let (r, t) = big_rt_at(spec, e);
            r + t - 1.0
        })
        .collect();
    if u.iter().all(|&d| d.abs() < 1e-9) {
        return Ok(UnitarityReport { crossings: Vec::new(), everywhere_unitary: true });
    }
    let mut crossings = Vec::new();
    for i in 0..grid.len() - 1 {
        if !(u[i].is_finite() && u[i + 1].is_finite()) {
            continue;
        }
        if u[i] == 0.0 {
            crossings.push(grid[i]);
            continue;
        }
        if u[i] * u[i + 1] < 0.0 {
            let (mut a, mut b) = (grid[i], grid[i + 1]);
            let mut ua = u[i];
            for _ in 0..200 {
                if (b - a) <= CROSSING_REL_TOL * b {
                    break;
                }
                let mid = 0.5 * (a + b);
                let (r, t) = big_rt_at(spec, mid);
                let um = r + t - 1.0;
                if ua * um <= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    ua = um;
                }
            }
            crossings.push(0.5 * (a + b));
        }
    }
    Ok(UnitarityReport { crossings, everywhere_unitary: false })
}
