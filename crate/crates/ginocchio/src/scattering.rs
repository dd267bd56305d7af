//! Closed-form scattering quantities: `μ(E)`, the diagnostic functions
//! `Δ(E) = F + iG` and `Ω(E) = H + iJ`, the reflection/transmission
//! amplitudes `r(k)`, `t(k)`, and the probabilities `R`, `T`, `U = R + T`.
//!
//! The amplitudes are ratios of Gamma functions assembled in log space so
//! that huge intermediate magnitudes cancel before exponentiation. A real
//! positive energy where `Δ` (or, under the flipped branch labeling, `Ω`)
//! hits a non-positive integer puts a Gamma pole in the numerators of both
//! `r` and `t`: reflection and transmission diverge together — a spectral
//! singularity. The evaluator reports that case as [`ScatteringError::AtSingularity`]
//! rather than returning a meaningless float.

use crate::potential::PotentialSpec;
use crate::specfun::log_gamma;
use num_complex::Complex64;
use thiserror::Error;

/// Positive energy with its wavenumber (`k = √E`; units `2m = ħ² = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPoint {
    e: f64,
    k: f64,
}

impl EnergyPoint {
    /// Validated constructor: requires `E > 0` and finite.
    pub fn new(e: f64) -> Result<Self, ScatteringError> {
        if !(e > 0.0) || !e.is_finite() {
            return Err(ScatteringError::InvalidEnergy(e));
        }
        Ok(Self { e, k: e.sqrt() })
    }

    /// The energy.
    pub fn e(&self) -> f64 {
        self.e
    }

    /// The wavenumber `k = √E`.
    pub fn k(&self) -> f64 {
        self.k
    }
}

/// Labeling branch for `μ = ±√q − 1/2`.
///
/// The observables are invariant under `μ → −1−μ` (it swaps `Δ ↔ Ω` and the
/// Gamma pairs in the amplitudes are symmetric under the swap), so the
/// branch choice is a labeling convention. `Principal` keeps `Re √q ≥ 0`.
/// `Flipped` exists for diagnosis and for exercising the invariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MuBranch {
    /// `μ = √q − 1/2` with the principal square root.
    #[default]
    Principal,
    /// `μ = −√q − 1/2`.
    Flipped,
}

/// Which way the `±` inside `μ`'s square root tracks the potential's `∓`.
///
/// The default pairs the upper signs: the square-root argument is
/// `1/4 − sign·ν(ν+1) + ((λ²−1)/λ⁴)E`. The alternative binding (`+sign`)
/// is kept switchable for diagnosis; the catalog reproduction (both signs
/// appear among its rows) is the empirical check that the default is right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignBinding {
    /// Square-root argument uses `−sign·ν(ν+1)` (upper sign with upper sign).
    #[default]
    UpperWithUpper,
    /// Square-root argument uses `+sign·ν(ν+1)`.
    UpperWithLower,
}

/// Errors (and sentinel outcomes) from amplitude evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScatteringError {
    /// Energy not positive/finite.
    #[error("energy must be positive and finite, got {0}")]
    InvalidEnergy(f64),
    /// `Δ` or `Ω` within 1e−12 of a non-positive integer: a Gamma pole in
    /// the amplitude numerators. This is the spectral-singularity sentinel —
    /// a feature, not a failure; `R` and `T` diverge here.
    #[error("at spectral singularity: gamma argument within {distance:.2e} of n = {n}")]
    AtSingularity {
        /// The non-positive integer hit.
        n: i64,
        /// Distance from it.
        distance: f64,
    },
    /// Log-magnitude of an assembled amplitude exceeded the exp-safe limit
    /// without a detected pole.
    #[error("amplitude log-magnitude {log_magnitude:.1} exceeds the overflow guard")]
    NumericalOverflow {
        /// The offending `Re log` value.
        log_magnitude: f64,
    },
}

/// Distance from a non-positive integer at which the singularity sentinel
/// fires (applied to both axes of `Δ` and `Ω`).
pub const SINGULARITY_TOL: f64 = 1e-12;

/// `Re log` magnitude beyond which amplitudes are declared overflowed
/// (`exp(2·700)` is already past the double-precision range).
pub const OVERFLOW_LOG_LIMIT: f64 = 700.0;

/// The two diagnostic Gamma arguments: `Δ = F + iG` and `Ω = H + iJ`.
///
/// A spectral singularity at real `E` requires `G(E) = 0` with `F(E)` a
/// non-positive integer; the same test on `Ω` (via `H`, `J`) rules second
/// singularities in or out. They satisfy `Δ + Ω = 1 − 2ik/λ²` identically.
#[derive(Debug, Clone, Copy)]
pub struct SingularityDiagnostics {
    /// `Δ = −μ − ik/λ²`.
    pub delta: Complex64,
    /// `Ω = μ + 1 − ik/λ²`.
    pub omega: Complex64,
}

impl SingularityDiagnostics {
    /// `F = Re Δ`.
    pub fn f(&self) -> f64 {
        self.delta.re
    }
    /// `G = Im Δ`.
    pub fn g(&self) -> f64 {
        self.delta.im
    }
    /// `H = Re Ω`.
    pub fn h(&self) -> f64 {
        self.omega.re
    }
    /// `J = Im Ω`.
    pub fn j(&self) -> f64 {
        self.omega.im
    }
}

/// Reflection/transmission amplitudes and probabilities at one energy.
#[derive(Debug, Clone, Copy)]
pub struct AmplitudeSet {
    /// Reflection amplitude `r` (up to the dropped global phase).
    pub r: Complex64,
    /// Transmission amplitude `t` (same convention).
    pub t: Complex64,
    /// Reflection probability `R = |r|²`.
    pub big_r: f64,
    /// Transmission probability `T = |t|²`.
    pub big_t: f64,
    /// Unitarity deficit `U = R + T` (equal to 1 only for Hermitian specs).
    pub u: f64,
    /// The undetermined global reflection phase `e^{2ikr₁}`, fixed to 0
    /// radians: only moduli are observable here.
    pub phase_offset_r1: f64,
}

/// `q(E)`: the argument of the square root inside `μ`.
fn q_of(e: &EnergyPoint, spec: &PotentialSpec, binding: SignBinding) -> Complex64 {
    let l2 = spec.lambda * spec.lambda;
    let factor = match binding {
        SignBinding::UpperWithUpper => -spec.sign.value(),
        SignBinding::UpperWithLower => spec.sign.value(),
    };
    0.25 + factor * spec.nu_nu_plus_1() + (l2 - 1.0) / (l2 * l2) * e.e()
}

/// `μ(E)` with explicit branch and binding choices.
pub fn mu_with(
    e: &EnergyPoint,
    spec: &PotentialSpec,
    binding: SignBinding,
    branch: MuBranch,
) -> Complex64 {
    let root = q_of(e, spec, binding).sqrt();
    match branch {
        MuBranch::Principal => root - 0.5,
        MuBranch::Flipped => -root - 0.5,
    }
}

/// `μ(E)` with the default principal branch and sign binding.
pub fn mu(e: &EnergyPoint, spec: &PotentialSpec) -> Complex64 {
    mu_with(e, spec, SignBinding::default(), MuBranch::default())
}

/// `ik/λ²`, negated for the time-reversed (`k → −k`) evaluation.
fn ikl(e: &EnergyPoint, spec: &PotentialSpec, time_reversed: bool) -> Complex64 {
    let v = e.k() / (spec.lambda * spec.lambda);
    Complex64::new(0.0, if time_reversed { -v } else { v })
}

/// Diagnostics with explicit branch/binding/time-reversal choices.
pub fn diagnostics_with(
    e: &EnergyPoint,
    spec: &PotentialSpec,
    time_reversed: bool,
    binding: SignBinding,
    branch: MuBranch,
) -> SingularityDiagnostics {
    let m = mu_with(e, spec, binding, branch);
    let ik = ikl(e, spec, time_reversed);
    SingularityDiagnostics { delta: -m - ik, omega: m + 1.0 - ik }
}

/// `Δ(E)` and `Ω(E)` with default conventions (forward time).
pub fn diagnostics(e: &EnergyPoint, spec: &PotentialSpec) -> SingularityDiagnostics {
    diagnostics_with(e, spec, false, SignBinding::default(), MuBranch::default())
}

/// If `z` sits within [`SINGULARITY_TOL`] (both axes) of a non-positive
/// integer, that integer and the distance.
fn pole_proximity(z: Complex64) -> Option<(i64, f64)> {
    if z.im.abs() <= SINGULARITY_TOL {
        let r = z.re.round();
        if r <= 0.0 && (z.re - r).abs() <= SINGULARITY_TOL {
            let distance = (z - r).norm();
            return Some((r as i64, distance));
        }
    }
    None
}

/// Amplitudes with explicit branch/binding choices.
///
/// Assembly (log space, then one exponentiation):
///
/// ```text
/// log r = lnΓ(ik/λ²) + lnΓ(Ω) + lnΓ(Δ) − lnΓ(−ik/λ²) − lnΓ(μ+1) − lnΓ(−μ)
/// log t = lnΓ(Ω) + lnΓ(Δ) − lnΓ(−ik/λ²) − lnΓ(1 − ik/λ²)
/// ```
///
/// The undetermined global phase (`phase_offset_r1`) is dropped. If `Δ` or
/// `Ω` sits within [`SINGULARITY_TOL`] of a non-positive integer the
/// spectral-singularity sentinel is returned instead of a float; if an
/// assembled log-magnitude exceeds [`OVERFLOW_LOG_LIMIT`] without a detected
/// pole, the overflow marker is returned.
pub fn amplitudes_with(
    e: &EnergyPoint,
    spec: &PotentialSpec,
    time_reversed: bool,
    binding: SignBinding,
    branch: MuBranch,
) -> Result<AmplitudeSet, ScatteringError> {
    let m = mu_with(e, spec, binding, branch);
    let ik = ikl(e, spec, time_reversed);
    let delta = -m - ik;
    let omega = m + 1.0 - ik;
    if let Some((n, distance)) = pole_proximity(delta).or_else(|| pole_proximity(omega)) {
        return Err(ScatteringError::AtSingularity { n, distance });
    }
    let shared = log_gamma(omega) + log_gamma(delta) - log_gamma(-ik);
    let log_r = log_gamma(ik) + shared - log_gamma(m + 1.0) - log_gamma(-m);
    let log_t = shared - log_gamma(1.0 - ik);
    for lg in [log_r, log_t] {
        if lg.re > OVERFLOW_LOG_LIMIT {
            return Err(ScatteringError::NumericalOverflow { log_magnitude: lg.re });
        }
        if !lg.re.is_finite() && lg.re > 0.0 {
            // +∞ log without pole proximity: treat as overflow as well.
            return Err(ScatteringError::NumericalOverflow { log_magnitude: lg.re });
        }
    }
    let r = log_r.exp();
    let t = log_t.exp();
    let big_r = (2.0 * log_r.re).exp();
    let big_t = (2.0 * log_t.re).exp();
    Ok(AmplitudeSet { r, t, big_r, big_t, u: big_r + big_t, phase_offset_r1: 0.0 })
}

/// Amplitudes with default conventions.
pub fn amplitudes(
    e: &EnergyPoint,
    spec: &PotentialSpec,
    time_reversed: bool,
) -> Result<AmplitudeSet, ScatteringError> {
    amplitudes_with(e, spec, time_reversed, SignBinding::default(), MuBranch::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Sign;

    #[test]
    fn mu_real_case_recovers_nu() {
        // λ = 1, ν = 2, binding factor +ν(ν+1): μ = √(1/4 + 6) − 1/2 = 2.
        let spec = PotentialSpec::new(Complex64::new(2.0, 0.0), 1.0, Sign::Minus).unwrap();
        let e = EnergyPoint::new(5.0).unwrap();
        let m = mu(&e, &spec);
        assert!((m - 2.0).norm() < 1e-14);
    }

    #[test]
    fn diagnostics_identity() {
        let spec =
            PotentialSpec::new(Complex64::new(4.67, 7.8366), 1.74, Sign::Plus).unwrap();
        let e = EnergyPoint::new(100.0).unwrap();
        let d = diagnostics(&e, &spec);
        let expect = 1.0 - 2.0 * Complex64::new(0.0, e.k() / (1.74f64 * 1.74)) ;
        assert!((d.delta + d.omega - expect).norm() < 1e-12);
    }

    #[test]
    fn invalid_energy_rejected() {
        assert!(EnergyPoint::new(0.0).is_err());
        assert!(EnergyPoint::new(-3.0).is_err());
        assert!(EnergyPoint::new(f64::NAN).is_err());
    }
}
