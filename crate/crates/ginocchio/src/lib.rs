//! Scattering observables of the complex (non-Hermitian) Ginocchio potential.
//!
//! The Ginocchio potential is an exactly solvable, spatially symmetric
//! potential defined implicitly through a coordinate map `x(y)`. With a
//! complex strength parameter `ν` it becomes non-Hermitian, and its
//! reflection and transmission amplitudes — known in closed form as ratios
//! of Gamma functions — can diverge at discrete real positive energies
//! (spectral singularities, i.e. zero-width resonances) or dip into deep
//! minima.
//!
//! The crate provides:
//!
//! * [`specfun`] — complex log-Gamma (Lanczos) and the Gauss hypergeometric
//!   function ₂F₁ for complex parameters, the two special functions
//!   everything else is built from;
//! * [`potential`] — the potential itself, the coordinate map and its
//!   inverse, profile classification (barrier / well / well with side
//!   barriers) and gain/loss classification;
//! * [`scattering`] — closed-form reflection/transmission amplitudes
//!   `R(E)`, `T(E)`, the unitarity deficit `U = R + T`, and the
//!   Gamma-argument decompositions used to locate singularities;
//! * [`analysis`] — spectral-singularity scan/refinement/certification,
//!   second-singularity exclusion, reflectivity-minima detection, and
//!   unitarity crossings;
//! * [`oracle`] — an independent check: direct fixed-step integration of
//!   the Schrödinger equation `ψ″ = (V − E)ψ` that reproduces `R` and `T`
//!   with no use of the closed forms;
//! * [`wavefield`] — the exact scattering wavefunction, an ODE-residual
//!   check, and asymptotic plane-wave (Jost) coefficient fits;
//! * [`table1`] — an embedded catalog of reference parameter sets
//!   (18 singularity cases and 2 no-singularity families) used by the
//!   CLI and the test suite.
//!
//! Units: `2m = ħ² = 1`, so `k = √E` and the radial equation reads
//! `ψ″ = (V − E)ψ`.

pub mod analysis;
pub mod oracle;
pub mod potential;
pub mod scattering;
pub mod specfun;
pub mod catalog;
pub mod wavefield;

pub use num_complex::Complex64;
