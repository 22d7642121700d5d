//! Biphoton spectral amplitudes from spontaneous parametric down-conversion
//! and the coincidence traces they produce in Hong-Ou-Mandel (HOM) and
//! Mach-Zehnder (MZ) interferometers.
//!
//! The crate covers two phase-matching regimes of a type-II crystal:
//! conventional matching (refractive indices matched at degeneracy) and
//! extended matching, which additionally matches group velocities so that
//! the joint spectral amplitude factorizes into a sum-frequency part and a
//! difference-frequency part. Every interferometric observable is computed
//! twice, once from a closed form and once by brute-force quadrature of the
//! raw detection-rate integral, so the two can be checked against each other.
//!
//! Units throughout: angular frequency in rad/ps, time in ps, length in μm,
//! group-delay coefficients in ps/μm and wave numbers in 1/μm.
//!
//! Module map:
//!
//! - [`numerics`]: erf, adaptive quadrature, bracketed root finding,
//!   finite differences.
//! - [`dispersion`]: wave-number branches, phase mismatch, matching
//!   conditions and the extended-matching solver.
//! - [`biphoton`]: pump envelope, phase-matching function, joint amplitude,
//!   grids and marginal spectra.
//! - [`interferometry`]: HOM/MZ traces (closed form and quadrature),
//!   visibilities and sweeps.
//! - [`polarization`]: beam-splitter post-selection onto Bell states.
//! - [`cli`]: run configuration, CSV writers and the subcommands behind the
//!   `spdc` binary.

// guards are written `!(x > 0.0)` so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod biphoton;
pub mod cli;
pub mod dispersion;
mod error;
pub mod interferometry;
pub mod numerics;
pub mod polarization;

pub use error::{Error, Result};
