//! Closed-form coincidence rates for a Gaussian pump.
//!
//! Everything is expressed through two numbers: the dip half-width
//! `τ_θ = γL|cos θ − sin θ|/2` and the shape parameter
//! `ξ = 4/(Ω_p γL|cos θ + sin θ|)`, which is infinite under extended phase
//! matching (`θ = −π/4`) and carried as [`Xi::Infinite`] there.

use std::f64::consts::PI;

use crate::biphoton::PumpSpectrum;
use crate::dispersion::PhaseMatchParams;
use crate::numerics::{erf, erf_diff};
use crate::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Shape parameter of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Xi {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormParams {
    pub xi: Xi,
    /// Half-width of the HOM dip, ps.
    pub tau_theta: f64,
}

/// `ξ` and `τ_θ` for a crystal and pump. `|cos θ + sin θ|` below a few ulp
/// counts as zero, so `θ = −π/4` gives `Xi::Infinite` exactly.
pub fn closed_form_params(
    params: &PhaseMatchParams,
    pump: &PumpSpectrum,
) -> Result<ClosedFormParams> {
    let bw = pump.bandwidth();
    if !(bw > 0.0) {
        return Err(Error::InvalidInput(format!(
            "pump bandwidth must be positive, got {bw}"
        )));
    }
    let (s, c) = params.theta().sin_cos();
    let gl = params.gamma() * params.length();
    let sum = (c + s).abs();
    let xi = if sum <= 4.0 * f64::EPSILON {
        Xi::Infinite
    } else {
        Xi::Finite(4.0 / (bw * gl * sum))
    };
    let diff = (c - s).abs();
    let tau_theta = if diff <= 4.0 * f64::EPSILON {
        0.0
    } else {
        0.5 * gl * diff
    };
    Ok(ClosedFormParams { xi, tau_theta })
}

/// `(√π/2) ξ Erf(y/ξ)`, tending to `y` as `ξ → ∞`.
fn dip_depth(xi: Xi, y: f64) -> f64 {
    match xi {
        Xi::Infinite => y,
        Xi::Finite(xi) => 0.5 * SQRT_PI * xi * erf(y / xi),
    }
}

/// Normalized HOM rate
/// `P₋(τ) = 1 − (√π/2) ξ Erf((1 − |τ|/τ_θ)/ξ)` inside the dip, 1 outside.
/// For `ξ = ∞` the dip is the triangle `|τ|/τ_θ`.
pub fn hom_rate_closed(cfp: &ClosedFormParams, tau: f64) -> Result<f64> {
    if cfp.tau_theta == 0.0 {
        return Err(Error::DegenerateDip);
    }
    let r = tau.abs() / cfp.tau_theta;
    if r >= 1.0 {
        return Ok(1.0);
    }
    Ok(1.0 - dip_depth(cfp.xi, 1.0 - r))
}

/// `|τ|/τ_θ`, with `τ_θ = 0` treated as a dip of zero width.
fn dip_coordinate(cfp: &ClosedFormParams, tau: f64) -> f64 {
    if tau == 0.0 {
        0.0
    } else if cfp.tau_theta == 0.0 {
        f64::INFINITY
    } else {
        tau.abs() / cfp.tau_theta
    }
}

/// `((cos θ + sin θ)/(cos θ − sin θ))²`.
fn axis_ratio_sq(params: &PhaseMatchParams) -> f64 {
    let (s, c) = params.theta().sin_cos();
    let r = (c + s) / (c - s);
    r * r
}

/// Envelope and offset terms `(F₁, F₂)` of the MZ rate
/// `P₊ = 1 + cos(ω_p τ) F₁ + F₂`, with `x = Ω_p τ/2` and `r = |τ|/τ_θ`:
///
/// `F₁ = ½{e^{−x²} + (√π/4) ξ [Erf(1/ξ − x) + Erf(1/ξ + x)]}`
///
/// `F₂ = ½{Λ(r) e^{−x²((c+s)/(c−s))²} − (√π/2) ξ B(r) Erf((1 − r)/ξ)}`
///
/// where `Λ(r) = 1 − r` and `B(r) = 1` for `r < 1`, both 0 otherwise. At
/// `ξ = ∞` these are `e^{−x²}` and 0.
pub fn fringe_terms(
    cfp: &ClosedFormParams,
    pump: &PumpSpectrum,
    params: &PhaseMatchParams,
    tau: f64,
) -> (f64, f64) {
    let x = 0.5 * pump.bandwidth() * tau;
    let gauss = (-x * x).exp();
    let xi = match cfp.xi {
        Xi::Infinite => return (gauss, 0.0),
        Xi::Finite(xi) => xi,
    };
    let inv = 1.0 / xi;
    // Erf(1/ξ − x) + Erf(1/ξ + x) = erf(x + 1/ξ) − erf(x − 1/ξ)
    let f1 = 0.5 * (gauss + 0.25 * SQRT_PI * xi * erf_diff(x - inv, x + inv));
    let r = dip_coordinate(cfp, tau);
    let f2 = if r < 1.0 {
        let lambda = (1.0 - r) * (-x * x * axis_ratio_sq(params)).exp();
        0.5 * (lambda - dip_depth(cfp.xi, 1.0 - r))
    } else {
        0.0
    };
    (f1, f2)
}

/// The same two terms with the Erf arguments `1/(4ξ) ± x`, `(1 − r)/(4ξ)`
/// and prefactors `√π ξ`, `2√π ξ`. This variant does not agree with
/// direct quadrature of the MZ integral away from `ξ = ∞`; it is kept for
/// comparison only.
pub fn literal_fringe_terms(
    cfp: &ClosedFormParams,
    pump: &PumpSpectrum,
    params: &PhaseMatchParams,
    tau: f64,
) -> (f64, f64) {
    let x = 0.5 * pump.bandwidth() * tau;
    let gauss = (-x * x).exp();
    let xi = match cfp.xi {
        Xi::Infinite => return (gauss, 0.0),
        Xi::Finite(xi) => xi,
    };
    let q = 0.25 / xi;
    let f1 = 0.5 * (gauss + SQRT_PI * xi * (erf(q - x) + erf(q + x)));
    let r = dip_coordinate(cfp, tau);
    let f2 = if r < 1.0 {
        let lambda = (1.0 - r) * (-x * x * axis_ratio_sq(params)).exp();
        0.5 * (lambda - 2.0 * SQRT_PI * xi * erf((1.0 - r) * q))
    } else {
        0.0
    };
    (f1, f2)
}

/// Normalized MZ rate `1 + cos(ω_p τ) F₁(τ) + F₂(τ)`.
pub fn mz_rate_closed(
    cfp: &ClosedFormParams,
    pump: &PumpSpectrum,
    params: &PhaseMatchParams,
    tau: f64,
) -> f64 {
    let (f1, f2) = fringe_terms(cfp, pump, params, tau);
    1.0 + (params.omega_p() * tau).cos() * f1 + f2
}

/// HOM visibility `g/(2 − g)` with `g = (√π/2) ξ Erf(1/ξ)`; 1 at `ξ = ∞`.
pub fn v_hom(cfp: &ClosedFormParams) -> Result<f64> {
    if cfp.tau_theta == 0.0 {
        return Err(Error::DegenerateDip);
    }
    let g = dip_depth(cfp.xi, 1.0);
    Ok(g / (2.0 - g))
}

/// MZ visibility between `τ = 0` and the first fringe minimum
/// `τ = π/ω_p`: `(1 + F₁ − F₂)/(3 − F₁ + F₂)`.
pub fn v_mz(cfp: &ClosedFormParams, pump: &PumpSpectrum, params: &PhaseMatchParams) -> f64 {
    let d = mz_contrast(cfp, pump, params);
    (1.0 + d) / (3.0 - d)
}

/// `F₁ − F₂` at the first fringe minimum.
pub(crate) fn mz_contrast(
    cfp: &ClosedFormParams,
    pump: &PumpSpectrum,
    params: &PhaseMatchParams,
) -> f64 {
    let (f1, f2) = fringe_terms(cfp, pump, params, PI / params.omega_p());
    f1 - f2
}
