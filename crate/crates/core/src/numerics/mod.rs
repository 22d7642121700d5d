//! Numerical kernel: error function, adaptive quadrature, bracketed root
//! finding and finite-difference derivatives.
//!
//! Everything here is pure and reentrant.

mod diff;
mod erf;
mod quad;
mod root;
pub mod rules;

pub use diff::derivative;
pub use erf::{erf, erf_diff, erfc};
pub use quad::{integrate_1d, integrate_1d_pieces, integrate_2d, integrate_2d_pieces, Estimate};
pub use root::find_root;

use crate::{Error, Result};

/// Tolerances and budget for adaptive quadrature.
///
/// A result is accepted once its error estimate is below
/// `max(abs_tol, rel_tol * |result|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 1 << 15,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidInput(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidInput(format!(
                "abs_tol must be non-negative, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidInput(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A finite, non-empty real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput(format!(
                "interval bounds must be finite, got [{lo}, {hi}]"
            )));
        }
        if !(lo < hi) {
            return Err(Error::InvalidInput(format!(
                "interval requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Symmetric interval `[center - half_width, center + half_width]`.
    pub fn centered(center: f64, half_width: f64) -> Result<Self> {
        Self::new(center - half_width, center + half_width)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// `count` equally spaced points from `lo` to `hi` inclusive.
    pub fn linspace(&self, count: usize) -> Vec<f64> {
        linspace(self.lo, self.hi, count)
    }
}

/// `count` equally spaced samples from `lo` to `hi`, endpoints included.
///
/// Samples are computed as `lo + k * step` except the last, which is pinned
/// to `hi`, so grids are reproducible bit for bit.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|k| {
                    if k == count - 1 {
                        hi
                    } else {
                        lo + k as f64 * step
                    }
                })
                .collect()
        }
    }
}
