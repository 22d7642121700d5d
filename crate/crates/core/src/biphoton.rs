//! Joint spectral amplitude of the down-converted pair in the first-order
//! model,
//!
//! `A(ω_s, ω_i) = α(ω_s + ω_i) · φ_L(γ_s ω̃_s + γ_i ω̃_i)`,
//!
//! with detunings `ω̃ = ω − ω_p/2`, a real Gaussian pump amplitude `α` and
//! the phase-matching function `φ_L(x) = 2 sin(xL/2)/x`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dispersion::PhaseMatchParams;
use crate::numerics::{integrate_1d_pieces, Interval, QuadratureSpec};
use crate::{Error, Result};

/// Gaussian pump: `|α(ω)|² = exp[−(ω − ω_p)²/Ω_p²]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpSpectrum {
    omega_p: f64,
    bandwidth: f64,
}

impl PumpSpectrum {
    pub fn new(omega_p: f64, bandwidth: f64) -> Result<Self> {
        if !(omega_p > 0.0 && omega_p.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "ω_p must be positive, got {omega_p}"
            )));
        }
        if !(bandwidth >= 0.0 && bandwidth.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "pump bandwidth must be non-negative, got {bandwidth}"
            )));
        }
        Ok(Self { omega_p, bandwidth })
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }
}

/// Pump amplitude `α(ω) = exp[−(ω − ω_p)²/(2Ω_p²)]`. A zero bandwidth is
/// the monochromatic limit: 1 at `ω_p`, 0 elsewhere.
pub fn pump_alpha(pump: &PumpSpectrum, omega_sum: f64) -> f64 {
    let d = omega_sum - pump.omega_p;
    if pump.bandwidth == 0.0 {
        return if d == 0.0 { 1.0 } else { 0.0 };
    }
    let r = d / pump.bandwidth;
    (-0.5 * r * r).exp()
}

/// `φ_L(x) = 2 sin(xL/2)/x`, equal to `L` at `x = 0`.
pub fn phi_l(x: f64, length: f64) -> f64 {
    let h = 0.5 * x * length;
    if h.abs() < 5e-7 {
        // sin h / h = 1 − h²/6 + …
        length * (1.0 - h * h / 6.0)
    } else {
        2.0 * h.sin() / x
    }
}

/// Crystal plus pump: everything the amplitude depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiphotonAmplitude {
    params: PhaseMatchParams,
    pump: PumpSpectrum,
}

/// One of the two down-converted modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Signal,
    Idler,
}

impl BiphotonAmplitude {
    /// The pump centre must coincide with the `ω_p` of the matching
    /// parameters.
    pub fn new(params: PhaseMatchParams, pump: PumpSpectrum) -> Result<Self> {
        let (a, b) = (params.omega_p(), pump.omega_p());
        if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
            return Err(Error::InvalidInput(format!(
                "pump centre {b} differs from the matched ω_p {a}"
            )));
        }
        Ok(Self { params, pump })
    }

    pub fn params(&self) -> &PhaseMatchParams {
        &self.params
    }

    pub fn pump(&self) -> &PumpSpectrum {
        &self.pump
    }

    /// `A(ω_s, ω_i)`.
    pub fn amplitude(&self, omega_s: f64, omega_i: f64) -> f64 {
        let half = 0.5 * self.params.omega_p();
        self.amplitude_detuned(omega_s - half, omega_i - half)
    }

    /// `A` as a function of the detunings from degeneracy.
    pub fn amplitude_detuned(&self, ds: f64, di: f64) -> f64 {
        let alpha = pump_alpha(&self.pump, ds + di + self.params.omega_p());
        let x = self.params.gamma_s() * ds + self.params.gamma_i() * di;
        alpha * phi_l(x, self.params.length())
    }

    /// Largest deviation of `A` from the product form
    /// `α(ω_s + ω_i) · φ_L(γ(ω̃_s − ω̃_i)/√2)` over `n_samples` random
    /// detuning pairs. The product form is exact for `θ = −π/4`.
    ///
    /// Pairs are drawn uniformly from a square spanning three pump
    /// bandwidths or three phase-matching lobes, whichever is wider, with a
    /// fixed seed so the result is reproducible.
    pub fn factorization_check(&self, n_samples: usize) -> f64 {
        let lobe = 2.0 * PI / (self.params.gamma() * self.params.length());
        let half_width = 3.0 * self.pump.bandwidth.max(lobe);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
        let g = self.params.gamma() * FRAC_1_SQRT_2;
        (0..n_samples)
            .map(|_| {
                let ds = rng.gen_range(-half_width..=half_width);
                let di = rng.gen_range(-half_width..=half_width);
                let s = pump_alpha(&self.pump, ds + di + self.params.omega_p());
                let d = phi_l(g * (ds - di), self.params.length());
                (self.amplitude_detuned(ds, di) - s * d).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `|A|` on the tensor grid `span_s × span_i` with `n` points per axis.
    pub fn grid(&self, span_s: Interval, span_i: Interval, n: usize) -> Result<Grid2D> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("grid needs n ≥ 2, got {n}")));
        }
        let axis_s = span_s.linspace(n);
        let axis_i = span_i.linspace(n);
        let values = axis_s
            .iter()
            .flat_map(|&ws| axis_i.iter().map(move |&wi| (ws, wi)))
            .map(|(ws, wi)| self.amplitude(ws, wi).abs())
            .collect();
        Ok(Grid2D {
            axis_s,
            axis_i,
            values,
        })
    }

    /// Fluorescence spectrum of one mode: `∫ |A|² d(other frequency)`.
    ///
    /// The integration runs over ±8 pump bandwidths around the sum-frequency
    /// peak, split at the centre and zeros of the phase-matching lobe.
    pub fn marginal_spectrum(&self, which: Mode, omega: f64, spec: &QuadratureSpec) -> Result<f64> {
        if self.pump.bandwidth == 0.0 {
            return Err(Error::InvalidInput(
                "marginal spectra need a pump of non-zero bandwidth".into(),
            ));
        }
        let d = omega - 0.5 * self.params.omega_p();
        let (g_this, g_other) = match which {
            Mode::Signal => (self.params.gamma_s(), self.params.gamma_i()),
            Mode::Idler => (self.params.gamma_i(), self.params.gamma_s()),
        };
        let window = 8.0 * self.pump.bandwidth;
        let (lo, hi) = (-d - window, -d + window);
        let mut edges = vec![lo];
        if g_other != 0.0 {
            let centre = -g_this * d / g_other;
            let lobe = 2.0 * PI / (g_other.abs() * self.params.length());
            let first = ((lo - centre) / lobe).ceil();
            let last = ((hi - centre) / lobe).floor();
            if last - first < 4096.0 {
                let mut k = first;
                while k <= last {
                    edges.push(centre + k * lobe);
                    k += 1.0;
                }
            } else if centre > lo && centre < hi {
                edges.push(centre);
            }
        }
        edges.push(hi);
        edges.dedup_by(|a, b| *a <= *b);
        let f = |other: f64| {
            let a = match which {
                Mode::Signal => self.amplitude_detuned(d, other),
                Mode::Idler => self.amplitude_detuned(other, d),
            };
            a * a
        };
        integrate_1d_pieces(f, &edges, spec).map(|e| e.value)
    }
}

/// `|A|` sampled on a rectangular grid. Rows follow the signal axis:
/// `values[r * axis_i.len() + c] = |A(axis_s[r], axis_i[c])|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub axis_s: Vec<f64>,
    pub axis_i: Vec<f64>,
    pub values: Vec<f64>,
}

impl Grid2D {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.axis_i.len() + col]
    }

    /// `(row, col)` of the largest value.
    pub fn argmax(&self) -> (usize, usize) {
        let (k, _) =
            self.values
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (k, &v)| {
                    if v > best.1 {
                        (k, v)
                    } else {
                        best
                    }
                });
        (k / self.axis_i.len(), k % self.axis_i.len())
    }

    /// Largest `|v[r][c] − v[c][r]|`; `None` unless both axes are identical.
    pub fn swap_defect(&self) -> Option<f64> {
        if self.axis_s != self.axis_i {
            return None;
        }
        let n = self.axis_s.len();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in (r + 1)..n {
                worst = worst.max((self.get(r, c) - self.get(c, r)).abs());
            }
        }
        Some(worst)
    }

    /// Correlation coefficient of the signal and idler frequencies under
    /// the weight `|A|²`. Negative for anti-correlated pairs.
    pub fn frequency_correlation(&self) -> f64 {
        let mut m = [0.0f64; 6]; // w, s, i, ss, ii, si
        for (r, &s) in self.axis_s.iter().enumerate() {
            for (c, &i) in self.axis_i.iter().enumerate() {
                let w = self.get(r, c).powi(2);
                m[0] += w;
                m[1] += w * s;
                m[2] += w * i;
                m[3] += w * s * s;
                m[4] += w * i * i;
                m[5] += w * s * i;
            }
        }
        let (ms, mi) = (m[1] / m[0], m[2] / m[0]);
        let vs = m[3] / m[0] - ms * ms;
        let vi = m[4] / m[0] - mi * mi;
        (m[5] / m[0] - ms * mi) / (vs * vi).sqrt()
    }
}

/// One-dimensional amplitude of a limiting state together with the sign of
/// its frequency correlation: the pair is `(ω_p/2 + ω̃, ω_p/2 + sign·ω̃)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitProfile {
    /// Monochromatic pump: anti-correlated pairs with profile
    /// `φ_L((γ_s − γ_i) ω̃)`.
    TwinBeam { spread: f64, length: f64 },
    /// Long crystal under extended matching: correlated pairs with profile
    /// `α(ω_p + 2ω̃)`.
    DifferenceBeam { pump: PumpSpectrum },
}

impl LimitProfile {
    pub fn eval(&self, detuning: f64) -> f64 {
        match *self {
            LimitProfile::TwinBeam { spread, length } => phi_l(spread * detuning, length),
            LimitProfile::DifferenceBeam { pump } => {
                pump_alpha(&pump, pump.omega_p + 2.0 * detuning)
            }
        }
    }

    pub fn correlation_sign(&self) -> i8 {
        match self {
            LimitProfile::TwinBeam { .. } => -1,
            LimitProfile::DifferenceBeam { .. } => 1,
        }
    }
}

pub fn tb_amplitude(params: &PhaseMatchParams) -> LimitProfile {
    LimitProfile::TwinBeam {
        spread: params.gamma_s() - params.gamma_i(),
        length: params.length(),
    }
}

pub fn db_amplitude(pump: &PumpSpectrum) -> LimitProfile {
    LimitProfile::DifferenceBeam { pump: *pump }
}
