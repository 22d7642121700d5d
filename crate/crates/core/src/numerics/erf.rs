//! Error function.
//!
//! Two branches, both with all-positive or rapidly converging terms:
//!
//! - `|x| < 3`: `erf(x) = (2/√π) e^{-x²} Σ 2ⁿ x^{2n+1} / (2n+1)!!`. No
//!   cancellation occurs; the sum carries at most ~40 ulp of rounding.
//! - `|x| ≥ 3`: `erfc(x)` from its Laplace continued fraction evaluated with
//!   the modified Lentz method, then `erf = 1 - erfc`.
//!
//! Absolute error is below 1e-15 on the whole line (tested against an
//! independent Taylor-series oracle and a high-precision table), well
//! inside the 1e-13 budget the closed-form rates need.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

const SERIES_LIMIT: f64 = 3.0;

/// Error function, odd by construction.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let a = x.abs();
    let v = if a < SERIES_LIMIT {
        erf_series(a)
    } else {
        1.0 - erfc_cf(a)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Complementary error function `1 - erf(x)`, accurate in relative terms
/// for large positive `x`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= SERIES_LIMIT {
        erfc_cf(x)
    } else if x <= -SERIES_LIMIT {
        2.0 - erfc_cf(-x)
    } else {
        1.0 - erf(x)
    }
}

/// `erf(b) - erf(a)` without cancellation when `a` and `b` are close or
/// share a far tail.
pub fn erf_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if (b - a).abs() <= 0.5 {
        return gauss_integral(a, b);
    }
    if a >= SERIES_LIMIT && b >= SERIES_LIMIT {
        return erfc_cf(a) - erfc_cf(b);
    }
    if a <= -SERIES_LIMIT && b <= -SERIES_LIMIT {
        return erfc_cf(-b) - erfc_cf(-a);
    }
    erf(b) - erf(a)
}

fn erf_series(a: f64) -> f64 {
    let x2 = a * a;
    let mut term = a;
    let mut sum = a;
    let mut n = 0.0;
    loop {
        term *= 2.0 * x2 / (2.0 * n + 3.0);
        sum += term;
        n += 1.0;
        if term <= sum * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

/// `erfc(a)` for `a ≥ 3` via `e^{-a²}/√π · 1/(a + (1/2)/(a + 1/(a + (3/2)/(a + ...))))`.
fn erfc_cf(a: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = a;
    let mut c = a;
    let mut d = 0.0;
    for n in 1..500 {
        let an = 0.5 * n as f64;
        d = a + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = a + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-a * a).exp() / (PI.sqrt() * f)
}

/// `(2/√π) ∫_a^b e^{-t²} dt` by 16-point Gauss-Legendre; exact to rounding
/// for `|b - a| ≤ 0.5`.
fn gauss_integral(a: f64, b: f64) -> f64 {
    let (nodes, weights) = super::rules::gauss_legendre_16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let s: f64 = nodes
        .iter()
        .zip(weights)
        .map(|(&t, &w)| {
            let y = mid + half * t;
            w * (-y * y).exp()
        })
        .sum();
    FRAC_2_SQRT_PI * half * s
}
