use super::Interval;
use crate::{Error, Result};

/// Root of `f` inside `bracket` by Brent's method.
///
/// Requires `f(lo) * f(hi) <= 0`. Each step takes an inverse-quadratic or
/// secant step when it stays inside the bracket and shrinks it fast enough,
/// and bisects otherwise, so convergence is guaranteed for continuous `f`.
///
/// Iteration stops once `|f(x)| <= tol * max(1, |f(lo)|, |f(hi)|)` and the
/// bracket is narrower than `tol * max(1, |x|)`, or the bracket can no
/// longer shrink in floating point. `tol = 0` runs to machine precision.
pub fn find_root<F>(f: F, bracket: Interval, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let (mut a, mut b) = (bracket.lo(), bracket.hi());
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.signum() != fb.signum()) || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let f_tol = tol * 1f64.max(fa.abs()).max(fb.abs());
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let x_tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol * 1f64.max(b.abs());
        let m = 0.5 * (c - b);
        let machine_tol = 2.0 * f64::EPSILON * b.abs().max(f64::MIN_POSITIVE);
        if fb == 0.0 || (fb.abs() <= f_tol && m.abs() <= x_tol) || m.abs() <= machine_tol {
            return Ok(b);
        }
        if e.abs() >= x_tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (x_tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > x_tol {
            d
        } else if m > 0.0 {
            x_tol.max(machine_tol)
        } else {
            -x_tol.max(machine_tol)
        };
        fb = f(b);
    }
    Ok(b)
}
