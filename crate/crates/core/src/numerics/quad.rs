//! Globally adaptive Gauss-Kronrod (10, 21) quadrature in one and two
//! dimensions. The 2-D routine is iterated: an adaptive outer integral whose
//! integrand is itself an adaptive inner integral.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::rules::{GK21_WG, GK21_WK, GK21_X};
use super::{Interval, QuadratureSpec};
use crate::{Error, Result};

/// Integral value with its error estimate and the number of subintervals
/// that were used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F>(f: &mut F, lo: f64, hi: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (lo + hi);
    let fc = f(mid)?;
    let mut kronrod = fc * GK21_WK[10];
    let mut gauss = 0.0;
    let mut abs_sum = fc.abs() * GK21_WK[10];
    let mut fv = [(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = half * GK21_X[j];
        let f1 = f(mid - dx)?;
        let f2 = f(mid + dx)?;
        fv[j] = (f1, f2);
        kronrod += GK21_WK[j] * (f1 + f2);
        abs_sum += GK21_WK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += GK21_WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = GK21_WK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += GK21_WK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        return Err(Error::InvalidInput(format!(
            "integrand not finite on [{lo}, {hi}]"
        )));
    }
    Ok((value, err))
}

/// Adaptive integration over consecutive pieces delimited by `edges`.
fn adaptive<F>(mut f: F, edges: &[f64], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut settled_value = 0.0;
    let mut settled_error = 0.0;
    for pair in edges.windows(2) {
        let (v, e) = gk21(&mut f, pair[0], pair[1])?;
        value += v;
        error += e;
        heap.push(Piece {
            lo: pair[0],
            hi: pair[1],
            value: v,
            error: e,
        });
    }
    let mut count = heap.len();
    loop {
        if error <= spec.target(value) {
            return Ok(Estimate {
                value,
                error,
                subdivisions: count,
            });
        }
        if count >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: error,
                subdivisions: count,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::NonConvergence {
                estimate: error,
                subdivisions: count,
            });
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval at machine resolution; freeze it
            settled_value += worst.value;
            settled_error += worst.error;
            if heap.is_empty() {
                return Err(Error::NonConvergence {
                    estimate: error,
                    subdivisions: count,
                });
            }
            continue;
        }
        let (v1, e1) = gk21(&mut f, worst.lo, mid)?;
        let (v2, e2) = gk21(&mut f, mid, worst.hi)?;
        heap.push(Piece {
            lo: worst.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            lo: mid,
            hi: worst.hi,
            value: v2,
            error: e2,
        });
        count += 1;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        if count % 256 == 0 || error <= spec.target(value) {
            // re-sum to keep rounding drift out of the totals
            value = settled_value + heap.iter().map(|p| p.value).sum::<f64>();
            error = settled_error + heap.iter().map(|p| p.error).sum::<f64>();
        }
    }
}

/// Integral of `f` over `iv`.
pub fn integrate_1d<F>(f: F, iv: Interval, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_1d_pieces(f, &[iv.lo(), iv.hi()], spec).map(|e| e.value)
}

/// Integral of `f` over `[edges[0], edges[last]]`, starting from the given
/// partition. Breakpoints at kinks or narrow peaks keep the adaptive search
/// from missing them.
pub fn integrate_1d_pieces<F>(f: F, edges: &[f64], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    check_edges(edges)?;
    adaptive(|x| Ok(f(x)), edges, spec)
}

/// Integral of `f` over the rectangle `iv1 × iv2`.
pub fn integrate_2d<F>(f: F, iv1: Interval, iv2: Interval, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    integrate_2d_pieces(f, &[iv1.lo(), iv1.hi()], &[iv2.lo(), iv2.hi()], spec).map(|e| e.value)
}

/// Iterated 2-D integral with initial partitions on both axes. The inner
/// integrals run at a tenth of the outer tolerances.
pub fn integrate_2d_pieces<F>(
    f: F,
    edges1: &[f64],
    edges2: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: Fn(f64, f64) -> f64,
{
    check_edges(edges1)?;
    check_edges(edges2)?;
    let inner_spec = QuadratureSpec {
        rel_tol: spec.rel_tol * 0.1,
        abs_tol: spec.abs_tol * 0.1 / (edges1[edges1.len() - 1] - edges1[0]),
        max_subdivisions: spec.max_subdivisions,
    };
    adaptive(
        |x| adaptive(|y| Ok(f(x, y)), edges2, &inner_spec).map(|e| e.value),
        edges1,
        spec,
    )
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::InvalidInput("need at least two edges".into()));
    }
    for pair in edges.windows(2) {
        Interval::new(pair[0], pair[1])?;
    }
    Ok(())
}
