//! Direct quadrature of the HOM and MZ detection-rate integrals.
//!
//! Both integrals run over the signal/idler detunings `(ω̃₁, ω̃₂)` of the
//! two detected photons. They are evaluated in sum/difference coordinates
//! `u = ω̃₁ + ω̃₂`, `v = ω̃₁ − ω̃₂`, where the pump weight `exp(−u²/Ω_p²)`
//! depends on `u` only and the two phase-matching factors are
//!
//! `φ₁ = φ_L(a u − b v)`, `φ₂ = φ_L(a u + b v)`,
//! `a = (γ_s + γ_i)/2`, `b = (γ_s − γ_i)/2`.
//!
//! The rectangle `|u| ≤ U`, `|v| ≤ V` is covered by a tensor product of
//! composite Gauss-Kronrod (7, 15) rules whose panels resolve the
//! phase-matching lobes, the pump Gaussian and the `cos(ωτ)` factors. The
//! Kronrod and Gauss sums on each axis give error estimates; an axis is
//! refined by halving all its panels until every point of the trace meets
//! the [`QuadratureSpec`].
//!
//! The squared moduli are expanded with exact trigonometric identities:
//!
//! HOM: `|φ₁ − φ₂ e^{ivτ}|² = φ₁² + φ₂² − 2φ₁φ₂ cos vτ`
//!
//! MZ: `|φ₁ s₁ s₂ − φ₂ c₁ c₂|² = (φ₁² + φ₂²)/4 · [1 + (cos Σ + cos vτ)/2]
//!      − φ₁φ₂ (cos vτ − cos Σ)/4 + (φ₂² − φ₁²)(cos x₁ + cos x₂)/4`
//!
//! with `x_k = (ω̃_k + ω_p/2)τ` and `Σ = x₁ + x₂ = (u + ω_p)τ`. The last MZ
//! term is odd in `v` and vanishes exactly on the mirrored rule. What
//! remains needs only four one-dimensional tables, computed once per trace:
//! `W(v) = Σ_u G(φ₁² + φ₂²)`, `X(v) = Σ_u G φ₁φ₂`, `Y(u) = Σ_v (φ₁² + φ₂²)`
//! and `Z(u) = Σ_v φ₁φ₂`.
//!
//! The `v` range keeps a fixed number of phase-matching lobes (see
//! [`DomainPolicy`]); the sinc² tails beyond it shift the normalized rates
//! by roughly `depth/(π² lobes)`. Baselines are integrated over the same
//! domain.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::biphoton::{phi_l, BiphotonAmplitude, PumpSpectrum};
use crate::dispersion::PhaseMatchParams;
use crate::numerics::rules::PanelRule;
use crate::numerics::{integrate_1d_pieces, linspace, QuadratureSpec};
use crate::{Error, Result};

/// Truncation of the infinite detuning plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainPolicy {
    /// Phase-matching lobes kept on each side of `v = 0`.
    pub lobes: f64,
    /// Half-width of the `u` range in pump bandwidths.
    pub pump_widths: f64,
}

impl Default for DomainPolicy {
    fn default() -> Self {
        Self {
            lobes: 1000.0,
            pump_widths: 8.0,
        }
    }
}

impl DomainPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.lobes >= 1.0 && self.lobes.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "lobes must be ≥ 1, got {}",
                self.lobes
            )));
        }
        if !(self.pump_widths > 0.0 && self.pump_widths.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "pump_widths must be positive, got {}",
                self.pump_widths
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Geometry {
    a: f64,
    b: f64,
    length: f64,
    omega_p: f64,
    bandwidth: f64,
    u_half: f64,
    v_half: f64,
    u_panel: f64,
    v_panel: f64,
}

impl Geometry {
    fn new(
        params: &PhaseMatchParams,
        pump: &PumpSpectrum,
        policy: &DomainPolicy,
        tau_max: f64,
    ) -> Result<Self> {
        policy.validate()?;
        let bandwidth = pump.bandwidth();
        if !(bandwidth > 0.0) {
            return Err(Error::InvalidInput(format!(
                "quadrature needs a positive pump bandwidth, got {bandwidth}"
            )));
        }
        let (gs, gi) = (params.gamma_s(), params.gamma_i());
        let a = 0.5 * (gs + gi);
        let b = 0.5 * (gs - gi);
        let length = params.length();
        // |b| is the dip half-width scale; θ = π/4 leaves nothing to decay in v
        if b.abs() <= 2.0 * f64::EPSILON * params.gamma() {
            return Err(Error::DegenerateDip);
        }
        let v_lobe = TAU / (b.abs() * length);
        let fringe = if tau_max > 0.0 {
            TAU / tau_max
        } else {
            f64::INFINITY
        };
        let u_lobe = if a.abs() > 2.0 * f64::EPSILON * params.gamma() {
            TAU / (a.abs() * length)
        } else {
            f64::INFINITY
        };
        Ok(Self {
            a,
            b,
            length,
            omega_p: params.omega_p(),
            bandwidth,
            u_half: policy.pump_widths * bandwidth,
            v_half: policy.lobes * v_lobe,
            u_panel: u_lobe.min(fringe).min(0.5 * bandwidth),
            v_panel: v_lobe.min(fringe),
        })
    }
}

/// Kronrod (0) and Gauss (1) weighted tables over one refinement level.
struct Tables {
    u: PanelRule,
    v: PanelRule,
    /// `exp(−u²/Ω_p²)` at the `u` nodes.
    g: Vec<f64>,
    /// `W(v)` and `X(v)`, indexed by the `u` weight set.
    w: [Vec<f64>; 2],
    x: [Vec<f64>; 2],
    /// `Y(u)` and `Z(u)`, indexed by the `v` weight set. Empty for HOM.
    y: [Vec<f64>; 2],
    z: [Vec<f64>; 2],
}

const V_CHUNK: usize = 2048;

fn build_tables(geo: &Geometry, u_panels: usize, v_panels: usize, with_u_sums: bool) -> Tables {
    let u = PanelRule::mirrored(geo.u_half, u_panels);
    let v = PanelRule::mirrored(geo.v_half, v_panels);
    let inv_bw2 = 1.0 / (geo.bandwidth * geo.bandwidth);
    let g: Vec<f64> = u.nodes.iter().map(|&x| (-x * x * inv_bw2).exp()).collect();
    let half_l = 0.5 * geo.length;
    // φ(a u ∓ b v) = 2 [sin(A)cos(B) ∓ cos(A)sin(B)] / (a u ∓ b v)
    let au: Vec<f64> = u.nodes.iter().map(|&x| geo.a * x).collect();
    let (su, cu): (Vec<f64>, Vec<f64>) = au.iter().map(|&x| (x * half_l).sin_cos()).unzip();
    let gk: Vec<f64> = g.iter().zip(&u.kronrod).map(|(g, w)| g * w).collect();
    let gg: Vec<f64> = g.iter().zip(&u.gauss).map(|(g, w)| g * w).collect();
    let nu = u.len();

    struct Chunk {
        w: [Vec<f64>; 2],
        x: [Vec<f64>; 2],
        y: [Vec<f64>; 2],
        z: [Vec<f64>; 2],
    }

    let chunks: Vec<Chunk> = v
        .nodes
        .par_chunks(V_CHUNK)
        .enumerate()
        .map(|(ci, vs)| {
            let offset = ci * V_CHUNK;
            let mut c = Chunk {
                w: [vec![0.0; vs.len()], vec![0.0; vs.len()]],
                x: [vec![0.0; vs.len()], vec![0.0; vs.len()]],
                y: if with_u_sums {
                    [vec![0.0; nu], vec![0.0; nu]]
                } else {
                    [vec![], vec![]]
                },
                z: if with_u_sums {
                    [vec![0.0; nu], vec![0.0; nu]]
                } else {
                    [vec![], vec![]]
                },
            };
            for (k, &vn) in vs.iter().enumerate() {
                let bv = geo.b * vn;
                let (sv, cv) = (bv * half_l).sin_cos();
                let (wvk, wvg) = (v.kronrod[offset + k], v.gauss[offset + k]);
                let (mut wk, mut wg, mut xk, mut xg) = (0.0, 0.0, 0.0, 0.0);
                for j in 0..nu {
                    let x1 = au[j] - bv;
                    let x2 = au[j] + bv;
                    let p1 = sinc_from_parts(su[j] * cv - cu[j] * sv, x1, geo.length);
                    let p2 = sinc_from_parts(su[j] * cv + cu[j] * sv, x2, geo.length);
                    let sq = p1 * p1 + p2 * p2;
                    let cross = p1 * p2;
                    wk += gk[j] * sq;
                    wg += gg[j] * sq;
                    xk += gk[j] * cross;
                    xg += gg[j] * cross;
                    if with_u_sums {
                        c.y[0][j] += wvk * sq;
                        c.y[1][j] += wvg * sq;
                        c.z[0][j] += wvk * cross;
                        c.z[1][j] += wvg * cross;
                    }
                }
                c.w[0][k] = wk;
                c.w[1][k] = wg;
                c.x[0][k] = xk;
                c.x[1][k] = xg;
            }
            c
        })
        .collect();

    let nv = v.len();
    let mut t = Tables {
        w: [Vec::with_capacity(nv), Vec::with_capacity(nv)],
        x: [Vec::with_capacity(nv), Vec::with_capacity(nv)],
        y: if with_u_sums {
            [vec![0.0; nu], vec![0.0; nu]]
        } else {
            [vec![], vec![]]
        },
        z: if with_u_sums {
            [vec![0.0; nu], vec![0.0; nu]]
        } else {
            [vec![], vec![]]
        },
        u,
        v,
        g,
    };
    // chunks are reduced in index order so the result does not depend on
    // the thread count
    for c in chunks {
        for s in 0..2 {
            t.w[s].extend_from_slice(&c.w[s]);
            t.x[s].extend_from_slice(&c.x[s]);
            if with_u_sums {
                for j in 0..nu {
                    t.y[s][j] += c.y[s][j];
                    t.z[s][j] += c.z[s][j];
                }
            }
        }
    }
    t
}

/// `2 sin(xL/2)/x` given `sin(xL/2)` computed elsewhere. Near the removable
/// singularity the product form loses relative accuracy, so the direct
/// series is used there.
#[inline]
fn sinc_from_parts(sin_half: f64, x: f64, length: f64) -> f64 {
    if (x * length).abs() < 2e-3 {
        phi_l(x, length)
    } else {
        2.0 * sin_half / x
    }
}

const TAU_CHUNK: usize = 64;

/// For each `τ`, `Σ_k coeffs[j][k] cos((nodes[k] + shift) τ)` for every
/// coefficient row `j`. Runs of equally spaced `τ` are advanced by complex
/// rotation instead of fresh cosines, re-seeded every 64 points.
fn cos_sums(nodes: &[f64], shift: f64, coeffs: &[&[f64]], taus: &[f64]) -> Vec<Vec<f64>> {
    let rows = coeffs.len();
    taus.par_chunks(TAU_CHUNK)
        .flat_map_iter(|chunk| {
            let m = chunk.len();
            let mut acc = vec![vec![0.0; rows]; m];
            let step = if m > 1 { chunk[1] - chunk[0] } else { 0.0 };
            let uniform = m > 1
                && chunk.iter().enumerate().all(|(i, &t)| {
                    (t - (chunk[0] + i as f64 * step)).abs() <= 1e-12 * step.abs().max(t.abs())
                });
            for (k, &node) in nodes.iter().enumerate() {
                let freq = node + shift;
                if uniform {
                    let (mut s, mut c) = (freq * chunk[0]).sin_cos();
                    let (ds, dc) = (freq * step).sin_cos();
                    for a in acc.iter_mut() {
                        for (j, row) in coeffs.iter().enumerate() {
                            a[j] += row[k] * c;
                        }
                        let next_c = c * dc - s * ds;
                        s = s * dc + c * ds;
                        c = next_c;
                    }
                } else {
                    for (a, &t) in acc.iter_mut().zip(chunk) {
                        let c = (freq * t).cos();
                        for (j, row) in coeffs.iter().enumerate() {
                            a[j] += row[k] * c;
                        }
                    }
                }
            }
            acc
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Hom,
    Mz,
}

/// Rates at every `τ` for the weight combinations (u, v) = KK, GK, KG.
fn evaluate(t: &Tables, geo: &Geometry, kind: Kind, taus: &[f64]) -> Vec<[f64; 3]> {
    const COMBOS: [(usize, usize); 3] = [(0, 0), (1, 0), (0, 1)];
    let weights = [&t.v.kronrod, &t.v.gauss];
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let norm: Vec<f64> = COMBOS
        .iter()
        .map(|&(su, sv)| dot(&t.w[su], weights[sv]))
        .collect();

    // v-side coefficient rows: weights[sv] * X[su] (and W[su] for MZ)
    let mut v_rows: Vec<Vec<f64>> = Vec::new();
    for &(su, sv) in &COMBOS {
        v_rows.push(
            t.x[su]
                .iter()
                .zip(weights[sv])
                .map(|(a, b)| a * b)
                .collect(),
        );
        if kind == Kind::Mz {
            v_rows.push(
                t.w[su]
                    .iter()
                    .zip(weights[sv])
                    .map(|(a, b)| a * b)
                    .collect(),
            );
        }
    }
    let v_refs: Vec<&[f64]> = v_rows.iter().map(|r| r.as_slice()).collect();
    let v_sums = cos_sums(&t.v.nodes, 0.0, &v_refs, taus);

    let u_sums = if kind == Kind::Mz {
        let uw = [&t.u.kronrod, &t.u.gauss];
        let mut u_rows: Vec<Vec<f64>> = Vec::new();
        for &(su, sv) in &COMBOS {
            let gw: Vec<f64> = t.g.iter().zip(uw[su]).map(|(g, w)| g * w).collect();
            u_rows.push(gw.iter().zip(&t.y[sv]).map(|(a, b)| a * b).collect());
            u_rows.push(gw.iter().zip(&t.z[sv]).map(|(a, b)| a * b).collect());
        }
        let u_refs: Vec<&[f64]> = u_rows.iter().map(|r| r.as_slice()).collect();
        cos_sums(&t.u.nodes, geo.omega_p, &u_refs, taus)
    } else {
        Vec::new()
    };

    (0..taus.len())
        .map(|i| {
            let mut out = [0.0; 3];
            for c in 0..3 {
                out[c] = match kind {
                    Kind::Hom => 1.0 - 2.0 * v_sums[i][c] / norm[c],
                    Kind::Mz => {
                        let (cx, cw) = (v_sums[i][2 * c], v_sums[i][2 * c + 1]);
                        let (cy, cz) = (u_sums[i][2 * c], u_sums[i][2 * c + 1]);
                        1.0 + (0.5 * (cy + cw) - (cx - cz)) / norm[c]
                    }
                };
            }
            out
        })
        .collect()
}

fn trace(
    kind: Kind,
    params: &PhaseMatchParams,
    pump: &PumpSpectrum,
    taus: &[f64],
    spec: &QuadratureSpec,
    policy: &DomainPolicy,
) -> Result<Vec<f64>> {
    spec.validate()?;
    if taus.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("delays must be finite".into()));
    }
    let tau_max = taus.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let mut geo = Geometry::new(params, pump, policy, tau_max)?;
    if kind == Kind::Hom {
        // the HOM integrand carries no cos((u + ω_p)τ)
        geo.u_panel = geo
            .u_panel
            .max((0.5 * geo.bandwidth).min(TAU / (geo.a.abs() * geo.length)));
    }
    let mut u_panels = (geo.u_half / geo.u_panel).ceil().max(1.0) as usize;
    let mut v_panels = (geo.v_half / geo.v_panel).ceil().max(1.0) as usize;
    loop {
        if 2 * u_panels > spec.max_subdivisions || 2 * v_panels > spec.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: f64::NAN,
                subdivisions: 2 * u_panels.max(v_panels),
            });
        }
        let tables = build_tables(&geo, u_panels, v_panels, kind == Kind::Mz);
        let est = evaluate(&tables, &geo, kind, taus);
        let (mut refine_u, mut refine_v) = (false, false);
        let mut worst = 0.0f64;
        for e in &est {
            let target = spec.target(e[0]);
            let (eu, ev) = ((e[0] - e[1]).abs(), (e[0] - e[2]).abs());
            worst = worst.max(eu + ev);
            refine_u |= eu > 0.5 * target;
            refine_v |= ev > 0.5 * target;
        }
        log::debug!(
            "{kind:?} quadrature: {} × {} panels, worst error estimate {worst:.2e}",
            2 * u_panels,
            2 * v_panels
        );
        if !refine_u && !refine_v {
            return Ok(est.into_iter().map(|e| e[0]).collect());
        }
        if refine_u {
            u_panels *= 2;
        }
        if refine_v {
            v_panels *= 2;
        }
        if 2 * u_panels > spec.max_subdivisions || 2 * v_panels > spec.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: worst,
                subdivisions: 2 * u_panels.max(v_panels),
            });
        }
    }
}

/// Normalized HOM rates `P₋(τ)` by direct quadrature, one per delay.
pub fn hom_trace_integral(
    params: &PhaseMatchParams,
    pump: &PumpSpectrum,
    taus: &[f64],
    spec: &QuadratureSpec,
    policy: &DomainPolicy,
) -> Result<Vec<f64>> {
    trace(Kind::Hom, params, pump, taus, spec, policy)
}

/// Normalized MZ rates `P₊(τ)` by direct quadrature, one per delay.
pub fn mz_trace_integral(
    params: &PhaseMatchParams,
    pump: &PumpSpectrum,
    taus: &[f64],
    spec: &QuadratureSpec,
    policy: &DomainPolicy,
) -> Result<Vec<f64>> {
    trace(Kind::Mz, params, pump, taus, spec, policy)
}

/// `P₋(τ)` at a single delay with the default domain.
pub fn hom_rate_integral(
    params: &PhaseMatchParams,
    pump: &PumpSpectrum,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(hom_trace_integral(params, pump, &[tau], spec, &DomainPolicy::default())?[0])
}

/// `P₊(τ)` at a single delay with the default domain.
pub fn mz_rate_integral(
    params: &PhaseMatchParams,
    pump: &PumpSpectrum,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(mz_trace_integral(params, pump, &[tau], spec, &DomainPolicy::default())?[0])
}

/// `(P₋, P₊)` from the one-dimensional reduced integrals of a factorized
/// amplitude `A = S(ω_s + ω_i) D(ω_s − ω_i)`:
///
/// `P₋ ∝ ∫ |D(v)|² (1 − cos vτ) dv`, `P₊ ∝ ∫ |S(u)|² (1 + cos((u + ω_p)τ)) du`,
///
/// over the same truncated domain as the two-dimensional integrals.
pub fn symmetric_rates(
    bp: &BiphotonAmplitude,
    tau: f64,
    spec: &QuadratureSpec,
    policy: &DomainPolicy,
) -> Result<(f64, f64)> {
    let length = bp.params().length();
    let defect = bp.factorization_check(4096);
    let limit = 1e-9 * length;
    if defect > limit {
        return Err(Error::NotFactorizable { defect, limit });
    }
    let geo = Geometry::new(bp.params(), bp.pump(), policy, tau.abs())?;
    let b = geo.b;
    let phi2 = |v: f64| {
        let p = phi_l(b * v, length);
        p * p
    };
    // both integrands are even; integrate the positive half
    let v_edges = linspace(
        0.0,
        geo.v_half,
        (geo.v_half / geo.v_panel).ceil() as usize + 1,
    );
    let d_norm = integrate_1d_pieces(phi2, &v_edges, spec)?.value;
    // the oscillating integrals may cancel to zero, so their target is set
    // relative to the baseline
    let scaled = |norm: f64| QuadratureSpec {
        abs_tol: spec.abs_tol.max(spec.rel_tol * norm.abs()),
        ..*spec
    };
    let d_cross =
        integrate_1d_pieces(|v| phi2(v) * (v * tau).cos(), &v_edges, &scaled(d_norm))?.value;
    let inv_bw2 = 1.0 / (geo.bandwidth * geo.bandwidth);
    let s2 = |u: f64| (-u * u * inv_bw2).exp();
    let fringe = if tau != 0.0 {
        PI / tau.abs()
    } else {
        f64::INFINITY
    };
    let u_panel = (0.5 * geo.bandwidth).min(fringe);
    let u_edges = linspace(
        -geo.u_half,
        geo.u_half,
        (2.0 * geo.u_half / u_panel).ceil() as usize + 1,
    );
    let s_norm = integrate_1d_pieces(s2, &u_edges, spec)?.value;
    let s_cross = integrate_1d_pieces(
        |u| s2(u) * ((u + geo.omega_p) * tau).cos(),
        &u_edges,
        &scaled(s_norm),
    )?
    .value;
    Ok((1.0 - d_cross / d_norm, 1.0 + s_cross / s_norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometry::closed::{closed_form_params, hom_rate_closed, mz_rate_closed};
    use crate::numerics::{integrate_2d, Interval};
    use std::f64::consts::FRAC_PI_4;

    fn setup(theta: f64, length: f64, bw: f64) -> (PhaseMatchParams, PumpSpectrum) {
        (
            PhaseMatchParams::new(2000.0, 8e-5, theta, length).unwrap(),
            PumpSpectrum::new(2000.0, bw).unwrap(),
        )
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn cos_sums_uniform_and_direct_agree() {
        let nodes: Vec<f64> = (0..500).map(|k| -300.0 + 1.3 * k as f64).collect();
        let w: Vec<f64> = (0..500).map(|k| 1.0 + (k % 7) as f64).collect();
        let taus = linspace(-0.4, 0.4, 301);
        let mut jittered = taus.clone();
        jittered[5] += 1e-9;
        let scale: f64 = w.iter().sum();
        let fast = cos_sums(&nodes, 2000.0, &[&w], &taus);
        let slow = cos_sums(&nodes, 2000.0, &[&w], &jittered);
        for (i, &t) in taus.iter().enumerate() {
            let direct: f64 = nodes
                .iter()
                .zip(&w)
                .map(|(n, w)| w * ((n + 2000.0) * t).cos())
                .sum();
            assert!(
                (fast[i][0] - direct).abs() < 1e-12 * scale,
                "τ={t}: {}",
                fast[i][0] - direct
            );
            if i != 5 {
                assert!((slow[i][0] - direct).abs() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn extended_matching_hom_vanishes_at_zero_delay() {
        for bw in [4.0, 40.0, 120.0] {
            let (p, pump) = setup(-FRAC_PI_4, 1e3, bw);
            let r = hom_trace_integral(
                &p,
                &pump,
                &[0.0],
                &spec(),
                &DomainPolicy {
                    lobes: 50.0,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(r[0].abs() < 1e-6, "Ω_p={bw}: {}", r[0]);
        }
    }

    #[test]
    fn hom_far_outside_dip_is_one() {
        let (p, pump) = setup(PI / 5.0, 2e4, 40.0);
        let c = closed_form_params(&p, &pump).unwrap();
        let t = 3.0 * (c.tau_theta + 4.0 / 40.0);
        let r = hom_trace_integral(
            &p,
            &pump,
            &[t],
            &spec(),
            &DomainPolicy {
                lobes: 100.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((r[0] - 1.0).abs() < 1e-4, "{}", r[0]);
    }

    #[test]
    fn hom_matches_closed_form_off_axis() {
        let (p, pump) = setup(PI / 5.0, 2e4, 40.0);
        let c = closed_form_params(&p, &pump).unwrap();
        let taus = linspace(0.0, 1.2 * c.tau_theta, 25);
        let q = hom_trace_integral(&p, &pump, &taus, &spec(), &DomainPolicy::default()).unwrap();
        for (t, v) in taus.iter().zip(&q) {
            let cl = hom_rate_closed(&c, *t).unwrap();
            assert!((v - cl).abs() < 1e-4, "τ={t}: {v} vs {cl}");
        }
    }

    #[test]
    fn mz_matches_closed_form_at_extended_matching() {
        let (p, pump) = setup(-FRAC_PI_4, 1e3, 40.0);
        let c = closed_form_params(&p, &pump).unwrap();
        let taus = linspace(-0.05, 0.05, 41);
        let q = mz_trace_integral(
            &p,
            &pump,
            &taus,
            &spec(),
            &DomainPolicy {
                lobes: 20.0,
                ..Default::default()
            },
        )
        .unwrap();
        for (t, v) in taus.iter().zip(&q) {
            assert!(
                (v - mz_rate_closed(&c, &pump, &p, *t)).abs() < 1e-6,
                "τ={t}"
            );
        }
    }

    /// Same truncated rectangle, literal squared-modulus integrand, generic
    /// adaptive cubature.
    #[test]
    fn mz_expansion_matches_literal_integrand() {
        let (p, pump) = setup(PI / 5.0, 2e3, 40.0);
        let policy = DomainPolicy {
            lobes: 2.0,
            pump_widths: 6.0,
        };
        let tau = 0.013;
        let geo = Geometry::new(&p, &pump, &policy, tau).unwrap();
        let (gs, gi, l, wp) = (p.gamma_s(), p.gamma_i(), p.length(), p.omega_p());
        let literal = |u: f64, v: f64, tau: f64| {
            let (w1, w2) = (0.5 * (u + v), 0.5 * (u - v));
            let g = (-u * u / (40.0 * 40.0)).exp();
            let f1 = phi_l(gs * w2 + gi * w1, l);
            let f2 = phi_l(gs * w1 + gi * w2, l);
            let (a1, a2) = (0.5 * (w1 + 0.5 * wp) * tau, 0.5 * (w2 + 0.5 * wp) * tau);
            let m = f1 * a1.sin() * a2.sin() - f2 * a1.cos() * a2.cos();
            g * m * m
        };
        let base = |u: f64, v: f64| {
            let (w1, w2) = (0.5 * (u + v), 0.5 * (u - v));
            let g = (-u * u / (40.0 * 40.0)).exp();
            let f1 = phi_l(gs * w2 + gi * w1, l);
            let f2 = phi_l(gs * w1 + gi * w2, l);
            g * (f1 * f1 + f2 * f2)
        };
        let tight = QuadratureSpec::new(1e-9, 1e-14, 1 << 15).unwrap();
        let iu = Interval::centered(0.0, geo.u_half).unwrap();
        let iv = Interval::centered(0.0, geo.v_half).unwrap();
        let num = integrate_2d(|u, v| literal(u, v, tau), iu, iv, &tight).unwrap();
        let den = integrate_2d(base, iu, iv, &tight).unwrap();
        let oracle = num / (0.25 * den);
        let got = mz_trace_integral(&p, &pump, &[tau], &tight, &policy).unwrap()[0];
        assert!((got - oracle).abs() < 1e-6, "{got} vs {oracle}");
    }

    #[test]
    fn mz_matches_corrected_closed_form_off_axis() {
        for theta in [PI / 5.0, -PI / 6.0] {
            let (p, pump) = setup(theta, 2e4, 40.0);
            let c = closed_form_params(&p, &pump).unwrap();
            let taus = linspace(0.0, 1.2 * c.tau_theta, 31);
            let q = mz_trace_integral(&p, &pump, &taus, &spec(), &DomainPolicy::default()).unwrap();
            for (t, v) in taus.iter().zip(&q) {
                let cl = mz_rate_closed(&c, &pump, &p, *t);
                assert!((v - cl).abs() < 1e-3, "θ={theta} τ={t}: {v} vs {cl}");
            }
        }
    }

    #[test]
    fn symmetric_rates_match_two_dimensional_quadrature() {
        let (p, pump) = setup(-FRAC_PI_4, 1e3, 40.0);
        let bp = BiphotonAmplitude::new(p, pump).unwrap();
        let policy = DomainPolicy {
            lobes: 100.0,
            ..Default::default()
        };
        let taus = [0.0, 0.01, 0.03, 0.05, 0.08];
        let hom = hom_trace_integral(&p, &pump, &taus, &spec(), &policy).unwrap();
        let mz = mz_trace_integral(&p, &pump, &taus, &spec(), &policy).unwrap();
        for (i, &t) in taus.iter().enumerate() {
            let (m, pl) = symmetric_rates(&bp, t, &spec(), &policy).unwrap();
            assert!((m - hom[i]).abs() < 1e-5, "τ={t}: {m} vs {}", hom[i]);
            assert!((pl - mz[i]).abs() < 1e-5, "τ={t}: {pl} vs {}", mz[i]);
        }
        let (m0, p0) = symmetric_rates(&bp, 0.0, &spec(), &policy).unwrap();
        assert!(m0.abs() < 1e-12);
        assert!((p0 - 2.0).abs() < 1e-12);
        // envelope falls to 1/e at τ = 2/Ω_p
        let (_, pe) = symmetric_rates(&bp, 0.05, &spec(), &policy).unwrap();
        let expect = 1.0 + (-1.0f64).exp() * (2000.0f64 * 0.05).cos();
        assert!((pe - expect).abs() < 1e-8);
    }

    #[test]
    fn symmetric_rates_need_factorization() {
        let (p, pump) = setup(0.0, 1e3, 40.0);
        let bp = BiphotonAmplitude::new(p, pump).unwrap();
        let r = symmetric_rates(&bp, 0.0, &spec(), &DomainPolicy::default());
        assert!(matches!(r, Err(Error::NotFactorizable { .. })));
    }

    #[test]
    fn degenerate_angle_is_rejected() {
        let (p, pump) = setup(FRAC_PI_4, 1e3, 40.0);
        assert_eq!(
            hom_rate_integral(&p, &pump, 0.0, &spec()),
            Err(Error::DegenerateDip)
        );
    }

    #[test]
    fn tiny_budget_reports_non_convergence() {
        let (p, pump) = setup(PI / 5.0, 2e4, 40.0);
        let tight = QuadratureSpec::new(1e-8, 0.0, 64).unwrap();
        let r = hom_trace_integral(&p, &pump, &[0.01], &tight, &DomainPolicy::default());
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
