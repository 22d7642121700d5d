//! Subcommands behind the `spdc` binary. Each command takes a resolved
//! [`RunConfig`] and returns the text it would write, so the same code
//! drives the binary, the examples and the golden-file tests.

mod config;
mod crystal;
mod csv;

use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;

use crate::biphoton::{BiphotonAmplitude, PumpSpectrum};
use crate::dispersion::{
    check_condition, polar_params, solve_epm, taylor_gammas, validity_bound, PhaseMatchParams,
    DEFAULT_CONDITION_TOL,
};
use crate::interferometry::{
    closed_trace, default_tau_span, quadrature_trace, sweep_visibility, tau_grid, DomainPolicy,
    Interferometer, SweepSpec, SweptParameter,
};
use crate::numerics::{linspace, Interval};
use crate::{Error, Result};

pub use config::{parse_angle, parse_key_values, RunConfig, RunMethod};
pub use crystal::parse_crystal;
pub use csv::{sci, CsvWriter};

/// Process exit status for an error: 1 invalid input, 2 numerical
/// failure, 3 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonConvergence { .. } => 2,
        Error::Io(_) => 3,
        _ => 1,
    }
}

/// Loads a config file (if any) and layers `flags` over it.
pub fn load_config(path: Option<&Path>, flags: &[(String, String)]) -> Result<RunConfig> {
    let file = match path {
        Some(p) => parse_key_values(&fs::read_to_string(p)?)?,
        None => Vec::new(),
    };
    RunConfig::resolve(&file, flags)
}

/// Writes to the configured output path, or stdout when none is set.
pub fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output {
        Some(p) => fs::write(p, text).map_err(Error::from),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn setup(cfg: &RunConfig) -> Result<(PhaseMatchParams, PumpSpectrum)> {
    Ok((
        PhaseMatchParams::new(cfg.omega_p, cfg.gamma, cfg.theta, cfg.length_um)?,
        PumpSpectrum::new(cfg.omega_p, cfg.pump_bw)?,
    ))
}

fn metadata(cfg: &RunConfig, command: &str) -> Vec<(&'static str, String)> {
    let mut m = vec![("command", command.to_string())];
    m.extend(cfg.metadata());
    m
}

/// `|A|` on a square grid around degeneracy. Rows run over the signal
/// frequency, columns over the idler frequency.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<String> {
    let (params, pump) = setup(cfg)?;
    let bp = BiphotonAmplitude::new(params, pump)?;
    let half = cfg
        .grid_span
        .unwrap_or_else(|| 3.0 * cfg.pump_bw.max(2.0 * TAU / (cfg.gamma * cfg.length_um)));
    let axis = Interval::centered(0.5 * cfg.omega_p, half)?;
    let grid = bp.grid(axis, axis, cfg.grid_steps)?;
    let mut w = CsvWriter::new(metadata(cfg, "spectrum"), &["omega_s", "omega_i", "abs_A"]);
    for (r, &ws) in grid.axis_s.iter().enumerate() {
        for (c, &wi) in grid.axis_i.iter().enumerate() {
            w.row(&[ws, wi, grid.get(r, c)]);
        }
    }
    Ok(w.finish())
}

fn trace_taus(
    cfg: &RunConfig,
    kind: Interferometer,
    params: &PhaseMatchParams,
    pump: &PumpSpectrum,
) -> Result<Vec<f64>> {
    let span = match cfg.tau_span {
        Some(s) => s,
        None => default_tau_span(params, pump)?,
    };
    match cfg.tau_steps {
        Some(n) => {
            if kind == Interferometer::Mz && (n as f64) < 40.0 * 2.0 * span / (TAU / cfg.omega_p) {
                log::warn!("tau_steps = {n} samples fewer than 40 points per pump fringe; fringes will alias");
            }
            Ok(linspace(-span, span, n))
        }
        None => tau_grid(kind, span, cfg.omega_p),
    }
}

fn cmd_trace(cfg: &RunConfig, kind: Interferometer) -> Result<String> {
    let (params, pump) = setup(cfg)?;
    let taus = trace_taus(cfg, kind, &params, &pump)?;
    let mut header = vec!["tau_ps"];
    let mut columns = Vec::new();
    if cfg.method.closed() {
        header.push("P_closed");
        columns.push(closed_trace(kind, &params, &pump, &taus)?.values);
    }
    if cfg.method.quadrature() {
        header.push("P_quadrature");
        let policy = DomainPolicy {
            lobes: cfg.lobes,
            ..DomainPolicy::default()
        };
        columns
            .push(quadrature_trace(kind, &params, &pump, &taus, &cfg.quadrature, &policy)?.values);
    }
    let name = match kind {
        Interferometer::Hom => "hom",
        Interferometer::Mz => "mz",
    };
    let mut w = CsvWriter::new(metadata(cfg, name), &header);
    for (i, &t) in taus.iter().enumerate() {
        let mut row = vec![t];
        row.extend(columns.iter().map(|c| c[i]));
        w.row(&row);
    }
    Ok(w.finish())
}

/// HOM trace `P₋(τ)`.
pub fn cmd_hom(cfg: &RunConfig) -> Result<String> {
    cmd_trace(cfg, Interferometer::Hom)
}

/// MZ trace `P₊(τ)`.
pub fn cmd_mz(cfg: &RunConfig) -> Result<String> {
    cmd_trace(cfg, Interferometer::Mz)
}

/// Visibility against pump bandwidth (HOM default) or crystal length (MZ
/// default), one row per sweep point and angle.
pub fn cmd_visibility(cfg: &RunConfig) -> Result<String> {
    let kind = cfg.interferometer;
    let swept = cfg.sweep.unwrap_or(match kind {
        Interferometer::Hom => SweptParameter::PumpBandwidth,
        Interferometer::Mz => SweptParameter::CrystalLength,
    });
    let (lo, hi) = match swept {
        SweptParameter::PumpBandwidth => {
            (cfg.sweep_min.unwrap_or(0.5), cfg.sweep_max.unwrap_or(200.0))
        }
        SweptParameter::CrystalLength => {
            (cfg.sweep_min.unwrap_or(100.0), cfg.sweep_max.unwrap_or(5e4))
        }
    };
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidInput(format!(
            "sweep range must satisfy 0 < min < max, got [{lo}, {hi}]"
        )));
    }
    let sweep = SweepSpec {
        swept,
        values: linspace(lo, hi, cfg.sweep_steps),
        omega_p: cfg.omega_p,
        gamma: cfg.gamma,
        length: cfg.length_um,
        pump_bandwidth: cfg.pump_bw,
    };
    let curves = sweep_visibility(kind, &cfg.thetas, &sweep)?;
    let mut m = metadata(cfg, "visibility");
    m.push(("swept", swept.to_string()));
    let mut w = CsvWriter::new(m, &["sweep_value", "theta", "visibility"]);
    for (i, &x) in sweep.values.iter().enumerate() {
        for c in &curves {
            w.row(&[x, c.theta, c.vs[i]]);
        }
    }
    Ok(w.finish())
}

/// Solves the matching conditions for the crystal file and reports the
/// resulting first-order parameters. Without a tuning knob the crystal is
/// evaluated as given at the configured pump frequency.
pub fn cmd_match(cfg: &RunConfig) -> Result<String> {
    use std::fmt::Write;
    let path = cfg
        .crystal
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("match needs a crystal file (crystal=PATH)".into()))?;
    let model = parse_crystal(&fs::read_to_string(path)?)?;
    let mut out = String::new();
    writeln!(out, "#command=match").unwrap();
    for (k, v) in cfg.metadata() {
        writeln!(out, "#{k}={v}").unwrap();
    }
    let (model, omega_p) = if model.knob().is_some() {
        let sol = solve_epm(
            &model,
            Interval::new(cfg.omega_lo, cfg.omega_hi)?,
            Interval::new(cfg.zeta_lo, cfg.zeta_hi)?,
            DEFAULT_CONDITION_TOL,
        )?;
        writeln!(out, "omega_p={}", sci(sol.omega_p)).unwrap();
        writeln!(out, "zeta={}", sci(sol.zeta)).unwrap();
        (model.at_zeta(sol.zeta), sol.omega_p)
    } else {
        writeln!(out, "omega_p={}", sci(cfg.omega_p)).unwrap();
        writeln!(out, "zeta=none").unwrap();
        (model, cfg.omega_p)
    };
    for order in 0..=2 {
        let r = check_condition(&model, omega_p, order, DEFAULT_CONDITION_TOL)?;
        writeln!(
            out,
            "residual_{order}={} ({})",
            sci(r.residual),
            if r.holds() { "holds" } else { "violated" }
        )
        .unwrap();
    }
    let (gs, gi) = taylor_gammas(&model, omega_p)?;
    writeln!(out, "gamma_s={}", sci(gs)).unwrap();
    writeln!(out, "gamma_i={}", sci(gi)).unwrap();
    match polar_params(gs, gi) {
        Ok((gamma, theta)) => {
            writeln!(out, "gamma={}", sci(gamma)).unwrap();
            writeln!(out, "theta={}", sci(theta)).unwrap();
            let omega_f = PhaseMatchParams::new(omega_p, gamma, theta, cfg.length_um)?
                .fluorescence_bandwidth();
            match omega_f {
                Ok(w) => writeln!(out, "omega_f={}", sci(w)).unwrap(),
                Err(e) => writeln!(out, "omega_f=unbounded ({e})").unwrap(),
            }
        }
        Err(e) => writeln!(out, "gamma=0\ntheta=undefined ({e})\nomega_f=unbounded").unwrap(),
    }
    match validity_bound(&model, omega_p, cfg.pump_bw) {
        Ok(v) => {
            writeln!(out, "mu={}", sci(v.mu)).unwrap();
            writeln!(out, "l_max_um={}", sci(v.l_max)).unwrap();
        }
        Err(Error::ZeroCurvature) => {
            writeln!(out, "l_max_um=unbounded ({})", Error::ZeroCurvature).unwrap()
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// One oracle comparison of the validation suite.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationCase {
    pub kind: Interferometer,
    pub theta: f64,
    pub length_um: f64,
    pub max_abs_diff: f64,
}

/// Largest closed-form/quadrature disagreement accepted by `validate`.
pub const VALIDATION_TOL: f64 = 1e-3;

/// The six reference (θ, L) pairs: extended matching at 1 mm and two
/// conventional angles at 2 cm, each for HOM and MZ.
pub fn validation_sets() -> [(f64, f64); 3] {
    [(-PI / 4.0, 1e3), (PI / 5.0, 2e4), (-PI / 6.0, 2e4)]
}

/// Closed form against quadrature on 201-point delay grids for the six
/// reference sets, with the pump and γ taken from `cfg`.
pub fn run_validation(cfg: &RunConfig) -> Result<Vec<ValidationCase>> {
    let policy = DomainPolicy {
        lobes: cfg.lobes,
        ..DomainPolicy::default()
    };
    let mut cases = Vec::new();
    for (theta, length) in validation_sets() {
        for kind in [Interferometer::Hom, Interferometer::Mz] {
            let params = PhaseMatchParams::new(cfg.omega_p, cfg.gamma, theta, length)?;
            let pump = PumpSpectrum::new(cfg.omega_p, cfg.pump_bw)?;
            let span = default_tau_span(&params, &pump)?;
            let taus = linspace(-span, span, 201);
            let closed = closed_trace(kind, &params, &pump, &taus)?;
            let quad = quadrature_trace(kind, &params, &pump, &taus, &cfg.quadrature, &policy)?;
            cases.push(ValidationCase {
                kind,
                theta,
                length_um: length,
                max_abs_diff: closed.max_abs_diff(&quad)?,
            });
        }
    }
    Ok(cases)
}

/// Validation report as CSV, and whether every case passed.
pub fn cmd_validate(cfg: &RunConfig) -> Result<(String, bool)> {
    let cases = run_validation(cfg)?;
    let mut m = metadata(cfg, "validate");
    m.push(("tolerance", VALIDATION_TOL.to_string()));
    let mut w = CsvWriter::new(
        m,
        &[
            "interferometer",
            "pass",
            "theta",
            "length_um",
            "max_abs_diff",
        ],
    );
    let mut ok = true;
    for c in &cases {
        let pass = c.max_abs_diff <= VALIDATION_TOL;
        ok &= pass;
        w.labelled_row(
            &[&c.kind.to_string(), if pass { "pass" } else { "FAIL" }],
            &[c.theta, c.length_um, c.max_abs_diff],
        );
    }
    Ok((w.finish(), ok))
}
