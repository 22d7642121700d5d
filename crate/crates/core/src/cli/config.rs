//! Flat `key=value` run configuration with defaults < file < flag layering.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::interferometry::{standard_thetas, Interferometer, SweptParameter};
use crate::numerics::QuadratureSpec;
use crate::{Error, Result};

/// Which trace columns to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMethod {
    Closed,
    Quadrature,
    Both,
}

impl RunMethod {
    pub fn closed(self) -> bool {
        matches!(self, Self::Closed | Self::Both)
    }

    pub fn quadrature(self) -> bool {
        matches!(self, Self::Quadrature | Self::Both)
    }
}

impl FromStr for RunMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Self::Closed),
            "quadrature" => Ok(Self::Quadrature),
            "both" => Ok(Self::Both),
            _ => Err(Error::InvalidInput(format!(
                "method must be closed|quadrature|both, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for RunMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Closed => "closed",
            Self::Quadrature => "quadrature",
            Self::Both => "both",
        })
    }
}

/// Fully resolved run parameters. Angular frequencies are in rad/ps
/// regardless of the `units` key they were given in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega_p: f64,
    pub pump_bw: f64,
    pub gamma: f64,
    pub theta: f64,
    pub length_um: f64,
    pub method: RunMethod,
    /// Half-width of the delay window; `None` picks it from the dip width
    /// and pump coherence time.
    pub tau_span: Option<f64>,
    pub tau_steps: Option<usize>,
    /// Half-width of the spectrum grid around degeneracy.
    pub grid_span: Option<f64>,
    pub grid_steps: usize,
    pub quadrature: QuadratureSpec,
    pub lobes: f64,
    pub interferometer: Interferometer,
    pub sweep: Option<SweptParameter>,
    pub sweep_min: Option<f64>,
    pub sweep_max: Option<f64>,
    pub sweep_steps: usize,
    pub thetas: Vec<f64>,
    pub crystal: Option<PathBuf>,
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub zeta_lo: f64,
    pub zeta_hi: f64,
    pub output: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "omega_p",
    "pump_bw",
    "gamma",
    "theta",
    "length_um",
    "method",
    "tau_span",
    "tau_steps",
    "grid_span",
    "grid_steps",
    "rel_tol",
    "abs_tol",
    "max_subdivisions",
    "lobes",
    "interferometer",
    "sweep",
    "sweep_min",
    "sweep_max",
    "sweep_steps",
    "thetas",
    "crystal",
    "omega_lo",
    "omega_hi",
    "zeta_lo",
    "zeta_hi",
    "output",
    "units",
];

fn defaults() -> BTreeMap<String, String> {
    [
        ("omega_p", "2000"),
        ("pump_bw", "40"),
        ("gamma", "8e-5"),
        ("theta", "-pi/4"),
        ("length_um", "1000"),
        ("method", "closed"),
        ("tau_span", "auto"),
        ("tau_steps", "auto"),
        ("grid_span", "auto"),
        ("grid_steps", "101"),
        ("rel_tol", "1e-8"),
        ("abs_tol", "1e-12"),
        ("max_subdivisions", "32768"),
        ("lobes", "1000"),
        ("interferometer", "hom"),
        ("sweep", "auto"),
        ("sweep_min", "auto"),
        ("sweep_max", "auto"),
        ("sweep_steps", "60"),
        ("thetas", "standard"),
        ("crystal", ""),
        ("omega_lo", "1500"),
        ("omega_hi", "2500"),
        ("zeta_lo", "-1"),
        ("zeta_hi", "1"),
        ("output", ""),
        ("units", "rad_ps"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// Parses flat `key=value` text. `#` starts a comment; blank lines are
/// skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!("line {}: expected key=value, got `{line}`", n + 1))
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Parses an angle: a number, or a multiple/fraction of `pi` such as
/// `-pi/4`, `3*pi/4` or `pi`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let bad = || Error::InvalidInput(format!("cannot parse angle `{s}`"));
    let t = s.trim().to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.trim_start_matches('+')),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (body, 1.0),
    };
    let factor = match num.trim() {
        "pi" => 1.0,
        other => other
            .strip_suffix("pi")
            .map(|f| f.trim().trim_end_matches('*').trim())
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    Ok(sign * factor * PI / den)
}

fn positive(key: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidInput(format!(
            "{key} must be positive, got {x}"
        )))
    }
}

impl RunConfig {
    /// Layers `file` over the defaults and `flags` over both.
    pub fn resolve(file: &[(String, String)], flags: &[(String, String)]) -> Result<Self> {
        let mut map = defaults();
        let mut given = BTreeSet::new();
        for (k, v) in file.iter().chain(flags) {
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::InvalidInput(format!("unknown config key `{k}`")));
            }
            map.insert(k.clone(), v.clone());
            given.insert(k.as_str());
        }
        Self::from_map(&map, &given)
    }

    /// `given` lists the keys supplied by the caller; defaults are always rad/ps.
    fn from_map(m: &BTreeMap<String, String>, given: &BTreeSet<&str>) -> Result<Self> {
        let get = |k: &str| m[k].as_str();
        let num = |k: &str| -> Result<f64> {
            get(k).parse::<f64>().map_err(|_| {
                Error::InvalidInput(format!("{k}: cannot parse `{}` as a number", get(k)))
            })
        };
        let int = |k: &str| -> Result<usize> {
            get(k).parse::<usize>().map_err(|_| {
                Error::InvalidInput(format!("{k}: cannot parse `{}` as a count", get(k)))
            })
        };
        let auto = |k: &str| get(k) == "auto";
        let path = |k: &str| (!get(k).is_empty()).then(|| PathBuf::from(get(k)));

        let si = match get("units") {
            "rad_ps" => false,
            "si" => true,
            other => {
                return Err(Error::InvalidInput(format!(
                    "units must be rad_ps|si, got `{other}`"
                )))
            }
        };
        let freq = |k: &str| -> Result<f64> {
            Ok(num(k)? * if si && given.contains(k) { 1e-12 } else { 1.0 })
        };
        let interferometer: Interferometer = get("interferometer").parse()?;
        let sweep = match get("sweep") {
            "auto" => None,
            "pump_bw" => Some(SweptParameter::PumpBandwidth),
            "length_um" => Some(SweptParameter::CrystalLength),
            other => {
                return Err(Error::InvalidInput(format!(
                    "sweep must be pump_bw|length_um, got `{other}`"
                )))
            }
        };
        let swept = sweep.unwrap_or(match interferometer {
            Interferometer::Hom => SweptParameter::PumpBandwidth,
            Interferometer::Mz => SweptParameter::CrystalLength,
        });
        let sweep_bound = |k: &str| -> Result<f64> {
            match swept {
                SweptParameter::PumpBandwidth => freq(k),
                SweptParameter::CrystalLength => num(k),
            }
        };
        let thetas = if get("thetas") == "standard" {
            standard_thetas().to_vec()
        } else {
            get("thetas")
                .split(',')
                .map(parse_angle)
                .collect::<Result<Vec<_>>>()?
        };

        let cfg = Self {
            omega_p: positive("omega_p", freq("omega_p")?)?,
            pump_bw: positive("pump_bw", freq("pump_bw")?)?,
            gamma: positive("gamma", num("gamma")?)?,
            theta: parse_angle(get("theta"))?,
            length_um: positive("length_um", num("length_um")?)?,
            method: get("method").parse()?,
            tau_span: if auto("tau_span") {
                None
            } else {
                Some(positive("tau_span", num("tau_span")?)?)
            },
            tau_steps: if auto("tau_steps") {
                None
            } else {
                Some(int("tau_steps")?)
            },
            grid_span: if auto("grid_span") {
                None
            } else {
                Some(positive("grid_span", freq("grid_span")?)?)
            },
            grid_steps: int("grid_steps")?,
            quadrature: QuadratureSpec::new(
                num("rel_tol")?,
                num("abs_tol")?,
                int("max_subdivisions")?,
            )?,
            lobes: num("lobes")?,
            interferometer,
            sweep,
            sweep_min: if auto("sweep_min") {
                None
            } else {
                Some(sweep_bound("sweep_min")?)
            },
            sweep_max: if auto("sweep_max") {
                None
            } else {
                Some(sweep_bound("sweep_max")?)
            },
            sweep_steps: int("sweep_steps")?,
            thetas,
            crystal: path("crystal"),
            omega_lo: freq("omega_lo")?,
            omega_hi: freq("omega_hi")?,
            zeta_lo: num("zeta_lo")?,
            zeta_hi: num("zeta_hi")?,
            output: path("output"),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > -PI && self.theta <= PI) {
            return Err(Error::InvalidInput(format!(
                "theta must lie in (-pi, pi], got {}",
                self.theta
            )));
        }
        for (key, steps) in [
            ("tau_steps", self.tau_steps.unwrap_or(2)),
            ("grid_steps", self.grid_steps),
            ("sweep_steps", self.sweep_steps),
        ] {
            if steps < 2 {
                return Err(Error::InvalidInput(format!(
                    "{key} must be at least 2, got {steps}"
                )));
            }
        }
        if !(self.lobes >= 1.0 && self.lobes.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "lobes must be at least 1, got {}",
                self.lobes
            )));
        }
        if let (Some(lo), Some(hi)) = (self.sweep_min, self.sweep_max) {
            if !(lo > 0.0 && hi > lo) {
                return Err(Error::InvalidInput(format!(
                    "sweep range must satisfy 0 < min < max, got [{lo}, {hi}]"
                )));
            }
        }
        if self.thetas.is_empty() || self.thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput(
                "thetas must be a non-empty list of angles".into(),
            ));
        }
        Ok(())
    }

    /// The effective configuration as `key=value` pairs, always in rad/ps.
    /// The output path is left out so the same run writes the same bytes
    /// wherever it is sent.
    pub fn metadata(&self) -> Vec<(&'static str, String)> {
        let opt = |x: Option<f64>| x.map_or("auto".to_string(), |v| v.to_string());
        vec![
            ("omega_p", self.omega_p.to_string()),
            ("pump_bw", self.pump_bw.to_string()),
            ("gamma", self.gamma.to_string()),
            ("theta", self.theta.to_string()),
            ("length_um", self.length_um.to_string()),
            ("method", self.method.to_string()),
            ("tau_span", opt(self.tau_span)),
            (
                "tau_steps",
                self.tau_steps.map_or("auto".to_string(), |n| n.to_string()),
            ),
            ("grid_span", opt(self.grid_span)),
            ("grid_steps", self.grid_steps.to_string()),
            ("rel_tol", self.quadrature.rel_tol.to_string()),
            ("abs_tol", self.quadrature.abs_tol.to_string()),
            (
                "max_subdivisions",
                self.quadrature.max_subdivisions.to_string(),
            ),
            ("lobes", self.lobes.to_string()),
            ("interferometer", self.interferometer.to_string()),
            (
                "sweep",
                match self.sweep {
                    None => "auto".into(),
                    Some(SweptParameter::PumpBandwidth) => "pump_bw".into(),
                    Some(SweptParameter::CrystalLength) => "length_um".into(),
                },
            ),
            ("sweep_min", opt(self.sweep_min)),
            ("sweep_max", opt(self.sweep_max)),
            ("sweep_steps", self.sweep_steps.to_string()),
            (
                "thetas",
                self.thetas
                    .iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            (
                "crystal",
                self.crystal
                    .as_ref()
                    .map_or(String::new(), |p| p.display().to_string()),
            ),
            ("omega_lo", self.omega_lo.to_string()),
            ("omega_hi", self.omega_hi.to_string()),
            ("zeta_lo", self.zeta_lo.to_string()),
            ("zeta_hi", self.zeta_hi.to_string()),
            ("units", "rad_ps".into()),
        ]
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::from_map(&defaults(), &BTreeSet::new()).expect("defaults are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn angles() {
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("-0.75").unwrap(), -0.75);
        assert!(parse_angle("quarter").is_err());
    }

    #[test]
    fn three_layer_precedence() {
        let file =
            parse_key_values("# crystal run\ntheta = pi/5\nlength_um=2e4 # long\npump_bw=10\n")
                .unwrap();
        let flags = kv(&[("length_um", "5e3")]);
        let cfg = RunConfig::resolve(&file, &flags).unwrap();
        assert_eq!(cfg.length_um, 5e3);
        assert_eq!(cfg.theta, PI / 5.0);
        assert_eq!(cfg.pump_bw, 10.0);
        assert_eq!(cfg.omega_p, 2000.0);
    }

    #[test]
    fn si_units_convert_frequencies() {
        let cfg = RunConfig::resolve(
            &kv(&[("omega_p", "2e15"), ("pump_bw", "4e13"), ("units", "si")]),
            &[],
        )
        .unwrap();
        assert!((cfg.omega_p - 2000.0).abs() < 1e-9);
        assert!((cfg.pump_bw - 40.0).abs() < 1e-12);
        assert_eq!(cfg.metadata().last().unwrap().1, "rad_ps");
        // defaults stay in rad/ps
        assert_eq!(cfg.omega_lo, 1500.0);
        assert_eq!(
            RunConfig::resolve(&kv(&[("units", "si")]), &[])
                .unwrap()
                .omega_p,
            2000.0
        );
    }

    #[test]
    fn invalid_values_are_rejected() {
        for bad in [
            kv(&[("length_um", "-1")]),
            kv(&[("theta", "4")]),
            kv(&[("theta", "-pi")]),
            kv(&[("grid_steps", "1")]),
            kv(&[("method", "guess")]),
            kv(&[("colour", "blue")]),
            kv(&[("sweep_min", "10"), ("sweep_max", "5")]),
        ] {
            assert!(
                matches!(RunConfig::resolve(&bad, &[]), Err(Error::InvalidInput(_))),
                "{bad:?}"
            );
        }
        assert!(parse_key_values("no equals sign").is_err());
    }

    #[test]
    fn metadata_round_trips() {
        let cfg = RunConfig::resolve(&kv(&[("theta", "pi/5"), ("thetas", "0,pi/5")]), &[]).unwrap();
        let again: Vec<(String, String)> = cfg
            .metadata()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        assert_eq!(RunConfig::resolve(&again, &[]).unwrap(), cfg);
    }
}
