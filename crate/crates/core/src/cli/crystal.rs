//! Crystal files: polynomial wave-number branches in flat `key=value` form.
//!
//! ```text
//! branch.p.c0 = 1.4       # k_p(ω) = Σ c_n ωⁿ, 1/μm
//! branch.p.c1 = 7.0
//! branch.s.c0 = 0.5
//! branch.s.c1 = 7.0
//! branch.i.c0 = 0.5
//! branch.i.c1 = 7.2
//! validity.lo = 500       # rad/ps
//! validity.hi = 3000
//! knob.branch = p         # optional tuning knob ζ·scale·ω^order
//! knob.order = 1
//! knob.scale = 1
//! ```

use std::collections::BTreeMap;

use crate::dispersion::{Branch, DispersionModel, Field, Knob};
use crate::numerics::Interval;
use crate::{Error, Result};

use super::config::parse_key_values;

fn invalid(msg: String) -> Error {
    Error::InvalidInput(msg)
}

/// Builds the dispersion model described by a crystal file. A knob, when
/// present, starts at `ζ = 0`.
pub fn parse_crystal(text: &str) -> Result<DispersionModel> {
    let mut coeffs: BTreeMap<char, BTreeMap<usize, f64>> = BTreeMap::new();
    let mut other: BTreeMap<String, String> = BTreeMap::new();
    for (k, v) in parse_key_values(text)? {
        if let Some(rest) = k.strip_prefix("branch.") {
            let (name, idx) = rest
                .split_once(".c")
                .ok_or_else(|| invalid(format!("malformed branch key `{k}`")))?;
            let field = match name {
                "p" | "s" | "i" => name.chars().next().unwrap(),
                _ => return Err(invalid(format!("unknown branch `{name}` in `{k}`"))),
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| invalid(format!("malformed coefficient index in `{k}`")))?;
            let value: f64 = v
                .parse()
                .map_err(|_| invalid(format!("{k}: cannot parse `{v}`")))?;
            if coeffs
                .entry(field)
                .or_default()
                .insert(idx, value)
                .is_some()
            {
                return Err(invalid(format!("duplicate key `{k}`")));
            }
        } else if matches!(
            k.as_str(),
            "validity.lo" | "validity.hi" | "knob.branch" | "knob.order" | "knob.scale"
        ) {
            other.insert(k, v);
        } else {
            return Err(invalid(format!("unknown crystal key `{k}`")));
        }
    }
    let branch = |f: char| -> Result<Branch> {
        let c = coeffs
            .get(&f)
            .ok_or_else(|| invalid(format!("branch `{f}` has no coefficients")))?;
        let n = c.keys().max().unwrap() + 1;
        if c.len() != n {
            return Err(invalid(format!("branch `{f}` skips a coefficient index")));
        }
        Ok(Branch::polynomial(c.values().copied().collect::<Vec<_>>()))
    };
    let num = |k: &str| -> Result<f64> {
        let v = other
            .get(k)
            .ok_or_else(|| invalid(format!("missing `{k}`")))?;
        v.parse()
            .map_err(|_| invalid(format!("{k}: cannot parse `{v}`")))
    };
    let validity = Interval::new(num("validity.lo")?, num("validity.hi")?)?;
    let model = DispersionModel::new(branch('p')?, branch('s')?, branch('i')?, validity)?;
    match other.get("knob.branch") {
        None => {
            if other.contains_key("knob.order") || other.contains_key("knob.scale") {
                return Err(invalid(
                    "knob.order/knob.scale given without knob.branch".into(),
                ));
            }
            Ok(model)
        }
        Some(b) => {
            let field: Field = b.parse()?;
            let order = other
                .get("knob.order")
                .ok_or_else(|| invalid("missing `knob.order`".into()))?
                .parse::<u32>()
                .map_err(|_| invalid("knob.order must be a non-negative integer".into()))?;
            let scale = if other.contains_key("knob.scale") {
                num("knob.scale")?
            } else {
                1.0
            };
            model.with_knob(
                Knob {
                    field,
                    order,
                    scale,
                },
                0.0,
            )
        }
    }
}
