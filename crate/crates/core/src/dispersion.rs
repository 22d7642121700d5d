//! Wave-number branches of a crystal and the quantities derived from them.
//!
//! A [`DispersionModel`] holds the pump, signal and idler branches `k(ω)`.
//! From it follow the phase mismatch `Δk`, the first-order delay
//! coefficients `γ_s`, `γ_i`, the matching-condition residuals and the
//! joint solver for extended phase matching. [`PhaseMatchParams`] is the
//! first-order description `(ω_p, γ, θ, L)` that the rest of the crate
//! consumes; it can be built from a model or given directly.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::numerics::{derivative, find_root, Interval};
use crate::{Error, Result};

/// Default residual tolerance in natural units (1/μm for order 0, ps/μm for
/// order 1, ps^n/μm for order n).
pub const DEFAULT_CONDITION_TOL: f64 = 1e-10;

/// One wave-number branch `k(ω)`.
#[derive(Clone)]
pub enum Branch {
    /// `k(ω) = Σ_j c_j ω^j`, derivatives analytic.
    Polynomial(Vec<f64>),
    /// Any smooth function; derivatives by Richardson-extrapolated central
    /// differences, orders 1 to 3 only.
    BlackBox(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            Branch::BlackBox(_) => f.write_str("BlackBox(..)"),
        }
    }
}

impl Branch {
    pub fn polynomial(coefficients: impl Into<Vec<f64>>) -> Self {
        Branch::Polynomial(coefficients.into())
    }

    pub fn black_box<F>(k: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Branch::BlackBox(Arc::new(k))
    }

    /// `k(ω)`.
    pub fn eval(&self, omega: f64) -> f64 {
        match self {
            Branch::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &cj| acc * omega + cj),
            Branch::BlackBox(k) => k(omega),
        }
    }

    /// `∂ⁿk(ω)`. Order 0 is the value itself.
    pub fn derivative(&self, omega: f64, order: u32) -> Result<f64> {
        if order == 0 {
            return Ok(self.eval(omega));
        }
        match self {
            Branch::Polynomial(c) => Ok(poly_derivative(c, omega, order)),
            Branch::BlackBox(k) => {
                if order > 3 {
                    return Err(Error::InvalidInput(format!(
                        "black-box branches provide derivatives up to order 3, asked for {order}"
                    )));
                }
                // central differences are O(h²); one Richardson step makes them O(h⁴)
                let h = omega.abs().max(1.0) * f64::EPSILON.powf(1.0 / (order as f64 + 5.0));
                let coarse = derivative(|w| k(w), omega, order as u8, h)?;
                let fine = derivative(|w| k(w), omega, order as u8, 0.5 * h)?;
                Ok((4.0 * fine - coarse) / 3.0)
            }
        }
    }
}

fn poly_derivative(c: &[f64], omega: f64, order: u32) -> f64 {
    let n = order as usize;
    let mut acc = 0.0;
    for j in (n..c.len()).rev() {
        // j! / (j - n)!
        let falling: f64 = ((j - n + 1)..=j).map(|m| m as f64).product();
        acc = acc * omega + falling * c[j];
    }
    acc
}

/// Which of the three fields a branch belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Pump,
    Signal,
    Idler,
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" | "pump" => Ok(Field::Pump),
            "s" | "signal" => Ok(Field::Signal),
            "i" | "idler" => Ok(Field::Idler),
            _ => Err(Error::InvalidInput(format!("unknown branch `{s}`"))),
        }
    }
}

/// Tuning knob: adds `ζ · scale · ω^order` to one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knob {
    pub field: Field,
    pub order: u32,
    pub scale: f64,
}

impl Knob {
    fn term(&self, zeta: f64, omega: f64, order: u32) -> f64 {
        if order > self.order {
            return 0.0;
        }
        let falling: f64 = ((self.order - order + 1)..=self.order)
            .map(|m| m as f64)
            .product();
        zeta * self.scale * falling * omega.powi((self.order - order) as i32)
    }
}

/// Pump, signal and idler wave numbers over a common validity interval.
#[derive(Debug, Clone)]
pub struct DispersionModel {
    k_p: Branch,
    k_s: Branch,
    k_i: Branch,
    validity: Interval,
    knob: Option<Knob>,
    zeta: f64,
}

impl DispersionModel {
    /// Checks on a sample grid that every branch is finite and positive over
    /// `validity`.
    pub fn new(k_p: Branch, k_s: Branch, k_i: Branch, validity: Interval) -> Result<Self> {
        let model = Self {
            k_p,
            k_s,
            k_i,
            validity,
            knob: None,
            zeta: 0.0,
        };
        model.check_positive()?;
        Ok(model)
    }

    /// Identical branches `k(ω) = n ω / c` for every field.
    pub fn vacuum_like(index: f64, validity: Interval) -> Result<Self> {
        let b = Branch::polynomial([0.0, index / SPEED_OF_LIGHT]);
        Self::new(b.clone(), b.clone(), b, validity)
    }

    pub fn with_knob(mut self, knob: Knob, zeta: f64) -> Result<Self> {
        if !knob.scale.is_finite() || !zeta.is_finite() {
            return Err(Error::InvalidInput(
                "knob scale and ζ must be finite".into(),
            ));
        }
        self.knob = Some(knob);
        self.zeta = zeta;
        self.check_positive()?;
        Ok(self)
    }

    /// Same model at another knob setting. Positivity is not re-checked.
    pub fn at_zeta(&self, zeta: f64) -> Self {
        Self {
            zeta,
            ..self.clone()
        }
    }

    pub fn knob(&self) -> Option<Knob> {
        self.knob
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn validity(&self) -> Interval {
        self.validity
    }

    fn check_positive(&self) -> Result<()> {
        const SAMPLES: usize = 257;
        for omega in self.validity.linspace(SAMPLES) {
            for field in [Field::Pump, Field::Signal, Field::Idler] {
                let k = self.raw(field, omega, 0)?;
                if !(k.is_finite() && k > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "{field:?} branch is not finite and positive at ω = {omega}: k = {k}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn raw(&self, field: Field, omega: f64, order: u32) -> Result<f64> {
        let branch = match field {
            Field::Pump => &self.k_p,
            Field::Signal => &self.k_s,
            Field::Idler => &self.k_i,
        };
        let mut v = branch.derivative(omega, order)?;
        if let Some(knob) = self.knob.filter(|k| k.field == field) {
            v += knob.term(self.zeta, omega, order);
        }
        Ok(v)
    }

    /// `∂ⁿk(ω)` for one field, checked against the validity interval.
    pub fn k(&self, field: Field, omega: f64, order: u32) -> Result<f64> {
        if !self.validity.contains(omega) {
            return Err(Error::OutOfValidityRange {
                omega,
                lo: self.validity.lo(),
                hi: self.validity.hi(),
            });
        }
        self.raw(field, omega, order)
    }
}

/// Speed of light in μm/ps.
pub const SPEED_OF_LIGHT: f64 = 299.792_458;

/// `Δk = k_p(ω_s + ω_i) − k_s(ω_s) − k_i(ω_i)` in 1/μm.
pub fn phase_mismatch(model: &DispersionModel, omega_s: f64, omega_i: f64) -> Result<f64> {
    Ok(model.k(Field::Pump, omega_s + omega_i, 0)?
        - model.k(Field::Signal, omega_s, 0)?
        - model.k(Field::Idler, omega_i, 0)?)
}

/// First-order delay coefficients `γ_s = k'_p(ω_p) − k'_s(ω_p/2)` and
/// `γ_i = k'_p(ω_p) − k'_i(ω_p/2)`, in ps/μm.
pub fn taylor_gammas(model: &DispersionModel, omega_p: f64) -> Result<(f64, f64)> {
    let kp = model.k(Field::Pump, omega_p, 1)?;
    let ks = model.k(Field::Signal, 0.5 * omega_p, 1)?;
    let ki = model.k(Field::Idler, 0.5 * omega_p, 1)?;
    Ok((kp - ks, kp - ki))
}

/// `(γ, θ)` with `γ_s = γ cos θ`, `γ_i = γ sin θ`, `θ ∈ (−π, π]`.
pub fn polar_params(gamma_s: f64, gamma_i: f64) -> Result<(f64, f64)> {
    if !(gamma_s.is_finite() && gamma_i.is_finite()) {
        return Err(Error::InvalidInput("γ_s and γ_i must be finite".into()));
    }
    if gamma_s == 0.0 && gamma_i == 0.0 {
        return Err(Error::DegenerateGammas);
    }
    Ok((gamma_s.hypot(gamma_i), gamma_i.atan2(gamma_s)))
}

/// Signed residual of the order-`n` matching condition at pump frequency
/// `ω_p`: `∂ⁿk_p(ω_p) − 2⁻ⁿ[∂ⁿk_s(ω_p/2) + ∂ⁿk_i(ω_p/2)]`.
///
/// Order 0 is `Δk` at degeneracy, order 1 the group-velocity condition.
/// The order-`n` residual is the `n`-th derivative of the order-0 residual
/// along `ω_s = ω_i = ω_p/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionResidual {
    pub order: u32,
    pub residual: f64,
    pub tol: f64,
}

impl ConditionResidual {
    pub fn holds(&self) -> bool {
        self.residual.abs() <= self.tol
    }
}

pub fn check_condition(
    model: &DispersionModel,
    omega_p: f64,
    order: u32,
    tol: f64,
) -> Result<ConditionResidual> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let residual = condition_residual(model, omega_p, order)?;
    Ok(ConditionResidual {
        order,
        residual,
        tol,
    })
}

fn condition_residual(model: &DispersionModel, omega_p: f64, order: u32) -> Result<f64> {
    let half = 0.5 * omega_p;
    let kp = model.k(Field::Pump, omega_p, order)?;
    let ks = model.k(Field::Signal, half, order)?;
    let ki = model.k(Field::Idler, half, order)?;
    Ok(kp - 0.5f64.powi(order as i32) * (ks + ki))
}

/// Joint solution of the order-0 and order-1 conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpmSolution {
    pub omega_p: f64,
    pub zeta: f64,
    pub residual_0: f64,
    pub residual_1: f64,
}

/// Finds `(ω_p, ζ)` where both the order-0 and order-1 residuals vanish.
///
/// The order-1 residual is the derivative of the order-0 residual in `ω_p`,
/// so a joint solution is a double zero of the order-0 residual in `ω_p`
/// and cannot be bracketed directly. The solve is therefore nested the
/// other way round: for each `ζ` the order-1 residual is solved in `ω_p`,
/// and the order-0 residual at that `ω_p` is then solved in `ζ`. Both
/// solves are bracketed and run to machine precision; the result must leave
/// both residuals within `tol`.
pub fn solve_epm(
    model: &DispersionModel,
    omega_bracket: Interval,
    zeta_bracket: Interval,
    tol: f64,
) -> Result<EpmSolution> {
    if model.knob.is_none() {
        return Err(Error::InvalidInput(
            "solve_epm needs a model with a tuning knob".into(),
        ));
    }
    let inner = |zeta: f64| -> Result<f64> {
        let m = model.at_zeta(zeta);
        find_root(
            |w| condition_residual(&m, w, 1).unwrap_or(f64::NAN),
            omega_bracket,
            0.0,
        )
        .map_err(|e| no_solution("group-velocity condition", e))
    };
    let outer = |zeta: f64| -> Result<f64> {
        let w = inner(zeta)?;
        condition_residual(&model.at_zeta(zeta), w, 0)
    };
    // endpoints first so failures there surface as errors rather than NaN
    outer(zeta_bracket.lo())?;
    outer(zeta_bracket.hi())?;
    let failure = std::cell::RefCell::new(None);
    let zeta = find_root(
        |z| match outer(z) {
            Ok(r) => r,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        zeta_bracket,
        0.0,
    )
    .map_err(|e| no_solution("phase-matching condition", e))?;
    if let Some(e) = failure.into_inner() {
        return Err(no_solution("group-velocity condition", e));
    }
    let omega_p = inner(zeta)?;
    let at = model.at_zeta(zeta);
    let residual_0 = condition_residual(&at, omega_p, 0)?;
    let residual_1 = condition_residual(&at, omega_p, 1)?;
    if residual_0.abs() > tol || residual_1.abs() > tol {
        return Err(Error::NoSolutionInBracket(format!(
            "best point ω_p = {omega_p}, ζ = {zeta} leaves residuals {residual_0:e}, {residual_1:e} above {tol:e}"
        )));
    }
    Ok(EpmSolution {
        omega_p,
        zeta,
        residual_0,
        residual_1,
    })
}

fn no_solution(what: &str, e: Error) -> Error {
    match e {
        Error::NoSolutionInBracket(_) => e,
        other => Error::NoSolutionInBracket(format!("{what}: {other}")),
    }
}

/// First-order description of a matched crystal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatchParams {
    omega_p: f64,
    gamma: f64,
    theta: f64,
    length: f64,
}

impl PhaseMatchParams {
    pub fn new(omega_p: f64, gamma: f64, theta: f64, length: f64) -> Result<Self> {
        if !(omega_p.is_finite() && theta.is_finite()) {
            return Err(Error::InvalidInput("ω_p and θ must be finite".into()));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "γ must be positive, got {gamma}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "L must be positive, got {length}"
            )));
        }
        Ok(Self {
            omega_p,
            gamma,
            theta,
            length,
        })
    }

    pub fn from_gammas(omega_p: f64, gamma_s: f64, gamma_i: f64, length: f64) -> Result<Self> {
        let (gamma, theta) = polar_params(gamma_s, gamma_i)?;
        Self::new(omega_p, gamma, theta, length)
    }

    pub fn from_model(model: &DispersionModel, omega_p: f64, length: f64) -> Result<Self> {
        let (gs, gi) = taylor_gammas(model, omega_p)?;
        Self::from_gammas(omega_p, gs, gi, length)
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn length(&self) -> f64 {
        self.length
    }
    pub fn gamma_s(&self) -> f64 {
        self.gamma * self.theta.cos()
    }
    pub fn gamma_i(&self) -> f64 {
        self.gamma * self.theta.sin()
    }

    pub fn with_length(self, length: f64) -> Result<Self> {
        Self::new(self.omega_p, self.gamma, self.theta, length)
    }

    pub fn with_theta(self, theta: f64) -> Result<Self> {
        Self::new(self.omega_p, self.gamma, theta, self.length)
    }

    /// `Ω_f = 4π / (L |γ_s − γ_i|)`, the width of the phase-matching
    /// function along the difference frequency.
    pub fn fluorescence_bandwidth(&self) -> Result<f64> {
        fluorescence_bandwidth(self)
    }
}

pub fn fluorescence_bandwidth(params: &PhaseMatchParams) -> Result<f64> {
    let spread = params.length * (params.gamma_s() - params.gamma_i()).abs();
    // θ = π/4 leaves only rounding in γ_s − γ_i
    if spread <= 4.0 * f64::EPSILON * params.length * params.gamma {
        return Err(Error::InfiniteBandwidth);
    }
    Ok(4.0 * PI / spread)
}

/// Curvature of `Δk` at degeneracy and the length bound it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    /// Second partials of `Δk` in `(ω_s, ω_i)`, ps²/μm.
    pub hessian: [[f64; 2]; 2],
    /// Eigenvalue of largest magnitude.
    pub mu: f64,
    /// The other eigenvalue.
    pub nu: f64,
    /// `8π / (|μ| Ω_p²)` in μm.
    pub l_max: f64,
}

/// Largest crystal length for which the first-order expansion of `Δk`
/// holds across the pump bandwidth.
pub fn validity_bound(
    model: &DispersionModel,
    omega_p: f64,
    pump_bandwidth: f64,
) -> Result<ValidityReport> {
    if !(pump_bandwidth > 0.0 && pump_bandwidth.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "pump bandwidth must be positive, got {pump_bandwidth}"
        )));
    }
    let kp2 = model.k(Field::Pump, omega_p, 2)?;
    let ks2 = model.k(Field::Signal, 0.5 * omega_p, 2)?;
    let ki2 = model.k(Field::Idler, 0.5 * omega_p, 2)?;
    let hessian = [[kp2 - ks2, kp2], [kp2, kp2 - ki2]];
    let (mu, nu) = symmetric_eigenvalues(hessian);
    if mu == 0.0 {
        return Err(Error::ZeroCurvature);
    }
    Ok(ValidityReport {
        hessian,
        mu,
        nu,
        l_max: 8.0 * PI / (mu.abs() * pump_bandwidth * pump_bandwidth),
    })
}

/// Eigenvalues of a symmetric 2×2 matrix, larger magnitude first.
fn symmetric_eigenvalues(h: [[f64; 2]; 2]) -> (f64, f64) {
    let mean = 0.5 * (h[0][0] + h[1][1]);
    let radius = (0.5 * (h[0][0] - h[1][1])).hypot(h[0][1]);
    let (a, b) = (mean + radius, mean - radius);
    if a.abs() >= b.abs() {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn range() -> Interval {
        Interval::new(200.0, 5000.0).unwrap()
    }

    #[test]
    fn vacuum_like_model_cancels() {
        let m = DispersionModel::vacuum_like(1.6, range()).unwrap();
        for &(ws, wi) in &[(900.0, 1100.0), (1000.0, 1000.0), (400.0, 2100.0)] {
            assert!(phase_mismatch(&m, ws, wi).unwrap().abs() < 1e-14);
        }
        for n in 0..4 {
            assert!(check_condition(&m, 2000.0, n, 1e-12).unwrap().holds());
        }
        assert_eq!(taylor_gammas(&m, 2000.0).unwrap(), (0.0, 0.0));
        assert_eq!(validity_bound(&m, 2000.0, 40.0), Err(Error::ZeroCurvature));
    }

    #[test]
    fn phase_mismatch_matches_hand_expansion() {
        // k_p = 1 + 2e-3 ω + 3e-7 ω², k_s = 4e-3 ω + 1e-7 ω², k_i = 0.5 + 5e-3 ω
        let m = DispersionModel::new(
            Branch::polynomial([1.0, 2e-3, 3e-7]),
            Branch::polynomial([0.0, 4e-3, 1e-7]),
            Branch::polynomial([0.5, 5e-3]),
            range(),
        )
        .unwrap();
        let (ws, wi) = (950.0, 1070.0);
        let hand = 1.0 + 2e-3 * (ws + wi) + 3e-7 * (ws + wi) * (ws + wi)
            - 4e-3 * ws
            - 1e-7 * ws * ws
            - 0.5
            - 5e-3 * wi;
        assert!((phase_mismatch(&m, ws, wi).unwrap() - hand).abs() < 1e-13);
    }

    #[test]
    fn out_of_range_is_rejected() {
        let m = DispersionModel::vacuum_like(1.6, Interval::new(500.0, 1500.0).unwrap()).unwrap();
        assert!(matches!(
            phase_mismatch(&m, 1000.0, 1000.0),
            Err(Error::OutOfValidityRange { .. })
        ));
    }

    #[test]
    fn non_positive_branch_is_rejected() {
        let r = DispersionModel::new(
            Branch::polynomial([1.0, -1e-3]),
            Branch::polynomial([1.0]),
            Branch::polynomial([1.0]),
            range(),
        );
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    /// Branches planted so that `k'_p(ω_p) − k'_s(ω_p/2) = g_s` and
    /// `k'_p(ω_p) − k'_i(ω_p/2) = g_i` at every `ω_p`.
    fn planted_gammas(g_s: f64, g_i: f64) -> DispersionModel {
        let n = 1.6 / SPEED_OF_LIGHT;
        DispersionModel::new(
            Branch::polynomial([0.0, n]),
            Branch::polynomial([0.0, n - g_s]),
            Branch::polynomial([0.0, n - g_i]),
            range(),
        )
        .unwrap()
    }

    #[test]
    fn gammas_of_planted_model() {
        let m = planted_gammas(5.657e-5, -5.657e-5);
        let (gs, gi) = taylor_gammas(&m, 2000.0).unwrap();
        assert!((gs - 5.657e-5).abs() < 1e-18);
        assert!((gi + 5.657e-5).abs() < 1e-18);
    }

    #[test]
    fn black_box_derivatives_match_analytic_twin() {
        let coeffs = [0.3, 5.3e-3, 2.0e-7, -3.0e-11, 4.0e-15];
        let poly = Branch::polynomial(coeffs);
        let bb = Branch::black_box(move |w| coeffs.iter().rev().fold(0.0, |a, &c| a * w + c));
        for &w in &[600.0, 1000.0, 2000.0] {
            for order in 1..=3 {
                let exact = poly.derivative(w, order).unwrap();
                let approx = bb.derivative(w, order).unwrap();
                let tol = if order == 1 { 1e-8 } else { 1e-6 };
                assert!(
                    ((approx - exact) / exact).abs() < tol,
                    "ω={w} order={order}"
                );
            }
        }
        // and the γ's built from them
        let twin = |b: fn(Vec<f64>) -> Branch| {
            DispersionModel::new(
                b(vec![0.0, 5.40e-3, 1e-8]),
                b(vec![0.0, 5.50e-3, 3e-8]),
                b(vec![0.0, 5.33e-3, -2e-8]),
                range(),
            )
            .unwrap()
        };
        let analytic = twin(Branch::Polynomial);
        let numeric =
            twin(|c| Branch::black_box(move |w| c.iter().rev().fold(0.0, |a, &x| a * w + x)));
        let (a_s, a_i) = taylor_gammas(&analytic, 2000.0).unwrap();
        let (n_s, n_i) = taylor_gammas(&numeric, 2000.0).unwrap();
        assert!(((n_s - a_s) / a_s).abs() < 1e-8);
        assert!(((n_i - a_i) / a_i).abs() < 1e-8);
    }

    #[test]
    fn black_box_rejects_high_orders() {
        let bb = Branch::black_box(|w| w);
        assert!(bb.derivative(1.0, 4).is_err());
    }

    #[test]
    fn polar_examples() {
        let (g, t) = polar_params(5.657e-5, -5.657e-5).unwrap();
        assert!((g - 8.0e-5).abs() < 1e-8);
        assert!((t + FRAC_PI_4).abs() < 1e-12);
        assert_eq!(polar_params(8e-5, 0.0).unwrap(), (8e-5, 0.0));
        assert_eq!(polar_params(0.0, 0.0), Err(Error::DegenerateGammas));
    }

    #[test]
    fn conditions_on_planted_models() {
        // order-0 residual 3e-6 (ω − 2000): holds at 2000, order-1 off by 3e-6 ps/μm
        let (g, n) = (3e-6, 1.6 / SPEED_OF_LIGHT);
        let m = DispersionModel::new(
            Branch::polynomial([1.0 - 2000.0 * g, n + g]),
            Branch::polynomial([0.5, n]),
            Branch::polynomial([0.5, n]),
            range(),
        )
        .unwrap();
        assert!(check_condition(&m, 2000.0, 0, 1e-12).unwrap().holds());
        let r1 = check_condition(&m, 2000.0, 1, 1e-12).unwrap();
        assert!((r1.residual - 3e-6).abs() < 1e-18);
        assert!(!r1.holds());

        // k''_s = k''_i = 2 k''_p
        let kp2 = 1.3e-7;
        let m = DispersionModel::new(
            Branch::polynomial([0.0, 5.4e-3, 0.5 * kp2]),
            Branch::polynomial([0.0, 5.5e-3, kp2]),
            Branch::polynomial([0.0, 5.3e-3, kp2]),
            range(),
        )
        .unwrap();
        assert!(check_condition(&m, 2000.0, 2, 1e-12).unwrap().holds());
    }

    #[test]
    fn bandwidth_examples() {
        let p = PhaseMatchParams::new(2000.0, 8e-5, -FRAC_PI_4, 1e3).unwrap();
        let of = p.fluorescence_bandwidth().unwrap();
        assert!((of - 111.072).abs() < 1e-3);
        let p2 = p.with_length(2e3).unwrap();
        assert!((p2.fluorescence_bandwidth().unwrap() - 0.5 * of).abs() < 1e-12);
        let p3 = PhaseMatchParams::new(2000.0, 8e-5, FRAC_PI_4, 1e3).unwrap();
        assert_eq!(p3.fluorescence_bandwidth(), Err(Error::InfiniteBandwidth));
    }

    #[test]
    fn validity_bound_of_planted_curvature() {
        // k''_s = k''_i = 0 and k''_p = μ/2: H = [[μ/2, μ/2], [μ/2, μ/2]] has eigenvalues μ and 0
        let mu = 1e-7;
        let n = 1.6 / SPEED_OF_LIGHT;
        let m = DispersionModel::new(
            Branch::polynomial([0.0, n, 0.25 * mu]),
            Branch::polynomial([0.0, n]),
            Branch::polynomial([0.0, n]),
            range(),
        )
        .unwrap();
        let r = validity_bound(&m, 2000.0, 40.0).unwrap();
        assert!((r.mu - mu).abs() < 1e-20);
        assert!((r.l_max - 1.5708e5).abs() < 1.0);
        assert_eq!(r.hessian[0][1], r.hessian[1][0]);
    }

    #[test]
    fn diagonal_hessian_picks_larger_entry() {
        assert_eq!(
            symmetric_eigenvalues([[-3.0, 0.0], [0.0, 2.0]]),
            (-3.0, 2.0)
        );
        assert_eq!(symmetric_eigenvalues([[1.0, 0.0], [0.0, 2.0]]), (2.0, 1.0));
    }

    #[test]
    fn solver_without_crossing_reports_no_solution() {
        let m = planted_gammas(3e-6, 3e-6)
            .with_knob(
                Knob {
                    field: Field::Pump,
                    order: 0,
                    scale: 1.0,
                },
                0.0,
            )
            .unwrap();
        let r = solve_epm(
            &m,
            Interval::new(1500.0, 2500.0).unwrap(),
            Interval::new(-1.0, 1.0).unwrap(),
            1e-10,
        );
        assert!(matches!(r, Err(Error::NoSolutionInBracket(_))));
    }

    #[test]
    fn solver_on_vacuum_like_model() {
        let m = DispersionModel::vacuum_like(1.6, range())
            .unwrap()
            .with_knob(
                Knob {
                    field: Field::Signal,
                    order: 2,
                    scale: 0.0,
                },
                0.0,
            )
            .unwrap();
        let s = solve_epm(
            &m,
            Interval::new(1500.0, 2500.0).unwrap(),
            Interval::new(-1.0, 1.0).unwrap(),
            1e-10,
        )
        .unwrap();
        assert_eq!((s.residual_0, s.residual_1), (0.0, 0.0));
        assert!(Interval::new(1500.0, 2500.0).unwrap().contains(s.omega_p));
    }

    #[test]
    fn solver_recovers_planted_joint_root() {
        // order-0 residual c2 (ω − ω0)² + (ζ − ζ0) s ω with ω0 = 2000, ζ0 = 0.3
        let (w0, z0, c2, s) = (2000.0, 0.3, 1e-7, 1e-4);
        let n = 1.6 / SPEED_OF_LIGHT;
        let m = DispersionModel::new(
            Branch::polynomial([c2 * w0 * w0, n - 2.0 * c2 * w0 - z0 * s, c2]),
            Branch::polynomial([0.0, n - 2e-5]),
            Branch::polynomial([0.0, n + 2e-5]),
            range(),
        )
        .unwrap()
        .with_knob(
            Knob {
                field: Field::Pump,
                order: 1,
                scale: s,
            },
            0.0,
        )
        .unwrap();
        let sol = solve_epm(
            &m,
            Interval::new(1500.0, 2500.0).unwrap(),
            Interval::new(0.0, 1.0).unwrap(),
            1e-10,
        )
        .unwrap();
        assert!(((sol.omega_p - w0) / w0).abs() < 1e-10);
        assert!(((sol.zeta - z0) / z0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn polar_round_trip(gamma in 1e-6f64..1e-3, theta in -3.0f64..3.0) {
            let (g, t) = polar_params(gamma * theta.cos(), gamma * theta.sin()).unwrap();
            prop_assert!(((g - gamma) / gamma).abs() < 1e-12);
            prop_assert!((t - theta).abs() < 1e-12);
        }

        #[test]
        fn hessian_is_symmetric_and_ordered(a in -1e-6f64..1e-6, b in -1e-6f64..1e-6, c in -1e-6f64..1e-6) {
            let n = 1.6 / SPEED_OF_LIGHT;
            let m = DispersionModel::new(
                Branch::polynomial([5.0, n, 0.5 * a]),
                Branch::polynomial([5.0, n, 0.5 * b]),
                Branch::polynomial([5.0, n, 0.5 * c]),
                range(),
            ).unwrap();
            if let Ok(r) = validity_bound(&m, 2000.0, 40.0) {
                prop_assert_eq!(r.hessian[0][1], r.hessian[1][0]);
                prop_assert!(r.mu.abs() >= r.nu.abs());
                prop_assert!(r.l_max > 0.0);
            }
        }

        #[test]
        fn matched_at_every_order(a in prop::collection::vec(-1e-3f64..1e-3, 5), b in prop::collection::vec(-1e-3f64..1e-3, 5), w in 1000.0f64..3000.0) {
            // k_p(ω) = k_s(ω/2) + k_i(ω/2) satisfies every order identically
            let scale = |c: &[f64], j: usize| c[j] * 1e-3f64.powi(j as i32);
            let ks: Vec<f64> = (0..5).map(|j| 10.0 * (j == 0) as u8 as f64 + scale(&a, j)).collect();
            let ki: Vec<f64> = (0..5).map(|j| 10.0 * (j == 0) as u8 as f64 + scale(&b, j)).collect();
            let kp: Vec<f64> = (0..5).map(|j| (ks[j] + ki[j]) * 0.5f64.powi(j as i32)).collect();
            let m = DispersionModel::new(
                Branch::polynomial(kp),
                Branch::polynomial(ks),
                Branch::polynomial(ki),
                range(),
            ).unwrap();
            for n in 0..4 {
                let r = check_condition(&m, w, n, 1e-12).unwrap();
                prop_assert!(r.holds(), "order {} residual {:e}", n, r.residual);
            }
        }

        #[test]
        fn bandwidth_times_spread_is_4pi(gamma in 1e-5f64..1e-3, theta in -3.0f64..0.7, length in 1e2f64..1e5) {
            let p = PhaseMatchParams::new(2000.0, gamma, theta, length).unwrap();
            let of = p.fluorescence_bandwidth().unwrap();
            let spread = length * (p.gamma_s() - p.gamma_i()).abs();
            prop_assert!((4.0 * PI / of - spread).abs() <= 1e-12 * spread);
        }
    }
}
