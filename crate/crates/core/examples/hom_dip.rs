//! HOM dip from the closed form and from direct quadrature, side by side.

use std::f64::consts::PI;

use spdc::biphoton::PumpSpectrum;
use spdc::dispersion::PhaseMatchParams;
use spdc::interferometry::{closed_trace, quadrature_trace, DomainPolicy, Interferometer};
use spdc::numerics::{linspace, QuadratureSpec};

fn main() -> spdc::Result<()> {
    let params = PhaseMatchParams::new(2000.0, 8e-5, PI / 5.0, 2e4)?;
    let pump = PumpSpectrum::new(2000.0, 40.0)?;
    let taus = linspace(-0.25, 0.25, 21);
    let closed = closed_trace(Interferometer::Hom, &params, &pump, &taus)?;
    let quad = quadrature_trace(
        Interferometer::Hom,
        &params,
        &pump,
        &taus,
        &QuadratureSpec::default(),
        &DomainPolicy::default(),
    )?;
    println!("{:>8} {:>12} {:>12}", "tau_ps", "closed", "quadrature");
    for ((t, a), b) in taus.iter().zip(&closed.values).zip(&quad.values) {
        println!("{t:>8.3} {a:>12.8} {b:>12.8}");
    }
    println!("max |difference| = {:.2e}", closed.max_abs_diff(&quad)?);
    Ok(())
}
