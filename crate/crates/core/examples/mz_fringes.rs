//! Mach-Zehnder coincidence fringes near zero delay.

use std::f64::consts::{FRAC_PI_4, PI};

use spdc::biphoton::PumpSpectrum;
use spdc::dispersion::PhaseMatchParams;
use spdc::interferometry::{closed_trace, Interferometer};
use spdc::numerics::linspace;

fn main() -> spdc::Result<()> {
    let pump = PumpSpectrum::new(2000.0, 40.0)?;
    let period = 2.0 * PI / 2000.0;
    // one fringe sampled at 9 points, at zero delay and a few envelope widths out
    for theta in [-FRAC_PI_4, -PI / 6.0] {
        let params = PhaseMatchParams::new(2000.0, 8e-5, theta, 2e4)?;
        println!("theta = {theta:+.4}");
        for centre in [0.0, 0.02, 0.05] {
            let taus = linspace(centre, centre + period, 9);
            let trace = closed_trace(Interferometer::Mz, &params, &pump, &taus)?;
            let (lo, hi) = trace
                .values
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
                    (l.min(v), h.max(v))
                });
            println!("  tau ≈ {centre:.3} ps: P+ in [{lo:.4}, {hi:.4}]");
        }
    }
    Ok(())
}
