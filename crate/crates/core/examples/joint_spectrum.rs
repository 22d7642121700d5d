//! Joint spectral amplitude of a pair source, conventional vs extended matching.

use std::f64::consts::{FRAC_PI_4, PI};

use spdc::biphoton::{BiphotonAmplitude, PumpSpectrum};
use spdc::dispersion::PhaseMatchParams;
use spdc::numerics::Interval;

fn main() -> spdc::Result<()> {
    let pump = PumpSpectrum::new(2000.0, 40.0)?;
    let span = Interval::new(900.0, 1100.0)?;
    for (label, theta) in [("extended", -FRAC_PI_4), ("conventional", PI / 20.0)] {
        let params = PhaseMatchParams::new(2000.0, 8e-5, theta, 1e4)?;
        let grid = BiphotonAmplitude::new(params, pump)?.grid(span, span, 81)?;
        let (r, c) = grid.argmax();
        println!(
            "{label:>12}: peak at ({:.1}, {:.1}) rad/ps, swap defect {:.2e}, frequency correlation {:+.3}",
            grid.axis_s[r],
            grid.axis_i[c],
            grid.swap_defect().unwrap(),
            grid.frequency_correlation()
        );
    }
    Ok(())
}
