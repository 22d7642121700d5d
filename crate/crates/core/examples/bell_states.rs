//! Post-selected polarization Bell states after a beamsplitter.

use std::f64::consts::FRAC_PI_4;

use spdc::biphoton::{BiphotonAmplitude, PumpSpectrum};
use spdc::dispersion::PhaseMatchParams;
use spdc::polarization::{beamsplitter_output, postselect_coincidence, ArmTransform, Port};

fn main() -> spdc::Result<()> {
    let bp = BiphotonAmplitude::new(
        PhaseMatchParams::new(2000.0, 8e-5, -FRAC_PI_4, 1e3)?,
        PumpSpectrum::new(2000.0, 40.0)?,
    )?;
    let state = beamsplitter_output(&bp);
    for port in [Port::B, Port::C] {
        for t in ArmTransform::ALL {
            let ps = postselect_coincidence(&state.apply(port, t))?;
            println!(
                "{port:?} {t:?}: {} with probability {:.3}",
                ps.state, ps.success_prob
            );
        }
    }
    Ok(())
}
