//! Visibility against pump bandwidth (HOM) and crystal length (MZ).

use spdc::interferometry::{
    standard_thetas, sweep_visibility, Interferometer, SweepSpec, SweptParameter,
};
use spdc::numerics::linspace;

fn main() -> spdc::Result<()> {
    let thetas = standard_thetas();
    let runs = [
        (
            Interferometer::Hom,
            SweptParameter::PumpBandwidth,
            linspace(0.5, 200.0, 5),
        ),
        (
            Interferometer::Mz,
            SweptParameter::CrystalLength,
            linspace(100.0, 5e4, 5),
        ),
    ];
    for (kind, swept, values) in runs {
        let spec = SweepSpec {
            swept,
            values: values.clone(),
            omega_p: 2000.0,
            gamma: 8e-5,
            length: 1e3,
            pump_bandwidth: 40.0,
        };
        let curves = sweep_visibility(kind, &thetas, &spec)?;
        println!("{kind} visibility vs {swept}");
        print!("{:>10}", "theta");
        values.iter().for_each(|x| print!("{x:>10.1}"));
        println!();
        for c in &curves {
            print!("{:>10.4}", c.theta);
            c.vs.iter().for_each(|v| print!("{v:>10.5}"));
            println!();
        }
    }
    Ok(())
}
