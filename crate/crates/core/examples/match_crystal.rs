//! Tune a crystal knob until phase and group-velocity matching hold together.

use spdc::dispersion::{
    check_condition, polar_params, solve_epm, taylor_gammas, validity_bound, Branch,
    DispersionModel, Field, Knob,
};
use spdc::numerics::Interval;

fn main() -> spdc::Result<()> {
    let model = DispersionModel::new(
        Branch::polynomial([1.4, 7.0, 1e-7]),
        Branch::polynomial([0.5, 7.0]),
        Branch::polynomial([0.5, 7.2]),
        Interval::new(500.0, 3000.0)?,
    )?
    .with_knob(
        Knob {
            field: Field::Pump,
            order: 1,
            scale: 1.0,
        },
        0.0,
    )?;

    let sol = solve_epm(
        &model,
        Interval::new(1500.0, 2500.0)?,
        Interval::new(0.09955, 0.09965)?,
        1e-10,
    )?;
    let tuned = model.at_zeta(sol.zeta);
    println!(
        "omega_p = {:.6} rad/ps, zeta = {:.8}",
        sol.omega_p, sol.zeta
    );
    for order in 0..=2 {
        let r = check_condition(&tuned, sol.omega_p, order, 1e-10)?;
        println!(
            "  order {order}: residual {:+.3e} ({})",
            r.residual,
            if r.holds() { "holds" } else { "violated" }
        );
    }
    let (gs, gi) = taylor_gammas(&tuned, sol.omega_p)?;
    let (gamma, theta) = polar_params(gs, gi)?;
    println!(
        "gamma_s = {gs:+.4}, gamma_i = {gi:+.4} ps/um -> gamma = {gamma:.4}, theta = {theta:+.6}"
    );
    match validity_bound(&tuned, sol.omega_p, 40.0) {
        Ok(v) => println!("quadratic terms negligible up to L = {:.3e} um", v.l_max),
        Err(e) => println!("{e}"),
    }
    Ok(())
}
