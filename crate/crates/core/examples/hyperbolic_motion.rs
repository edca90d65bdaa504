//! Uniformly accelerated charge in a constant electric field, against the
//! analytic hyperbola, plus the failure modes of the integrator.

use covq::einstein::{EPhasePoint, EinsteinModel};
use covq::harness::{integrate_einstein, OrbitError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = EinsteinModel::from_source(include_str!("../models/minkowski_uniformF.model"))?;
    let accel = model.q() * 0.6 / model.m();

    let orbit = integrate_einstein(&model, &EPhasePoint::new([0.0; 4], [0.0; 3]), 4.0, 1e-3)?;
    let tr = &orbit.trajectory;
    println!("{:>6}  {:>12} {:>12}  {:>9}", "tau", "x0", "x1", "error");
    for k in (0..tr.states.len()).step_by(500) {
        let (s, x) = (tr.params[k], tr.states[k]);
        let exact = [(accel * s).sinh() / accel, ((accel * s).cosh() - 1.0) / accel];
        let err = (x[0] - exact[0]).abs().max((x[1] - exact[1]).abs());
        println!("{s:6.3}  {:12.8} {:12.8}  {err:9.2e}", x[0], x[1]);
    }

    match integrate_einstein(&model, &EPhasePoint::new([0.0; 4], [0.0; 3]), 40.0, 1e-2) {
        Err(OrbitError::BoxExit { param, .. }) => println!("left the chart box at tau = {param:.3}"),
        other => println!("unexpected: {:?}", other.map(|r| r.trajectory.states.len())),
    }
    match integrate_einstein(&model, &EPhasePoint::new([0.0; 4], [1.2, 0.0, 0.0]), 1.0, 1e-3) {
        Err(e) => println!("spacelike start rejected: {e}"),
        Ok(_) => println!("spacelike start accepted"),
    }
    Ok(())
}
