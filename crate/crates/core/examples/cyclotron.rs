//! Charged particle in a uniform magnetic field: integrate one cyclotron
//! period and compare with the classical circle.

use std::f64::consts::PI;

use covq::galilei::{GPhasePoint, GalileiModel};
use covq::harness::integrate_galilei;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = GalileiModel::from_source(include_str!("../models/uniform_b_galilei.model"))?;
    let field = 0.8;
    let (mass, charge) = (model.m(), model.q());
    let speed = 0.5;
    let radius = mass * speed / (charge * field);
    let period = 2.0 * PI * mass / (charge * field);

    let orbit = integrate_galilei(&model, &GPhasePoint::new([0.0; 4], [speed, 0.0, 0.0]), period, 1e-3)?;
    let xs: Vec<[f64; 4]> = orbit.trajectory.positions().collect();
    let quarter = xs.len() / 4;
    for k in [0, quarter, 2 * quarter, 3 * quarter, xs.len() - 1] {
        println!("t = {:7.4}  x1 = {:+.8}  x2 = {:+.8}", xs[k][0], xs[k][1], xs[k][2]);
    }
    let diameter = xs.iter().map(|x| x[1].hypot(x[2])).fold(0.0, f64::max);
    println!("radius: expected {radius:.10}, measured {:.10}", diameter / 2.0);
    println!("law-of-motion residual {:.2e}", orbit.max_law_residual());
    Ok(())
}
