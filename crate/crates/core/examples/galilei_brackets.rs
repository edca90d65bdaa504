//! Special phase functions and their bracket on a Galilei model with a
//! uniform magnetic field.

use covq::galilei::{
    examples, special_bracket, special_bracket_definitional, special_value, GObserver, GPhasePoint, GSpecialFunction,
};
use covq::harness::{load_model, LoadedModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/models/uniform_b_galilei.model");
    let LoadedModel::Galilei(model) = load_model(path)? else {
        return Err("expected a galilei model".into());
    };
    let observer = GObserver::chart();
    let point = GPhasePoint::new([0.5, 1.0, -0.5, 0.2], [0.3, 0.1, -0.2]);

    let energy = examples::hamiltonian(&model, &observer);
    let px = examples::momentum(&model, &observer, 1);
    let py = examples::momentum(&model, &observer, 2);
    let x1 = GSpecialFunction::coordinate(1);

    for (label, f) in [("H0", &energy), ("P1", &px), ("P2", &py)] {
        println!("{label} = {:+.6}", special_value(&model, f, &point, &observer)?);
    }

    // The closed form agrees with the Poisson bracket plus its transport terms.
    for (label, f, g) in [("[x1, P1]", &x1, &px), ("[P1, P2]", &px, &py), ("[H0, P1]", &energy, &px)] {
        let closed = special_bracket(&model, f, g).phase_function(&model).value(&point.coords())?;
        let direct = special_bracket_definitional(&model, f, g).value(&point.coords())?;
        println!("{label}: closed form {closed:+.6}, definition {direct:+.6}");
    }
    Ok(())
}
