//! Scale-dimension bookkeeping for model constants.

use covq::dims::{DimScalar, Dimension};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mass = DimScalar::new(2.0, Dimension::mass());
    let hbar = DimScalar::new(0.7, Dimension::action());
    let charge = DimScalar::new(1.5, "T^-1 L^3/2 M^1/2".parse()?);

    // G = (m/ħ) g carries dimension T L^-2.
    let scale = mass.checked_div(hbar)?;
    println!("m/hbar = {scale}");

    // q/ħ times a potential must be dimensionless for the phase to make sense.
    let potential_dim: Dimension = "L^1/2 M^1/2".parse()?;
    let phase = charge.checked_div(hbar)?.checked_mul(DimScalar::new(1.0, potential_dim))?;
    println!("(q/hbar) A = {phase}, dimensionless: {}", phase.dim.is_none());

    match mass.checked_add(hbar) {
        Ok(s) => println!("unexpected sum {s}"),
        Err(e) => println!("m + hbar rejected: {e}"),
    }
    Ok(())
}
