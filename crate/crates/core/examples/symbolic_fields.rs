//! Symbolic fields, exterior calculus and compiled evaluation on R^3.

use covq::smooth::{exterior_derivative, lie_bracket, wedge, Field, PForm, Tape, VectorField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (x, y, z) = (Field::var(0), Field::var(1), Field::var(2));
    let f = (&x * &y).sin() + z.powi(2);
    let p = [0.4, -1.1, 0.8];

    println!("f        = {:.6}", f.value(&p)?);
    println!("df/dx    = {:.6}", f.diff(0).value(&p)?);
    println!("d2f/dxdy = {:.6}", f.diff(0).diff(1).value(&p)?);

    let df = exterior_derivative(&PForm::scalar(3, f.clone()))?;
    let ddf = exterior_derivative(&df)?;
    println!("|d(df)|  = {:.1e}", ddf.max_abs_at(&p)?);

    let alpha = PForm::one_form(vec![y.clone(), -x.clone(), Field::one()]);
    let vol = wedge(&alpha, &exterior_derivative(&alpha)?)?;
    println!("a ^ da   = {:.6} dx^dy^dz", vol.at(&p)?.get(&[0, 1, 2]));

    let rot = VectorField::new(vec![-y.clone(), x.clone(), Field::zero()]);
    let shear = VectorField::new(vec![z.clone(), Field::zero(), Field::zero()]);
    let br = lie_bracket(&rot, &shear)?;
    println!("[rot, shear] at p = {:?}", br.at(&p)?.comps);

    // Many evaluations of the same expressions: flatten once, then sweep.
    let tape = Tape::new(br.comps.iter().chain([&f]));
    let worst = (0..1000)
        .map(|k| {
            let t = k as f64 / 1000.0;
            tape.eval(&[t, 1.0 - t, t * t]).map(|v| v.iter().fold(0.0f64, |a, b| a.max(b.abs())))
        })
        .try_fold(0.0f64, |a, v| v.map(|v| a.max(v)))?;
    println!("tape: {} ops, max |value| over sweep {worst:.4}", tape.len());
    Ok(())
}
