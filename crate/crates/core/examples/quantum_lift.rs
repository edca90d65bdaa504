//! Quantisation maps: special phase functions to Hermitian vector fields,
//! on a Galilei and an Einstein model.

use covq::einstein::{examples as e_examples, ESpecialFunction, EinsteinModel};
use covq::galilei::{examples as g_examples, special_bracket_observed, GObserver, GSpecialFunction, GalileiModel};
use covq::quantum::einstein::{einstein_f, einstein_h};
use covq::quantum::galilei::{galilei_f, observed_connection};
use covq::quantum::hermitian_bracket;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let galilei = GalileiModel::from_source(include_str!("../models/uniform_b_galilei.model"))?;
    let o = GObserver::chart();
    let conn = observed_connection(&galilei, &o);
    let energy = g_examples::hamiltonian(&galilei, &o);
    let momentum = g_examples::momentum(&galilei, &o, 1);
    let x = [0.4, 0.5, -1.0, 0.3];

    let lifted = galilei_f(&galilei, &energy, &o, &conn);
    println!("F(H0) at {x:?}: X = {:?}, b = {:+.6}", lifted.x.at(&x)?.comps, lifted.b.value(&x)?);

    // F turns the special bracket into the commutator of Hermitian fields.
    let bracket = special_bracket_observed(&galilei, &energy, &momentum, &o);
    let image = galilei_f(&galilei, &bracket, &o, &conn);
    let commutator = hermitian_bracket(&lifted, &galilei_f(&galilei, &momentum, &o, &conn));
    println!("galilei: |F[H0,P1] - [F H0, F P1]| = {:.1e}", image.distance_at(&commutator, &x)?);

    let time = galilei_f(&galilei, &GSpecialFunction::coordinate(0), &o, &conn);
    println!("F(x0) = i x0: b = {:+.6}", time.b.value(&x)?);

    let einstein = EinsteinModel::from_source(include_str!("../models/minkowski_uniformF.model"))?;
    let h = e_examples::hamiltonian(&einstein);
    let y = einstein_f(&einstein, &h);
    let back: ESpecialFunction = einstein_h(&einstein, &y);
    println!("einstein: F(H0) X = {:?}", y.x.at(&x)?.comps);
    println!("einstein: |H(F(H0)) - H0| = {:.1e}", back.distance_at(&h, &x)?);
    Ok(())
}
