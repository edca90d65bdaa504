//! Hermitian vector fields on a quantum line bundle, classified by pairs
//! (vector field, function) relative to a connection.

use covq::quantum::{classify_h, classify_j, hermitian_bracket, pair_bracket, GaugeConnection, SpacetimePair};
use covq::smooth::{Field, VectorField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x: Vec<Field> = (0..4).map(Field::var).collect();
    let conn = GaugeConnection::new(vec![&x[1] * &x[2], x[0].sin(), &x[3] * 0.5, Field::zero()]);
    let curvature = conn.curvature();
    println!("curvature components:");
    for (idx, c) in curvature.components() {
        if !c.is_zero() {
            println!("  {idx:?} at p = {:+.4}", c.value(&[0.3, 0.2, -0.1, 0.4])?);
        }
    }

    let p1 = SpacetimePair::new(
        VectorField::new(vec![Field::one(), x[2].clone(), Field::zero(), Field::zero()]),
        &x[0] * &x[3],
    );
    let p2 = SpacetimePair::new(
        VectorField::new(vec![Field::zero(), Field::zero(), x[1].clone(), x[0].cos()]),
        x[2].clone(),
    );

    // j intertwines the curvature-twisted pair bracket with the Lie bracket.
    let lhs = hermitian_bracket(&classify_j(&conn, &p1), &classify_j(&conn, &p2));
    let rhs = classify_j(&conn, &pair_bracket(&p1, &p2, &curvature));
    let points = [[0.3, 0.2, -0.1, 0.4], [-1.0, 0.5, 0.7, 0.0], [0.9, -0.8, 0.1, 1.2]];
    for pt in points {
        println!("at {pt:?}: |[j p1, j p2] - j[p1, p2]| = {:.1e}", lhs.distance_at(&rhs, &pt)?);
    }

    // h undoes j.
    let back = classify_h(&conn, &classify_j(&conn, &p1));
    println!("|h(j p1) - p1| = {:.1e}", back.distance_at(&p1, &points[1])?);
    Ok(())
}
