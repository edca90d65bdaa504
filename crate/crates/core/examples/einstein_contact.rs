//! Contact geometry of an Einstein phase space: normalisation, time form,
//! the contact identities and the Lorentz force.

use covq::einstein::{alpha0, contact_map, lorentz_force, time_form, EPhasePoint, TechnicalIdentities};
use covq::harness::{load_model, LoadedModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["schwarzschild_like", "minkowski_uniformF"] {
        let path = format!("{}/models/{name}.model", env!("CARGO_MANIFEST_DIR"));
        let LoadedModel::Einstein(model) = load_model(&path)? else {
            return Err(format!("{name} is not an einstein model").into());
        };
        let point = EPhasePoint::new([0.5, 3.0, 0.5, -0.2], [0.2, -0.1, 0.05]);
        let d = contact_map(&model, &point)?;
        let tau = time_form(&model, &point)?;
        let tau_d: f64 = tau.iter().zip(&d).map(|(a, b)| a * b).sum();

        println!("{name}");
        println!("  alpha0      {:.9}", alpha0(&model, &point)?);
        println!("  contact map {d:.6?}");
        println!("  tau(d)      {tau_d:.12}");
        println!("  lorentz     {:.6?}", lorentz_force(&model, &point)?);

        let identities = TechnicalIdentities::new(&model);
        let worst = identities
            .evaluate(&model, &point)?
            .into_iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
            .expect("non-empty identity list");
        println!("  {} contact identities, worst {} at {:.1e}", identities.names().len(), worst.name, worst.residual);
    }

    let spacelike = EPhasePoint::new([0.0; 4], [1.5, 0.0, 0.0]);
    let minkowski = concat!(env!("CARGO_MANIFEST_DIR"), "/models/minkowski.model");
    if let LoadedModel::Einstein(model) = load_model(minkowski)? {
        if let Err(e) = alpha0(&model, &spacelike) {
            println!("faster than light: {e}");
        }
    }
    Ok(())
}
