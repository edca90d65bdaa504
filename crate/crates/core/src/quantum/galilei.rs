//! Classification of Hermitian vector fields by special phase functions on
//! a Galilei spacetime.

use super::section1::{GaugeConnection, HermitianField};
use crate::galilei::{observed_potential, transition_potential, GObserver, GSpecialFunction, GalileiModel};
use crate::smooth::{EvalError, Field};

/// Observed quantum connection `Q[o]` in the fixed quantum basis.
pub fn observed_connection(m: &GalileiModel, o: &GObserver) -> GaugeConnection {
    GaugeConnection::new(observed_potential(m, o))
}

/// `𝔽(f) = Q[o](X[f]) + i f[o] 𝕀`, i.e. `X[f] + i(A[o](X[f]) + f[o]) 𝕀`.
pub fn galilei_f(m: &GalileiModel, f: &GSpecialFunction, o: &GObserver, conn: &GaugeConnection) -> HermitianField {
    let x = f.tangent_lift();
    let b = conn.contract(&x) + f.observed(m, o).value;
    HermitianField::new(x, b)
}

/// Inverse of [`galilei_f`]: `X⁰𝒦 − Xⁱ𝒫ᵢ + (b − A[o](X))` relative to `o`.
pub fn galilei_h(m: &GalileiModel, y: &HermitianField, o: &GObserver, conn: &GaugeConnection) -> GSpecialFunction {
    let lifted = GSpecialFunction::from_lift(&y.x, Field::zero());
    let mut comps = lifted.observed(m, o);
    comps.value = &y.b - conn.contract(&y.x);
    GSpecialFunction::from_observed(m, o, &comps)
}

/// Largest difference between `𝔽` computed through `o` and through `ǒ`,
/// with `A[ǒ]` obtained from `A[o]` by the boost law.
pub fn observer_independence_residual(
    m: &GalileiModel,
    f: &GSpecialFunction,
    o: &GObserver,
    o_new: &GObserver,
    points: &[Vec<f64>],
) -> Result<f64, EvalError> {
    let a_o = observed_potential(m, o);
    let a_new = transition_potential(m, &a_o, o, o_new);
    let y_o = galilei_f(m, f, o, &GaugeConnection::new(a_o));
    let y_new = galilei_f(m, f, o_new, &GaugeConnection::new(a_new));
    let mut worst: f64 = 0.0;
    for p in points {
        worst = worst.max(y_o.distance_at(&y_new, p)?);
    }
    Ok(worst)
}
