//! Classification of Hermitian vector fields by special phase functions on
//! an Einstein spacetime.

use super::section1::{GaugeConnection, HermitianField};
use crate::einstein::{observed_potential, EObserver, ESpecialFunction, EinsteinModel};
use crate::smooth::EvalError;

/// Electromagnetic quantum connection `Q^e` with potential `(q/ℏ) A^e`.
pub fn electromagnetic_connection(m: &EinsteinModel) -> GaugeConnection {
    GaugeConnection::new(m.a_em.iter().map(|a| a * m.constants.q_over_hbar()).collect())
}

/// `𝔽(f) = Q^e(X[f]) + i f̄ 𝕀 = f^λ∂_λ + i((q/ℏ) f^λ A^e_λ + f̄) 𝕀`.
pub fn einstein_f(m: &EinsteinModel, f: &ESpecialFunction) -> HermitianField {
    let b = electromagnetic_connection(m).contract(&f.x) + &f.fbar;
    HermitianField::new(f.x.clone(), b)
}

/// Inverse of [`einstein_f`]: `X = Tπ(Y)`, `f̄ = b − (q/ℏ) A^e(X)`.
pub fn einstein_h(m: &EinsteinModel, y: &HermitianField) -> ESpecialFunction {
    let fbar = &y.b - electromagnetic_connection(m).contract(&y.x);
    ESpecialFunction::new(y.x.clone(), fbar)
}

/// `Q[o](X[f]) + i f[o] 𝕀` with `Q[o]` the connection of potential
/// `Θ[o] + (q/ℏ) A^e`.
pub fn einstein_f_observed(m: &EinsteinModel, f: &ESpecialFunction, o: &EObserver) -> HermitianField {
    let conn = GaugeConnection::new(observed_potential(m, o));
    let b = conn.contract(&f.x) + f.observed_value(m, o);
    HermitianField::new(f.x.clone(), b)
}

/// Largest difference between [`einstein_f_observed`] and [`einstein_f`].
pub fn observer_note_residual(
    m: &EinsteinModel,
    f: &ESpecialFunction,
    o: &EObserver,
    points: &[Vec<f64>],
) -> Result<f64, EvalError> {
    let (a, b) = (einstein_f_observed(m, f, o), einstein_f(m, f));
    let mut worst: f64 = 0.0;
    for p in points {
        worst = worst.max(a.distance_at(&b, p)?);
    }
    Ok(worst)
}
