//! Local potentials of closed 2-forms on a star-shaped chart region.

use super::field::Field;
use super::forms::PForm;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out
}

/// Nodes used by [`homotopy_potential`]; exact for polynomial 2-forms of
/// degree below 22.
pub const HOMOTOPY_NODES: usize = 12;

/// Potential `A` with `dA = Φ` for a closed 2-form `Φ`, through the radial
/// homotopy `A_μ(x) = ∫₀¹ t (x − x̂)^λ Φ_{λμ}(x̂ + t(x − x̂)) dt` about `center`.
///
/// The integral is replaced by Gauss–Legendre quadrature, so the result is a
/// field and can be differentiated like any other.
pub fn homotopy_potential(phi: &PForm, center: &[f64]) -> PForm {
    let n = phi.dim();
    let disp: Vec<Field> = (0..n).map(|l| Field::var(l) - center[l]).collect();
    let mut comps = vec![Vec::new(); n];
    for (t, w) in gauss_legendre_unit(HOMOTOPY_NODES) {
        let map = |l: usize| (l < n).then(|| Field::constant(center[l]) + &disp[l] * t);
        for (mu, slot) in comps.iter_mut().enumerate() {
            for (lam, d) in disp.iter().enumerate() {
                let c = phi.get(&[lam, mu]);
                if c.is_zero() {
                    continue;
                }
                slot.push(c.substitute(&map) * d * (w * t));
            }
        }
    }
    PForm::one_form(comps.into_iter().map(Field::sum).collect())
}
