//! Joined phase objects on the chart `(x^λ, xⁱ₀)`: the phase connection, the
//! dynamical connection `γ`, the cosymplectic pair `(Θ, Ω)`, the phase
//! 2-vector `Λ` and the Lorentz force.

use super::model::{EPhasePoint, EinsteinError, EinsteinModel};
use crate::galilei::{velocity_var, PHASE_DIM};
use crate::smooth::{wedge, Bivector, Evaluator, Field, PForm, VectorField};

/// Velocity coordinate `xⁱ₀` as a phase field, `i = 1..=3`.
pub fn velocity(i: usize) -> Field {
    Field::var(velocity_var(i))
}

/// `Ḡ^{iλ} = (ℏ/m) ḡ^{iλ}`, indexed `[i-1][λ]`.
fn big_gbar_upper(m: &EinsteinModel) -> Vec<Vec<Field>> {
    let s = 1.0 / m.constants.m_over_hbar();
    m.contact.gbar_upper[1..].iter().map(|row| row.iter().map(|f| f * s).collect()).collect()
}

/// Gravitational phase connection `Γ♮_λⁱ = δ̄ⁱ_ν K_λ^ν_ρ δ̄^ρ₀`, indexed `[λ][i-1]`.
pub fn gravitational_phase_connection(m: &EinsteinModel) -> Vec<Vec<Field>> {
    let db = &m.contact.delta_bar;
    (0..4)
        .map(|lam| {
            let transported: Vec<Field> =
                (0..4).map(|nu| Field::sum((0..4).map(|rho| m.k.get(lam, nu, rho) * &db[rho]))).collect();
            (1..4).map(|i| &transported[i] - velocity(i) * &transported[0]).collect()
        })
        .collect()
}

/// Electromagnetic phase connection
/// `Γ^e_λⁱ = −(q/2ℏ)(1/(cα⁰)) Ḡ^{iμ}(F_λμ − (α⁰)² ḡ₀λ F_ρμ δ̄^ρ₀)`, indexed `[λ][i-1]`.
pub fn electromagnetic_phase_connection(m: &EinsteinModel) -> Vec<Vec<Field>> {
    let ct = &m.contact;
    let up = big_gbar_upper(m);
    let pre = ct.alpha.recip() * (-0.5 * m.constants.q_over_hbar() / m.c());
    let alpha2 = ct.alpha.powi(2);
    let f = |a: usize, b: usize| m.f_em.get(&[a, b]);
    let transported: Vec<Field> =
        (0..4).map(|mu| Field::sum((0..4).map(|rho| f(rho, mu) * &ct.delta_bar[rho]))).collect();
    (0..4)
        .map(|lam| {
            let inner: Vec<Field> =
                (0..4).map(|mu| f(lam, mu) - &alpha2 * &ct.gbar_lower[0][lam] * &transported[mu]).collect();
            (0..3).map(|i| Field::sum((0..4).map(|mu| &up[i][mu] * &inner[mu])) * &pre).collect()
        })
        .collect()
}

/// Joined phase connection `Γ = Γ♮ + Γ^e`, indexed `[λ][i-1]`.
pub fn phase_connection(m: &EinsteinModel) -> Vec<Vec<Field>> {
    let grav = gravitational_phase_connection(m);
    let em = electromagnetic_phase_connection(m);
    grav.iter().zip(&em).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect()
}

/// `γⁱ = δ̄^λ₀ Γ_λⁱ`, indexed `[i-1]`.
pub fn dynamical_gamma(m: &EinsteinModel) -> Vec<Field> {
    let gamma = phase_connection(m);
    (0..3).map(|i| Field::sum((0..4).map(|lam| &m.contact.delta_bar[lam] * &gamma[lam][i]))).collect()
}

/// `γ = 𝕕 ⌟ Γ = c α⁰ (∂₀ + xⁱ₀ ∂ᵢ + γⁱ ∂⁰ᵢ)`.
pub fn gamma_field(m: &EinsteinModel) -> VectorField {
    let s = &m.contact.alpha * m.c();
    let mut comps: Vec<Field> = m.contact.delta_bar.iter().map(|d| d * &s).collect();
    comps.extend(dynamical_gamma(m).iter().map(|g| g * &s));
    VectorField::new(comps)
}

/// Electromagnetic part of `γ` from its own formula:
/// `γ^e i = −(q/m) ḡ^{iμ}(F₀μ + Fⱼμ xʲ₀)`, indexed `[i-1]`.
pub fn lorentz_gamma(m: &EinsteinModel) -> Vec<Field> {
    let ct = &m.contact;
    let transported: Vec<Field> =
        (0..4).map(|mu| Field::sum((0..4).map(|rho| m.f_em.get(&[rho, mu]) * &ct.delta_bar[rho]))).collect();
    (1..4).map(|i| Field::sum((0..4).map(|mu| &ct.gbar_upper[i][mu] * &transported[mu])) * (-m.q() / m.m())).collect()
}

/// Time form `τ = τ_λ d^λ` on the phase chart.
pub fn tau_form(m: &EinsteinModel) -> PForm {
    phase_one_form(&m.contact.tau)
}

fn phase_one_form(spacetime: &[Field]) -> PForm {
    let mut c = spacetime.to_vec();
    c.resize(PHASE_DIM, Field::zero());
    PForm::one_form(c)
}

/// `Θ = c α⁰ Ḡ₀λ d^λ`, the 1-form `−(mc²/ℏ) τ`.
pub fn theta(m: &EinsteinModel) -> PForm {
    let s = &m.contact.alpha * (m.c() * m.constants.m_over_hbar());
    phase_one_form(&m.contact.gbar_lower[0].iter().map(|g| g * &s).collect::<Vec<_>>())
}

/// Horizontal potential `A↑ = Θ + (q/ℏ) A^e`.
pub fn horizontal_potential(m: &EinsteinModel) -> PForm {
    let em: Vec<Field> = m.a_em.iter().map(|a| a * m.constants.q_over_hbar()).collect();
    theta(m) + phase_one_form(&em)
}

/// `Ω = c α⁰ Ḡᵢμ (dⁱ₀ − Γ_λⁱ d^λ) ∧ d^μ`.
pub fn omega(m: &EinsteinModel) -> PForm {
    let gamma = phase_connection(m);
    let s = &m.contact.alpha * (m.c() * m.constants.m_over_hbar());
    let mut out = PForm::zero(PHASE_DIM, 2);
    for i in 1..4 {
        let mut c = vec![Field::zero(); PHASE_DIM];
        c[velocity_var(i)] = Field::one();
        for lam in 0..4 {
            c[lam] = -&gamma[lam][i - 1];
        }
        let vertical = PForm::one_form(c);
        for mu in 0..4 {
            let coeff = &m.contact.gbar_lower[i][mu] * &s;
            if coeff.is_zero() {
                continue;
            }
            out = out + wedge(&vertical, &PForm::basis(PHASE_DIM, mu)).expect("degree 2").scale(&coeff);
        }
    }
    out
}

/// `Λ = (1/(cα⁰)) Ḡ^{jλ} (∂_λ + Γ_λʰ ∂⁰ₕ) ∧ ∂⁰ⱼ`.
pub fn lambda(m: &EinsteinModel) -> Bivector {
    let gamma = phase_connection(m);
    let up = big_gbar_upper(m);
    let s = m.contact.alpha.recip() * (1.0 / m.c());
    let mut out = Bivector::zero(PHASE_DIM);
    for lam in 0..4 {
        let mut horiz = VectorField::<Field>::basis(PHASE_DIM, lam);
        for h in 1..4 {
            horiz.comps[velocity_var(h)] = gamma[lam][h - 1].clone();
        }
        for j in 1..4 {
            if up[j - 1][lam].is_zero() {
                continue;
            }
            out = out
                + Bivector::wedge(&horiz, &VectorField::basis(PHASE_DIM, velocity_var(j)))
                    .scale(&(&up[j - 1][lam] * &s));
        }
    }
    out
}

/// `{f, g} = i(df ∧ dg) Λ`
pub fn poisson_bracket(m: &EinsteinModel, f: &Field, g: &Field) -> Field {
    lambda(m).pair(f, g)
}

/// Coordinate expression
/// `{f,g} = (1/(cα⁰))(Ḡ^{iλ}(∂_λf ∂⁰ᵢg − ∂_λg ∂⁰ᵢf) − Ξ̄^{ij} ∂⁰ᵢf ∂⁰ⱼg)`
/// with `Ξ̄^{ij} = Ḡ^{iλ}Γ_λʲ − Ḡ^{jλ}Γ_λⁱ`.
pub fn poisson_bracket_coordinates(m: &EinsteinModel, f: &Field, g: &Field) -> Field {
    let gamma = phase_connection(m);
    let up = big_gbar_upper(m);
    let xi_half = |i: usize, j: usize| Field::sum((0..4).map(|lam| &up[i - 1][lam] * &gamma[lam][j - 1]));
    let mut terms = Vec::new();
    for i in 1..4 {
        let (fi, gi) = (f.diff(velocity_var(i)), g.diff(velocity_var(i)));
        for lam in 0..4 {
            let u = &up[i - 1][lam];
            if !u.is_zero() {
                terms.push(u * (f.diff(lam) * &gi - g.diff(lam) * &fi));
            }
        }
        for j in 1..4 {
            let xi = xi_half(i, j) - xi_half(j, i);
            if !xi.is_zero() {
                terms.push(-(xi * &fi * g.diff(velocity_var(j))));
            }
        }
    }
    Field::sum(terms) / (&m.contact.alpha * m.c())
}

/// `σ γ + i(df) Λ`
pub fn hamiltonian_lift(m: &EinsteinModel, sigma: &Field, f: &Field) -> VectorField {
    gamma_field(m).scale(sigma) + lambda(m).sharp(f)
}

/// Lorentz force `f⃗ = −c α⁰ g^{λμ}(F₀μ + Fᵢμ xⁱ₀) ∂_λ` as phase fields.
pub fn lorentz_force_field(m: &EinsteinModel) -> Vec<Field> {
    let ct = &m.contact;
    let transported: Vec<Field> =
        (0..4).map(|mu| Field::sum((0..4).map(|rho| m.f_em.get(&[rho, mu]) * &ct.delta_bar[rho]))).collect();
    let s = &ct.alpha * (-m.c());
    m.raise(&transported).iter().map(|f| f * &s).collect()
}

pub fn lorentz_force(m: &EinsteinModel, p: &EPhasePoint) -> Result<[f64; 4], EinsteinError> {
    let v = m.evaluate(&lorentz_force_field(m), p)?;
    Ok([v[0], v[1], v[2], v[3]])
}

/// Residual of the law of motion `j₂s = γ ∘ j₁s` for a worldline sampled as
/// position, velocity and acceleration with respect to proper time:
/// `ẋ⁰ − cα⁰` followed by `d(ẋⁱ/ẋ⁰)/dσ − cα⁰γⁱ`.
pub fn law_of_motion_residual(
    m: &EinsteinModel,
    x: &[f64; 4],
    xdot: &[f64; 4],
    xddot: &[f64; 4],
) -> Result<[f64; 4], EinsteinError> {
    let v = [xdot[1] / xdot[0], xdot[2] / xdot[0], xdot[3] / xdot[0]];
    let p = EPhasePoint::new(*x, v);
    m.check_timelike(&p)?;
    let gamma = gamma_field(m);
    let mut ev = Evaluator::new(p.coords());
    let mut out = [xdot[0] - ev.eval(&gamma.comps[0])?, 0.0, 0.0, 0.0];
    for i in 1..4 {
        let dv = (xddot[i] * xdot[0] - xdot[i] * xddot[0]) / (xdot[0] * xdot[0]);
        out[i] = dv - ev.eval(&gamma.comps[velocity_var(i)])?;
    }
    Ok(out)
}

/// The scalar `(Θ ∧ Ω ∧ Ω ∧ Ω)(∂₀, …, ∂₃, ∂⁰₁, ∂⁰₂, ∂⁰₃)`.
pub fn volume_form(m: &EinsteinModel) -> Field {
    let om = omega(m);
    let top = wedge(&wedge(&wedge(&theta(m), &om).unwrap(), &om).unwrap(), &om).unwrap();
    top.get(&[0, 1, 2, 3, 4, 5, 6])
}
