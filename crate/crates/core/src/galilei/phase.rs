//! Phase objects of the joined connection on the chart `(x^λ, xⁱ₀)`.

use super::model::{velocity_var, GalileiModel, PHASE_DIM};
use crate::smooth::{wedge, Bivector, Field, PForm, VectorField};

/// Velocity coordinate `xⁱ₀` as a phase field, `i = 1..=3`.
pub fn velocity(i: usize) -> Field {
    Field::var(velocity_var(i))
}

/// `δ̄^λ₀ = δ^λ₀ + δ^λ_h xʰ₀`
fn delta_bar(lambda: usize) -> Field {
    if lambda == 0 {
        Field::one()
    } else {
        velocity(lambda)
    }
}

/// Phase connection `Γ_λⁱ = K_λⁱ₀ + K_λⁱⱼ xʲ₀`, indexed `[λ][i-1]`.
pub fn phase_connection(m: &GalileiModel) -> Vec<Vec<Field>> {
    (0..4)
        .map(|lam| {
            (1..4)
                .map(|i| m.k.get(lam, i, 0).clone() + Field::sum((1..4).map(|j| m.k.get(lam, i, j) * velocity(j))))
                .collect()
        })
        .collect()
}

/// Dynamical components `γⁱ = K_λⁱ_μ δ̄^λ₀ δ̄^μ₀`, indexed `[i-1]`.
pub fn dynamical_gamma(m: &GalileiModel) -> Vec<Field> {
    (1..4)
        .map(|i| {
            let mut terms = Vec::new();
            for lam in 0..4 {
                for mu in 0..4 {
                    let k = m.k.get(lam, i, mu);
                    if !k.is_zero() {
                        terms.push(k * delta_bar(lam) * delta_bar(mu));
                    }
                }
            }
            Field::sum(terms)
        })
        .collect()
}

/// Second order connection `γ = ∂₀ + xⁱ₀ ∂ᵢ + γⁱ ∂⁰ᵢ`.
pub fn gamma_field(m: &GalileiModel) -> VectorField {
    let mut comps = vec![Field::one()];
    comps.extend((1..4).map(velocity));
    comps.extend(dynamical_gamma(m));
    VectorField::new(comps)
}

/// Electromagnetic part of `γ` from its own formula:
/// `γ^e i = −(q/m) gⁱʲ (F₀ⱼ + Fₕⱼ xʰ₀)`.
pub fn lorentz_gamma(m: &GalileiModel) -> Vec<Field> {
    let scale = -m.q() / m.m();
    let ginv_phys: Vec<Vec<Field>> =
        m.big_g_inv.iter().map(|row| row.iter().map(|f| f * m.constants.m_over_hbar()).collect()).collect();
    (0..3)
        .map(|i| {
            Field::sum((1..4).map(|j| {
                let force = m.f_em.get(&[0, j]) + Field::sum((1..4).map(|h| m.f_em.get(&[h, j]) * velocity(h)));
                &ginv_phys[i][j - 1] * force
            })) * scale
        })
        .collect()
}

/// Electromagnetic part of `Γ` from its own formula:
/// `Γ^e = −(q/2ℏ) Gⁱʰ (F_{jh} dʲ + (F_{jh} xʲ₀ + 2F_{0h}) d⁰) ⊗ ∂⁰ᵢ`, indexed `[λ][i-1]`.
pub fn lorentz_phase_connection(m: &GalileiModel) -> Vec<Vec<Field>> {
    let s = -0.5 * m.constants.q_over_hbar();
    let f = |a: usize, b: usize| m.f_em.get(&[a, b]);
    (0..4)
        .map(|lam| {
            (1..4)
                .map(|i| {
                    Field::sum((1..4).map(|h| {
                        let coeff = if lam == 0 {
                            Field::sum((1..4).map(|j| f(j, h) * velocity(j))) + f(0, h) * 2.0
                        } else {
                            f(lam, h)
                        };
                        &m.big_g_inv[i - 1][h - 1] * coeff
                    })) * s
                })
                .collect()
        })
        .collect()
}

/// `Ω = Gᵢⱼ (dⁱ₀ − Γ_λⁱ d^λ) ∧ (dʲ − xʲ₀ d⁰)` on the phase chart.
pub fn omega(m: &GalileiModel) -> PForm {
    let gamma = phase_connection(m);
    let theta: Vec<PForm> = (1..4)
        .map(|i| {
            let mut c = vec![Field::zero(); PHASE_DIM];
            c[velocity_var(i)] = Field::one();
            for lam in 0..4 {
                c[lam] = -&gamma[lam][i - 1];
            }
            PForm::one_form(c)
        })
        .collect();
    let contact: Vec<PForm> = (1..4)
        .map(|j| {
            let mut c = vec![Field::zero(); PHASE_DIM];
            c[j] = Field::one();
            c[0] = -velocity(j);
            PForm::one_form(c)
        })
        .collect();
    let mut out = PForm::zero(PHASE_DIM, 2);
    for i in 0..3 {
        for j in 0..3 {
            if m.big_g[i][j].is_zero() {
                continue;
            }
            out = out + wedge(&theta[i], &contact[j]).expect("degree 2").scale(&m.big_g[i][j]);
        }
    }
    out
}

/// Time form `dt = d⁰` on the phase chart.
pub fn time_form() -> PForm {
    PForm::basis(PHASE_DIM, 0)
}

/// `Λ = Gⁱʲ (∂ᵢ + Γᵢʰ ∂⁰ₕ) ∧ ∂⁰ⱼ`
pub fn lambda(m: &GalileiModel) -> Bivector {
    let gamma = phase_connection(m);
    let mut out = Bivector::zero(PHASE_DIM);
    for i in 1..4 {
        let mut horiz = VectorField::<Field>::basis(PHASE_DIM, i);
        for h in 1..4 {
            horiz.comps[velocity_var(h)] = gamma[i][h - 1].clone();
        }
        for j in 1..4 {
            let g = &m.big_g_inv[i - 1][j - 1];
            if g.is_zero() {
                continue;
            }
            out = out + Bivector::wedge(&horiz, &VectorField::basis(PHASE_DIM, velocity_var(j))).scale(g);
        }
    }
    out
}

/// `{f, g} = i(df ∧ dg) Λ`
pub fn poisson_bracket(m: &GalileiModel, f: &Field, g: &Field) -> Field {
    lambda(m).pair(f, g)
}

/// Closed coordinate expression
/// `{f,g} = Gⁱʲ(∂ᵢf ∂⁰ⱼg − ∂ᵢg ∂⁰ⱼf) − (Γⁱʲ − Γʲⁱ) ∂⁰ᵢf ∂⁰ⱼg` with `Γⁱʲ = Gⁱʰ Γₕʲ`.
pub fn poisson_bracket_coordinates(m: &GalileiModel, f: &Field, g: &Field) -> Field {
    let gamma = phase_connection(m);
    let up = |i: usize, j: usize| Field::sum((1..4).map(|h| &m.big_g_inv[i - 1][h - 1] * &gamma[h][j - 1]));
    let mut terms = Vec::new();
    for i in 1..4 {
        for j in 1..4 {
            let gij = &m.big_g_inv[i - 1][j - 1];
            if !gij.is_zero() {
                terms.push(gij * (f.diff(i) * g.diff(velocity_var(j)) - g.diff(i) * f.diff(velocity_var(j))));
            }
            let xi = up(i, j) - up(j, i);
            if !xi.is_zero() {
                terms.push(-(xi * f.diff(velocity_var(i)) * g.diff(velocity_var(j))));
            }
        }
    }
    Field::sum(terms)
}

/// `σ γ + i(df) Λ`
pub fn hamiltonian_lift(m: &GalileiModel, sigma: &Field, f: &Field) -> VectorField {
    gamma_field(m).scale(sigma) + lambda(m).sharp(f)
}

/// Pullback `o*Ω` of `Ω` along an observer, a closed spacetime 2-form.
pub fn observed_two_form(m: &GalileiModel, o: &super::model::GObserver) -> PForm {
    omega(m).pullback(&o.embedding(), 4)
}

/// The scalar `(dt ∧ Ω ∧ Ω ∧ Ω)(∂₀, ∂₁, ∂₂, ∂₃, ∂⁰₁, ∂⁰₂, ∂⁰₃)`.
pub fn volume_form(m: &GalileiModel) -> Field {
    let om = omega(m);
    let top = wedge(&wedge(&wedge(&time_form(), &om).unwrap(), &om).unwrap(), &om).unwrap();
    top.get(&[0, 1, 2, 3, 4, 5, 6])
}
