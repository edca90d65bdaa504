//! Checks on Einstein models: contact identities, connection,
//! cosymplectic structure, special brackets and orbits.

use rand::Rng;

use super::galilei_suites::{orbit_count, state_distance, ORBIT_DURATION, ORBIT_STEP};
use super::orbit::integrate_einstein;
use super::report::Bound;
use super::sampling::{
    einstein_points, einstein_points_in, random_polynomial, random_vector_field, spacetime_points, timelike_velocity,
};
use super::{max_over, HarnessError, Runner};
use crate::einstein::{
    contact_map, e_special_bracket, e_special_bracket_definitional_field, e_special_value, examples, gamma_field,
    hamiltonian_lift, horizontal_potential, lorentz_force_field, lorentz_gamma, observed_splitting_f, omega,
    poisson_bracket, poisson_bracket_coordinates, tau_form, time_form, velocity, volume_form, AdaptedFrames, EObserver,
    EPhasePoint, ESpecialFunction, EinsteinModel, TechnicalIdentities,
};
use crate::galilei::velocity_var;
use crate::modelspec::ChartBox;
use crate::smooth::{contract, exterior_derivative, lie_bracket, Evaluator, Field, PForm, VectorField};

pub(super) const IDENTITIES: &[&str] = &[
    "technical-identities",
    "contact-unit-norm",
    "time-form-on-contact",
    "connection-metric-parallel",
    "connection-torsion-free",
    "gamma-time-form",
    "gamma-omega-kernel",
    "omega-closed",
    "omega-horizontal-potential",
    "cosymplectic-volume",
    "lorentz-force-from-gamma",
    "observed-splitting-reconstruction",
];

pub(super) const BRACKETS: &[&str] = &[
    "poisson-coordinate-formula",
    "bracket-closed-form-vs-definition",
    "bracket-lift-morphism",
    "bracket-jacobi",
    "hamiltonian-lift-projectable",
    "hamiltonian-lift-non-special-witness",
    "golden-brackets",
];

const BRACKET_PAIRS: usize = 20;
const SMALL_SAMPLE: usize = 5;

pub(crate) fn random_special(rng: &mut impl Rng, chart: &ChartBox) -> ESpecialFunction {
    ESpecialFunction::new(random_vector_field(rng, 2, 0.5, chart), random_polynomial(rng, 2, 0.5, chart))
}

/// Phase function polynomial in the velocities with random spacetime
/// coefficients.
fn random_phase_function(rng: &mut impl Rng, chart: &ChartBox) -> Field {
    let v = |i| velocity(i);
    let monomials = [Field::one(), v(1), v(2), v(3), v(1) * v(1), v(2) * v(3)];
    Field::sum(monomials.into_iter().map(|mono| mono * random_polynomial(rng, 1, 0.5, chart)))
}

/// Chart observer followed by the model's observers.
pub(crate) fn observers(m: &EinsteinModel) -> Vec<EObserver> {
    let mut out = vec![EObserver::chart()];
    out.extend(m.observers.values().cloned());
    out
}

fn distance_over(a: &ESpecialFunction, b: &ESpecialFunction, xs: &[Vec<f64>]) -> Result<f64, HarnessError> {
    max_over(xs, |x| Ok(a.distance_at(b, x)?))
}

fn spacetime_part_distance(lift: &VectorField, want: &VectorField, p: &EPhasePoint) -> Result<f64, HarnessError> {
    let (mut ep, mut ex) = (Evaluator::new(p.coords()), Evaluator::new(p.x.to_vec()));
    max_over(0..4, |l| Ok((ep.eval(&lift.comps[l])? - ex.eval(&want.comps[l])?).abs()))
}

pub(super) fn identities(r: &mut Runner, m: &EinsteinModel) -> Result<(), HarnessError> {
    let chart = m.chart_box;
    let c = m.c();
    r.check("technical-identities", "contact splitting identities", 1e-8, Bound::Max, |rng, n| {
        let suite = TechnicalIdentities::new(m);
        max_over(einstein_points(rng, m, n)?, |p| max_over(suite.evaluate(m, &p)?, |id| Ok(id.residual)))
    })?;
    r.check("contact-unit-norm", "g(𝕕,𝕕) = −c²", 1e-9, Bound::Max, |rng, n| {
        max_over(einstein_points(rng, m, n)?, |p| {
            let d = contact_map(m, &p)?;
            let mut ev = Evaluator::new(p.x.to_vec());
            let mut norm = 0.0;
            for l in 0..4 {
                for mu in 0..4 {
                    norm += ev.eval(&m.g[l][mu])? * d[l] * d[mu];
                }
            }
            Ok((norm + c * c).abs())
        })
    })?;
    r.check("time-form-on-contact", "τ(𝕕) = 1", 1e-9, Bound::Max, |rng, n| {
        max_over(einstein_points(rng, m, n)?, |p| {
            let (d, tau) = (contact_map(m, &p)?, time_form(m, &p)?);
            Ok(((0..4).map(|l| d[l] * tau[l]).sum::<f64>() - 1.0).abs())
        })
    })?;
    r.check("connection-metric-parallel", "∇g = 0", 1e-8, Bound::Max, |rng, n| {
        max_over(spacetime_points(rng, &chart, n), |x| Ok(m.metric_compatibility_residual(&x)?))
    })?;
    r.check("connection-torsion-free", "K_λ^ν_μ = K_μ^ν_λ", 1e-8, Bound::Max, |rng, n| {
        max_over(spacetime_points(rng, &chart, n), |x| Ok(m.torsion_residual(&x)?))
    })?;
    let gamma = gamma_field(m);
    let om = omega(m);
    r.check("gamma-time-form", "i(γ)τ = 1", 1e-9, Bound::Max, |rng, n| {
        let t = contract(&gamma, &tau_form(m)).expect("1-form").get(&[]);
        max_over(einstein_points(rng, m, n)?, |p| Ok((t.value(&p.coords())? - 1.0).abs()))
    })?;
    r.check("gamma-omega-kernel", "i(γ)Ω = 0", 1e-8, Bound::Max, |rng, n| {
        let k = contract(&gamma, &om).expect("2-form");
        max_over(einstein_points(rng, m, n)?, |p| Ok(k.max_abs_at(&p.coords())?))
    })?;
    r.check("omega-closed", "dΩ = 0", 1e-7, Bound::Max, |rng, n| {
        let d = exterior_derivative(&om).expect("below top degree");
        max_over(einstein_points(rng, m, n)?, |p| Ok(d.max_abs_at(&p.coords())?))
    })?;
    r.check("omega-horizontal-potential", "dA↑ = Ω", 1e-8, Bound::Max, |rng, n| {
        let defect = exterior_derivative(&horizontal_potential(m)).expect("1-form") - om.clone();
        max_over(einstein_points(rng, m, n)?, |p| Ok(defect.max_abs_at(&p.coords())?))
    })?;
    r.check("cosymplectic-volume", "|Θ∧Ω³| > 0", 1e-6, Bound::Min, |rng, n| {
        let vol = volume_form(m);
        let mut least = f64::INFINITY;
        for p in einstein_points(rng, m, n)? {
            least = least.min(vol.value(&p.coords())?.abs());
        }
        Ok(least)
    })?;
    r.check("lorentz-force-from-gamma", "f⃗ = (m/q) cα⁰ γ^e", 1e-8, Bound::Max, |rng, n| {
        let grav = gamma_field(&EinsteinModel { f_em: PForm::zero(4, 2), ..m.clone() });
        let frames = AdaptedFrames::new(m);
        let force = lorentz_force_field(m);
        let lor = lorentz_gamma(m);
        max_over(einstein_points(rng, m, n)?, |p| {
            let mut ev = Evaluator::new(p.coords());
            let alpha = ev.eval(&m.contact.alpha)?;
            let mut worst: f64 = 0.0;
            let mut via_gamma = [0.0; 4];
            for i in 1..4 {
                let ge = ev.eval(&gamma.comps[velocity_var(i)])? - ev.eval(&grav.comps[velocity_var(i)])?;
                worst = worst.max((ge - ev.eval(&lor[i - 1])?).abs());
                for (lam, slot) in via_gamma.iter_mut().enumerate() {
                    *slot += (m.m() / m.q()) * c * alpha * ge * ev.eval(&frames.b[i][lam])?;
                }
            }
            for (lam, want) in via_gamma.iter().enumerate() {
                worst = worst.max((want - ev.eval(&force[lam])?).abs());
            }
            Ok(worst)
        })
    })?;
    r.check("observed-splitting-reconstruction", "F = −τ∧E♭ + (1/c) i(B)η", 1e-8, Bound::Max, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        max_over(observers(m), |o| {
            let defect = observed_splitting_f(m, &o).reconstruct(m) - m.f_em.clone();
            max_over(&xs, |x| Ok(defect.max_abs_at(x)?))
        })
    })?;
    Ok(())
}

pub(super) fn brackets(r: &mut Runner, m: &EinsteinModel) -> Result<(), HarnessError> {
    let chart = m.chart_box;
    r.check("poisson-coordinate-formula", "{f,g} = i(df∧dg)Λ in coordinates", 1e-8, Bound::Max, |rng, n| {
        let pts = einstein_points(rng, m, n)?;
        max_over(0..SMALL_SAMPLE, |_| {
            let (f, g) = (random_phase_function(rng, &chart), random_phase_function(rng, &chart));
            let (a, b) = (poisson_bracket(m, &f, &g), poisson_bracket_coordinates(m, &f, &g));
            max_over(&pts, |p| {
                let mut ev = Evaluator::new(p.coords());
                Ok((ev.eval(&a)? - ev.eval(&b)?).abs())
            })
        })
    })?;
    r.check(
        "bracket-closed-form-vs-definition",
        "⟦f,g⟧ = {f,g} + σ[f]γ.g − σ[g]γ.f",
        1e-7,
        Bound::Max,
        |rng, n| {
            let pts = einstein_points(rng, m, n)?;
            max_over(0..BRACKET_PAIRS, |_| {
                let (f, g) = (random_special(rng, &chart), random_special(rng, &chart));
                let closed = e_special_bracket(m, &f, &g);
                let def = e_special_bracket_definitional_field(m, &f, &g);
                max_over(&pts, |p| Ok((e_special_value(m, &closed, p)? - def.value(&p.coords())?).abs()))
            })
        },
    )?;
    r.check("bracket-lift-morphism", "X[⟦f,g⟧] = [X[f], X[g]]", 1e-8, Bound::Max, |rng, n| {
        let pts = einstein_points(rng, m, n)?;
        max_over(0..SMALL_SAMPLE, |_| {
            let (f, g) = (random_special(rng, &chart), random_special(rng, &chart));
            let def = e_special_bracket_definitional_field(m, &f, &g);
            let want = lie_bracket(&f.x, &g.x).expect("spacetime fields");
            let sigma = ESpecialFunction::new(want.clone(), Field::zero()).time_scale(m);
            let lift = hamiltonian_lift(m, &sigma, &def);
            max_over(&pts, |p| spacetime_part_distance(&lift, &want, p))
        })
    })?;
    r.check("bracket-jacobi", "⟦f,⟦g,h⟧⟧ + cyclic = 0", 1e-8, Bound::Max, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        let zero = ESpecialFunction::spacetime(Field::zero());
        max_over(0..SMALL_SAMPLE, |_| {
            let [f, g, h] = [(); 3].map(|_| random_special(rng, &chart));
            let br = |a: &ESpecialFunction, b: &ESpecialFunction| e_special_bracket(m, a, b);
            let parts = [br(&f, &br(&g, &h)), br(&g, &br(&h, &f)), br(&h, &br(&f, &g))];
            let sum = ESpecialFunction::new(
                VectorField::new((0..4).map(|l| Field::sum(parts.iter().map(|p| p.x.comps[l].clone()))).collect()),
                Field::sum(parts.iter().map(|p| p.fbar.clone())),
            );
            distance_over(&sum, &zero, &xs)
        })
    })?;
    r.check("hamiltonian-lift-projectable", "Tπ(X_f) = X[f] for all velocities", 1e-8, Bound::Max, |rng, n| {
        let pts = einstein_points(rng, m, n)?;
        max_over(0..SMALL_SAMPLE, |_| {
            let f = random_special(rng, &chart);
            let lift = hamiltonian_lift(m, &f.time_scale(m), &f.phase_function(m));
            max_over(&pts, |p| spacetime_part_distance(&lift, &f.x, p))
        })
    })?;
    r.check(
        "hamiltonian-lift-non-special-witness",
        "f = (x¹₀)³ has a velocity-dependent projection",
        1e-3,
        Bound::Min,
        |rng, _| {
            let lift = hamiltonian_lift(m, &Field::zero(), &velocity(1).powi(3));
            let region = chart.shrunk(0.5);
            let p = einstein_points_in(rng, m, &region, 1)?.remove(0);
            let mut spread: f64 = 0.0;
            let base = lift.at(&p.coords())?;
            for _ in 0..4 {
                if let Some(v) = timelike_velocity(rng, m, p.x)? {
                    let other = lift.at(&EPhasePoint::new(p.x, v).coords())?;
                    for l in 0..4 {
                        spread = spread.max((base.comps[l] - other.comps[l]).abs());
                    }
                }
            }
            Ok(spread)
        },
    )?;
    r.check(
        "golden-brackets",
        "⟦x^λ,x^μ⟧ = 0, ⟦x^λ,ℋ₀⟧ = −δ^λ₀, ⟦x^λ,𝒫ᵢ⟧ = δ^λᵢ, ⟦ℋ₀,𝒫ᵢ⟧ = 0",
        1e-10,
        Bound::Max,
        |rng, n| {
            let xs = spacetime_points(rng, &chart, n);
            let constant = |c: f64| ESpecialFunction::spacetime(Field::constant(c));
            let h = examples::hamiltonian(m);
            let mut worst: f64 = 0.0;
            for lam in 0..4 {
                let x = ESpecialFunction::coordinate(lam);
                for mu in 0..4 {
                    let b = e_special_bracket(m, &x, &ESpecialFunction::coordinate(mu));
                    worst = worst.max(distance_over(&b, &constant(0.0), &xs)?);
                }
                let b = e_special_bracket(m, &x, &h);
                worst = worst.max(distance_over(&b, &constant(if lam == 0 { -1.0 } else { 0.0 }), &xs)?);
                for i in 1..4 {
                    let b = e_special_bracket(m, &x, &examples::momentum(m, i));
                    worst = worst.max(distance_over(&b, &constant(if lam == i { 1.0 } else { 0.0 }), &xs)?);
                }
            }
            for i in 1..4 {
                let b = e_special_bracket(m, &h, &examples::momentum(m, i));
                worst = worst.max(distance_over(&b, &constant(0.0), &xs)?);
            }
            Ok(worst)
        },
    )?;
    Ok(())
}

pub(super) fn orbits(r: &mut Runner, m: &EinsteinModel) -> Result<(), HarnessError> {
    let region = m.chart_box.shrunk(0.5);
    r.check("orbit-law-of-motion", "j₂s = γ ∘ j₁s in proper time", 1e-5, Bound::Max, |rng, n| {
        max_over(einstein_points_in(rng, m, &region, orbit_count(n))?, |p| {
            Ok(integrate_einstein(m, &p, ORBIT_DURATION, ORBIT_STEP)?.max_law_residual())
        })
    })?;
    r.check("orbit-time-reversal", "backward flow returns to the start", 1e-8, Bound::Max, |rng, n| {
        max_over(einstein_points_in(rng, m, &region, orbit_count(n))?, |p| {
            let end = *integrate_einstein(m, &p, ORBIT_DURATION, ORBIT_STEP)?.trajectory.last();
            let back = EPhasePoint::new([end[0], end[1], end[2], end[3]], [end[4], end[5], end[6]]);
            let home = *integrate_einstein(m, &back, -ORBIT_DURATION, ORBIT_STEP)?.trajectory.last();
            Ok(state_distance(&home, &p.coords()))
        })
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{run_suite_on, LoadedModel, RunConfig};

    #[test]
    fn shipped_einstein_suites_pass() {
        for src in [
            include_str!("../../models/minkowski_uniformF.model"),
            include_str!("../../models/schwarzschild_like.model"),
        ] {
            let m = LoadedModel::from_source(src).unwrap();
            for suite in ["einstein-identities", "einstein-brackets", "orbits"] {
                let r = run_suite_on(&m, suite, &RunConfig::new(4, 11)).unwrap();
                let bad: Vec<_> = r.failures().collect();
                assert!(bad.is_empty(), "{suite} on {}: {bad:?}", r.model);
            }
        }
    }
}
