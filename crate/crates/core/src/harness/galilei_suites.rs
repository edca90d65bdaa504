//! Checks on Galilei models: connection, cosymplectic structure, special
//! brackets and orbits.

use rand::Rng;

use super::orbit::integrate_galilei;
use super::report::Bound;
use super::sampling::{chart_point, galilei_points, random_polynomial, spacetime_points};
use super::{max_over, HarnessError, Runner};
use crate::galilei::{
    dynamical_gamma, examples, gamma_field, hamiltonian_lift, lorentz_gamma, lorentz_phase_connection, observed_phi,
    observed_potential, omega, phase_connection, special_bracket, special_bracket_definitional,
    special_bracket_observed, special_value, time_form, velocity, volume_form, GObserver, GPhasePoint,
    GSpecialFunction, GalileiModel,
};
use crate::modelspec::ChartBox;
use crate::smooth::{contract, exterior_derivative, lie_bracket, Evaluator, Field, PForm, VectorField};

pub(super) const CORE: &[&str] = &[
    "connection-time-form-parallel",
    "connection-metric-parallel",
    "connection-torsion-free",
    "gamma-time-form",
    "gamma-omega-kernel",
    "omega-closed",
    "cosymplectic-volume",
    "lorentz-gamma-split",
    "observed-potential-curvature",
];

pub(super) const BRACKETS: &[&str] = &[
    "bracket-closed-form-vs-definition",
    "bracket-lift-morphism",
    "bracket-jacobi",
    "hamiltonian-lift-projectable",
    "hamiltonian-lift-non-special-witness",
    "bracket-observer-independence",
    "golden-brackets",
];

/// Random special phase functions drawn per bracket check.
const BRACKET_PAIRS: usize = 20;
const SMALL_SAMPLE: usize = 5;

pub(crate) fn random_special(rng: &mut impl Rng, chart: &ChartBox) -> GSpecialFunction {
    GSpecialFunction::new(
        random_polynomial(rng, 1, 0.5, chart),
        (0..3).map(|_| random_polynomial(rng, 2, 0.5, chart)).collect(),
        random_polynomial(rng, 2, 0.5, chart),
    )
}

/// Observer with random quadratic polynomial components.
pub(crate) fn random_observer(rng: &mut impl Rng, chart: &ChartBox) -> GObserver {
    GObserver::new("random", (0..3).map(|_| random_polynomial(rng, 2, 0.5, chart)).collect())
}

/// Chart observer, the model's observers, then one random observer.
pub(crate) fn observers(rng: &mut impl Rng, m: &GalileiModel) -> Vec<GObserver> {
    let mut out = vec![GObserver::chart()];
    out.extend(m.observers.values().cloned());
    out.push(random_observer(rng, &m.chart_box));
    out
}

fn distance_over(a: &GSpecialFunction, b: &GSpecialFunction, xs: &[Vec<f64>]) -> Result<f64, HarnessError> {
    max_over(xs, |x| Ok(a.distance_at(b, x)?))
}

fn vector_distance(a: &VectorField, b: &VectorField, p: &[f64], x: &[f64]) -> Result<f64, HarnessError> {
    let (mut ea, mut eb) = (Evaluator::new(p.to_vec()), Evaluator::new(x.to_vec()));
    max_over(a.comps.iter().zip(&b.comps), |(u, w)| Ok((ea.eval(u)? - eb.eval(w)?).abs()))
}

pub(super) fn core(r: &mut Runner, m: &GalileiModel) -> Result<(), HarnessError> {
    let chart = m.chart_box;
    r.check("connection-time-form-parallel", "∇dt = 0", 1e-8, Bound::Max, |rng, n| {
        max_over(spacetime_points(rng, &chart, n), |x| Ok(m.time_form_residual(&x)?))
    })?;
    r.check("connection-metric-parallel", "∇g = 0", 1e-8, Bound::Max, |rng, n| {
        max_over(spacetime_points(rng, &chart, n), |x| Ok(m.metric_compatibility_residual(&x)?))
    })?;
    r.check("connection-torsion-free", "K_λ^ν_μ = K_μ^ν_λ", 1e-8, Bound::Max, |rng, n| {
        max_over(spacetime_points(rng, &chart, n), |x| Ok(m.torsion_residual(&x)?))
    })?;
    let gamma = gamma_field(m);
    r.check("gamma-time-form", "i(γ)dt = 1", 1e-9, Bound::Max, |rng, n| {
        let dt = contract(&gamma, &time_form()).expect("1-form").get(&[]);
        max_over(galilei_points(rng, &chart, n), |p| Ok((dt.value(&p.coords())? - 1.0).abs()))
    })?;
    let om = omega(m);
    r.check("gamma-omega-kernel", "i(γ)Ω = 0", 1e-8, Bound::Max, |rng, n| {
        let k = contract(&gamma, &om).expect("2-form");
        max_over(galilei_points(rng, &chart, n), |p| Ok(k.max_abs_at(&p.coords())?))
    })?;
    r.check("omega-closed", "dΩ = 0", 1e-7, Bound::Max, |rng, n| {
        let d = exterior_derivative(&om).expect("below top degree");
        max_over(galilei_points(rng, &chart, n), |p| Ok(d.max_abs_at(&p.coords())?))
    })?;
    r.check("cosymplectic-volume", "|dt∧Ω³| > 0", 1e-6, Bound::Min, |rng, n| {
        let vol = volume_form(m);
        let mut least = f64::INFINITY;
        for p in galilei_points(rng, &chart, n) {
            least = least.min(vol.value(&p.coords())?.abs());
        }
        Ok(least)
    })?;
    r.check(
        "lorentz-gamma-split",
        "γ = γ♮ + γ^e, Γ = Γ♮ + Γ^e, Ω = Ω♮ + (q/ℏ)F",
        1e-8,
        Bound::Max,
        |rng, n| {
            let grav = m.gravitational_part();
            let (full, bare, lor) = (dynamical_gamma(m), dynamical_gamma(&grav), lorentz_gamma(m));
            let (cf, cb, ce) = (phase_connection(m), phase_connection(&grav), lorentz_phase_connection(m));
            let f = m.f_em.scale(&Field::constant(m.constants.q_over_hbar()));
            let om_diff = om.clone() - omega(&grav);
            max_over(galilei_points(rng, &chart, n), |p| {
                let c = p.coords();
                let mut ev = Evaluator::new(c.clone());
                let mut worst: f64 = 0.0;
                for i in 0..3 {
                    worst = worst.max((ev.eval(&full[i])? - ev.eval(&bare[i])? - ev.eval(&lor[i])?).abs());
                    for lam in 0..4 {
                        worst =
                            worst.max((ev.eval(&cf[lam][i])? - ev.eval(&cb[lam][i])? - ev.eval(&ce[lam][i])?).abs());
                    }
                }
                for l in 0..4 {
                    for mu in l + 1..4 {
                        worst = worst.max((ev.eval(&om_diff.get(&[l, mu]))? - f.get(&[l, mu]).value(&p.x)?).abs());
                    }
                }
                Ok(worst)
            })
        },
    )?;
    r.check("observed-potential-curvature", "dA[o] = Φ[o]", 1e-8, Bound::Max, |rng, n| {
        let obs = observers(rng, m);
        let xs = spacetime_points(rng, &chart, n);
        max_over(&obs, |o| {
            let da = exterior_derivative(&PForm::one_form(observed_potential(m, o))).expect("1-form");
            let defect = da - observed_phi(m, o);
            max_over(&xs, |x| Ok(defect.max_abs_at(x)?))
        })
    })?;
    Ok(())
}

pub(super) fn brackets(r: &mut Runner, m: &GalileiModel) -> Result<(), HarnessError> {
    let chart = m.chart_box;
    let chart_o = GObserver::chart();
    r.check(
        "bracket-closed-form-vs-definition",
        "⟦f,g⟧ = {f,g} + f''γ.g − g''γ.f",
        1e-8,
        Bound::Max,
        |rng, n| {
            let pts = galilei_points(rng, &chart, n);
            max_over(0..BRACKET_PAIRS, |_| {
                let (f, g) = (random_special(rng, &chart), random_special(rng, &chart));
                let closed = special_bracket(m, &f, &g);
                let def = special_bracket_definitional(m, &f, &g);
                max_over(&pts, |p| Ok((special_value(m, &closed, p, &chart_o)? - def.value(&p.coords())?).abs()))
            })
        },
    )?;
    r.check("bracket-lift-morphism", "X[⟦f,g⟧] = [X[f], X[g]]", 1e-8, Bound::Max, |rng, n| {
        let pts = galilei_points(rng, &chart, n);
        max_over(0..SMALL_SAMPLE, |_| {
            let (f, g) = (random_special(rng, &chart), random_special(rng, &chart));
            let def = special_bracket_definitional(m, &f, &g);
            let sigma = special_bracket(m, &f, &g).f0;
            let lift = hamiltonian_lift(m, &sigma, &def);
            let want = lie_bracket(&f.tangent_lift(), &g.tangent_lift()).expect("spacetime fields");
            let lift4 = VectorField::new(lift.comps[..4].to_vec());
            max_over(&pts, |p| vector_distance(&lift4, &want, &p.coords(), &p.x))
        })
    })?;
    r.check("bracket-jacobi", "⟦f,⟦g,h⟧⟧ + cyclic = 0", 1e-8, Bound::Max, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        let zero = GSpecialFunction::spacetime(Field::zero());
        max_over(0..SMALL_SAMPLE, |_| {
            let [f, g, h] = [(); 3].map(|_| random_special(rng, &chart));
            let br = |a: &GSpecialFunction, b: &GSpecialFunction| special_bracket(m, a, b);
            let parts = [br(&f, &br(&g, &h)), br(&g, &br(&h, &f)), br(&h, &br(&f, &g))];
            let sum = GSpecialFunction::new(
                Field::sum(parts.iter().map(|p| p.f0.clone())),
                (0..3).map(|i| Field::sum(parts.iter().map(|p| p.fi[i].clone()))).collect(),
                Field::sum(parts.iter().map(|p| p.fbar.clone())),
            );
            distance_over(&sum, &zero, &xs)
        })
    })?;
    r.check("hamiltonian-lift-projectable", "Tπ(X_f) = X[f] for all velocities", 1e-8, Bound::Max, |rng, n| {
        let pts = galilei_points(rng, &chart, n);
        max_over(0..SMALL_SAMPLE, |_| {
            let f = random_special(rng, &chart);
            let lift = hamiltonian_lift(m, &f.f0, &f.phase_function(m));
            let lift4 = VectorField::new(lift.comps[..4].to_vec());
            max_over(&pts, |p| vector_distance(&lift4, &f.tangent_lift(), &p.coords(), &p.x))
        })
    })?;
    r.check(
        "hamiltonian-lift-non-special-witness",
        "f = (x¹₀)³ has a velocity-dependent projection",
        1e-3,
        Bound::Min,
        |rng, _| {
            let lift = hamiltonian_lift(m, &Field::zero(), &velocity(1).powi(3));
            let x = chart_point(rng, &chart.shrunk(0.5));
            let a = lift.at(&GPhasePoint::new(x, [0.0, 0.0, 0.0]).coords())?;
            let b = lift.at(&GPhasePoint::new(x, [1.0, -0.5, 0.5]).coords())?;
            Ok((0..4).map(|l| (a.comps[l] - b.comps[l]).abs()).fold(0.0, f64::max))
        },
    )?;
    r.check(
        "bracket-observer-independence",
        "⟦f,g⟧ via Φ[o] = ⟦f,g⟧ via Φ[o₀]",
        1e-8,
        Bound::Max,
        |rng, n| {
            let obs = observers(rng, m);
            let xs = spacetime_points(rng, &chart, n);
            max_over(0..SMALL_SAMPLE, |_| {
                let (f, g) = (random_special(rng, &chart), random_special(rng, &chart));
                let reference = special_bracket(m, &f, &g);
                max_over(&obs, |o| distance_over(&special_bracket_observed(m, &f, &g, o), &reference, &xs))
            })
        },
    )?;
    r.check(
        "golden-brackets",
        "⟦x^λ,x^μ⟧ = 0, ⟦x^λ,𝒫ᵢ⟧ = δ^λᵢ, ⟦ℋ₀,𝒫ᵢ⟧ = 0",
        1e-10,
        Bound::Max,
        |rng, n| {
            let xs = spacetime_points(rng, &chart, n);
            let constant = |c: f64| GSpecialFunction::spacetime(Field::constant(c));
            let h = examples::hamiltonian(m, &chart_o);
            let mut worst: f64 = 0.0;
            for lam in 0..4 {
                let x = GSpecialFunction::coordinate(lam);
                for mu in 0..4 {
                    worst = worst.max(distance_over(
                        &special_bracket(m, &x, &GSpecialFunction::coordinate(mu)),
                        &constant(0.0),
                        &xs,
                    )?);
                }
                for i in 1..4 {
                    let b = special_bracket(m, &x, &examples::momentum(m, &chart_o, i));
                    worst = worst.max(distance_over(&b, &constant(if lam == i { 1.0 } else { 0.0 }), &xs)?);
                }
            }
            for i in 1..4 {
                let b = special_bracket(m, &h, &examples::momentum(m, &chart_o, i));
                worst = worst.max(distance_over(&b, &constant(0.0), &xs)?);
            }
            Ok(worst)
        },
    )?;
    Ok(())
}

/// Orbit duration and step used by the orbit suite.
pub(super) const ORBIT_DURATION: f64 = 0.1;
pub(super) const ORBIT_STEP: f64 = 1e-3;

pub(super) fn orbit_count(points: usize) -> usize {
    points.clamp(1, SMALL_SAMPLE)
}

pub(super) fn state_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, w)| (u - w).abs()).fold(0.0, f64::max)
}

pub(super) fn orbits(r: &mut Runner, m: &GalileiModel) -> Result<(), HarnessError> {
    let starts = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| -> Vec<GPhasePoint> {
        (0..orbit_count(n))
            .map(|_| {
                let x = chart_point(rng, &m.chart_box.shrunk(0.5));
                GPhasePoint::new(x, [(); 3].map(|_| rng.gen_range(-0.5..=0.5)))
            })
            .collect()
    };
    r.check("orbit-law-of-motion", "d²xⁱ/dt² = γⁱ(x, ẋ)", 1e-5, Bound::Max, |rng, n| {
        max_over(starts(rng, n), |p| Ok(integrate_galilei(m, &p, ORBIT_DURATION, ORBIT_STEP)?.max_law_residual()))
    })?;
    r.check("orbit-time-reversal", "backward flow returns to the start", 1e-8, Bound::Max, |rng, n| {
        max_over(starts(rng, n), |p| {
            let end = *integrate_galilei(m, &p, ORBIT_DURATION, ORBIT_STEP)?.trajectory.last();
            let back = GPhasePoint::new([end[0], end[1], end[2], end[3]], [end[4], end[5], end[6]]);
            let home = *integrate_galilei(m, &back, -ORBIT_DURATION, ORBIT_STEP)?.trajectory.last();
            Ok(state_distance(&home, &p.coords()))
        })
    })?;
    Ok(())
}
