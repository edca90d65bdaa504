//! Classical mechanics on a Galilei spacetime: the phase chart, the joined
//! gravitational and electromagnetic connection, the cosymplectic pair
//! `(dt, Ω)`, the Poisson structure `Λ` and the special bracket of special
//! phase functions.

mod model;
mod phase;
mod special;

pub use model::{
    joined_connection, velocity_var, ConnectionCoefficients, GObserver, GPhasePoint, GalileiModel, PHASE_DIM,
};
pub use phase::{
    dynamical_gamma, gamma_field, hamiltonian_lift, lambda, lorentz_gamma, lorentz_phase_connection, observed_two_form,
    omega, phase_connection, poisson_bracket, poisson_bracket_coordinates, time_form, velocity, volume_form,
};
pub use special::{
    chart_potential, examples, observed_phi, observed_potential, special_bracket, special_bracket_definitional,
    special_bracket_observed, special_bracket_with, special_value, transition_potential, GSpecialFunction,
    ObservedComponents,
};

use crate::modelspec::{parse_model, ModelError};

/// Names of the invariants this module certifies.
pub const INVARIANTS: &[&str] = &[
    "gamma-time-form",
    "gamma-omega-kernel",
    "omega-closed",
    "cosymplectic-volume",
    "lorentz-gamma-split",
    "observed-potential-curvature",
    "connection-time-form-parallel",
    "connection-metric-parallel",
    "connection-torsion-free",
    "bracket-closed-form-vs-definition",
    "bracket-lift-morphism",
    "bracket-jacobi",
    "hamiltonian-lift-projectable",
    "hamiltonian-lift-non-special-witness",
    "bracket-observer-independence",
];

impl GalileiModel {
    /// Parses, compiles and validates a model file's text.
    pub fn from_source(src: &str) -> Result<GalileiModel, ModelError> {
        let compiled = parse_model(src)?.compile()?;
        compiled.validate()?;
        GalileiModel::from_compiled(compiled)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::{contract, exterior_derivative, Evaluator, Field, PForm};

    fn flat() -> GalileiModel {
        GalileiModel::from_source(include_str!("../../models/flat_galilei.model")).unwrap()
    }

    fn uniform_b() -> GalileiModel {
        GalileiModel::from_source(include_str!("../../models/uniform_b_galilei.model")).unwrap()
    }

    fn curved() -> GalileiModel {
        GalileiModel::from_source(include_str!("../../models/curved_galilei.model")).unwrap()
    }

    const X: [f64; 4] = [0.1, 0.3, -0.2, 0.25];
    const V: [f64; 3] = [0.7, -0.4, 0.3];

    fn phase_point() -> Vec<f64> {
        GPhasePoint::new(X, V).coords()
    }

    #[test]
    fn flat_connection_vanishes() {
        let m = flat();
        for row in &m.k.k {
            for col in row {
                assert!(col.iter().all(Field::is_zero));
            }
        }
        assert!(dynamical_gamma(&m).iter().all(Field::is_zero));
    }

    #[test]
    fn uniform_b_connection_entries() {
        let m = uniform_b();
        // K₂¹₀ = −½ G¹¹ Φ₂₁ = ½ (ℏ/m)(q/ℏ) B = qB/(2m)
        let expect = 1.5 * 0.8 / (2.0 * 2.0);
        assert!((m.k.get(2, 1, 0).value(&X).unwrap() - expect).abs() < 1e-15);
        assert!(m.k.get(1, 1, 0).value(&X).unwrap().abs() < 1e-15);
    }

    #[test]
    fn cyclotron_acceleration() {
        // γ at velocity (v,0,0): second component −(q/m) B v
        let m = uniform_b();
        let p = GPhasePoint::new(X, [0.9, 0.0, 0.0]).coords();
        let gamma = dynamical_gamma(&m);
        assert!((gamma[1].value(&p).unwrap() + 1.5 / 2.0 * 0.8 * 0.9).abs() < 1e-14);
        assert!(gamma[0].value(&p).unwrap().abs() < 1e-15);
    }

    #[test]
    fn electromagnetic_split_matches_independent_formulas() {
        let m = curved();
        let grav = m.gravitational_part();
        let p = phase_point();
        let (full, bare, lor) = (dynamical_gamma(&m), dynamical_gamma(&grav), lorentz_gamma(&m));
        for i in 0..3 {
            let d = full[i].value(&p).unwrap() - bare[i].value(&p).unwrap() - lor[i].value(&p).unwrap();
            assert!(d.abs() < 1e-12);
        }
        let (gf, gb, ge) = (phase_connection(&m), phase_connection(&grav), lorentz_phase_connection(&m));
        for lam in 0..4 {
            for i in 0..3 {
                let d = gf[lam][i].value(&p).unwrap() - gb[lam][i].value(&p).unwrap() - ge[lam][i].value(&p).unwrap();
                assert!(d.abs() < 1e-12);
            }
        }
        // Ω − Ω♮ = (q/ℏ) F on the spacetime block
        let f = m.f_em.scale(&Field::constant(m.constants.q_over_hbar()));
        let diff = omega(&m) - omega(&grav);
        for l in 0..4 {
            for mu in l + 1..4 {
                let d = diff.get(&[l, mu]).value(&p).unwrap() - f.get(&[l, mu]).value(&X).unwrap();
                assert!(d.abs() < 1e-12);
            }
        }
        // Λ^e = (q/2ℏ) Gⁱʰ Gʲᵏ F_hk ∂⁰ᵢ∧∂⁰ⱼ
        let (lf, lb) = (lambda(&m), lambda(&grav));
        let mut ev = Evaluator::new(p.clone());
        for i in 1..4 {
            for j in 1..4 {
                let got = ev.eval(&lf.comps[velocity_var(i)][velocity_var(j)]).unwrap()
                    - ev.eval(&lb.comps[velocity_var(i)][velocity_var(j)]).unwrap();
                let mut want = 0.0;
                for h in 1..4 {
                    for k in 1..4 {
                        want += ev.eval(&m.big_g_inv[i - 1][h - 1]).unwrap()
                            * ev.eval(&m.big_g_inv[j - 1][k - 1]).unwrap()
                            * ev.eval(&m.f_em.get(&[h, k])).unwrap();
                    }
                }
                assert!((got - m.constants.q_over_hbar() * want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn connection_certified_on_curved_model() {
        let m = curved();
        assert!(m.metric_compatibility_residual(&X).unwrap() < 1e-12);
        assert!(m.time_form_residual(&X).unwrap() == 0.0);
        assert!(m.torsion_residual(&X).unwrap() < 1e-14);
    }

    #[test]
    fn cosymplectic_identities() {
        for m in [flat(), uniform_b(), curved()] {
            let p = phase_point();
            let om = omega(&m);
            let gamma = gamma_field(&m);
            assert!(exterior_derivative(&om).unwrap().max_abs_at(&p).unwrap() < 1e-12);
            assert!(contract(&gamma, &om).unwrap().max_abs_at(&p).unwrap() < 1e-12);
            assert_eq!(contract(&gamma, &time_form()).unwrap().get(&[]).value(&p).unwrap(), 1.0);
        }
        let flat_volume = volume_form(&flat()).value(&phase_point()).unwrap();
        assert!((flat_volume.abs() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn flat_omega_and_lambda() {
        let m = flat();
        let om = omega(&m);
        assert_eq!(om.get(&[velocity_var(1), 1]).as_constant(), Some(1.0));
        let lam = lambda(&m);
        assert_eq!(lam.comps[1][velocity_var(1)].as_constant(), Some(1.0));
        assert!(lam.comps[velocity_var(1)][velocity_var(2)].is_zero());
    }

    #[test]
    fn poisson_canonical_pair_and_coordinate_formula() {
        let m = flat();
        let p = phase_point();
        let x1 = Field::var(1);
        let mom = GSpecialFunction::new(Field::zero(), vec![Field::one(), Field::zero(), Field::zero()], Field::zero())
            .phase_function(&m);
        assert_eq!(poisson_bracket(&m, &x1, &mom).value(&p).unwrap(), 1.0);
        let c = curved();
        let f = Field::var(1) * velocity(2) + velocity(1).powi(2) * Field::var(0).sin();
        let g = velocity(3) * Field::var(2) + Field::var(3) * velocity(1) * velocity(2);
        let a = poisson_bracket(&c, &f, &g).value(&p).unwrap();
        let b = poisson_bracket_coordinates(&c, &f, &g).value(&p).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!(poisson_bracket(&c, &f, &f).value(&p).unwrap().abs() < 1e-14);
    }

    #[test]
    fn hamiltonian_lift_of_momentum() {
        let m = flat();
        let mom = examples::momentum(&m, &GObserver::chart(), 1).phase_function(&m);
        let x = hamiltonian_lift(&m, &Field::zero(), &mom);
        let at = x.at(&phase_point()).unwrap();
        assert_eq!(at.comps[1], -1.0);
        assert!(at.comps.iter().enumerate().all(|(i, c)| i == 1 || *c == 0.0));
    }

    #[test]
    fn tangent_lifts_of_examples() {
        let m = uniform_b();
        let o = GObserver::chart();
        assert!(GSpecialFunction::coordinate(2).tangent_lift().comps.iter().all(Field::is_zero));
        let h = examples::hamiltonian(&m, &o).tangent_lift();
        assert_eq!(h.comps[0].as_constant(), Some(1.0));
        assert!(h.comps[1..].iter().all(Field::is_zero));
        let c = examples::casimir(&m, &o).tangent_lift();
        let a = observed_potential(&m, &o);
        let up = m.raise(&a[1..]);
        for i in 0..3 {
            let d = c.comps[i + 1].value(&X).unwrap() + 2.0 * up[i].value(&X).unwrap();
            assert!(d.abs() < 1e-14);
        }
    }

    #[test]
    fn golden_brackets() {
        let m = uniform_b();
        let o = GObserver::chart();
        for lam in 0..4 {
            for mu in 0..4 {
                let b = special_bracket(&m, &GSpecialFunction::coordinate(lam), &GSpecialFunction::coordinate(mu));
                assert!(b.fbar.is_zero() && b.f0.is_zero());
            }
            for i in 1..4 {
                let b = special_bracket(&m, &GSpecialFunction::coordinate(lam), &examples::momentum(&m, &o, i));
                assert_eq!(b.fbar.value(&X).unwrap(), if lam == i { 1.0 } else { 0.0 });
            }
        }
        for i in 1..4 {
            let b = special_bracket(&m, &examples::hamiltonian(&m, &o), &examples::momentum(&m, &o, i));
            assert!(b.distance_at(&GSpecialFunction::spacetime(Field::zero()), &X).unwrap() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_definition() {
        let m = curved();
        let f = GSpecialFunction::new(
            Field::var(1) * 0.3 + 1.0,
            vec![Field::var(2), Field::var(0) * Field::var(3), Field::constant(0.2)],
            Field::var(1).sin(),
        );
        let g = examples::casimir(&m, &GObserver::chart());
        let p = GPhasePoint::new(X, V);
        let closed = special_value(&m, &special_bracket(&m, &f, &g), &p, &GObserver::chart()).unwrap();
        let def = special_bracket_definitional(&m, &f, &g).value(&p.coords()).unwrap();
        assert!((closed - def).abs() < 1e-11, "{closed} vs {def}");
    }

    #[test]
    fn value_is_observer_consistent() {
        let m = curved();
        let f = examples::casimir(&m, &GObserver::chart());
        let p = GPhasePoint::new(X, V);
        let a = special_value(&m, &f, &p, &GObserver::chart()).unwrap();
        let b = special_value(&m, &f, &p, m.observer("drift").unwrap()).unwrap();
        let direct = f.phase_function(&m).value(&p.coords()).unwrap();
        assert!((a - b).abs() < 1e-12 && (a - direct).abs() < 1e-12);
    }

    #[test]
    fn observer_transition_round_trip() {
        let m = curved();
        let f = examples::hamiltonian(&m, &GObserver::chart());
        let o = m.observer("drift").unwrap();
        let there = f.observed(&m, o);
        let back = GSpecialFunction::from_observed(&m, o, &there);
        assert!(back.distance_at(&f, &X).unwrap() < 1e-12);
        // kinetic energy relative to a constant boost: ½G(v,v)
        let kin = GSpecialFunction::new(Field::one(), vec![Field::zero(); 3], Field::zero());
        let v = vec![Field::constant(0.5), Field::zero(), Field::constant(-1.0)];
        let moved = kin.chart_components().transition(&m, &v);
        let want = m.big_g_pair(&v, &v) * 0.5;
        assert!((moved.value.value(&X).unwrap() - want.value(&X).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn observed_two_form() {
        let m = uniform_b();
        let phi = observed_phi(&m, &GObserver::chart());
        let qb = m.constants.q_over_hbar() * 0.8;
        assert!((phi.get(&[1, 2]).value(&X).unwrap() - qb).abs() < 1e-14);
        let c = curved();
        let phi_o = observed_phi(&c, c.observer("drift").unwrap());
        assert!(exterior_derivative(&phi_o).unwrap().max_abs_at(&X).unwrap() < 1e-12);
        let a = PForm::one_form(observed_potential(&c, c.observer("drift").unwrap()));
        let da = exterior_derivative(&a).unwrap();
        assert!((da - phi_o).max_abs_at(&X).unwrap() < 1e-12);
    }

    #[test]
    fn projectability() {
        let m = curved();
        let f = examples::casimir(&m, &GObserver::chart());
        let lift = hamiltonian_lift(&m, &f.f0, &f.phase_function(&m));
        let witness = hamiltonian_lift(&m, &Field::zero(), &velocity(1).powi(3));
        let mut spread = [0.0f64; 2];
        let base = [lift.at(&phase_point()).unwrap(), witness.at(&phase_point()).unwrap()];
        for v in [[0.0, 0.0, 0.0], [1.0, -1.5, 0.2], [-1.2, 0.3, 1.9]] {
            let p = GPhasePoint::new(X, v).coords();
            for (k, field) in [&lift, &witness].into_iter().enumerate() {
                let at = field.at(&p).unwrap();
                for l in 0..4 {
                    spread[k] = spread[k].max((at.comps[l] - base[k].comps[l]).abs());
                }
            }
        }
        assert!(spread[0] < 1e-12, "{spread:?}");
        assert!(spread[1] > 1e-3);
        let x = f.tangent_lift().at(&X).unwrap();
        let l = lift.at(&phase_point()).unwrap();
        for i in 0..4 {
            assert!((x.comps[i] - l.comps[i]).abs() < 1e-12);
        }
    }
}
