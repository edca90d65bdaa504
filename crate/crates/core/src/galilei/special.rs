//! Special phase functions, their tangent lifts and the special bracket.

use super::model::{GObserver, GPhasePoint, GalileiModel};
use super::phase::{gamma_field, observed_two_form, poisson_bracket, velocity};
use crate::smooth::{lie_bracket, EvalError, Evaluator, Field, PForm, VectorField};

/// Special phase function `f = f⁰ 𝒦 + fⁱ 𝒫ᵢ + f̄` in its chart-observer
/// normal form: `f⁰ = f''`, `fⁱ = f'[o₀]ⁱ`, `f̄ = f[o₀]`, all spacetime
/// fields.
#[derive(Debug, Clone)]
pub struct GSpecialFunction {
    pub f0: Field,
    pub fi: Vec<Field>,
    pub fbar: Field,
}

/// Components of a special function relative to an observer `o`:
/// `f''`, `f'[o]` and `f[o]`.
#[derive(Debug, Clone)]
pub struct ObservedComponents {
    pub f0: Field,
    pub fprime: Vec<Field>,
    pub value: Field,
}

impl ObservedComponents {
    /// Re-expresses the components for the observer `o + v`:
    /// `f'[ǒ] = f'[o] + f'' v`, `f[ǒ] = f[o] + f'[o]·G♭(v) + ½ f'' G(v,v)`.
    pub fn transition(&self, m: &GalileiModel, v: &[Field]) -> ObservedComponents {
        ObservedComponents {
            f0: self.f0.clone(),
            fprime: self.fprime.iter().zip(v).map(|(p, vi)| p + &self.f0 * vi).collect(),
            value: &self.value + m.big_g_pair(&self.fprime, v) + &self.f0 * m.big_g_pair(v, v) * 0.5,
        }
    }

    pub fn distance_at(&self, other: &ObservedComponents, x: &[f64]) -> Result<f64, EvalError> {
        let mut ev = Evaluator::new(x.to_vec());
        let mut worst = (ev.eval(&self.f0)? - ev.eval(&other.f0)?).abs();
        worst = worst.max((ev.eval(&self.value)? - ev.eval(&other.value)?).abs());
        for (a, b) in self.fprime.iter().zip(&other.fprime) {
            worst = worst.max((ev.eval(a)? - ev.eval(b)?).abs());
        }
        Ok(worst)
    }
}

impl GSpecialFunction {
    pub fn new(f0: Field, fi: Vec<Field>, fbar: Field) -> Self {
        assert_eq!(fi.len(), 3);
        GSpecialFunction { f0, fi, fbar }
    }

    /// The spacetime function `f̄` lifted to phase space.
    pub fn spacetime(fbar: Field) -> Self {
        GSpecialFunction::new(Field::zero(), vec![Field::zero(); 3], fbar)
    }

    /// Coordinate function `x^λ`.
    pub fn coordinate(lambda: usize) -> Self {
        Self::spacetime(Field::var(lambda))
    }

    /// Builds the normal form from components relative to `o`.
    pub fn from_observed(m: &GalileiModel, o: &GObserver, c: &ObservedComponents) -> Self {
        let back: Vec<Field> = o.comps.iter().map(|f| -f).collect();
        let chart = c.transition(m, &back);
        GSpecialFunction { f0: chart.f0, fi: chart.fprime, fbar: chart.value }
    }

    /// Components relative to the chart observer.
    pub fn chart_components(&self) -> ObservedComponents {
        ObservedComponents { f0: self.f0.clone(), fprime: self.fi.clone(), value: self.fbar.clone() }
    }

    /// Components relative to `o`.
    pub fn observed(&self, m: &GalileiModel, o: &GObserver) -> ObservedComponents {
        self.chart_components().transition(m, &o.comps)
    }

    /// Phase function `f⁰·½Gₕₖxʰ₀xᵏ₀ + fⁱGᵢⱼxʲ₀ + f̄`.
    pub fn phase_function(&self, m: &GalileiModel) -> Field {
        let v: Vec<Field> = (1..4).map(velocity).collect();
        &self.f0 * m.big_g_pair(&v, &v) * 0.5 + m.big_g_pair(&self.fi, &v) + &self.fbar
    }

    /// Tangent lift `X[f] = f⁰ ∂₀ − fⁱ ∂ᵢ`.
    pub fn tangent_lift(&self) -> VectorField {
        let mut comps = vec![self.f0.clone()];
        comps.extend(self.fi.iter().map(|f| -f));
        VectorField::new(comps)
    }

    /// Inverse of [`tangent_lift`](Self::tangent_lift) with a given spacetime part.
    pub fn from_lift(x: &VectorField, fbar: Field) -> Self {
        GSpecialFunction::new(x.comps[0].clone(), x.comps[1..].iter().map(|f| -f).collect(), fbar)
    }

    pub fn distance_at(&self, other: &GSpecialFunction, x: &[f64]) -> Result<f64, EvalError> {
        self.chart_components().distance_at(&other.chart_components(), x)
    }
}

/// Value `f⁰·½G(δ,δ) + f'[o]ⁱ Gᵢⱼ δʲ + f[o]` with `δ = xⁱ₀ − oⁱ₀(x)`.
pub fn special_value(m: &GalileiModel, f: &GSpecialFunction, p: &GPhasePoint, o: &GObserver) -> Result<f64, EvalError> {
    let c = f.observed(m, o);
    let mut ev = Evaluator::new(p.x.to_vec());
    let delta: Vec<f64> = (0..3).map(|i| Ok(p.v[i] - ev.eval(&o.comps[i])?)).collect::<Result<_, EvalError>>()?;
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = ev.eval(&m.big_g[i][j])?;
        }
    }
    let quad = |a: &[f64], b: &[f64]| -> f64 {
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| g[i][j] * a[i] * b[j]).sum()
    };
    let fprime: Vec<f64> = c.fprime.iter().map(|f| ev.eval(f)).collect::<Result<_, _>>()?;
    Ok(ev.eval(&c.f0)? * 0.5 * quad(&delta, &delta) + quad(&fprime, &delta) + ev.eval(&c.value)?)
}

/// Observed 2-form `Φ[o] = o*Ω`.
pub fn observed_phi(m: &GalileiModel, o: &GObserver) -> PForm {
    observed_two_form(m, o)
}

/// Special bracket relative to an observer `o`: the lift part is
/// `[X[f], X[g]]` and the observed part is
/// `X[f].g[o] − X[g].f[o] + Φ[o](X[f], X[g])`.
pub fn special_bracket_observed(
    m: &GalileiModel,
    f: &GSpecialFunction,
    g: &GSpecialFunction,
    o: &GObserver,
) -> GSpecialFunction {
    special_bracket_with(m, f, g, o, &observed_phi(m, o))
}

/// Same as [`special_bracket_observed`] with a precomputed `Φ[o]`.
pub fn special_bracket_with(
    m: &GalileiModel,
    f: &GSpecialFunction,
    g: &GSpecialFunction,
    o: &GObserver,
    phi_o: &PForm,
) -> GSpecialFunction {
    let (xf, xg) = (f.tangent_lift(), g.tangent_lift());
    let x = lie_bracket(&xf, &xg).expect("spacetime fields");
    let (fo, go) = (f.observed(m, o), g.observed(m, o));
    let value = xf.apply(&go.value) - xg.apply(&fo.value) + phi_o.on_vectors(&[xf.clone(), xg.clone()]);
    let lifted = GSpecialFunction::from_lift(&x, Field::zero());
    let mut comps = lifted.observed(m, o);
    comps.value = value;
    GSpecialFunction::from_observed(m, o, &comps)
}

/// Closed-form special bracket for the chart observer.
pub fn special_bracket(m: &GalileiModel, f: &GSpecialFunction, g: &GSpecialFunction) -> GSpecialFunction {
    let (xf, xg) = (f.tangent_lift(), g.tangent_lift());
    let x = lie_bracket(&xf, &xg).expect("spacetime fields");
    let fbar = xf.apply(&g.fbar) - xg.apply(&f.fbar) + m.phi_total.on_vectors(&[xf, xg]);
    GSpecialFunction::from_lift(&x, fbar)
}

/// Defining expression `{f, g} + f''·γ.g − g''·γ.f` as a phase field.
pub fn special_bracket_definitional(m: &GalileiModel, f: &GSpecialFunction, g: &GSpecialFunction) -> Field {
    let (pf, pg) = (f.phase_function(m), g.phase_function(m));
    let gamma = gamma_field(m);
    poisson_bracket(m, &pf, &pg) + &f.f0 * gamma.apply(&pg) - &g.f0 * gamma.apply(&pf)
}

/// Observed potential `A[o₀] = A♮ + (q/ℏ) A^e` of the chart observer.
pub fn chart_potential(m: &GalileiModel) -> Vec<Field> {
    let grav = m.grav_potential();
    let s = m.constants.q_over_hbar();
    (0..4).map(|l| grav.get(&[l]) + &m.a_em[l] * s).collect()
}

/// Observed potential `A[o] = A[o₀] − ½G(o,o) d⁰ + Gᵢⱼ oʲ dⁱ`.
pub fn observed_potential(m: &GalileiModel, o: &GObserver) -> Vec<Field> {
    transition_potential(m, &chart_potential(m), &GObserver::chart(), o)
}

/// Boost law `A[ǒ] = A[o] − ½G(v,v) d⁰ + Gᵢⱼ vʲ (dⁱ − oⁱ d⁰)`, `v = ǒ − o`.
pub fn transition_potential(m: &GalileiModel, a_o: &[Field], o: &GObserver, o_new: &GObserver) -> Vec<Field> {
    let v: Vec<Field> = o_new.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect();
    let gv = m.lower(&v);
    let mut out = a_o.to_vec();
    out[0] = &out[0] - m.big_g_pair(&v, &v) * 0.5 - Field::sum((0..3).map(|i| &gv[i] * &o.comps[i]));
    for i in 0..3 {
        out[i + 1] = &out[i + 1] + &gv[i];
    }
    out
}

/// Worked examples of special functions relative to an observer `o`,
/// with `A = A[o]` the observed potential.
pub mod examples {
    use super::*;

    /// `ℋ₀[o] = 𝒦[o] − A₀`
    pub fn hamiltonian(m: &GalileiModel, o: &GObserver) -> GSpecialFunction {
        let a = observed_potential(m, o);
        let c = ObservedComponents { f0: Field::one(), fprime: vec![Field::zero(); 3], value: -&a[0] };
        GSpecialFunction::from_observed(m, o, &c)
    }

    /// `𝒫ᵢ[o] = 𝒬[o]ᵢ + Aᵢ`, `i = 1..=3`
    pub fn momentum(m: &GalileiModel, o: &GObserver, i: usize) -> GSpecialFunction {
        let a = observed_potential(m, o);
        let mut fprime = vec![Field::zero(); 3];
        fprime[i - 1] = Field::one();
        let c = ObservedComponents { f0: Field::zero(), fprime, value: a[i].clone() };
        GSpecialFunction::from_observed(m, o, &c)
    }

    /// `𝒞₀[o] = 2𝒦[o] + 2Aⁱ𝒫ᵢ + AⁱAᵢ` with `Aⁱ = Gⁱʲ Aⱼ`.
    pub fn casimir(m: &GalileiModel, o: &GObserver) -> GSpecialFunction {
        let a = observed_potential(m, o);
        let up = m.raise(&a[1..]);
        let value = Field::sum((0..3).map(|i| &up[i] * &a[i + 1]));
        let c = ObservedComponents { f0: Field::constant(2.0), fprime: up.iter().map(|f| f * 2.0).collect(), value };
        GSpecialFunction::from_observed(m, o, &c)
    }
}
