//! Special phase functions, the special bracket and observed quantities.

use super::model::{EObserver, EPhasePoint, EinsteinError, EinsteinModel};
use super::phase::{gamma_field, poisson_bracket, theta};
use crate::smooth::{
    exterior_derivative, for_each_increasing, lie_bracket, EvalError, Evaluator, Field, PForm, VectorField,
};

/// Special phase function `f = −G(𝕕, X) + f̄` given by its tangent lift
/// `X = f^λ ∂_λ` and spacetime component `f̄`.
#[derive(Debug, Clone)]
pub struct ESpecialFunction {
    pub x: VectorField,
    pub fbar: Field,
}

impl ESpecialFunction {
    pub fn new(x: VectorField, fbar: Field) -> Self {
        assert_eq!(x.dim(), 4, "tangent lift lives on spacetime");
        ESpecialFunction { x, fbar }
    }

    /// The spacetime function `f̄` lifted to phase space.
    pub fn spacetime(fbar: Field) -> Self {
        ESpecialFunction::new(VectorField::zero(4), fbar)
    }

    /// Coordinate function `x^λ`.
    pub fn coordinate(lambda: usize) -> Self {
        Self::spacetime(Field::var(lambda))
    }

    /// Cotangent lift `f⁰_λ = G_λμ f^μ`.
    pub fn cotangent_lift(&self, m: &EinsteinModel) -> Vec<Field> {
        (0..4).map(|l| Field::sum((0..4).map(|n| &m.big_g[l][n] * &self.x.comps[n]))).collect()
    }

    /// Phase function `−c α⁰ Ḡ₀λ f^λ + f̄`.
    pub fn phase_function(&self, m: &EinsteinModel) -> Field {
        let s = &m.contact.alpha * (-m.c() * m.constants.m_over_hbar());
        Field::sum((0..4).map(|l| &m.contact.gbar_lower[0][l] * &self.x.comps[l])) * s + &self.fbar
    }

    /// Time scale `σ[f] = τ(X)`, a phase field.
    pub fn time_scale(&self, m: &EinsteinModel) -> Field {
        Field::sum((0..4).map(|l| &m.contact.tau[l] * &self.x.comps[l]))
    }

    /// Spacetime component relative to an observer, `f[o] = f ∘ o`.
    pub fn observed_value(&self, m: &EinsteinModel, o: &EObserver) -> Field {
        o.pull(&self.phase_function(m))
    }

    pub fn distance_at(&self, other: &ESpecialFunction, x: &[f64]) -> Result<f64, EvalError> {
        let mut ev = Evaluator::new(x.to_vec());
        let mut worst = (ev.eval(&self.fbar)? - ev.eval(&other.fbar)?).abs();
        for (a, b) in self.x.comps.iter().zip(&other.x.comps) {
            worst = worst.max((ev.eval(a)? - ev.eval(b)?).abs());
        }
        Ok(worst)
    }
}

/// Value `−c α⁰ (f⁰₀ + f⁰ᵢ xⁱ₀) + f̄` at a timelike phase point.
pub fn e_special_value(m: &EinsteinModel, f: &ESpecialFunction, p: &EPhasePoint) -> Result<f64, EinsteinError> {
    let cot = f.cotangent_lift(m);
    let mut ev = Evaluator::new(p.coords());
    let alpha = 1.0 / (-m.check_timelike(p)?).sqrt();
    let mut pairing = ev.eval(&cot[0])?;
    for i in 0..3 {
        pairing += ev.eval(&cot[i + 1])? * p.v[i];
    }
    Ok(-m.c() * alpha * pairing + ev.eval(&f.fbar)?)
}

/// Closed-form special bracket: tangent lift `[X[f], X[g]]` and spacetime
/// component `X[f].ḡ − X[g].f̄ + (q/ℏ) F(X[f], X[g])`.
pub fn e_special_bracket(m: &EinsteinModel, f: &ESpecialFunction, g: &ESpecialFunction) -> ESpecialFunction {
    let x = lie_bracket(&f.x, &g.x).expect("spacetime fields");
    let twist = m.f_em.on_vectors(&[f.x.clone(), g.x.clone()]) * m.constants.q_over_hbar();
    ESpecialFunction::new(x, f.x.apply(&g.fbar) - g.x.apply(&f.fbar) + twist)
}

/// Defining expression `{f, g} + σ[f] γ.g − σ[g] γ.f` as a phase field.
pub fn e_special_bracket_definitional_field(m: &EinsteinModel, f: &ESpecialFunction, g: &ESpecialFunction) -> Field {
    let (pf, pg) = (f.phase_function(m), g.phase_function(m));
    let gamma = gamma_field(m);
    poisson_bracket(m, &pf, &pg) + f.time_scale(m) * gamma.apply(&pg) - g.time_scale(m) * gamma.apply(&pf)
}

/// Pointwise value of the defining expression of the special bracket.
pub fn e_special_bracket_definitional(
    m: &EinsteinModel,
    f: &ESpecialFunction,
    g: &ESpecialFunction,
    p: &EPhasePoint,
) -> Result<f64, EinsteinError> {
    m.check_timelike(p)?;
    Ok(e_special_bracket_definitional_field(m, f, g).value(&p.coords())?)
}

/// Observing frame `(o, ζ)` with `ζ` a timelike, positively oriented 1-form.
#[derive(Debug, Clone)]
pub struct ObservingFrame {
    pub observer: EObserver,
    pub zeta: Vec<Field>,
    pub integrable: bool,
}

impl ObservingFrame {
    pub fn new(observer: EObserver, zeta: Vec<Field>) -> Self {
        assert_eq!(zeta.len(), 4);
        let integrable =
            exterior_derivative(&PForm::one_form(zeta.clone())).expect("1-form").components().all(|(_, c)| c.is_zero());
        ObservingFrame { observer, zeta, integrable }
    }

    /// Frame of the chart: the observer at rest in the chart and `ζ = d⁰`.
    pub fn chart() -> Self {
        let mut zeta = vec![Field::zero(); 4];
        zeta[0] = Field::one();
        ObservingFrame::new(EObserver::chart(), zeta)
    }

    /// The frame `(o, τ[o])`.
    pub fn of_observer(m: &EinsteinModel, o: &EObserver) -> Self {
        ObservingFrame::new(o.clone(), m.contact.tau.iter().map(|t| o.pull(t)).collect())
    }

    /// `ς = ζ(𝕕[o])`, positive for a valid frame.
    pub fn normalisation(&self, m: &EinsteinModel) -> Field {
        Field::sum((0..4).map(|l| &self.zeta[l] * self.observer.pull(&m.contact.contact[l])))
    }

    /// Checks at `x` that `o` is timelike, `ζ(𝕕[o]) > 0`, `ζ` is timelike and,
    /// for integrable frames, `dζ = 0`.
    pub fn check(&self, m: &EinsteinModel, x: &[f64; 4]) -> Result<bool, EinsteinError> {
        let mut ev = Evaluator::new(x.to_vec());
        let v =
            [ev.eval(&self.observer.comps[0])?, ev.eval(&self.observer.comps[1])?, ev.eval(&self.observer.comps[2])?];
        m.check_timelike(&EPhasePoint::new(*x, v))?;
        let sigma = ev.eval(&self.normalisation(m))?;
        let zeta_up = m.raise(&self.zeta);
        let norm = ev.eval(&Field::sum((0..4).map(|l| &zeta_up[l] * &self.zeta[l])))?;
        let closed = !self.integrable
            || exterior_derivative(&PForm::one_form(self.zeta.clone())).unwrap().max_abs_at(x)? < 1e-12;
        Ok(sigma > 0.0 && norm < 0.0 && closed)
    }
}

/// Observed electric and magnetic fields of an observer, as spacetime
/// vector fields.
#[derive(Debug, Clone)]
pub struct ObservedFields {
    pub electric: Vec<Field>,
    pub magnetic: Vec<Field>,
    /// `τ[o]`
    pub tau: Vec<Field>,
    /// Spatial volume form `η[o] = i(𝕕[o]/c) ε` with `ε` the metric volume.
    pub eta: PForm,
}

/// `E⃗[o] = −g♯(𝕕[o] ⌟ F)` and `B⃗[o] = (c/2) i(θ[o](F)) η̄[o]`.
pub fn observed_splitting_f(m: &EinsteinModel, o: &EObserver) -> ObservedFields {
    let c = m.c();
    let d: Vec<Field> = m.contact.contact.iter().map(|f| o.pull(f)).collect();
    let tau: Vec<Field> = m.contact.tau.iter().map(|f| o.pull(f)).collect();
    let f = |a: usize, b: usize| m.f_em.get(&[a, b]);
    let contracted: Vec<Field> = (0..4).map(|mu| Field::sum((0..4).map(|l| &d[l] * f(l, mu)))).collect();
    let electric: Vec<Field> = m.raise(&contracted).iter().map(|e| -e).collect();
    // θ[o] = 1 − 𝕕[o] ⊗ τ[o] projects onto the observer's rest space
    let proj = |l: usize, a: usize| if l == a { Field::one() } else { Field::zero() } - &d[l] * &tau[a];
    let mut f_perp = vec![vec![Field::zero(); 4]; 4];
    for a in 0..4 {
        for b in (a + 1)..4 {
            let val = Field::sum(
                (0..4).flat_map(|l| (0..4).map(move |n| (l, n))).map(|(l, n)| proj(l, a) * proj(n, b) * f(l, n)),
            );
            f_perp[b][a] = -&val;
            f_perp[a][b] = val;
        }
    }
    let g_det = crate::smooth::linalg::det(&m.g);
    let vol = g_det.abs().sqrt();
    let mut eta = PForm::zero(4, 3);
    for (skip, idx) in [(0, [1, 2, 3]), (1, [0, 2, 3]), (2, [0, 1, 3]), (3, [0, 1, 2])] {
        // i(u) ε with ε = √|g| d⁰∧d¹∧d²∧d³
        let sign = if skip % 2 == 0 { 1.0 } else { -1.0 };
        eta.set(&idx, &d[skip] * &vol * (sign / c));
    }
    let eta_up = raise_three(m, &eta);
    let magnetic = (0..4)
        .map(|r| {
            let mut terms = Vec::new();
            for a in 0..4 {
                for b in 0..4 {
                    if a != b && a != r && b != r {
                        terms.push(eta_up.get(&[r, a, b]) * &f_perp[a][b]);
                    }
                }
            }
            Field::sum(terms) * (c / 2.0)
        })
        .collect();
    ObservedFields { electric, magnetic, tau, eta }
}

fn raise_three(m: &EinsteinModel, w: &PForm) -> PForm {
    let gi = &m.g_inv;
    let mut out = PForm::zero(4, 3);
    for_each_increasing(4, 3, &mut |idx| {
        let mut terms = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let comp = w.get(&[a, b, c]);
                    if !comp.is_zero() {
                        terms.push(&gi[idx[0]][a] * &gi[idx[1]][b] * &gi[idx[2]][c] * comp);
                    }
                }
            }
        }
        out.set(idx, Field::sum(terms));
    });
    out
}

impl ObservedFields {
    /// `−τ[o] ∧ g♭(E⃗[o]) + (1/c) i(B⃗[o]) η[o]`, which reproduces `F`.
    pub fn reconstruct(&self, m: &EinsteinModel) -> PForm {
        let e_low = m.lower(&self.electric);
        let mut out = PForm::zero(4, 2);
        for a in 0..4 {
            for b in (a + 1)..4 {
                let electric = -(&self.tau[a] * &e_low[b] - &self.tau[b] * &e_low[a]);
                let magnetic = Field::sum((0..4).map(|r| &self.magnetic[r] * self.eta.get(&[r, a, b]))) * (1.0 / m.c());
                out.set(&[a, b], electric + magnetic);
            }
        }
        out
    }
}

/// Observed potential `Θ[o] + (q/ℏ) A^e` of the connection `Q[o]`.
pub fn observed_potential(m: &EinsteinModel, o: &EObserver) -> Vec<Field> {
    let th = theta(m);
    (0..4).map(|l| o.pull(&th.get(&[l])) + &m.a_em[l] * m.constants.q_over_hbar()).collect()
}

/// Worked examples for the chart frame `(o, d⁰)`.
pub mod examples {
    use super::*;

    /// `ℋ₀ = −A↑₀`: tangent lift `∂₀`, spacetime part `−(q/ℏ) A^e₀`.
    pub fn hamiltonian(m: &EinsteinModel) -> ESpecialFunction {
        ESpecialFunction::new(VectorField::basis(4, 0), -(&m.a_em[0] * m.constants.q_over_hbar()))
    }

    /// `𝒫ᵢ = A↑ᵢ`: tangent lift `−∂ᵢ`, spacetime part `(q/ℏ) A^eᵢ`.
    pub fn momentum(m: &EinsteinModel, i: usize) -> ESpecialFunction {
        ESpecialFunction::new(
            VectorField::basis(4, i).scale(&Field::constant(-1.0)),
            &m.a_em[i] * m.constants.q_over_hbar(),
        )
    }
}
