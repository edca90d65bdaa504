use std::collections::BTreeMap;

use thiserror::Error;

use crate::galilei::{velocity_var, ConnectionCoefficients};
use crate::modelspec::{ChartBox, CompiledModel, Constants, Framework, ModelError};
use crate::smooth::linalg::inverse;
use crate::smooth::{exterior_derivative, EvalError, Evaluator, Field, PForm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EinsteinError {
    /// The phase point is not timelike: `g₀₀ + 2g₀ⱼxʲ₀ + gᵢⱼxⁱ₀xʲ₀ ≥ 0`.
    #[error("phase point is not timelike (radicand {radicand}) at {point:?}")]
    LightconeViolation { radicand: f64, point: Vec<f64> },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Point of the Einstein phase chart `(x^λ, xⁱ₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EPhasePoint {
    pub x: [f64; 4],
    pub v: [f64; 3],
}

impl EPhasePoint {
    pub fn new(x: [f64; 4], v: [f64; 3]) -> Self {
        EPhasePoint { x, v }
    }

    pub fn coords(&self) -> Vec<f64> {
        self.x.iter().chain(self.v.iter()).copied().collect()
    }
}

/// Observer `x ↦ (x, oⁱ₀(x))`.
#[derive(Debug, Clone)]
pub struct EObserver {
    pub name: String,
    pub comps: Vec<Field>,
}

impl EObserver {
    pub fn new(name: &str, comps: Vec<Field>) -> Self {
        assert_eq!(comps.len(), 3, "an observer has three velocity components");
        EObserver { name: name.to_string(), comps }
    }

    /// The observer whose worldlines are the coordinate lines of `x⁰`.
    pub fn chart() -> Self {
        EObserver::new("chart", vec![Field::zero(); 3])
    }

    /// Restricts a phase field to the image of the observer.
    pub fn pull(&self, f: &Field) -> Field {
        f.substitute(&|var| (var >= 4).then(|| self.comps[var - 4].clone()))
    }
}

/// Contact objects as fields on the phase chart.
#[derive(Debug, Clone)]
pub struct ContactFields {
    /// `g₀₀ + 2g₀ⱼxʲ₀ + gᵢⱼxⁱ₀xʲ₀`
    pub radicand: Field,
    /// `α⁰ = 1/√|radicand|`
    pub alpha: Field,
    /// `δ̄^λ₀ = (1, xⁱ₀)`
    pub delta_bar: Vec<Field>,
    /// Contact map `𝕕^λ = c α⁰ δ̄^λ₀`.
    pub contact: Vec<Field>,
    /// Time form `τ_λ = −(α⁰/c) ḡ₀λ`.
    pub tau: Vec<Field>,
    /// Rows `ḡ₀λ` and `ḡᵢλ`.
    pub gbar_lower: Vec<Vec<Field>>,
    /// Rows `ḡ^{0λ}` and `ḡ^{iλ}`.
    pub gbar_upper: Vec<Vec<Field>>,
}

/// Einstein spacetime on one chart: Lorentzian metric `g` with signature
/// `(−+++)` and electromagnetic potential `A^e`.
#[derive(Debug, Clone)]
pub struct EinsteinModel {
    pub name: String,
    pub chart_box: ChartBox,
    pub constants: Constants,
    pub g: Vec<Vec<Field>>,
    pub g_inv: Vec<Vec<Field>>,
    /// Rescaled metric `G = (m/ℏ) g`.
    pub big_g: Vec<Vec<Field>>,
    pub a_em: Vec<Field>,
    /// `F = dA^e`.
    pub f_em: PForm,
    pub observers: BTreeMap<String, EObserver>,
    /// Levi-Civita connection `K_λ^ν_μ = −(∇_λ ∂_μ)^ν`.
    pub k: ConnectionCoefficients,
    pub contact: ContactFields,
}

impl EinsteinModel {
    pub fn from_compiled(m: CompiledModel) -> Result<Self, ModelError> {
        if m.framework != Framework::Einstein {
            return Err(ModelError::FrameworkMismatch {
                name: m.name,
                expected: Framework::Einstein,
                found: m.framework,
            });
        }
        let c = m.constants.c().ok_or_else(|| ModelError::Missing("constant c".into()))?;
        let scale = m.constants.m_over_hbar();
        let big_g = m.metric.iter().map(|row| row.iter().map(|f| f * scale).collect()).collect();
        let g_inv = inverse(&m.metric);
        let f_em = exterior_derivative(&PForm::one_form(m.empotential.clone())).expect("1-form");
        let k = levi_civita(&m.metric, &g_inv);
        let contact = contact_fields(&m.metric, &g_inv, c);
        let observers =
            m.observers.iter().map(|(name, comps)| (name.clone(), EObserver::new(name, comps.clone()))).collect();
        Ok(EinsteinModel {
            name: m.name,
            chart_box: m.chart_box,
            constants: m.constants,
            g: m.metric,
            g_inv,
            big_g,
            a_em: m.empotential,
            f_em,
            observers,
            k,
            contact,
        })
    }

    pub fn m(&self) -> f64 {
        self.constants.m()
    }

    pub fn q(&self) -> f64 {
        self.constants.q()
    }

    pub fn hbar(&self) -> f64 {
        self.constants.hbar()
    }

    pub fn c(&self) -> f64 {
        self.constants.c().expect("checked on construction")
    }

    pub fn observer(&self, name: &str) -> Option<&EObserver> {
        self.observers.get(name)
    }

    /// `g(a, b)` for spacetime vectors given as fields.
    pub fn g_pair(&self, a: &[Field], b: &[Field]) -> Field {
        let mut terms = Vec::new();
        for l in 0..4 {
            for n in 0..4 {
                if !self.g[l][n].is_zero() {
                    terms.push(&self.g[l][n] * &a[l] * &b[n]);
                }
            }
        }
        Field::sum(terms)
    }

    /// `g♭(a)`
    pub fn lower(&self, a: &[Field]) -> Vec<Field> {
        (0..4).map(|l| Field::sum((0..4).map(|n| &self.g[l][n] * &a[n]))).collect()
    }

    /// `g♯(w)`
    pub fn raise(&self, w: &[Field]) -> Vec<Field> {
        (0..4).map(|l| Field::sum((0..4).map(|n| &self.g_inv[l][n] * &w[n]))).collect()
    }

    /// Value of the timelike radicand at `p`, failing outside the light cone.
    pub fn check_timelike(&self, p: &EPhasePoint) -> Result<f64, EinsteinError> {
        let radicand = self.contact.radicand.value(&p.coords())?;
        if radicand < 0.0 {
            Ok(radicand)
        } else {
            Err(EinsteinError::LightconeViolation { radicand, point: p.coords() })
        }
    }

    /// Evaluates phase fields at a timelike point.
    pub fn evaluate(&self, fields: &[Field], p: &EPhasePoint) -> Result<Vec<f64>, EinsteinError> {
        self.check_timelike(p)?;
        let mut ev = Evaluator::new(p.coords());
        Ok(fields.iter().map(|f| ev.eval(f)).collect::<Result<_, _>>()?)
    }

    /// Largest `|∂_λ g_μν + K_λ^ρ_μ g_ρν + K_λ^ρ_ν g_μρ|` at `x`.
    pub fn metric_compatibility_residual(&self, x: &[f64]) -> Result<f64, EvalError> {
        let mut ev = Evaluator::new(x.to_vec());
        let mut worst: f64 = 0.0;
        for lam in 0..4 {
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut r = ev.eval(&self.g[mu][nu].diff(lam))?;
                    for rho in 0..4 {
                        r += ev.eval(self.k.get(lam, rho, mu))? * ev.eval(&self.g[rho][nu])?
                            + ev.eval(self.k.get(lam, rho, nu))? * ev.eval(&self.g[mu][rho])?;
                    }
                    worst = worst.max(r.abs());
                }
            }
        }
        Ok(worst)
    }

    /// Largest `|K_λ^ν_μ − K_μ^ν_λ|` at `x`.
    pub fn torsion_residual(&self, x: &[f64]) -> Result<f64, EvalError> {
        let mut ev = Evaluator::new(x.to_vec());
        let mut worst: f64 = 0.0;
        for lam in 0..4 {
            for nu in 0..4 {
                for mu in 0..4 {
                    worst = worst.max((ev.eval(self.k.get(lam, nu, mu))? - ev.eval(self.k.get(mu, nu, lam))?).abs());
                }
            }
        }
        Ok(worst)
    }
}

/// Levi-Civita coefficients `K_λ^ν_μ = −½ g^{νρ}(∂_λ g_ρμ + ∂_μ g_ρλ − ∂_ρ g_λμ)`.
pub fn levi_civita(g: &[Vec<Field>], g_inv: &[Vec<Field>]) -> ConnectionCoefficients {
    let mut k = vec![vec![vec![Field::zero(); 4]; 4]; 4];
    for lam in 0..4 {
        for mu in lam..4 {
            let lowered: Vec<Field> =
                (0..4).map(|rho| g[rho][mu].diff(lam) + g[rho][lam].diff(mu) - g[lam][mu].diff(rho)).collect();
            for nu in 0..4 {
                let val = Field::sum((0..4).map(|rho| &g_inv[nu][rho] * &lowered[rho])) * -0.5;
                k[lam][nu][mu] = val.clone();
                k[mu][nu][lam] = val;
            }
        }
    }
    ConnectionCoefficients { k }
}

fn velocity(i: usize) -> Field {
    Field::var(velocity_var(i))
}

fn contact_fields(g: &[Vec<Field>], g_inv: &[Vec<Field>], c: f64) -> ContactFields {
    let delta_bar: Vec<Field> = (0..4).map(|l| if l == 0 { Field::one() } else { velocity(l) }).collect();
    let gbar0: Vec<Field> = (0..4).map(|l| Field::sum((0..4).map(|n| &g[n][l] * &delta_bar[n]))).collect();
    let radicand = Field::sum((0..4).map(|l| &gbar0[l] * &delta_bar[l]));
    let alpha = radicand.abs().sqrt().recip();
    let contact = delta_bar.iter().map(|d| d * &alpha * c).collect();
    let tau: Vec<Field> = gbar0.iter().map(|x| x * &alpha * (-1.0 / c)).collect();
    let mut gbar_lower = vec![gbar0];
    for i in 1..4 {
        gbar_lower.push((0..4).map(|l| &g[i][l] + &tau[i] * &tau[l] * (c * c)).collect());
    }
    let alpha2 = alpha.powi(2);
    let mut gbar_upper = vec![delta_bar.iter().map(|d| -(d * &alpha2)).collect::<Vec<_>>()];
    for i in 1..4 {
        gbar_upper.push((0..4).map(|l| &g_inv[i][l] - &g_inv[0][l] * velocity(i)).collect());
    }
    ContactFields { radicand, alpha, delta_bar, contact, tau, gbar_lower, gbar_upper }
}
