use std::collections::BTreeMap;

use crate::modelspec::{ChartBox, CompiledModel, Constants, Framework, ModelError};
use crate::smooth::linalg::inverse;
use crate::smooth::{exterior_derivative, homotopy_potential, EvalError, Field, PForm};

/// Dimension of the Galilei phase chart `(x^λ, xⁱ₀)`.
pub const PHASE_DIM: usize = 7;

/// Phase chart index of the velocity coordinate `xⁱ₀`, `i = 1..=3`.
pub fn velocity_var(i: usize) -> usize {
    3 + i
}

/// Point of the Galilei phase chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GPhasePoint {
    pub x: [f64; 4],
    pub v: [f64; 3],
}

impl GPhasePoint {
    pub fn new(x: [f64; 4], v: [f64; 3]) -> Self {
        GPhasePoint { x, v }
    }

    pub fn coords(&self) -> Vec<f64> {
        self.x.iter().chain(self.v.iter()).copied().collect()
    }
}

/// Observer: a section `x ↦ (x, oⁱ₀(x))` of the phase space.
#[derive(Debug, Clone)]
pub struct GObserver {
    pub name: String,
    pub comps: Vec<Field>,
}

impl GObserver {
    pub fn new(name: &str, comps: Vec<Field>) -> Self {
        assert_eq!(comps.len(), 3, "an observer has three velocity components");
        GObserver { name: name.to_string(), comps }
    }

    /// The observer at rest in the chart, `oⁱ₀ = 0`.
    pub fn chart() -> Self {
        GObserver::new("chart", vec![Field::zero(); 3])
    }

    /// Embedding `x ↦ (x, o(x))` as seven fields on the spacetime chart.
    pub fn embedding(&self) -> Vec<Field> {
        (0..4).map(Field::var).chain(self.comps.iter().cloned()).collect()
    }
}

/// Coefficients `K_λ^ν_μ` of a spacetime connection, indexed `[λ][ν][μ]`.
#[derive(Debug, Clone)]
pub struct ConnectionCoefficients {
    pub k: Vec<Vec<Vec<Field>>>,
}

impl ConnectionCoefficients {
    pub fn get(&self, lambda: usize, nu: usize, mu: usize) -> &Field {
        &self.k[lambda][nu][mu]
    }
}

/// Galilei spacetime on one chart with spacelike metric `g`, gravitational
/// 2-form `Φ♮` and electromagnetic potential `A^e`.
#[derive(Debug, Clone)]
pub struct GalileiModel {
    pub name: String,
    pub chart_box: ChartBox,
    pub constants: Constants,
    /// Spacelike metric `gᵢⱼ` (3×3, indices shifted by one).
    pub g: Vec<Vec<Field>>,
    /// Rescaled metric `Gᵢⱼ = (m/ℏ) gᵢⱼ`.
    pub big_g: Vec<Vec<Field>>,
    /// Inverse `Gⁱʲ`.
    pub big_g_inv: Vec<Vec<Field>>,
    pub a_em: Vec<Field>,
    /// `F = dA^e`.
    pub f_em: PForm,
    pub grav_phi: PForm,
    pub observers: BTreeMap<String, GObserver>,
    /// Gravitational 2-form joined with `(q/ℏ) F`.
    pub phi_total: PForm,
    pub k: ConnectionCoefficients,
}

impl GalileiModel {
    pub fn from_compiled(m: CompiledModel) -> Result<Self, ModelError> {
        if m.framework != Framework::Galilei {
            return Err(ModelError::FrameworkMismatch {
                name: m.name,
                expected: Framework::Galilei,
                found: m.framework,
            });
        }
        let scale = m.constants.m_over_hbar();
        let big_g: Vec<Vec<Field>> = m.metric.iter().map(|row| row.iter().map(|f| f * scale).collect()).collect();
        let big_g_inv = inverse(&big_g);
        let f_em = exterior_derivative(&PForm::one_form(m.empotential.clone())).expect("1-form");
        let phi_total = m.grav_phi.clone() + f_em.scale(&Field::constant(m.constants.q_over_hbar()));
        let k = joined_connection(&big_g, &big_g_inv, &phi_total);
        let observers =
            m.observers.iter().map(|(name, comps)| (name.clone(), GObserver::new(name, comps.clone()))).collect();
        Ok(GalileiModel {
            name: m.name,
            chart_box: m.chart_box,
            constants: m.constants,
            g: m.metric,
            big_g,
            big_g_inv,
            a_em: m.empotential,
            f_em,
            grav_phi: m.grav_phi,
            observers,
            phi_total,
            k,
        })
    }

    /// The same spacetime with the electromagnetic field switched off.
    pub fn gravitational_part(&self) -> GalileiModel {
        let mut out = self.clone();
        out.phi_total = self.grav_phi.clone();
        out.k = joined_connection(&self.big_g, &self.big_g_inv, &self.grav_phi);
        out
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

    /// `Gᵢⱼ aⁱ bʲ` for spatial vectors given as fields.
    pub fn big_g_pair(&self, a: &[Field], b: &[Field]) -> Field {
        let mut terms = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if !self.big_g[i][j].is_zero() {
                    terms.push(&self.big_g[i][j] * &a[i] * &b[j]);
                }
            }
        }
        Field::sum(terms)
    }

    /// `Gᵢⱼ aʲ`
    pub fn lower(&self, a: &[Field]) -> Vec<Field> {
        (0..3).map(|i| Field::sum((0..3).map(|j| &self.big_g[i][j] * &a[j]))).collect()
    }

    /// `Gⁱʲ aⱼ`
    pub fn raise(&self, a: &[Field]) -> Vec<Field> {
        (0..3).map(|i| Field::sum((0..3).map(|j| &self.big_g_inv[i][j] * &a[j]))).collect()
    }

    /// Gravitational potential `A♮` of the chart observer with `dA♮ = Φ♮`.
    pub fn grav_potential(&self) -> PForm {
        homotopy_potential(&self.grav_phi, &self.chart_box.center())
    }

    pub fn observer(&self, name: &str) -> Option<&GObserver> {
        self.observers.get(name)
    }

    /// Checks that a spacetime point lies in the declared box.
    pub fn check_point(&self, x: &[f64]) -> Result<(), ModelError> {
        if self.chart_box.contains(x) {
            Ok(())
        } else {
            Err(ModelError::Validation { check: "point outside the chart box".into(), point: x.to_vec() })
        }
    }

    /// Largest violation of `∇g = 0` on spatial frames at `x`.
    pub fn metric_compatibility_residual(&self, x: &[f64]) -> Result<f64, EvalError> {
        let mut worst: f64 = 0.0;
        for lam in 0..4 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut r = self.big_g[i][j].diff(lam);
                    for k in 0..3 {
                        r = r
                            + self.k.get(lam, k + 1, i + 1) * &self.big_g[k][j]
                            + self.k.get(lam, k + 1, j + 1) * &self.big_g[i][k];
                    }
                    worst = worst.max(r.value(x)?.abs());
                }
            }
        }
        Ok(worst)
    }

    /// Largest `|K_λ^0_μ|`, the violation of `∇dt = 0`.
    pub fn time_form_residual(&self, x: &[f64]) -> Result<f64, EvalError> {
        let mut worst: f64 = 0.0;
        for lam in 0..4 {
            for mu in 0..4 {
                worst = worst.max(self.k.get(lam, 0, mu).value(x)?.abs());
            }
        }
        Ok(worst)
    }

    /// Largest `|K_λ^ν_μ − K_μ^ν_λ|`.
    pub fn torsion_residual(&self, x: &[f64]) -> Result<f64, EvalError> {
        let mut worst: f64 = 0.0;
        for lam in 0..4 {
            for nu in 0..4 {
                for mu in 0..4 {
                    let d = self.k.get(lam, nu, mu) - self.k.get(mu, nu, lam);
                    worst = worst.max(d.value(x)?.abs());
                }
            }
        }
        Ok(worst)
    }
}

/// Joined Galilei connection built from the rescaled metric and the closed
/// 2-form `Φ`:
///
/// * `K_λ^0_μ = 0`
/// * `K₀ⁱ₀ = −Gⁱʲ Φ₀ⱼ`
/// * `Kₕⁱ₀ = K₀ⁱₕ = −½ Gⁱʲ (∂₀Gₕⱼ + Φₕⱼ)`
/// * `Kₕⁱₖ = −½ Gⁱʲ (∂ₕGⱼₖ + ∂ₖGⱼₕ − ∂ⱼGₕₖ)`
pub fn joined_connection(big_g: &[Vec<Field>], big_g_inv: &[Vec<Field>], phi: &PForm) -> ConnectionCoefficients {
    let mut k = vec![vec![vec![Field::zero(); 4]; 4]; 4];
    let ginv = |i: usize, j: usize| &big_g_inv[i - 1][j - 1];
    let dg = |l: usize, a: usize, b: usize| big_g[a - 1][b - 1].diff(l);
    for i in 1..4 {
        k[0][i][0] = -Field::sum((1..4).map(|j| ginv(i, j) * phi.get(&[0, j])));
        for h in 1..4 {
            let mixed = Field::sum((1..4).map(|j| ginv(i, j) * (dg(0, h, j) + phi.get(&[h, j])))) * -0.5;
            k[h][i][0] = mixed.clone();
            k[0][i][h] = mixed;
            for kk in h..4 {
                let lc = Field::sum((1..4).map(|j| ginv(i, j) * (dg(h, j, kk) + dg(kk, j, h) - dg(j, h, kk)))) * -0.5;
                k[h][i][kk] = lc.clone();
                k[kk][i][h] = lc;
            }
        }
    }
    ConnectionCoefficients { k }
}
