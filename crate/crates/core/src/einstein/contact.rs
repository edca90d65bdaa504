//! Contact map, time form, orthogonal splitting and the identities relating
//! the barred metric coefficients.

use super::model::{EPhasePoint, EinsteinError, EinsteinModel};
use crate::galilei::velocity_var;
use crate::smooth::{Evaluator, Field};

fn to4(v: &[f64]) -> [f64; 4] {
    [v[0], v[1], v[2], v[3]]
}

/// `α⁰ = 1/√|g₀₀ + 2g₀ⱼxʲ₀ + gᵢⱼxⁱ₀xʲ₀|`
pub fn alpha0(m: &EinsteinModel, p: &EPhasePoint) -> Result<f64, EinsteinError> {
    Ok(m.evaluate(std::slice::from_ref(&m.contact.alpha), p)?[0])
}

/// `α⁰` with its exact first and second phase derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaDerivatives {
    pub value: f64,
    /// `∂_λ α⁰`
    pub spacetime: [f64; 4],
    /// `∂⁰ⱼ α⁰`
    pub velocity: [f64; 3],
    /// `∂⁰⁰ᵢⱼ α⁰`
    pub velocity_hessian: [[f64; 3]; 3],
}

pub fn alpha0_derivatives(m: &EinsteinModel, p: &EPhasePoint) -> Result<AlphaDerivatives, EinsteinError> {
    m.check_timelike(p)?;
    let a = &m.contact.alpha;
    let mut ev = Evaluator::new(p.coords());
    let mut out = AlphaDerivatives {
        value: ev.eval(a)?,
        spacetime: [0.0; 4],
        velocity: [0.0; 3],
        velocity_hessian: [[0.0; 3]; 3],
    };
    for l in 0..4 {
        out.spacetime[l] = ev.eval(&a.diff(l))?;
    }
    for i in 0..3 {
        let di = a.diff(velocity_var(i + 1));
        out.velocity[i] = ev.eval(&di)?;
        for j in 0..3 {
            out.velocity_hessian[i][j] = ev.eval(&di.diff(velocity_var(j + 1)))?;
        }
    }
    Ok(out)
}

/// Components of the contact map `𝕕 = c α⁰ (∂₀ + xⁱ₀ ∂ᵢ)`.
pub fn contact_map(m: &EinsteinModel, p: &EPhasePoint) -> Result<[f64; 4], EinsteinError> {
    Ok(to4(&m.evaluate(&m.contact.contact, p)?))
}

/// Components `τ_λ = −(α⁰/c) ḡ₀λ` of the time form.
pub fn time_form(m: &EinsteinModel, p: &EPhasePoint) -> Result<[f64; 4], EinsteinError> {
    Ok(to4(&m.evaluate(&m.contact.tau, p)?))
}

/// Adapted frames as phase fields: `b[0] = b₀`, `b[i] = bᵢ`, and dually
/// `beta[0] = β⁰`, `beta[i] = βⁱ`.
#[derive(Debug, Clone)]
pub struct AdaptedFrames {
    pub b: Vec<Vec<Field>>,
    pub beta: Vec<Vec<Field>>,
}

impl AdaptedFrames {
    /// `b₀ = ∂₀ + xⁱ₀∂ᵢ`, `bᵢ = ∂ᵢ − cα⁰τᵢ b₀`, `β⁰ = d⁰ + cα⁰τᵢβⁱ`, `βⁱ = dⁱ − xⁱ₀d⁰`.
    pub fn new(m: &EinsteinModel) -> Self {
        let c = m.c();
        let ct = &m.contact;
        let b0 = ct.delta_bar.clone();
        let mut b = vec![b0.clone()];
        let mut beta_spatial = Vec::new();
        for i in 1..4 {
            let s = &ct.tau[i] * &ct.alpha * c;
            b.push((0..4).map(|l| if l == i { Field::one() } else { Field::zero() } - &s * &b0[l]).collect());
            beta_spatial.push(
                (0..4)
                    .map(|l| {
                        if l == i {
                            Field::one()
                        } else if l == 0 {
                            -&b0[i]
                        } else {
                            Field::zero()
                        }
                    })
                    .collect::<Vec<_>>(),
            );
        }
        let beta0: Vec<Field> = (0..4)
            .map(|l| {
                let base = if l == 0 { Field::one() } else { Field::zero() };
                base + Field::sum((1..4).map(|i| &ct.tau[i] * &ct.alpha * &beta_spatial[i - 1][l] * c))
            })
            .collect();
        let mut beta = vec![beta0];
        beta.extend(beta_spatial);
        AdaptedFrames { b, beta }
    }
}

/// Numerical adapted bases at a phase point.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedBases {
    pub b0: [f64; 4],
    pub b: [[f64; 4]; 3],
    pub beta0: [f64; 4],
    pub beta: [[f64; 4]; 3],
}

impl AdaptedBases {
    /// Matrix `⟨β^a, b_b⟩`, the identity for dual bases.
    pub fn duality(&self) -> [[f64; 4]; 4] {
        let vecs = [self.b0, self.b[0], self.b[1], self.b[2]];
        let covs = [self.beta0, self.beta[0], self.beta[1], self.beta[2]];
        let mut out = [[0.0; 4]; 4];
        for (a, w) in covs.iter().enumerate() {
            for (bb, v) in vecs.iter().enumerate() {
                out[a][bb] = (0..4).map(|l| w[l] * v[l]).sum();
            }
        }
        out
    }
}

pub fn adapted_bases(m: &EinsteinModel, p: &EPhasePoint) -> Result<AdaptedBases, EinsteinError> {
    let frames = AdaptedFrames::new(m);
    let flat: Vec<Field> = frames.b.iter().chain(frames.beta.iter()).flatten().cloned().collect();
    let vals = m.evaluate(&flat, p)?;
    let row = |k: usize| to4(&vals[4 * k..4 * k + 4]);
    Ok(AdaptedBases { b0: row(0), b: [row(1), row(2), row(3)], beta0: row(4), beta: [row(5), row(6), row(7)] })
}

/// Residual of one identity at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub residual: f64,
}

/// The contact identities as residual fields that vanish identically.
#[derive(Debug, Clone)]
pub struct TechnicalIdentities {
    pub checks: Vec<(&'static str, Vec<Field>)>,
}

impl TechnicalIdentities {
    pub fn new(m: &EinsteinModel) -> Self {
        let c = m.c();
        let ct = &m.contact;
        let frames = AdaptedFrames::new(m);
        let (g, gi) = (&m.g, &m.g_inv);
        let (lo, up) = (&ct.gbar_lower, &ct.gbar_upper);
        let alpha = &ct.alpha;
        let alpha2 = alpha.powi(2);
        let alpha3 = alpha.powi(3);
        let v = |i: usize| Field::var(velocity_var(i));
        let delta = |a: usize, b: usize| if a == b { Field::one() } else { Field::zero() };
        let inv_pair = |a: &[Field], b: &[Field]| {
            Field::sum((0..4).flat_map(|l| (0..4).map(move |n| (l, n))).map(|(l, n)| &gi[l][n] * &a[l] * &b[n]))
        };
        let tau_up = m.raise(&ct.tau);
        let g_perp: Vec<Vec<Field>> =
            (1..4).map(|i| (1..4).map(|j| &g[i][j] + &ct.tau[i] * &ct.tau[j] * (c * c)).collect()).collect();
        let g_perp_up: Vec<Vec<Field>> = (1..4)
            .map(|i| {
                (1..4).map(|j| &gi[i][j] - &gi[i][0] * v(j) - &gi[j][0] * v(i) + &gi[0][0] * v(i) * v(j)).collect()
            })
            .collect();
        let mut checks: Vec<(&'static str, Vec<Field>)> = Vec::new();
        let mut add = |name: &'static str, fields: Vec<Field>| checks.push((name, fields));

        add("contact-unit", vec![m.g_pair(&ct.contact, &ct.contact) + c * c]);
        add("time-form-on-contact", vec![Field::sum((0..4).map(|l| &ct.tau[l] * &ct.contact[l])) - 1.0]);
        add(
            "time-form-lowered-contact",
            m.lower(&ct.contact).iter().zip(&ct.tau).map(|(w, t)| t + w * (1.0 / (c * c))).collect(),
        );
        let mut dual = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                dual.push(Field::sum((0..4).map(|l| &frames.beta[a][l] * &frames.b[b][l])) - delta(a, b));
            }
        }
        add("basis-duality", dual);
        add("splitting-orthogonal", (1..4).map(|i| m.g_pair(&frames.b[0], &frames.b[i])).collect());
        add("g-parallel", vec![m.g_pair(&frames.b[0], &frames.b[0]) + alpha2.recip()]);
        add("g-parallel-inverse", vec![inv_pair(&frames.beta[0], &frames.beta[0]) + &alpha2]);
        let mut perp = Vec::new();
        let mut perp_up = Vec::new();
        for i in 1..4 {
            for j in 1..4 {
                perp.push(m.g_pair(&frames.b[i], &frames.b[j]) - &g_perp[i - 1][j - 1]);
                perp_up.push(inv_pair(&frames.beta[i], &frames.beta[j]) - &g_perp_up[i - 1][j - 1]);
            }
        }
        add("g-perp", perp);
        add("g-perp-inverse", perp_up);
        let g_par = -alpha2.recip();
        add("gbar-0-lower", (0..4).map(|l| &lo[0][l] - &g_par * &frames.beta[0][l]).collect());
        add("gbar-0-upper", (0..4).map(|l| &up[0][l] + &alpha2 * &frames.b[0][l]).collect());
        let mut lower_i = Vec::new();
        let mut upper_i = Vec::new();
        for i in 1..4 {
            for l in 0..4 {
                lower_i.push(&lo[i][l] - Field::sum((1..4).map(|j| &g_perp[i - 1][j - 1] * &frames.beta[j][l])));
                upper_i.push(&up[i][l] - Field::sum((1..4).map(|j| &g_perp_up[i - 1][j - 1] * &frames.b[j][l])));
            }
        }
        add("gbar-i-lower", lower_i);
        add("gbar-i-upper", upper_i);
        let mut inv = Vec::new();
        let mut formula = Vec::new();
        for i in 1..4 {
            for k in 1..4 {
                inv.push(Field::sum((1..4).map(|j| &lo[i][j] * &g_perp_up[j - 1][k - 1])) - delta(i, k));
                formula.push(&g_perp_up[i - 1][k - 1] - (&up[i][k] - &up[i][0] * v(k)));
            }
        }
        add("gbar-spatial-inverse", inv);
        add("g-perp-inverse-formula", formula);
        add(
            "g-perp-gbar-0",
            (1..4)
                .map(|j| Field::sum((1..4).map(|h| &g_perp_up[j - 1][h - 1] * &lo[0][h])) - &up[j][0] / &alpha2)
                .collect(),
        );
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        let mut proj0 = Vec::new();
        let mut proji = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                rows.push(Field::sum((0..4).map(|n| &lo[a][n] * &up[b][n])) - delta(a, b));
                cols.push(Field::sum((0..4).map(|n| &lo[n][a] * &up[n][b])) - delta(a, b));
                let tt = &ct.tau[a] * &tau_up[b] * (c * c);
                proj0.push(&lo[0][a] * &up[0][b] + &tt);
                proji.push(Field::sum((1..4).map(|i| &lo[i][a] * &up[i][b])) - delta(a, b) - tt);
            }
        }
        add("gbar-row-inverse", rows);
        add("gbar-column-inverse", cols);
        add("gbar-0-projector", proj0);
        add("gbar-i-projector", proji);
        add(
            "gbar-0i-contraction",
            (0..4)
                .map(|l| Field::sum((1..4).map(|i| &lo[0][i] * &up[i][l])) - &gi[0][l] / &alpha2 - &ct.delta_bar[l])
                .collect(),
        );
        add("gbar-i0-kernel", (1..4).map(|i| &lo[i][0] + Field::sum((1..4).map(|j| &lo[i][j] * v(j)))).collect());
        let inv_alpha = alpha.recip();
        let mut d_alpha = Vec::new();
        let mut d_inv = Vec::new();
        let mut dd_inv = Vec::new();
        for j in 1..4 {
            let dj = velocity_var(j);
            d_alpha.push(alpha.diff(dj) - &alpha3 * &lo[0][j]);
            d_inv.push(inv_alpha.diff(dj) + alpha * &lo[0][j]);
            for i in 1..4 {
                dd_inv.push(inv_alpha.diff(dj).diff(velocity_var(i)) + alpha * &lo[i][j]);
            }
        }
        add("alpha-velocity-derivative", d_alpha);
        add("inverse-alpha-velocity-derivative", d_inv);
        add("inverse-alpha-velocity-hessian", dd_inv);
        let mut d_tau = Vec::new();
        for i in 1..4 {
            for mu in 0..4 {
                d_tau.push(ct.tau[mu].diff(velocity_var(i)) + alpha * &lo[i][mu] * (1.0 / c));
            }
        }
        add("time-form-velocity-derivative", d_tau);
        add(
            "alpha-spacetime-derivative",
            (0..4)
                .map(|l| {
                    let mut quad = vec![g[0][0].diff(l)];
                    for h in 1..4 {
                        quad.push(g[0][h].diff(l) * v(h) * 2.0);
                        for k in 1..4 {
                            quad.push(g[h][k].diff(l) * v(h) * v(k));
                        }
                    }
                    alpha.diff(l) - &alpha3 * Field::sum(quad) * 0.5
                })
                .collect(),
        );
        TechnicalIdentities { checks }
    }

    /// Largest residual of each identity at `p`.
    pub fn evaluate(&self, m: &EinsteinModel, p: &EPhasePoint) -> Result<Vec<IdentityResidual>, EinsteinError> {
        m.check_timelike(p)?;
        let mut ev = Evaluator::new(p.coords());
        self.checks
            .iter()
            .map(|(name, fields)| {
                let mut worst: f64 = 0.0;
                for f in fields {
                    worst = worst.max(ev.eval(f)?.abs());
                }
                Ok(IdentityResidual { name, residual: worst })
            })
            .collect()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|(n, _)| *n).collect()
    }
}

/// Largest residual over every contact identity at `p`.
pub fn technical_identities_suite(m: &EinsteinModel, p: &EPhasePoint) -> Result<f64, EinsteinError> {
    let report = TechnicalIdentities::new(m).evaluate(m, p)?;
    Ok(report.iter().map(|r| r.residual).fold(0.0, f64::max))
}
