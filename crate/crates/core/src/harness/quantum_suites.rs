//! Checks on the quantum bundle: the general classification of Hermitian
//! fields and the framework maps `𝔽`, `ℍ`.

use rand::Rng;

use super::report::Bound;
use super::sampling::{random_polynomial, random_vector_field, spacetime_points};
use super::{einstein_suites, galilei_suites, max_over, HarnessError, Runner};
use crate::einstein::{e_special_bracket, examples as e_examples, ESpecialFunction, EinsteinModel};
use crate::galilei::{
    examples as g_examples, observed_potential, special_bracket_observed, GSpecialFunction, GalileiModel,
};
use crate::modelspec::ChartBox;
use crate::quantum::einstein::{einstein_f, einstein_h, observer_note_residual};
use crate::quantum::galilei::{galilei_f, galilei_h, observed_connection, observer_independence_residual};
use crate::quantum::{
    classify_h, classify_j, hermitian_bracket, hermitian_product, pair_bracket, GaugeConnection, HermitianField,
    LinearQuantumField, Section, SpacetimePair,
};
use crate::smooth::{exterior_derivative, lie_bracket, Evaluator, Field, PForm, Tape, VectorField};

pub(super) const SECTION1: &[&str] = &[
    "section1-classification-isomorphism",
    "pair-bracket-jacobi",
    "pair-bracket-non-closed-witness",
    "central-extension-exactness",
    "hermitian-complex-linearity",
    "section-compatibility",
    "curvature-defect",
];

pub(super) const GALILEI: &[&str] = &[
    "galilei-classification-isomorphism",
    "galilei-classification-inverse",
    "galilei-observer-independence",
    "golden-quantum",
];

pub(super) const EINSTEIN: &[&str] = &[
    "einstein-classification-isomorphism",
    "einstein-classification-inverse",
    "einstein-observer-note",
    "golden-quantum",
];

const CONNECTIONS: usize = 5;
const TRIPLES_PER_CONNECTION: usize = 20;
const SMALL_SAMPLE: usize = 5;

fn random_connection(rng: &mut impl Rng, chart: &ChartBox) -> GaugeConnection {
    GaugeConnection::new((0..4).map(|_| random_polynomial(rng, 2, 0.5, chart)).collect())
}

fn random_pair(rng: &mut impl Rng, chart: &ChartBox) -> SpacetimePair {
    SpacetimePair::new(random_vector_field(rng, 2, 0.5, chart), random_polynomial(rng, 2, 0.5, chart))
}

fn random_hermitian(rng: &mut impl Rng, chart: &ChartBox) -> HermitianField {
    HermitianField::new(random_vector_field(rng, 2, 0.5, chart), random_polynomial(rng, 2, 0.5, chart))
}

/// Max componentwise gap between two field lists over the points.
fn components_distance(a: &[&Field], b: &[&Field], xs: &[Vec<f64>]) -> Result<f64, HarnessError> {
    let tape = Tape::new(a.iter().chain(b).copied());
    let k = a.len();
    max_over(xs, |x| {
        let v = tape.eval(x)?;
        Ok((0..k).map(|i| (v[i] - v[k + i]).abs()).fold(0.0, f64::max))
    })
}

fn herm_distance(a: &HermitianField, b: &HermitianField, xs: &[Vec<f64>]) -> Result<f64, HarnessError> {
    fn comps(h: &HermitianField) -> Vec<&Field> {
        std::iter::once(&h.b).chain(&h.x.comps).collect()
    }
    components_distance(&comps(a), &comps(b), xs)
}

fn pair_distance(a: &SpacetimePair, b: &SpacetimePair, xs: &[Vec<f64>]) -> Result<f64, HarnessError> {
    fn comps(p: &SpacetimePair) -> Vec<&Field> {
        std::iter::once(&p.ybar).chain(&p.x.comps).collect()
    }
    components_distance(&comps(a), &comps(b), xs)
}

fn zero_pair() -> SpacetimePair {
    SpacetimePair::new(VectorField::zero(4), Field::zero())
}

fn jacobi(triple: &[SpacetimePair; 3], phi: &PForm) -> SpacetimePair {
    let [a, b, c] = triple;
    let br = |p: &SpacetimePair, q: &SpacetimePair| pair_bracket(p, q, phi);
    let parts = [br(a, &br(b, c)), br(b, &br(c, a)), br(c, &br(a, b))];
    SpacetimePair::new(
        VectorField::new((0..4).map(|l| Field::sum(parts.iter().map(|p| p.x.comps[l].clone()))).collect()),
        Field::sum(parts.iter().map(|p| p.ybar.clone())),
    )
}

/// Random connections, each with a batch of random pair triples.
fn connection_triples(
    rng: &mut impl Rng,
    chart: &ChartBox,
    mut visit: impl FnMut(&GaugeConnection, &[SpacetimePair; 3]) -> Result<f64, HarnessError>,
) -> Result<f64, HarnessError> {
    let mut worst: f64 = 0.0;
    for _ in 0..CONNECTIONS {
        let c = random_connection(rng, chart);
        for _ in 0..TRIPLES_PER_CONNECTION {
            let triple = [(); 3].map(|_| random_pair(rng, chart));
            worst = worst.max(visit(&c, &triple)?);
        }
    }
    Ok(worst)
}

pub(super) fn section1(r: &mut Runner, chart: &ChartBox) -> Result<(), HarnessError> {
    let chart = *chart;
    r.check(
        "section1-classification-isomorphism",
        "[j p₁, j p₂] = j [p₁, p₂]_Φ[c]",
        1e-8,
        Bound::Max,
        |rng, n| {
            let xs = spacetime_points(rng, &chart, n);
            connection_triples(rng, &chart, |c, t| {
                let phi = c.curvature();
                max_over([(0, 1), (1, 2), (2, 0)], |(a, b)| {
                    let lhs = hermitian_bracket(&classify_j(c, &t[a]), &classify_j(c, &t[b]));
                    let rhs = classify_j(c, &pair_bracket(&t[a], &t[b], &phi));
                    herm_distance(&lhs, &rhs, &xs)
                })
            })
        },
    )?;
    r.check("pair-bracket-jacobi", "Jacobi for [ , ]_Φ with dΦ = 0", 1e-8, Bound::Max, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        connection_triples(rng, &chart, |c, t| pair_distance(&jacobi(t, &c.curvature()), &zero_pair(), &xs))
    })?;
    r.check("pair-bracket-non-closed-witness", "Φ = x⁰d¹∧d² breaks Jacobi", 1e-3, Bound::Min, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        let mut phi = PForm::zero(4, 2);
        phi.set(&[1, 2], Field::var(0));
        max_over(0..SMALL_SAMPLE, |_| {
            let triple = [(); 3].map(|_| random_pair(rng, &chart));
            pair_distance(&jacobi(&triple, &phi), &zero_pair(), &xs)
        })
    })?;
    r.check(
        "central-extension-exactness",
        "0 → map(E,ℝ) → hermitian fields → vector fields → 0",
        1e-10,
        Bound::Max,
        |rng, n| {
            let xs = spacetime_points(rng, &chart, n);
            max_over(0..SMALL_SAMPLE, |_| {
                let c = random_connection(rng, &chart);
                let phi = c.curvature();
                let (y1, y2) = (random_hermitian(rng, &chart), random_hermitian(rng, &chart));
                let ybar = random_polynomial(rng, 2, 0.5, &chart);
                let vertical = HermitianField::vertical(4, ybar.clone());
                let mut worst: f64 = 0.0;
                // projection to vector fields ignores the scalar part
                let proj = classify_h(&c, &y1);
                worst = worst.max(herm_distance(
                    &HermitianField::new(proj.x.clone(), Field::zero()),
                    &HermitianField::new(y1.x.clone(), Field::zero()),
                    &xs,
                )?);
                // kernel is exactly the vertical fields
                let kernel = classify_h(&c, &vertical);
                worst =
                    worst.max(pair_distance(&kernel, &SpacetimePair::new(VectorField::zero(4), ybar.clone()), &xs)?);
                worst = worst.max(herm_distance(&classify_j(&c, &kernel), &vertical, &xs)?);
                // projection is a Lie morphism
                let br = hermitian_bracket(&y1, &y2);
                let want = lie_bracket(&y1.x, &y2.x).expect("one chart");
                worst = worst.max(herm_distance(
                    &HermitianField::new(br.x, Field::zero()),
                    &HermitianField::new(want, Field::zero()),
                    &xs,
                )?);
                // the kernel is central modulo the action of vector fields
                let p = classify_h(&c, &y2);
                let mixed = pair_bracket(&p, &kernel, &phi);
                let act = SpacetimePair::new(VectorField::zero(4), p.x.apply(&ybar));
                worst = worst.max(pair_distance(&mixed, &act, &xs)?);
                Ok(worst)
            })
        },
    )?;
    r.check("hermitian-complex-linearity", "Y¹₁ = Y²₂ = 0, Y²₁ = −Y¹₂", 1e-9, Bound::Max, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        max_over(0..SMALL_SAMPLE, |_| {
            let y = random_hermitian(rng, &chart);
            let lin = y.to_linear();
            let mut worst = lin.hermitian_residual(&xs)?;
            worst = worst.max(herm_distance(&lin.to_hermitian(), &y, &xs)?);
            for row in lin.lie_derivative_hermitian_metric() {
                for (re, im) in row {
                    worst = worst.max(max_over(&xs, |x| Ok(re.value(x)?.abs().max(im.value(x)?.abs())))?);
                }
            }
            let beta = random_polynomial(rng, 2, 0.5, &chart);
            let direct = LinearQuantumField {
                x: random_vector_field(rng, 2, 0.5, &chart),
                ymat: [[Field::zero(), -&beta], [beta.clone(), Field::zero()]],
            };
            let back = direct.to_hermitian().to_linear();
            for a in 0..2 {
                for b in 0..2 {
                    worst = worst
                        .max(max_over(&xs, |x| Ok((back.ymat[a][b].value(x)? - direct.ymat[a][b].value(x)?).abs()))?);
                }
            }
            Ok(worst)
        })
    })?;
    r.check("section-compatibility", "X.h(Ψ,Φ) = h(Y.Ψ,Φ) + h(Ψ,Y.Φ)", 1e-9, Bound::Max, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        max_over(0..SMALL_SAMPLE, |_| {
            let y = random_hermitian(rng, &chart);
            let section = |rng: &mut _| {
                Section::new(random_polynomial(rng, 2, 0.5, &chart), random_polynomial(rng, 2, 0.5, &chart))
            };
            let (psi, phi) = (section(rng), section(rng));
            let (re, im) = hermitian_product(&psi, &phi);
            let (lre, lim) = (y.x.apply(&re), y.x.apply(&im));
            let (are, aim) = hermitian_product(&y.act(&psi), &phi);
            let (bre, bim) = hermitian_product(&psi, &y.act(&phi));
            max_over(&xs, |x| {
                let mut ev = Evaluator::new(x.clone());
                let dr = ev.eval(&lre)? - ev.eval(&are)? - ev.eval(&bre)?;
                let di = ev.eval(&lim)? - ev.eval(&aim)? - ev.eval(&bim)?;
                Ok(dr.abs().max(di.abs()))
            })
        })
    })?;
    r.check(
        "curvature-defect",
        "[c(X₁),c(X₂)] = c([X₁,X₂]) + iΦ[c](X₁,X₂)𝕀, dΦ[c] = 0",
        1e-10,
        Bound::Max,
        |rng, n| {
            let xs = spacetime_points(rng, &chart, n);
            max_over(0..SMALL_SAMPLE, |_| {
                let c = random_connection(rng, &chart);
                let phi = c.curvature();
                let (x1, x2) = (random_vector_field(rng, 2, 0.5, &chart), random_vector_field(rng, 2, 0.5, &chart));
                let lhs = hermitian_bracket(&c.lift(&x1), &c.lift(&x2));
                let lifted = c.lift(&lie_bracket(&x1, &x2).expect("one chart"));
                let rhs = HermitianField::new(lifted.x, lifted.b + phi.on_vectors(&[x1, x2]));
                let closed = exterior_derivative(&phi).expect("2-form");
                let worst = herm_distance(&lhs, &rhs, &xs)?;
                Ok(worst.max(max_over(&xs, |x| Ok(closed.max_abs_at(x)?))?))
            })
        },
    )?;
    Ok(())
}

pub(super) fn galilei(r: &mut Runner, m: &GalileiModel) -> Result<(), HarnessError> {
    let chart = m.chart_box;
    r.check("galilei-classification-isomorphism", "[𝔽f, 𝔽g] = 𝔽⟦f,g⟧", 1e-8, Bound::Max, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        let obs = galilei_suites::observers(rng, m);
        max_over(&obs, |o| {
            let conn = observed_connection(m, o);
            max_over(0..SMALL_SAMPLE, |_| {
                let f = galilei_suites::random_special(rng, &chart);
                let g = galilei_suites::random_special(rng, &chart);
                let lhs = hermitian_bracket(&galilei_f(m, &f, o, &conn), &galilei_f(m, &g, o, &conn));
                let rhs = galilei_f(m, &special_bracket_observed(m, &f, &g, o), o, &conn);
                herm_distance(&lhs, &rhs, &xs)
            })
        })
    })?;
    r.check("galilei-classification-inverse", "ℍ∘𝔽 = id, 𝔽∘ℍ = id", 1e-10, Bound::Max, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        let obs = galilei_suites::observers(rng, m);
        max_over(&obs, |o| {
            let conn = observed_connection(m, o);
            max_over(0..SMALL_SAMPLE, |_| {
                let f = galilei_suites::random_special(rng, &chart);
                let back = galilei_h(m, &galilei_f(m, &f, o, &conn), o, &conn);
                let first = max_over(&xs, |x| Ok(back.distance_at(&f, x)?))?;
                let y = random_hermitian(rng, &chart);
                let again = galilei_f(m, &galilei_h(m, &y, o, &conn), o, &conn);
                Ok(first.max(herm_distance(&again, &y, &xs)?))
            })
        })
    })?;
    r.check(
        "galilei-observer-independence",
        "Q[ǒ](X[f]) + if[ǒ]𝕀 = Q[o](X[f]) + if[o]𝕀",
        1e-8,
        Bound::Max,
        |rng, n| {
            let xs = spacetime_points(rng, &chart, n);
            let obs = galilei_suites::observers(rng, m);
            max_over(0..SMALL_SAMPLE, |_| {
                let f = galilei_suites::random_special(rng, &chart);
                let boosted = galilei_suites::random_observer(rng, &chart);
                max_over(&obs, |o| observer_independence_residual(m, &f, o, &boosted, &xs).map_err(HarnessError::from))
            })
        },
    )?;
    r.check(
        "golden-quantum",
        "𝔽(x^λ) = ix^λ𝕀, 𝔽(ℋ₀) = ∂₀, 𝔽(𝒫ᵢ) = −∂ᵢ, 𝔽(𝒞₀) = 2∂₀ − 2Aⁱ∂ᵢ + i(2A₀ − AⁱAᵢ)𝕀",
        1e-10,
        Bound::Max,
        |rng, n| {
            let xs = spacetime_points(rng, &chart, n);
            // the coordinate displays hold in charts adapted to the observer
            let obs = [crate::galilei::GObserver::chart()];
            max_over(&obs, |o| {
                let conn = observed_connection(m, o);
                let mut worst: f64 = 0.0;
                for lam in 0..4 {
                    let y = galilei_f(m, &GSpecialFunction::coordinate(lam), o, &conn);
                    worst = worst.max(herm_distance(&y, &HermitianField::vertical(4, Field::var(lam)), &xs)?);
                }
                let h = galilei_f(m, &g_examples::hamiltonian(m, o), o, &conn);
                worst =
                    worst.max(herm_distance(&h, &HermitianField::new(VectorField::basis(4, 0), Field::zero()), &xs)?);
                for i in 1..4 {
                    let p = galilei_f(m, &g_examples::momentum(m, o, i), o, &conn);
                    let want =
                        HermitianField::new(VectorField::basis(4, i).scale(&Field::constant(-1.0)), Field::zero());
                    worst = worst.max(herm_distance(&p, &want, &xs)?);
                }
                let a = observed_potential(m, o);
                let up = m.raise(&a[1..]);
                let mut x = vec![Field::constant(2.0)];
                x.extend(up.iter().map(|u| u * -2.0));
                let b = &a[0] * 2.0 - Field::sum((0..3).map(|i| &up[i] * &a[i + 1]));
                let cas = galilei_f(m, &g_examples::casimir(m, o), o, &conn);
                Ok(worst.max(herm_distance(&cas, &HermitianField::new(VectorField::new(x), b), &xs)?))
            })
        },
    )?;
    Ok(())
}

pub(super) fn einstein(r: &mut Runner, m: &EinsteinModel) -> Result<(), HarnessError> {
    let chart = m.chart_box;
    r.check("einstein-classification-isomorphism", "[𝔽f, 𝔽g] = 𝔽⟦f,g⟧", 1e-8, Bound::Max, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        max_over(0..SMALL_SAMPLE * 4, |_| {
            let f = einstein_suites::random_special(rng, &chart);
            let g = einstein_suites::random_special(rng, &chart);
            let lhs = hermitian_bracket(&einstein_f(m, &f), &einstein_f(m, &g));
            herm_distance(&lhs, &einstein_f(m, &e_special_bracket(m, &f, &g)), &xs)
        })
    })?;
    r.check("einstein-classification-inverse", "ℍ∘𝔽 = id, 𝔽∘ℍ = id", 1e-12, Bound::Max, |rng, n| {
        let xs = spacetime_points(rng, &chart, n);
        max_over(0..SMALL_SAMPLE, |_| {
            let f = einstein_suites::random_special(rng, &chart);
            let first = max_over(&xs, |x| Ok(einstein_h(m, &einstein_f(m, &f)).distance_at(&f, x)?))?;
            let y = random_hermitian(rng, &chart);
            Ok(first.max(herm_distance(&einstein_f(m, &einstein_h(m, &y)), &y, &xs)?))
        })
    })?;
    r.check(
        "einstein-observer-note",
        "𝔽 via Q[o] and f[o] equals 𝔽 via Q^e and f̄",
        1e-8,
        Bound::Max,
        |rng, n| {
            let xs = spacetime_points(rng, &chart, n);
            let obs = einstein_suites::observers(m);
            max_over(0..SMALL_SAMPLE, |_| {
                let f = einstein_suites::random_special(rng, &chart);
                max_over(&obs, |o| observer_note_residual(m, &f, o, &xs).map_err(HarnessError::from))
            })
        },
    )?;
    r.check(
        "golden-quantum",
        "𝔽(x^λ) = ix^λ𝕀, 𝔽(ℋ₀) = ∂₀, 𝔽(𝒫ᵢ) = −∂ᵢ",
        1e-10,
        Bound::Max,
        |rng, n| {
            let xs = spacetime_points(rng, &chart, n);
            let mut worst: f64 = 0.0;
            for lam in 0..4 {
                let y = einstein_f(m, &ESpecialFunction::coordinate(lam));
                worst = worst.max(herm_distance(&y, &HermitianField::vertical(4, Field::var(lam)), &xs)?);
            }
            let h = einstein_f(m, &e_examples::hamiltonian(m));
            worst = worst.max(herm_distance(&h, &HermitianField::new(VectorField::basis(4, 0), Field::zero()), &xs)?);
            for i in 1..4 {
                let p = einstein_f(m, &e_examples::momentum(m, i));
                let want = HermitianField::new(VectorField::basis(4, i).scale(&Field::constant(-1.0)), Field::zero());
                worst = worst.max(herm_distance(&p, &want, &xs)?);
            }
            Ok(worst)
        },
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{run_suite_on, LoadedModel, RunConfig};

    #[test]
    fn quantum_suites_pass() {
        let cases = [
            (include_str!("../../models/curved_galilei.model"), "galilei-quantum"),
            (include_str!("../../models/schwarzschild_like.model"), "einstein-quantum"),
            (include_str!("../../models/flat_galilei.model"), "section1-general"),
        ];
        for (src, suite) in cases {
            let m = LoadedModel::from_source(src).unwrap();
            let r = run_suite_on(&m, suite, &RunConfig::new(4, 9)).unwrap();
            let bad: Vec<_> = r.failures().collect();
            assert!(bad.is_empty(), "{suite} on {}: {bad:?}", r.model);
        }
    }
}
