//! The quantum line bundle over a spacetime chart in a fixed quantum basis:
//! Hermitian connections, sections, linear and Hermitian vector fields,
//! and the classification of Hermitian fields by pairs (vector field,
//! function).

use crate::smooth::{exterior_derivative, lie_bracket, EvalError, Evaluator, Field, PForm, VectorField};

/// Hermitian connection `d^λ ⊗ (∂_λ + i A_λ 𝕀)` in the fixed basis.
#[derive(Clone, Debug)]
pub struct GaugeConnection {
    pub potential: Vec<Field>,
}

impl GaugeConnection {
    pub fn new(potential: Vec<Field>) -> Self {
        GaugeConnection { potential }
    }

    pub fn dim(&self) -> usize {
        self.potential.len()
    }

    /// `A_λ X^λ`
    pub fn contract(&self, x: &VectorField) -> Field {
        Field::sum(self.potential.iter().zip(&x.comps).map(|(a, c)| a * c))
    }

    /// Curvature 2-form with components `∂_λ A_μ − ∂_μ A_λ`.
    ///
    /// This normalization makes the defect of the horizontal lift
    /// `[c(X₁), c(X₂)] − c([X₁,X₂])` equal to `i Φ(X₁,X₂) 𝕀`.
    pub fn curvature(&self) -> PForm {
        exterior_derivative(&PForm::one_form(self.potential.clone())).expect("1-form below top degree")
    }

    /// Horizontal lift `c(X) = X + i A(X) 𝕀`.
    pub fn lift(&self, x: &VectorField) -> HermitianField {
        HermitianField { x: x.clone(), b: self.contract(x) }
    }
}

/// Complex function `ψ = re + i im`, the component of a section in the
/// quantum basis.
#[derive(Clone, Debug)]
pub struct Section {
    pub re: Field,
    pub im: Field,
}

impl Section {
    pub fn new(re: Field, im: Field) -> Self {
        Section { re, im }
    }

    pub fn real(re: Field) -> Self {
        Section { re, im: Field::zero() }
    }

    pub fn at(&self, point: &[f64]) -> Result<(f64, f64), EvalError> {
        let mut ev = Evaluator::new(point.to_vec());
        Ok((ev.eval(&self.re)?, ev.eval(&self.im)?))
    }
}

/// Hermitian fibre product `h(ψ, φ) = conj(ψ) φ` as (real, imaginary).
pub fn hermitian_product(psi: &Section, phi: &Section) -> (Field, Field) {
    (&psi.re * &phi.re + &psi.im * &phi.im, &psi.re * &phi.im - &psi.im * &phi.re)
}

/// Hermitian vector field `X^λ ∂_λ + i b 𝕀`.
#[derive(Clone, Debug)]
pub struct HermitianField {
    pub x: VectorField,
    pub b: Field,
}

impl HermitianField {
    pub fn new(x: VectorField, b: Field) -> Self {
        HermitianField { x, b }
    }

    /// Purely vertical field `i b 𝕀`.
    pub fn vertical(dim: usize, b: Field) -> Self {
        HermitianField { x: VectorField::zero(dim), b }
    }

    /// `ψ ↦ X.ψ − i b ψ`
    pub fn act(&self, s: &Section) -> Section {
        Section { re: self.x.apply(&s.re) + &self.b * &s.im, im: self.x.apply(&s.im) - &self.b * &s.re }
    }

    /// The same field as a fibrewise linear field with matrix `[[0,−b],[b,0]]`.
    pub fn to_linear(&self) -> LinearQuantumField {
        LinearQuantumField { x: self.x.clone(), ymat: [[Field::zero(), -&self.b], [self.b.clone(), Field::zero()]] }
    }

    /// Largest component difference at `point`.
    pub fn distance_at(&self, other: &HermitianField, point: &[f64]) -> Result<f64, EvalError> {
        let mut ev = Evaluator::new(point.to_vec());
        let mut worst = (ev.eval(&self.b)? - ev.eval(&other.b)?).abs();
        for (a, b) in self.x.comps.iter().zip(&other.x.comps) {
            worst = worst.max((ev.eval(a)? - ev.eval(b)?).abs());
        }
        Ok(worst)
    }
}

/// Lie bracket of Hermitian fields: `([X₁,X₂], X₁.b₂ − X₂.b₁)`.
pub fn hermitian_bracket(y1: &HermitianField, y2: &HermitianField) -> HermitianField {
    HermitianField {
        x: lie_bracket(&y1.x, &y2.x).expect("fields on one chart"),
        b: y1.x.apply(&y2.b) - y2.x.apply(&y1.b),
    }
}

/// Projectable fibrewise linear field `X^λ ∂_λ + Yᵃ_b w^b ∂_a` on the
/// real fibre coordinates `(w¹, w²)`.
#[derive(Clone, Debug)]
pub struct LinearQuantumField {
    pub x: VectorField,
    /// `ymat[a][b] = Yᵃ_b`
    pub ymat: [[Field; 2]; 2],
}

/// Coefficients of `L(Y)h` on the monomials `w^a č^k`, indexed
/// `[k][a]`, each as (real, imaginary).
pub type MetricDerivative = [[(Field, Field); 2]; 2];

impl LinearQuantumField {
    /// Liouville field `w^a ∂_a`.
    pub fn liouville(dim: usize) -> Self {
        LinearQuantumField {
            x: VectorField::zero(dim),
            ymat: [[Field::one(), Field::zero()], [Field::zero(), Field::one()]],
        }
    }

    /// Lie derivative of the Hermitian metric along the field.
    pub fn lie_derivative_hermitian_metric(&self) -> MetricDerivative {
        let y = &self.ymat;
        let sym = &y[1][0] + &y[0][1];
        let trace = &y[0][0] + &y[1][1];
        [[(&y[0][0] * 2.0, Field::zero()), (sym.clone(), -&trace)], [(sym, trace), (&y[1][1] * 2.0, Field::zero())]]
    }

    /// Largest violation of `Y¹₁ = Y²₂ = 0`, `Y²₁ = −Y¹₂` over `points`.
    pub fn hermitian_residual(&self, points: &[Vec<f64>]) -> Result<f64, EvalError> {
        let y = &self.ymat;
        let mut worst: f64 = 0.0;
        for p in points {
            let mut ev = Evaluator::new(p.clone());
            worst = worst
                .max(ev.eval(&y[0][0])?.abs())
                .max(ev.eval(&y[1][1])?.abs())
                .max((ev.eval(&y[1][0])? + ev.eval(&y[0][1])?).abs());
        }
        Ok(worst)
    }

    /// Hermitian test at tolerance `tol`, with the residual.
    pub fn is_hermitian(&self, points: &[Vec<f64>], tol: f64) -> Result<(bool, f64), EvalError> {
        let r = self.hermitian_residual(points)?;
        Ok((r < tol, r))
    }

    /// Reads off `b = Y²₁`; meaningful when the field is Hermitian.
    pub fn to_hermitian(&self) -> HermitianField {
        HermitianField { x: self.x.clone(), b: self.ymat[1][0].clone() }
    }
}

/// Pair of a spacetime vector field and a function.
#[derive(Clone, Debug)]
pub struct SpacetimePair {
    pub x: VectorField,
    pub ybar: Field,
}

impl SpacetimePair {
    pub fn new(x: VectorField, ybar: Field) -> Self {
        SpacetimePair { x, ybar }
    }

    pub fn distance_at(&self, other: &SpacetimePair, point: &[f64]) -> Result<f64, EvalError> {
        HermitianField::new(self.x.clone(), self.ybar.clone())
            .distance_at(&HermitianField::new(other.x.clone(), other.ybar.clone()), point)
    }
}

/// Twisted bracket `([X₁,X₂], Φ(X₁,X₂) + X₁.Ȳ₂ − X₂.Ȳ₁)`; a Lie bracket
/// exactly when `dΦ = 0`.
pub fn pair_bracket(p1: &SpacetimePair, p2: &SpacetimePair, phi: &PForm) -> SpacetimePair {
    SpacetimePair {
        x: lie_bracket(&p1.x, &p2.x).expect("fields on one chart"),
        ybar: phi.on_vectors(&[p1.x.clone(), p2.x.clone()]) + p1.x.apply(&p2.ybar) - p2.x.apply(&p1.ybar),
    }
}

/// `Y ↦ (X, b − A(X))`
pub fn classify_h(c: &GaugeConnection, y: &HermitianField) -> SpacetimePair {
    SpacetimePair { x: y.x.clone(), ybar: &y.b - &c.contract(&y.x) }
}

/// `(X, Ȳ) ↦ X + i(A(X) + Ȳ)𝕀`
pub fn classify_j(c: &GaugeConnection, p: &SpacetimePair) -> HermitianField {
    HermitianField { x: p.x.clone(), b: c.contract(&p.x) + &p.ybar }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Field {
        Field::var(i)
    }

    fn vf(c: [Field; 4]) -> VectorField {
        VectorField::new(c.to_vec())
    }

    fn zero() -> Field {
        Field::zero()
    }

    const P: [f64; 4] = [0.3, -0.7, 0.4, 1.1];

    #[test]
    fn hermitian_characterization() {
        let beta = x(1) * x(2);
        let pts = vec![P.to_vec(), vec![1.0, 2.0, -1.0, 0.5]];
        let herm = LinearQuantumField { x: VectorField::zero(4), ymat: [[zero(), -&beta], [beta.clone(), zero()]] };
        assert!(herm.is_hermitian(&pts, 1e-9).unwrap().0);
        assert!(!LinearQuantumField::liouville(4).is_hermitian(&pts, 1e-9).unwrap().0);
        let sym = LinearQuantumField { x: VectorField::zero(4), ymat: [[zero(), beta.clone()], [beta, zero()]] };
        assert!(!sym.is_hermitian(&pts, 1e-9).unwrap().0);
    }

    #[test]
    fn liouville_metric_derivative() {
        let table = LinearQuantumField::liouville(4).lie_derivative_hermitian_metric();
        assert_eq!(table[0][0].0.as_constant(), Some(2.0));
        assert_eq!(table[1][1].0.as_constant(), Some(2.0));
        assert_eq!(table[0][1].1.as_constant(), Some(-2.0));
    }

    #[test]
    fn vertical_action() {
        let y = HermitianField::vertical(4, Field::one());
        let s = y.act(&Section::real(Field::one()));
        assert_eq!((s.re.as_constant(), s.im.as_constant()), (Some(0.0), Some(-1.0)));
        let d0 = HermitianField::new(VectorField::basis(4, 0), zero());
        assert_eq!(d0.act(&Section::real(x(0))).re.as_constant(), Some(1.0));
    }

    #[test]
    fn lift_and_vertical_commutator() {
        let c = GaugeConnection::new(vec![x(1), zero(), x(0) * x(3), zero()]);
        let xf = vf([Field::one(), x(2), zero(), x(0)]);
        let ybar = x(1).sin();
        let br = hermitian_bracket(&c.lift(&xf), &HermitianField::vertical(4, ybar.clone()));
        assert!(br.x.comps.iter().all(|f| f.is_zero()));
        let expect = xf.apply(&ybar);
        assert!((br.b.value(&P).unwrap() - expect.value(&P).unwrap()).abs() < 1e-15);
        let vv = hermitian_bracket(&HermitianField::vertical(4, x(0)), &HermitianField::vertical(4, x(1)));
        assert!(vv.b.is_zero());
    }

    #[test]
    fn uniform_field_curvature_from_defect() {
        // A = (B/2)(x¹d² − x²d¹)
        let b = 0.8;
        let c = GaugeConnection::new(vec![zero(), -(x(2) * (b / 2.0)), x(1) * (b / 2.0), zero()]);
        let e1 = VectorField::basis(4, 1);
        let e2 = VectorField::basis(4, 2);
        let defect = hermitian_bracket(&c.lift(&e1), &c.lift(&e2)).b;
        let phi = c.curvature().on_vectors(&[e1, e2]);
        assert!((defect.value(&P).unwrap() - b).abs() < 1e-15);
        assert!((phi.value(&P).unwrap() - b).abs() < 1e-15);
    }

    #[test]
    fn classification_round_trips() {
        let c = GaugeConnection::new(vec![x(1) * x(2), x(0), zero(), x(3).powi(2)]);
        let xf = vf([x(1), zero(), Field::one(), x(0) * x(2)]);
        let lifted = classify_h(&c, &c.lift(&xf));
        assert!(lifted.ybar.value(&P).unwrap().abs() < 1e-15);
        let p = SpacetimePair::new(xf, x(2).exp());
        let back = classify_h(&c, &classify_j(&c, &p));
        assert!(back.distance_at(&p, &P).unwrap() < 1e-12);
        let vertical = classify_j(&c, &SpacetimePair::new(VectorField::zero(4), x(1)));
        assert!(vertical.x.comps.iter().all(Field::is_zero));
    }
}
