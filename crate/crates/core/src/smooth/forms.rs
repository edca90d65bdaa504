use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use super::field::{EvalError, Evaluator, Field};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("chart dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cannot contract a 0-form")]
    DegreeZero,
    #[error("degree {0} exceeds chart dimension {1}")]
    DegreeOverflow(usize, usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Coefficient ring for vector fields and forms: symbolic fields or numbers.
pub trait Coef: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
}

impl Coef for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Coef for Field {
    fn zero() -> Self {
        Field::zero()
    }
    fn is_zero(&self) -> bool {
        Field::is_zero(self)
    }
}

/// Vector field `X^λ ∂_λ` on an `n`-dimensional chart.
#[derive(Clone, Debug)]
pub struct VectorField<T = Field> {
    pub comps: Vec<T>,
}

impl<T: Coef> VectorField<T> {
    pub fn new(comps: Vec<T>) -> Self {
        VectorField { comps }
    }

    pub fn zero(dim: usize) -> Self {
        VectorField { comps: vec![T::zero(); dim] }
    }

    /// Coordinate frame vector `∂_i`.
    pub fn basis(dim: usize, i: usize) -> Self
    where
        T: From<f64>,
    {
        let mut v = Self::zero(dim);
        v.comps[i] = T::from(1.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn scale(&self, s: &T) -> Self {
        VectorField { comps: self.comps.iter().map(|c| s.clone() * c.clone()).collect() }
    }
}

impl<T: Coef> Add for VectorField<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "vector field dimension mismatch");
        VectorField { comps: self.comps.into_iter().zip(rhs.comps).map(|(a, b)| a + b).collect() }
    }
}

impl<T: Coef> Sub for VectorField<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "vector field dimension mismatch");
        VectorField { comps: self.comps.into_iter().zip(rhs.comps).map(|(a, b)| a - b).collect() }
    }
}

impl VectorField<Field> {
    /// Components at a point.
    pub fn at(&self, point: &[f64]) -> Result<VectorField<f64>, EvalError> {
        let mut ev = Evaluator::new(point.to_vec());
        let comps = self.comps.iter().map(|c| ev.eval(c)).collect::<Result<_, _>>()?;
        Ok(VectorField { comps })
    }

    /// Directional derivative `X.f = X^λ ∂_λ f`.
    pub fn apply(&self, f: &Field) -> Field {
        lie_derivative_scalar(self, f)
    }
}

/// `[X,Y]^μ = X^ν ∂_ν Y^μ − Y^ν ∂_ν X^μ`
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField, FormError> {
    if x.dim() != y.dim() {
        return Err(FormError::DimensionMismatch(x.dim(), y.dim()));
    }
    let comps = (0..x.dim())
        .map(|mu| lie_derivative_scalar(x, &y.comps[mu]) - lie_derivative_scalar(y, &x.comps[mu]))
        .collect();
    Ok(VectorField { comps })
}

/// `X.f = X^λ ∂_λ f`
pub fn lie_derivative_scalar(x: &VectorField, f: &Field) -> Field {
    Field::sum(x.comps.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(l, c)| c * f.diff(l)))
}

/// Sign of the permutation sorting `idx`, or `None` if an index repeats.
pub fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Differential form of degree `p` on an `n`-dimensional chart.
///
/// Components are stored on strictly increasing index tuples only, so
/// antisymmetry holds by construction. The wedge product follows the
/// determinant convention `d^μ∧d^λ = d^μ⊗d^λ − d^λ⊗d^μ`, hence
/// `ω(∂_{λ1},…,∂_{λp}) = ω_{λ1…λp}` for increasing indices. In this
/// convention the curvature of a potential `A` has components
/// `∂_μ A_λ − ∂_λ A_μ`.
#[derive(Clone, Debug)]
pub struct PForm<T = Field> {
    dim: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, T>,
}

impl<T: Coef> PForm<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        PForm { dim, degree, comps: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, value: T) -> Self {
        let mut f = Self::zero(dim, 0);
        f.set(&[], value);
        f
    }

    pub fn one_form(comps: Vec<T>) -> Self {
        let mut f = Self::zero(comps.len(), 1);
        for (i, c) in comps.into_iter().enumerate() {
            f.set(&[i], c);
        }
        f
    }

    /// The 2-form with components `a_{λμ}` taken from the strictly upper
    /// triangle of `a`.
    pub fn two_form(a: &[Vec<T>]) -> Self {
        let n = a.len();
        let mut f = Self::zero(n, 2);
        for l in 0..n {
            for m in l + 1..n {
                f.set(&[l, m], a[l][m].clone());
            }
        }
        f
    }

    /// Coordinate coframe `d^i`.
    pub fn basis(dim: usize, i: usize) -> Self
    where
        T: From<f64>,
    {
        let mut f = Self::zero(dim, 1);
        f.set(&[i], T::from(1.0));
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Component on any index tuple, with the antisymmetry sign applied.
    pub fn get(&self, idx: &[usize]) -> T {
        match sort_sign(idx) {
            None => T::zero(),
            Some((sorted, sign)) => match self.comps.get(&sorted) {
                None => T::zero(),
                Some(c) if sign > 0.0 => c.clone(),
                Some(c) => -c.clone(),
            },
        }
    }

    /// Sets the component on `idx`; the index tuple may be unsorted.
    pub fn set(&mut self, idx: &[usize], value: T) {
        assert_eq!(idx.len(), self.degree, "index length must equal the degree");
        let Some((sorted, sign)) = sort_sign(idx) else { return };
        let value = if sign > 0.0 { value } else { -value };
        if value.is_zero() {
            self.comps.remove(&sorted);
        } else {
            self.comps.insert(sorted, value);
        }
    }

    fn accumulate(&mut self, sorted: Vec<usize>, value: T) {
        if value.is_zero() {
            return;
        }
        let next = match self.comps.remove(&sorted) {
            Some(c) => c + value,
            None => value,
        };
        if !next.is_zero() {
            self.comps.insert(sorted, next);
        }
    }

    /// Stored (increasing index, component) pairs.
    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &T)> {
        self.comps.iter()
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (k, v) in &self.comps {
            out.accumulate(k.clone(), s.clone() * v.clone());
        }
        out
    }

    /// Evaluation on `degree` vectors: `Σ_I ω_I det[v_k^{I_j}]`.
    pub fn on_vectors(&self, vecs: &[VectorField<T>]) -> T {
        assert_eq!(vecs.len(), self.degree);
        let mut total = T::zero();
        for (idx, c) in &self.comps {
            let mut det = T::zero();
            permutations(self.degree, &mut |perm, sign| {
                let mut term = T::zero();
                let mut first = true;
                for (k, &j) in perm.iter().enumerate() {
                    let factor = vecs[k].comps[idx[j]].clone();
                    term = if first { factor } else { term * factor };
                    first = false;
                }
                if first {
                    return;
                }
                det = if sign > 0.0 { det.clone() + term } else { det.clone() - term };
            });
            total = if self.degree == 0 { total + c.clone() } else { total + c.clone() * det };
        }
        total
    }

    pub fn max_abs(&self) -> f64
    where
        T: Into<f64> + Copy,
    {
        self.comps.values().map(|c| (*c).into().abs()).fold(0.0, f64::max)
    }
}

fn permutations(n: usize, visit: &mut dyn FnMut(&[usize], f64)) {
    fn rec(v: &mut Vec<usize>, k: usize, sign: f64, visit: &mut dyn FnMut(&[usize], f64)) {
        if k == v.len() {
            visit(v, sign);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            rec(v, k + 1, if i == k { sign } else { -sign }, visit);
            v.swap(k, i);
        }
    }
    let mut v: Vec<usize> = (0..n).collect();
    rec(&mut v, 0, 1.0, visit);
}

impl<T: Coef> Add for PForm<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!((self.dim, self.degree), (rhs.dim, rhs.degree), "form shape mismatch");
        for (k, v) in rhs.comps {
            self.accumulate(k, v);
        }
        self
    }
}

impl<T: Coef> Sub for PForm<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Coef> Neg for PForm<T> {
    type Output = Self;
    fn neg(self) -> Self {
        PForm { dim: self.dim, degree: self.degree, comps: self.comps.into_iter().map(|(k, v)| (k, -v)).collect() }
    }
}

/// Exterior product in the determinant convention.
pub fn wedge<T: Coef>(a: &PForm<T>, b: &PForm<T>) -> Result<PForm<T>, FormError> {
    if a.dim != b.dim {
        return Err(FormError::DimensionMismatch(a.dim, b.dim));
    }
    let degree = a.degree + b.degree;
    if degree > a.dim {
        return Err(FormError::DegreeOverflow(degree, a.dim));
    }
    let mut out = PForm::zero(a.dim, degree);
    for (i, ca) in &a.comps {
        for (j, cb) in &b.comps {
            let joined: Vec<usize> = i.iter().chain(j.iter()).copied().collect();
            if let Some((sorted, sign)) = sort_sign(&joined) {
                let term = ca.clone() * cb.clone();
                out.accumulate(sorted, if sign > 0.0 { term } else { -term });
            }
        }
    }
    Ok(out)
}

/// Interior product `(i(X)ω)_{λ2…λp} = X^{λ1} ω_{λ1λ2…λp}`.
pub fn contract<T: Coef>(x: &VectorField<T>, w: &PForm<T>) -> Result<PForm<T>, FormError> {
    if w.degree == 0 {
        return Err(FormError::DegreeZero);
    }
    if x.dim() != w.dim {
        return Err(FormError::DimensionMismatch(x.dim(), w.dim));
    }
    let mut out = PForm::zero(w.dim, w.degree - 1);
    for (idx, c) in &w.comps {
        for k in 0..idx.len() {
            let xk = &x.comps[idx[k]];
            if xk.is_zero() {
                continue;
            }
            let mut rest = idx.clone();
            rest.remove(k);
            let term = xk.clone() * c.clone();
            out.accumulate(rest, if k % 2 == 0 { term } else { -term });
        }
    }
    Ok(out)
}

impl PForm<Field> {
    /// Components at a point.
    pub fn at(&self, point: &[f64]) -> Result<PForm<f64>, EvalError> {
        let mut ev = Evaluator::new(point.to_vec());
        let mut out = PForm::zero(self.dim, self.degree);
        for (k, v) in &self.comps {
            out.accumulate(k.clone(), ev.eval(v)?);
        }
        Ok(out)
    }

    /// Largest absolute component at a point.
    pub fn max_abs_at(&self, point: &[f64]) -> Result<f64, EvalError> {
        Ok(self.at(point)?.comps.values().fold(0.0_f64, |m, c| m.max(c.abs())))
    }

    /// Pullback along the map whose target coordinates are `map` (fields on
    /// a chart of dimension `src_dim`).
    pub fn pullback(&self, map: &[Field], src_dim: usize) -> PForm<Field> {
        assert_eq!(map.len(), self.dim, "pullback map must give every target coordinate");
        let subst = |i: usize| map.get(i).cloned();
        let differentials: Vec<PForm<Field>> =
            map.iter().map(|phi| PForm::one_form((0..src_dim).map(|l| phi.diff(l)).collect())).collect();
        let mut out = PForm::zero(src_dim, self.degree);
        for (idx, c) in &self.comps {
            let mut acc = PForm::scalar(src_dim, c.substitute(&subst));
            for &i in idx {
                acc = wedge(&acc, &differentials[i]).expect("pullback degree within bounds");
            }
            out = out + acc;
        }
        out
    }
}

/// `(dω)_{λ0…λp} = Σ_k (−1)^k ∂_{λk} ω_{λ0…λ̂k…λp}`
pub fn exterior_derivative(w: &PForm<Field>) -> Result<PForm<Field>, FormError> {
    if w.degree >= w.dim {
        return Err(FormError::DegreeOverflow(w.degree + 1, w.dim));
    }
    let mut out = PForm::zero(w.dim, w.degree + 1);
    for (idx, c) in &w.comps {
        for mu in 0..w.dim {
            if idx.contains(&mu) {
                continue;
            }
            let d = c.diff(mu);
            if d.is_zero() {
                continue;
            }
            let mut joined = vec![mu];
            joined.extend(idx.iter().copied());
            let (sorted, sign) = sort_sign(&joined).expect("distinct indices");
            out.accumulate(sorted, if sign > 0.0 { d } else { -d });
        }
    }
    Ok(out)
}

/// Lie derivative of a form through Cartan's formula `i(X)d + d i(X)`.
pub fn lie_derivative_form(x: &VectorField, w: &PForm<Field>) -> Result<PForm<Field>, FormError> {
    let mut out = if w.degree < w.dim { contract(x, &exterior_derivative(w)?)? } else { PForm::zero(w.dim, w.degree) };
    if w.degree > 0 {
        out = out + exterior_derivative(&contract(x, w)?)?;
    } else {
        let f = w.get(&[]);
        out = PForm::scalar(w.dim, lie_derivative_scalar(x, &f));
    }
    Ok(out)
}

/// Lie derivative of a form from the coordinate formula
/// `(L_X ω)_I = X^μ ∂_μ ω_I + Σ_k ∂_{I_k} X^μ ω_{I_1…μ…I_p}`.
pub fn lie_derivative_form_direct(x: &VectorField, w: &PForm<Field>) -> PForm<Field> {
    let n = w.dim;
    let mut out = PForm::zero(n, w.degree);
    for_each_increasing(n, w.degree, &mut |idx| {
        let mut terms = vec![lie_derivative_scalar(x, &w.get(idx))];
        for k in 0..idx.len() {
            for mu in 0..n {
                let dx = x.comps[mu].diff(idx[k]);
                if dx.is_zero() {
                    continue;
                }
                let mut j = idx.to_vec();
                j[k] = mu;
                terms.push(dx * w.get(&j));
            }
        }
        out.set(idx, Field::sum(terms));
    });
    out
}

/// Visits every strictly increasing index tuple of length `p` below `n`.
pub fn for_each_increasing(n: usize, p: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(n: usize, p: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == p {
            visit(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, p, i + 1, cur, visit);
            cur.pop();
        }
    }
    rec(n, p, 0, &mut Vec::new(), visit);
}

/// Antisymmetric contravariant 2-tensor `Λ^{AB}`.
#[derive(Clone, Debug)]
pub struct Bivector<T = Field> {
    pub comps: Vec<Vec<T>>,
}

impl<T: Coef> Bivector<T> {
    pub fn zero(dim: usize) -> Self {
        Bivector { comps: vec![vec![T::zero(); dim]; dim] }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    /// `a∧b` with components `a^A b^B − a^B b^A`.
    pub fn wedge(a: &VectorField<T>, b: &VectorField<T>) -> Self {
        let n = a.dim();
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                out.comps[i][k] = a.comps[i].clone() * b.comps[k].clone() - a.comps[k].clone() * b.comps[i].clone();
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        Bivector { comps: self.comps.iter().map(|row| row.iter().map(|c| s.clone() * c.clone()).collect()).collect() }
    }
}

impl<T: Coef> Add for Bivector<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Bivector {
            comps: self
                .comps
                .into_iter()
                .zip(rhs.comps)
                .map(|(a, b)| a.into_iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

impl Bivector<Field> {
    /// `i(df∧dg)Λ = Λ^{AB} ∂_A f ∂_B g`
    pub fn pair(&self, f: &Field, g: &Field) -> Field {
        let n = self.dim();
        let df: Vec<Field> = (0..n).map(|a| f.diff(a)).collect();
        let dg: Vec<Field> = (0..n).map(|b| g.diff(b)).collect();
        let mut terms = Vec::new();
        for a in 0..n {
            if df[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if !self.comps[a][b].is_zero() && !dg[b].is_zero() {
                    terms.push(&self.comps[a][b] * &df[a] * &dg[b]);
                }
            }
        }
        Field::sum(terms)
    }

    /// `i(df)Λ`, the vector field `Λ^{AB} ∂_A f ∂_B`.
    pub fn sharp(&self, f: &Field) -> VectorField {
        let n = self.dim();
        let df: Vec<Field> = (0..n).map(|a| f.diff(a)).collect();
        let comps = (0..n).map(|b| Field::sum((0..n).map(|a| &self.comps[a][b] * &df[a]))).collect();
        VectorField { comps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Field {
        Field::var(i)
    }

    #[test]
    fn frames_commute() {
        let d0 = VectorField::<Field>::basis(4, 0);
        let d1 = VectorField::<Field>::basis(4, 1);
        let b = lie_bracket(&d0, &d1).unwrap();
        assert!(b.comps.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn bracket_hand_expansion() {
        // [x¹∂₀, ∂₁] = −∂₀
        let mut a = VectorField::<Field>::zero(4);
        a.comps[0] = x(1);
        let b = VectorField::<Field>::basis(4, 1);
        let c = lie_bracket(&a, &b).unwrap();
        assert_eq!(c.comps[0].as_constant(), Some(-1.0));
        assert!(c.comps[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn d_of_x1_d2() {
        let mut w = PForm::zero(4, 1);
        w.set(&[2], x(1));
        let dw = exterior_derivative(&w).unwrap();
        assert_eq!(dw.get(&[1, 2]).as_constant(), Some(1.0));
        assert_eq!(dw.get(&[2, 1]).as_constant(), Some(-1.0));
        assert_eq!(dw.components().count(), 1);
    }

    #[test]
    fn contraction_examples() {
        let w = wedge(&PForm::<Field>::basis(4, 0), &PForm::basis(4, 1)).unwrap();
        let c = contract(&VectorField::basis(4, 0), &w).unwrap();
        assert_eq!(c.get(&[1]).as_constant(), Some(1.0));
        assert!(matches!(
            contract(&VectorField::<Field>::basis(4, 0), &PForm::scalar(4, Field::one())),
            Err(FormError::DegreeZero)
        ));
    }

    #[test]
    fn wedge_volume_is_one() {
        let b = |i| PForm::<f64>::basis(4, i);
        let a = wedge(&b(0), &b(1)).unwrap();
        let c = wedge(&b(2), &b(3)).unwrap();
        let vol = wedge(&a, &c).unwrap();
        let frame: Vec<VectorField<f64>> = (0..4).map(|i| VectorField::basis(4, i)).collect();
        assert_eq!(vol.on_vectors(&frame), 1.0);
        assert!(wedge(&b(0), &b(0)).unwrap().components().next().is_none());
        let ab = wedge(&b(0), &b(1)).unwrap();
        let ba = wedge(&b(1), &b(0)).unwrap();
        assert_eq!(ab.get(&[0, 1]), -ba.get(&[0, 1]));
        assert!(matches!(wedge(&vol, &b(0)), Err(FormError::DegreeOverflow(5, 4))));
    }

    #[test]
    fn curvature_convention() {
        // d(A) for A = x1 d2 has component ∂₁A₂ − ∂₂A₁ on (1,2).
        let a = PForm::one_form(vec![Field::zero(), Field::zero(), x(1), Field::zero()]);
        let f = exterior_derivative(&a).unwrap();
        let e1 = VectorField::<f64>::basis(4, 1);
        let e2 = VectorField::<f64>::basis(4, 2);
        assert_eq!(f.at(&[0.0; 4]).unwrap().on_vectors(&[e1, e2]), 1.0);
    }

    #[test]
    fn pullback_of_closed_form_commutes_with_d() {
        let w = PForm::one_form(vec![x(1) * x(2), x(0).sin(), Field::zero()]);
        let map = vec![x(0) * x(1), x(1) + x(0).powi(2), x(0)];
        let lhs = exterior_derivative(&w.pullback(&map, 2)).unwrap();
        let rhs = exterior_derivative(&w).unwrap().pullback(&map, 2);
        let p = [0.4, -0.3];
        let diff = (lhs - rhs).max_abs_at(&p).unwrap();
        assert!(diff < 1e-14);
    }
}
