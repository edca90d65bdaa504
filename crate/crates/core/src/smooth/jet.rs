use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number-like values a [`Field`](super::Field) can be evaluated into.
pub trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    fn recip(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn abs(&self) -> Self;
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// Second order truncated Taylor number in `N` variables: value, gradient
/// and symmetric Hessian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const N: usize> {
    pub value: f64,
    pub grad: [f64; N],
    pub hess: [[f64; N]; N],
}

impl<const N: usize> Jet<N> {
    pub fn constant(value: f64) -> Self {
        Jet { value, grad: [0.0; N], hess: [[0.0; N]; N] }
    }

    /// The coordinate function `x^i` evaluated at `value`.
    pub fn variable(value: f64, i: usize) -> Self {
        let mut j = Self::constant(value);
        j.grad[i] = 1.0;
        j
    }

    /// Seeds every coordinate of `point`.
    pub fn seed(point: &[f64; N]) -> [Self; N] {
        std::array::from_fn(|i| Self::variable(point[i], i))
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.value`.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Jet::constant(f0);
        for i in 0..N {
            out.grad[i] = f1 * self.grad[i];
            for k in 0..N {
                out.hess[i][k] = f1 * self.hess[i][k] + f2 * self.grad[i] * self.grad[k];
            }
        }
        out
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..N {
            for k in 0..N {
                worst = worst.max((self.hess[i][k] - self.hess[k][i]).abs());
            }
        }
        worst
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.value += rhs.value;
        for i in 0..N {
            self.grad[i] += rhs.grad[i];
            for k in 0..N {
                self.hess[i][k] += rhs.hess[i][k];
            }
        }
        self
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.value = -self.value;
        for i in 0..N {
            self.grad[i] = -self.grad[i];
            for k in 0..N {
                self.hess[i][k] = -self.hess[i][k];
            }
        }
        self
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Jet::constant(self.value * rhs.value);
        for i in 0..N {
            out.grad[i] = self.grad[i] * rhs.value + self.value * rhs.grad[i];
            for k in 0..N {
                out.hess[i][k] = self.hess[i][k] * rhs.value
                    + self.value * rhs.hess[i][k]
                    + self.grad[i] * rhs.grad[k]
                    + rhs.grad[i] * self.grad[k];
            }
        }
        out
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl<const N: usize> Scalar for Jet<N> {
    fn constant(c: f64) -> Self {
        Jet::constant(c)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn recip(&self) -> Self {
        let r = 1.0 / self.value;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }
    fn powi(&self, n: i32) -> Self {
        let x = self.value;
        let nf = n as f64;
        let d1 = if n == 0 { 0.0 } else { nf * x.powi(n - 1) };
        let d2 = if n == 0 || n == 1 { 0.0 } else { nf * (nf - 1.0) * x.powi(n - 2) };
        self.chain(x.powi(n), d1, d2)
    }
    fn sqrt(&self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * s * s))
    }
    fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }
    fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }
    fn abs(&self) -> Self {
        if self.value < 0.0 {
            -*self
        } else {
            *self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_hessian() {
        let [x, y] = Jet::<2>::seed(&[2.0, 3.0]);
        let p = x * y;
        assert_eq!(p.value, 6.0);
        assert_eq!(p.grad, [3.0, 2.0]);
        assert_eq!(p.hess, [[0.0, 1.0], [1.0, 0.0]]);
    }

    #[test]
    fn sin_at_zero() {
        let [x] = Jet::<1>::seed(&[0.0]);
        let s = x.sin();
        assert_eq!((s.value, s.grad[0], s.hess[0][0]), (0.0, 1.0, 0.0));
    }

    #[test]
    fn recip_second_derivative() {
        // d²/dx² (1/x) = 2/x³
        let [x] = Jet::<1>::seed(&[2.0]);
        let r = x.recip();
        assert!((r.grad[0] + 0.25).abs() < 1e-15);
        assert!((r.hess[0][0] - 0.25).abs() < 1e-15);
    }
}
