//! Scale dimensions: rational powers of time `T`, length `L` and mass `M`.
//!
//! Every physical constant of a model is a [`DimScalar`]. Products add
//! exponents, sums demand equal dimensions.

use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

/// Rational exponent, always in lowest terms.
pub type Exponent = Ratio<i32>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DimError {
    #[error("dimension mismatch: {left} vs {right}")]
    Mismatch { left: Dimension, right: Dimension },
    #[error("exponent overflow")]
    Overflow,
    #[error("cannot parse dimension `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dimension {
    pub t_pow: Exponent,
    pub l_pow: Exponent,
    pub m_pow: Exponent,
}

fn checked_add(a: Exponent, b: Exponent) -> Result<Exponent, DimError> {
    let den = a.denom().checked_mul(*b.denom()).ok_or(DimError::Overflow)?;
    let lhs = a.numer().checked_mul(*b.denom()).ok_or(DimError::Overflow)?;
    let rhs = b.numer().checked_mul(*a.denom()).ok_or(DimError::Overflow)?;
    let num = lhs.checked_add(rhs).ok_or(DimError::Overflow)?;
    Ok(Ratio::new(num, den))
}

impl Dimension {
    pub const NONE: Dimension =
        Dimension { t_pow: Ratio::new_raw(0, 1), l_pow: Ratio::new_raw(0, 1), m_pow: Ratio::new_raw(0, 1) };

    pub fn new(t: (i32, i32), l: (i32, i32), m: (i32, i32)) -> Self {
        Dimension { t_pow: Ratio::new(t.0, t.1), l_pow: Ratio::new(l.0, l.1), m_pow: Ratio::new(m.0, m.1) }
    }

    pub fn time() -> Self {
        Self::new((1, 1), (0, 1), (0, 1))
    }
    pub fn length() -> Self {
        Self::new((0, 1), (1, 1), (0, 1))
    }
    pub fn mass() -> Self {
        Self::new((0, 1), (0, 1), (1, 1))
    }
    /// `T^-1 L^2 M`
    pub fn action() -> Self {
        Self::new((-1, 1), (2, 1), (1, 1))
    }
    /// `T^-1 L`
    pub fn velocity() -> Self {
        Self::new((-1, 1), (1, 1), (0, 1))
    }
    /// `T^-1 L^3/2 M^1/2`
    pub fn charge() -> Self {
        Self::new((-1, 1), (3, 2), (1, 2))
    }

    pub fn is_none(&self) -> bool {
        *self == Self::NONE
    }

    pub fn checked_mul(self, rhs: Dimension) -> Result<Dimension, DimError> {
        Ok(Dimension {
            t_pow: checked_add(self.t_pow, rhs.t_pow)?,
            l_pow: checked_add(self.l_pow, rhs.l_pow)?,
            m_pow: checked_add(self.m_pow, rhs.m_pow)?,
        })
    }

    pub fn inv(self) -> Dimension {
        Dimension { t_pow: -self.t_pow, l_pow: -self.l_pow, m_pow: -self.m_pow }
    }

    pub fn checked_div(self, rhs: Dimension) -> Result<Dimension, DimError> {
        self.checked_mul(rhs.inv())
    }

    pub fn powi(self, n: i32) -> Result<Dimension, DimError> {
        let scale = |e: Exponent| -> Result<Exponent, DimError> {
            let num = e.numer().checked_mul(n).ok_or(DimError::Overflow)?;
            Ok(Ratio::new(num, *e.denom()))
        };
        Ok(Dimension { t_pow: scale(self.t_pow)?, l_pow: scale(self.l_pow)?, m_pow: scale(self.m_pow)? })
    }
}

impl Mul for Dimension {
    type Output = Dimension;
    /// Panics on exponent overflow; use [`Dimension::checked_mul`] otherwise.
    fn mul(self, rhs: Dimension) -> Dimension {
        self.checked_mul(rhs).expect("dimension exponent overflow")
    }
}

impl Div for Dimension {
    type Output = Dimension;
    fn div(self, rhs: Dimension) -> Dimension {
        self.checked_div(rhs).expect("dimension exponent overflow")
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_none() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (sym, e) in [("T", self.t_pow), ("L", self.l_pow), ("M", self.m_pow)] {
            if e == Ratio::from_integer(0) {
                continue;
            }
            if e == Ratio::from_integer(1) {
                parts.push(sym.to_string());
            } else {
                parts.push(format!("{sym}^{e}"));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Dimension {
    type Err = DimError;

    /// Accepts space separated factors such as `T^-1 L^3/2 M^1/2`; `1` or an
    /// empty string is dimensionless.
    fn from_str(s: &str) -> Result<Self, DimError> {
        let err = || DimError::Parse(s.to_string());
        let mut dim = Dimension::NONE;
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (sym, pow) = match tok.split_once('^') {
                Some((sym, pow)) => (sym, pow),
                None => (tok, "1"),
            };
            let pow: Exponent = match pow.split_once('/') {
                Some((n, d)) => {
                    let n: i32 = n.parse().map_err(|_| err())?;
                    let d: i32 = d.parse().map_err(|_| err())?;
                    if d == 0 {
                        return Err(err());
                    }
                    Ratio::new(n, d)
                }
                None => Ratio::from_integer(pow.parse().map_err(|_| err())?),
            };
            let unit = match sym {
                "T" => Dimension::time(),
                "L" => Dimension::length(),
                "M" => Dimension::mass(),
                _ => return Err(err()),
            };
            let factor = Dimension { t_pow: unit.t_pow * pow, l_pow: unit.l_pow * pow, m_pow: unit.m_pow * pow };
            dim = dim.checked_mul(factor)?;
        }
        Ok(dim)
    }
}

/// A real number tagged with its scale dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimScalar {
    pub value: f64,
    pub dim: Dimension,
}

impl DimScalar {
    pub fn new(value: f64, dim: Dimension) -> Self {
        DimScalar { value, dim }
    }

    pub fn pure(value: f64) -> Self {
        DimScalar::new(value, Dimension::NONE)
    }

    pub fn checked_add(self, rhs: DimScalar) -> Result<DimScalar, DimError> {
        if self.dim != rhs.dim {
            return Err(DimError::Mismatch { left: self.dim, right: rhs.dim });
        }
        Ok(DimScalar::new(self.value + rhs.value, self.dim))
    }

    pub fn checked_sub(self, rhs: DimScalar) -> Result<DimScalar, DimError> {
        self.checked_add(DimScalar::new(-rhs.value, rhs.dim))
    }

    pub fn checked_mul(self, rhs: DimScalar) -> Result<DimScalar, DimError> {
        Ok(DimScalar::new(self.value * rhs.value, self.dim.checked_mul(rhs.dim)?))
    }

    pub fn checked_div(self, rhs: DimScalar) -> Result<DimScalar, DimError> {
        Ok(DimScalar::new(self.value / rhs.value, self.dim.checked_div(rhs.dim)?))
    }
}

/// Product of two scalars; exponents add.
pub fn dim_mul(a: DimScalar, b: DimScalar) -> DimScalar {
    a.checked_mul(b).expect("dimension exponent overflow")
}

/// Sum of two scalars of equal dimension.
pub fn dim_add(a: DimScalar, b: DimScalar) -> Result<DimScalar, DimError> {
    a.checked_add(b)
}

impl Mul for DimScalar {
    type Output = DimScalar;
    fn mul(self, rhs: DimScalar) -> DimScalar {
        dim_mul(self, rhs)
    }
}

impl Div for DimScalar {
    type Output = DimScalar;
    fn div(self, rhs: DimScalar) -> DimScalar {
        self.checked_div(rhs).expect("dimension exponent overflow")
    }
}

impl fmt::Display for DimScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.value, self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_times_time_unit() {
        let hbar = DimScalar::new(1.0, Dimension::action());
        let u0 = DimScalar::new(1.0, Dimension::time());
        assert_eq!(dim_mul(hbar, u0).dim, "L^2 M".parse().unwrap());
    }

    #[test]
    fn identity_product() {
        let x = DimScalar::pure(3.5);
        assert_eq!(dim_mul(x, DimScalar::pure(1.0)), x);
    }

    #[test]
    fn charge_squared_over_mass() {
        // Oracle: exponents (-1, 3/2, 1/2) doubled, minus (0, 0, 1).
        let q = DimScalar::new(1.0, Dimension::charge());
        let m = DimScalar::new(1.0, Dimension::mass());
        let d = (q * q / m).dim;
        assert_eq!(d, Dimension::new((-2, 1), (3, 1), (0, 1)));
        assert_eq!(d.to_string(), "T^-2 L^3");
    }

    #[test]
    fn add_same_dimension() {
        let a = DimScalar::new(1.0, Dimension::time());
        let b = DimScalar::new(2.0, Dimension::time());
        assert_eq!(dim_add(a, b).unwrap(), DimScalar::new(3.0, Dimension::time()));
    }

    #[test]
    fn add_mismatch() {
        let a = DimScalar::new(1.0, Dimension::time());
        let b = DimScalar::new(1.0, Dimension::length());
        assert!(matches!(dim_add(a, b), Err(DimError::Mismatch { .. })));
    }

    #[test]
    fn rescaled_metric_has_time_dimension() {
        let m = DimScalar::new(2.0, Dimension::mass());
        let hbar = DimScalar::new(1.0, Dimension::action());
        let g = DimScalar::new(1.0, Dimension::length().powi(2).unwrap());
        let big_g = m / hbar * g;
        assert_eq!(big_g.dim, Dimension::time());
        let sum = dim_add(big_g, big_g).unwrap();
        assert_eq!(sum.dim, Dimension::time());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["T^-1 L^3/2 M^1/2", "T", "L^2 M", "1", "T^-2 L^3"] {
            let d: Dimension = s.parse().unwrap();
            let again: Dimension = d.to_string().parse().unwrap();
            assert_eq!(d, again);
        }
        assert_eq!("T^-1 L^3/2 M^1/2".parse::<Dimension>().unwrap(), Dimension::charge());
        assert!("X^2".parse::<Dimension>().is_err());
    }

    #[test]
    fn lowest_terms() {
        let d = Dimension::new((2, 4), (-6, 3), (0, 5));
        assert_eq!(*d.t_pow.numer(), 1);
        assert_eq!(*d.t_pow.denom(), 2);
        assert_eq!(d.l_pow, Ratio::from_integer(-2));
    }
}
