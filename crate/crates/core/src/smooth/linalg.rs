//! Small dense matrices over fields or numbers, by cofactor expansion.

use std::ops::Div;

use super::forms::Coef;

/// Square matrix stored row-major as nested vectors.
pub type Matrix<T> = Vec<Vec<T>>;

fn minor<T: Clone>(m: &[Vec<T>], row: usize, col: usize) -> Matrix<T> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, line)| line.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, v)| v.clone()).collect())
        .collect()
}

pub fn det<T: Coef + From<f64>>(m: &[Vec<T>]) -> T {
    match m.len() {
        0 => T::from(1.0),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        n => {
            let mut acc = T::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let term = m[0][c].clone() * det(&minor(m, 0, c));
                acc = if c % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Inverse through the adjugate.
pub fn inverse<T: Coef + From<f64> + Div<Output = T>>(m: &[Vec<T>]) -> Matrix<T> {
    let n = m.len();
    let d = det(m);
    let mut out = vec![vec![T::zero(); n]; n];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            let cof = det(&minor(m, c, r));
            let cof = if (r + c) % 2 == 0 { cof } else { -cof };
            if !cof.is_zero() {
                *slot = cof / d.clone();
            }
        }
    }
    out
}

/// Leading principal minors `det(m[..k][..k])` for `k = 1..=n`.
pub fn leading_minors(m: &[Vec<f64>]) -> Vec<f64> {
    (1..=m.len())
        .map(|k| {
            let sub: Matrix<f64> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
            det(&sub)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_numeric_matrix() {
        let m = vec![vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 0.5], vec![0.0, 0.5, 1.0]];
        let inv = inverse(&m);
        for i in 0..3 {
            for k in 0..3 {
                let p: f64 = (0..3).map(|j| m[i][j] * inv[j][k]).sum();
                assert!((p - if i == k { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn minkowski_determinant() {
        let mut m = vec![vec![0.0; 4]; 4];
        m[0][0] = -1.0;
        for i in 1..4 {
            m[i][i] = 1.0;
        }
        assert_eq!(det(&m), -1.0);
        assert_eq!(leading_minors(&m), vec![-1.0, -1.0, -1.0, -1.0]);
    }
}
