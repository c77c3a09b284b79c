//! Small dense linear algebra over any [`Scalar`].

use nalgebra::{DMatrix, SymmetricEigen};

use crate::scalar::Scalar;

/// Square matrix stored row-major as nested vectors.
pub type Dense<T> = Vec<Vec<T>>;

fn pivot_row<T: Scalar>(m: &Dense<T>, col: usize) -> Option<usize> {
    let candidates = (col..m.len()).filter(|&r| !m[r][col].is_zero());
    if T::EXACT {
        candidates.into_iter().next()
    } else {
        candidates.max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
    }
}

/// Determinant by Gaussian elimination. Exact for exact scalars.
pub fn determinant<T: Scalar>(mut m: Dense<T>) -> T {
    let n = m.len();
    let mut det = T::one();
    for col in 0..n {
        let Some(p) = pivot_row(&m, col) else {
            return T::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / pivot.clone();
            for c in col..n {
                let delta = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
    }
    det
}

pub fn is_symmetric<T: Scalar>(m: &Dense<T>) -> bool {
    let n = m.len();
    m.iter().all(|row| row.len() == n) && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// Exact positive-semidefiniteness test by symmetric elimination with
/// largest-diagonal pivoting. A zero pivot forces its whole row to vanish.
/// Meant for exact scalars; on floats it carries no tolerance.
pub fn is_psd_exact<T: Scalar>(m: &Dense<T>) -> bool {
    let mut a = m.clone();
    let mut active: Vec<usize> = (0..a.len()).collect();
    while !active.is_empty() {
        let (slot, &p) = active
            .iter()
            .enumerate()
            .max_by(|x, y| a[*x.1][*x.1].partial_cmp(&a[*y.1][*y.1]).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap();
        let pivot = a[p][p].clone();
        if pivot.is_negative() {
            return false;
        }
        active.swap_remove(slot);
        if pivot.is_zero() {
            if active.iter().any(|&j| !a[p][j].is_zero()) {
                return false;
            }
            continue;
        }
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let factor = a[i][p].clone() / pivot.clone();
            for &j in &active {
                let delta = factor.clone() * a[p][j].clone();
                a[i][j] = a[i][j].clone() - delta;
            }
        }
    }
    true
}

/// Eigenvalues of a symmetric matrix, ascending, computed in `f64`.
pub fn symmetric_eigenvalues<T: Scalar>(m: &Dense<T>) -> Vec<f64> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    let dm = DMatrix::from_fn(n, n, |i, j| m[i][j].to_f64_lossy());
    let mut values: Vec<f64> = SymmetricEigen::new(dm).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn determinants() {
        let m = vec![vec![q(0), q(2), q(1)], vec![q(1), q(1), q(0)], vec![q(3), q(0), q(1)]];
        // 0*(1-0) - 2*(1-0) + 1*(0-3) = -5
        assert_eq!(determinant(m), q(-5));
        let f: Vec<Vec<f64>> = vec![vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]];
        assert!((determinant(f) + 5.0).abs() < 1e-12);
        assert_eq!(determinant(vec![vec![q(1), q(2)], vec![q(2), q(4)]]), q(0));
        assert_eq!(determinant::<f64>(vec![]), 1.0);
    }

    #[test]
    fn exact_psd() {
        let ones = vec![vec![q(1); 3]; 3];
        assert!(is_psd_exact(&ones));
        let indefinite = vec![vec![q(1), q(2)], vec![q(2), q(1)]];
        assert!(!is_psd_exact(&indefinite));
        let zero_pivot = vec![vec![q(0), q(1)], vec![q(1), q(5)]];
        assert!(!is_psd_exact(&zero_pivot));
        assert!(is_psd_exact(&vec![vec![q(0), q(0)], vec![q(0), q(3)]]));
    }

    #[test]
    fn eigenvalues_of_ones() {
        let ev = symmetric_eigenvalues(&vec![vec![1.0f64; 4]; 4]);
        assert!(ev[0].abs() < 1e-12);
        assert!((ev[3] - 4.0).abs() < 1e-12);
    }
}
