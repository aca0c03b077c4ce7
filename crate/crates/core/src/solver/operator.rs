use crate::error::{Error, Result};
use crate::sequences::WeightSequence;
use crate::sum::NeumaierSum;

/// A square matrix with nonnegative entries, available through products
/// with a vector and with its transpose.
pub trait NonnegativeOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    fn apply_transpose(&self, y: &[f64]) -> Vec<f64>;
}

impl NonnegativeOperator for WeightSequence {
    fn dim(&self) -> usize {
        self.len()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut acc = NeumaierSum::new();
        self.lambdas()
            .iter()
            .zip(x)
            .zip(self.prefix())
            .map(|((lam, a), big)| {
                acc.add(lam * a);
                acc.value() / big
            })
            .collect()
    }

    /// `(Aᵀy)_k = λ_k Σ_{n≥k} y_n / Λ_n`
    fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n];
        let mut acc = NeumaierSum::new();
        for k in (0..n).rev() {
            acc.add(y[k] / self.prefix()[k]);
            out[k] = self.lambdas()[k] * acc.value();
        }
        out
    }
}

/// `A_n = Σ_{k≤n} λ_k a_k / Λ_n`.
pub fn apply_weighted_mean(w: &WeightSequence, a: &[f64]) -> Result<Vec<f64>> {
    if a.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            actual: a.len(),
        });
    }
    Ok(w.apply(a))
}

/// Row-major dense lower-triangular matrix; used for small explicit
/// certificates and in tests.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            if let Some(&v) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(crate::error::invalid(format!(
                    "matrix entries must be nonnegative, found {v}"
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }
}

impl NonnegativeOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|r| crate::sum::sum((0..self.n).map(|c| self.get(r, c) * x[c])))
            .collect()
    }

    fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|c| crate::sum::sum((0..self.n).map(|r| self.get(r, c) * y[r])))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_mean_products() {
        let w = WeightSequence::constant(3).unwrap();
        assert_eq!(
            apply_weighted_mean(&w, &[1.0, 1.0, 1.0]).unwrap(),
            vec![1.0; 3]
        );
        let got = apply_weighted_mean(&w, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(got, vec![1.0, 0.5, 1.0 / 3.0]);
        let w = WeightSequence::new(vec![1.0, 3.0, 5.0]).unwrap();
        let got = apply_weighted_mean(&w, &[1.0, 2.0, 0.0]).unwrap();
        assert_eq!(got, vec![1.0, 7.0 / 4.0, 7.0 / 9.0]);
        assert!(matches!(
            apply_weighted_mean(&w, &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn transpose_matches_dense() {
        let w = WeightSequence::new(vec![1.0, 2.0, 0.5, 4.0]).unwrap();
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|n| {
                (0..4)
                    .map(|k| {
                        if k <= n {
                            w.lambdas()[k] / w.prefix()[n]
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let d = DenseMatrix::new(rows).unwrap();
        let y = [0.3, 1.0, 2.0, 0.7];
        for (a, b) in w.apply_transpose(&y).iter().zip(d.apply_transpose(&y)) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in w.apply(&y).iter().zip(d.apply(&y)) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
