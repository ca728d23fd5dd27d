//! Nadaraya-Watson smoother matrices over transformed scores, built from a
//! product Epanechnikov kernel with a shared scalar bandwidth per candidate.

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Epanechnikov kernel `k(u) = 3/4 (1 - u^2)` on `|u| <= 1`, zero outside.
#[inline]
pub fn epanechnikov(u: f64) -> f64 {
    if u.abs() <= 1.0 {
        0.75 * (1.0 - u * u)
    } else {
        0.0
    }
}

/// Rule-of-thumb bandwidth `n^(-1/(1+q))`.
pub fn rot_bandwidth(n: usize, q: usize) -> f64 {
    (n as f64).powf(-1.0 / (1.0 + q as f64))
}

/// Bandwidth choice: a fixed value or the rule of thumb resolved at fit time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    Auto,
    Fixed(f64),
}

impl Bandwidth {
    pub fn resolve(self, n: usize, q: usize) -> f64 {
        match self {
            Bandwidth::Auto => rot_bandwidth(n, q),
            Bandwidth::Fixed(h) => h,
        }
    }
}

/// Row-stochastic kernel weight matrix over one candidate's score columns.
#[derive(Debug, Clone)]
pub struct SmootherMatrix {
    entries: Matrix,
    bandwidth: f64,
    score_cols: Vec<usize>,
}

impl SmootherMatrix {
    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn score_cols(&self) -> &[usize] {
        &self.score_cols
    }

    /// `K v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.entries.matvec(v)
    }
}

/// Product-kernel weights between score rows `i` and `j`, normalized per row.
/// The diagonal self-weight `k(0)^q > 0` keeps every denominator positive.
pub fn build_smoother(scores: &Matrix, cols: &[usize], h: f64) -> Result<SmootherMatrix> {
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::config(format!("smoother bandwidth must be positive, got {h}")));
    }
    if cols.is_empty() {
        return Err(Error::contract("smoother needs at least one score column"));
    }
    for &c in cols {
        if c >= scores.cols() {
            return Err(Error::contract(format!(
                "score column {c} out of range (matrix has {})",
                scores.cols()
            )));
        }
    }
    let n = scores.rows();
    let mut entries = Matrix::zeros(n, n);
    for i in 0..n {
        let row_i = scores.row(i);
        let out = entries.row_mut(i);
        let mut denom = 0.0;
        for j in 0..n {
            let row_j = scores.row(j);
            let mut w = 1.0;
            for &c in cols {
                w *= epanechnikov((row_i[c] - row_j[c]) / h);
                if w == 0.0 {
                    break;
                }
            }
            out[j] = w;
            denom += w;
        }
        if !(denom > 0.0) || !denom.is_finite() {
            return Err(Error::numerical(format!(
                "degenerate smoother row {i}: kernel weights sum to {denom}"
            )));
        }
        for v in out.iter_mut() {
            *v /= denom;
        }
    }
    Ok(SmootherMatrix {
        entries,
        bandwidth: h,
        score_cols: cols.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores_from(vals: &[f64]) -> Matrix {
        Matrix::new(vals.len(), 1, vals.to_vec()).unwrap()
    }

    #[test]
    fn kernel_values() {
        assert_eq!(epanechnikov(0.0), 0.75);
        assert_eq!(epanechnikov(1.0), 0.0);
        assert_eq!(epanechnikov(-1.0), 0.0);
        assert!((epanechnikov(0.5) - 0.5625).abs() < 1e-15);
        assert_eq!(epanechnikov(1.5), 0.0);
    }

    #[test]
    fn bandwidth_rule() {
        assert!((rot_bandwidth(100, 1) - 0.1).abs() < 1e-15);
        assert!((rot_bandwidth(1, 5) - 1.0).abs() < 1e-15);
        assert!((rot_bandwidth(400, 3) - (400f64).powf(-0.25)).abs() < 1e-15);
        assert!((rot_bandwidth(400, 3) - 0.22360679774997896).abs() < 1e-12);
    }

    #[test]
    fn single_point_is_one() {
        let k = build_smoother(&scores_from(&[0.4]), &[0], 0.3).unwrap();
        assert_eq!(k.entries().get(0, 0), 1.0);
    }

    #[test]
    fn disjoint_supports_give_identity() {
        let k = build_smoother(&scores_from(&[0.1, 0.9]), &[0], 0.5).unwrap();
        let e = k.entries();
        assert_eq!(e.get(0, 0), 1.0);
        assert_eq!(e.get(0, 1), 0.0);
        assert_eq!(e.get(1, 0), 0.0);
        assert_eq!(e.get(1, 1), 1.0);
    }

    #[test]
    fn three_equally_spaced_points_hand_oracle() {
        // Hand evaluation of k at u in {0, ±0.5}: k(0) = 3/4, k(±1/2) = 9/16.
        // Middle row weights (9/16, 3/4, 9/16) normalize to (0.3, 0.4, 0.3);
        // edge rows have one zero neighbour at u = ±1.
        let k = build_smoother(&scores_from(&[0.25, 0.5, 0.75]), &[0], 0.5).unwrap();
        let e = k.entries();
        let row2 = [e.get(1, 0), e.get(1, 1), e.get(1, 2)];
        for (got, want) in row2.iter().zip(&[0.3, 0.4, 0.3]) {
            assert!((got - want).abs() < 1e-12, "row2 {row2:?}");
        }
        let denom = 0.75 + 0.5625;
        for (got, want) in [e.get(0, 0), e.get(0, 1), e.get(0, 2)]
            .iter()
            .zip(&[0.75 / denom, 0.5625 / denom, 0.0])
        {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_are_stochastic_and_nonnegative() {
        let mut stream = crate::numerics::RandomStream::new(11);
        let n = 60;
        let scores = Matrix::from_fn(n, 2, |_, _| stream.next_f64());
        let k = build_smoother(&scores, &[0, 1], 0.3).unwrap();
        for i in 0..n {
            let row = k.entries().row(i);
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() <= 1e-10);
            assert!(row.iter().all(|&v| v >= 0.0));
            assert!(k.entries().get(i, i) > 0.0);
        }
        // constant vectors are fixed points
        let ones = vec![3.5; n];
        for v in k.apply(&ones) {
            assert!((v - 3.5).abs() <= 1e-10);
        }
    }

    #[test]
    fn bandwidth_limits() {
        let mut stream = crate::numerics::RandomStream::new(12);
        let n = 25;
        let scores = Matrix::from_fn(n, 1, |_, _| stream.next_f64());
        // h -> 0: identity
        let k0 = build_smoother(&scores, &[0], 1e-6).unwrap();
        assert!(k0.entries().sub(&Matrix::identity(n)).max_abs() < 1e-12);
        // h large: near-uniform rows (kernel taper stays mild at u <= 0.1)
        let k1 = build_smoother(&scores, &[0], 10.0).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((k1.entries().get(i, j) - 1.0 / n as f64).abs() < 0.01 / n as f64);
            }
        }
    }

    #[test]
    fn permutation_equivariance() {
        let vals = [0.12, 0.55, 0.31, 0.78, 0.44];
        let k = build_smoother(&scores_from(&vals), &[0], 0.4).unwrap();
        let perm = [3usize, 0, 4, 1, 2];
        let permuted: Vec<f64> = perm.iter().map(|&i| vals[i]).collect();
        let kp = build_smoother(&scores_from(&permuted), &[0], 0.4).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let want = k.entries().get(perm[a], perm[b]);
                assert!((kp.entries().get(a, b) - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(build_smoother(&scores_from(&[0.5]), &[0], 0.0).is_err());
        assert!(build_smoother(&scores_from(&[0.5]), &[], 0.5).is_err());
        assert!(build_smoother(&scores_from(&[0.5]), &[1], 0.5).is_err());
    }
}
