use super::eigen::sym_eigen;
use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};

/// Least-squares solution with the rank detected by pivoted QR.
#[derive(Debug, Clone)]
pub struct LstsqFit {
    pub coefficients: Vec<f64>,
    pub rank: usize,
}

/// Relative rank tolerance: diagonal entries of the pivoted R factor below
/// `RANK_TOL * |R[0,0]|` are treated as zero.
const RANK_TOL: f64 = 1e-10;

/// Minimize `||a x - y||` by Householder QR with column pivoting. Full-rank
/// designs are solved by back-substitution; rank-deficient designs fall back
/// to the minimum-norm pseudo-inverse solution.
pub fn lstsq(a: &Matrix, y: &[f64]) -> Result<LstsqFit> {
    let (n, p) = (a.rows(), a.cols());
    if y.len() != n {
        return Err(Error::contract(format!(
            "lstsq: design has {n} rows but response has {}",
            y.len()
        )));
    }
    if n < p {
        return Err(Error::contract(format!(
            "lstsq requires rows >= cols, got {n} < {p}"
        )));
    }
    if p == 0 {
        return Ok(LstsqFit {
            coefficients: vec![],
            rank: 0,
        });
    }

    let qr = HouseholderQr::decompose(a);
    if qr.rank == p {
        // qty = Q^T y, solve R x = qty[..p] and undo the pivot.
        let mut qty = y.to_vec();
        qr.apply_qt(&mut qty);
        let mut x = vec![0.0; p];
        for i in (0..p).rev() {
            let mut s = qty[i];
            for j in (i + 1)..p {
                s -= qr.r(i, j) * x[j];
            }
            x[i] = s / qr.r(i, i);
        }
        let mut coefficients = vec![0.0; p];
        for (k, &col) in qr.perm.iter().enumerate() {
            coefficients[col] = x[k];
        }
        Ok(LstsqFit {
            coefficients,
            rank: p,
        })
    } else {
        Ok(LstsqFit {
            coefficients: pinv_solve(a, y)?,
            rank: qr.rank,
        })
    }
}

/// Thin orthonormal basis for the column space of `a` (rank detected by the
/// same pivoted QR as `lstsq`). Returns an `n x r` matrix with orthonormal
/// columns spanning the range of `a`.
pub fn orthonormal_basis(a: &Matrix) -> Matrix {
    let n = a.rows();
    if a.cols() == 0 {
        return Matrix::zeros(n, 0);
    }
    let qr = HouseholderQr::decompose(a);
    let r = qr.rank;
    let mut q = Matrix::zeros(n, r);
    for j in 0..r {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        qr.apply_q(&mut e);
        for i in 0..n {
            q.set(i, j, e[i]);
        }
    }
    q
}

/// Minimum-norm solution via the eigendecomposition of `aᵀa`; eigenvalues
/// below `1e-12 * max` are treated as zero.
fn pinv_solve(a: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    let ata = a.transpose().matmul(a);
    let aty = a.tr_matvec(y);
    let eig = sym_eigen(&ata)?;
    let lmax = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let cut = 1e-12 * lmax;
    let p = ata.rows();
    let mut x = vec![0.0; p];
    for k in 0..p {
        let lam = eig.values[k];
        if lam <= cut {
            continue;
        }
        let v: Vec<f64> = eig.vectors.column(k);
        let coef = dot(&v, &aty) / lam;
        for i in 0..p {
            x[i] += coef * v[i];
        }
    }
    Ok(x)
}

/// Householder QR with column pivoting; reflectors stored in-place below the
/// diagonal, pivoted R in the upper triangle.
struct HouseholderQr {
    h: Matrix,
    beta: Vec<f64>,
    perm: Vec<usize>,
    rank: usize,
}

impl HouseholderQr {
    fn decompose(a: &Matrix) -> Self {
        let (n, p) = (a.rows(), a.cols());
        let mut h = a.clone();
        let mut beta = vec![0.0; p];
        let mut perm: Vec<usize> = (0..p).collect();
        let mut col_norms: Vec<f64> = (0..p)
            .map(|j| (0..n).map(|i| h.get(i, j) * h.get(i, j)).sum())
            .collect();

        let steps = p.min(n);
        let mut rank = steps;
        let mut r00 = 0.0_f64;
        for k in 0..steps {
            // pivot: bring the column with the largest remaining norm to k
            let (jmax, _) = col_norms
                .iter()
                .enumerate()
                .skip(k)
                .fold((k, -1.0), |acc, (j, &v)| if v > acc.1 { (j, v) } else { acc });
            if jmax != k {
                for i in 0..n {
                    let t = h.get(i, k);
                    h.set(i, k, h.get(i, jmax));
                    h.set(i, jmax, t);
                }
                perm.swap(k, jmax);
                col_norms.swap(k, jmax);
            }

            let norm = {
                let mut s = 0.0;
                for i in k..n {
                    s += h.get(i, k) * h.get(i, k);
                }
                s.sqrt()
            };
            if k == 0 {
                r00 = norm;
            }
            if norm <= RANK_TOL * r00 {
                rank = k;
                break;
            }

            let alpha = if h.get(k, k) >= 0.0 { -norm } else { norm };
            let v0 = h.get(k, k) - alpha;
            h.set(k, k, alpha);
            let vnorm2 = {
                let mut s = v0 * v0;
                for i in (k + 1)..n {
                    s += h.get(i, k) * h.get(i, k);
                }
                s
            };
            beta[k] = if vnorm2 > 0.0 { 2.0 / vnorm2 } else { 0.0 };

            // apply (I - beta v v^T) to the remaining columns
            for j in (k + 1)..p {
                let mut s = v0 * h.get(k, j);
                for i in (k + 1)..n {
                    s += h.get(i, k) * h.get(i, j);
                }
                s *= beta[k];
                h.set(k, j, h.get(k, j) - s * v0);
                for i in (k + 1)..n {
                    h.set(i, j, h.get(i, j) - s * h.get(i, k));
                }
                col_norms[j] -= h.get(k, j) * h.get(k, j);
                if col_norms[j] < 0.0 {
                    col_norms[j] = 0.0;
                }
            }
            // keep the reflector's v below the diagonal; store v0 separately
            // via beta normalisation: we scale so that v = (1, h[k+1..n, k]/v0)
            if v0 != 0.0 {
                for i in (k + 1)..n {
                    h.set(i, k, h.get(i, k) / v0);
                }
                beta[k] *= v0 * v0;
            }
        }

        HouseholderQr {
            h,
            beta,
            perm,
            rank,
        }
    }

    #[inline]
    fn r(&self, i: usize, j: usize) -> f64 {
        self.h.get(i, j)
    }

    fn reflect(&self, k: usize, x: &mut [f64]) {
        let n = x.len();
        let mut s = x[k];
        for i in (k + 1)..n {
            s += self.h.get(i, k) * x[i];
        }
        s *= self.beta[k];
        x[k] -= s;
        for i in (k + 1)..n {
            x[i] -= s * self.h.get(i, k);
        }
    }

    /// x <- Qᵀ x (reflectors applied first-to-last).
    fn apply_qt(&self, x: &mut [f64]) {
        for k in 0..self.rank {
            self.reflect(k, x);
        }
    }

    /// x <- Q x (reflectors applied last-to-first).
    fn apply_q(&self, x: &mut [f64]) {
        for k in (0..self.rank).rev() {
            self.reflect(k, x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_design() {
        let fit = lstsq(&Matrix::identity(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(fit.rank, 3);
        for (c, e) in fit.coefficients.iter().zip(&[1.0, 2.0, 3.0]) {
            assert!((c - e).abs() < 1e-12);
        }
    }

    #[test]
    fn intercept_only_gives_mean() {
        let a = Matrix::new(4, 1, vec![1.0; 4]).unwrap();
        let fit = lstsq(&a, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((fit.coefficients[0] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn rank_two_by_normal_equations() {
        let a = Matrix::new(3, 2, vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let fit = lstsq(&a, &[1.0, 3.0, 5.0]).unwrap();
        assert_eq!(fit.rank, 2);
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((fit.coefficients[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_minimum_norm() {
        // duplicated column: solutions satisfy x1 + x2 = 2, min-norm is (1,1)
        let a = Matrix::new(3, 2, vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let fit = lstsq(&a, &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(fit.rank, 1);
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-10);
        assert!((fit.coefficients[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn residual_orthogonality_full_rank() {
        let mut stream = crate::numerics::RandomStream::new(7);
        let n = 30;
        let p = 4;
        let a = Matrix::from_fn(n, p, |_, _| stream.next_gaussian());
        let y: Vec<f64> = (0..n).map(|_| stream.next_gaussian()).collect();
        let fit = lstsq(&a, &y).unwrap();
        let fitted = a.matvec(&fit.coefficients);
        let resid: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
        let at_r = a.tr_matvec(&resid);
        let scale = a.frobenius_norm() * (dot(&y, &y)).sqrt();
        for v in at_r {
            assert!(v.abs() <= 1e-8 * scale.max(1.0));
        }
    }

    #[test]
    fn orthonormal_basis_spans_columns() {
        let a = Matrix::new(4, 2, vec![1.0, 1.0, 1.0, 1.0, 0.0, 2.0, 0.0, 2.0]).unwrap();
        let q = orthonormal_basis(&a);
        assert_eq!(q.cols(), 2);
        let qtq = q.transpose().matmul(&q);
        assert!(qtq.sub(&Matrix::identity(2)).max_abs() < 1e-12);
        // projection reproduces the columns of a
        let proj = q.matmul(&q.transpose().matmul(&a));
        assert!(proj.sub(&a).max_abs() < 1e-10);
    }
}
