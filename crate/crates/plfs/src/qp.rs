//! Quadratic programming on the unit simplex:
//! minimize `w' G w + 2 w' b` subject to `1'w = 1`, `w >= 0`.
//!
//! Projected gradient with Barzilai-Borwein steps finds the support, then an
//! active-set equality solve polishes the iterate to tight KKT accuracy. The
//! solver never panics: if the iteration budget runs out the best feasible
//! iterate is returned with `converged = false`.

use crate::error::{Error, Result};
use crate::numerics::{lstsq, sym_eigen, Matrix};

pub const DEFAULT_TOL: f64 = 1e-10;

pub fn default_max_iter(m: usize) -> usize {
    10 * m * m + 1000
}

/// `gram` is expected to be `H'H` for some matrix H: symmetric and positive
/// semidefinite up to roundoff. Negative eigenvalue noise is clipped to zero
/// before solving.
#[derive(Debug, Clone)]
pub struct SimplexQp {
    gram: Matrix,
    linear: Vec<f64>,
}

impl SimplexQp {
    pub fn new(gram: Matrix, linear: Vec<f64>) -> Result<Self> {
        if !gram.is_square() || gram.rows() != linear.len() {
            return Err(Error::contract(format!(
                "simplex QP needs a square gram matching the linear term: {}x{} vs {}",
                gram.rows(),
                gram.cols(),
                linear.len()
            )));
        }
        if gram.rows() == 0 {
            return Err(Error::contract("simplex QP needs at least one variable"));
        }
        if !gram.is_symmetric(1e-10) {
            return Err(Error::contract(
                "simplex QP gram must be symmetric within 1e-10",
            ));
        }
        Ok(SimplexQp { gram, linear })
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    /// Objective `w' G w + 2 w' b` with the stored (unrepaired) gram.
    pub fn objective(&self, w: &[f64]) -> f64 {
        let gw = self.gram.matvec(w);
        w.iter()
            .zip(gw.iter().zip(&self.linear))
            .map(|(wi, (gwi, bi))| wi * (gwi + 2.0 * bi))
            .sum()
    }
}

/// Solution point on the simplex with the attained objective.
#[derive(Debug, Clone)]
pub struct WeightVector {
    pub weights: Vec<f64>,
    /// Objective value at `weights`; `None` for weight vectors built outside
    /// the QP (softmax or vertex constructions fill it in later).
    pub objective: Option<f64>,
    pub iterations: usize,
    /// Indices whose weight is exactly zero.
    pub active_set: Vec<usize>,
    pub converged: bool,
}

impl WeightVector {
    /// Wrap externally constructed simplex weights (softmax, vertices, equal).
    pub fn from_weights(weights: Vec<f64>) -> Self {
        let active_set = zero_indices(&weights);
        WeightVector {
            weights,
            objective: None,
            iterations: 0,
            active_set,
            converged: true,
        }
    }

    /// Vertex `e_m`.
    pub fn vertex(m: usize, dim: usize) -> Self {
        let mut w = vec![0.0; dim];
        w[m] = 1.0;
        WeightVector::from_weights(w)
    }
}

fn zero_indices(w: &[f64]) -> Vec<usize> {
    w.iter()
        .enumerate()
        .filter(|(_, &v)| v == 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// Euclidean projection onto the unit simplex (sort-based exact algorithm).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let m = v.len();
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut css = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        css += uk;
        let t = (css - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    let mut out: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    let s: f64 = out.iter().sum();
    if s > 0.0 {
        for x in &mut out {
            *x /= s;
        }
    } else {
        out = vec![1.0 / m as f64; m];
    }
    out
}

pub fn solve_simplex_qp(problem: &SimplexQp, tol: f64, max_iter: usize) -> WeightVector {
    solve_simplex_qp_traced(problem, tol, max_iter).0
}

/// Same as [`solve_simplex_qp`] but also returns the objective value of each
/// accepted iterate, in order.
pub fn solve_simplex_qp_traced(
    problem: &SimplexQp,
    tol: f64,
    max_iter: usize,
) -> (WeightVector, Vec<f64>) {
    let m = problem.dim();
    let g_mat = repair_psd(&problem.gram);
    let b = &problem.linear;
    let obj = |w: &[f64]| -> f64 {
        let gw = g_mat.matvec(w);
        w.iter()
            .zip(gw.iter().zip(b))
            .map(|(wi, (gwi, bi))| wi * (gwi + 2.0 * bi))
            .sum()
    };
    let grad = |w: &[f64]| -> Vec<f64> {
        let mut g = g_mat.matvec(w);
        for (gi, bi) in g.iter_mut().zip(b) {
            *gi = 2.0 * (*gi + bi);
        }
        g
    };

    let mut trace = Vec::new();
    let mut w = vec![1.0 / m as f64; m];
    let mut f = obj(&w);
    trace.push(f);
    let mut g = grad(&w);
    let mut iterations = 0usize;

    let diag_max = g_mat.diagonal().iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let mut step = 1.0 / diag_max.max(1e-12);
    let mut best_w = w.clone();
    let mut best_f = f;

    while iterations < max_iter {
        iterations += 1;
        let mut w_try: Vec<f64> = project_to_simplex(
            &w.iter().zip(&g).map(|(wi, gi)| wi - step * gi).collect::<Vec<_>>(),
        );
        let mut bt = 0;
        while obj(&w_try) > f + 1e-14 * (1.0 + f.abs()) && bt < 60 {
            step *= 0.5;
            w_try = project_to_simplex(
                &w.iter().zip(&g).map(|(wi, gi)| wi - step * gi).collect::<Vec<_>>(),
            );
            bt += 1;
        }
        let f_try = obj(&w_try);
        let g_try = grad(&w_try);
        let dw: Vec<f64> = w_try.iter().zip(&w).map(|(a, b)| a - b).collect();
        let dg: Vec<f64> = g_try.iter().zip(&g).map(|(a, b)| a - b).collect();
        let moved = dw.iter().map(|v| v.abs()).fold(0.0_f64, f64::max);
        if f_try <= best_f {
            best_f = f_try;
            best_w = w_try.clone();
        }
        if f_try <= f {
            trace.push(f_try);
        }
        w = w_try;
        f = f_try;
        g = g_try;
        let denom: f64 = dw.iter().zip(&dg).map(|(a, b)| a * b).sum();
        if denom > 1e-300 {
            let num: f64 = dw.iter().map(|v| v * v).sum();
            step = (num / denom).clamp(1e-12, 1e12);
        }
        if moved <= 1e-15 {
            break;
        }
    }

    // active-set polish starting from the best projected-gradient support
    let mut w_cur = best_w.clone();
    let mut support: Vec<usize> = (0..m).filter(|&i| w_cur[i] > 1e-12).collect();
    if support.is_empty() {
        support = (0..m).collect();
    }
    let mut converged = false;
    let polish_rounds = 4 * m + 20;
    'polish: for _ in 0..polish_rounds {
        iterations += 1;
        let x = match equality_solve(&g_mat, b, &support) {
            Some(x) => x,
            None => break 'polish,
        };
        if let Some(kmin) = most_negative(&x) {
            if x[kmin] < -1e-12 {
                // ratio test: walk toward x until the first coordinate hits 0
                let cur: Vec<f64> = support.iter().map(|&i| w_cur[i]).collect();
                let mut alpha = 1.0_f64;
                let mut blocker = kmin;
                for (k, (&xk, &ck)) in x.iter().zip(&cur).enumerate() {
                    if xk < ck {
                        let denom = ck - xk;
                        if denom > 0.0 {
                            let a = ck / denom;
                            if a < alpha {
                                alpha = a;
                                blocker = k;
                            }
                        }
                    }
                }
                for (k, &i) in support.iter().enumerate() {
                    w_cur[i] = (cur[k] + alpha * (x[k] - cur[k])).max(0.0);
                }
                w_cur[support[blocker]] = 0.0;
                renormalize(&mut w_cur);
                support.retain(|&i| w_cur[i] > 1e-14);
                if support.is_empty() {
                    break 'polish;
                }
                continue 'polish;
            }
        }
        // feasible equality solution on the support
        let mut w_new = vec![0.0; m];
        for (k, &i) in support.iter().enumerate() {
            w_new[i] = x[k].max(0.0);
        }
        renormalize(&mut w_new);
        let f_new = obj(&w_new);
        if !f_new.is_finite() || f_new > best_f + 1e-10 * (1.0 + best_f.abs()) {
            break 'polish;
        }
        if f_new <= best_f {
            best_f = f_new;
            best_w = w_new.clone();
            trace.push(f_new);
        }
        w_cur = w_new;
        // KKT: shared multiplier on the support, no profitable zero weight
        let gk = grad(&w_cur);
        let gmax = gk.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
        let bound = tol * (1.0 + gmax);
        let nu = support.iter().map(|&i| gk[i]).sum::<f64>() / support.len() as f64;
        let mut worst_j = None;
        let mut worst_gap = bound;
        for j in 0..m {
            if !support.contains(&j) && nu - gk[j] > worst_gap {
                worst_gap = nu - gk[j];
                worst_j = Some(j);
            }
        }
        match worst_j {
            Some(j) => {
                support.push(j);
                support.sort_unstable();
            }
            None => {
                let support_ok = support.iter().all(|&i| (gk[i] - nu).abs() <= bound);
                converged = support_ok;
                break 'polish;
            }
        }
    }

    let mut weights = best_w;
    for v in &mut weights {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    renormalize(&mut weights);
    if !converged {
        converged = kkt_satisfied(&g_mat, b, &weights, tol);
    }
    let objective = obj(&weights);
    let active_set = zero_indices(&weights);
    (
        WeightVector {
            weights,
            objective: Some(objective),
            iterations,
            active_set,
            converged,
        },
        trace,
    )
}

/// KKT stationarity at `w`: gradient components agree with the shared
/// multiplier on the support, and no zero-weight component is profitable.
pub fn kkt_satisfied(gram: &Matrix, linear: &[f64], w: &[f64], tol: f64) -> bool {
    let mut g = gram.matvec(w);
    for (gi, bi) in g.iter_mut().zip(linear) {
        *gi = 2.0 * (*gi + bi);
    }
    let sup: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
    if sup.is_empty() {
        return false;
    }
    let gmax = g.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let bound = tol * (1.0 + gmax);
    let nu = sup.iter().map(|&i| g[i]).sum::<f64>() / sup.len() as f64;
    sup.iter().all(|&i| (g[i] - nu).abs() <= bound)
        && (0..w.len()).all(|i| w[i] > 0.0 || g[i] >= nu - bound)
}

fn renormalize(w: &mut [f64]) {
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        for v in w.iter_mut() {
            *v /= s;
        }
    } else {
        let m = w.len();
        for v in w.iter_mut() {
            *v = 1.0 / m as f64;
        }
    }
}

fn most_negative(x: &[f64]) -> Option<usize> {
    let mut idx = None;
    let mut val = 0.0;
    for (k, &v) in x.iter().enumerate() {
        if v < val {
            val = v;
            idx = Some(k);
        }
    }
    idx
}

/// Solve the equality-constrained subproblem on `support`:
/// `[2 G_SS, 1; 1', 0] [x; nu] = [-2 b_S; 1]` (minimum-norm if singular).
fn equality_solve(g: &Matrix, b: &[f64], support: &[usize]) -> Option<Vec<f64>> {
    let k = support.len();
    let mut a = Matrix::zeros(k + 1, k + 1);
    for (r, &i) in support.iter().enumerate() {
        for (c, &j) in support.iter().enumerate() {
            a.set(r, c, 2.0 * g.get(i, j));
        }
        a.set(r, k, 1.0);
        a.set(k, r, 1.0);
    }
    let mut rhs = vec![0.0; k + 1];
    for (r, &i) in support.iter().enumerate() {
        rhs[r] = -2.0 * b[i];
    }
    rhs[k] = 1.0;
    let fit = lstsq(&a, &rhs).ok()?;
    let x = fit.coefficients[..k].to_vec();
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// Symmetrize and clip negative eigenvalue noise to zero.
fn repair_psd(g: &Matrix) -> Matrix {
    let n = g.rows();
    let mut s = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s.set(i, j, 0.5 * (g.get(i, j) + g.get(j, i)));
        }
    }
    let eig = match sym_eigen(&s) {
        Ok(e) => e,
        Err(_) => return s,
    };
    if eig.values.iter().all(|&l| l >= 0.0) {
        return s;
    }
    let mut out = Matrix::zeros(n, n);
    for (k, &lam) in eig.values.iter().enumerate() {
        let l = lam.max(0.0);
        if l == 0.0 {
            continue;
        }
        let v = eig.vectors.column(k);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, out.get(i, j) + l * v[i] * v[j]);
            }
        }
    }
    out
}
