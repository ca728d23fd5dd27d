use crate::error::{Error, Result};

/// Trapezoidal approximation of `∫ values dt` over `grid`.
pub fn trapz(grid: &[f64], values: &[f64]) -> Result<f64> {
    let w = trapz_weights(grid)?;
    if values.len() != grid.len() {
        return Err(Error::contract(format!(
            "trapz: grid has {} points but values has {}",
            grid.len(),
            values.len()
        )));
    }
    Ok(w.iter().zip(values).map(|(a, b)| a * b).sum())
}

/// Quadrature weights such that `trapz(grid, v) = Σ w_i v_i`.
pub fn trapz_weights(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.len() < 2 {
        return Err(Error::contract("trapz requires at least two grid points"));
    }
    for pair in grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::contract(format!(
                "trapz grid must be strictly increasing, found {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let n = grid.len();
    let mut w = vec![0.0; n];
    w[0] = (grid[1] - grid[0]) / 2.0;
    w[n - 1] = (grid[n - 1] - grid[n - 2]) / 2.0;
    for i in 1..n - 1 {
        w[i] = (grid[i + 1] - grid[i - 1]) / 2.0;
    }
    Ok(w)
}
