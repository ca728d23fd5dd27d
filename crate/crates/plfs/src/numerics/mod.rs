//! Shared numerical kernels: dense matrices, a symmetric eigensolver,
//! pivoted-QR least squares, the standard Gaussian CDF, trapezoidal
//! quadrature, and a seeded random stream.

mod eigen;
mod lstsq;
mod matrix;
mod quad;
mod rng;
mod special;

pub use eigen::{sym_eigen, SymEigen};
pub use lstsq::{lstsq, orthonormal_basis, LstsqFit};
pub use matrix::Matrix;
pub use quad::{trapz, trapz_weights};
pub use rng::RandomStream;
pub use special::gauss_cdf;
