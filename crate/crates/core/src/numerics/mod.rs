//! Small numerical building blocks shared by the geometry and model modules.

pub mod ode;
pub mod quadrature;
pub mod sampling;

/// Determinant of a square row-major matrix.
pub fn determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 1.0;
    }
    nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]).determinant()
}
