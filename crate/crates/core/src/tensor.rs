//! Row-major 3x3 helpers and the fixed coordinate names of the point models.

pub type Mat3 = [f64; 9];
pub type Vec3 = [f64; 3];

pub const IDENTITY: Mat3 = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            c[3 * i + j] = (0..3).map(|k| a[3 * i + k] * b[3 * k + j]).sum();
        }
    }
    c
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut t = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            t[3 * j + i] = a[3 * i + j];
        }
    }
    t
}

pub fn det(a: &Mat3) -> f64 {
    a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) + a[2] * (a[3] * a[7] - a[4] * a[6])
}

/// Double contraction `a : b = sum_ij a_ij b_ij`.
pub fn contract(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `prefix11, prefix12, .., prefix33`.
pub fn tensor_names(prefix: &str) -> Vec<String> {
    (1..=3).flat_map(|i| (1..=3).map(move |j| format!("{prefix}{i}{j}"))).collect()
}

/// `prefix1, prefix2, prefix3`.
pub fn vector_names(prefix: &str) -> Vec<String> {
    (1..=3).map(|i| format!("{prefix}{i}")).collect()
}

pub const EPS: &str = "eps";
pub const TIME: &str = "t";
