#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sum of `terms` monomials of total degree 1..=`degree` in `vars` with
/// coefficients in `[-scale, scale]`, as expression text.
pub fn random_polynomial(rng: &mut ChaCha8Rng, vars: &[String], terms: usize, degree: usize, scale: f64) -> String {
    (0..terms)
        .map(|_| {
            let c: f64 = rng.gen_range(-scale..scale);
            let d = rng.gen_range(1..=degree);
            let factors: Vec<&str> = (0..d).map(|_| vars[rng.gen_range(0..vars.len())].as_str()).collect();
            format!("({c:e})*{}", factors.join("*"))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Curl `d a_i/d x^j - d a_j/d x^i` by central differences of the coefficient values.
pub fn fd_curl(coeffs: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut jac = vec![vec![0.0; n]; n]; // jac[k][i] = d a_i / d x^k
    for k in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[k] += h;
        xm[k] -= h;
        let (ap, am) = (coeffs(&xp), coeffs(&xm));
        for i in 0..n {
            jac[k][i] = (ap[i] - am[i]) / (2.0 * h);
        }
    }
    (0..n).map(|i| (0..n).map(|j| jac[j][i] - jac[i][j]).collect()).collect()
}
