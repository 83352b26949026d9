//! Low-discrepancy sample points in axis-aligned boxes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    r
}

/// Axis-aligned box `[lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SampleBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        SampleBox { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// `count` Halton points mapped into the box. A nonzero `seed` applies a
    /// Cranley–Patterson rotation drawn from a seeded ChaCha stream.
    pub fn halton(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let d = self.dim();
        assert!(d <= PRIMES.len(), "Halton sampling supports at most {} dimensions", PRIMES.len());
        let shift: Vec<f64> = if seed == 0 {
            vec![0.0; d]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..d).map(|_| rng.gen::<f64>()).collect()
        };
        (1..=count as u64)
            .map(|i| {
                (0..d)
                    .map(|k| {
                        let u = (radical_inverse(i, PRIMES[k]) + shift[k]).fract();
                        self.lo[k] + u * (self.hi[k] - self.lo[k])
                    })
                    .collect()
            })
            .collect()
    }
}
