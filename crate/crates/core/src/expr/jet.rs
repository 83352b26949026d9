//! Forward-mode number types: plain values, first-order duals and
//! second-order jets carrying a dense gradient and Hessian.
//!
//! Hessian updates only ever write the upper triangle and mirror it, so a
//! jet's Hessian is bitwise symmetric.

/// Arithmetic needed by the expression evaluator.
///
/// Nonlinear functions go through [`Number::chain`], which applies the
/// chain rule given the function value and its first two derivatives at
/// the current point.
pub trait Number: Sized + Clone {
    fn constant(v: f64, dim: usize) -> Self;
    fn value(&self) -> f64;
    /// True when every carried derivative is zero.
    fn is_constant(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn chain(&self, f: f64, d1: f64, d2: f64) -> Self;
}

impl Number for f64 {
    fn constant(v: f64, _dim: usize) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn is_constant(&self) -> bool {
        true
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn chain(&self, f: f64, _d1: f64, _d2: f64) -> Self {
        f
    }
}

/// Value and gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub g: Vec<f64>,
}

impl Dual {
    pub fn variable(v: f64, index: usize, dim: usize) -> Self {
        let mut g = vec![0.0; dim];
        g[index] = 1.0;
        Dual { v, g }
    }
}

impl Number for Dual {
    fn constant(v: f64, dim: usize) -> Self {
        Dual { v, g: vec![0.0; dim] }
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn is_constant(&self) -> bool {
        self.g.iter().all(|x| *x == 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        Dual { v: self.v + o.v, g: self.g.iter().zip(&o.g).map(|(a, b)| a + b).collect() }
    }
    fn sub(&self, o: &Self) -> Self {
        Dual { v: self.v - o.v, g: self.g.iter().zip(&o.g).map(|(a, b)| a - b).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        Dual { v: self.v * o.v, g: self.g.iter().zip(&o.g).map(|(a, b)| a * o.v + self.v * b).collect() }
    }
    fn neg(&self) -> Self {
        Dual { v: -self.v, g: self.g.iter().map(|a| -a).collect() }
    }
    fn chain(&self, f: f64, d1: f64, _d2: f64) -> Self {
        Dual { v: f, g: self.g.iter().map(|a| d1 * a).collect() }
    }
}

/// Value, gradient and row-major Hessian.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
}

impl Jet2 {
    pub fn variable(v: f64, index: usize, dim: usize) -> Self {
        let mut j = Jet2::constant(v, dim);
        j.g[index] = 1.0;
        j
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.h[i * self.dim() + j]
    }

    /// Hessian as nested rows.
    pub fn hessian_rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| self.h[i * n..(i + 1) * n].to_vec()).collect()
    }

    fn fill_symmetric(n: usize, mut entry: impl FnMut(usize, usize) -> f64) -> Vec<f64> {
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let x = entry(i, j);
                h[i * n + j] = x;
                h[j * n + i] = x;
            }
        }
        h
    }
}

impl Number for Jet2 {
    fn constant(v: f64, dim: usize) -> Self {
        Jet2 { v, g: vec![0.0; dim], h: vec![0.0; dim * dim] }
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn is_constant(&self) -> bool {
        self.g.iter().chain(&self.h).all(|x| *x == 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        Jet2 {
            v: self.v + o.v,
            g: self.g.iter().zip(&o.g).map(|(a, b)| a + b).collect(),
            h: self.h.iter().zip(&o.h).map(|(a, b)| a + b).collect(),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Jet2 {
            v: self.v - o.v,
            g: self.g.iter().zip(&o.g).map(|(a, b)| a - b).collect(),
            h: self.h.iter().zip(&o.h).map(|(a, b)| a - b).collect(),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        let n = self.dim();
        let (a, b) = (self, o);
        let h = Jet2::fill_symmetric(n, |i, j| {
            a.v * b.h[i * n + j] + b.v * a.h[i * n + j] + (a.g[i] * b.g[j] + a.g[j] * b.g[i])
        });
        Jet2 { v: a.v * b.v, g: a.g.iter().zip(&b.g).map(|(x, y)| x * b.v + a.v * y).collect(), h }
    }
    fn neg(&self) -> Self {
        Jet2 { v: -self.v, g: self.g.iter().map(|a| -a).collect(), h: self.h.iter().map(|a| -a).collect() }
    }
    fn chain(&self, f: f64, d1: f64, d2: f64) -> Self {
        let n = self.dim();
        let h = Jet2::fill_symmetric(n, |i, j| d1 * self.h[i * n + j] + d2 * (self.g[i] * self.g[j]));
        Jet2 { v: f, g: self.g.iter().map(|a| d1 * a).collect(), h }
    }
}
