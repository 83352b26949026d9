//! Thermoelastic material point with state `(eps, F, H)`: internal energy
//! per unit volume, deformation gradient and Biot heat vector (`H' = q`).
//!
//! The entropy form is
//! `eta = theta^-1 d eps - (theta rho)^-1 (sigma:F^-1):dF - rho^-1 grad(theta^-1).dH`
//! and, when closed, `eta = dU` with
//! `theta^-1 = U_eps`, `sigma:F^-1 = -rho U_F / U_eps`, `grad(theta^-1) = -rho U_H`.
//! Here `sigma:F^-1` is the 3x3 stress term `S = sigma F^-T`, so that
//! `S : dF = sigma : (dF F^-1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::build::{add, div, mul, neg};
use crate::expr::{Expr, ScalarField};
use crate::geometry::OneForm;
use crate::numerics::ode::rk4_step;
use crate::tensor::{self, contract, det, mat_mul, Mat3, Vec3, EPS, TIME};

/// `(eps, F11..F33, H1..H3)`.
pub fn base_coords() -> Vec<String> {
    std::iter::once(EPS.to_string()).chain(tensor::tensor_names("F")).chain(tensor::vector_names("H")).collect()
}

pub const DIM: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoelasticState {
    pub eps: f64,
    pub f: Mat3,
    pub h: Vec3,
}

impl ThermoelasticState {
    pub fn new(eps: f64, f: Mat3, h: Vec3) -> Result<Self> {
        let s = ThermoelasticState { eps, f, h };
        s.check_orientation()?;
        Ok(s)
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(DIM);
        v.push(self.eps);
        v.extend_from_slice(&self.f);
        v.extend_from_slice(&self.h);
        v
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() != DIM {
            return Err(Error::Dimension { expected: DIM, found: v.len() });
        }
        let mut f = [0.0; 9];
        f.copy_from_slice(&v[1..10]);
        Ok(ThermoelasticState { eps: v[0], f, h: [v[10], v[11], v[12]] })
    }

    pub fn det_f(&self) -> f64 {
        det(&self.f)
    }

    fn check_orientation(&self) -> Result<()> {
        let d = self.det_f();
        if d > 0.0 {
            Ok(())
        } else {
            Err(Error::Orientation(d))
        }
    }
}

/// Entropy-form potential `U(eps, F, H)` with density and Fourier coefficient.
#[derive(Debug, Clone)]
pub struct ThermoelasticConstitutive {
    potential: ScalarField,
    pub rho: f64,
    pub k: f64,
}

/// Constitutive outputs at a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoelasticResponse {
    pub theta_inv: f64,
    /// `sigma:F^-1`, row-major.
    pub stress_term: Mat3,
    pub grad_theta_inv: Vec3,
}

impl ThermoelasticResponse {
    pub fn theta(&self) -> f64 {
        1.0 / self.theta_inv
    }

    /// Cauchy stress `sigma = S F^T`.
    pub fn cauchy_stress(&self, f: &Mat3) -> Mat3 {
        mat_mul(&self.stress_term, &tensor::transpose(f))
    }
}

/// Symbolic constitutive fields over [`base_coords`].
#[derive(Debug, Clone)]
pub struct ThermoelasticFields {
    pub theta_inv: ScalarField,
    pub stress_term: Vec<ScalarField>,
    pub grad_theta_inv: Vec<ScalarField>,
}

impl ThermoelasticConstitutive {
    /// `potential` may use any subset of [`base_coords`].
    pub fn new(potential: &ScalarField, rho: f64, k: f64) -> Result<Self> {
        if !(rho > 0.0) || !(k > 0.0) {
            return Err(Error::Invalid(format!("rho and k must be positive (rho = {rho}, k = {k})")));
        }
        Ok(ThermoelasticConstitutive { potential: potential.rebind(&base_coords())?, rho, k })
    }

    pub fn parse(potential: &str, rho: f64, k: f64) -> Result<Self> {
        ThermoelasticConstitutive::new(&ScalarField::parse(potential, &base_coords())?, rho, k)
    }

    pub fn potential(&self) -> &ScalarField {
        &self.potential
    }

    /// Constitutive relations as expression fields built from symbolic
    /// partials of `U`.
    pub fn fields(&self) -> Result<ThermoelasticFields> {
        let coords = base_coords();
        let u = self.potential.expr();
        let rho = Expr::Num(self.rho);
        let u_eps = u.derivative(EPS);
        let field = |e: Expr| ScalarField::new(e, &coords);
        let stress_term = tensor::tensor_names("F")
            .iter()
            .map(|n| field(neg(div(mul(rho.clone(), u.derivative(n)), u_eps.clone()))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let grad_theta_inv = tensor::vector_names("H")
            .iter()
            .map(|n| field(neg(mul(rho.clone(), u.derivative(n)))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(ThermoelasticFields { theta_inv: field(u_eps)?, stress_term, grad_theta_inv })
    }

    /// The entropy form assembled from [`Self::fields`].
    pub fn entropy_form(&self) -> Result<OneForm> {
        let f = self.fields()?;
        entropy_form(&f.theta_inv, &f.stress_term, &f.grad_theta_inv, self.rho)
    }

    /// Exact-gradient evaluation of the constitutive relations.
    pub fn response(&self, x: &ThermoelasticState) -> Result<ThermoelasticResponse> {
        let d = self.potential.gradient(&x.to_vec())?;
        response_from_gradient(&d.g, self.rho)
    }
}

fn response_from_gradient(g: &[f64], rho: f64) -> Result<ThermoelasticResponse> {
    let u_eps = g[0];
    if u_eps == 0.0 || !u_eps.is_finite() {
        return Err(Error::TemperatureSingularity(u_eps));
    }
    let mut stress_term = [0.0; 9];
    for (s, u_f) in stress_term.iter_mut().zip(&g[1..10]) {
        *s = -rho * u_f / u_eps;
    }
    let grad_theta_inv = [-rho * g[10], -rho * g[11], -rho * g[12]];
    Ok(ThermoelasticResponse { theta_inv: u_eps, stress_term, grad_theta_inv })
}

pub fn constitutive_from_potential(
    c: &ThermoelasticConstitutive,
    x: &ThermoelasticState,
) -> Result<ThermoelasticResponse> {
    c.response(x)
}

/// 13-coefficient entropy form in `(eps, F11..F33, H1..H3)` order.
pub fn entropy_form(
    theta_inv: &ScalarField,
    stress_term: &[ScalarField],
    grad_theta_inv: &[ScalarField],
    rho: f64,
) -> Result<OneForm> {
    if stress_term.len() != 9 {
        return Err(Error::Dimension { expected: 9, found: stress_term.len() });
    }
    if grad_theta_inv.len() != 3 {
        return Err(Error::Dimension { expected: 3, found: grad_theta_inv.len() });
    }
    let coords = base_coords();
    let rho = Expr::Num(rho);
    let ti = theta_inv.expr().clone();
    let mut coeffs = vec![theta_inv.rebind(&coords)?];
    for s in stress_term {
        // -(theta rho)^-1 (sigma:F^-1)
        let e = neg(mul(div(ti.clone(), rho.clone()), s.expr().clone()));
        coeffs.push(ScalarField::new(e, &coords)?);
    }
    for g in grad_theta_inv {
        let e = neg(div(g.expr().clone(), rho.clone()));
        coeffs.push(ScalarField::new(e, &coords)?);
    }
    OneForm::new(coords, coeffs)
}

/// Velocity gradient `L(t)` and heat-flux divergence `div q(t)`.
#[derive(Debug, Clone)]
pub struct ThermoelasticForcing {
    velocity_gradient: Vec<ScalarField>,
    div_q: ScalarField,
}

fn time_coords() -> Vec<String> {
    vec![TIME.to_string()]
}

pub(crate) fn time_fields(texts: &[&str], expected: usize) -> Result<Vec<ScalarField>> {
    if texts.len() != expected {
        return Err(Error::Dimension { expected, found: texts.len() });
    }
    texts.iter().map(|t| ScalarField::parse(t, &time_coords())).collect()
}

pub(crate) fn eval_time(fields: &[ScalarField], t: f64) -> Result<Vec<f64>> {
    Ok(fields.iter().map(|f| f.value(&[t])).collect::<std::result::Result<Vec<_>, _>>()?)
}

impl ThermoelasticForcing {
    /// Expressions of `t`; `velocity_gradient` is row-major.
    pub fn parse(velocity_gradient: &[&str], div_q: &str) -> Result<Self> {
        Ok(ThermoelasticForcing {
            velocity_gradient: time_fields(velocity_gradient, 9)?,
            div_q: time_fields(&[div_q], 1)?.remove(0),
        })
    }

    pub fn zero() -> Self {
        ThermoelasticForcing::parse(&["0"; 9], "0").expect("constant forcing parses")
    }

    pub fn velocity_gradient(&self, t: f64) -> Result<Mat3> {
        let v = eval_time(&self.velocity_gradient, t)?;
        let mut l = [0.0; 9];
        l.copy_from_slice(&v);
        Ok(l)
    }

    pub fn div_q(&self, t: f64) -> Result<f64> {
        Ok(self.div_q.value(&[t])?)
    }
}

/// Right-hand side `(eps', F', H')` of the closed point system:
/// `F' = L F`, `eps' = rho^-1 S:(L F) - rho^-1 div q`, `H' = k^-1 rho U_H`.
pub fn rates(
    x: &ThermoelasticState,
    c: &ThermoelasticConstitutive,
    forcing: &ThermoelasticForcing,
    t: f64,
) -> Result<Vec<f64>> {
    let d = c.potential.gradient(&x.to_vec())?;
    let r = response_from_gradient(&d.g, c.rho)?;
    let l = forcing.velocity_gradient(t)?;
    let f_dot = mat_mul(&l, &x.f);
    // Energy balance with the stress term from the potential; the printed
    // closed-form line of the potential system is not used.
    let eps_dot = (contract(&r.stress_term, &f_dot) - forcing.div_q(t)?) / c.rho;
    let mut out = Vec::with_capacity(DIM);
    out.push(eps_dot);
    out.extend_from_slice(&f_dot);
    out.extend(d.g[10..13].iter().map(|u_h| c.rho * u_h / c.k));
    Ok(out)
}

/// One classical RK4 step.
pub fn step(
    x: &ThermoelasticState,
    c: &ThermoelasticConstitutive,
    forcing: &ThermoelasticForcing,
    t: f64,
    dt: f64,
) -> Result<ThermoelasticState> {
    if !(dt > 0.0) {
        return Err(Error::Invalid(format!("time step must be positive, got {dt}")));
    }
    let y = rk4_step(t, &x.to_vec(), dt, |t, y| rates(&ThermoelasticState::from_slice(y)?, c, forcing, t))?;
    let next = ThermoelasticState::from_slice(&y)?;
    next.check_orientation()?;
    Ok(next)
}

/// States at `t0 + k dt` for `k = 0..=steps`. On failure the trajectory up
/// to the last good state is returned with the error.
pub fn integrate(
    x0: &ThermoelasticState,
    c: &ThermoelasticConstitutive,
    forcing: &ThermoelasticForcing,
    t0: f64,
    dt: f64,
    steps: usize,
) -> (Vec<(f64, ThermoelasticState)>, Option<Error>) {
    let mut out = vec![(t0, *x0)];
    let mut x = *x0;
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        match step(&x, c, forcing, t, dt) {
            Ok(next) => {
                x = next;
                out.push((t0 + (k + 1) as f64 * dt, x));
            }
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}

/// Coordinates `(eps, F11..F33, beta1..beta3, t)` of the time-dependent form
/// `eta' = theta^-1 d eps - (sigma:F^-1 / theta):dF + (q.beta) dt`.
pub fn eta_prime_coords() -> Vec<String> {
    std::iter::once(EPS.to_string())
        .chain(tensor::tensor_names("F"))
        .chain(tensor::vector_names("beta"))
        .chain(std::iter::once(TIME.to_string()))
        .collect()
}

/// Coefficients of `eta'`: `theta^-1`, `G = sigma:F^-1 / theta` and `q.beta`.
#[derive(Debug, Clone)]
pub struct EtaPrimeCoefficients {
    pub theta_inv: ScalarField,
    pub stress_over_theta: Vec<ScalarField>,
    pub q_dot_beta: ScalarField,
}

impl EtaPrimeCoefficients {
    pub fn new(theta_inv: ScalarField, stress_over_theta: Vec<ScalarField>, q_dot_beta: ScalarField) -> Result<Self> {
        if stress_over_theta.len() != 9 {
            return Err(Error::Dimension { expected: 9, found: stress_over_theta.len() });
        }
        let coords = eta_prime_coords();
        Ok(EtaPrimeCoefficients {
            theta_inv: theta_inv.rebind(&coords)?,
            stress_over_theta: stress_over_theta
                .iter()
                .map(|f| f.rebind(&coords))
                .collect::<std::result::Result<_, _>>()?,
            q_dot_beta: q_dot_beta.rebind(&coords)?,
        })
    }

    /// General solution of the closeness system for a time-dependent
    /// potential `U(eps, F, t)` and gauge functions `c1(t)`, `c2(t)` (3x3),
    /// `c3(t)`:
    /// `theta^-1 = U_eps + c1`, `sigma:F^-1 = -(U_F + c2) / (U_eps + c1)`,
    /// `q.beta = U_t + c2'.F + c1' eps + c3`.
    pub fn from_potential(potential: &Expr, c1: &Expr, c2: &[Expr], c3: &Expr) -> Result<Self> {
        if c2.len() != 9 {
            return Err(Error::Dimension { expected: 9, found: c2.len() });
        }
        let coords = eta_prime_coords();
        let f_names = tensor::tensor_names("F");
        let theta_inv = add(potential.derivative(EPS), c1.clone());
        let mut g = Vec::with_capacity(9);
        let mut gauge_work = Expr::Num(0.0);
        for (n, c) in f_names.iter().zip(c2) {
            let stress = neg(div(add(potential.derivative(n), c.clone()), theta_inv.clone()));
            g.push(ScalarField::new(mul(stress, theta_inv.clone()), &coords)?);
            gauge_work = add(gauge_work, mul(c.derivative(TIME), Expr::var(n.clone())));
        }
        let q_beta =
            add(add(add(potential.derivative(TIME), gauge_work), mul(c1.derivative(TIME), Expr::var(EPS))), c3.clone());
        EtaPrimeCoefficients::new(ScalarField::new(theta_inv, &coords)?, g, ScalarField::new(q_beta, &coords)?)
    }
}

/// Max-abs residual of each closeness condition of `eta'` at `x` (in
/// [`eta_prime_coords`] order):
/// 1. `d_F(theta^-1) + d_eps(G)`, 2. `d_beta(theta^-1)`, 3. `d_beta(G)`,
/// 4. `d_beta(q.beta)`, 5. `d_t(G) + d_F(q.beta)`, 6. `d_t(theta^-1) - d_eps(q.beta)`.
pub fn closeness_system_residual(c: &EtaPrimeCoefficients, x: &[f64]) -> Result<[f64; 6]> {
    const E: usize = 0;
    const F0: usize = 1;
    const B0: usize = 10;
    const T: usize = 13;
    let a = c.theta_inv.gradient(x)?.g;
    let g: Vec<Vec<f64>> =
        c.stress_over_theta.iter().map(|f| f.gradient(x).map(|d| d.g)).collect::<std::result::Result<_, _>>()?;
    let q = c.q_dot_beta.gradient(x)?.g;
    let max = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0f64, |m, v| m.max(v.abs()));
    Ok([
        max(&mut (0..9).map(|k| a[F0 + k] + g[k][E])),
        max(&mut (0..3).map(|b| a[B0 + b])),
        max(&mut (0..9).flat_map(|k| (0..3).map(move |b| (k, b))).map(|(k, b)| g[k][B0 + b])),
        max(&mut (0..3).map(|b| q[B0 + b])),
        max(&mut (0..9).map(|k| g[k][T] + q[F0 + k])),
        (a[T] - q[E]).abs(),
    ])
}
