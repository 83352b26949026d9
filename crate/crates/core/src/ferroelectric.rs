//! Deformable ferroelectric crystal point. The state adds to the
//! thermoelastic one the polarization per unit mass `pi`, its gradient
//! `gpi`, the polarization rate `u` and its gradient `gu`.
//!
//! Constitutive relations from `U(eps, F, pi, gpi, H[, t])`:
//! `theta^-1 = U_eps`, `S = sigma F^-T = -rho theta U_F`, `E_loc = theta U_pi`,
//! `E_tensor = -rho theta U_gpi`, `beta = U_H`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::build::{add, div, mul, neg, sub};
use crate::expr::{Expr, ScalarField};
use crate::geometry::OneForm;
use crate::numerics::ode::rk4_step;
use crate::tensor::{self, contract, det, mat_mul, Mat3, Vec3, EPS, TIME};
use crate::thermoelastic::{eval_time, time_fields};

pub const BASE_DIM: usize = 25;
pub const STATE_DIM: usize = 37;

/// `(eps, F11..F33, pi1..pi3, gpi11..gpi33, H1..H3)`.
pub fn base_coords() -> Vec<String> {
    std::iter::once(EPS.to_string())
        .chain(tensor::tensor_names("F"))
        .chain(tensor::vector_names("pi"))
        .chain(tensor::tensor_names("gpi"))
        .chain(tensor::vector_names("H"))
        .collect()
}

/// [`base_coords`] followed by `t`.
pub fn time_extended_coords() -> Vec<String> {
    let mut c = base_coords();
    c.push(TIME.to_string());
    c
}

/// Trace order of the state: `eps, F, H, pi, gpi, u, gu`.
pub fn state_names() -> Vec<String> {
    std::iter::once(EPS.to_string())
        .chain(tensor::tensor_names("F"))
        .chain(tensor::vector_names("H"))
        .chain(tensor::vector_names("pi"))
        .chain(tensor::tensor_names("gpi"))
        .chain(tensor::vector_names("u"))
        .chain(tensor::tensor_names("gu"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FerroelectricState {
    pub eps: f64,
    pub f: Mat3,
    pub h: Vec3,
    pub pi: Vec3,
    pub gpi: Mat3,
    pub u: Vec3,
    pub gu: Mat3,
}

impl FerroelectricState {
    pub fn new(eps: f64, f: Mat3, h: Vec3, pi: Vec3, gpi: Mat3, u: Vec3, gu: Mat3) -> Result<Self> {
        let s = FerroelectricState { eps, f, h, pi, gpi, u, gu };
        s.check_orientation()?;
        Ok(s)
    }

    /// In [`state_names`] order.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(STATE_DIM);
        v.push(self.eps);
        v.extend_from_slice(&self.f);
        v.extend_from_slice(&self.h);
        v.extend_from_slice(&self.pi);
        v.extend_from_slice(&self.gpi);
        v.extend_from_slice(&self.u);
        v.extend_from_slice(&self.gu);
        v
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() != STATE_DIM {
            return Err(Error::Dimension { expected: STATE_DIM, found: v.len() });
        }
        let m = |o: usize| -> Mat3 { v[o..o + 9].try_into().unwrap() };
        let w = |o: usize| -> Vec3 { v[o..o + 3].try_into().unwrap() };
        Ok(FerroelectricState { eps: v[0], f: m(1), h: w(10), pi: w(13), gpi: m(16), u: w(25), gu: m(28) })
    }

    /// Arguments of the potential: [`time_extended_coords`] order at time `t`.
    pub fn potential_args(&self, t: f64) -> Vec<f64> {
        let mut v = Vec::with_capacity(BASE_DIM + 1);
        v.push(self.eps);
        v.extend_from_slice(&self.f);
        v.extend_from_slice(&self.pi);
        v.extend_from_slice(&self.gpi);
        v.extend_from_slice(&self.h);
        v.push(t);
        v
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

#[derive(Debug, Clone)]
pub struct FerroelectricConstitutive {
    potential: ScalarField,
    pub rho: f64,
    pub k: f64,
    pub inertia: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FerroelectricResponse {
    pub theta_inv: f64,
    pub stress_term: Mat3,
    pub local_field: Vec3,
    pub local_field_tensor: Mat3,
    pub beta: Vec3,
}

impl FerroelectricResponse {
    pub fn theta(&self) -> f64 {
        1.0 / self.theta_inv
    }
}

/// Symbolic constitutive fields over [`time_extended_coords`].
#[derive(Debug, Clone)]
pub struct FerroelectricFields {
    pub theta_inv: ScalarField,
    pub stress_term: Vec<ScalarField>,
    pub local_field: Vec<ScalarField>,
    pub local_field_tensor: Vec<ScalarField>,
    pub beta: Vec<ScalarField>,
}

impl FerroelectricConstitutive {
    /// `potential` may use any subset of [`time_extended_coords`]. The
    /// inertia constant is 1 unless changed with [`Self::with_inertia`].
    pub fn new(potential: &ScalarField, rho: f64, k: f64) -> Result<Self> {
        if !(rho > 0.0) || !(k > 0.0) {
            return Err(Error::Invalid(format!("rho and k must be positive (rho = {rho}, k = {k})")));
        }
        Ok(FerroelectricConstitutive { potential: potential.rebind(&time_extended_coords())?, rho, k, inertia: 1.0 })
    }

    pub fn parse(potential: &str, rho: f64, k: f64) -> Result<Self> {
        FerroelectricConstitutive::new(&ScalarField::parse(potential, &time_extended_coords())?, rho, k)
    }

    pub fn with_inertia(mut self, inertia: f64) -> Result<Self> {
        if inertia == 0.0 || !inertia.is_finite() {
            return Err(Error::Invalid(format!("inertia constant must be finite and nonzero, got {inertia}")));
        }
        self.inertia = inertia;
        Ok(self)
    }

    pub fn potential(&self) -> &ScalarField {
        &self.potential
    }

    pub fn response(&self, x: &FerroelectricState, t: f64) -> Result<FerroelectricResponse> {
        let d = self.potential.gradient(&x.potential_args(t))?;
        response_from_gradient(&d.g, self.rho)
    }

    pub fn fields(&self) -> Result<FerroelectricFields> {
        let coords = time_extended_coords();
        let u = self.potential.expr();
        let u_eps = u.derivative(EPS);
        let theta = div(Expr::Num(1.0), u_eps.clone());
        let rho_theta = mul(Expr::Num(self.rho), theta.clone());
        let fields = |names: Vec<String>, factor: &dyn Fn(Expr) -> Expr| {
            names
                .iter()
                .map(|n| ScalarField::new(factor(u.derivative(n)), &coords))
                .collect::<std::result::Result<Vec<_>, _>>()
        };
        Ok(FerroelectricFields {
            theta_inv: ScalarField::new(u_eps.clone(), &coords)?,
            stress_term: fields(tensor::tensor_names("F"), &|d| neg(mul(rho_theta.clone(), d)))?,
            local_field: fields(tensor::vector_names("pi"), &|d| mul(theta.clone(), d))?,
            local_field_tensor: fields(tensor::tensor_names("gpi"), &|d| neg(mul(rho_theta.clone(), d)))?,
            beta: fields(tensor::vector_names("H"), &|d| d)?,
        })
    }

    /// The entropy form over the 25 base coordinates built from [`Self::fields`].
    pub fn entropy_form(&self) -> Result<OneForm> {
        if self.potential.depends_on(TIME) {
            return Err(Error::Invalid("time-dependent potential needs a time coefficient".into()));
        }
        let f = self.fields()?;
        fe_entropy_form(&f, self.rho, None)
    }
}

fn response_from_gradient(g: &[f64], rho: f64) -> Result<FerroelectricResponse> {
    let u_eps = g[0];
    if u_eps == 0.0 || !u_eps.is_finite() {
        return Err(Error::TemperatureSingularity(u_eps));
    }
    let theta = 1.0 / u_eps;
    let scaled = |o: usize, n: usize, c: f64| -> Vec<f64> { g[o..o + n].iter().map(|d| c * d).collect() };
    Ok(FerroelectricResponse {
        theta_inv: u_eps,
        stress_term: scaled(1, 9, -rho * theta).try_into().unwrap(),
        local_field: scaled(10, 3, theta).try_into().unwrap(),
        local_field_tensor: scaled(13, 9, -rho * theta).try_into().unwrap(),
        beta: g[22..25].try_into().unwrap(),
    })
}

pub fn fe_constitutive_from_potential(
    c: &FerroelectricConstitutive,
    x: &FerroelectricState,
    t: f64,
) -> Result<FerroelectricResponse> {
    c.response(x, t)
}

/// External-flux part of the `dt` coefficient, `-rho^-1 (theta^-1 div P + div k)`.
/// The two variants are related by
/// `theta^-1 div P = div(theta^-1 P) - P.grad(theta^-1)`.
#[derive(Debug, Clone)]
pub enum TimeCoefficient {
    Divergence {
        div_poynting: ScalarField,
        div_k: ScalarField,
    },
    Product {
        div_scaled_poynting: ScalarField,
        poynting: Vec<ScalarField>,
        grad_theta_inv: Vec<ScalarField>,
        div_k: ScalarField,
    },
}

impl TimeCoefficient {
    fn flux_expr(&self, theta_inv: &Expr) -> Result<Expr> {
        Ok(match self {
            TimeCoefficient::Divergence { div_poynting, div_k } => {
                add(mul(theta_inv.clone(), div_poynting.expr().clone()), div_k.expr().clone())
            }
            TimeCoefficient::Product { div_scaled_poynting, poynting, grad_theta_inv, div_k } => {
                if poynting.len() != 3 || grad_theta_inv.len() != 3 {
                    return Err(Error::Dimension { expected: 3, found: poynting.len().min(grad_theta_inv.len()) });
                }
                let dot = poynting
                    .iter()
                    .zip(grad_theta_inv)
                    .fold(Expr::Num(0.0), |acc, (p, g)| add(acc, mul(p.expr().clone(), g.expr().clone())));
                add(sub(div_scaled_poynting.expr().clone(), dot), div_k.expr().clone())
            }
        })
    }
}

fn check_len(v: &[ScalarField], n: usize) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::Dimension { expected: n, found: v.len() })
    }
}

/// Entropy form with coefficients
/// `theta^-1, -(rho theta)^-1 S, theta^-1 E_loc, -(rho theta)^-1 E_tensor, beta`
/// over [`base_coords`], or over [`time_extended_coords`] with the extra
/// `dt` coefficient when `time` is given.
pub fn fe_entropy_form(f: &FerroelectricFields, rho: f64, time: Option<&TimeCoefficient>) -> Result<OneForm> {
    check_len(&f.stress_term, 9)?;
    check_len(&f.local_field, 3)?;
    check_len(&f.local_field_tensor, 9)?;
    check_len(&f.beta, 3)?;
    let coords = if time.is_some() { time_extended_coords() } else { base_coords() };
    let ti = f.theta_inv.expr().clone();
    let per_rho = div(ti.clone(), Expr::Num(rho));
    let field = |e: Expr| ScalarField::new(e, &coords);
    let mut coeffs = vec![field(ti.clone())?];
    for s in &f.stress_term {
        coeffs.push(field(neg(mul(per_rho.clone(), s.expr().clone())))?);
    }
    for e in &f.local_field {
        coeffs.push(field(mul(ti.clone(), e.expr().clone()))?);
    }
    for e in &f.local_field_tensor {
        coeffs.push(field(neg(mul(per_rho.clone(), e.expr().clone())))?);
    }
    for b in &f.beta {
        coeffs.push(b.rebind(&coords)?);
    }
    if let Some(tc) = time {
        coeffs.push(field(neg(div(tc.flux_expr(&ti)?, Expr::Num(rho))))?);
    }
    OneForm::new(coords, coeffs)
}

/// Time-dependent driving. Spatial divergences that a point model cannot
/// compute enter as channels: `div_local_field_tensor` for the divergence of
/// the local field tensor, `div_current` and `source` for the `gu` balance.
#[derive(Debug, Clone)]
pub struct FerroelectricForcing {
    external_field: Vec<ScalarField>,
    velocity_gradient: Vec<ScalarField>,
    div_q: ScalarField,
    poynting_term: ScalarField,
    div_local_field_tensor: Vec<ScalarField>,
    div_current: Vec<ScalarField>,
    source: Vec<ScalarField>,
}

/// Expression texts in `t` for [`FerroelectricForcing`]; all default to `"0"`.
#[derive(Debug, Clone)]
pub struct ForcingSpec<'a> {
    pub external_field: [&'a str; 3],
    pub velocity_gradient: [&'a str; 9],
    pub div_q: &'a str,
    pub poynting_term: &'a str,
    pub div_local_field_tensor: [&'a str; 3],
    pub div_current: [&'a str; 9],
    pub source: [&'a str; 9],
}

impl Default for ForcingSpec<'_> {
    fn default() -> Self {
        ForcingSpec {
            external_field: ["0"; 3],
            velocity_gradient: ["0"; 9],
            div_q: "0",
            poynting_term: "0",
            div_local_field_tensor: ["0"; 3],
            div_current: ["0"; 9],
            source: ["0"; 9],
        }
    }
}

impl FerroelectricForcing {
    pub fn parse(spec: &ForcingSpec<'_>) -> Result<Self> {
        Ok(FerroelectricForcing {
            external_field: time_fields(&spec.external_field, 3)?,
            velocity_gradient: time_fields(&spec.velocity_gradient, 9)?,
            div_q: time_fields(&[spec.div_q], 1)?.remove(0),
            poynting_term: time_fields(&[spec.poynting_term], 1)?.remove(0),
            div_local_field_tensor: time_fields(&spec.div_local_field_tensor, 3)?,
            div_current: time_fields(&spec.div_current, 9)?,
            source: time_fields(&spec.source, 9)?,
        })
    }

    pub fn zero() -> Self {
        FerroelectricForcing::parse(&ForcingSpec::default()).expect("constant forcing parses")
    }
}

/// Right-hand side in [`state_names`] order. The energy rate comes from the
/// internal-energy balance with the internal power written through `F'`:
/// `eps' = rho^-1 S:F' - E_loc.u + rho^-1 E_tensor:gu - rho^-1 div q + poynting_term`.
pub fn fe_rates(
    x: &FerroelectricState,
    c: &FerroelectricConstitutive,
    forcing: &FerroelectricForcing,
    t: f64,
) -> Result<Vec<f64>> {
    let r = c.response(x, t)?;
    let rho = c.rho;
    let l: Mat3 = eval_time(&forcing.velocity_gradient, t)?.try_into().unwrap();
    let f_dot = mat_mul(&l, &x.f);
    let eps_dot = contract(&r.stress_term, &f_dot) / rho - contract(&r.local_field, &x.u)
        + contract(&r.local_field_tensor, &x.gu) / rho
        - forcing.div_q.value(&[t])? / rho
        + forcing.poynting_term.value(&[t])?;
    let e_ext = eval_time(&forcing.external_field, t)?;
    let div_lt = eval_time(&forcing.div_local_field_tensor, t)?;
    let div_j = eval_time(&forcing.div_current, t)?;
    let src = eval_time(&forcing.source, t)?;

    let mut out = Vec::with_capacity(STATE_DIM);
    out.push(eps_dot);
    out.extend_from_slice(&f_dot);
    out.extend(r.beta.iter().map(|b| rho * b / c.k));
    out.extend_from_slice(&x.u);
    out.extend_from_slice(&x.gu);
    out.extend((0..3).map(|i| (e_ext[i] + r.local_field[i] + div_lt[i] / rho) / c.inertia));
    out.extend((0..9).map(|i| div_j[i] + src[i]));
    Ok(out)
}

/// One classical RK4 step of the full point system.
pub fn fe_step(
    x: &FerroelectricState,
    c: &FerroelectricConstitutive,
    forcing: &FerroelectricForcing,
    t: f64,
    dt: f64,
) -> Result<FerroelectricState> {
    if !(dt > 0.0) {
        return Err(Error::Invalid(format!("time step must be positive, got {dt}")));
    }
    let y = rk4_step(t, &x.to_vec(), dt, |t, y| fe_rates(&FerroelectricState::from_slice(y)?, c, forcing, t))?;
    let next = FerroelectricState::from_slice(&y)?;
    next.check_orientation()?;
    Ok(next)
}

/// States at `t0 + k dt`; stops at the first failing step and returns its error.
pub fn fe_integrate(
    x0: &FerroelectricState,
    c: &FerroelectricConstitutive,
    forcing: &FerroelectricForcing,
    t0: f64,
    dt: f64,
    steps: usize,
) -> (Vec<(f64, FerroelectricState)>, Option<Error>) {
    let mut out = vec![(t0, *x0)];
    let mut x = *x0;
    for k in 0..steps {
        match fe_step(&x, c, forcing, t0 + k as f64 * dt, dt) {
            Ok(next) => {
                x = next;
                out.push((t0 + (k + 1) as f64 * dt, x));
            }
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}
