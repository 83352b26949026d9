//! Sampled process curves: entropy action integrals, admissibility of
//! processes on a constitutive surface, the thermodynamic metric and the
//! rate relation between extensive and intensive variables.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Binding, ScalarField};
use crate::geometry::OneForm;
use crate::legendre::ConstitutiveSurface;
use crate::numerics::determinant;
use crate::numerics::quadrature::GaussLegendre;

/// Gauss–Legendre nodes per sample interval.
pub const ACTION_NODES: usize = 8;
/// Default slack of the admissibility sign test.
pub const DEFAULT_ADMISSIBILITY_TOL: f64 = -1e-9;
/// Hessian determinants below this magnitude count as degenerate.
pub const DEGENERATE_DET: f64 = 1e-12;

/// Samples `(t_i, x_i)` with strictly increasing `t_i`; `x_i` are values of
/// the named coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessCurve {
    names: Vec<String>,
    times: Vec<f64>,
    points: Vec<Vec<f64>>,
}

impl ProcessCurve {
    pub fn new(names: Vec<String>, times: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::Invalid(format!("a process curve needs at least 2 samples, got {}", times.len())));
        }
        if times.len() != points.len() {
            return Err(Error::Invalid(format!("{} times but {} points", times.len(), points.len())));
        }
        if let Some(w) = times.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid(format!("sample times must increase strictly (at sample {})", w + 1)));
        }
        if let Some(p) = points.iter().find(|p| p.len() != names.len()) {
            return Err(Error::Dimension { expected: names.len(), found: p.len() });
        }
        Binding::from_parts(&names, &vec![0.0; names.len()])?;
        Ok(ProcessCurve { names, times, points })
    }

    /// Uniform grid `t0 + k dt` sampling `f`.
    pub fn sample(
        names: Vec<String>,
        t0: f64,
        dt: f64,
        count: usize,
        mut f: impl FnMut(f64) -> Vec<f64>,
    ) -> Result<Self> {
        let times: Vec<f64> = (0..count).map(|k| t0 + k as f64 * dt).collect();
        let points = times.iter().map(|&t| f(t)).collect();
        ProcessCurve::new(names, times, points)
    }

    pub fn from_bindings(times: Vec<f64>, samples: &[Binding]) -> Result<Self> {
        let names = samples.first().map(|b| b.names().to_vec()).unwrap_or_default();
        let points = samples.iter().map(|b| b.select(&names)).collect::<std::result::Result<_, _>>()?;
        ProcessCurve::new(names, times, points)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// The inverse process `t -> x(-t)`, sampled at the negated times.
    pub fn reversed(&self) -> ProcessCurve {
        ProcessCurve {
            names: self.names.clone(),
            times: self.times.iter().rev().map(|t| -t).collect(),
            points: self.points.iter().rev().cloned().collect(),
        }
    }

    /// Columns of the samples in the order of `names`.
    fn project(&self, names: &[String]) -> Result<Vec<Vec<f64>>> {
        let idx = names
            .iter()
            .map(|n| {
                self.names
                    .iter()
                    .position(|m| m == n)
                    .ok_or_else(|| Error::Invalid(format!("process curve has no coordinate `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.points.iter().map(|p| idx.iter().map(|&i| p[i]).collect()).collect())
    }

    /// Finite-difference tangents at every sample: central inside, one-sided
    /// at the ends.
    pub fn tangents(&self) -> Vec<Vec<f64>> {
        tangents(&self.times, &self.points)
    }
}

fn tangents(t: &[f64], x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = t.len();
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            let h = t[b] - t[a];
            x[b].iter().zip(&x[a]).map(|(xb, xa)| (xb - xa) / h).collect()
        })
        .collect()
}

/// `sum_i int_0^1 f(x_i + tau (x_{i+1} - x_i)) . (x_{i+1} - x_i) dtau` for a
/// covector field `f` on linearly interpolated samples.
fn polyline_integral(
    points: &[Vec<f64>],
    nodes: usize,
    mut covector: impl FnMut(&[f64]) -> Result<Vec<f64>>,
) -> Result<f64> {
    let rule = GaussLegendre::new(nodes);
    let mut total = 0.0;
    let mut x = vec![0.0; points.first().map_or(0, Vec::len)];
    for w in points.windows(2) {
        let step: Vec<f64> = w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect();
        total += rule.integrate(0.0, 1.0, |tau| {
            for ((xi, a), d) in x.iter_mut().zip(&w[0]).zip(&step) {
                *xi = a + tau * d;
            }
            let c = covector(&x)?;
            Ok::<_, Error>(c.iter().zip(&step).map(|(ci, di)| ci * di).sum())
        })?;
    }
    Ok(total)
}

/// `int_gamma eta` with [`ACTION_NODES`] nodes per interval. The curve must
/// carry every coordinate of the form.
pub fn entropy_action(curve: &ProcessCurve, form: &OneForm) -> Result<f64> {
    entropy_action_with(curve, form, ACTION_NODES)
}

pub fn entropy_action_with(curve: &ProcessCurve, form: &OneForm, nodes: usize) -> Result<f64> {
    if nodes < 4 {
        return Err(Error::Invalid(format!("at least 4 quadrature nodes per interval, got {nodes}")));
    }
    let pts = curve.project(form.coords())?;
    polyline_integral(&pts, nodes, |x| form.eval_at(x))
}

/// Integrals along the lift of a curve onto a constitutive surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftedAction {
    /// `int theta` over the lift.
    pub contact: f64,
    /// `int p dq` over the lift.
    pub work: f64,
    /// `int ds` over the lift.
    pub entropy: f64,
}

/// Independent quadrature of the contact form, of `p dq` and of `ds` along
/// the lifted curve `q(t) -> (s, q, p)`.
pub fn lifted_action(surface: &ConstitutiveSurface, curve: &ProcessCurve, nodes: usize) -> Result<LiftedAction> {
    let pts = curve.project(surface.chart().extensive())?;
    let contact = polyline_integral(&pts, nodes, |q| surface.pullback_at(q))?;
    let work = polyline_integral(&pts, nodes, |q| Ok(surface.embed_at(q)?.p))?;
    let entropy = polyline_integral(&pts, nodes, |q| Ok(surface.entropy().gradient(q)?.g))?;
    Ok(LiftedAction { contact, work, entropy })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityOptions {
    pub tol: f64,
    pub include_endpoints: bool,
}

impl Default for AdmissibilityOptions {
    fn default() -> Self {
        AdmissibilityOptions { tol: DEFAULT_ADMISSIBILITY_TOL, include_endpoints: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// Sample indices whose rate fell below the tolerance.
    pub violations: Vec<usize>,
    pub times: Vec<f64>,
    /// `d sigma(chi')` at every sample.
    pub rates: Vec<f64>,
    pub delta_sigma: f64,
    pub delta_u: f64,
    pub delta_s: f64,
    pub tol: f64,
    pub include_endpoints: bool,
}

/// Second-law test along a curve on `surface`: every considered rate
/// `d sigma(chi')` must be at least `opts.tol`.
pub fn admissibility(
    surface: &ConstitutiveSurface,
    curve: &ProcessCurve,
    opts: AdmissibilityOptions,
) -> Result<AdmissibilityReport> {
    let pts = curve.project(surface.chart().extensive())?;
    let tangents = tangents(&curve.times, &pts);
    let rates = pts
        .iter()
        .zip(&tangents)
        .map(|(q, v)| {
            let g = surface.sigma().gradient(q)?.g;
            Ok(g.iter().zip(v).map(|(a, b)| a * b).sum())
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = rates.len();
    let violations: Vec<usize> = (0..n)
        .filter(|&i| opts.include_endpoints || (i != 0 && i != n - 1))
        .filter(|&i| !(rates[i] >= opts.tol))
        .collect();
    let (first, last) = (&pts[0], &pts[n - 1]);
    let delta_sigma = surface.sigma().value(last)? - surface.sigma().value(first)?;
    let delta_u = surface.potential().value(last)? - surface.potential().value(first)?;
    Ok(AdmissibilityReport {
        admissible: violations.is_empty(),
        violations,
        times: curve.times.clone(),
        rates,
        delta_sigma,
        delta_u,
        delta_s: delta_u + delta_sigma,
        tol: opts.tol,
        include_endpoints: opts.include_endpoints,
    })
}

/// Hessian of `u` at `q`, exactly symmetric.
pub fn thermo_metric(u: &ScalarField, q: &[f64]) -> Result<Vec<Vec<f64>>> {
    Ok(u.jet(q)?.hessian_rows())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Godograph {
    pub det: f64,
    pub degenerate: bool,
}

/// Determinant of [`thermo_metric`]; the map `q -> grad u` is locally
/// invertible where it is not degenerate.
pub fn godograph_det(u: &ScalarField, q: &[f64]) -> Result<Godograph> {
    let det = determinant(&thermo_metric(u, q)?);
    Ok(Godograph { det, degenerate: det.abs() < DEGENERATE_DET })
}

/// Sign changes of the godograph determinant along coordinate `axis`
/// between `lo` and `hi`, other coordinates fixed at `base`: a uniform scan
/// with `samples` points, then bisection of each bracket to width `tol`.
pub fn spinodal_scan(
    u: &ScalarField,
    base: &[f64],
    axis: usize,
    lo: f64,
    hi: f64,
    samples: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if axis >= base.len() || samples < 2 || !(hi > lo) || !(tol > 0.0) {
        return Err(Error::Invalid("spinodal scan needs a valid axis, range, sample count and tolerance".into()));
    }
    let mut x = base.to_vec();
    let mut det_at = |v: f64| -> Result<f64> {
        x[axis] = v;
        Ok(godograph_det(u, &x)?.det)
    };
    let grid: Vec<f64> = (0..samples).map(|k| lo + (hi - lo) * k as f64 / (samples - 1) as f64).collect();
    let values = grid.iter().map(|&v| det_at(v)).collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    for k in 0..samples - 1 {
        let (mut a, mut b) = (grid[k], grid[k + 1]);
        let (fa, fb) = (values[k], values[k + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        while b - a > tol {
            let m = 0.5 * (a + b);
            if det_at(m)?.signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    if values[samples - 1] == 0.0 {
        roots.push(hi);
    }
    Ok(roots)
}

/// Residual of `d/dt p_i = u_{,ij} dq^j/dt + u_{,it}` at the interior
/// samples, with `p = grad u` along the curve and both time derivatives by
/// central differences. `u` is bound over `q_names`, optionally followed by
/// the time coordinate `time_name`, whose value is the sample time.
pub fn rate_relation_residual(
    u: &ScalarField,
    q_names: &[String],
    time_name: Option<&str>,
    curve: &ProcessCurve,
) -> Result<Vec<f64>> {
    if curve.len() < 3 {
        return Err(Error::Invalid("the rate relation needs at least 3 samples".into()));
    }
    let m = q_names.len();
    let mut coords = q_names.to_vec();
    coords.extend(time_name.map(str::to_string));
    let u = u.rebind(&coords)?;
    let qs = curve.project(q_names)?;
    let args: Vec<Vec<f64>> = qs
        .iter()
        .zip(&curve.times)
        .map(|(q, &t)| {
            let mut a = q.clone();
            if time_name.is_some() {
                a.push(t);
            }
            a
        })
        .collect();
    let jets = args.iter().map(|a| u.jet(a)).collect::<std::result::Result<Vec<_>, _>>()?;
    let ps: Vec<Vec<f64>> = jets.iter().map(|j| j.g[..m].to_vec()).collect();
    let p_dot = tangents(&curve.times, &ps);
    let q_dot = tangents(&curve.times, &qs);
    Ok((1..curve.len() - 1)
        .map(|k| {
            let j = &jets[k];
            (0..m)
                .map(|i| {
                    let mut rhs: f64 = (0..m).map(|l| j.hess(i, l) * q_dot[k][l]).sum();
                    if time_name.is_some() {
                        rhs += j.hess(i, m);
                    }
                    (p_dot[k][i] - rhs).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect())
}
