//! Contact charts on R^{2n+1}, the canonical contact form
//! `ds - sum_i p_i dq^i`, its Reeb flow, and closeness testing of 1-forms.

use serde::Serialize;

use crate::error::{Error, EvalError, Result};
use crate::expr::{Binding, ScalarField};
use crate::numerics::determinant;
use crate::numerics::quadrature::GaussLegendre;
use crate::numerics::sampling::SampleBox;

/// Default number of sample points for closeness certification.
pub const DEFAULT_SAMPLES: usize = 64;
/// Default absolute tolerance on curl entries.
pub const DEFAULT_CLOSED_TOL: f64 = 1e-8;
/// Gauss–Legendre nodes per leg of a reconstruction path.
pub const RECONSTRUCTION_NODES: usize = 32;

/// Darboux chart `(s; q^1..q^n; p_1..p_n)`. The contact form is implied by
/// the chart and never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactChart {
    potential: String,
    extensive: Vec<String>,
    intensive: Vec<String>,
    time_extended: bool,
}

impl ContactChart {
    /// Chart with default names `s`, `q1..qn`, `p1..pn`.
    pub fn new(n: usize) -> Result<Self> {
        ContactChart::with_names(
            "s",
            (1..=n).map(|i| format!("q{i}")).collect(),
            (1..=n).map(|i| format!("p{i}")).collect(),
            false,
        )
    }

    /// With `time_extended`, the last extensive coordinate plays the role of time.
    pub fn with_names(
        potential: impl Into<String>,
        extensive: Vec<String>,
        intensive: Vec<String>,
        time_extended: bool,
    ) -> Result<Self> {
        let potential = potential.into();
        if extensive.is_empty() {
            return Err(Error::Chart("a contact chart needs n >= 1".into()));
        }
        if extensive.len() != intensive.len() {
            return Err(Error::Chart(format!(
                "{} extensive names but {} intensive names",
                extensive.len(),
                intensive.len()
            )));
        }
        let mut seen: Vec<&String> = Vec::new();
        for name in std::iter::once(&potential).chain(&extensive).chain(&intensive) {
            if seen.contains(&name) {
                return Err(Error::Chart(format!("coordinate name `{name}` is repeated")));
            }
            seen.push(name);
        }
        Ok(ContactChart { potential, extensive, intensive, time_extended })
    }

    pub fn n(&self) -> usize {
        self.extensive.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.n() + 1
    }

    pub fn potential(&self) -> &str {
        &self.potential
    }

    pub fn extensive(&self) -> &[String] {
        &self.extensive
    }

    pub fn intensive(&self) -> &[String] {
        &self.intensive
    }

    pub fn time_extended(&self) -> bool {
        self.time_extended
    }

    /// Name of the time coordinate when the chart is extended by time.
    pub fn time_name(&self) -> Option<&str> {
        self.time_extended.then(|| self.extensive.last().map(String::as_str)).flatten()
    }

    /// All coordinate names in `(s, q.., p..)` order.
    pub fn coords(&self) -> Vec<String> {
        std::iter::once(self.potential.clone())
            .chain(self.extensive.iter().cloned())
            .chain(self.intensive.iter().cloned())
            .collect()
    }
}

/// A point of the phase space, stored as `(s, q, p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    pub s: f64,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(s: f64, q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::Dimension { expected: q.len(), found: p.len() });
        }
        Ok(PhasePoint { s, q, p })
    }

    pub fn from_binding(chart: &ContactChart, b: &Binding) -> Result<Self> {
        let s = b.get(chart.potential()).ok_or_else(|| EvalError::Unbound(chart.potential().into()))?;
        Ok(PhasePoint { s, q: b.select(chart.extensive())?, p: b.select(chart.intensive())? })
    }

    pub fn to_binding(&self, chart: &ContactChart) -> Result<Binding> {
        self.check(chart)?;
        Ok(Binding::from_parts(&chart.coords(), &self.as_vec())?)
    }

    /// Coordinates flattened in `(s, q.., p..)` order.
    pub fn as_vec(&self) -> Vec<f64> {
        std::iter::once(self.s).chain(self.q.iter().copied()).chain(self.p.iter().copied()).collect()
    }

    fn check(&self, chart: &ContactChart) -> Result<()> {
        if self.q.len() != chart.n() || self.p.len() != chart.n() {
            return Err(Error::Dimension { expected: chart.n(), found: self.q.len() });
        }
        Ok(())
    }
}

/// `theta(v) = v_s - sum_i p_i v_{q^i}` with `v` in `(s, q.., p..)` components.
pub fn contact_eval(chart: &ContactChart, x: &PhasePoint, v: &[f64]) -> Result<f64> {
    x.check(chart)?;
    if v.len() != chart.dim() {
        return Err(Error::Dimension { expected: chart.dim(), found: v.len() });
    }
    let n = chart.n();
    Ok(v[0] - (0..n).map(|i| x.p[i] * v[1 + i]).sum::<f64>())
}

/// `d theta(u, v) = sum_i (u_{q^i} v_{p_i} - u_{p_i} v_{q^i})`; constant in the chart.
pub fn contact_differential(chart: &ContactChart, u: &[f64], v: &[f64]) -> Result<f64> {
    let d = chart.dim();
    for w in [u, v] {
        if w.len() != d {
            return Err(Error::Dimension { expected: d, found: w.len() });
        }
    }
    let n = chart.n();
    Ok((0..n).map(|i| u[1 + i] * v[1 + n + i] - u[1 + n + i] * v[1 + i]).sum())
}

/// Reeb field `zeta = d/ds` in coordinate components.
pub fn reeb_vector(chart: &ContactChart) -> Vec<f64> {
    let mut z = vec![0.0; chart.dim()];
    z[0] = 1.0;
    z
}

/// Time-`tau` flow of the Reeb field: shifts `s` only.
pub fn reeb_flow(x: &PhasePoint, tau: f64) -> PhasePoint {
    PhasePoint { s: x.s + tau, q: x.q.clone(), p: x.p.clone() }
}

/// Determinant of `d theta` on a basis of `ker theta` built by projecting the
/// coordinate directions along the Reeb field; nonzero certifies the contact
/// condition at `x`.
pub fn contact_nondegeneracy(chart: &ContactChart, x: &PhasePoint) -> Result<f64> {
    let d = chart.dim();
    let zeta = reeb_vector(chart);
    let mut basis = Vec::with_capacity(d - 1);
    for k in 1..d {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        let t = contact_eval(chart, x, &e)?;
        let v: Vec<f64> = e.iter().zip(&zeta).map(|(e, z)| e - t * z).collect();
        debug_assert!(contact_eval(chart, x, &v)?.abs() < 1e-12);
        basis.push(v);
    }
    let m: Vec<Vec<f64>> = basis
        .iter()
        .map(|u| basis.iter().map(|v| contact_differential(chart, u, v)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(determinant(&m))
}

/// A 1-form `sum_i a_i dx^i` with one coefficient field per coordinate.
#[derive(Debug, Clone)]
pub struct OneForm {
    coords: Vec<String>,
    coeffs: Vec<ScalarField>,
}

impl OneForm {
    /// Coefficients are rebound to `coords`, so they may be built over any
    /// subset of those names.
    pub fn new(coords: Vec<String>, coeffs: Vec<ScalarField>) -> Result<Self> {
        if coeffs.len() != coords.len() {
            return Err(Error::Dimension { expected: coords.len(), found: coeffs.len() });
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| if c.coords() == coords.as_slice() { Ok(c) } else { c.rebind(&coords) })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(OneForm { coords, coeffs })
    }

    pub fn parse(coords: &[&str], coeffs: &[&str]) -> Result<Self> {
        let coords: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let fields = coeffs.iter().map(|t| ScalarField::parse(t, &coords)).collect::<Result<Vec<_>>>()?;
        OneForm::new(coords, fields)
    }

    /// `dU` for a potential over (a subset of) `coords`.
    pub fn exact(potential: &ScalarField, coords: &[String]) -> Result<Self> {
        let u = potential.rebind(coords)?;
        let coeffs = coords.iter().map(|c| u.partial(c)).collect::<std::result::Result<Vec<_>, _>>()?;
        OneForm::new(coords.to_vec(), coeffs)
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn coeffs(&self) -> &[ScalarField] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn values_from(&self, x: &Binding) -> Result<Vec<f64>> {
        Ok(x.select(&self.coords)?)
    }

    /// Coefficient values at a point given in the form's coordinate order.
    pub fn eval_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.coeffs.iter().map(|c| c.value(x)).collect::<std::result::Result<Vec<_>, _>>()?)
    }

    /// Pairing `omega(v)` at `x`.
    pub fn pair(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        Ok(self.eval_at(x)?.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    /// Curl matrix `C_ij = d a_i / d x^j - d a_j / d x^i` at `x`.
    pub fn d_residual_at(&self, x: &[f64]) -> Result<SkewMatrix> {
        let n = self.dim();
        let jac: Vec<Vec<f64>> =
            self.coeffs.iter().map(|c| c.gradient(x).map(|d| d.g)).collect::<std::result::Result<_, _>>()?;
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = jac[i][j] - jac[j][i];
                rows[i][j] = c;
                rows[j][i] = -c;
            }
        }
        Ok(SkewMatrix { labels: self.coords.clone(), rows })
    }
}

/// Antisymmetric matrix with labelled axes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkewMatrix {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SkewMatrix {
    /// Largest absolute entry and the (row, column) labels where it sits.
    pub fn max_abs(&self) -> (f64, Option<(String, String)>) {
        let mut best = (0.0, None);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate().skip(i + 1) {
                if v.abs() > best.0 || (best.1.is_none() && v.is_nan()) {
                    best = (v.abs(), Some((self.labels[i].clone(), self.labels[j].clone())));
                }
            }
        }
        best
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.rows[i][j])
    }
}

/// Curl of `omega` at a bound point; `omega` is closed at `x` iff it vanishes.
pub fn d_residual(omega: &OneForm, x: &Binding) -> Result<SkewMatrix> {
    omega.d_residual_at(&omega.values_from(x)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosenessReport {
    pub closed: bool,
    pub max_residual: f64,
    /// Coordinate pair of the worst curl entry.
    pub worst_pair: Option<(String, String)>,
    /// Index of the sample where the worst entry occurred.
    pub worst_sample: usize,
    pub samples: usize,
    pub tol: f64,
}

/// Closed iff the largest curl entry over the sample is at most `tol`.
pub fn is_closed(omega: &OneForm, sample: &[Binding], tol: f64) -> Result<ClosenessReport> {
    let points = sample.iter().map(|b| omega.values_from(b)).collect::<Result<Vec<_>>>()?;
    is_closed_at(omega, &points, tol)
}

/// As [`is_closed`], with points given in the form's coordinate order.
pub fn is_closed_at(omega: &OneForm, points: &[Vec<f64>], tol: f64) -> Result<ClosenessReport> {
    if points.is_empty() {
        return Err(Error::Invalid("closeness needs a nonempty sample".into()));
    }
    let mut report = ClosenessReport {
        closed: true,
        max_residual: 0.0,
        worst_pair: None,
        worst_sample: 0,
        samples: points.len(),
        tol,
    };
    for (k, x) in points.iter().enumerate() {
        let (m, pair) = omega.d_residual_at(x)?.max_abs();
        if k == 0 || m > report.max_residual || m.is_nan() {
            report.max_residual = m;
            report.worst_pair = pair;
            report.worst_sample = k;
        }
    }
    report.closed = report.max_residual <= tol; // false on NaN
    Ok(report)
}

/// Low-discrepancy sample bindings over a box in the form's coordinates.
pub fn sample_points(bounds: &SampleBox, count: usize, seed: u64) -> Vec<Vec<f64>> {
    bounds.halton(count, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reconstruction {
    /// Line integral along the staircase visiting axes in coordinate order.
    pub value: f64,
    /// `|value - value'|` where `value'` visits the axes in reverse order.
    pub path_residual: f64,
}

fn staircase(omega: &OneForm, base: &[f64], target: &[f64], order: &[usize], rule: &GaussLegendre) -> Result<f64> {
    let mut x = base.to_vec();
    let mut total = 0.0;
    for &k in order {
        let (a, b) = (x[k], target[k]);
        if a != b {
            let coeff = &omega.coeffs[k];
            let mut probe = x.clone();
            total += rule.integrate(a, b, |t| {
                probe[k] = t;
                coeff.value(&probe)
            })?;
        }
        x[k] = b;
    }
    Ok(total)
}

/// Potential at `target` relative to `base` by integrating `omega` along the
/// axis-ordered staircase; path dependence is reported, never assumed away.
pub fn reconstruct_potential(omega: &OneForm, base: &Binding, target: &Binding) -> Result<Reconstruction> {
    let b = omega.values_from(base)?;
    let t = omega.values_from(target)?;
    let rule = GaussLegendre::new(RECONSTRUCTION_NODES);
    let forward: Vec<usize> = (0..omega.dim()).collect();
    let backward: Vec<usize> = forward.iter().rev().copied().collect();
    let value = staircase(omega, &b, &t, &forward, &rule)?;
    let other = staircase(omega, &b, &t, &backward, &rule)?;
    Ok(Reconstruction { value, path_residual: (value - other).abs() })
}
