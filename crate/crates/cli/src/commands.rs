use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use contact_thermo::expr::build::sub;
use contact_thermo::ferroelectric::{
    self, FerroelectricConstitutive, FerroelectricForcing, FerroelectricState, ForcingSpec,
};
use contact_thermo::geometry::{is_closed_at, ClosenessReport, ContactChart, OneForm, DEFAULT_CLOSED_TOL};
use contact_thermo::legendre::{ConstitutiveSurface, GibbsConnection};
use contact_thermo::numerics::sampling::SampleBox;
use contact_thermo::processes::{
    admissibility, entropy_action, godograph_det, spinodal_scan, thermo_metric, AdmissibilityOptions, ProcessCurve,
    ACTION_NODES, DEFAULT_ADMISSIBILITY_TOL,
};
use contact_thermo::tensor::IDENTITY;
use contact_thermo::thermoelastic::{self, ThermoelasticConstitutive, ThermoelasticForcing, ThermoelasticState};
use contact_thermo::{Error, ScalarField};

use crate::config::{check_len, exprs, section, vector, FormSource, ModelConfig, ModelKind, RunConfig};
use crate::output::{emit, json, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 2;
pub const EXIT_PARTIAL: u8 = 3;

/// Flags shared by the config-driven subcommands.
pub struct Options<'a> {
    pub out: Option<&'a Path>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

fn chart(cfg: &RunConfig) -> Result<ContactChart> {
    let c = section(&cfg.chart, "chart")?;
    let intensive = match &c.intensive {
        Some(v) => v.clone(),
        None => c.extensive.iter().map(|q| format!("p_{q}")).collect(),
    };
    ContactChart::with_names(c.potential.clone(), c.extensive.clone(), intensive, c.time_extended)
        .context("config: [chart]")
}

fn surface(cfg: &RunConfig) -> Result<ConstitutiveSurface> {
    let chart = chart(cfg)?;
    let s = section(&cfg.surface, "surface")?;
    let q = chart.extensive().to_vec();
    let u = ScalarField::parse(&s.potential, &q).context("config: surface.potential")?;
    let sigma = match (&s.sigma, &s.entropy) {
        (Some(_), Some(_)) => bail!("config: surface.sigma and surface.entropy are mutually exclusive"),
        (Some(sig), None) => ScalarField::parse(sig, &q).context("config: surface.sigma")?,
        (None, Some(ent)) => {
            let e = ScalarField::parse(ent, &q).context("config: surface.entropy")?;
            ScalarField::new(sub(e.expr().clone(), u.expr().clone()), &q)?
        }
        (None, None) => ScalarField::constant(0.0, &q),
    };
    Ok(ConstitutiveSurface::new(chart, &u, &sigma)?)
}

fn form(cfg: &RunConfig) -> Result<OneForm> {
    let f = section(&cfg.form, "form")?;
    match f.source {
        FormSource::Coefficients => {
            let coords = f.coords.as_ref().context("config: form.coords is required")?;
            let coeffs = f.coefficients.as_ref().context("config: form.coefficients is required")?;
            check_len(coeffs, coords.len(), "form.coefficients (one per form.coords entry)")?;
            let fields = coeffs
                .iter()
                .enumerate()
                .map(|(i, t)| ScalarField::parse(t, coords).with_context(|| format!("config: form.coefficients[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(OneForm::new(coords.clone(), fields)?)
        }
        FormSource::Potential => {
            let coords = f.coords.as_ref().context("config: form.coords is required")?;
            let text = f.potential.as_ref().context("config: form.potential is required")?;
            let u = ScalarField::parse(text, coords).context("config: form.potential")?;
            Ok(OneForm::exact(&u, coords)?)
        }
        FormSource::Model => {
            let m = section(&cfg.model, "model")?;
            Ok(match m.kind {
                ModelKind::Thermoelastic => thermo_constitutive(m)?.entropy_form()?,
                ModelKind::Ferroelectric => ferro_constitutive(m)?.entropy_form()?,
            })
        }
    }
}

#[derive(Serialize)]
struct ClosenessOutput<'a> {
    coords: &'a [String],
    seed: u64,
    #[serde(flatten)]
    report: ClosenessReport,
}

pub fn check_closed(cfg: &RunConfig, opts: &Options) -> Result<u8> {
    let omega = form(cfg)?;
    let s = section(&cfg.sampling, "sampling")?;
    check_len(&s.lo, omega.dim(), "sampling.lo")?;
    check_len(&s.hi, omega.dim(), "sampling.hi")?;
    if s.count == 0 {
        bail!("config: sampling.count must be positive");
    }
    let seed = opts.seed.unwrap_or(s.seed);
    let points = SampleBox::new(s.lo.clone(), s.hi.clone()).halton(s.count, seed);
    let report = is_closed_at(&omega, &points, opts.tol.unwrap_or(DEFAULT_CLOSED_TOL))?;
    let pair = report.worst_pair.as_ref().map(|(a, b)| format!("({a}, {b})")).unwrap_or_else(|| "none".into());
    eprintln!(
        "{}: max residual {:e} at pair {pair}, sample {}",
        if report.closed { "closed" } else { "not closed" },
        report.max_residual,
        report.worst_sample
    );
    let code = if report.closed { EXIT_OK } else { EXIT_NEGATIVE };
    emit(opts.out, &json(&ClosenessOutput { coords: omega.coords(), seed, report })?)?;
    Ok(code)
}

fn thermo_constitutive(m: &ModelConfig) -> Result<ThermoelasticConstitutive> {
    ThermoelasticConstitutive::parse(&m.potential, m.rho, m.k).context("config: model")
}

fn ferro_constitutive(m: &ModelConfig) -> Result<FerroelectricConstitutive> {
    let c = FerroelectricConstitutive::parse(&m.potential, m.rho, m.k).context("config: model")?;
    match m.inertia {
        Some(i) => c.with_inertia(i).context("config: model.inertia"),
        None => Ok(c),
    }
}

fn steps(cfg: &RunConfig) -> Result<(f64, f64, usize)> {
    let i = section(&cfg.integration, "integration")?;
    if !(i.dt > 0.0) || !(i.t1 > i.t0) {
        bail!("config: integration needs dt > 0 and t1 > t0");
    }
    let n = ((i.t1 - i.t0) / i.dt).round();
    if (n * i.dt - (i.t1 - i.t0)).abs() > 1e-9 * (i.t1 - i.t0) {
        bail!("config: integration.dt must divide t1 - t0 into whole steps");
    }
    Ok((i.t0, i.dt, n as usize))
}

/// Writes a trace; a failed step yields the partial trace and exit code 3.
fn finish_trace(table: Table, failure: Option<Error>, opts: &Options) -> Result<u8> {
    emit(opts.out, &table.into_bytes()?)?;
    match failure {
        None => Ok(EXIT_OK),
        Some(e) => {
            eprintln!("integration stopped early: {e}");
            Ok(EXIT_PARTIAL)
        }
    }
}

pub fn simulate(cfg: &RunConfig, model: Option<&str>, opts: &Options) -> Result<u8> {
    let m = section(&cfg.model, "model")?;
    if let Some(name) = model {
        if name != m.kind.name() {
            bail!("requested model `{name}` but config declares model.kind = \"{}\"", m.kind.name());
        }
    }
    let (t0, dt, n) = steps(cfg)?;
    match m.kind {
        ModelKind::Thermoelastic => simulate_thermoelastic(m, t0, dt, n, opts),
        ModelKind::Ferroelectric => simulate_ferroelectric(m, t0, dt, n, opts),
    }
}

fn simulate_thermoelastic(m: &ModelConfig, t0: f64, dt: f64, n: usize, opts: &Options) -> Result<u8> {
    let init = &m.initial;
    let f = &m.forcing;
    if m.inertia.is_some() {
        bail!("config: model.inertia applies to the ferroelectric model only");
    }
    if init.pi.is_some() || init.gpi.is_some() || init.u.is_some() || init.gu.is_some() {
        bail!("config: model.initial has polarization entries, which the thermoelastic model does not use");
    }
    if f.e.is_some()
        || f.poynting.is_some()
        || f.div_local_field_tensor.is_some()
        || f.div_current.is_some()
        || f.source.is_some()
    {
        bail!("config: model.forcing has ferroelectric-only channels");
    }
    let c = thermo_constitutive(m)?;
    let coords = thermoelastic::base_coords();
    let sigma = m.sigma.as_ref().map(|s| ScalarField::parse(s, &coords).context("config: model.sigma")).transpose()?;
    let l = exprs(&f.l, 9, "model.forcing.L")?;
    let l: Vec<&str> = l.iter().map(String::as_str).collect();
    let forcing =
        ThermoelasticForcing::parse(&l, f.div_q.as_deref().unwrap_or("0")).context("config: model.forcing")?;
    let x0 = ThermoelasticState::new(
        init.eps.context("config: model.initial.eps is required")?,
        vector(&init.f, IDENTITY, "model.initial.F")?,
        vector(&init.h, [0.0; 3], "model.initial.H")?,
    )
    .context("config: model.initial")?;

    let mut header: Vec<String> = vec!["t".into()];
    header.extend(coords.iter().cloned());
    header.extend(["theta".into(), "U".into()]);
    if sigma.is_some() {
        header.extend(["sigma_prod".into(), "s".into()]);
    }
    let row = |t: f64, x: &ThermoelasticState| -> Result<Vec<f64>> {
        let v = x.to_vec();
        let u = c.potential().value(&v)?;
        let mut r = vec![t];
        r.extend_from_slice(&v);
        r.push(c.response(x)?.theta());
        r.push(u);
        if let Some(s) = &sigma {
            let sv = s.value(&v)?;
            r.extend([sv, u + sv]);
        }
        Ok(r)
    };
    let first = row(t0, &x0).context("initial state")?;
    let (traj, mut failure) = thermoelastic::integrate(&x0, &c, &forcing, t0, dt, n);
    let mut table = Table::new(&header)?;
    table.row(&first)?;
    for (t, x) in &traj[1..] {
        match row(*t, x) {
            Ok(r) => table.row(&r)?,
            Err(e) => {
                failure = Some(e.downcast::<Error>().unwrap_or_else(|e| Error::Invalid(e.to_string())));
                break;
            }
        }
    }
    finish_trace(table, failure, opts)
}

fn simulate_ferroelectric(m: &ModelConfig, t0: f64, dt: f64, n: usize, opts: &Options) -> Result<u8> {
    let init = &m.initial;
    let f = &m.forcing;
    let c = ferro_constitutive(m)?;
    let coords = ferroelectric::time_extended_coords();
    let sigma = m.sigma.as_ref().map(|s| ScalarField::parse(s, &coords).context("config: model.sigma")).transpose()?;
    let l = exprs(&f.l, 9, "model.forcing.L")?;
    let e = exprs(&f.e, 3, "model.forcing.E")?;
    let dl = exprs(&f.div_local_field_tensor, 3, "model.forcing.div_local_field_tensor")?;
    let dj = exprs(&f.div_current, 9, "model.forcing.div_current")?;
    let src = exprs(&f.source, 9, "model.forcing.source")?;
    fn arr<const N: usize>(v: &[String]) -> [&str; N] {
        std::array::from_fn(|i| v[i].as_str())
    }
    let spec = ForcingSpec {
        external_field: arr(&e),
        velocity_gradient: arr(&l),
        div_q: f.div_q.as_deref().unwrap_or("0"),
        poynting_term: f.poynting.as_deref().unwrap_or("0"),
        div_local_field_tensor: arr(&dl),
        div_current: arr(&dj),
        source: arr(&src),
    };
    let forcing = FerroelectricForcing::parse(&spec).context("config: model.forcing")?;
    let x0 = FerroelectricState::new(
        init.eps.context("config: model.initial.eps is required")?,
        vector(&init.f, IDENTITY, "model.initial.F")?,
        vector(&init.h, [0.0; 3], "model.initial.H")?,
        vector(&init.pi, [0.0; 3], "model.initial.pi")?,
        vector(&init.gpi, [0.0; 9], "model.initial.gpi")?,
        vector(&init.u, [0.0; 3], "model.initial.u")?,
        vector(&init.gu, [0.0; 9], "model.initial.gu")?,
    )
    .context("config: model.initial")?;

    let mut header: Vec<String> = vec!["t".into()];
    header.extend(ferroelectric::state_names());
    header.extend(["theta".into(), "U".into()]);
    if sigma.is_some() {
        header.extend(["sigma_prod".into(), "s".into()]);
    }
    let row = |t: f64, x: &FerroelectricState| -> Result<Vec<f64>> {
        let args = x.potential_args(t);
        let u = c.potential().value(&args)?;
        let mut r = vec![t];
        r.extend(x.to_vec());
        r.push(c.response(x, t)?.theta());
        r.push(u);
        if let Some(s) = &sigma {
            let sv = s.value(&args)?;
            r.extend([sv, u + sv]);
        }
        Ok(r)
    };
    let first = row(t0, &x0).context("initial state")?;
    let (traj, mut failure) = ferroelectric::fe_integrate(&x0, &c, &forcing, t0, dt, n);
    let mut table = Table::new(&header)?;
    table.row(&first)?;
    for (t, x) in &traj[1..] {
        match row(*t, x) {
            Ok(r) => table.row(&r)?,
            Err(e) => {
                failure = Some(e.downcast::<Error>().unwrap_or_else(|e| Error::Invalid(e.to_string())));
                break;
            }
        }
    }
    finish_trace(table, failure, opts)
}

/// Cartesian grid, first axis outermost.
fn grid_points(lo: &[f64], hi: &[f64], count: &[usize]) -> Vec<Vec<f64>> {
    let axis = |k: usize, i: usize| {
        if count[k] == 1 {
            lo[k]
        } else {
            lo[k] + (hi[k] - lo[k]) * i as f64 / (count[k] - 1) as f64
        }
    };
    let mut out = vec![Vec::new()];
    for k in 0..lo.len() {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..count[k]).map(move |i| {
                    let mut q = p.clone();
                    q.push(axis(k, i));
                    q
                })
            })
            .collect();
    }
    out
}

fn surface_table(s: &ConstitutiveSurface, points: &[Vec<f64>]) -> Result<Table> {
    let chart = s.chart();
    let mut header: Vec<String> = chart.extensive().to_vec();
    header.push(chart.potential().to_string());
    header.extend(chart.intensive().iter().cloned());
    header.extend(chart.extensive().iter().map(|q| format!("pullback_{q}")));
    let mut table = Table::new(&header)?;
    for q in points {
        let x = s.embed_at(q)?;
        let mut r = q.clone();
        r.push(x.s);
        r.extend(&x.p);
        r.extend(s.pullback_at(q)?);
        table.row(&r)?;
    }
    Ok(table)
}

pub fn surface_cmd(cfg: &RunConfig, opts: &Options) -> Result<u8> {
    let s = surface(cfg)?;
    let g = section(&cfg.grid, "grid")?;
    let n = s.chart().n();
    check_len(&g.lo, n, "grid.lo")?;
    check_len(&g.hi, n, "grid.hi")?;
    check_len(&g.count, n, "grid.count")?;
    if g.count.contains(&0) {
        bail!("config: grid.count entries must be positive");
    }
    let table = surface_table(&s, &grid_points(&g.lo, &g.hi, &g.count))?;
    emit(opts.out, &table.into_bytes()?)?;
    Ok(EXIT_OK)
}

fn read_curve(cfg: &RunConfig) -> Result<ProcessCurve> {
    let c = section(&cfg.curve, "curve")?;
    match (&c.file, &c.t) {
        (Some(_), Some(_)) => bail!("config: curve.file and curve.t are mutually exclusive"),
        (Some(file), None) => {
            let path = cfg.resolve(file);
            let mut reader =
                csv::Reader::from_path(&path).with_context(|| format!("reading curve {}", path.display()))?;
            let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
            if header.first().map(String::as_str) != Some("t") || header.len() < 2 {
                bail!("curve {}: header must be `t` followed by coordinate names", path.display());
            }
            let mut times = Vec::new();
            let mut points = Vec::new();
            for (line, rec) in reader.records().enumerate() {
                let rec = rec?;
                let vals = rec
                    .iter()
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .with_context(|| format!("curve {}: row {}", path.display(), line + 1))?;
                check_len(&vals, header.len(), &format!("curve row {}", line + 1))?;
                times.push(vals[0]);
                points.push(vals[1..].to_vec());
            }
            Ok(ProcessCurve::new(header[1..].to_vec(), times, points).context("curve")?)
        }
        (None, Some(t)) => {
            let names = c.names.as_ref().context("config: curve.names is required with curve.t")?;
            let points = c.points.as_ref().context("config: curve.points is required with curve.t")?;
            Ok(ProcessCurve::new(names.clone(), t.clone(), points.clone()).context("config: [curve]")?)
        }
        (None, None) => bail!("config: [curve] needs either file or t/names/points"),
    }
}

pub fn admissible(cfg: &RunConfig, rates_out: Option<&Path>, opts: &Options) -> Result<u8> {
    let s = surface(cfg)?;
    let curve = read_curve(cfg)?;
    let a = cfg.admissibility.as_ref();
    let options = AdmissibilityOptions {
        tol: opts.tol.or(a.and_then(|a| a.tol)).unwrap_or(DEFAULT_ADMISSIBILITY_TOL),
        include_endpoints: a.is_some_and(|a| a.include_endpoints),
    };
    let report = admissibility(&s, &curve, options)?;
    if let Some(path) = rates_out {
        let mut t = Table::new(&["t", "rate"])?;
        for (time, rate) in report.times.iter().zip(&report.rates) {
            t.row(&[*time, *rate])?;
        }
        emit(Some(path), &t.into_bytes()?)?;
    }
    emit(opts.out, &json(&report)?)?;
    Ok(if report.admissible { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct MetricOutput {
    at: Vec<f64>,
    metric: Vec<Vec<f64>>,
    det: f64,
    degenerate: bool,
}

pub fn metric(cfg: &RunConfig, opts: &Options) -> Result<u8> {
    let chart = chart(cfg)?;
    let s = section(&cfg.surface, "surface")?;
    let u = ScalarField::parse(&s.potential, chart.extensive()).context("config: surface.potential")?;
    let m = section(&cfg.metric, "metric")?;
    let out =
        m.at.iter()
            .enumerate()
            .map(|(i, q)| {
                check_len(q, chart.n(), &format!("metric.at[{i}]"))?;
                let g = godograph_det(&u, q)?;
                Ok(MetricOutput { at: q.clone(), metric: thermo_metric(&u, q)?, det: g.det, degenerate: g.degenerate })
            })
            .collect::<Result<Vec<_>>>()?;
    emit(opts.out, &json(&out)?)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ActionOutput {
    action: f64,
    samples: usize,
    nodes_per_interval: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    potential_difference: Option<f64>,
}

pub fn action(cfg: &RunConfig, opts: &Options) -> Result<u8> {
    let omega = form(cfg)?;
    let curve = read_curve(cfg)?;
    let value = entropy_action(&curve, &omega)?;
    let f = section(&cfg.form, "form")?;
    let potential_difference = if f.source == FormSource::Potential {
        let coords = omega.coords();
        let u = ScalarField::parse(f.potential.as_deref().unwrap_or_default(), coords)?;
        let idx: Vec<usize> = coords.iter().map(|c| curve.names().iter().position(|n| n == c).unwrap()).collect();
        let at = |p: &Vec<f64>| idx.iter().map(|&i| p[i]).collect::<Vec<_>>();
        let pts = curve.points();
        Some(u.value(&at(&pts[pts.len() - 1]))? - u.value(&at(&pts[0]))?)
    } else {
        None
    };
    let out =
        ActionOutput { action: value, samples: curve.len(), nodes_per_interval: ACTION_NODES, potential_difference };
    emit(opts.out, &json(&out)?)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CurvatureOutput {
    at: Vec<f64>,
    labels: Vec<String>,
    curvature: Vec<Vec<f64>>,
    max_abs: f64,
}

pub fn curvature(cfg: &RunConfig, opts: &Options) -> Result<u8> {
    let c = section(&cfg.connection, "connection")?;
    check_len(&c.p, c.base.len(), "connection.p (one per connection.base entry)")?;
    let mut coords = vec![c.fiber.clone()];
    coords.extend(c.base.iter().cloned());
    let p =
        c.p.iter()
            .enumerate()
            .map(|(i, t)| ScalarField::parse(t, &coords).with_context(|| format!("config: connection.p[{i}]")))
            .collect::<Result<Vec<_>>>()?;
    let conn = GibbsConnection::new(&c.fiber, &c.base, p)?;
    let out =
        c.at.iter()
            .enumerate()
            .map(|(i, x)| {
                check_len(x, coords.len(), &format!("connection.at[{i}]"))?;
                let m = conn.curvature_at(x)?;
                Ok(CurvatureOutput { at: x.clone(), max_abs: m.max_abs().0, labels: m.labels, curvature: m.rows })
            })
            .collect::<Result<Vec<_>>>()?;
    emit(opts.out, &json(&out)?)?;
    Ok(EXIT_OK)
}

/// Parameters of the van der Waals preset.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VdwParams {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub cv: f64,
}

/// `U(S, V) = (V - b)^(-R/c_V) exp(S/c_V) - a/V`, whose duals are the
/// temperature `T = U_S` and minus the pressure, `-p = U_V`, with
/// `p = R T / (V - b) - a / V^2`.
pub fn vdw_potential(p: &VdwParams) -> String {
    format!("(V - ({:?}))^(-({:?})/({:?})) * exp(S/({:?})) - ({:?})/V", p.b, p.r, p.cv, p.cv, p.a)
}

pub struct VdwGrid {
    pub s: (f64, f64, usize),
    pub v: (f64, f64, usize),
    /// Entropy of the isentrope scanned for spinodal points.
    pub isentrope: f64,
    pub scan: (f64, f64),
}

#[derive(Serialize)]
struct VdwSummary {
    params: VdwParams,
    potential: String,
    isentrope: f64,
    scan: (f64, f64),
    spinodal_volumes: Vec<f64>,
    bisection_tol: f64,
}

pub const SPINODAL_TOL: f64 = 1e-6;

pub fn vdw(params: &VdwParams, grid: &VdwGrid, report: Option<&Path>, opts: &Options) -> Result<u8> {
    if !(params.cv > 0.0) {
        bail!("c_V must be positive");
    }
    let chart = ContactChart::with_names("U", vec!["S".into(), "V".into()], vec!["T".into(), "neg_p".into()], false)?;
    let q = chart.extensive().to_vec();
    let text = vdw_potential(params);
    let u = ScalarField::parse(&text, &q)?;
    let s = ConstitutiveSurface::new(chart, &u, &ScalarField::constant(0.0, &q))?;
    let mut table = Table::new(&["S", "V", "U", "T", "p", "godograph_det"])?;
    for x in grid_points(&[grid.s.0, grid.v.0], &[grid.s.1, grid.v.1], &[grid.s.2, grid.v.2]) {
        let e = s.embed_at(&x)?;
        table.row(&[x[0], x[1], e.s, e.p[0], -e.p[1], godograph_det(&u, &x)?.det])?;
    }
    let roots = spinodal_scan(&u, &[grid.isentrope, grid.scan.0], 1, grid.scan.0, grid.scan.1, 2001, SPINODAL_TOL)?;
    let summary = VdwSummary {
        params: *params,
        potential: text,
        isentrope: grid.isentrope,
        scan: grid.scan,
        spinodal_volumes: roots,
        bisection_tol: SPINODAL_TOL,
    };
    let bytes = json(&summary)?;
    match report {
        Some(path) => emit(Some(path), &bytes)?,
        None => eprint!("{}", String::from_utf8_lossy(&bytes)),
    }
    emit(opts.out, &table.into_bytes()?)?;
    Ok(EXIT_OK)
}
