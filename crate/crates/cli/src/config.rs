//! Run configuration. Every table rejects unknown keys, and the semantic
//! checks below name the offending key path.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub chart: Option<ChartConfig>,
    pub surface: Option<SurfaceConfig>,
    pub form: Option<FormConfig>,
    pub sampling: Option<SamplingConfig>,
    pub model: Option<ModelConfig>,
    pub integration: Option<IntegrationConfig>,
    pub grid: Option<GridConfig>,
    pub curve: Option<CurveConfig>,
    pub admissibility: Option<AdmissibilityConfig>,
    pub metric: Option<MetricConfig>,
    pub connection: Option<ConnectionConfig>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartConfig {
    #[serde(default = "default_potential_name")]
    pub potential: String,
    pub extensive: Vec<String>,
    /// Defaults to `p_<name>` for each extensive name.
    pub intensive: Option<Vec<String>>,
    #[serde(default)]
    pub time_extended: bool,
}

fn default_potential_name() -> String {
    "s".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub potential: String,
    /// Entropy production potential; mutually exclusive with `entropy`.
    pub sigma: Option<String>,
    /// Entropy `S = U + sigma`.
    pub entropy: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormSource {
    Coefficients,
    Potential,
    Model,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormConfig {
    #[serde(default = "default_form_source")]
    pub source: FormSource,
    pub coords: Option<Vec<String>>,
    pub coefficients: Option<Vec<String>>,
    pub potential: Option<String>,
}

fn default_form_source() -> FormSource {
    FormSource::Coefficients
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    #[serde(default = "default_samples")]
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> usize {
    contact_thermo::geometry::DEFAULT_SAMPLES
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Thermoelastic,
    Ferroelectric,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Thermoelastic => "thermoelastic",
            ModelKind::Ferroelectric => "ferroelectric",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub potential: String,
    /// Entropy production potential over the model coordinates; adds the
    /// `sigma_prod` and `s` trace columns.
    pub sigma: Option<String>,
    pub rho: f64,
    pub k: f64,
    pub inertia: Option<f64>,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub forcing: ForcingConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub eps: Option<f64>,
    #[serde(rename = "F")]
    pub f: Option<Vec<f64>>,
    #[serde(rename = "H")]
    pub h: Option<Vec<f64>>,
    pub pi: Option<Vec<f64>>,
    pub gpi: Option<Vec<f64>>,
    pub u: Option<Vec<f64>>,
    pub gu: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingConfig {
    #[serde(rename = "L")]
    pub l: Option<Vec<String>>,
    pub div_q: Option<String>,
    #[serde(rename = "E")]
    pub e: Option<Vec<String>>,
    pub poynting: Option<String>,
    pub div_local_field_tensor: Option<Vec<String>>,
    pub div_current: Option<Vec<String>>,
    pub source: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationConfig {
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub count: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    /// CSV with a `t` column followed by coordinate columns.
    pub file: Option<PathBuf>,
    pub names: Option<Vec<String>>,
    pub t: Option<Vec<f64>>,
    pub points: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdmissibilityConfig {
    #[serde(default)]
    pub include_endpoints: bool,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    pub at: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionConfig {
    #[serde(default = "default_potential_name")]
    pub fiber: String,
    pub base: Vec<String>,
    pub p: Vec<String>,
    /// Points as `[s, q1, ..]`.
    pub at: Vec<Vec<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }
}

/// The named table, or an error naming it.
pub fn section<'a, T>(value: &'a Option<T>, name: &str) -> Result<&'a T> {
    value.as_ref().with_context(|| format!("config: missing table [{name}]"))
}

pub fn check_len<T>(v: &[T], expected: usize, path: &str) -> Result<()> {
    if v.len() != expected {
        bail!("config: {path} needs {expected} entries, found {}", v.len());
    }
    Ok(())
}

/// Fixed-size numeric vector with a default.
pub fn vector<const N: usize>(v: &Option<Vec<f64>>, default: [f64; N], path: &str) -> Result<[f64; N]> {
    match v {
        None => Ok(default),
        Some(v) => {
            check_len(v, N, path)?;
            Ok(v.as_slice().try_into().expect("length checked"))
        }
    }
}

/// Expression texts with a `"0"` default.
pub fn exprs(v: &Option<Vec<String>>, n: usize, path: &str) -> Result<Vec<String>> {
    match v {
        None => Ok(vec!["0".to_string(); n]),
        Some(v) => {
            check_len(v, n, path)?;
            Ok(v.clone())
        }
    }
}
