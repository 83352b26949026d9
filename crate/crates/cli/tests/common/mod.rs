#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn cthermo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cthermo")).args(args).output().expect("spawn cthermo")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Runs a config-driven subcommand against a fixture and returns
/// `(exit code, stdout bytes)`.
pub fn run_fixture(cmd: &[&str], config: &str) -> (i32, Vec<u8>) {
    let cfg = fixture(config);
    let mut args = cmd.to_vec();
    args.extend(["--config", cfg.to_str().unwrap()]);
    let o = cthermo(&args);
    (code(&o), o.stdout)
}

/// Parsed CSV: header plus numeric rows.
pub fn parse_csv(bytes: &[u8]) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::str::from_utf8(bytes).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

pub fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

pub fn json(bytes: &[u8]) -> serde_json::Value {
    serde_json::from_slice(bytes).unwrap()
}

/// Subcommand and fixture of every golden test.
pub const GOLDEN_RUNS: &[(&str, &str, &str)] = &[
    ("check-closed", "thermo_closed.toml", "thermo_closed.json"),
    ("check-closed", "not_closed.toml", "not_closed.json"),
    ("simulate", "thermo_fixed_point.toml", "thermo_fixed_point.csv"),
    ("simulate", "linear_f.toml", "linear_f.csv"),
    ("simulate", "fe_harmonic.toml", "fe_harmonic.csv"),
    ("simulate", "orientation_loss.toml", "orientation_loss.csv"),
    ("surface", "surface_shift.toml", "surface_shift.csv"),
    ("surface", "surface_legendre.toml", "surface_legendre.csv"),
    ("admissible", "admissible_up.toml", "admissible_up.json"),
    ("admissible", "admissible_down.toml", "admissible_down.json"),
    ("admissible", "reversible.toml", "reversible.json"),
    ("metric", "metric.toml", "metric.json"),
    ("action", "action_square.toml", "action_square.json"),
    ("action", "action_exact.toml", "action_exact.json"),
    ("curvature", "curvature.toml", "curvature.json"),
];

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Sum of `terms` monomials of total degree 1..=`degree` in `vars` with
/// coefficients in `[-scale, scale]`, as expression text.
pub fn random_polynomial(
    r: &mut rand_chacha::ChaCha8Rng,
    vars: &[String],
    terms: usize,
    degree: usize,
    scale: f64,
) -> String {
    use rand::Rng;
    (0..terms)
        .map(|_| {
            let c: f64 = r.gen_range(-scale..scale);
            let d = r.gen_range(1..=degree);
            let factors: Vec<&str> = (0..d).map(|_| vars[r.gen_range(0..vars.len())].as_str()).collect();
            format!("({c:e})*{}", factors.join("*"))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Five-point central difference of `f` along coordinate `k`.
pub fn fd5(f: &dyn Fn(&[f64]) -> f64, x: &[f64], k: usize, h: f64) -> f64 {
    let at = |d: f64| {
        let mut y = x.to_vec();
        y[k] += d;
        f(&y)
    };
    (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h)
}
