//! Batch front end: JSON model configs in, deterministic JSON or CSV
//! reports out.
//!
//! Config schema (all keys except `m`, `n`, `E` optional):
//!
//! ```json
//! {
//!   "m": 1, "n": 1,
//!   "E": [[[0, 0], [0.5, 0]], [[0.5, 0], [1, 0]]],
//!   "Z": [[[0.2, 0]]],
//!   "sigma": 0.3,
//!   "tolerances": {"hermiticity": 1e-10, "kernel": 1e-9, "action": 1e-8},
//!   "grid": {"T": 40, "h": 0.001},
//!   "fock": {"d": 5},
//!   "seed": 0,
//!   "phase": {"E": [0, 3.14159], "sigma": [0]},
//!   "scatter": {"E": [1, 3.14159], "eps": [0.1, 0.01]}
//! }
//! ```
//!
//! Complex entries are `[re, im]` pairs and `E` is row-major over
//! `(ℂ ⊕ K) ⊗ h`. `Z` and `sigma` select a gauge and are mutually
//! exclusive.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::fock::{self, FockTolerances};
use crate::linalg::{ComplexMatrix, C64, HERMITICITY_TOL, NULL_SPACE_TOL};
use crate::one_particle::{self as op, GridSpec, Mollifier};
use crate::random;
use crate::slh::{self, CouplingMatrix, Gauge, GaugeMatrix, ScalarGauge};

pub type Complex = [f64; 2];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid config: {0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("cannot write report: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_hermiticity")]
    pub hermiticity: f64,
    #[serde(default = "default_kernel")]
    pub kernel: f64,
    #[serde(default = "default_action")]
    pub action: f64,
}

fn default_hermiticity() -> f64 {
    HERMITICITY_TOL
}
fn default_kernel() -> f64 {
    NULL_SPACE_TOL
}
fn default_action() -> f64 {
    fock::ACTION_TOL
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: default_hermiticity(),
            kernel: default_kernel(),
            action: default_action(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "T", default = "default_half_width")]
    pub half_width: f64,
    #[serde(default = "default_step")]
    pub h: f64,
}

fn default_half_width() -> f64 {
    op::DEFAULT_HALF_WIDTH
}
fn default_step() -> f64 {
    op::DEFAULT_STEP
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            half_width: default_half_width(),
            h: default_step(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockConfig {
    #[serde(default = "default_cutoff")]
    pub d: usize,
}

fn default_cutoff() -> usize {
    5
}

impl Default for FockConfig {
    fn default() -> Self {
        Self { d: default_cutoff() }
    }
}

fn default_energies() -> Vec<f64> {
    vec![0.0, 0.1, 1.0, 2.0, PI]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseConfig {
    #[serde(rename = "E", default = "default_energies")]
    pub energies: Vec<f64>,
    /// Empty means "the config's `sigma`, or 0".
    #[serde(default)]
    pub sigma: Vec<f64>,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self {
            energies: default_energies(),
            sigma: Vec::new(),
        }
    }
}

fn default_widths() -> Vec<f64> {
    vec![0.1, 0.01]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterConfig {
    #[serde(rename = "E", default = "default_energies")]
    pub energies: Vec<f64>,
    #[serde(default = "default_widths")]
    pub eps: Vec<f64>,
}

impl Default for ScatterConfig {
    fn default() -> Self {
        Self {
            energies: default_energies(),
            eps: default_widths(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "E")]
    pub e: Vec<Vec<Complex>>,
    #[serde(rename = "Z", default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<Vec<Complex>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub fock: FockConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub phase: PhaseConfig,
    #[serde(default)]
    pub scatter: ScatterConfig,
}

/// A config that passed validation, with its numerical objects built.
#[derive(Clone, Debug)]
pub struct ValidatedConfig {
    pub raw: ModelConfig,
    pub coupling: CouplingMatrix,
    pub gauge: Option<Gauge>,
    pub grid: GridSpec,
}

impl ValidatedConfig {
    pub fn m(&self) -> usize {
        self.raw.m
    }

    pub fn n(&self) -> usize {
        self.raw.n
    }

    /// SHA-256 of the canonical JSON encoding of the config.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(&self.raw).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))
    }
}

fn matrix_from_pairs(rows: &[Vec<Complex>], dim: usize, what: &str) -> Result<ComplexMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(CliError::Validation(format!(
            "{what} must be {dim}×{dim}, got {} rows with lengths {:?}",
            rows.len(),
            rows.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    let parsed: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&parsed).map_err(|e| CliError::Validation(e.to_string()))
}

pub fn matrix_to_pairs(x: &ComplexMatrix) -> Vec<Vec<Complex>> {
    (0..x.rows())
        .map(|r| x.row(r).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn complex_value(z: C64) -> Value {
    json!([z.re, z.im])
}

fn matrix_value(x: &ComplexMatrix) -> Value {
    json!(matrix_to_pairs(x))
}

pub fn parse_config(text: &str) -> Result<ModelConfig> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn validate_config(raw: ModelConfig) -> Result<ValidatedConfig> {
    let (m, n) = (raw.m, raw.n);
    if m == 0 || n == 0 {
        return Err(CliError::Validation(format!(
            "m and n must be positive, got m = {m}, n = {n}"
        )));
    }
    let tol = &raw.tolerances;
    for (name, v) in [
        ("hermiticity", tol.hermiticity),
        ("kernel", tol.kernel),
        ("action", tol.action),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Validation(format!(
                "tolerance {name} must be positive, got {v}"
            )));
        }
    }
    let e = matrix_from_pairs(&raw.e, (n + 1) * m, "E")?;
    let coupling = slh::validate_coupling_with_tol(&e, m, n, tol.hermiticity)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let gauge = match (&raw.z, raw.sigma) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation(
                "Z and sigma are mutually exclusive".into(),
            ))
        }
        (Some(z), None) => {
            let z = matrix_from_pairs(z, n * m, "Z")?;
            Some(Gauge::Matrix(
                GaugeMatrix::with_tol(z, tol.hermiticity)
                    .map_err(|e| CliError::Validation(e.to_string()))?,
            ))
        }
        (None, Some(s)) if !s.is_finite() => {
            return Err(CliError::Validation(format!("sigma must be finite, got {s}")))
        }
        (None, Some(s)) => Some(Gauge::Scalar(ScalarGauge::new(s))),
        (None, None) => None,
    };

    if raw.fock.d < 3 {
        return Err(CliError::Validation(format!(
            "fock.d must be at least 3, got {}",
            raw.fock.d
        )));
    }
    let grid = GridSpec::new(raw.grid.half_width, raw.grid.h)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    if raw.scatter.eps.iter().any(|&e| !(e > 0.0)) {
        return Err(CliError::Validation(
            "scatter.eps entries must be positive".into(),
        ));
    }
    Ok(ValidatedConfig {
        raw,
        coupling,
        gauge,
        grid,
    })
}

pub fn load_config(path: &Path) -> Result<ValidatedConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    validate_config(parse_config(&text)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Slh,
    Phase,
    Defect,
    Scatter,
    Fock,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Slh => "slh",
            Command::Phase => "phase",
            Command::Defect => "defect",
            Command::Scatter => "scatter",
            Command::Fock => "fock",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the config seed.
    pub seed: Option<u64>,
    /// Number of random instances for property sweeps.
    pub sweep: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// A measured residual compared against a bound.
    pub fn bound(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value: json!(value),
            tolerance: Some(tolerance),
            pass: value <= tolerance,
        }
    }

    /// Output that carries no pass/fail criterion.
    pub fn info(name: impl Into<String>, value: Value) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: None,
            pass: true,
        }
    }

    pub fn with(name: impl Into<String>, value: Value, tolerance: Option<f64>, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            pass,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Command,
    pub config_hash: String,
    pub seed: u64,
    pub config: ModelConfig,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

pub fn run_command(cmd: Command, config: &ValidatedConfig, opts: &RunOptions) -> Result<Report> {
    let seed = opts.seed.unwrap_or(config.raw.seed);
    let mut raw = config.raw.clone();
    raw.seed = seed;
    let config = ValidatedConfig {
        raw,
        ..config.clone()
    };
    let checks = match cmd {
        Command::Slh => run_slh(&config, opts.sweep)?,
        Command::Phase => run_phase(&config)?,
        Command::Defect => run_defect(&config, opts.sweep)?,
        Command::Scatter => run_scatter(&config)?,
        Command::Fock => run_fock(&config, opts.sweep)?,
    };
    Ok(Report {
        command: cmd,
        config_hash: config.hash(),
        seed,
        config: config.raw,
        checks,
        wall_clock_seconds: None,
    })
}

const IDENTITY_TOL: f64 = 1e-10;
const CAYLEY_TOL: f64 = 1e-12;

fn slh_checks(
    prefix: &str,
    e: &CouplingMatrix,
    gauge: Option<&Gauge>,
    with_matrices: bool,
) -> Result<Vec<Check>> {
    let r = slh::slh_triple(e, gauge).map_err(numerical)?;
    let mut checks = Vec::new();
    if with_matrices {
        for (name, x) in [
            ("G", r.g.full()),
            ("V", r.v.full()),
            ("M", r.m.full()),
            ("F", r.f.full()),
            ("S", &r.s),
            ("L", &r.l),
            ("H", &r.h),
        ] {
            checks.push(Check::info(format!("{prefix}{name}"), matrix_value(x)));
        }
    }
    let res = r.residuals();
    let mut push = |name: &str, v: Option<f64>| {
        if let Some(v) = v {
            checks.push(Check::bound(format!("{prefix}{name}"), v, IDENTITY_TOL));
        }
    };
    push("ito_isometry", Some(res.ito_isometry));
    push("s_unitarity", Some(res.s_unitarity));
    push("h_hermiticity", Some(res.h_hermiticity));
    push("recomposition", Some(res.recomposition));
    push("derived_matrices", Some(res.derived));
    push("v_first_row", Some(res.v_first_row));
    push("g_equals_minus_i_e_f", res.g_minus_i_e_f);
    push("dressing_inverse", res.dressing_inverse);
    push("half_e_one_plus_m", res.half_e_one_plus_m);

    if gauge.is_none() && e.n() == 1 && e.m() == 1 {
        let cayley = slh::cayley_scattering(e).map_err(numerical)?;
        checks.push(Check::bound(
            format!("{prefix}s_matches_cayley"),
            cayley.max_diff(&r.s),
            CAYLEY_TOL,
        ));
    }
    if let Some(Gauge::Scalar(g)) = gauge {
        let closed = slh::closed_form_triple(e, g.sigma).map_err(numerical)?;
        let dev = closed
            .s
            .max_diff(&r.s)
            .max(closed.l.max_diff(&r.l))
            .max(closed.h.max_diff(&r.h));
        checks.push(Check::bound(
            format!("{prefix}kappa_closed_form"),
            dev,
            CAYLEY_TOL,
        ));
    }
    Ok(checks)
}

fn run_slh(config: &ValidatedConfig, sweep: Option<usize>) -> Result<Vec<Check>> {
    let mut checks = slh_checks("", &config.coupling, config.gauge.as_ref(), true)?;
    if config.gauge.is_none() {
        let reduction = slh::gauge_reduction_check(&config.coupling, &[-1.0, 0.0, 0.3, 1.0])
            .map_err(numerical)?;
        checks.push(Check::bound(
            "gauge_reduction",
            reduction.max(),
            CAYLEY_TOL,
        ));
    }
    if let Some(count) = sweep {
        let mut rng = random::seeded_rng(config.raw.seed);
        for k in 0..count {
            let e = random::random_coupling(&mut rng, config.m(), config.n());
            let sub = slh_checks(&format!("sweep[{k}]."), &e, config.gauge.as_ref(), false)?;
            let worst = sub
                .iter()
                .filter_map(|c| c.value.as_f64())
                .fold(0.0, f64::max);
            let pass = sub.iter().all(|c| c.pass);
            checks.push(Check::with(
                format!("sweep[{k}]"),
                json!(worst),
                Some(IDENTITY_TOL),
                pass,
            ));
        }
    }
    Ok(checks)
}

fn phase_sigmas(config: &ValidatedConfig) -> Vec<f64> {
    if !config.raw.phase.sigma.is_empty() {
        return config.raw.phase.sigma.clone();
    }
    vec![config.raw.sigma.unwrap_or(0.0)]
}

fn run_phase(config: &ValidatedConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &sigma in &phase_sigmas(config) {
        for &e in &config.raw.phase.energies {
            let p = op::boundary_phase(e, Some(sigma));
            let unit = (p.s.norm() - 1.0).abs().max((p.s_sigma.norm() - 1.0).abs());
            let arg = (p.s.arg() + 2.0 * (e / 2.0).atan()).abs();
            let trace = op::extension_trace(C64::new(1.0, 0.0), e, Some(sigma));
            let singular = op::extension_singular_part(trace, e, Some(sigma)).norm();
            let worst = unit.max(arg).max(singular);
            checks.push(Check::with(
                format!("phase[E={e},sigma={sigma}]"),
                json!({
                    "E": e,
                    "sigma": sigma,
                    "s": complex_value(p.s),
                    "s_sigma": complex_value(p.s_sigma),
                    "chebotarev": complex_value(p.s_chebotarev),
                    "contrast": (p.s - p.s_chebotarev).norm(),
                    "defect": worst,
                }),
                Some(CAYLEY_TOL),
                worst <= CAYLEY_TOL,
            ));
        }
    }
    Ok(checks)
}

const GRID_TOL: f64 = 1e-5;
const BOUNDARY_EXACT_TOL: f64 = 1e-14;

fn run_defect(config: &ValidatedConfig, sweep: Option<usize>) -> Result<Vec<Check>> {
    let spec = config.grid;
    let sigma = match &config.gauge {
        Some(Gauge::Scalar(g)) => Some(g.sigma),
        _ => None,
    };
    let mut rng = random::seeded_rng(config.raw.seed);
    let mut checks = Vec::new();

    let (plus, minus) = op::defect_vectors(spec).map_err(numerical)?;
    let jumps = [op::Functional::Jump.eval(&plus), op::Functional::Jump.eval(&minus)];
    let jump_dev = jumps
        .iter()
        .map(|j| (j - C64::new(0.0, -1.0)).norm())
        .fold(0.0, f64::max);
    checks.push(Check::with(
        "defect.jump_is_minus_i",
        json!(jump_dev),
        Some(0.0),
        jump_dev == 0.0,
    ));
    let norm_dev = (op::sobolev_norm(&plus) - 1.0)
        .abs()
        .max((op::sobolev_norm(&minus) - 1.0).abs());
    checks.push(Check::bound("defect.sobolev_norm", norm_dev, GRID_TOL));

    let mut reproducing: f64 = 0.0;
    let mut orthogonality: f64 = 0.0;
    let tests = sweep.unwrap_or(10);
    for k in 0..tests {
        let right = k % 2 == 0;
        let psi = random::random_gaussian(&mut rng, spec, right);
        let (probe, value) = if right {
            (plus.scale(C64::new(0.0, 1.0)), psi.at_plus())
        } else {
            (minus.scale(C64::new(0.0, -1.0)), psi.at_minus())
        };
        let got = op::sobolev_inner(&probe, &psi).map_err(numerical)?;
        reproducing = reproducing.max((got - value).norm());

        let psi0 = op::decompose_sobolev(&random::random_discontinuous(&mut rng, spec)).psi0;
        let scale = op::sobolev_norm(&psi0).max(f64::MIN_POSITIVE);
        for phi in [&plus, &minus] {
            let ip = op::sobolev_inner(phi, &psi0).map_err(numerical)?.norm();
            orthogonality = orthogonality.max(ip / scale);
        }
    }
    checks.push(Check::bound("defect.reproducing", reproducing, GRID_TOL));
    checks.push(Check::bound("defect.orthogonality", orthogonality, GRID_TOL));

    let mut lemma: f64 = 0.0;
    let mut boundary: f64 = 0.0;
    for _ in 0..tests {
        let phi = random::random_discontinuous(&mut rng, spec);
        let psi = random::random_discontinuous(&mut rng, spec);
        let (tp, ts) = (phi.trace(), psi.trace());
        let jump = op::jump_form(tp, ts);
        let scale = phi.max_abs() * psi.max_abs();
        for s in [None, sigma.map(ScalarGauge::new)] {
            let sym = op::symmetrized_jump_form(tp, ts, s);
            lemma = lemma.max((sym - jump).norm() / scale);
        }
        let form = op::boundary_form(&phi, &psi).map_err(numerical)?;
        let expected = C64::new(0.0, -1.0) * jump;
        boundary = boundary.max((form - expected).norm());
    }
    checks.push(Check::bound("defect.jump_decomposition", lemma, BOUNDARY_EXACT_TOL));
    checks.push(Check::bound("defect.boundary_form", boundary, GRID_TOL));

    // Refining h by two should shrink the symmetry defect by four.
    let coarse = spec;
    let fine = coarse.refined();
    let seed = config.raw.seed;
    let pair = |s: GridSpec| {
        let mut r = random::seeded_rng(seed ^ 0x5eed);
        (
            random::random_discontinuous(&mut r, s),
            random::random_discontinuous(&mut r, s),
        )
    };
    let (p1, q1) = pair(coarse);
    let (p2, q2) = pair(fine);
    let d1 = op::symmetry_defect(&p1, &q1, sigma).map_err(numerical)?.norm();
    let d2 = op::symmetry_defect(&p2, &q2, sigma).map_err(numerical)?.norm();
    let ratio = d1 / d2;
    checks.push(Check::with(
        "defect.symmetry_convergence_ratio",
        json!({"coarse": d1, "fine": d2, "ratio": ratio}),
        Some(0.5),
        (ratio - 4.0).abs() <= 0.5,
    ));
    Ok(checks)
}

const SCATTER_TOL: f64 = 1e-6;

fn run_scatter(config: &ValidatedConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &e in &config.raw.scatter.energies {
        for &eps in &config.raw.scatter.eps {
            let r = op::scatter_regularized(e, eps, Mollifier::Bump).map_err(numerical)?;
            checks.push(Check::with(
                format!("scatter[E={e},eps={eps}]"),
                json!({
                    "E": e,
                    "eps": eps,
                    "phase": complex_value(r.phase),
                    "chebotarev": complex_value(r.chebotarev),
                    "cayley": complex_value(r.cayley),
                    "phase_error": r.phase_error,
                    "contrast": r.contrast,
                }),
                Some(SCATTER_TOL),
                r.phase_error <= SCATTER_TOL,
            ));
        }
    }
    Ok(checks)
}

const SKEW_TOL: f64 = 1e-12;
const FOCK_VECTORS: usize = 10;

fn fock_record(name: String, report: &fock::FockReport, tol: &FockTolerances) -> Check {
    let pass = report.subspaces_agree(tol) && report.action_holds(tol) && report.k_sing_skew <= SKEW_TOL;
    Check::with(
        name,
        json!({
            "dim": report.dim,
            "kernel_dim_b": report.kernel_dim_b,
            "kernel_dim_c": report.kernel_dim_c,
            "max_angle": report.max_angle,
            "cross_residual": report.cross_residual,
            "action_residual": report.action_residual,
            "vectors": report.vectors,
            "k_sing_skew": report.k_sing_skew,
        }),
        Some(tol.angle),
        pass,
    )
}

fn run_fock(config: &ValidatedConfig, sweep: Option<usize>) -> Result<Vec<Check>> {
    let tol = FockTolerances {
        kernel: config.raw.tolerances.kernel,
        action: config.raw.tolerances.action,
        ..FockTolerances::default()
    };
    let ops = fock::build_mode_operators(
        config.m(),
        config.n(),
        config.raw.fock.d,
        config.gauge.as_ref(),
    )
    .map_err(numerical)?;
    let mut rng = random::seeded_rng(config.raw.seed);
    let mut checks = vec![Check::bound(
        "fock.commutators",
        fock::commutator_defect(&ops),
        1e-12,
    )];
    match sweep {
        None => {
            let report =
                fock::fock_check(&config.coupling, &ops, &tol, FOCK_VECTORS, &mut rng).map_err(numerical)?;
            checks.push(fock_record("fock.config".into(), &report, &tol));
        }
        Some(count) => {
            for k in 0..count {
                let e = random::random_coupling(&mut rng, config.m(), config.n());
                let report = fock::fock_check(&e, &ops, &tol, FOCK_VECTORS, &mut rng).map_err(numerical)?;
                checks.push(fock_record(format!("fock.sweep[{k}]"), &report, &tol));
            }
        }
    }
    Ok(checks)
}

/// Writes the report as pretty JSON or as CSV with the fixed header
/// `config_hash,command,name,value,tolerance,pass`.
pub fn write_report<W: Write>(report: &Report, format: Format, out: W) -> Result<()> {
    let io = |e: std::io::Error| CliError::Output(e.to_string());
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, report)
                .map_err(|e| CliError::Output(e.to_string()))?;
            writeln!(out).map_err(io)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| CliError::Output(e.to_string());
            w.write_record(["config_hash", "command", "name", "value", "tolerance", "pass"])
                .map_err(csv_err)?;
            for c in &report.checks {
                let value = match &c.value {
                    Value::String(s) => s.clone(),
                    v => v.to_string(),
                };
                let tol = c.tolerance.map(|t| format!("{t:e}")).unwrap_or_default();
                w.write_record([
                    report.config_hash.as_str(),
                    report.command.name(),
                    &c.name,
                    &value,
                    &tol,
                    if c.pass { "true" } else { "false" },
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io)
        }
    }
}

/// Writes to `path`, or stdout when `None`.
pub fn emit_report(report: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?;
            let mut buf = std::io::BufWriter::new(file);
            write_report(report, format, &mut buf)?;
            buf.flush().map_err(|e| CliError::Output(e.to_string()))
        }
        None => write_report(report, format, std::io::stdout().lock()),
    }
}

#[derive(Debug, Parser)]
#[command(name = "slh-ext", version, about = "Point-interaction SLH models: derive and verify")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// Model config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Report destination; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random instances for property sweeps.
    #[arg(long)]
    pub sweep: Option<usize>,
    /// Record wall-clock time in the report (breaks byte-identical reruns).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Itô, model, Galilean and dressing matrices plus the SLH triple.
    Slh(CommonArgs),
    /// Boundary phases of the symmetric and gauged extensions.
    Phase(CommonArgs),
    /// One-particle checks: defect vectors, reproducing kernel, symmetry.
    Defect(CommonArgs),
    /// Transmission through regularized potentials.
    Scatter(CommonArgs),
    /// Boundary subspaces and the singular action on truncated Fock space.
    Fock(CommonArgs),
}

impl CliCommand {
    pub fn split(&self) -> (Command, &CommonArgs) {
        match self {
            CliCommand::Slh(a) => (Command::Slh, a),
            CliCommand::Phase(a) => (Command::Phase, a),
            CliCommand::Defect(a) => (Command::Defect, a),
            CliCommand::Scatter(a) => (Command::Scatter, a),
            CliCommand::Fock(a) => (Command::Fock, a),
        }
    }
}

/// Runs a parsed command line and returns the process exit code: 0 when
/// every check passes, 1 when a check fails, 2 on configuration or
/// numerical errors.
pub fn execute(cli: &Cli) -> i32 {
    let (cmd, args) = cli.command.split();
    let started = Instant::now();
    let result = load_config(&args.config).and_then(|config| {
        let opts = RunOptions {
            seed: args.seed,
            sweep: args.sweep,
        };
        let mut report = run_command(cmd, &config, &opts)?;
        if args.timing {
            report.wall_clock_seconds = Some(started.elapsed().as_secs_f64());
        }
        emit_report(&report, args.format, args.out.as_deref())?;
        Ok(report)
    });
    match result {
        Ok(report) => match report.first_failure() {
            None => 0,
            Some(check) => {
                eprintln!("check failed: {}", check.name);
                1
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
