//! Run configuration: the `[model]` / `[task]` / `[output]` sections of the
//! config file, command-line overrides, and validation.
//!
//! Unknown sections or keys are rejected so a typo cannot silently fall back
//! to a default.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use pairkit::models::{Coupling, ModelClass, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Seniority,
    Ed,
    BcsBulk,
    BcsFinite,
    Sweep,
    Extrapolate,
    Verify,
}

impl TaskKind {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "seniority" => TaskKind::Seniority,
            "ed" => TaskKind::Ed,
            "bcs-bulk" => TaskKind::BcsBulk,
            "bcs-finite" => TaskKind::BcsFinite,
            "sweep" => TaskKind::Sweep,
            "extrapolate" => TaskKind::Extrapolate,
            "verify" => TaskKind::Verify,
            other => return Err(ConfigError::new(format!("unknown task kind `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepSolver {
    Bcs,
    Ed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Omega,
    N,
}

/// Seniority-task model family (the analytic formulas).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeniorityFamily {
    Identical,
    Isovector,
    Su4,
}

#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub class: ModelClass,
    pub omega: usize,
    /// Particle number; sweeps at quarter filling leave it unset.
    pub n: Option<usize>,
    pub g_bulk: Option<f64>,
    pub g_raw: Option<f64>,
    pub levels: Option<Vec<f64>>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            class: ModelClass::Su4Rg,
            omega: 4,
            n: None,
            g_bulk: None,
            g_raw: None,
            levels: None,
        }
    }
}

impl ModelConfig {
    pub fn coupling(&self) -> Result<Coupling, ConfigError> {
        match (self.g_bulk, self.g_raw) {
            (Some(g), None) => Ok(Coupling::Bulk(g)),
            (None, Some(g)) => Ok(Coupling::Raw(g)),
            (Some(_), Some(_)) => Err(ConfigError::new("give exactly one of model.g and model.G")),
            (None, None) => Err(ConfigError::new(
                "model coupling missing: set model.g or model.G",
            )),
        }
    }

    /// Particle number with the quarter-filling default n = omega.
    pub fn n_or_quarter(&self) -> usize {
        self.n.unwrap_or(self.omega)
    }

    pub fn to_spec(&self, omega: usize, n: usize) -> Result<ModelSpec, ConfigError> {
        let mut spec = ModelSpec::new(self.class, omega, n, self.coupling()?);
        if let Some(levels) = &self.levels {
            spec.level_energies = levels.clone();
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone)]
pub struct TaskConfig {
    pub kind: TaskKind,
    pub k: usize,
    pub tol: f64,
    pub v: usize,
    pub t: f64,
    pub lambda2: u32,
    pub family: SeniorityFamily,
    pub filling: f64,
    pub eps_q: Option<f64>,
    pub solver: SweepSolver,
    pub variable: SweepVariable,
    pub values: Vec<usize>,
    pub degree: usize,
    pub observable: String,
    pub input: Option<String>,
    pub dim_cap: usize,
}

impl Default for TaskConfig {
    fn default() -> Self {
        TaskConfig {
            kind: TaskKind::Verify,
            k: 1,
            tol: 1e-10,
            v: 0,
            t: 0.0,
            lambda2: 0,
            family: SeniorityFamily::Su4,
            filling: 1.0,
            eps_q: None,
            solver: SweepSolver::Bcs,
            variable: SweepVariable::Omega,
            values: Vec::new(),
            degree: 3,
            observable: "e_per_n".into(),
            input: None,
            dim_cap: pairkit::DEFAULT_DIM_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OutputConfig {
    pub format: OutputFormat,
    /// Output path; "-" writes to stdout.
    pub path: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            format: OutputFormat::Json,
            path: "-".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub task: TaskConfig,
    pub output: OutputConfig,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelConfig::default(),
            task: TaskConfig::default(),
            output: OutputConfig::default(),
            threads: default_threads(),
        }
    }
}

/// PAIRKIT_THREADS, else the available parallelism; the --threads flag
/// overrides both.
pub fn default_threads() -> usize {
    if let Ok(v) = std::env::var("PAIRKIT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> Self {
        ConfigError(msg.into())
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn parse_model_class(s: &str) -> Result<ModelClass, ConfigError> {
    Ok(match s {
        "identical" => ModelClass::Identical,
        "isovector" => ModelClass::Isovector,
        "su4-seniority" => ModelClass::Su4Seniority,
        "su4-rg" => ModelClass::Su4Rg,
        "spin32-rg" => ModelClass::Spin32Rg,
        other => return Err(ConfigError::new(format!("unknown model class `{other}`"))),
    })
}

pub fn parse_family(s: &str) -> Result<SeniorityFamily, ConfigError> {
    Ok(match s {
        "identical" => SeniorityFamily::Identical,
        "isovector" => SeniorityFamily::Isovector,
        "su4" => SeniorityFamily::Su4,
        other => {
            return Err(ConfigError::new(format!(
                "unknown seniority model `{other}` (identical | isovector | su4)"
            )))
        }
    })
}

fn parse_usize(key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse().map_err(|_| {
        ConfigError::new(format!(
            "{key}: expected a non-negative integer, got `{value}`"
        ))
    })
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::new(format!("{key}: expected a number, got `{value}`")))
}

fn parse_usize_list(key: &str, value: &str) -> Result<Vec<usize>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_usize(key, s))
        .collect()
}

fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(key, s))
        .collect()
}

impl RunConfig {
    /// Apply one `section.key = value` assignment.
    pub fn set(&mut self, section: &str, key: &str, value: &str) -> Result<(), ConfigError> {
        let full = format!("{section}.{key}");
        match (section, key) {
            ("model", "class") => self.model.class = parse_model_class(value)?,
            ("model", "omega") => self.model.omega = parse_usize(&full, value)?,
            ("model", "n") => self.model.n = Some(parse_usize(&full, value)?),
            ("model", "g") => self.model.g_bulk = Some(parse_f64(&full, value)?),
            ("model", "G") => self.model.g_raw = Some(parse_f64(&full, value)?),
            ("model", "levels") => self.model.levels = Some(parse_f64_list(&full, value)?),
            ("task", "kind") => self.task.kind = TaskKind::parse(value)?,
            ("task", "k") => self.task.k = parse_usize(&full, value)?,
            ("task", "tol") => self.task.tol = parse_f64(&full, value)?,
            ("task", "v") => self.task.v = parse_usize(&full, value)?,
            ("task", "t") => self.task.t = parse_f64(&full, value)?,
            ("task", "lambda2") => self.task.lambda2 = parse_usize(&full, value)? as u32,
            ("task", "model") => self.task.family = parse_family(value)?,
            ("task", "filling") => self.task.filling = parse_f64(&full, value)?,
            ("task", "eps-q") => self.task.eps_q = Some(parse_f64(&full, value)?),
            ("task", "solver") => {
                self.task.solver = match value {
                    "bcs" => SweepSolver::Bcs,
                    "ed" => SweepSolver::Ed,
                    other => {
                        return Err(ConfigError::new(format!(
                            "unknown sweep solver `{other}` (bcs | ed)"
                        )))
                    }
                }
            }
            ("task", "variable") => {
                self.task.variable = match value {
                    "omega" => SweepVariable::Omega,
                    "n" => SweepVariable::N,
                    other => {
                        return Err(ConfigError::new(format!(
                            "unknown sweep variable `{other}` (omega | n)"
                        )))
                    }
                }
            }
            ("task", "values") => self.task.values = parse_usize_list(&full, value)?,
            ("task", "degree") => self.task.degree = parse_usize(&full, value)?,
            ("task", "observable") => self.task.observable = value.to_string(),
            ("task", "input") => self.task.input = Some(value.to_string()),
            ("task", "dim-cap") => self.task.dim_cap = parse_usize(&full, value)?,
            ("output", "format") => {
                self.output.format = match value {
                    "json" => OutputFormat::Json,
                    "csv" => OutputFormat::Csv,
                    other => {
                        return Err(ConfigError::new(format!(
                            "unknown output format `{other}` (json | csv)"
                        )))
                    }
                }
            }
            ("output", "path") => self.output.path = value.to_string(),
            _ => return Err(ConfigError::new(format!("unknown config key `{full}`"))),
        }
        Ok(())
    }

    /// Parse a sectioned key-value config file.
    pub fn from_file(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str_contents(&text)
    }

    pub fn from_str_contents(text: &str) -> Result<RunConfig, ConfigError> {
        let mut config = RunConfig::default();
        let mut section = String::new();
        let mut seen: BTreeMap<String, ()> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim().to_string();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                if !matches!(name, "model" | "task" | "output") {
                    return Err(ConfigError::new(format!(
                        "line {}: unknown section [{name}]",
                        lineno + 1
                    )));
                }
                section = name.to_string();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::new(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            if section.is_empty() {
                return Err(ConfigError::new(format!(
                    "line {}: key outside of any [section]",
                    lineno + 1
                )));
            }
            let key = key.trim();
            let value = value.trim();
            let full = format!("{section}.{key}");
            if seen.insert(full.clone(), ()).is_some() {
                return Err(ConfigError::new(format!(
                    "line {}: duplicate key `{full}`",
                    lineno + 1
                )));
            }
            config.set(&section, key, value)?;
        }
        Ok(config)
    }

    /// Validate cross-field consistency for the selected task.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let t = &self.task;
        match t.kind {
            TaskKind::Seniority => {
                self.model.coupling()?;
                if self.model.n.is_none() {
                    return Err(ConfigError::new("seniority task requires model.n"));
                }
            }
            TaskKind::Ed => {
                self.model.coupling()?;
                if t.k == 0 {
                    return Err(ConfigError::new("ed task requires task.k >= 1"));
                }
                if !t.tol.is_finite() || t.tol <= 0.0 {
                    return Err(ConfigError::new("task.tol must be positive"));
                }
            }
            TaskKind::BcsBulk => {
                let g = self
                    .model
                    .g_bulk
                    .ok_or_else(|| ConfigError::new("bcs-bulk requires model.g (bulk-scaled)"))?;
                if !g.is_finite() || g <= 0.0 {
                    return Err(ConfigError::new("model.g must be positive"));
                }
                if !t.filling.is_finite() || t.filling <= 0.0 || t.filling > 2.0 {
                    return Err(ConfigError::new("task.filling must lie in (0, 2]"));
                }
                self.json_only("bcs-bulk")?;
            }
            TaskKind::BcsFinite => {
                self.model.coupling()?;
                if self.model.omega == 0 {
                    return Err(ConfigError::new("bcs-finite requires model.omega >= 1"));
                }
                self.json_only("bcs-finite")?;
            }
            TaskKind::Sweep => {
                self.model.coupling()?;
                if t.values.is_empty() {
                    return Err(ConfigError::new("sweep requires task.values"));
                }
                if t.values.contains(&0) {
                    return Err(ConfigError::new("sweep values must be at least 1"));
                }
                if t.variable == SweepVariable::N && self.model.omega == 0 {
                    return Err(ConfigError::new("sweep over n requires model.omega"));
                }
            }
            TaskKind::Extrapolate => {
                if t.input.is_none() {
                    return Err(ConfigError::new(
                        "extrapolate requires task.input (a CSV path)",
                    ));
                }
                if !(1..=4).contains(&t.degree) {
                    return Err(ConfigError::new("task.degree must lie in 1..=4"));
                }
                if !matches!(
                    t.observable.as_str(),
                    "e_per_n" | "e_q" | "delta_oe" | "delta_c"
                ) {
                    return Err(ConfigError::new(format!(
                        "unknown observable `{}` (e_per_n | e_q | delta_oe | delta_c)",
                        t.observable
                    )));
                }
                self.json_only("extrapolate")?;
            }
            TaskKind::Verify => {}
        }
        Ok(())
    }
}

impl RunConfig {
    /// Structured single-run tasks emit JSON; an explicit csv request is an
    /// error rather than a silent fallback.
    fn json_only(&self, task: &str) -> Result<(), ConfigError> {
        if self.output.format == OutputFormat::Csv {
            return Err(ConfigError::new(format!(
                "{task} emits a JSON object; csv output is not available"
            )));
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}
