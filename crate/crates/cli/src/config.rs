//! Flat `key = value` job configuration.
//!
//! One assignment per line; `#` starts a comment. Keys and their defaults:
//!
//! | key | default |
//! |---|---|
//! | `molecule` | required, XYZ path (relative paths resolve against the config file) |
//! | `box_length` | required, bohr |
//! | `points_per_axis` | 32 |
//! | `softening` | grid spacing |
//! | `n_orbitals` | half the electron count |
//! | `solver` | `cg` (`steepest`, `cg`, `scf`) |
//! | `manifold` | `stiefel` (`grassmann` for `cg` only) |
//! | `guess` | `random` (`random`, `atomic`) |
//! | `seed` | 0 |
//! | `r`, `r_bar`, `tau`, `gamma`, `alpha_max` | 1e-4, 0.7, 0.5, 1.4, 10 |
//! | `alpha0` | 0.5 for `steepest`, 1.0 for `cg` |
//! | `beta_max`, `eta_powell`, `restart_cooldown`, `restart_on_reject` | 5, 0.3, 4, false |
//! | `update_tol`, `max_iterations` | 1e-4, 200 |
//! | `output_dir` | `out` |
//! | `dump_orbitals` | false |
//! | `wall_clock` | false (when false, `wall_ms` is written as 0 so reruns are byte-identical) |

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sobolev_hf::optim::{CgParams, LineSearchParams, Manifold, StopCriteria};
use sobolev_hf::{Error as CoreError, Grid};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },

    #[error("line {line}: key `{key}` is set twice")]
    DuplicateKey { key: String, line: usize },

    #[error("missing required key `{key}`")]
    MissingKey { key: &'static str },

    #[error("key `{key}`: expected {expected}, got `{value}`")]
    TypeMismatch {
        key: String,
        value: String,
        expected: &'static str,
    },

    #[error("key `{key}`: {reason}")]
    Constraint { key: String, reason: String },
}

impl ConfigError {
    /// The offending key, when there is one.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Syntax { .. } => None,
            ConfigError::UnknownKey { key, .. }
            | ConfigError::DuplicateKey { key, .. }
            | ConfigError::TypeMismatch { key, .. }
            | ConfigError::Constraint { key, .. } => Some(key),
            ConfigError::MissingKey { key } => Some(key),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Steepest,
    Cg,
    Scf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GuessKind {
    Random,
    Atomic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub molecule_path: PathBuf,
    pub box_length: f64,
    pub points_per_axis: usize,
    pub softening: Option<f64>,
    pub n_orbitals: Option<usize>,
    pub solver: SolverKind,
    pub manifold: Manifold,
    pub guess: GuessKind,
    pub seed: u64,
    pub line_search: LineSearchParams,
    pub cg: CgParams,
    pub stop: StopCriteria,
    pub output_dir: PathBuf,
    pub dump_orbitals: bool,
    pub wall_clock: bool,
}

const KEYS: &[&str] = &[
    "molecule",
    "box_length",
    "points_per_axis",
    "softening",
    "n_orbitals",
    "solver",
    "manifold",
    "guess",
    "seed",
    "r",
    "r_bar",
    "tau",
    "gamma",
    "alpha_max",
    "alpha0",
    "beta_max",
    "eta_powell",
    "restart_cooldown",
    "restart_on_reject",
    "update_tol",
    "max_iterations",
    "output_dir",
    "dump_orbitals",
    "wall_clock",
];

struct Entries(BTreeMap<&'static str, String>);

impl Entries {
    fn typed<T: FromStr>(
        &self,
        key: &'static str,
        expected: &'static str,
    ) -> Result<Option<T>, ConfigError> {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<T>().map_err(|_| ConfigError::TypeMismatch {
                    key: key.into(),
                    value: v.clone(),
                    expected,
                })
            })
            .transpose()
    }

    fn real(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        let v: Option<f64> = self.typed(key, "a real number")?;
        match v {
            Some(x) if !x.is_finite() => Err(ConfigError::TypeMismatch {
                key: key.into(),
                value: self.0[key].clone(),
                expected: "a finite real number",
            }),
            v => Ok(v),
        }
    }

    fn integer<T: FromStr>(&self, key: &'static str) -> Result<Option<T>, ConfigError> {
        self.typed(key, "a non-negative integer")
    }

    fn flag(&self, key: &'static str) -> Result<Option<bool>, ConfigError> {
        self.typed(key, "`true` or `false`")
    }

    fn choice<T: Copy>(
        &self,
        key: &'static str,
        options: &[(&str, T)],
        expected: &'static str,
    ) -> Result<Option<T>, ConfigError> {
        self.0
            .get(key)
            .map(|v| {
                options
                    .iter()
                    .find(|(name, _)| name == v)
                    .map(|(_, t)| *t)
                    .ok_or_else(|| ConfigError::TypeMismatch {
                        key: key.into(),
                        value: v.clone(),
                        expected,
                    })
            })
            .transpose()
    }
}

fn constraint(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Constraint {
        key: key.into(),
        reason: reason.into(),
    }
}

fn from_core(e: CoreError) -> ConfigError {
    match e {
        CoreError::InvalidParameter { name, reason } => constraint(name, reason),
        other => constraint("box_length", other.to_string()),
    }
}

fn tokenize(text: &str) -> Result<Entries, ConfigError> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or(ConfigError::Syntax { line })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax { line });
        }
        let known = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| ConfigError::UnknownKey {
                key: key.into(),
                line,
            })?;
        if entries.insert(*known, value.to_string()).is_some() {
            return Err(ConfigError::DuplicateKey {
                key: key.into(),
                line,
            });
        }
    }
    Ok(Entries(entries))
}

/// Parse and validate a configuration. Relative paths stay relative; see
/// [`RunConfig::resolve_paths`].
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let e = tokenize(text)?;
    let molecule_path = PathBuf::from(
        e.0.get("molecule")
            .ok_or(ConfigError::MissingKey { key: "molecule" })?,
    );
    let box_length = e
        .real("box_length")?
        .ok_or(ConfigError::MissingKey { key: "box_length" })?;
    let points_per_axis = e.integer("points_per_axis")?.unwrap_or(32);
    let solver = e
        .choice(
            "solver",
            &[
                ("steepest", SolverKind::Steepest),
                ("cg", SolverKind::Cg),
                ("scf", SolverKind::Scf),
            ],
            "one of steepest, cg, scf",
        )?
        .unwrap_or(SolverKind::Cg);
    let manifold = e
        .choice(
            "manifold",
            &[
                ("stiefel", Manifold::Stiefel),
                ("grassmann", Manifold::Grassmann),
            ],
            "stiefel or grassmann",
        )?
        .unwrap_or_default();
    let guess = e
        .choice(
            "guess",
            &[("random", GuessKind::Random), ("atomic", GuessKind::Atomic)],
            "random or atomic",
        )?
        .unwrap_or(GuessKind::Random);

    let mut line_search = match solver {
        SolverKind::Cg => LineSearchParams::for_cg(),
        _ => LineSearchParams::default(),
    };
    let reals: [(&'static str, &mut f64); 6] = [
        ("r", &mut line_search.r),
        ("r_bar", &mut line_search.r_bar),
        ("tau", &mut line_search.tau),
        ("gamma", &mut line_search.gamma),
        ("alpha_max", &mut line_search.alpha_max),
        ("alpha0", &mut line_search.alpha0),
    ];
    for (key, slot) in reals {
        if let Some(v) = e.real(key)? {
            *slot = v;
        }
    }
    let mut cg = CgParams::default();
    if let Some(v) = e.real("beta_max")? {
        cg.beta_max = v;
    }
    if let Some(v) = e.real("eta_powell")? {
        cg.eta_powell = v;
    }
    if let Some(v) = e.integer("restart_cooldown")? {
        cg.restart_cooldown = v;
    }
    if let Some(v) = e.flag("restart_on_reject")? {
        cg.restart_on_reject = v;
    }
    let mut stop = StopCriteria::default();
    if let Some(v) = e.real("update_tol")? {
        stop.update_tol = v;
    }
    if let Some(v) = e.integer("max_iterations")? {
        stop.max_iterations = v;
    }

    let config = RunConfig {
        molecule_path,
        box_length,
        points_per_axis,
        softening: e.real("softening")?,
        n_orbitals: e.integer("n_orbitals")?,
        solver,
        manifold,
        guess,
        seed: e.integer("seed")?.unwrap_or(0),
        line_search,
        cg,
        stop,
        output_dir: PathBuf::from(e.0.get("output_dir").map(String::as_str).unwrap_or("out")),
        dump_orbitals: e.flag("dump_orbitals")?.unwrap_or(false),
        wall_clock: e.flag("wall_clock")?.unwrap_or(false),
    };
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    /// Check every constraint that does not need the molecule file.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.box_length > 0.0) {
            return Err(constraint(
                "box_length",
                format!("must be positive, got {}", self.box_length),
            ));
        }
        Grid::new(self.box_length, self.points_per_axis).map_err(from_core)?;
        if let Some(s) = self.softening {
            if !(s > 0.0) {
                return Err(constraint(
                    "softening",
                    format!("must be positive, got {s}"),
                ));
            }
        }
        if self.n_orbitals == Some(0) {
            return Err(constraint("n_orbitals", "must be at least 1"));
        }
        if self.manifold == Manifold::Grassmann && self.solver != SolverKind::Cg {
            return Err(constraint(
                "manifold",
                "the Grassmann variant exists for solver = cg only",
            ));
        }
        self.line_search.validate().map_err(from_core)?;
        self.cg.validate().map_err(from_core)?;
        self.stop.validate().map_err(from_core)?;
        Ok(())
    }

    /// Make relative molecule and output paths relative to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        if self.molecule_path.is_relative() {
            self.molecule_path = base.join(&self.molecule_path);
        }
        if self.output_dir.is_relative() {
            self.output_dir = base.join(&self.output_dir);
        }
    }
}
