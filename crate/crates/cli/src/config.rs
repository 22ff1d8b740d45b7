//! Run configuration: a JSON file (`--config`) overridden by flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use aimsolve::aim::AimProblem;
use aimsolve::potentials::{PotentialKind, PotentialSpec, ReducedProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialName {
    Oscillator,
    Pseudoharmonic,
    Kratzer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Closed,
    Aim,
    Both,
}

impl Mode {
    pub fn closed(self) -> bool {
        matches!(self, Mode::Closed | Mode::Both)
    }

    pub fn aim(self) -> bool {
        matches!(self, Mode::Aim | Mode::Both)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Closed => "closed",
            Mode::Aim => "aim",
            Mode::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Flags shared by every command that needs a potential.
#[derive(Debug, Clone, Default, Args)]
pub struct ProblemArgs {
    /// JSON file with defaults; keys are the long flag names.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub potential: Option<PotentialName>,
    /// Reduced mass.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Oscillator angular frequency.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Pseudoharmonic force constant.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Pseudoharmonic equilibrium distance.
    #[arg(long = "re")]
    pub r_e: Option<f64>,
    /// Kratzer attraction in -A/r.
    #[arg(long = "A")]
    pub a: Option<f64>,
    /// Kratzer repulsion in B/r².
    #[arg(long = "B")]
    pub b: Option<f64>,
    /// Kratzer well depth (with --r0, instead of --A/--B).
    #[arg(long = "De")]
    pub de: Option<f64>,
    /// Kratzer equilibrium distance (with --De).
    #[arg(long = "r0")]
    pub r0: Option<f64>,
    /// Spatial dimension; repeat for several.
    #[arg(long = "D")]
    pub dims: Vec<u32>,
    /// Custom expansion point for the AIM recursion.
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Use the single-step oscillator ladder ħω(n + ℓ + D/2).
    #[arg(long)]
    pub paper_compat: bool,
    /// AIM convergence tolerance (relative change between iterations).
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Iteration cap for the AIM recursion.
    #[arg(long)]
    pub k_max: Option<usize>,
}

/// Fields of the JSON config file, named like the flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub potential: Option<PotentialName>,
    pub mu: Option<f64>,
    pub hbar: Option<f64>,
    pub omega: Option<f64>,
    pub kappa: Option<f64>,
    #[serde(rename = "re")]
    pub r_e: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    #[serde(rename = "De")]
    pub de: Option<f64>,
    pub r0: Option<f64>,
    #[serde(rename = "D")]
    pub dims: Option<Vec<u32>>,
    #[serde(rename = "ell-max")]
    pub ell_max: Option<u32>,
    #[serde(rename = "n-max")]
    pub n_max: Option<usize>,
    pub mode: Option<Mode>,
    pub x0: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    #[serde(rename = "paper-compat")]
    pub paper_compat: Option<bool>,
    pub tolerance: Option<f64>,
    #[serde(rename = "k-max")]
    pub k_max: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kind: PotentialKind,
    pub mu: f64,
    pub hbar: f64,
    pub dims: Vec<u32>,
    pub ell_max: u32,
    pub n_max: usize,
    pub mode: Mode,
    pub x0: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub paper_compat: bool,
    pub tolerance: Option<f64>,
    pub k_max: Option<usize>,
}

impl RunConfig {
    /// Merges flags over the config file. `ell_max`, `n_max` and `mode` come
    /// from the command since not every command takes them.
    pub fn resolve(args: &ProblemArgs, ell_max: Option<u32>, n_max: Option<usize>, mode: Option<Mode>) -> Result<Self> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let potential = args
            .potential
            .or(file.potential)
            .context("--potential is required (oscillator, pseudoharmonic or kratzer)")?;
        let pick = |flag: Option<f64>, from_file: Option<f64>| flag.or(from_file);
        let need = |value: Option<f64>, name: &str| value.with_context(|| format!("--{name} is required for {potential:?}"));

        let kind = match potential {
            PotentialName::Oscillator => PotentialKind::HarmonicOscillator { omega: need(pick(args.omega, file.omega), "omega")? },
            PotentialName::Pseudoharmonic => PotentialKind::Pseudoharmonic {
                kappa: need(pick(args.kappa, file.kappa), "kappa")?,
                r_e: need(pick(args.r_e, file.r_e), "re")?,
            },
            PotentialName::Kratzer => {
                let (a, b) = (pick(args.a, file.a), pick(args.b, file.b));
                let (de, r0) = (pick(args.de, file.de), pick(args.r0, file.r0));
                match (a, b, de, r0) {
                    (Some(a), b, None, None) => PotentialKind::KratzerFues { a, b: b.unwrap_or(0.0) },
                    (None, None, Some(de), Some(r0)) => PotentialKind::kratzer_from_depth(de, r0),
                    (None, None, _, _) => bail!("Kratzer needs --A (and optionally --B) or both --De and --r0"),
                    _ => bail!("give either --A/--B or --De/--r0, not both"),
                }
            }
        };
        let dims = if !args.dims.is_empty() { args.dims.clone() } else { file.dims.clone().unwrap_or_else(|| vec![3]) };
        if dims.is_empty() {
            bail!("at least one dimension is needed");
        }
        let cfg = Self {
            kind,
            mu: pick(args.mu, file.mu).unwrap_or(1.0),
            hbar: pick(args.hbar, file.hbar).unwrap_or(1.0),
            dims,
            ell_max: ell_max.or(file.ell_max).unwrap_or(0),
            n_max: n_max.or(file.n_max).unwrap_or(3),
            mode: mode.or(file.mode).unwrap_or(Mode::Closed),
            x0: pick(args.x0, file.x0),
            format: args.format.or(file.format).unwrap_or_default(),
            out: args.out.clone().or(file.out),
            paper_compat: args.paper_compat || file.paper_compat.unwrap_or(false),
            tolerance: pick(args.tolerance, file.tolerance),
            k_max: args.k_max.or(file.k_max),
        };
        // validates every numeric parameter once, up front
        for &d in &cfg.dims {
            cfg.spec(d, 0)?;
        }
        if let Some(x0) = cfg.x0 {
            if !(x0 > 0.0 && x0.is_finite()) {
                bail!("--x0 must be a positive number, got {x0}");
            }
        }
        if let Some(t) = cfg.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                bail!("--tolerance must be positive, got {t}");
            }
        }
        if matches!(cfg.k_max, Some(k) if k < 2) {
            bail!("--k-max must be at least 2");
        }
        Ok(cfg)
    }

    /// AIM problem for state `n` with the run's expansion point and limits.
    pub fn aim_problem(&self, reduced: &ReducedProblem, n: usize) -> AimProblem {
        let mut problem = reduced.aim_problem(n, self.x0);
        if let Some(tol) = self.tolerance {
            problem = problem.with_convergence_tol(tol);
        }
        if let Some(k) = self.k_max {
            problem = problem.with_k_max(k);
        }
        problem
    }

    pub fn spec(&self, dim: u32, ell: u32) -> Result<PotentialSpec> {
        Ok(PotentialSpec::new(self.kind, self.mu, self.hbar, dim, ell)?)
    }

    /// Parameter echo for table headers.
    pub fn meta(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("potential".into(), json!(self.kind.name()));
        match self.kind {
            PotentialKind::HarmonicOscillator { omega } => {
                m.insert("omega".into(), json!(omega));
            }
            PotentialKind::Pseudoharmonic { kappa, r_e } => {
                m.insert("kappa".into(), json!(kappa));
                m.insert("re".into(), json!(r_e));
            }
            PotentialKind::KratzerFues { a, b } => {
                m.insert("A".into(), json!(a));
                m.insert("B".into(), json!(b));
            }
        }
        m.insert("mu".into(), json!(self.mu));
        m.insert("hbar".into(), json!(self.hbar));
        m.insert("D".into(), json!(self.dims));
        m.insert("x0".into(), self.x0.map_or(Value::Null, |x| json!(x)));
        m.insert("paper_compat".into(), json!(self.paper_compat));
        m.insert("tolerance".into(), self.tolerance.map_or(Value::Null, |t| json!(t)));
        m.insert("k_max".into(), self.k_max.map_or(Value::Null, |k| json!(k)));
        m
    }
}
