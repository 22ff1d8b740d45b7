//! The three radial problems and their reduction to AIM form.
//!
//! With `λ = 2μE/ħ²` the D-dimensional radial equation reads
//!
//! ```text
//! R'' + (D-1)/r R' + [λ - 2μV(r)/ħ² - ℓ(ℓ+D-2)/r²] R = 0
//! ```
//!
//! Any `1/r²` part of `V` joins the centrifugal term, so the small-r power of
//! `R` is the positive root `p` of `p(p+D-2) = ℓ(ℓ+D-2) + s/4`, i.e.
//! `p = ((2-D) + sqrt((2ℓ+D-2)² + s)) / 2`.
//!
//! | potential      | `s`            | ansatz                     | parameter         |
//! |----------------|----------------|----------------------------|-------------------|
//! | oscillator     | 0 (`p = ℓ`)    | `r^ℓ exp(-γr²/2)`, γ = μω/ħ | `λ`              |
//! | pseudoharmonic | `μκr_e⁴/ħ²`    | `r^p exp(-γr²/2)`, γ = √(μκ)/(2ħ) | `λ`        |
//! | Kratzer-Fues   | `8μB/ħ²`       | `z^p exp(-z/2)`, z = 2εr    | `ε = √(-2μE)/ħ`  |
//!
//! The pseudoharmonic constant is `V(r) = κr²/8 - κr_e²/4 + κr_e⁴/(8r²)`; the
//! middle term shifts `λ` by `μκr_e²/(2ħ²)`.

use std::sync::Arc;

use thiserror::Error;

use crate::aim::{self, AimEquation, AimError, AimProblem, AimResult, EnergyOrder, ScanSpacing};
use crate::jets::Jet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("parameter {name} = {value} is outside its valid range ({rule})")]
    InvalidParameter { name: &'static str, value: f64, rule: &'static str },
    #[error("the potential is singular at r = {r}; need r > 0")]
    NonPositiveRadius { r: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialKind {
    HarmonicOscillator { omega: f64 },
    Pseudoharmonic { kappa: f64, r_e: f64 },
    /// `V = -A/r + B/r²`.
    KratzerFues { a: f64, b: f64 },
}

impl PotentialKind {
    /// Kratzer-Fues from the well depth `D_e` and its position `r0`.
    pub fn kratzer_from_depth(de: f64, r0: f64) -> Self {
        Self::KratzerFues { a: 2.0 * de * r0, b: de * r0 * r0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::HarmonicOscillator { .. } => "oscillator",
            Self::Pseudoharmonic { .. } => "pseudoharmonic",
            Self::KratzerFues { .. } => "kratzer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub mu: f64,
    pub hbar: f64,
    pub dim: u32,
    pub ell: u32,
}

fn check(name: &'static str, value: f64, ok: bool, rule: &'static str) -> Result<(), PotentialError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(PotentialError::InvalidParameter { name, value, rule })
    }
}

impl PotentialSpec {
    pub fn new(kind: PotentialKind, mu: f64, hbar: f64, dim: u32, ell: u32) -> Result<Self, PotentialError> {
        check("mu", mu, mu > 0.0, "> 0")?;
        check("hbar", hbar, hbar > 0.0, "> 0")?;
        check("D", dim as f64, dim >= 1, ">= 1")?;
        match kind {
            PotentialKind::HarmonicOscillator { omega } => check("omega", omega, omega > 0.0, "> 0")?,
            PotentialKind::Pseudoharmonic { kappa, r_e } => {
                check("kappa", kappa, kappa > 0.0, "> 0")?;
                check("r_e", r_e, r_e >= 0.0, ">= 0")?;
            }
            PotentialKind::KratzerFues { a, b } => {
                check("A", a, a > 0.0, "> 0")?;
                check("B", b, b >= 0.0, ">= 0")?;
            }
        }
        Ok(Self { kind, mu, hbar, dim, ell })
    }

    /// Unit mass and ħ.
    pub fn natural(kind: PotentialKind, dim: u32, ell: u32) -> Result<Self, PotentialError> {
        Self::new(kind, 1.0, 1.0, dim, ell)
    }

    pub fn with_ell(&self, ell: u32) -> Self {
        Self { ell, ..*self }
    }

    pub fn with_dim(&self, dim: u32) -> Result<Self, PotentialError> {
        Self::new(self.kind, self.mu, self.hbar, dim, self.ell)
    }

    fn d(&self) -> f64 {
        self.dim as f64
    }

    fn l(&self) -> f64 {
        self.ell as f64
    }

    /// `ℓ(ℓ+D-2)`.
    pub fn separation_constant(&self) -> f64 {
        self.l() * (self.l() + self.d() - 2.0)
    }

    /// `2μ/ħ²`, converting energies into `λ` units.
    pub fn lambda_per_energy(&self) -> f64 {
        2.0 * self.mu / (self.hbar * self.hbar)
    }

    /// The extra `1/r²` strength `s` entering the exponent quadratic.
    fn inverse_square_strength(&self) -> f64 {
        let (mu, hb) = (self.mu, self.hbar);
        match self.kind {
            PotentialKind::HarmonicOscillator { .. } => 0.0,
            PotentialKind::Pseudoharmonic { kappa, r_e } => mu * kappa * r_e.powi(4) / (hb * hb),
            PotentialKind::KratzerFues { b, .. } => 8.0 * mu * b / (hb * hb),
        }
    }
}

pub fn potential_value(spec: &PotentialSpec, r: f64) -> Result<f64, PotentialError> {
    match spec.kind {
        PotentialKind::HarmonicOscillator { omega } => {
            if r < 0.0 {
                return Err(PotentialError::NonPositiveRadius { r });
            }
            Ok(0.5 * spec.mu * omega * omega * r * r)
        }
        _ if r <= 0.0 => Err(PotentialError::NonPositiveRadius { r }),
        PotentialKind::Pseudoharmonic { kappa, r_e } => {
            if r_e == 0.0 {
                return Ok(kappa * r * r / 8.0);
            }
            let t = r / r_e - r_e / r;
            Ok(kappa * r_e * r_e * t * t / 8.0)
        }
        PotentialKind::KratzerFues { a, b } => Ok(-a / r + b / (r * r)),
    }
}

/// Small-r power of the radial function: `ℓ`, `v` or `ν`.
pub fn effective_exponent(spec: &PotentialSpec) -> f64 {
    if let PotentialKind::HarmonicOscillator { .. } = spec.kind {
        return spec.l();
    }
    let d = spec.d();
    let root = (2.0 * spec.l() + d - 2.0).powi(2) + spec.inverse_square_strength();
    0.5 * ((2.0 - d) + root.sqrt())
}

/// `γ` of the Gaussian factor `exp(-γr²/2)`, absent for Kratzer.
pub fn gaussian_rate(spec: &PotentialSpec) -> Option<f64> {
    match spec.kind {
        PotentialKind::HarmonicOscillator { omega } => Some(spec.mu * omega / spec.hbar),
        PotentialKind::Pseudoharmonic { kappa, .. } => Some(0.5 * (spec.mu * kappa).sqrt() / spec.hbar),
        PotentialKind::KratzerFues { .. } => None,
    }
}

/// Location of the potential minimum, if it has one.
pub fn potential_minimum(spec: &PotentialSpec) -> Option<f64> {
    match spec.kind {
        PotentialKind::HarmonicOscillator { .. } => Some(0.0),
        PotentialKind::Pseudoharmonic { r_e, .. } => Some(r_e),
        PotentialKind::KratzerFues { a, b } => (b > 0.0).then(|| 2.0 * b / a),
    }
}

pub fn closed_form_energy(spec: &PotentialSpec, n: usize) -> f64 {
    let n = n as f64;
    let d = spec.d();
    let p = effective_exponent(spec);
    match spec.kind {
        PotentialKind::HarmonicOscillator { omega } => spec.hbar * omega * (2.0 * n + spec.l() + 0.5 * d),
        PotentialKind::Pseudoharmonic { kappa, r_e } => {
            0.25 * (4.0 * n + 2.0 * p + d) * (kappa * spec.hbar * spec.hbar / spec.mu).sqrt()
                - 0.25 * kappa * r_e * r_e
        }
        PotentialKind::KratzerFues { a, .. } => {
            let q = 2.0 * n + 2.0 * p + d - 1.0;
            -2.0 * spec.mu * a * a / (spec.hbar * spec.hbar * q * q)
        }
    }
}

/// The single-step oscillator ladder `ħω(n + ℓ + D/2)`.
///
/// Only reachable through `--paper-compat`; its spacing is half the true
/// one, so it disagrees with the AIM and grid spectra for every `n >= 1`.
pub fn single_step_oscillator_energy(spec: &PotentialSpec, n: usize) -> Option<f64> {
    match spec.kind {
        PotentialKind::HarmonicOscillator { omega } => {
            Some(spec.hbar * omega * (n as f64 + spec.l() + 0.5 * spec.d()))
        }
        _ => None,
    }
}

/// Independent variable of the reduced equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableKind {
    Radial,
    /// `z = 2εr`.
    Scaled,
}

/// The AIM-ready form of one radial problem.
#[derive(Clone)]
pub struct ReducedProblem {
    pub spec: PotentialSpec,
    pub exponent: f64,
    pub gaussian_rate: Option<f64>,
    pub variable: VariableKind,
    pub default_x0: f64,
    equation: Arc<dyn AimEquation>,
}

impl std::fmt::Debug for ReducedProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReducedProblem")
            .field("spec", &self.spec)
            .field("exponent", &self.exponent)
            .field("variable", &self.variable)
            .field("default_x0", &self.default_x0)
            .finish_non_exhaustive()
    }
}

/// Oscillator-like: `f0 = 2γr - c/r`, `g0 = γ(c+1) - shift - λ` with `c = 2p+D-1`.
struct GaussianFamily {
    gamma: f64,
    c: f64,
    shift: f64,
}

impl AimEquation for GaussianFamily {
    fn coefficients(&self, lam: f64, x0: f64, order: usize) -> Result<(Jet, Jet), crate::jets::JetError> {
        let r = Jet::variable(x0, order)?;
        let f0 = r.scale(2.0 * self.gamma).sub(&r.recip()?.scale(self.c))?;
        let g0 = Jet::constant(self.gamma * (self.c + 1.0) - self.shift - lam, order, x0)?;
        Ok((f0, g0))
    }
}

/// Kratzer in `z`: `f0 = 1 - c/z`, `g0 = (c - α/ε)/(2z)`.
struct CoulombFamily {
    alpha: f64,
    c: f64,
}

impl AimEquation for CoulombFamily {
    fn coefficients(&self, eps: f64, x0: f64, order: usize) -> Result<(Jet, Jet), crate::jets::JetError> {
        let zinv = Jet::variable(x0, order)?.recip()?;
        let f0 = zinv.scale(-self.c).offset(1.0);
        let g0 = zinv.scale(0.5 * (self.c - self.alpha / eps));
        Ok((f0, g0))
    }
}

pub fn reduce(spec: &PotentialSpec) -> ReducedProblem {
    let p = effective_exponent(spec);
    let d = spec.d();
    let c = 2.0 * p + d - 1.0;
    let gamma = gaussian_rate(spec);
    let (variable, equation): (VariableKind, Arc<dyn AimEquation>) = match spec.kind {
        PotentialKind::HarmonicOscillator { .. } => {
            (VariableKind::Radial, Arc::new(GaussianFamily { gamma: gamma.unwrap(), c, shift: 0.0 }))
        }
        PotentialKind::Pseudoharmonic { kappa, r_e } => {
            let shift = 0.5 * spec.mu * kappa * r_e * r_e / (spec.hbar * spec.hbar);
            (VariableKind::Radial, Arc::new(GaussianFamily { gamma: gamma.unwrap(), c, shift }))
        }
        PotentialKind::KratzerFues { a, .. } => {
            let alpha = spec.lambda_per_energy() * a;
            (VariableKind::Scaled, Arc::new(CoulombFamily { alpha, c }))
        }
    };
    let mut reduced = ReducedProblem { spec: *spec, exponent: p, gaussian_rate: gamma, variable, default_x0: 1.0, equation };
    reduced.default_x0 = default_x0(&reduced);
    reduced
}

/// Expansion point used when none is configured.
///
/// Oscillator and pseudoharmonic: `sqrt((p + D/2)/γ)`, the peak of
/// `r^{p+D/2} exp(-γr²/2)`. For the pseudoharmonic
/// well this beats the potential minimum `r_e`: a small `r_e` sits inside the
/// inverse-square barrier, where high-order jets of `1/r` lose precision.
/// Kratzer: `z0 = 2ν + D`, the mean of `z` in the ground state.
pub fn default_x0(reduced: &ReducedProblem) -> f64 {
    let d = reduced.spec.d();
    let p = reduced.exponent;
    match reduced.gaussian_rate {
        Some(gamma) => ((p + 0.5 * d) / gamma).sqrt(),
        None => 2.0 * p + d,
    }
}

/// A solved level: the AIM output in physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct AimSolution {
    pub energy: f64,
    pub result: AimResult,
}

impl ReducedProblem {
    /// `c = 2p + D - 1`, the coefficient of the `1/x` term in `f0`.
    pub fn c(&self) -> f64 {
        2.0 * self.exponent + self.spec.d() - 1.0
    }

    pub fn equation(&self) -> Arc<dyn AimEquation> {
        Arc::clone(&self.equation)
    }

    pub fn param_to_energy(&self, param: f64) -> f64 {
        let scale = self.spec.lambda_per_energy();
        match self.variable {
            VariableKind::Radial => param / scale,
            VariableKind::Scaled => -param * param / scale,
        }
    }

    pub fn energy_to_param(&self, energy: f64) -> f64 {
        let scale = self.spec.lambda_per_energy();
        match self.variable {
            VariableKind::Radial => energy * scale,
            VariableKind::Scaled => (-energy * scale).max(0.0).sqrt(),
        }
    }

    pub fn energy_order(&self) -> EnergyOrder {
        match self.variable {
            VariableKind::Radial => EnergyOrder::Increasing,
            VariableKind::Scaled => EnergyOrder::Decreasing,
        }
    }

    /// Bracket holding the lowest `levels` states with one level of margin.
    ///
    /// Gaussian tails: `λ` from 0 (both potentials are nonnegative) to the
    /// harmonic ladder `γ(2p + D + 4(levels+1))`, which bounds the pseudoharmonic
    /// levels from above. Kratzer: `ε` between the hydrogenic ladder value
    /// `α/(c + 2(levels+1))` and `1.25 α`, which exceeds `α/c` since `c >= 1`.
    pub fn search_interval(&self, levels: usize) -> (f64, f64) {
        let m = (levels + 1) as f64;
        match (self.variable, self.gaussian_rate) {
            (VariableKind::Radial, Some(gamma)) => (0.0, gamma * (self.c() + 1.0 + 4.0 * m)),
            _ => {
                let alpha = match self.spec.kind {
                    PotentialKind::KratzerFues { a, .. } => self.spec.lambda_per_energy() * a,
                    _ => unreachable!("scaled variable is only used for Kratzer"),
                };
                (alpha / (self.c() + 2.0 * m), 1.25 * alpha / self.c().min(1.0))
            }
        }
    }

    /// Position of state `n` among the persistent AIM roots.
    ///
    /// With `D = 1, ℓ = 0` the `1/r` term of `f0` vanishes and the iteration
    /// terminates on every Hermite polynomial; the odd ones are the `ℓ = 1`
    /// states, so only every second root belongs to this problem.
    pub fn aim_index(&self, n: usize) -> usize {
        if self.variable == VariableKind::Radial && self.c() == 0.0 {
            2 * n
        } else {
            n
        }
    }

    /// AIM problem sized for state `n`, optionally at a custom expansion point.
    pub fn aim_problem(&self, n: usize, x0: Option<f64>) -> AimProblem {
        let (lo, hi) = self.search_interval(self.aim_index(n) + 1);
        let spacing = match self.variable {
            VariableKind::Radial => ScanSpacing::Uniform,
            VariableKind::Scaled => ScanSpacing::Reciprocal,
        };
        AimProblem::from_arc(self.equation(), x0.unwrap_or(self.default_x0), (lo, hi))
            .with_spacing(spacing)
            .with_energy_order(self.energy_order())
    }

    /// Solves state `n`; the result's `state_index` is `n` even when
    /// [`Self::aim_index`] skips roots.
    pub fn solve(&self, n: usize, x0: Option<f64>) -> Result<AimSolution, AimError> {
        let mut result = aim::solve_state(&self.aim_problem(n, x0), self.aim_index(n))?;
        result.state_index = n;
        Ok(AimSolution { energy: self.param_to_energy(result.eigenparameter), result })
    }

    pub fn closed_form_param(&self, n: usize) -> f64 {
        self.energy_to_param(closed_form_energy(&self.spec, n))
    }
}
