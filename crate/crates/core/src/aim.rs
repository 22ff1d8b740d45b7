//! The asymptotic iteration method.
//!
//! For `y'' = f0 y' + g0 y` the sequences
//!
//! ```text
//! f_n = f'_{n-1} + g_{n-1} + f0 f_{n-1}
//! g_n = g'_{n-1} + g0 f_{n-1}
//! ```
//!
//! are carried as jets about a fixed point `x0`. The termination quantity
//! `δ_k = g_k f_{k-1} - f_k g_{k-1}` evaluated at `x0` is a function of the
//! spectral parameter, and its roots are the eigenvalue candidates.
//!
//! Each pair `(f_n, g_n)` is divided by a common positive factor after it is
//! formed. The recursion is linear in the previous pair, so this only rescales
//! `δ_k` by a positive number: signs and roots are untouched.
//!
//! Roots of `δ_k` at a fixed `x0` are a mix of true eigenvalues, which stay put
//! once `k` is large enough, and `x0`-dependent spurious roots that drift with
//! `k`. [`solve_state`] only accepts roots that reappear at the previous `k`.

use std::sync::Arc;

use thiserror::Error;

use crate::jets::{Jet, JetError};

pub const DEFAULT_K_MAX: usize = 30;
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-8;
pub const DEFAULT_SCAN_POINTS: usize = 400;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AimError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("jets of order {available} cannot support {requested} iterations")]
    OrderExhausted { requested: usize, available: usize },
    #[error("f0 vanishes at the expansion point x0 = {x0}")]
    VanishingF0 { x0: f64 },
    #[error("non-finite AIM sequence at iteration {n} despite rescaling")]
    Overflow { n: usize },
    #[error("invalid search interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid iteration request: {0}")]
    InvalidRequest(&'static str),
    #[error("bisection did not converge on [{lo}, {hi}]")]
    BisectionFailed { lo: f64, hi: f64 },
    #[error("state {n} needs {needed} roots but at most {found} were found; widen the search interval")]
    TooFewRoots { n: usize, needed: usize, found: usize },
    #[error("state {n} did not converge by k = {k}: best estimate {best}, gap {gap:e}")]
    NotConverged { n: usize, k: usize, best: f64, gap: f64 },
}

/// Supplies `(f0, g0)` as jets of a given order about `x0` for a spectral parameter.
pub trait AimEquation: Send + Sync {
    fn coefficients(&self, param: f64, x0: f64, order: usize) -> Result<(Jet, Jet), JetError>;
}

impl<F> AimEquation for F
where
    F: Fn(f64, f64, usize) -> Result<(Jet, Jet), JetError> + Send + Sync,
{
    fn coefficients(&self, param: f64, x0: f64, order: usize) -> Result<(Jet, Jet), JetError> {
        self(param, x0, order)
    }
}

/// How the scan grid is laid out over the search interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanSpacing {
    Uniform,
    /// Uniform in `1/param`; suits ladders that accumulate towards zero.
    Reciprocal,
}

/// Direction in which the physical energy moves as the parameter grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyOrder {
    Increasing,
    Decreasing,
}

#[derive(Clone)]
pub struct AimProblem {
    equation: Arc<dyn AimEquation>,
    pub x0: f64,
    pub search_interval: (f64, f64),
    pub k_max: usize,
    pub root_tol: f64,
    pub convergence_tol: f64,
    pub scan_points: usize,
    pub spacing: ScanSpacing,
    pub energy_order: EnergyOrder,
    pub rescale: bool,
}

impl std::fmt::Debug for AimProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AimProblem")
            .field("x0", &self.x0)
            .field("search_interval", &self.search_interval)
            .field("k_max", &self.k_max)
            .field("spacing", &self.spacing)
            .field("energy_order", &self.energy_order)
            .finish_non_exhaustive()
    }
}

impl AimProblem {
    pub fn new(equation: impl AimEquation + 'static, x0: f64, search_interval: (f64, f64)) -> Self {
        Self::from_arc(Arc::new(equation), x0, search_interval)
    }

    pub fn from_arc(equation: Arc<dyn AimEquation>, x0: f64, search_interval: (f64, f64)) -> Self {
        Self {
            equation,
            x0,
            search_interval,
            k_max: DEFAULT_K_MAX,
            root_tol: DEFAULT_ROOT_TOL,
            convergence_tol: DEFAULT_CONVERGENCE_TOL,
            scan_points: DEFAULT_SCAN_POINTS,
            spacing: ScanSpacing::Uniform,
            energy_order: EnergyOrder::Increasing,
            rescale: true,
        }
    }

    pub fn with_x0(mut self, x0: f64) -> Self {
        self.x0 = x0;
        self
    }

    pub fn with_interval(mut self, lo: f64, hi: f64) -> Self {
        self.search_interval = (lo, hi);
        self
    }

    pub fn with_k_max(mut self, k_max: usize) -> Self {
        self.k_max = k_max;
        self
    }

    pub fn with_spacing(mut self, spacing: ScanSpacing) -> Self {
        self.spacing = spacing;
        self
    }

    pub fn with_energy_order(mut self, order: EnergyOrder) -> Self {
        self.energy_order = order;
        self
    }

    pub fn with_rescale(mut self, rescale: bool) -> Self {
        self.rescale = rescale;
        self
    }

    pub fn with_convergence_tol(mut self, tol: f64) -> Self {
        self.convergence_tol = tol;
        self
    }

    /// `(f0, g0)` at `param`, sized for `k` iterations.
    pub fn coefficients(&self, param: f64, k: usize) -> Result<(Jet, Jet), AimError> {
        let (f0, g0) = self.equation.coefficients(param, self.x0, k + 2)?;
        if f0.value().abs() <= 1e-12 * f0.max_abs().max(1.0) {
            return Err(AimError::VanishingF0 { x0: self.x0 });
        }
        Ok((f0, g0))
    }

    /// `δ_1..δ_k` at `param`.
    pub fn delta_profile(&self, param: f64, k: usize) -> Result<Vec<f64>, AimError> {
        let (f0, g0) = self.coefficients(param, k)?;
        let seq = aim_sequences_with(&f0, &g0, k, self.rescale)?;
        (1..=k).map(|j| termination_delta(&seq, j)).collect()
    }

    pub fn delta(&self, param: f64, k: usize) -> Result<f64, AimError> {
        let (f0, g0) = self.coefficients(param, k)?;
        let seq = aim_sequences_with(&f0, &g0, k, self.rescale)?;
        termination_delta(&seq, k)
    }

    fn validate(&self) -> Result<(), AimError> {
        let (lo, hi) = self.search_interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(AimError::InvalidInterval { lo, hi });
        }
        if self.spacing == ScanSpacing::Reciprocal && lo <= 0.0 {
            return Err(AimError::InvalidInterval { lo, hi });
        }
        if self.scan_points < 2 {
            return Err(AimError::InvalidRequest("scan_points must be at least 2"));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<f64> {
        let (lo, hi) = self.search_interval;
        let m = self.scan_points - 1;
        (0..=m)
            .map(|i| {
                let t = i as f64 / m as f64;
                match self.spacing {
                    ScanSpacing::Uniform => lo + t * (hi - lo),
                    // endpoints exactly, interior uniform in 1/param
                    ScanSpacing::Reciprocal => 1.0 / (1.0 / lo + t * (1.0 / hi - 1.0 / lo)),
                }
            })
            .collect()
    }

    /// Sorts parameter values so the lowest energy comes first.
    fn energy_sort(&self, roots: &mut [f64]) {
        roots.sort_by(|a, b| a.total_cmp(b));
        if self.energy_order == EnergyOrder::Decreasing {
            roots.reverse();
        }
    }

    fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.convergence_tol * a.abs().max(b.abs()).max(1.0)
    }
}

/// The pairs `(f_n, g_n)` for `n = 0..=k`, each rescaled by its positive factor.
#[derive(Debug, Clone)]
pub struct AimSequences {
    pub pairs: Vec<(Jet, Jet)>,
    /// `s_n` applied to pair `n` (1 for the unscaled input pair).
    pub scales: Vec<f64>,
}

/// Runs the recursion to `k` with pairwise rescaling.
pub fn aim_sequences(f0: &Jet, g0: &Jet, k: usize) -> Result<AimSequences, AimError> {
    aim_sequences_with(f0, g0, k, true)
}

pub fn aim_sequences_with(
    f0: &Jet,
    g0: &Jet,
    k: usize,
    rescale: bool,
) -> Result<AimSequences, AimError> {
    let available = f0.order().min(g0.order());
    if available < k + 1 {
        return Err(AimError::OrderExhausted { requested: k, available });
    }
    let mut pairs = Vec::with_capacity(k + 1);
    let mut scales = Vec::with_capacity(k + 1);
    pairs.push((f0.clone(), g0.clone()));
    scales.push(1.0);
    for n in 1..=k {
        let (fp, gp) = &pairs[n - 1];
        let mut f = fp.derivative()?.add(gp)?.add(&f0.mul(fp)?)?;
        let mut g = gp.derivative()?.add(&g0.mul(fp)?)?;
        let mut s = 1.0;
        if rescale {
            s = f.max_abs().max(g.max_abs()).max(1.0);
            f = f.scale(1.0 / s);
            g = g.scale(1.0 / s);
        }
        if !(s.is_finite() && f.coeffs().iter().chain(g.coeffs()).all(|c| c.is_finite())) {
            return Err(AimError::Overflow { n });
        }
        pairs.push((f, g));
        scales.push(s);
    }
    Ok(AimSequences { pairs, scales })
}

/// `g_k f_{k-1} - f_k g_{k-1}` at the expansion point.
pub fn termination_delta(seq: &AimSequences, k: usize) -> Result<f64, AimError> {
    if k == 0 {
        return Err(AimError::InvalidRequest("termination needs k >= 1"));
    }
    let (fk, gk) = seq
        .pairs
        .get(k)
        .ok_or(AimError::OrderExhausted { requested: k, available: seq.pairs.len() - 1 })?;
    let (fp, gp) = &seq.pairs[k - 1];
    Ok(gk.value() * fp.value() - fk.value() * gp.value())
}

/// Values of `δ_1..δ_{k_hi}` over the scan grid.
struct ScanTable {
    grid: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl ScanTable {
    fn build(problem: &AimProblem, k_hi: usize) -> Result<Self, AimError> {
        let grid = problem.grid();
        let values = grid
            .iter()
            .map(|&p| problem.delta_profile(p, k_hi))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { grid, values })
    }

    fn k_hi(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// Refined roots of `δ_k`, ascending in the parameter.
    fn roots(&self, problem: &AimProblem, k: usize) -> Result<Vec<f64>, AimError> {
        let mut out = Vec::new();
        let col = |i: usize| self.values[i][k - 1];
        for i in 0..self.grid.len() {
            let v = col(i);
            if v == 0.0 {
                if i == 0 || col(i - 1) != 0.0 {
                    out.push(self.grid[i]);
                }
                continue;
            }
            if i + 1 < self.grid.len() {
                let w = col(i + 1);
                if w != 0.0 && v.signum() != w.signum() {
                    out.push(bisect(problem, k, self.grid[i], self.grid[i + 1], v)?);
                }
            }
        }
        out.sort_by(|a, b| a.total_cmp(b));
        Ok(out)
    }
}

fn bisect(problem: &AimProblem, k: usize, a: f64, b: f64, fa: f64) -> Result<f64, AimError> {
    let (mut lo, mut hi) = if a < b { (a, b) } else { (b, a) };
    let mut f_lo = if a < b { fa } else { problem.delta(lo, k)? };
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= problem.root_tol * mid.abs().max(1.0) || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = problem.delta(mid, k)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Err(AimError::BisectionFailed { lo, hi })
}

/// All sign-change roots of `δ_k` over the search interval, ascending.
pub fn find_roots(problem: &AimProblem, k: usize, scan_points: usize) -> Result<Vec<f64>, AimError> {
    if k == 0 {
        return Err(AimError::InvalidRequest("termination needs k >= 1"));
    }
    let mut p = problem.clone();
    p.scan_points = scan_points;
    p.validate()?;
    ScanTable::build(&p, k)?.roots(&p, k)
}

/// Converged eigenparameter for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct AimResult {
    pub state_index: usize,
    pub eigenparameter: f64,
    pub iterations_used: usize,
    /// `(k, estimate)`: the root of `δ_k` tracked towards the converged value.
    pub history: Vec<(usize, f64)>,
    /// `|δ_k|` at the converged parameter for `k = 1..=iterations_used`.
    pub delta_trace: Vec<f64>,
}

impl AimResult {
    /// Change between the last two history entries.
    pub fn final_gap(&self) -> f64 {
        match self.history.as_slice() {
            [.., (_, a), (_, b)] => (b - a).abs(),
            _ => f64::NAN,
        }
    }
}

/// Solves for state `n` (0-based, in energy order).
///
/// Scans `δ_k` for `k = 1, 2, ...`; a root of `δ_k` counts once a root of
/// `δ_{k-1}` agrees with it to `convergence_tol`. The state is the `(n+1)`-th
/// such persistent root in energy order.
pub fn solve_state(problem: &AimProblem, n: usize) -> Result<AimResult, AimError> {
    problem.validate()?;
    if problem.k_max < 2 {
        return Err(AimError::InvalidRequest("k_max must be at least 2"));
    }
    // most states settle well before k_max; retry with the full budget if not
    let first = (2 * n + 6).min(problem.k_max);
    let mut table = ScanTable::build(problem, first)?;
    match run_progression(problem, n, &table)? {
        Progress::Converged(r) => Ok(r),
        Progress::Stalled(err) if table.k_hi() == problem.k_max => Err(err),
        Progress::Stalled(_) => {
            table = ScanTable::build(problem, problem.k_max)?;
            match run_progression(problem, n, &table)? {
                Progress::Converged(r) => Ok(r),
                Progress::Stalled(err) => Err(err),
            }
        }
    }
}

enum Progress {
    Converged(AimResult),
    Stalled(AimError),
}

fn run_progression(problem: &AimProblem, n: usize, table: &ScanTable) -> Result<Progress, AimError> {
    let mut per_k: Vec<Vec<f64>> = Vec::new();
    let mut most_found = 0;
    for k in 1..=table.k_hi() {
        let mut roots = table.roots(problem, k)?;
        problem.energy_sort(&mut roots);
        most_found = most_found.max(roots.len());
        if let Some(prev) = per_k.last() {
            let stable: Vec<f64> = roots
                .iter()
                .copied()
                .filter(|r| prev.iter().any(|p| problem.close(*r, *p)))
                .collect();
            if let Some(&value) = stable.get(n) {
                per_k.push(roots);
                return Ok(Progress::Converged(finish(problem, n, value, k, &per_k)?));
            }
        }
        per_k.push(roots);
    }
    let k = table.k_hi();
    if most_found <= n {
        return Ok(Progress::Stalled(AimError::TooFewRoots { n, needed: n + 1, found: most_found }));
    }
    let last = per_k.last().map(Vec::as_slice).unwrap_or_default();
    let best = last.get(n).copied().unwrap_or(f64::NAN);
    let gap = per_k
        .iter()
        .rev()
        .nth(1)
        .and_then(|prev| prev.iter().map(|p| (p - best).abs()).min_by(|a, b| a.total_cmp(b)))
        .unwrap_or(f64::INFINITY);
    Ok(Progress::Stalled(AimError::NotConverged { n, k, best, gap }))
}

fn finish(
    problem: &AimProblem,
    n: usize,
    value: f64,
    k: usize,
    per_k: &[Vec<f64>],
) -> Result<AimResult, AimError> {
    let history: Vec<(usize, f64)> = per_k
        .iter()
        .enumerate()
        .filter(|(_, roots)| roots.len() > n)
        .filter_map(|(i, roots)| {
            roots
                .iter()
                .copied()
                .min_by(|a, b| (a - value).abs().total_cmp(&(b - value).abs()))
                .map(|r| (i + 1, r))
        })
        .collect();
    let steps: Vec<f64> = history.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
    if let Some(pos) = steps.iter().position(|&d| problem.close(d, 0.0)) {
        if steps[pos..].windows(2).any(|w| w[1] > w[0] && w[1] > f64::EPSILON * value.abs()) {
            log::debug!("state {n}: non-monotone convergence history {history:?}");
        }
    }
    let delta_trace = problem
        .delta_profile(value, k)?
        .into_iter()
        .map(f64::abs)
        .collect();
    Ok(AimResult { state_index: n, eigenparameter: value, iterations_used: k, history, delta_trace })
}
