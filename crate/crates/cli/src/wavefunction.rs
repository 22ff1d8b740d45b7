//! `wavefunction`: the normalized radial function on a uniform grid.

use anyhow::{bail, Result};
use serde_json::json;

use aimsolve::potentials::{potential_value, reduce};
use aimsolve::wavefunctions::{build_state, build_state_with_energy, suggested_r_max, RadialState};

use crate::config::RunConfig;
use crate::table::{Cell, Table};
use crate::NumericalFailure;

#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub r_max: Option<f64>,
    pub points: usize,
}

pub fn state(cfg: &RunConfig, n: usize, ell: u32) -> Result<RadialState> {
    let [dim] = cfg.dims[..] else {
        bail!("wavefunction takes a single --D, got {:?}", cfg.dims);
    };
    let spec = cfg.spec(dim, ell)?;
    let state = if cfg.mode.aim() {
        let reduced = reduce(&spec);
        let problem = cfg.aim_problem(&reduced, n);
        let result = aimsolve::aim::solve_state(&problem, reduced.aim_index(n))
            .map_err(|e| NumericalFailure(format!("AIM energy for n={n}: {e}")))?;
        build_state_with_energy(&spec, n, reduced.param_to_energy(result.eigenparameter))
    } else {
        build_state(&spec, n)
    };
    state.map_err(|e| NumericalFailure(format!("building state n={n}: {e}")).into())
}

/// Samples `r_i = i r_max / (points - 1)`, `i = 0..points`.
pub fn table(cfg: &RunConfig, state: &RadialState, grid: GridSpec) -> Result<Table> {
    if grid.points < 2 {
        bail!("--points must be at least 2, got {}", grid.points);
    }
    let r_max = grid.r_max.unwrap_or_else(|| suggested_r_max(state));
    if !(r_max > 0.0 && r_max.is_finite()) {
        bail!("--r-max must be positive, got {r_max}");
    }
    let mut meta = cfg.meta();
    meta.insert("D".into(), json!(state.spec.dim));
    meta.insert("ell".into(), json!(state.spec.ell));
    meta.insert("n".into(), json!(state.n));
    meta.insert("mode".into(), json!(if cfg.mode.aim() { "aim" } else { "closed" }));
    meta.insert("energy".into(), json!(state.energy));
    meta.insert("C".into(), json!(state.normalization));
    meta.insert("exponent".into(), json!(state.exponent));
    meta.insert("r_max".into(), json!(r_max));
    let mut table = Table::new(meta, vec!["r", "R", "V"]);
    for i in 0..grid.points {
        let r = r_max * i as f64 / (grid.points - 1) as f64;
        // V is undefined at the origin for the singular potentials
        let v = potential_value(&state.spec, r).ok().filter(|v| v.is_finite());
        table.push(vec![Cell::Float(r), Cell::Float(state.value(r)), Cell::opt(v)]);
    }
    Ok(table)
}
