//! `spectrum` and `compare`: closed-form and AIM energies over (n, ℓ, D).

use anyhow::Result;
use rayon::prelude::*;
use serde_json::json;

use aimsolve::aim::solve_state;
use aimsolve::potentials::{closed_form_energy, reduce, single_step_oscillator_energy};

use crate::config::RunConfig;
use crate::table::{Cell, Table};

pub const COLUMNS: [&str; 9] = ["n", "ell", "D", "E_closed", "E_aim", "abs_diff", "rel_diff", "iterations", "status"];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub n: usize,
    pub ell: u32,
    pub dim: u32,
    pub closed: Option<f64>,
    pub aim: Option<f64>,
    pub iterations: Option<usize>,
    pub status: String,
    /// Single-step ladder value when it differs from `closed`.
    pub ladder: Option<f64>,
}

impl Row {
    pub fn converged(&self) -> bool {
        self.status != "not_converged"
    }

    fn cells(&self) -> Vec<Cell> {
        let (abs, rel) = match (self.closed, self.aim) {
            (Some(c), Some(a)) => {
                let d = (a - c).abs();
                (Some(d), Some(d / c.abs().max(f64::MIN_POSITIVE)))
            }
            _ => (None, None),
        };
        vec![
            Cell::Int(self.n as i64),
            Cell::Int(self.ell as i64),
            Cell::Int(self.dim as i64),
            Cell::opt(self.closed),
            Cell::opt(self.aim),
            Cell::opt(abs),
            Cell::opt(rel),
            self.iterations.map_or(Cell::Empty, |k| Cell::Int(k as i64)),
            Cell::Text(self.status.clone()),
        ]
    }
}

fn solve_row(cfg: &RunConfig, n: usize, ell: u32, dim: u32) -> Result<Row> {
    let spec = cfg.spec(dim, ell)?;
    let ladder_value = single_step_oscillator_energy(&spec, n);
    let exact = closed_form_energy(&spec, n);
    let closed = if !cfg.mode.closed() {
        None
    } else if cfg.paper_compat {
        Some(ladder_value.unwrap_or(exact))
    } else {
        Some(exact)
    };
    let ladder = match (cfg.paper_compat, ladder_value) {
        (false, Some(l)) if l != exact => Some(l),
        _ => None,
    };
    let mut row = Row { n, ell, dim, closed, aim: None, iterations: None, status: "closed".into(), ladder };
    if cfg.mode.aim() {
        let reduced = reduce(&spec);
        let problem = cfg.aim_problem(&reduced, n);
        match solve_state(&problem, reduced.aim_index(n)) {
            Ok(result) => {
                row.aim = Some(reduced.param_to_energy(result.eigenparameter));
                row.iterations = Some(result.iterations_used);
                row.status = "ok".into();
            }
            Err(err) => {
                log::warn!("n={n} ell={ell} D={dim}: {err}");
                row.status = "not_converged".into();
            }
        }
    }
    Ok(row)
}

/// All rows in (n, ℓ, D) order.
pub fn compute(cfg: &RunConfig) -> Result<Vec<Row>> {
    let mut keys = Vec::new();
    for n in 0..=cfg.n_max {
        for ell in 0..=cfg.ell_max {
            for &dim in &cfg.dims {
                keys.push((n, ell, dim));
            }
        }
    }
    keys.par_iter().map(|&(n, ell, dim)| solve_row(cfg, n, ell, dim)).collect()
}

pub fn table(cfg: &RunConfig, rows: &[Row]) -> Table {
    let mut meta = cfg.meta();
    meta.insert("ell_max".into(), json!(cfg.ell_max));
    meta.insert("n_max".into(), json!(cfg.n_max));
    meta.insert("mode".into(), json!(cfg.mode.name()));
    let mut table = Table::new(meta, COLUMNS.to_vec());
    for row in rows {
        table.push(row.cells());
    }
    let differing: Vec<&Row> = rows.iter().filter(|r| r.closed.is_some() && r.ladder.is_some()).collect();
    if !differing.is_empty() {
        table.notes.push(
            "E_closed is hbar*omega*(2n + ell + D/2); the single-step ladder hbar*omega*(n + ell + D/2) \
             (--paper-compat) differs on these rows:"
                .into(),
        );
        for r in differing {
            table.notes.push(format!("n={} ell={} D={} single_step={:.16e}", r.n, r.ell, r.dim, r.ladder.unwrap()));
        }
    }
    if rows.iter().any(|r| !r.converged()) {
        table.notes.push("rows with status not_converged have no AIM value".into());
    }
    table
}
