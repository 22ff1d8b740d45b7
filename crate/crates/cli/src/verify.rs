//! `verify`: runs the invariant suites and reports each check.

use serde_json::{json, Map};

use aimsolve::verify::{Bound, Report, Suite, VerifyOptions};

use crate::table::{Cell, Table};

fn bound_name(bound: Bound) -> &'static str {
    match bound {
        Bound::Tolerance => "<= tol",
        Bound::AtMost => "<=",
        Bound::AtLeast => ">=",
        Bound::Info => "info",
    }
}

pub fn run(suites: &[Suite], opts: &VerifyOptions) -> Report {
    let suites = if suites.is_empty() { &Suite::ALL[..] } else { suites };
    aimsolve::verify::run(suites, opts)
}

pub fn table(report: &Report, suites: &[Suite], opts: &VerifyOptions) -> Table {
    let mut meta = Map::new();
    let names: Vec<&str> = if suites.is_empty() { Suite::ALL.iter() } else { suites.iter() }.map(|s| s.name()).collect();
    meta.insert("suites".into(), json!(names));
    meta.insert("tolerance".into(), opts.tolerance.map_or(serde_json::Value::Null, |t| json!(t)));
    meta.insert("seed".into(), json!(opts.seed));
    meta.insert("checks".into(), json!(report.checks.len()));
    meta.insert("failures".into(), json!(report.failures().count()));
    let mut table = Table::new(meta, vec!["suite", "check", "observed", "bound", "threshold", "status"]);
    for c in &report.checks {
        table.push(vec![
            Cell::Text(c.suite.name().into()),
            Cell::Text(c.name.clone()),
            Cell::Float(c.observed),
            Cell::Text(bound_name(c.bound).into()),
            Cell::Float(c.threshold),
            Cell::Text(if c.passed { "pass" } else { "fail" }.into()),
        ]);
    }
    table
}
