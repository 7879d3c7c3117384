// SPDX-License-Identifier: Apache-2.0

//! Axial drag of a torus against the tabulated exact values.

use super::Outcome;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::fixtures::{self, same};
use crate::output::{sci, sci_opt, Sink, Table};
use rayon::prelude::*;
use serde::Serialize;
use slenderflow_core::bvp::drag_coefficient;

pub const DEFAULT_DISCRETIZATION: (usize, usize, usize) = (21, 13, 35);

#[derive(Clone, Debug, Serialize)]
pub struct DragRow {
    pub inverse_epsilon: f64,
    pub computed: f64,
    pub reference: Option<f64>,
    pub relative_error: Option<f64>,
    pub tolerance: Option<f64>,
    pub condition_number: f64,
    pub quadrature_nodes: usize,
}

impl DragRow {
    pub fn passes(&self) -> bool {
        match (self.relative_error, self.tolerance) {
            (Some(e), Some(t)) => e <= t,
            _ => true,
        }
    }
}

/// Allowed relative error against the exact drag.
pub fn tolerance(inverse_epsilon: f64) -> f64 {
    if inverse_epsilon <= 100.0 {
        1e-4
    } else {
        1e-3
    }
}

pub fn validate(cfg: &ExperimentConfig) -> CliResult<()> {
    discretization(cfg).map(|_| ())
}

fn discretization(cfg: &ExperimentConfig) -> CliResult<(usize, usize, usize)> {
    let d = &cfg.discretization;
    let (ns, nt, qn) = DEFAULT_DISCRETIZATION;
    Ok((cfg.single("ns", &d.ns, ns)?, cfg.single("ntheta", &d.ntheta, nt)?, cfg.single("qn", &d.qn, qn)?))
}

pub fn compute(cfg: &ExperimentConfig) -> CliResult<Vec<DragRow>> {
    let (ns, nt, qn) = discretization(cfg)?;
    let table = fixtures::torus_drag()?;
    cfg.inverse_epsilon
        .par_iter()
        .map(|&inv| {
            let r = drag_coefficient(1.0 / inv, ns, nt, qn).map_err(CliError::solver(format!("1/epsilon = {inv}")))?;
            let reference = table.iter().find(|row| same(row.inverse_epsilon, inv)).map(|row| row.exact);
            Ok(DragRow {
                inverse_epsilon: inv,
                computed: r.coefficient,
                reference,
                relative_error: reference.map(|x| (r.coefficient - x).abs() / x),
                tolerance: reference.map(|_| tolerance(inv)),
                condition_number: r.condition_number,
                quadrature_nodes: r.quadrature_nodes,
            })
        })
        .collect()
}

pub fn table(rows: &[DragRow]) -> Table {
    let mut t = Table::new(&[
        "inverse_epsilon",
        "drag_computed",
        "drag_reference",
        "relative_error",
        "condition_number",
        "quadrature_nodes",
    ]);
    for r in rows {
        t.push(vec![
            sci(r.inverse_epsilon),
            sci(r.computed),
            sci_opt(r.reference),
            sci_opt(r.relative_error),
            sci(r.condition_number),
            r.quadrature_nodes.to_string(),
        ]);
    }
    t
}

pub fn run(cfg: &ExperimentConfig, sink: &Sink) -> CliResult<Outcome> {
    let rows = compute(cfg)?;
    let violations = rows
        .iter()
        .filter(|r| !r.passes())
        .map(|r| {
            format!(
                "torus drag at 1/epsilon = {}: relative error {:e} exceeds {:e}",
                r.inverse_epsilon,
                r.relative_error.unwrap_or(f64::NAN),
                r.tolerance.unwrap_or(f64::NAN)
            )
        })
        .collect();
    Ok(Outcome {
        files: vec![sink.csv(".csv", &table(&rows))?],
        violations,
    })
}
