// SPDX-License-Identifier: Apache-2.0

//! Model surface integrals on the H = 0.9 tube over (ε, q_n).

use super::Outcome;
use crate::config::{field, Discretization, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::fixtures::{self, same};
use crate::output::{sci, sci_opt, Sink, Table};
use rayon::prelude::*;
use serde::Serialize;
use slenderflow_core::quadrature::{hairtie_test_surface, model_integrals};
use slenderflow_core::{check_clearance, Builtin};
use std::f64::consts::PI;

pub const DEFAULT_EPSILON: [f64; 4] = [5e-2, 5e-3, 5e-4, 5e-5];
pub const DEFAULT_QN: [usize; 8] = [9, 13, 18, 24, 31, 39, 48, 58];

#[derive(Clone, Debug, Serialize)]
pub struct QuadratureRow {
    pub epsilon: f64,
    pub qn: usize,
    pub nodes: usize,
    pub values: [f64; 3],
    pub reference: Option<[f64; 3]>,
    /// Relative deviation from the reference per integral.
    pub deviation: Option<[f64; 3]>,
    /// Tolerance per integral where one applies.
    pub tolerance: [Option<f64>; 3],
}

impl QuadratureRow {
    pub fn violations(&self) -> Vec<String> {
        let names = ["I_1/r", "I_SL", "I_DL"];
        let Some(dev) = self.deviation else { return vec![] };
        (0..3)
            .filter_map(|k| {
                let tol = self.tolerance[k]?;
                (!(dev[k] <= tol)).then(|| {
                    format!(
                        "{} at epsilon = {:e}, q_n = {}: deviation {:e} exceeds {:e}",
                        names[k], self.epsilon, self.qn, dev[k], tol
                    )
                })
            })
            .collect()
    }
}

/// Tolerances (I_1/r, I_SL, I_DL) enforced against the published values.
pub fn tolerances(eps: f64, qn: usize) -> [Option<f64>; 3] {
    let layer = qn >= 31 && eps >= 5e-4 * (1.0 - 1e-12);
    [
        (qn >= 24).then_some(1e-10),
        layer.then_some(1e-7),
        layer.then_some(1e-4),
    ]
}

fn grid(cfg: &ExperimentConfig) -> (Vec<f64>, Vec<usize>) {
    let eps = if cfg.epsilon.is_empty() { DEFAULT_EPSILON.to_vec() } else { cfg.epsilon.clone() };
    let qn = Discretization::list(&cfg.discretization.qn, &DEFAULT_QN);
    (eps, qn)
}

/// Smallest distance between the near-approach points of the test curve.
fn test_surface_gap() -> f64 {
    let curve = Builtin::Hairtie { h: 0.9 };
    let p = Builtin::hairtie_approach_points().map(|s| curve.point(s));
    (p[0] - p[1]).norm().min((p[1] - p[2]).norm()).min((p[0] - p[2]).norm())
}

pub fn validate(cfg: &ExperimentConfig) -> CliResult<()> {
    let gap = test_surface_gap();
    for (i, &e) in cfg.epsilon.iter().enumerate() {
        check_clearance(e, gap).map_err(|err| field(&format!("epsilon[{i}]"), &err.to_string()))?;
    }
    Ok(())
}

/// Runs every (ε, q_n) cell; an empty list yields no rows.
pub fn compute_grid(eps: &[f64], qns: &[usize]) -> CliResult<Vec<QuadratureRow>> {
    let table = fixtures::quadrature()?;
    let cells: Vec<(f64, usize)> = eps.iter().flat_map(|&e| qns.iter().map(move |&q| (e, q))).collect();
    cells
        .par_iter()
        .map(|&(e, q)| {
            let context = format!("epsilon = {e}, q_n = {q}");
            let surf = hairtie_test_surface(e).map_err(CliError::solver(context.clone()))?;
            let m = model_integrals(&surf, PI / 3.0, 0.0, q).map_err(CliError::solver(context))?;
            let values = [m.inverse_distance, m.single_layer, m.double_layer];
            let reference = table
                .iter()
                .find(|r| same(r.epsilon, e) && r.q_n == q)
                .map(|r| [r.inverse_distance, r.single_layer, r.double_layer]);
            Ok(QuadratureRow {
                epsilon: e,
                qn: q,
                nodes: m.nodes,
                values,
                reference,
                deviation: reference.map(|r| std::array::from_fn(|k| (values[k] - r[k]).abs() / r[k].abs())),
                tolerance: tolerances(e, q),
            })
        })
        .collect()
}

pub fn compute(cfg: &ExperimentConfig) -> CliResult<Vec<QuadratureRow>> {
    let (eps, qn) = grid(cfg);
    compute_grid(&eps, &qn)
}

pub fn table(rows: &[QuadratureRow]) -> Table {
    let mut t = Table::new(&[
        "epsilon",
        "q_n",
        "nodes",
        "inverse_distance",
        "single_layer",
        "double_layer",
        "deviation_inverse_distance",
        "deviation_single_layer",
        "deviation_double_layer",
    ]);
    for r in rows {
        let dev = |k: usize| sci_opt(r.deviation.map(|d| d[k]));
        t.push(vec![
            sci(r.epsilon),
            r.qn.to_string(),
            r.nodes.to_string(),
            sci(r.values[0]),
            sci(r.values[1]),
            sci(r.values[2]),
            dev(0),
            dev(1),
            dev(2),
        ]);
    }
    t
}

pub fn run(cfg: &ExperimentConfig, sink: &Sink) -> CliResult<Outcome> {
    let rows = compute(cfg)?;
    Ok(Outcome {
        files: vec![sink.csv(".csv", &table(&rows))?],
        violations: rows.iter().flat_map(|r| r.violations()).collect(),
    })
}
