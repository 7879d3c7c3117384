// SPDX-License-Identifier: Apache-2.0

//! Node layout of the singular surface rule around one source point.

use super::{load_curve, Outcome};
use crate::config::{field, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Plot, Series, Sink};
use slenderflow_core::quadrature::QuadratureRule;
use slenderflow_core::Builtin;
use std::f64::consts::{PI, TAU};

pub const DEFAULT_QN: usize = 9;
pub const DEFAULT_EPSILON: f64 = 5e-2;

fn epsilon(cfg: &ExperimentConfig) -> CliResult<f64> {
    match cfg.epsilon.as_slice() {
        [] => Ok(DEFAULT_EPSILON),
        [e] => Ok(*e),
        _ => Err(field("epsilon", "this command takes a single value")),
    }
}

pub fn validate(cfg: &ExperimentConfig) -> CliResult<()> {
    epsilon(cfg)?;
    cfg.single("qn", &cfg.discretization.qn, DEFAULT_QN)?;
    Ok(())
}

pub fn build(cfg: &ExperimentConfig) -> CliResult<QuadratureRule> {
    let eps = epsilon(cfg)?;
    let qn = cfg.single("qn", &cfg.discretization.qn, DEFAULT_QN)?;
    let curve = load_curve(cfg, Some(Builtin::Hairtie { h: 0.9 }), false)?;
    let (s, theta) = cfg.source.map_or((PI / 3.0, 0.0), |p| (p.s, p.theta));
    QuadratureRule::for_centerline(&curve, eps, s, theta, qn)
        .map_err(CliError::solver(format!("epsilon = {eps}, q_n = {qn}")))
}

pub fn plot(rule: &QuadratureRule) -> Plot {
    let points = rule
        .nodes()
        .map(|(s, theta, _)| (s.rem_euclid(TAU), theta.rem_euclid(TAU)))
        .collect();
    let (s, theta) = rule.source();
    Plot {
        title: format!("quadrature nodes, q_n = {}, {} nodes", rule.qn(), rule.node_count()),
        x_label: "s".into(),
        y_label: "theta".into(),
        log_x: false,
        log_y: false,
        series: vec![
            Series {
                label: "nodes".into(),
                points,
                scatter: true,
            },
            Series {
                label: "source".into(),
                points: vec![(s.rem_euclid(TAU), theta.rem_euclid(TAU))],
                scatter: true,
            },
        ],
    }
}

pub fn run(cfg: &ExperimentConfig, sink: &Sink) -> CliResult<Outcome> {
    let rule = build(cfg)?;
    let mut csv = Vec::new();
    rule.write_csv(&mut csv)?;
    let nodes = sink.text("_nodes.csv", &String::from_utf8_lossy(&csv))?;
    let svg = sink.text(".svg", &plot(&rule).to_svg())?;
    Ok(Outcome {
        files: vec![nodes, svg],
        violations: vec![],
    })
}
