// SPDX-License-Identifier: Apache-2.0

//! Solver centerline velocity against the slender-body profile as ε → 0.

use super::{load_curve, profile_pair, slope_violations, slopes, Outcome};
use crate::config::{field, CompareMode, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::output::{sci, sci_opt, Plot, Series, Sink, Table};
use serde::Serialize;
use slenderflow_core::geometry::check_unit_speed;
use slenderflow_core::sbt::LocalTerm;

pub const DEFAULT_DISCRETIZATION: (usize, usize, usize) = (41, 5, 30);

#[derive(Clone, Debug, Serialize)]
pub struct KrRow {
    pub epsilon: f64,
    /// Relative discrepancy in the 1-, 2- and ∞-norms.
    pub discrepancy: [f64; 3],
    pub condition: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KrReport {
    pub curve: String,
    pub forcing: String,
    pub mode: CompareMode,
    pub local_term: LocalTerm,
    pub ns: usize,
    pub ntheta: usize,
    pub qn: usize,
    pub grid: usize,
    pub rows: Vec<KrRow>,
    /// Rates in the 1-, 2- and ∞-norms; absent with fewer than three radii.
    pub slopes: Option<[f64; 3]>,
}

fn discretization(cfg: &ExperimentConfig) -> CliResult<(usize, usize, usize)> {
    let d = &cfg.discretization;
    let (ns, nt, qn) = DEFAULT_DISCRETIZATION;
    Ok((cfg.single("ns", &d.ns, ns)?, cfg.single("ntheta", &d.ntheta, nt)?, cfg.single("qn", &d.qn, qn)?))
}

pub fn validate(cfg: &ExperimentConfig) -> CliResult<()> {
    discretization(cfg)?;
    if cfg.forcing.is_none() {
        return Err(field("forcing", "required by this command"));
    }
    let curve = load_curve(cfg, None, true)?;
    check_unit_speed(&curve).map_err(|e| field("reparameterize", &e.to_string()))
}

pub fn compute(cfg: &ExperimentConfig) -> CliResult<KrReport> {
    let disc = discretization(cfg)?;
    let curve = load_curve(cfg, None, true)?;
    let forcing = cfg.forcing.clone().ok_or_else(|| field("forcing", "required by this command"))?;
    let force = forcing.density();
    let mut rows = Vec::with_capacity(cfg.epsilon.len());
    for &eps in &cfg.epsilon {
        let context = format!("epsilon = {eps}");
        let pair = profile_pair(&curve, &force, eps, disc, &cfg.comparison).map_err(CliError::solver(context.clone()))?;
        rows.push(KrRow {
            epsilon: eps,
            discrepancy: pair.norms().map_err(CliError::solver(context))?,
            condition: pair.condition,
        });
    }
    let eps: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    let norms: Vec<[f64; 3]> = rows.iter().map(|r| r.discrepancy).collect();
    // Identical profiles have no rate.
    let slopes = match cfg.comparison.mode {
        CompareMode::Solver => slopes(&eps, &norms),
        CompareMode::SelfCheck => None,
    };
    Ok(KrReport {
        curve: cfg.curve.clone().unwrap_or_default(),
        forcing: force.label().to_string(),
        mode: cfg.comparison.mode,
        local_term: cfg.comparison.local_term,
        ns: disc.0,
        ntheta: disc.1,
        qn: disc.2,
        grid: cfg.comparison.grid,
        rows,
        slopes,
    })
}

pub fn table(report: &KrReport) -> Table {
    let mut t = Table::new(&["epsilon", "d_1", "d_2", "d_inf", "condition_number"]);
    for r in &report.rows {
        t.push(vec![
            sci(r.epsilon),
            sci(r.discrepancy[0]),
            sci(r.discrepancy[1]),
            sci(r.discrepancy[2]),
            sci_opt(r.condition),
        ]);
    }
    t
}

pub fn plot(report: &KrReport) -> Plot {
    let labels = ["1-norm", "2-norm", "inf-norm"];
    Plot {
        title: format!("{} discrepancy", report.curve),
        x_label: "epsilon".into(),
        y_label: "relative discrepancy".into(),
        log_x: true,
        log_y: true,
        series: labels
            .iter()
            .enumerate()
            .map(|(k, l)| Series {
                label: l.to_string(),
                points: report.rows.iter().map(|r| (r.epsilon, r.discrepancy[k])).collect(),
                scatter: false,
            })
            .collect(),
    }
}

pub fn run(cfg: &ExperimentConfig, sink: &Sink) -> CliResult<Outcome> {
    let report = compute(cfg)?;
    let mut files = vec![sink.csv(".csv", &table(&report))?, sink.json(".json", &report)?];
    if cfg.svg {
        files.push(sink.text(".svg", &plot(&report).to_svg())?);
    }
    Ok(Outcome {
        files,
        violations: slope_violations(&report.curve, report.slopes, cfg.comparison.expected_slope),
    })
}
