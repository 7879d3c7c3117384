// SPDX-License-Identifier: Apache-2.0

//! Slender-body discrepancy on hairtie curves approaching self-intersection.

use super::{profile_pair, slope_violations, slopes, Outcome};
use crate::config::{field, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::fixtures;
use crate::output::{sci, sci_opt, Plot, Series, Sink, Table};
use serde::Serialize;
use slenderflow_core::geometry::{hairtie_gap, reparameterize, sigma_and_gap};
use slenderflow_core::{check_clearance, Builtin, Centerline, Forcing, ReparamMode};
use std::f64::consts::TAU;

pub const DEFAULT_DISCRETIZATION: (usize, usize, usize) = (121, 5, 20);
/// Allowed deviation of the computed gap and σ from the published geometry.
pub const GEOMETRY_TOLERANCE: f64 = 1e-5;

/// One planned solve.
#[derive(Clone, Debug)]
struct Plan {
    h: f64,
    epsilon: f64,
    curve: Centerline,
    gap: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Peak {
    pub s: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub h: f64,
    pub epsilon: f64,
    pub gap: f64,
    pub sigma: f64,
    pub published_gap: Option<f64>,
    pub published_sigma: Option<f64>,
    /// Relative discrepancy in the 1-, 2- and ∞-norms.
    pub discrepancy: [f64; 3],
    pub condition: Option<f64>,
    /// Largest local maxima of the pointwise discrepancy, largest first.
    pub peaks: Vec<Peak>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NearReport {
    pub ratio: Option<f64>,
    pub ns: usize,
    pub ntheta: usize,
    pub qn: usize,
    pub grid: usize,
    pub runs: Vec<RunSummary>,
    /// Pointwise |c − u_KR| / max |u_KR| per run.
    #[serde(skip)]
    pub pointwise: Vec<Vec<f64>>,
    pub slopes: Option<[f64; 3]>,
}

/// The `k` largest strict local maxima of a periodic sequence sampled at
/// s_j = 2πj/n.
pub fn peaks(values: &[f64], k: usize) -> Vec<Peak> {
    let n = values.len();
    let mut out: Vec<Peak> = (0..n)
        .filter(|&j| {
            let (prev, next) = (values[(j + n - 1) % n], values[(j + 1) % n]);
            values[j] > prev && values[j] >= next
        })
        .map(|j| Peak {
            s: TAU * j as f64 / n as f64,
            value: values[j],
        })
        .collect();
    out.sort_by(|a, b| b.value.total_cmp(&a.value));
    out.truncate(k);
    out
}

fn discretization(cfg: &ExperimentConfig) -> CliResult<(usize, usize, usize)> {
    let d = &cfg.discretization;
    let (ns, nt, qn) = DEFAULT_DISCRETIZATION;
    Ok((cfg.single("ns", &d.ns, ns)?, cfg.single("ntheta", &d.ntheta, nt)?, cfg.single("qn", &d.qn, qn)?))
}

fn unit_hairtie(h: f64) -> CliResult<Centerline> {
    let raw = Centerline::builtin(&Builtin::Hairtie { h }).map_err(CliError::solver(format!("hairtie H = {h}")))?;
    reparameterize(&raw, ReparamMode::UnitLength).map_err(CliError::solver(format!("reparameterizing hairtie H = {h}")))
}

/// Every (H, ε) pair, with clearance checked before any solve.
fn plan(cfg: &ExperimentConfig) -> CliResult<Vec<Plan>> {
    let family = cfg.hairtie.as_ref().ok_or_else(|| field("hairtie", "required by this command"))?;
    if cfg.curve.is_some() {
        return Err(field("curve", "not used; the curves come from `hairtie.h`"));
    }
    let mut out = Vec::new();
    match family.ratio {
        Some(ratio) => {
            if !cfg.epsilon.is_empty() {
                return Err(field("epsilon", "must be empty when `hairtie.ratio` sets the radii"));
            }
            for (i, &h) in family.h.iter().enumerate() {
                let curve = unit_hairtie(h)?;
                let gap = hairtie_gap(&curve);
                let epsilon = ratio * gap;
                check_clearance(epsilon, gap).map_err(|e| field(&format!("hairtie.h[{i}]"), &e.to_string()))?;
                out.push(Plan { h, epsilon, curve, gap });
            }
        }
        None => {
            let &[h] = family.h.as_slice() else {
                return Err(field("hairtie.h", "a fixed-curve run takes exactly one H"));
            };
            let curve = unit_hairtie(h)?;
            let gap = hairtie_gap(&curve);
            for (i, &epsilon) in cfg.epsilon.iter().enumerate() {
                check_clearance(epsilon, gap).map_err(|e| field(&format!("epsilon[{i}]"), &e.to_string()))?;
                out.push(Plan {
                    h,
                    epsilon,
                    curve: curve.clone(),
                    gap,
                });
            }
        }
    }
    Ok(out)
}

pub fn validate(cfg: &ExperimentConfig) -> CliResult<()> {
    discretization(cfg)?;
    plan(cfg).map(|_| ())
}

pub fn compute(cfg: &ExperimentConfig) -> CliResult<NearReport> {
    let disc = discretization(cfg)?;
    let plans = plan(cfg)?;
    let force = cfg.forcing.clone().unwrap_or(Forcing::Hairtie {}).density();
    let published = fixtures::hairtie_geometry()?;
    let mut runs = Vec::with_capacity(plans.len());
    let mut pointwise = Vec::with_capacity(plans.len());
    for p in &plans {
        let context = format!("hairtie H = {}, epsilon = {:e}", p.h, p.epsilon);
        let sigma = sigma_and_gap(&p.curve).map_err(CliError::solver(context.clone()))?;
        let pair =
            profile_pair(&p.curve, &force, p.epsilon, disc, &cfg.comparison).map_err(CliError::solver(context.clone()))?;
        let values = pair.pointwise();
        let reference = published.iter().find(|r| fixtures::same(r.h, p.h));
        runs.push(RunSummary {
            h: p.h,
            epsilon: p.epsilon,
            gap: p.gap,
            sigma: sigma.sigma,
            published_gap: reference.map(|r| r.gap),
            published_sigma: reference.map(|r| r.sigma),
            discrepancy: pair.norms().map_err(CliError::solver(context))?,
            condition: pair.condition,
            peaks: peaks(&values, 3),
        });
        pointwise.push(values);
    }
    let eps: Vec<f64> = runs.iter().map(|r| r.epsilon).collect();
    let norms: Vec<[f64; 3]> = runs.iter().map(|r| r.discrepancy).collect();
    Ok(NearReport {
        ratio: cfg.hairtie.as_ref().and_then(|f| f.ratio),
        ns: disc.0,
        ntheta: disc.1,
        qn: disc.2,
        grid: cfg.comparison.grid,
        slopes: slopes(&eps, &norms),
        runs,
        pointwise,
    })
}

pub fn summary_table(report: &NearReport) -> Table {
    let mut t = Table::new(&["h", "epsilon", "gap", "sigma", "d_1", "d_2", "d_inf", "condition_number"]);
    for r in &report.runs {
        t.push(vec![
            sci(r.h),
            sci(r.epsilon),
            sci(r.gap),
            sci(r.sigma),
            sci(r.discrepancy[0]),
            sci(r.discrepancy[1]),
            sci(r.discrepancy[2]),
            sci_opt(r.condition),
        ]);
    }
    t
}

pub fn pointwise_table(report: &NearReport) -> Table {
    let mut t = Table::new(&["run", "h", "epsilon", "j", "s", "discrepancy"]);
    for (k, (r, values)) in report.runs.iter().zip(&report.pointwise).enumerate() {
        for (j, v) in values.iter().enumerate() {
            t.push(vec![
                k.to_string(),
                sci(r.h),
                sci(r.epsilon),
                j.to_string(),
                sci(TAU * j as f64 / values.len() as f64),
                sci(*v),
            ]);
        }
    }
    t
}

pub fn plot(report: &NearReport) -> Plot {
    Plot {
        title: "pointwise slender-body discrepancy".into(),
        x_label: "s".into(),
        y_label: "|c - u_KR| / max |u_KR|".into(),
        log_x: false,
        log_y: true,
        series: report
            .runs
            .iter()
            .zip(&report.pointwise)
            .map(|(r, values)| Series {
                label: format!("H = {}, epsilon = {:.3e}", r.h, r.epsilon),
                points: values
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| (TAU * j as f64 / values.len() as f64, v))
                    .collect(),
                scatter: false,
            })
            .collect(),
    }
}

/// Gap and σ that differ from the published geometry.
pub fn geometry_violations(report: &NearReport) -> Vec<String> {
    let mut out = Vec::new();
    for r in &report.runs {
        for (name, value, reference) in [("gap", r.gap, r.published_gap), ("sigma", r.sigma, r.published_sigma)] {
            if let Some(x) = reference {
                if !((value - x).abs() < GEOMETRY_TOLERANCE) {
                    out.push(format!("hairtie H = {}: {name} {value:.6e} vs published {x:.6e}", r.h));
                }
            }
        }
    }
    out
}

pub fn run(cfg: &ExperimentConfig, sink: &Sink) -> CliResult<Outcome> {
    let report = compute(cfg)?;
    let mut files = vec![
        sink.csv(".csv", &summary_table(&report))?,
        sink.csv("_pointwise.csv", &pointwise_table(&report))?,
        sink.json(".json", &report)?,
    ];
    if cfg.svg {
        files.push(sink.text(".svg", &plot(&report).to_svg())?);
    }
    let mut violations = geometry_violations(&report);
    violations.extend(slope_violations("hairtie family", report.slopes, cfg.comparison.expected_slope));
    Ok(Outcome { files, violations })
}
