// SPDX-License-Identifier: Apache-2.0

pub mod condition_table;
pub mod kr_compare;
pub mod near_intersection;
pub mod quadrature_svg;
pub mod quadrature_table;
pub mod torus_drag;

use crate::config::{CompareMode, Comparison, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::output::Sink;
use slenderflow_core::bvp::{assemble, centerline_velocity, solve, ForceDensity, ProblemSpec, Solution};
use slenderflow_core::geometry::{reparameterize, DEFAULT_FRAME_TOL};
use slenderflow_core::sbt::{compare_profiles, convergence_rate, KrProblem, ProfileNorm};
use slenderflow_core::{Builtin, Centerline, FiberSurface, FrameField, ReparamMode, Vec3};
use std::path::PathBuf;

/// Files written by a command and any fixture tolerance violations.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub violations: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    TorusDrag,
    QuadratureTable,
    KrCompare,
    NearIntersection,
    ConditionTable,
    QuadratureSvg,
}

impl Command {
    /// Checks everything that can be checked without heavy computation.
    pub fn validate(self, cfg: &ExperimentConfig) -> CliResult<()> {
        match self {
            Command::TorusDrag => torus_drag::validate(cfg),
            Command::QuadratureTable => quadrature_table::validate(cfg),
            Command::KrCompare => kr_compare::validate(cfg),
            Command::NearIntersection => near_intersection::validate(cfg),
            Command::ConditionTable => condition_table::validate(cfg),
            Command::QuadratureSvg => quadrature_svg::validate(cfg),
        }
    }

    pub fn run(self, cfg: &ExperimentConfig, sink: &Sink) -> CliResult<Outcome> {
        self.validate(cfg)?;
        match self {
            Command::TorusDrag => torus_drag::run(cfg, sink),
            Command::QuadratureTable => quadrature_table::run(cfg, sink),
            Command::KrCompare => kr_compare::run(cfg, sink),
            Command::NearIntersection => near_intersection::run(cfg, sink),
            Command::ConditionTable => condition_table::run(cfg, sink),
            Command::QuadratureSvg => quadrature_svg::run(cfg, sink),
        }
    }
}

/// The configured curve (or `default`), optionally rescaled to unit length.
pub fn load_curve(cfg: &ExperimentConfig, default: Option<Builtin>, reparam_default: bool) -> CliResult<Centerline> {
    let builtin = cfg
        .builtin()?
        .or(default)
        .ok_or_else(|| crate::config::field("curve", "required by this command"))?;
    let curve = Centerline::builtin(&builtin).map_err(CliError::solver(format!("curve {builtin}")))?;
    if cfg.reparameterize.unwrap_or(reparam_default) {
        reparameterize(&curve, ReparamMode::UnitLength).map_err(CliError::solver(format!("reparameterizing {builtin}")))
    } else {
        Ok(curve)
    }
}

/// Solves the mobility problem and samples c on an m-point grid.
pub fn solver_profile(
    curve: &Centerline,
    force: &ForceDensity,
    eps: f64,
    (ns, nt, qn): (usize, usize, usize),
    m: usize,
) -> slenderflow_core::Result<(Vec<Vec3>, Solution)> {
    let frame = FrameField::bishop(curve, DEFAULT_FRAME_TOL)?;
    let surface = FiberSurface::new(frame, eps)?;
    let p = ProblemSpec::new(surface, force.clone(), ns, nt, qn)?;
    let sol = solve(&assemble(&p)?)?;
    Ok((centerline_velocity(&sol, m)?, sol))
}

/// Solver and slender-body profiles on a common grid at one radius.
#[derive(Clone, Debug)]
pub struct ProfilePair {
    pub epsilon: f64,
    pub solver: Vec<Vec3>,
    pub kr: Vec<Vec3>,
    /// Condition number of the discrete system; absent in self-check mode.
    pub condition: Option<f64>,
}

impl ProfilePair {
    /// |c − u_KR| / max |u_KR| at every grid point.
    pub fn pointwise(&self) -> Vec<f64> {
        let scale = self.kr.iter().map(|v| v.norm()).fold(0.0, f64::max);
        self.solver.iter().zip(&self.kr).map(|(a, b)| (a - b).norm() / scale).collect()
    }

    /// Relative discrepancy in the 1-, 2- and ∞-norms.
    pub fn norms(&self) -> slenderflow_core::Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for (slot, norm) in out.iter_mut().zip(ProfileNorm::ALL) {
            *slot = compare_profiles(&self.solver, &self.kr, norm)?;
        }
        Ok(out)
    }
}

/// Runs one comparison. The slender-body profile is driven by −f, the force
/// the fiber exerts on the fluid.
pub fn profile_pair(
    curve: &Centerline,
    force: &ForceDensity,
    eps: f64,
    disc: (usize, usize, usize),
    cmp: &Comparison,
) -> slenderflow_core::Result<ProfilePair> {
    let kr = KrProblem::new(curve.clone(), force.scaled(-1.0), eps)?
        .with_local_term(cmp.local_term)
        .profile(cmp.grid);
    let (solver, condition) = match cmp.mode {
        CompareMode::SelfCheck => (kr.clone(), None),
        CompareMode::Solver => {
            let (c, sol) = solver_profile(curve, force, eps, disc, cmp.grid)?;
            (c, Some(sol.condition_number))
        }
    };
    Ok(ProfilePair {
        epsilon: eps,
        solver,
        kr,
        condition,
    })
}

/// Fitted rate per norm over the three smallest radii, when there are three.
pub fn slopes(eps: &[f64], norms: &[[f64; 3]]) -> Option<[f64; 3]> {
    if eps.len() < 3 {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let d: Vec<f64> = norms.iter().map(|n| n[k]).collect();
        *slot = convergence_rate(eps, &d).ok()?;
    }
    Some(out)
}

/// Messages for fitted rates outside the configured range.
pub fn slope_violations(label: &str, slopes: Option<[f64; 3]>, expected: Option<[f64; 2]>) -> Vec<String> {
    let (Some(s), Some([lo, hi])) = (slopes, expected) else {
        return vec![];
    };
    ProfileNorm::ALL
        .iter()
        .zip(s)
        .filter(|(_, v)| !(lo..=hi).contains(v))
        .map(|(n, v)| format!("{label}: {n:?}-norm rate {v:.4} outside [{lo}, {hi}]"))
        .collect()
}
