// SPDX-License-Identifier: Apache-2.0

use super::assemble::{assemble, IndexMap};
use super::problem::{ForceDensity, ProblemSpec};
use super::solve::{solve, Solution};
use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::geometry::{Builtin, Centerline, FiberSurface, FrameEval, FrameField, Section, DEFAULT_FRAME_TOL};
use crate::Vec3;
use faer::c64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::io::Write;

/// Trigonometric interpolation of the centerline velocity to `m`
/// equispaced points.
pub fn centerline_velocity(sol: &Solution, m: usize) -> Result<Vec<Vec3>> {
    let ns = sol.index.ns;
    if m < ns {
        return Err(Error::InvalidData(format!("need at least {ns} output samples, got {m}")));
    }
    let samples = sol.velocity_samples();
    if m == ns {
        return Ok(samples);
    }
    let raw: Vec<[f64; 3]> = samples.iter().map(|v| [v.x, v.y, v.z]).collect();
    let series = FourierSeries::from_samples(&raw);
    Ok((0..m).map(|j| Vec3::from(series.eval(TAU * j as f64 / m as f64))).collect())
}

/// Velocity of the completed single layer split into its two parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LayerVelocity {
    pub single_layer: Vec3,
    pub point_source: Vec3,
}

impl LayerVelocity {
    pub fn total(&self) -> Vec3 {
        self.single_layer + self.point_source
    }
}

/// Distance from `x` to the fiber surface, from a sampled search refined by
/// golden section.
pub fn surface_distance<F: FrameEval>(surface: &FiberSurface<F>, x: &Vec3) -> f64 {
    let curve = surface.centerline();
    let n = 1024.max(8 * curve.mode_count());
    let d = |s: f64| (x - curve.point(s)).norm();
    let h = TAU / n as f64;
    let best = (0..n)
        .map(|j| h * j as f64)
        .min_by(|a, b| d(*a).total_cmp(&d(*b)))
        .expect("samples");
    let (mut a, mut b) = (best - h, best + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-12 {
        let (c, e) = (b - g * (b - a), a + g * (b - a));
        if d(c) < d(e) {
            b = e;
        } else {
            a = c;
        }
    }
    d(0.5 * (a + b)) - surface.radius()
}

/// Odd trapezoid grid sizes resolving the integrand at surface distance `d`.
fn grid_for<F: FrameEval>(surface: &FiberSurface<F>, d: f64) -> (usize, usize) {
    let curve = surface.centerline();
    let vmax = (0..256)
        .map(|j| curve.speed(TAU * j as f64 / 256.0))
        .fold(0.0, f64::max);
    let odd = |x: f64, lo: usize| ((x.ceil() as usize).max(lo)) | 1;
    (odd(40.0 * vmax / d, 64), odd(40.0 * surface.radius() / d, 32))
}

fn layer_velocity_on_grid<F: FrameEval>(
    surface: &FiberSurface<F>,
    x: &Vec3,
    (ns, nt): (usize, usize),
    density: impl Fn(usize, usize, &Section, f64) -> Vec3,
) -> LayerVelocity {
    let radius = surface.radius();
    let w = (TAU / ns as f64) * (TAU / nt as f64);
    let mut single = Vec3::zeros();
    let mut source = Vec3::zeros();
    for a in 0..ns {
        let sec = surface.section(TAU * a as f64 / ns as f64);
        let mut flux = 0.0;
        for b in 0..nt {
            let theta = TAU * b as f64 / nt as f64;
            let y = sec.surface_point(radius, theta);
            let nu = sec.surface_normal(theta);
            let wj = w * sec.jacobian(radius, theta);
            let rho = density(a, b, &sec, theta);
            let r = x - y;
            let d = r.norm();
            single += (rho / d + r * (r.dot(&rho) / (d * d * d))) * wj;
            flux += rho.dot(&nu) * wj;
        }
        let big_r = x - sec.point;
        source += big_r * (flux / big_r.norm().powi(3));
    }
    LayerVelocity {
        single_layer: single / (8.0 * PI),
        point_source: source / (4.0 * PI),
    }
}

/// Completed single-layer velocity at an exterior point for a real density
/// ρ(section, θ). Requires the point to be at least one radius away from
/// the surface.
pub fn layer_velocity<F: FrameEval>(
    surface: &FiberSurface<F>,
    x: &Vec3,
    density: impl Fn(&Section, f64) -> Vec3,
) -> Result<LayerVelocity> {
    let d = surface_distance(surface, x);
    if !(d >= surface.radius()) {
        return Err(Error::TooCloseToSurface {
            distance: d,
            radius: surface.radius(),
        });
    }
    let grid = grid_for(surface, d);
    Ok(layer_velocity_on_grid(surface, x, grid, |_, _, sec, theta| density(sec, theta)))
}

/// Fluid velocity at an exterior point from a solved problem.
pub fn field_velocity<F: FrameEval>(sol: &Solution, p: &ProblemSpec<F>, x: &Vec3) -> Result<Vec3> {
    let d = surface_distance(&p.surface, x);
    if !(d >= p.surface.radius()) {
        return Err(Error::TooCloseToSurface {
            distance: d,
            radius: p.surface.radius(),
        });
    }
    let (gs, gt) = grid_for(&p.surface, d);
    let table = density_table(sol, gs, gt);
    let v = layer_velocity_on_grid(&p.surface, x, (gs, gt), |a, b, _, _| table[a * gt + b]);
    Ok(v.total())
}

/// Real part of ρ on a tensor grid, by separable sums.
fn density_table(sol: &Solution, gs: usize, gt: usize) -> Vec<Vec3> {
    let (ns, nt) = (sol.index.ns, sol.index.ntheta);
    // partial[b][l][a] = Σ_kθ α e^{i kθ θ_b}
    let mut partial = vec![[c64::new(0.0, 0.0); 3]; gt * ns];
    for b in 0..gt {
        let theta = TAU * b as f64 / gt as f64;
        for a in 0..ns {
            for kb in 0..nt {
                let kt = IndexMap::mode(nt, kb);
                let e = c64::from_polar(1.0, kt as f64 * theta);
                for l in 0..3 {
                    let col = sol.index.density_column(l, IndexMap::mode(ns, a), kt).expect("mode in range");
                    partial[b * ns + a][l] += sol.alpha[col] * e;
                }
            }
        }
    }
    let mut out = vec![Vec3::zeros(); gs * gt];
    for i in 0..gs {
        let s = TAU * i as f64 / gs as f64;
        let e: Vec<c64> = (0..ns).map(|a| c64::from_polar(1.0, IndexMap::mode(ns, a) as f64 * s)).collect();
        for b in 0..gt {
            let mut v = Vec3::zeros();
            for (a, ea) in e.iter().enumerate() {
                for l in 0..3 {
                    v[l] += (partial[b * ns + a][l] * ea).re;
                }
            }
            out[i * gt + b] = v;
        }
    }
    out
}

/// Torus mobility result.
#[derive(Clone, Debug, Serialize)]
pub struct DragResult {
    pub radius: f64,
    /// F / (6πμU(1+ε)).
    pub coefficient: f64,
    /// Axial translation speed per unit applied force density.
    pub velocity: f64,
    pub condition_number: f64,
    pub quadrature_nodes: usize,
}

/// Nondimensional drag of a unit-radius torus of tube radius `eps` pulled
/// along its axis.
///
/// The prescribed f is the traction the fluid exerts on the fiber, so the
/// applied force is −∮ f |γ'| ds and the fiber moves along −f.
pub fn drag_coefficient(eps: f64, ns: usize, ntheta: usize, qn: usize) -> Result<DragResult> {
    let curve = Centerline::builtin(&Builtin::Circle { radius: 1.0 })?;
    let frame = FrameField::bishop(&curve, DEFAULT_FRAME_TOL)?;
    let surface = FiberSurface::new(frame, eps)?;
    let p = ProblemSpec::new(surface, ForceDensity::uniform(-Vec3::z()), ns, ntheta, qn)?;
    let sys = assemble(&p)?;
    let sol = solve(&sys)?;
    let u = sol.velocity_samples().iter().map(|c| c.z).sum::<f64>() / ns as f64;
    let force = TAU;
    Ok(DragResult {
        radius: eps,
        coefficient: force / (6.0 * PI * u * (1.0 + eps)),
        velocity: u,
        condition_number: sol.condition_number,
        quadrature_nodes: sys.rule_nodes[0],
    })
}

/// CSV with columns j_s, s, c_x, c_y, c_z.
pub fn write_velocity_csv(sol: &Solution, out: impl Write) -> Result<()> {
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["j_s", "s", "c_x", "c_y", "c_z"]).map_err(ser)?;
    let ns = sol.index.ns;
    for (js, c) in sol.velocity_samples().iter().enumerate() {
        let s = TAU * js as f64 / ns as f64;
        w.write_record([
            js.to_string(),
            format!("{s:.17e}"),
            format!("{:.17e}", c.x),
            format!("{:.17e}", c.y),
            format!("{:.17e}", c.z),
        ])
        .map_err(ser)?;
    }
    w.flush().map_err(|e| Error::Serialization(e.to_string()))
}

/// JSON sidecar for an exported solution.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionSummary {
    pub ns: usize,
    pub ntheta: usize,
    pub qn: usize,
    pub radius: f64,
    pub force: String,
    pub condition_number: f64,
    pub rank: usize,
    pub relative_residual: f64,
    pub singular_values: Vec<f64>,
}

impl SolutionSummary {
    pub fn new<F: FrameEval>(sol: &Solution, p: &ProblemSpec<F>) -> Self {
        Self {
            ns: p.ns,
            ntheta: p.ntheta,
            qn: p.qn,
            radius: p.surface.radius(),
            force: p.force.label().to_string(),
            condition_number: sol.condition_number,
            rank: sol.rank,
            relative_residual: sol.relative_residual,
            singular_values: sol.singular_values.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }
}
