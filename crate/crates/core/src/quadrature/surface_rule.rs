// SPDX-License-Identifier: Apache-2.0

//! Composite (s, θ) rules for integrands with a 1/r singularity at a point
//! of a thin tube.
//!
//! The parameter square is split into an inner region, where the centerline
//! is within `5ε` of the source cross-section, and an outer region. The
//! inner region is mapped to `[-1, 1]²` and covered by six Duffy triangles
//! meeting at the source. The outer region is a tensor product of a
//! trapezoid rule in θ and exponentially graded Gauss–Legendre panels in s.
//!
//! Weights are for the measure `ds dθ`; the surface area density is part of
//! the integrand.

use super::duffy::{apex_triangle, SQUARE_TRIANGLES};
use super::gauss::GaussLegendre;
use crate::error::{Error, Result};
use crate::geometry::{Centerline, FiberSurface, FrameEval};
use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

/// Inner region: centerline points within this multiple of ε of γ(s*).
pub const INNER_FACTOR: f64 = 5.0;
const EXTREMUM_GRID: usize = 512;
const CURVATURE_GRID: usize = 30;
const CURVATURE_THRESHOLD: f64 = 4.0;
const MARKER_MERGE: f64 = 1e-10;
const PANEL_SAMPLES: usize = 16;

/// One line of nodes along which only one coordinate varies.
#[derive(Clone, Debug, PartialEq)]
pub enum RuleLine {
    /// Fixed s; nodes are (θ − θ*, weight).
    ConstS { s: f64, nodes: Vec<(f64, f64)> },
    /// Fixed θ − θ*; nodes are (s, weight).
    ConstTheta { dtheta: f64, nodes: Vec<(f64, f64)> },
}

impl RuleLine {
    pub fn len(&self) -> usize {
        match self {
            RuleLine::ConstS { nodes, .. } | RuleLine::ConstTheta { nodes, .. } => nodes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Outer-region panel in s.
#[derive(Clone, Debug, PartialEq)]
pub struct Panel {
    pub s_left: f64,
    pub s_right: f64,
    pub h_left: f64,
    pub h_right: f64,
    pub nodes: usize,
}

/// Markers and panels of the outer region.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SubdivisionPlan {
    pub markers: Vec<f64>,
    pub panels: Vec<Panel>,
    /// Extrema of h that became markers.
    pub kept_extrema: Vec<f64>,
    /// Extrema of h rejected by the curvature test.
    pub dropped_extrema: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    source: (f64, f64),
    qn: usize,
    radius: f64,
    inner_interval: (f64, f64),
    inner: Vec<RuleLine>,
    outer_s: Vec<(f64, f64)>,
    outer_theta: Vec<(f64, f64)>,
    plan: SubdivisionPlan,
}

/// Values that can be accumulated by a quadrature rule.
pub trait Integrand: Copy {
    fn zero() -> Self;
    fn add_scaled(&mut self, w: f64, value: Self);
    fn is_finite(&self) -> bool;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add_scaled(&mut self, w: f64, value: Self) {
        *self += w * value;
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl<const N: usize> Integrand for [f64; N] {
    fn zero() -> Self {
        [0.0; N]
    }
    fn add_scaled(&mut self, w: f64, value: Self) {
        for (a, b) in self.iter_mut().zip(value) {
            *a += w * b;
        }
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

/// Distance from the source cross-section center, h(s) = |γ(s) − γ(s*)|.
struct Distance<'a> {
    curve: &'a Centerline,
    center: crate::Vec3,
}

impl Distance<'_> {
    fn at(&self, s: f64) -> f64 {
        (self.curve.point(s) - self.center).norm()
    }
}

impl QuadratureRule {
    /// Rule for the surface `surface` with source at (s*, θ*).
    pub fn build<F: FrameEval>(
        surface: &FiberSurface<F>,
        s_star: f64,
        theta_star: f64,
        qn: usize,
    ) -> Result<Self> {
        Self::for_centerline(surface.centerline(), surface.radius(), s_star, theta_star, qn)
    }

    /// Rule for a tube of radius `radius` around `curve`; only the centerline
    /// enters the construction.
    pub fn for_centerline(
        curve: &Centerline,
        radius: f64,
        s_star: f64,
        theta_star: f64,
        qn: usize,
    ) -> Result<Self> {
        if qn < 2 {
            return Err(Error::Quadrature(format!("q_n must be at least 2, got {qn}")));
        }
        if !(radius > 0.0) {
            return Err(Error::Quadrature(format!("radius must be positive, got {radius}")));
        }
        let dist = Distance {
            curve,
            center: curve.point(s_star),
        };
        let cutoff = INNER_FACTOR * radius;
        let (a_left, a_right) = inner_extent(&dist, s_star, cutoff, curve.speed(s_star))?;

        let mut inner = Vec::with_capacity(6 * qn);
        for (p, q) in SQUARE_TRIANGLES {
            let horizontal = p[1] == q[1];
            // Every triangle lies in one half of the square.
            let scale = if p[0] + q[0] < 0.0 { a_left } else { a_right };
            for line in apex_triangle(p, q, qn) {
                let w_scale = scale * PI;
                if horizontal {
                    let dtheta = PI * line.nodes[0].0[1];
                    inner.push(RuleLine::ConstTheta {
                        dtheta,
                        nodes: line
                            .nodes
                            .iter()
                            .map(|(pt, w)| (s_star + scale * pt[0], w * w_scale))
                            .collect(),
                    });
                } else {
                    let s = s_star + scale * line.nodes[0].0[0];
                    inner.push(RuleLine::ConstS {
                        s,
                        nodes: line
                            .nodes
                            .iter()
                            .map(|(pt, w)| (PI * pt[1], w * w_scale))
                            .collect(),
                    });
                }
            }
        }

        let s_a = s_star + a_right;
        let s_b = s_star + TAU - a_left;
        let plan = subdivide(&dist, s_a, s_b, cutoff, qn)?;
        let mut outer_s = Vec::new();
        for panel in &plan.panels {
            outer_s.extend(panel_nodes(panel));
        }
        let outer_theta = (0..qn)
            .map(|k| (TAU * k as f64 / qn as f64, TAU / qn as f64))
            .collect();

        Ok(Self {
            source: (s_star, theta_star),
            qn,
            radius,
            inner_interval: (s_star - a_left, s_star + a_right),
            inner,
            outer_s,
            outer_theta,
            plan,
        })
    }

    /// The same rule with the source moved to θ*.
    pub fn with_source_theta(&self, theta_star: f64) -> Self {
        let mut rule = self.clone();
        rule.source.1 = theta_star;
        rule
    }

    pub fn source(&self) -> (f64, f64) {
        self.source
    }

    pub fn qn(&self) -> usize {
        self.qn
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// s-interval of the inner region, containing s*.
    pub fn inner_interval(&self) -> (f64, f64) {
        self.inner_interval
    }

    pub fn inner_lines(&self) -> &[RuleLine] {
        &self.inner
    }

    /// Outer s nodes with weights (shared by every θ line).
    pub fn outer_s(&self) -> &[(f64, f64)] {
        &self.outer_s
    }

    /// Outer θ − θ* offsets with weights.
    pub fn outer_theta(&self) -> &[(f64, f64)] {
        &self.outer_theta
    }

    pub fn plan(&self) -> &SubdivisionPlan {
        &self.plan
    }

    pub fn inner_node_count(&self) -> usize {
        self.inner.iter().map(RuleLine::len).sum()
    }

    pub fn node_count(&self) -> usize {
        self.inner_node_count() + self.outer_s.len() * self.outer_theta.len()
    }

    /// Every node as (s, θ, weight) with θ absolute (not reduced mod 2π).
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let theta_star = self.source.1;
        let inner = self.inner.iter().flat_map(move |line| -> Box<dyn Iterator<Item = (f64, f64, f64)> + '_> {
            match line {
                RuleLine::ConstS { s, nodes } => {
                    Box::new(nodes.iter().map(move |&(dt, w)| (*s, theta_star + dt, w)))
                }
                RuleLine::ConstTheta { dtheta, nodes } => {
                    Box::new(nodes.iter().map(move |&(s, w)| (s, theta_star + dtheta, w)))
                }
            }
        });
        let outer = self.outer_theta.iter().flat_map(move |&(dt, wt)| {
            self.outer_s
                .iter()
                .map(move |&(s, ws)| (s, theta_star + dt, ws * wt))
        });
        inner.chain(outer)
    }

    /// Σ w f(s, θ) over all nodes.
    pub fn integrate<T: Integrand>(&self, mut f: impl FnMut(f64, f64) -> T) -> Result<T> {
        let mut total = T::zero();
        for (s, theta, w) in self.nodes() {
            let value = f(s, theta);
            if !value.is_finite() {
                return Err(Error::NonFiniteIntegrand { s, theta });
            }
            total.add_scaled(w, value);
        }
        Ok(total)
    }

    /// CSV with header `s,theta,weight`.
    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "s,theta,weight")?;
        for (s, theta, w) in self.nodes() {
            writeln!(out, "{s:.16e},{theta:.16e},{w:.16e}")?;
        }
        Ok(())
    }
}

/// Distances `(s* − s_lo, s_hi − s*)` to the edges of the connected inner
/// region `h < cutoff`.
fn inner_extent(dist: &Distance<'_>, s_star: f64, cutoff: f64, speed: f64) -> Result<(f64, f64)> {
    let step = 0.25 * cutoff / speed;
    let edge = |dir: f64| -> Result<f64> {
        let mut inside = 0.0;
        let mut outside = step;
        while dist.at(s_star + dir * outside) < cutoff {
            inside = outside;
            outside += step;
            if outside >= PI {
                return Err(Error::InnerRegionCoversCurve(cutoff / INNER_FACTOR));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            if dist.at(s_star + dir * mid) < cutoff {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(0.5 * (inside + outside))
    };
    let left = edge(-1.0)?;
    let right = edge(1.0)?;
    if left + right >= TAU - 1e-12 {
        return Err(Error::InnerRegionCoversCurve(cutoff / INNER_FACTOR));
    }
    Ok((left, right))
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-13 * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Markers and panel node counts for the outer interval [s_a, s_b].
fn subdivide(dist: &Distance<'_>, s_a: f64, s_b: f64, cutoff: f64, qn: usize) -> Result<SubdivisionPlan> {
    if !(s_b > s_a) {
        return Err(Error::Quadrature("empty outer region".into()));
    }
    let span = s_b - s_a;
    let log_h = |s: f64| dist.at(s).log10();
    let grid: Vec<f64> = (0..EXTREMUM_GRID)
        .map(|j| s_a + span * j as f64 / (EXTREMUM_GRID - 1) as f64)
        .collect();
    let hv: Vec<f64> = grid.iter().map(|&s| dist.at(s)).collect();

    // Curvature of log10 h by centered differences.
    let delta = 1e-4 * span;
    let curvature =
        |s: f64| ((log_h(s + delta) - 2.0 * log_h(s) + log_h(s - delta)) / (delta * delta)).abs();
    let mean_curvature = (0..CURVATURE_GRID)
        .map(|k| curvature(s_a + span * (k as f64 + 0.5) / CURVATURE_GRID as f64))
        .sum::<f64>()
        / CURVATURE_GRID as f64;

    let mut markers = vec![s_a, s_b];
    let mut kept_extrema = Vec::new();
    let mut dropped_extrema = Vec::new();
    for j in 1..EXTREMUM_GRID - 1 {
        let left = hv[j] - hv[j - 1];
        let right = hv[j + 1] - hv[j];
        // A tie on the right still counts, so symmetric grids do not miss a peak.
        if (left > 0.0 && right <= 0.0) || (left < 0.0 && right >= 0.0) {
            let sign = if left < 0.0 { 1.0 } else { -1.0 };
            let s = golden_section(|s| sign * dist.at(s), grid[j - 1], grid[j + 1]);
            if curvature(s) > CURVATURE_THRESHOLD * mean_curvature {
                kept_extrema.push(s);
                markers.push(s);
            } else {
                dropped_extrema.push(s);
            }
        }
    }

    let level = |s: f64| (dist.at(s) / cutoff).log10();
    for j in 0..EXTREMUM_GRID - 1 {
        let (l0, l1) = (level(grid[j]), level(grid[j + 1]));
        let (lo, hi) = (l0.min(l1), l0.max(l1));
        let first = (lo.floor() as i64 + 1).max(1);
        for k in first..=hi.floor() as i64 {
            if (k as f64) <= lo {
                continue;
            }
            let target = k as f64;
            markers.push(bisect(|s| level(s) - target, grid[j], grid[j + 1]));
        }
    }

    markers.sort_by(f64::total_cmp);
    markers.dedup_by(|b, a| (*b - *a).abs() < MARKER_MERGE);
    // Keep the exact ends after merging.
    *markers.first_mut().expect("markers") = s_a;
    *markers.last_mut().expect("markers") = s_b;

    let panels = markers
        .windows(2)
        .map(|m| {
            let (s_left, s_right) = (m[0], m[1]);
            let (h_left, h_right) = (dist.at(s_left), dist.at(s_right));
            let (mut h_min, mut h_max) = (h_left.min(h_right), h_left.max(h_right));
            for k in 1..PANEL_SAMPLES {
                let h = dist.at(s_left + (s_right - s_left) * k as f64 / PANEL_SAMPLES as f64);
                h_min = h_min.min(h);
                h_max = h_max.max(h);
            }
            let graded = qn as f64 * (h_max / h_min).log10() + 5.0 * qn as f64 * (s_right - s_left) / TAU;
            Panel {
                s_left,
                s_right,
                h_left,
                h_right,
                nodes: (qn / 2).max(graded.floor() as usize).max(1),
            }
        })
        .collect();
    Ok(SubdivisionPlan {
        markers,
        panels,
        kept_extrema,
        dropped_extrema,
    })
}

/// Gauss–Legendre nodes on a panel after the map s(t) = A + B e^{Ct}, which
/// spaces nodes in proportion to the linear interpolant of h.
fn panel_nodes(panel: &Panel) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::cached(panel.nodes);
    let Panel {
        s_left: sl,
        s_right: sr,
        h_left: hl,
        h_right: hr,
        ..
    } = *panel;
    let c = (hr / hl).ln();
    if c.abs() < 1e-12 {
        return gl.on_interval(sl, sr).collect();
    }
    let a = (sl * hr - sr * hl) / (hr - hl);
    let b = hl * (sr - sl) / (hr - hl);
    gl.on_interval(0.0, 1.0)
        .map(|(t, w)| {
            let e = b * (c * t).exp();
            (a + e, w * c * e)
        })
        .collect()
}
