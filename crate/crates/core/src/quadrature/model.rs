// SPDX-License-Identifier: Apache-2.0

//! Three model integrals for testing the surface rules: the bare 1/r
//! integral and single-/double-layer-type integrands modulated by
//! cos(50 s + 2θ), all singular at the source point.

use super::surface_rule::QuadratureRule;
use crate::error::Result;
use crate::geometry::{Builtin, Centerline, FiberSurface, FrameEval, FrenetFrame};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelIntegrals {
    pub inverse_distance: f64,
    pub single_layer: f64,
    pub double_layer: f64,
    pub nodes: usize,
}

/// Model integrals with source at (s*, θ*), with r = X(s, θ) − X(s*, θ*)
/// and ν the normal at the integration point.
pub fn model_integrals<F: FrameEval>(
    surface: &FiberSurface<F>,
    s_star: f64,
    theta_star: f64,
    qn: usize,
) -> Result<ModelIntegrals> {
    let rule = QuadratureRule::build(surface, s_star, theta_star, qn)?;
    let eps = surface.radius();
    let x0 = surface.section(s_star).surface_point(eps, theta_star);
    let [a, b, c] = rule.integrate(|s, theta| {
        let sec = surface.section(s);
        let r = sec.surface_point(eps, theta) - x0;
        let nu = sec.surface_normal(theta);
        let jac = sec.jacobian(eps, theta);
        let dist = r.norm();
        let mode = (50.0 * s + 2.0 * theta).cos() * jac;
        let xy = r.x * r.y;
        [
            jac / dist,
            xy / dist.powi(3) * mode,
            xy * r.dot(&nu) / dist.powi(5) * mode,
        ]
    })?;
    Ok(ModelIntegrals {
        inverse_distance: a,
        single_layer: b / (8.0 * PI),
        double_layer: -3.0 * c / (4.0 * PI),
        nodes: rule.node_count(),
    })
}

/// Tube of radius `eps` around the unscaled hairtie curve with H = 0.9 and
/// its Frenet frame.
pub fn hairtie_test_surface(eps: f64) -> Result<FiberSurface<FrenetFrame>> {
    let curve = Centerline::builtin(&Builtin::Hairtie { h: 0.9 })?;
    FiberSurface::new(FrenetFrame::new(&curve), eps)
}
