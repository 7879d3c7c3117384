// SPDX-License-Identifier: Apache-2.0

//! Keller–Rubinow centerline velocity for a closed unit-length fiber and
//! tools for comparing centerline velocity profiles.
//!
//! The curve parameter s ∈ [0, 2π) maps to arclength t = s/2π. The force
//! density passed here is the force per unit length exerted by the fiber on
//! the fluid.

use crate::bvp::ForceDensity;
use crate::error::{Error, Result};
use crate::geometry::{check_unit_speed, Centerline};
use crate::kernels::VISCOSITY;
use crate::quadrature::GaussLegendre;
use crate::Vec3;
use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

/// Gauss–Legendre nodes on each third of the period.
pub const KR_NODES: usize = 200;

/// Tensor multiplying −2 log(πε/4) f(s) in the local term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalTerm {
    /// I + e eᵀ, matching the subtracted singular part of the integral.
    #[default]
    Consistent,
    /// I + 2 e eᵀ.
    Printed,
}

#[derive(Clone, Debug)]
pub struct KrProblem {
    curve: Centerline,
    force: ForceDensity,
    radius: f64,
    local_term: LocalTerm,
    rule: Arc<GaussLegendre>,
}

impl KrProblem {
    /// Fails unless the curve has unit length and constant speed.
    pub fn new(curve: Centerline, force: ForceDensity, radius: f64) -> Result<Self> {
        check_unit_speed(&curve)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidData(format!("radius must be positive, got {radius}")));
        }
        Ok(Self {
            curve,
            force,
            radius,
            local_term: LocalTerm::default(),
            rule: GaussLegendre::cached(KR_NODES),
        })
    }

    pub fn with_local_term(mut self, local_term: LocalTerm) -> Self {
        self.local_term = local_term;
        self
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn point(&self, t: f64) -> Vec3 {
        self.curve.point(TAU * t)
    }

    fn force_at(&self, t: f64) -> Vec3 {
        self.force.eval(TAU * t)
    }

    /// u_KR at curve parameter s.
    pub fn velocity(&self, s: f64) -> Vec3 {
        let t0 = s / TAU;
        let x = self.point(t0);
        let e = self.curve.derivatives(s)[1] * TAU;
        let eet = e * e.transpose();
        let id = Matrix3::identity();
        let f0 = self.force_at(t0);
        let log = (PI * self.radius / 4.0).ln();
        let log_tensor = match self.local_term {
            LocalTerm::Consistent => id + eet,
            LocalTerm::Printed => id + eet * 2.0,
        };
        let local = ((id - eet * 3.0) - log_tensor * (2.0 * log)) * f0;
        let singular = (id + eet) * f0;
        let mut integral = Vec3::zeros();
        for k in 0..3 {
            let a = t0 + k as f64 / 3.0;
            for (t, w) in self.rule.on_interval(a, a + 1.0 / 3.0) {
                let r = x - self.point(t);
                let d = r.norm();
                let ft = self.force_at(t);
                let stokeslet = ft / d + r * (r.dot(&ft) / (d * d * d));
                let sine = (PI * (t0 - t)).sin().abs() / PI;
                integral += (stokeslet - singular / sine) * w;
            }
        }
        (local + integral) / (8.0 * PI * VISCOSITY)
    }

    /// u_KR at `m` equispaced parameters.
    pub fn profile(&self, m: usize) -> Vec<Vec3> {
        (0..m)
            .into_par_iter()
            .map(|j| self.velocity(TAU * j as f64 / m as f64))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileNorm {
    One,
    Two,
    Inf,
}

impl ProfileNorm {
    pub const ALL: [ProfileNorm; 3] = [ProfileNorm::One, ProfileNorm::Two, ProfileNorm::Inf];

    fn apply(self, values: impl Iterator<Item = f64>) -> f64 {
        match self {
            ProfileNorm::One => values.sum(),
            ProfileNorm::Two => values.map(|v| v * v).sum::<f64>().sqrt(),
            ProfileNorm::Inf => values.fold(0.0, f64::max),
        }
    }
}

/// ‖ |a − b| ‖ / ‖ |b| ‖, with |·| the Euclidean norm at each sample.
pub fn compare_profiles(a: &[Vec3], b: &[Vec3], norm: ProfileNorm) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::InvalidData(format!(
            "profiles must share a nonempty grid, got {} and {} samples",
            a.len(),
            b.len()
        )));
    }
    let num = norm.apply(a.iter().zip(b).map(|(x, y)| (x - y).norm()));
    let den = norm.apply(b.iter().map(|y| y.norm()));
    if !(den > 0.0) {
        return Err(Error::InvalidData("reference profile is zero".into()));
    }
    Ok(num / den)
}

/// Least-squares slope of log d against log ε over the three smallest ε.
pub fn convergence_rate(eps: &[f64], discrepancy: &[f64]) -> Result<f64> {
    if eps.len() != discrepancy.len() || eps.len() < 3 {
        return Err(Error::InvalidData("need at least three (radius, discrepancy) pairs".into()));
    }
    if eps.iter().chain(discrepancy).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidData("radii and discrepancies must be positive".into()));
    }
    let mut pairs: Vec<(f64, f64)> = eps.iter().copied().zip(discrepancy.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let pts: Vec<(f64, f64)> = pairs[..3].iter().map(|&(e, d)| (e.ln(), d.ln())).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
