// SPDX-License-Identifier: Apache-2.0

//! Named centerline force densities and the near-intersection radius rule.

use crate::bvp::ForceDensity;
use crate::error::{Error, Result};
use crate::geometry::{hairtie_gap, Centerline};
use crate::Vec3;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Forcing {
    Uniform { value: [f64; 3] },
    /// (cos ms, 0, 0)
    InPlaneCosine { m: f64 },
    /// (sin ks + 2 sin 2ks, −cos ks + 2 cos 2ks, 0)
    Trefoil { k: f64 },
    /// (sin ks + 2 sin 2ks, −cos ks + 2 cos ks, 0)
    TrefoilPrinted { k: f64 },
    /// (−cos φ, 0, sin φ) with φ = s + π/(3√3) sin s.
    Hairtie {},
}

impl Forcing {
    pub fn validate(&self) -> Result<()> {
        let finite = match self {
            Forcing::Uniform { value } => value.iter().all(|v| v.is_finite()),
            Forcing::InPlaneCosine { m: k } | Forcing::Trefoil { k } | Forcing::TrefoilPrinted { k } => {
                k.is_finite()
            }
            Forcing::Hairtie {} => true,
        };
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidData(format!("forcing parameters must be finite: {self:?}")))
        }
    }

    pub fn density(&self) -> ForceDensity {
        match *self {
            Forcing::Uniform { value } => ForceDensity::uniform(Vec3::from(value)),
            Forcing::InPlaneCosine { m } => {
                ForceDensity::new(format!("in_plane_cosine({m})"), move |s| Vec3::new((m * s).cos(), 0.0, 0.0))
            }
            Forcing::Trefoil { k } => ForceDensity::new(format!("trefoil({k})"), move |s| {
                let a = k * s;
                Vec3::new(a.sin() + 2.0 * (2.0 * a).sin(), -a.cos() + 2.0 * (2.0 * a).cos(), 0.0)
            }),
            Forcing::TrefoilPrinted { k } => ForceDensity::new(format!("trefoil_printed({k})"), move |s| {
                let a = k * s;
                Vec3::new(a.sin() + 2.0 * (2.0 * a).sin(), a.cos(), 0.0)
            }),
            Forcing::Hairtie {} => {
                let c = PI / (3.0 * 3f64.sqrt());
                ForceDensity::new("hairtie", move |s| {
                    let phi = s + c * s.sin();
                    Vec3::new(-phi.cos(), 0.0, phi.sin())
                })
            }
        }
    }
}

/// Fiber radius `ratio · gap` for a unit-length hairtie centerline.
///
/// Fails when the radius reaches half the gap, where the surface would
/// touch itself.
pub fn hairtie_radius(curve: &Centerline, ratio: f64) -> Result<f64> {
    let gap = hairtie_gap(curve);
    let radius = ratio * gap;
    check_clearance(radius, gap)?;
    Ok(radius)
}

/// Rejects radii of at least half the gap between near-approach points.
pub fn check_clearance(radius: f64, gap: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidData(format!("fiber radius must be positive, got {radius}")));
    }
    if radius >= 0.5 * gap {
        return Err(Error::SelfIntersection { radius, gap });
    }
    Ok(())
}
