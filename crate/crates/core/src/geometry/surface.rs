// SPDX-License-Identifier: Apache-2.0

//! Tubular fiber surface of constant radius around a framed centerline.

use super::centerline::Centerline;
use super::frame::{FrameEval, Section};
use crate::error::{Error, Result};
use crate::Vec3;
use std::f64::consts::TAU;

/// Grid used to verify positivity of the area density at construction.
const CHECK_GRID: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub x: Vec3,
    pub normal: Vec3,
    pub jacobian: f64,
}

#[derive(Clone, Debug)]
pub struct FiberSurface<F> {
    frame: F,
    radius: f64,
}

impl<F: FrameEval> FiberSurface<F> {
    /// Surface of radius `radius` around the frame's centerline. Fails if the
    /// area density is not positive somewhere on a check grid.
    pub fn new(frame: F, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidData(format!("radius must be positive, got {radius}")));
        }
        let surface = Self { frame, radius };
        let n = CHECK_GRID.max(4 * surface.centerline().mode_count());
        for j in 0..n {
            let s = TAU * j as f64 / n as f64;
            let sec = surface.frame.section(s);
            let kappa = sec.kappa1.hypot(sec.kappa2);
            // The minimum over θ of 1 − ε(κ1 cos θ + κ2 sin θ) is 1 − ε|κ|.
            let jmin = radius * sec.speed * (1.0 - radius * kappa);
            if !(jmin > 0.0) {
                let theta = sec.kappa2.atan2(sec.kappa1);
                return Err(Error::NonPositiveJacobian {
                    s,
                    theta,
                    jacobian: jmin,
                });
            }
        }
        Ok(surface)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn frame(&self) -> &F {
        &self.frame
    }

    pub fn centerline(&self) -> &Centerline {
        self.frame.centerline()
    }

    #[inline]
    pub fn section(&self, s: f64) -> Section {
        self.frame.section(s)
    }

    /// X(s, θ), ν(s, θ) and J(s, θ).
    pub fn geometry(&self, s: f64, theta: f64) -> Result<SurfacePoint> {
        let sec = self.section(s);
        let jacobian = sec.jacobian(self.radius, theta);
        if !(jacobian > 0.0) {
            return Err(Error::NonPositiveJacobian { s, theta, jacobian });
        }
        Ok(SurfacePoint {
            x: sec.surface_point(self.radius, theta),
            normal: sec.surface_normal(theta),
            jacobian,
        })
    }

    /// Surface area by the periodic trapezoid rule on an `n × n` grid.
    pub fn area(&self, n: usize) -> f64 {
        let h = TAU / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            let sec = self.section(h * i as f64);
            for j in 0..n {
                total += sec.jacobian(self.radius, h * j as f64);
            }
        }
        total * h * h
    }
}
