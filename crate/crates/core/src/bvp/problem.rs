// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::geometry::{FiberSurface, FrameEval};
use crate::Vec3;
use std::fmt;
use std::sync::Arc;

/// Centerline force density f(s), 2π-periodic in the curve parameter.
#[derive(Clone)]
pub struct ForceDensity {
    f: Arc<dyn Fn(f64) -> Vec3 + Send + Sync>,
    label: String,
}

impl fmt::Debug for ForceDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ForceDensity").field("label", &self.label).finish()
    }
}

impl ForceDensity {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> Vec3 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            label: label.into(),
        }
    }

    pub fn uniform(value: Vec3) -> Self {
        Self::new(format!("uniform({}, {}, {})", value.x, value.y, value.z), move |_| value)
    }

    /// Trigonometric interpolant of samples at s_j = 2πj/N.
    pub fn from_samples(samples: &[Vec3]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidData("force density needs at least one sample".into()));
        }
        if samples.iter().any(|v| !v.iter().all(|x| x.is_finite())) {
            return Err(Error::InvalidData("force density samples must be finite".into()));
        }
        let raw: Vec<[f64; 3]> = samples.iter().map(|v| [v.x, v.y, v.z]).collect();
        let series = FourierSeries::from_samples(&raw);
        Ok(Self::new(format!("samples({})", samples.len()), move |s| {
            Vec3::from(series.eval(s))
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, s: f64) -> Vec3 {
        (self.f)(s)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let inner = self.f.clone();
        Self::new(format!("{} * {factor}", self.label), move |s| inner(s) * factor)
    }
}

/// Mobility problem on one closed fiber.
#[derive(Clone, Debug)]
pub struct ProblemSpec<F> {
    pub surface: FiberSurface<F>,
    pub force: ForceDensity,
    /// Collocation points and Fourier modes along the centerline (odd).
    pub ns: usize,
    /// Collocation points and Fourier modes around the cross-section (odd).
    pub ntheta: usize,
    pub qn: usize,
}

impl<F: FrameEval> ProblemSpec<F> {
    pub fn new(surface: FiberSurface<F>, force: ForceDensity, ns: usize, ntheta: usize, qn: usize) -> Result<Self> {
        for (name, n) in [("n_s", ns), ("n_theta", ntheta)] {
            if n < 3 || n % 2 == 0 {
                return Err(Error::BadDiscretization(format!("{name} must be odd and at least 3, got {n}")));
            }
        }
        if qn < 2 {
            return Err(Error::BadDiscretization(format!("q_n must be at least 2, got {qn}")));
        }
        Ok(Self {
            surface,
            force,
            ns,
            ntheta,
            qn,
        })
    }

    /// Number of unknowns (and of equations).
    pub fn dimension(&self) -> usize {
        3 * (self.ns * self.ntheta + self.ns)
    }

    pub fn collocation_s(&self, js: usize) -> f64 {
        std::f64::consts::TAU * js as f64 / self.ns as f64
    }

    pub fn collocation_theta(&self, jt: usize) -> f64 {
        std::f64::consts::TAU * jt as f64 / self.ntheta as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Builtin, Centerline, FrameField, DEFAULT_FRAME_TOL};

    #[test]
    fn sampled_force_interpolates() {
        let n = 9;
        let samples: Vec<Vec3> = (0..n)
            .map(|j| {
                let s = std::f64::consts::TAU * j as f64 / n as f64;
                Vec3::new(s.cos(), (2.0 * s).sin(), 1.0)
            })
            .collect();
        let f = ForceDensity::from_samples(&samples).unwrap();
        let s = 0.37;
        assert!((f.eval(s) - Vec3::new(s.cos(), (2.0 * s).sin(), 1.0)).norm() < 1e-13);
        assert!((f.scaled(2.0).eval(s) - f.eval(s) * 2.0).norm() < 1e-15);
    }

    #[test]
    fn dimension_and_validation() {
        let c = Centerline::builtin(&Builtin::Circle { radius: 1.0 }).unwrap();
        let surf = FiberSurface::new(FrameField::bishop(&c, DEFAULT_FRAME_TOL).unwrap(), 0.1).unwrap();
        let f = ForceDensity::uniform(Vec3::z());
        let p = ProblemSpec::new(surf.clone(), f.clone(), 7, 7, 10).unwrap();
        assert_eq!(p.dimension(), 168);
        assert!(ProblemSpec::new(surf.clone(), f.clone(), 8, 7, 10).is_err());
        assert!(ProblemSpec::new(surf, f, 7, 1, 10).is_err());
        // n_s = 121, n_θ = 23 gives the 8712-equation system.
        assert_eq!(3 * (121 * 23 + 121), 8712);
    }
}
