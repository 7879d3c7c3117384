// SPDX-License-Identifier: Apache-2.0

//! Problem setups shared by the benchmarks.

use slenderflow_core::bvp::{ForceDensity, ProblemSpec};
use slenderflow_core::geometry::{reparameterize, DEFAULT_FRAME_TOL};
use slenderflow_core::sbt::KrProblem;
use slenderflow_core::{Builtin, Centerline, FiberSurface, Forcing, FrameField, ReparamMode, Result, Vec3};

/// Mobility problem on the trefoil with uniform axial forcing.
pub fn trefoil_problem(eps: f64, ns: usize, ntheta: usize, qn: usize) -> Result<ProblemSpec<FrameField>> {
    let curve = Centerline::builtin(&Builtin::Trefoil)?;
    let surface = FiberSurface::new(FrameField::bishop(&curve, DEFAULT_FRAME_TOL)?, eps)?;
    ProblemSpec::new(surface, ForceDensity::uniform(Vec3::z()), ns, ntheta, qn)
}

/// Slender-body problem on the unit-length hairtie with its standard forcing.
pub fn hairtie_kr(h: f64, eps: f64) -> Result<KrProblem> {
    let curve = reparameterize(&Centerline::builtin(&Builtin::Hairtie { h })?, ReparamMode::UnitLength)?;
    KrProblem::new(curve, Forcing::Hairtie {}.density(), eps)
}
