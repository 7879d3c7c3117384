// SPDX-License-Identifier: Apache-2.0

//! Boundary integral solver for Stokes flow around thin closed fibers.

pub mod bvp;
pub mod error;
pub mod forcing;
pub mod fourier;
pub mod geometry;
pub mod kernels;
pub mod quadrature;
pub mod sbt;

pub use error::{Error, Result};
pub use forcing::{check_clearance, hairtie_radius, Forcing};
pub use fourier::FourierSeries;
pub use geometry::{Builtin, Centerline, FiberSurface, FrameEval, FrameField, ReparamMode};

/// Real 3-vector.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Sizes the global worker pool used by assembly, profiles and the SVD.
/// Must be called before any parallel work; `0` keeps the default.
pub fn configure_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidData(format!("cannot size the thread pool: {e}")))?;
    faer::set_global_parallelism(faer::Par::rayon(threads));
    Ok(())
}
