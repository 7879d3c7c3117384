// SPDX-License-Identifier: Apache-2.0

//! Closed centerlines, their frames and the tubular fiber surface.

mod centerline;
mod frame;
pub mod ode;
mod reparam;
mod sigma;
mod surface;

pub use centerline::{Builtin, Centerline, CenterlineJson};
pub use frame::{FrameEval, FrameField, FrenetFrame, Section, DEFAULT_FRAME_TOL};
pub use reparam::{check_unit_speed, reparameterize, speed_variation, ReparamMode};
pub use sigma::{hairtie_gap, sigma_and_gap, SigmaReport};
pub use surface::{FiberSurface, SurfacePoint};
