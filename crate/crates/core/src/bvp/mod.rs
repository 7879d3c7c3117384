// SPDX-License-Identifier: Apache-2.0

//! Discrete slender-body boundary value problem: assembly, solve and
//! post-processing.

pub mod assemble;
pub mod post;
pub mod problem;
pub mod solve;

pub use assemble::{assemble, DiscreteSystem, Equation, IndexMap, Unknown};
pub use post::{centerline_velocity, drag_coefficient, field_velocity, layer_velocity, surface_distance, write_velocity_csv, DragResult, LayerVelocity, SolutionSummary};
pub use problem::{ForceDensity, ProblemSpec};
pub use solve::{condition_number, singular_values, solve, Solution, SVD_CUTOFF};
