// SPDX-License-Identifier: Apache-2.0

//! Singular quadrature on thin tubular surfaces.

pub mod duffy;
pub mod gauss;
pub mod model;
mod surface_rule;

pub use duffy::{apex_triangle, duffy_triangle_rule};
pub use gauss::GaussLegendre;
pub use model::{hairtie_test_surface, model_integrals, ModelIntegrals};
pub use surface_rule::{Integrand, Panel, QuadratureRule, RuleLine, SubdivisionPlan, INNER_FACTOR};
