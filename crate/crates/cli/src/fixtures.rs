// SPDX-License-Identifier: Apache-2.0

//! Published reference values shipped with the crate.

use crate::error::{CliError, CliResult};
use serde::de::DeserializeOwned;
use serde::Deserialize;

pub const TORUS_DRAG: &str = include_str!("../fixtures/torus_drag.csv");
pub const CONDITION_NUMBERS: &str = include_str!("../fixtures/condition_numbers.csv");
pub const HAIRTIE_GEOMETRY: &str = include_str!("../fixtures/hairtie_geometry.csv");
pub const QUADRATURE: &str = include_str!("../fixtures/quadrature_integrals.csv");
pub const NAMED_SIGMA: &str = include_str!("../fixtures/named_sigma.csv");

#[derive(Clone, Debug, Deserialize)]
pub struct DragRow {
    pub inverse_epsilon: f64,
    pub published_1982: Option<f64>,
    pub exact: f64,
    pub accuracy_estimate: f64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ConditionRow {
    pub epsilon: f64,
    pub n_s: usize,
    pub n_theta: usize,
    pub condition: f64,
    pub anomalous: bool,
}

#[derive(Clone, Debug, Deserialize)]
pub struct HairtieRow {
    pub h: f64,
    pub gap: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct QuadratureRow {
    pub epsilon: f64,
    pub q_n: usize,
    pub nodes: usize,
    pub inverse_distance: f64,
    pub single_layer: f64,
    pub double_layer: f64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SigmaRow {
    pub curve: String,
    pub sigma: f64,
}

/// Parses a fixture, skipping `#` provenance lines.
pub fn parse<T: DeserializeOwned>(text: &str) -> CliResult<Vec<T>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::Fixture(e.to_string()))
}

/// Provenance comment lines of a fixture.
pub fn provenance(text: &str) -> Vec<&str> {
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim())
        .collect()
}

pub fn torus_drag() -> CliResult<Vec<DragRow>> {
    parse(TORUS_DRAG)
}

pub fn condition_numbers() -> CliResult<Vec<ConditionRow>> {
    parse(CONDITION_NUMBERS)
}

pub fn hairtie_geometry() -> CliResult<Vec<HairtieRow>> {
    parse(HAIRTIE_GEOMETRY)
}

pub fn quadrature() -> CliResult<Vec<QuadratureRow>> {
    parse(QUADRATURE)
}

pub fn named_sigma() -> CliResult<Vec<SigmaRow>> {
    parse(NAMED_SIGMA)
}

/// Relative tolerance for equality of parameters read from fixtures.
pub fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse_with_provenance() {
        assert_eq!(torus_drag().unwrap().len(), 20);
        assert_eq!(condition_numbers().unwrap().len(), 36);
        assert_eq!(hairtie_geometry().unwrap().len(), 5);
        assert_eq!(quadrature().unwrap().len(), 32);
        assert_eq!(named_sigma().unwrap().len(), 5);
        for text in [TORUS_DRAG, CONDITION_NUMBERS, HAIRTIE_GEOMETRY, QUADRATURE, NAMED_SIGMA] {
            assert!(provenance(text).iter().any(|l| l.contains("Table") || l.contains("sigma")));
        }
        let anomalous = condition_numbers().unwrap().iter().filter(|r| r.anomalous).count();
        assert_eq!(anomalous, 3);
        let row = quadrature().unwrap().into_iter().find(|r| r.epsilon == 5e-5 && r.q_n == 31).unwrap();
        assert_eq!(row.inverse_distance, 1.217323961763636e-02);
        assert!(torus_drag().unwrap()[17].published_1982.is_none());
    }
}
