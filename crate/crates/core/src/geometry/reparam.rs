// SPDX-License-Identifier: Apache-2.0

//! Constant-speed reparameterization of closed curves.

use super::centerline::Centerline;
use crate::error::{Error, Result};
use crate::fourier::{antiderivative, FourierSeries};
use crate::Vec3;
use std::f64::consts::TAU;

const SEED_TABLE: usize = 4096;
const TAIL_TOL: f64 = 1e-14;
const MAX_RESAMPLE: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReparamMode {
    /// Constant speed and total length 1.
    UnitLength,
    /// Constant speed, length unchanged.
    KeepLength,
}

/// Cumulative arclength `S(s)` as a Fourier antiderivative of the speed.
struct Arclength {
    slope: f64,
    periodic: FourierSeries<1>,
    offset: f64,
}

impl Arclength {
    fn new(curve: &Centerline) -> Self {
        let n = SEED_TABLE.max(8 * curve.mode_count());
        let speed = FourierSeries::<1>::from_fn(n, |s| [curve.speed(s)]).truncated(1e-17);
        let (slope, periodic) = antiderivative(&speed);
        let offset = periodic.eval(0.0)[0];
        Self {
            slope,
            periodic,
            offset,
        }
    }

    fn value(&self, s: f64) -> f64 {
        self.slope * s + self.periodic.eval(s)[0] - self.offset
    }
}

/// Arclength parameter `s(σ)` such that `S(s(σ)) = L σ / 2π`, for each σ in
/// `targets`.
fn invert_arclength(curve: &Centerline, arc: &Arclength, targets: &[f64]) -> Result<Vec<f64>> {
    let length = arc.slope * TAU;
    let table: Vec<f64> = (0..=SEED_TABLE)
        .map(|j| arc.value(TAU * j as f64 / SEED_TABLE as f64))
        .collect();
    targets
        .iter()
        .map(|&sigma| {
            let goal = length * sigma / TAU;
            let idx = table.partition_point(|&v| v <= goal).clamp(1, SEED_TABLE);
            let (lo, hi) = (table[idx - 1], table[idx]);
            let h = TAU / SEED_TABLE as f64;
            let mut s = h * ((idx - 1) as f64 + (goal - lo) / (hi - lo));
            for _ in 0..50 {
                let step = (arc.value(s) - goal) / curve.speed(s);
                s -= step;
                if step.abs() <= 1e-15 * TAU {
                    return Ok(s);
                }
            }
            Err(Error::ArclengthInversion { target: sigma })
        })
        .collect()
}

/// Resamples `curve` at constant speed.
pub fn reparameterize(curve: &Centerline, mode: ReparamMode) -> Result<Centerline> {
    let arc = Arclength::new(curve);
    let length = arc.slope * TAU;
    let mut m = (4 * curve.mode_count() + 1).max(129) | 1;
    let series = loop {
        let sigmas: Vec<f64> = (0..m).map(|j| TAU * j as f64 / m as f64).collect();
        let params = invert_arclength(curve, &arc, &sigmas)?;
        let samples: Vec<[f64; 3]> = params
            .iter()
            .map(|&s| {
                let p = curve.point(s);
                [p.x, p.y, p.z]
            })
            .collect();
        let series = FourierSeries::from_samples(&samples);
        if series.tail_ratio() < TAIL_TOL || m >= MAX_RESAMPLE {
            break series;
        }
        m = 2 * m + 1;
    };
    let series = match mode {
        ReparamMode::UnitLength => series.scaled(1.0 / length),
        ReparamMode::KeepLength => series,
    };
    Centerline::from_series(series.truncated(1e-16))
}

/// Relative spread `(max|γ'| − min|γ'|)/mean|γ'|` on an n-point grid.
pub fn speed_variation(curve: &Centerline, n: usize) -> f64 {
    let speeds: Vec<f64> = (0..n).map(|j| curve.speed(TAU * j as f64 / n as f64)).collect();
    let max = speeds.iter().cloned().fold(f64::MIN, f64::max);
    let min = speeds.iter().cloned().fold(f64::MAX, f64::min);
    let mean = speeds.iter().sum::<f64>() / n as f64;
    (max - min) / mean
}

/// Checks the constant-speed unit-length preconditions used by the σ
/// functional and the Keller–Rubinow evaluator.
pub fn check_unit_speed(curve: &Centerline) -> Result<()> {
    let variation = speed_variation(curve, 2048);
    if variation > 1e-8 {
        return Err(Error::NotUnitSpeed(format!(
            "relative speed variation {variation:e} exceeds 1e-8"
        )));
    }
    if (curve.length() - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnitSpeed(format!(
            "length {} differs from 1",
            curve.length()
        )));
    }
    Ok(())
}

/// Point of a curve parameterized on [0, 1) instead of [0, 2π).
pub(crate) fn unit_point(curve: &Centerline, t: f64) -> Vec3 {
    curve.point(TAU * t)
}
