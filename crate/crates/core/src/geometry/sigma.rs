// SPDX-License-Identifier: Apache-2.0

//! Near-self-intersection diagnostics for unit-length closed curves.
//!
//! σ = min over (s, t) of |γ(s) − γ(t)| / sin(π|s − t|) with s, t ∈ [0, 1);
//! on the diagonal the ratio tends to |γ'|/π = 1/π.

use super::centerline::Centerline;
use super::reparam::{check_unit_speed, unit_point};
use crate::error::Result;
use crate::Vec3;
use std::f64::consts::{FRAC_1_PI, PI};

const GRID: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaReport {
    pub sigma: f64,
    /// Chord length |γ(s) − γ(t)| at the minimizing pair.
    pub gap: f64,
    /// Minimizing pair on the unit parameter interval.
    pub argmin: (f64, f64),
}

fn ratio(curve: &Centerline, s: f64, t: f64) -> f64 {
    let sn = (PI * (s - t)).sin().abs();
    if sn < 1e-9 {
        return FRAC_1_PI;
    }
    (unit_point(curve, s) - unit_point(curve, t)).norm() / sn
}

/// σ and the gap of a constant-speed unit-length curve.
pub fn sigma_and_gap(curve: &Centerline) -> Result<SigmaReport> {
    check_unit_speed(curve)?;
    let pts: Vec<Vec3> = (0..GRID)
        .map(|j| unit_point(curve, j as f64 / GRID as f64))
        .collect();
    let sines: Vec<f64> = (0..GRID).map(|k| (PI * k as f64 / GRID as f64).sin()).collect();
    let mut best = (FRAC_1_PI, 0usize, 0usize);
    for i in 0..GRID {
        for j in i + 1..GRID {
            let value = (pts[i] - pts[j]).norm() / sines[j - i];
            if value < best.0 {
                best = (value, i, j);
            }
        }
    }
    let (grid_value, i, j) = best;
    if i == j {
        // The diagonal limit is the global minimum (e.g. a circle).
        return Ok(SigmaReport {
            sigma: FRAC_1_PI,
            gap: 0.0,
            argmin: (0.0, 0.0),
        });
    }
    let h = 1.0 / GRID as f64;
    let start = [i as f64 * h, j as f64 * h];
    let (x, value) = nelder_mead(|p| ratio(curve, p[0], p[1]), start, h, 1e-15, 2000);
    let (x, sigma) = if value <= grid_value {
        (x, value)
    } else {
        (start, grid_value)
    };
    let (s, t) = (x[0].rem_euclid(1.0), x[1].rem_euclid(1.0));
    Ok(SigmaReport {
        sigma,
        gap: (unit_point(curve, s) - unit_point(curve, t)).norm(),
        argmin: (s, t),
    })
}

/// Smallest pairwise distance among the points at unit parameters
/// 1/6, 1/2, 5/6 (the hairtie near-approach points).
pub fn hairtie_gap(curve: &Centerline) -> f64 {
    let p = [1.0 / 6.0, 0.5, 5.0 / 6.0].map(|t| unit_point(curve, t));
    (p[0] - p[1])
        .norm()
        .min((p[1] - p[2]).norm())
        .min((p[0] - p[2]).norm())
}

/// Derivative-free simplex minimization in two variables.
fn nelder_mead(
    f: impl Fn([f64; 2]) -> f64,
    start: [f64; 2],
    step: f64,
    ftol: f64,
    max_iter: usize,
) -> ([f64; 2], f64) {
    let mut simplex = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut values = simplex.map(&f);
    let lerp = |a: [f64; 2], b: [f64; 2], c: f64| [a[0] + c * (b[0] - a[0]), a[1] + c * (b[1] - a[1])];
    for _ in 0..max_iter {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|k| simplex[k]);
        values = order.map(|k| values[k]);
        if (values[2] - values[0]).abs() <= ftol * values[0].abs().max(1e-300) {
            break;
        }
        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] {
                lerp(centroid, reflected, 0.5)
            } else {
                lerp(centroid, simplex[2], 0.5)
            };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = lerp(simplex[0], simplex[k], 0.5);
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    (simplex[best], values[best])
}
