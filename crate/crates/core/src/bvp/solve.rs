// SPDX-License-Identifier: Apache-2.0

use super::assemble::{DiscreteSystem, IndexMap};
use crate::error::{Error, Result};
use crate::Vec3;
use faer::{c64, Mat};

/// Singular values below this fraction of the largest are discarded.
pub const SVD_CUTOFF: f64 = 1e-13;

/// Minimum-norm solution of a discrete system.
#[derive(Clone, Debug)]
pub struct Solution {
    pub index: IndexMap,
    /// Density coefficients in column order of [`IndexMap::density_column`].
    pub alpha: Vec<c64>,
    /// Centerline velocity c at s_j = 2πj/n_s.
    pub velocity: Vec<[c64; 3]>,
    /// Nonincreasing.
    pub singular_values: Vec<f64>,
    pub condition_number: f64,
    /// Singular values kept by the cutoff.
    pub rank: usize,
    /// ‖A x − b‖ / ‖b‖.
    pub relative_residual: f64,
}

impl Solution {
    /// Real parts of the centerline velocity samples.
    pub fn velocity_samples(&self) -> Vec<Vec3> {
        self.velocity
            .iter()
            .map(|c| Vec3::new(c[0].re, c[1].re, c[2].re))
            .collect()
    }

    /// ρ(s, θ) from the Fourier coefficients.
    pub fn density(&self, s: f64, theta: f64) -> [c64; 3] {
        let (ns, nt) = (self.index.ns, self.index.ntheta);
        let mut out = [c64::new(0.0, 0.0); 3];
        for a in 0..ns {
            let ks = IndexMap::mode(ns, a);
            for b in 0..nt {
                let kt = IndexMap::mode(nt, b);
                let e = c64::from_polar(1.0, ks as f64 * s + kt as f64 * theta);
                for (l, o) in out.iter_mut().enumerate() {
                    let col = self.index.density_column(l, ks, kt).expect("mode in range");
                    *o += self.alpha[col] * e;
                }
            }
        }
        out
    }

    /// max |Im c| / max |c| over the collocation points.
    pub fn velocity_imaginary_ratio(&self) -> f64 {
        ratio(self.velocity.iter().copied())
    }

    /// max |Im ρ| / max |ρ| over the collocation grid.
    pub fn density_imaginary_ratio(&self) -> f64 {
        let (ns, nt) = (self.index.ns, self.index.ntheta);
        let tau = std::f64::consts::TAU;
        ratio((0..ns).flat_map(|a| {
            (0..nt).map(move |b| self.density(tau * a as f64 / ns as f64, tau * b as f64 / nt as f64))
        }))
    }
}

fn ratio(values: impl Iterator<Item = [c64; 3]>) -> f64 {
    let (mut im, mut all) = (0.0f64, 0.0f64);
    for v in values {
        for z in v {
            im = im.max(z.im.abs());
            all = all.max(z.norm());
        }
    }
    if all == 0.0 {
        0.0
    } else {
        im / all
    }
}

fn check_square(sys: &DiscreteSystem) -> Result<usize> {
    let n = sys.matrix.nrows();
    if sys.matrix.ncols() != n || sys.rhs.len() != n {
        return Err(Error::BadDiscretization(format!(
            "system is {}x{} with {} right-hand-side entries",
            n,
            sys.matrix.ncols(),
            sys.rhs.len()
        )));
    }
    Ok(n)
}

/// Singular values of the system matrix, nonincreasing.
pub fn singular_values(sys: &DiscreteSystem) -> Result<Vec<f64>> {
    check_square(sys)?;
    let mut s = sys.matrix.singular_values().map_err(|_| Error::SvdFailure)?;
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// σ_max / σ_min of the system matrix.
pub fn condition_number(sys: &DiscreteSystem) -> Result<f64> {
    let s = singular_values(sys)?;
    Ok(s[0] / s[s.len() - 1])
}

/// Minimum-norm least-squares solution through a full SVD.
pub fn solve(sys: &DiscreteSystem) -> Result<Solution> {
    let n = check_square(sys)?;
    let svd = sys.matrix.svd().map_err(|_| Error::SvdFailure)?;
    let sigma: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let smin = sigma.iter().cloned().fold(f64::INFINITY, f64::min);
    let b = Mat::<c64>::from_fn(n, 1, |i, _| sys.rhs[i]);
    let mut coeffs = svd.U().adjoint() * &b;
    let mut rank = 0;
    for (k, &s) in sigma.iter().enumerate() {
        if s > SVD_CUTOFF * smax {
            coeffs[(k, 0)] *= 1.0 / s;
            rank += 1;
        } else {
            coeffs[(k, 0)] = c64::new(0.0, 0.0);
        }
    }
    let x = svd.V() * &coeffs;
    let residual = &sys.matrix * &x - &b;
    let norm = |m: &Mat<c64>| (0..n).map(|i| m[(i, 0)].norm_sqr()).sum::<f64>().sqrt();
    let bnorm = norm(&b);
    let index = sys.index;
    let grid = index.ns * index.ntheta;
    let alpha = (0..3 * grid).map(|i| x[(i, 0)]).collect();
    let velocity = (0..index.ns)
        .map(|js| std::array::from_fn(|i| x[(index.velocity_column(i, js), 0)]))
        .collect();
    let mut singular_values = sigma;
    singular_values.sort_by(|a, b| b.total_cmp(a));
    Ok(Solution {
        index,
        alpha,
        velocity,
        singular_values,
        condition_number: smax / smin,
        rank,
        relative_residual: if bnorm > 0.0 { norm(&residual) / bnorm } else { norm(&residual) },
    })
}
