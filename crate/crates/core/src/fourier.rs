// SPDX-License-Identifier: Apache-2.0

//! Real trigonometric series on the periodic interval [0, 2π).
//!
//! A `FourierSeries<D>` stores a `D`-component real function as
//! `a0 + Σ_k (a_k cos ks + b_k sin ks)`. It is the storage format for
//! centerlines, frame vectors and interpolated centerline velocities.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

/// Harmonics are recomputed directly every this many recurrence steps.
const RECURRENCE_RESET: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct FourierSeries<const D: usize> {
    mean: [f64; D],
    cos: Vec<[f64; D]>,
    sin: Vec<[f64; D]>,
}

impl<const D: usize> FourierSeries<D> {
    pub fn constant(value: [f64; D]) -> Self {
        Self {
            mean: value,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    /// Trigonometric interpolant of `samples` taken at `s_j = 2πj/N`.
    ///
    /// For even `N` the Nyquist mode is kept as a cosine term so that the
    /// interpolant still passes through every sample.
    pub fn from_samples(samples: &[[f64; D]]) -> Self {
        let n = samples.len();
        assert!(n > 0, "at least one sample is required");
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(n);
        let k_max = n / 2;
        let mut mean = [0.0; D];
        let mut cos = vec![[0.0; D]; k_max];
        let mut sin = vec![[0.0; D]; k_max];
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for d in 0..D {
            for (b, x) in buf.iter_mut().zip(samples) {
                *b = Complex64::new(x[d], 0.0);
            }
            fft.process(&mut buf);
            let scale = 1.0 / n as f64;
            mean[d] = buf[0].re * scale;
            for k in 1..=k_max {
                let c = buf[k] * scale;
                if n.is_multiple_of(2) && k == k_max {
                    cos[k - 1][d] = c.re;
                    sin[k - 1][d] = 0.0;
                } else {
                    cos[k - 1][d] = 2.0 * c.re;
                    sin[k - 1][d] = -2.0 * c.im;
                }
            }
        }
        Self { mean, cos, sin }
    }

    /// Samples `f` at `n` equispaced points and interpolates.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> [f64; D]) -> Self {
        let samples: Vec<[f64; D]> = (0..n).map(|j| f(TAU * j as f64 / n as f64)).collect();
        Self::from_samples(&samples)
    }

    /// Drops trailing harmonics whose magnitude is below `rel_tol` times the
    /// largest coefficient magnitude.
    pub fn truncated(mut self, rel_tol: f64) -> Self {
        let mag = |k: usize| -> f64 {
            (0..D)
                .map(|d| self.cos[k][d].abs().max(self.sin[k][d].abs()))
                .fold(0.0, f64::max)
        };
        let scale = (0..self.cos.len())
            .map(mag)
            .chain(self.mean.iter().map(|m| m.abs()))
            .fold(0.0, f64::max);
        let mut keep = self.cos.len();
        while keep > 0 && mag(keep - 1) <= rel_tol * scale {
            keep -= 1;
        }
        self.cos.truncate(keep);
        self.sin.truncate(keep);
        self
    }

    /// Highest retained harmonic `K`.
    pub fn max_harmonic(&self) -> usize {
        self.cos.len()
    }

    /// Number of complex modes `2K + 1`.
    pub fn mode_count(&self) -> usize {
        2 * self.cos.len() + 1
    }

    /// Magnitude of the highest retained harmonic relative to the largest one.
    pub fn tail_ratio(&self) -> f64 {
        let k = self.cos.len();
        if k == 0 {
            return 0.0;
        }
        let mag = |k: usize| -> f64 {
            (0..D)
                .map(|d| self.cos[k][d].hypot(self.sin[k][d]))
                .fold(0.0, f64::max)
        };
        let top = (0..k).map(mag).fold(0.0, f64::max);
        if top == 0.0 {
            0.0
        } else {
            mag(k - 1) / top
        }
    }

    pub fn mean(&self) -> [f64; D] {
        self.mean
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let scale = |v: &[f64; D]| v.map(|x| x * factor);
        Self {
            mean: scale(&self.mean),
            cos: self.cos.iter().map(scale).collect(),
            sin: self.sin.iter().map(scale).collect(),
        }
    }

    /// Value and first two derivatives at `s` in one pass.
    pub fn eval_with_derivatives(&self, s: f64) -> [[f64; D]; 3] {
        let mut out = [self.mean, [0.0; D], [0.0; D]];
        let (s1, c1) = s.sin_cos();
        let (mut sk, mut ck) = (0.0, 1.0);
        for (idx, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let k = (idx + 1) as f64;
            if idx % RECURRENCE_RESET == 0 {
                (sk, ck) = (k * s).sin_cos();
            } else {
                (sk, ck) = (sk * c1 + ck * s1, ck * c1 - sk * s1);
            }
            for d in 0..D {
                let v = a[d] * ck + b[d] * sk;
                out[0][d] += v;
                out[1][d] += k * (b[d] * ck - a[d] * sk);
                out[2][d] -= k * k * v;
            }
        }
        out
    }

    /// Value of the series at `s`.
    pub fn eval(&self, s: f64) -> [f64; D] {
        let mut out = self.mean;
        let (s1, c1) = s.sin_cos();
        let (mut sk, mut ck) = (0.0, 1.0);
        for (idx, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            if idx % RECURRENCE_RESET == 0 {
                (sk, ck) = (((idx + 1) as f64) * s).sin_cos();
            } else {
                (sk, ck) = (sk * c1 + ck * s1, ck * c1 - sk * s1);
            }
            for d in 0..D {
                out[d] += a[d] * ck + b[d] * sk;
            }
        }
        out
    }

    /// Derivative of the given order (0, 1 or 2) at `s`.
    pub fn derivative(&self, s: f64, order: usize) -> [f64; D] {
        match order {
            0 => self.eval(s),
            _ => self.eval_with_derivatives(s)[order.min(2)],
        }
    }

    /// Complex coefficients `c_k` for `k = -K..=K`.
    pub fn complex_coefficients(&self) -> Vec<[Complex64; D]> {
        let k_max = self.cos.len();
        let mut out = vec![[Complex64::new(0.0, 0.0); D]; 2 * k_max + 1];
        out[k_max] = self.mean.map(|m| Complex64::new(m, 0.0));
        for k in 1..=k_max {
            for d in 0..D {
                let c = Complex64::new(0.5 * self.cos[k - 1][d], -0.5 * self.sin[k - 1][d]);
                out[k_max + k][d] = c;
                out[k_max - k][d] = c.conj();
            }
        }
        out
    }

    /// Inverse of [`complex_coefficients`](Self::complex_coefficients).
    /// Imaginary parts that are inconsistent with a real function are
    /// averaged away.
    pub fn from_complex_coefficients(coeffs: &[[Complex64; D]]) -> Option<Self> {
        if coeffs.len().is_multiple_of(2) {
            return None;
        }
        let k_max = coeffs.len() / 2;
        let mean = coeffs[k_max].map(|c| c.re);
        let mut cos = Vec::with_capacity(k_max);
        let mut sin = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let mut a = [0.0; D];
            let mut b = [0.0; D];
            for d in 0..D {
                let c = 0.5 * (coeffs[k_max + k][d] + coeffs[k_max - k][d].conj());
                a[d] = 2.0 * c.re;
                b[d] = -2.0 * c.im;
            }
            cos.push(a);
            sin.push(b);
        }
        Some(Self { mean, cos, sin })
    }

    /// Integral over one period divided by 2π of the product with
    /// `cos(ks)`/`sin(ks)` is exactly the stored coefficient; this returns the
    /// raw cosine and sine coefficient tables.
    pub fn coefficients(&self) -> (&[f64; D], &[[f64; D]], &[[f64; D]]) {
        (&self.mean, &self.cos, &self.sin)
    }

    /// Builds a series from raw coefficient tables.
    pub fn from_coefficients(mean: [f64; D], cos: Vec<[f64; D]>, sin: Vec<[f64; D]>) -> Self {
        assert_eq!(cos.len(), sin.len());
        Self { mean, cos, sin }
    }
}

/// Periodic antiderivative of the zero-mean part of a scalar series, plus the
/// mean slope: returns `(slope, P)` with `∫_0^s f = slope*s + P(s) - P(0)`.
pub fn antiderivative(f: &FourierSeries<1>) -> (f64, FourierSeries<1>) {
    let (mean, cos, sin) = f.coefficients();
    let mut ic = Vec::with_capacity(cos.len());
    let mut is = Vec::with_capacity(sin.len());
    for (idx, (a, b)) in cos.iter().zip(sin).enumerate() {
        let k = (idx + 1) as f64;
        // ∫ a cos ks + b sin ks = (a/k) sin ks - (b/k) cos ks
        ic.push([-b[0] / k]);
        is.push([a[0] / k]);
    }
    (mean[0], FourierSeries::from_coefficients([0.0], ic, is))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn interpolates_band_limited_function() {
        let f = |s: f64| [s.cos() + 0.5 * (3.0 * s).sin(), 2.0 - (2.0 * s).cos()];
        let series = FourierSeries::from_fn(11, f);
        for j in 0..50 {
            let s = 0.37 * j as f64;
            let v = series.eval(s);
            let e = f(s);
            assert_abs_diff_eq!(v[0], e[0], epsilon = 1e-13);
            assert_abs_diff_eq!(v[1], e[1], epsilon = 1e-13);
        }
    }

    #[test]
    fn derivatives_match_analytic() {
        let series = FourierSeries::<1>::from_fn(9, |s| [(2.0 * s).sin()]);
        let s = 0.7;
        let [v, d1, d2] = series.eval_with_derivatives(s);
        assert_abs_diff_eq!(v[0], (2.0 * s).sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(d1[0], 2.0 * (2.0 * s).cos(), epsilon = 1e-13);
        assert_abs_diff_eq!(d2[0], -4.0 * (2.0 * s).sin(), epsilon = 1e-13);
    }

    #[test]
    fn even_sample_counts_still_interpolate() {
        let samples: Vec<[f64; 1]> = (0..8).map(|j| [(j * j) as f64]).collect();
        let series = FourierSeries::from_samples(&samples);
        for (j, x) in samples.iter().enumerate() {
            assert_abs_diff_eq!(series.eval(TAU * j as f64 / 8.0)[0], x[0], epsilon = 1e-12);
        }
    }

    #[test]
    fn truncation_drops_negligible_tail() {
        let series = FourierSeries::<1>::from_fn(65, |s| [s.cos()]).truncated(1e-14);
        assert_eq!(series.max_harmonic(), 1);
    }

    #[test]
    fn complex_coefficients_roundtrip() {
        let series = FourierSeries::<3>::from_fn(7, |s| [s.cos(), (2.0 * s).sin(), 1.0]);
        let back = FourierSeries::from_complex_coefficients(&series.complex_coefficients()).unwrap();
        for j in 0..10 {
            let s = j as f64 * 0.6;
            let (a, b) = (series.eval(s), back.eval(s));
            for d in 0..3 {
                assert_abs_diff_eq!(a[d], b[d], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn antiderivative_of_cosine() {
        let f = FourierSeries::<1>::from_fn(9, |s| [1.0 + s.cos()]);
        let (slope, p) = antiderivative(&f);
        assert_abs_diff_eq!(slope, 1.0, epsilon = 1e-14);
        let s = 1.3;
        let integral = slope * s + p.eval(s)[0] - p.eval(0.0)[0];
        assert_abs_diff_eq!(integral, s + s.sin(), epsilon = 1e-13);
    }
}
