// SPDX-License-Identifier: Apache-2.0

//! Adaptive Dormand–Prince 5(4) integrator with continuous (dense) output.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense output weights.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 2_000_000;

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

/// One accepted step with its quartic continuous extension.
#[derive(Clone, Debug)]
struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    coeffs: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        std::array::from_fn(|i| r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i]))))
    }
}

/// Solution of an initial value problem with an interpolant valid over the
/// whole integration interval.
#[derive(Clone, Debug)]
pub struct DenseSolution<const N: usize> {
    steps: Vec<DenseStep<N>>,
    end: [f64; N],
    t_end: f64,
    rhs_evaluations: usize,
}

impl<const N: usize> DenseSolution<N> {
    /// Interpolated state at `t` (clamped to the integration interval).
    pub fn eval(&self, t: f64) -> [f64; N] {
        if t >= self.t_end {
            return self.end;
        }
        let idx = self.steps.partition_point(|st| st.t0 <= t).saturating_sub(1);
        self.steps[idx].eval(t)
    }

    pub fn final_state(&self) -> [f64; N] {
        self.end
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn rhs_evaluations(&self) -> usize {
        self.rhs_evaluations
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

/// Integrates `y' = f(t, y)` from `t0` to `t1 > t0`.
pub fn integrate<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    t1: f64,
    y0: [f64; N],
    tol: Tolerance,
) -> Result<DenseSolution<N>> {
    if !(t1 > t0) {
        return Err(Error::Integrator(format!("empty interval [{t0}, {t1}]")));
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut evals = 1;
    let mut h = initial_step(&y, &k1, t1 - t0, tol);
    let mut steps = Vec::new();
    let mut rejected_last = false;

    for _ in 0..MAX_STEPS {
        if t >= t1 {
            break;
        }
        if t + h > t1 {
            h = t1 - t;
        }
        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + h, &y_new);
        evals += 6;

        let mut err = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::Integrator(format!("non-finite error estimate at t = {t}")));
        }

        if err <= 1.0 {
            let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
            let coeffs = [
                y,
                ydiff,
                bspl,
                std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]),
                std::array::from_fn(|i| {
                    h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                }),
            ];
            steps.push(DenseStep { t0: t, h, coeffs });
            t += h;
            y = y_new;
            k1 = k7;
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= if rejected_last { factor.min(1.0) } else { factor };
            rejected_last = false;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            rejected_last = true;
        }
        if h < 1e-14 * (t1 - t0).abs() {
            return Err(Error::Integrator(format!(
                "step size underflow at t = {t}; tolerance {:e} not attainable",
                tol.rtol
            )));
        }
    }
    if t < t1 {
        return Err(Error::Integrator("maximum number of steps exceeded".into()));
    }
    Ok(DenseSolution {
        steps,
        end: y,
        t_end: t1,
        rhs_evaluations: evals,
    })
}

fn initial_step<const N: usize>(y: &[f64; N], dy: &[f64; N], span: f64, tol: Tolerance) -> f64 {
    let sc = |i: usize| tol.atol + tol.rtol * y[i].abs();
    let d0 = (0..N).map(|i| (y[i] / sc(i)).powi(2)).sum::<f64>().sqrt();
    let d1 = (0..N).map(|i| (dy[i] / sc(i)).powi(2)).sum::<f64>().sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(0.1 * span).max(1e-10 * span)
}
