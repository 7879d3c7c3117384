// SPDX-License-Identifier: Apache-2.0

//! Rotation-minimizing (Bishop) frames on closed curves.
//!
//! The frame is transported by integrating the quaternion form of
//! `v' = ω × v` with
//!
//! ```text
//! ω = T × T' + (|γ'| α / L) T + 10 T_num × T
//! ```
//!
//! where `T_num` is the tangent carried by the quaternion itself. The last
//! term steers the transported tangent back onto the spectral one. The twist
//! constant α is chosen so that the normal and binormal close up after one
//! period.

use super::centerline::Centerline;
use super::ode::{integrate, DenseSolution, Tolerance};
use crate::error::{Error, Result};
use crate::Vec3;
use std::f64::consts::TAU;

/// Default integrator tolerance (absolute and relative).
pub const DEFAULT_FRAME_TOL: f64 = 5e-14;

/// Gain of the tangent-correcting rotation.
const TANGENT_FEEDBACK: f64 = 10.0;

/// Geometry of one cross-section of the fiber: centerline point, frame,
/// parameterization speed and the frame curvatures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Section {
    pub s: f64,
    pub point: Vec3,
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub speed: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

impl Section {
    /// Outward unit normal ν = cos θ N + sin θ B.
    #[inline]
    pub fn surface_normal(&self, theta: f64) -> Vec3 {
        let (sn, cs) = theta.sin_cos();
        self.normal * cs + self.binormal * sn
    }

    /// X(s, θ) = γ + ε cos θ N + ε sin θ B.
    #[inline]
    pub fn surface_point(&self, radius: f64, theta: f64) -> Vec3 {
        self.point + self.surface_normal(theta) * radius
    }

    /// Area density J = ε|γ'|(1 − ε cos θ κ1 − ε sin θ κ2).
    #[inline]
    pub fn jacobian(&self, radius: f64, theta: f64) -> f64 {
        let (sn, cs) = theta.sin_cos();
        radius * self.speed * (1.0 - radius * (cs * self.kappa1 + sn * self.kappa2))
    }
}

/// Anything that can produce an orthonormal frame along a centerline.
pub trait FrameEval: Send + Sync {
    fn centerline(&self) -> &Centerline;
    fn section(&self, s: f64) -> Section;
}

/// Unit tangent and its s-derivative from spectral derivatives.
fn tangent_and_derivative(curve: &Centerline, s: f64) -> (Vec3, Vec3, Vec3, f64) {
    let [g, dg, ddg] = curve.derivatives(s);
    let v = dg.norm();
    let t = dg / v;
    let dt = ddg / v - dg * (dg.dot(&ddg) / (v * v * v));
    (g, t, dt, v)
}

/// Completes `tangent` with `normal_hint` projected and normalized.
fn complete_frame(curve: &Centerline, s: f64, normal_hint: Vec3) -> Section {
    let (point, tangent, dt, speed) = tangent_and_derivative(curve, s);
    let normal = (normal_hint - tangent * tangent.dot(&normal_hint)).normalize();
    let binormal = tangent.cross(&normal);
    Section {
        s,
        point,
        tangent,
        normal,
        binormal,
        speed,
        kappa1: dt.dot(&normal) / speed,
        kappa2: dt.dot(&binormal) / speed,
    }
}

type Quaternion = [f64; 4];

#[inline]
fn rotate(q: &Quaternion, v: &Vec3) -> Vec3 {
    let norm = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
    let u = Vec3::new(q[0], q[1], q[2]) / norm;
    let w = q[3] / norm;
    let uv = u.cross(v);
    v + uv * (2.0 * w) + u.cross(&uv) * 2.0
}

/// Periodic Bishop frame along a closed centerline.
#[derive(Clone, Debug)]
pub struct FrameField {
    centerline: Centerline,
    path: DenseSolution<4>,
    initial: [Vec3; 3],
    twist: f64,
    closure_error: f64,
    tangent_deviation: f64,
}

impl FrameField {
    /// Bishop frame with the default initial normal: ẑ orthogonalized against
    /// T(0), or x̂ when T(0) is nearly parallel to ẑ.
    pub fn bishop(centerline: &Centerline, tol: f64) -> Result<Self> {
        let t0 = centerline.eval(0.0, 1)?.normalize();
        let reference = if t0.z.abs() > 0.9 {
            Vec3::x()
        } else {
            Vec3::z()
        };
        Self::bishop_with_normal(centerline, tol, reference)
    }

    /// Bishop frame whose normal at s = 0 is `normal_hint` orthogonalized
    /// against the tangent.
    pub fn bishop_with_normal(centerline: &Centerline, tol: f64, normal_hint: Vec3) -> Result<Self> {
        let (_, t0, _, v0) = tangent_and_derivative(centerline, 0.0);
        if !(v0 > 0.0) {
            return Err(Error::IrregularCurve { s: 0.0, speed: v0 });
        }
        let n0 = normal_hint - t0 * t0.dot(&normal_hint);
        if n0.norm() < 1e-8 * normal_hint.norm().max(1.0) {
            return Err(Error::InvalidData("initial normal is parallel to the tangent".into()));
        }
        let n0 = n0.normalize();
        let b0 = t0.cross(&n0);
        let length = centerline.length();
        let tol = Tolerance { rtol: tol, atol: tol };

        let solve = |alpha: f64| -> Result<DenseSolution<4>> {
            let rhs = |s: f64, q: &Quaternion| -> Quaternion {
                let (_, t, dt, v) = tangent_and_derivative(centerline, s);
                let t_num = rotate(q, &t0);
                let omega = t.cross(&dt) + t * (v * alpha / length)
                    + t_num.cross(&t) * TANGENT_FEEDBACK;
                let u = Vec3::new(q[0], q[1], q[2]);
                let w = q[3];
                let du = (omega * w + omega.cross(&u)) * 0.5;
                [du.x, du.y, du.z, -0.5 * omega.dot(&u)]
            };
            integrate(rhs, 0.0, TAU, [0.0, 0.0, 0.0, 1.0], tol)
        };
        // Angle of N(2π) relative to N(0), measured towards B(0).
        let mismatch = |path: &DenseSolution<4>| -> f64 {
            let n_end = rotate(&path.final_state(), &n0);
            n_end.dot(&b0).atan2(n_end.dot(&n0))
        };

        let mut alpha = 0.0;
        let mut path = solve(alpha)?;
        for _ in 0..4 {
            let phi = mismatch(&path);
            if phi.abs() < 1e-13 {
                break;
            }
            alpha -= phi;
            path = solve(alpha)?;
        }

        let end = path.final_state();
        let closure_error = (rotate(&end, &n0) - n0)
            .norm()
            .max((rotate(&end, &b0) - b0).norm());

        let mut frame = Self {
            centerline: centerline.clone(),
            path,
            initial: [t0, n0, b0],
            twist: alpha,
            closure_error,
            tangent_deviation: 0.0,
        };
        let n_check = 2000;
        frame.tangent_deviation = (0..=n_check)
            .map(|j| {
                let s = TAU * j as f64 / n_check as f64;
                let q = frame.path.eval(s);
                let (_, t, _, _) = tangent_and_derivative(centerline, s);
                (rotate(&q, &t0) - t).norm()
            })
            .fold(0.0, f64::max);
        Ok(frame)
    }

    /// Twist constant α (total rotation about T added over one period).
    pub fn twist(&self) -> f64 {
        self.twist
    }

    /// κ3 = α / L.
    pub fn kappa3(&self) -> f64 {
        self.twist / self.centerline.length()
    }

    /// {T0, N0, B0}.
    pub fn initial_frame(&self) -> [Vec3; 3] {
        self.initial
    }

    /// max(‖N(2π) − N(0)‖, ‖B(2π) − B(0)‖) of the integrated path.
    pub fn closure_error(&self) -> f64 {
        self.closure_error
    }

    /// Largest deviation between the transported and spectral tangents on a
    /// 2001-point grid.
    pub fn tangent_deviation(&self) -> f64 {
        self.tangent_deviation
    }

    pub fn integrator_steps(&self) -> usize {
        self.path.step_count()
    }

    /// Unit quaternion (x, y, z, w) carrying the initial frame to the frame at `s`.
    pub fn quaternion(&self, s: f64) -> [f64; 4] {
        let q = self.path.eval(s.rem_euclid(TAU));
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        q.map(|x| x / n)
    }

    /// Transported frame {T_num, N, B} before re-orthogonalization against
    /// the spectral tangent.
    pub fn transported(&self, s: f64) -> [Vec3; 3] {
        let q = self.quaternion(s);
        self.initial.map(|v| rotate(&q, &v))
    }
}

impl FrameEval for FrameField {
    fn centerline(&self) -> &Centerline {
        &self.centerline
    }

    fn section(&self, s: f64) -> Section {
        let q = self.quaternion(s);
        let normal = rotate(&q, &self.initial[1]);
        complete_frame(&self.centerline, s, normal)
    }
}

/// Frenet frame N = T'/|T'|. Undefined where T' vanishes; used only to
/// reproduce reference integrals that were tabulated with it.
#[derive(Clone, Debug)]
pub struct FrenetFrame {
    centerline: Centerline,
}

impl FrenetFrame {
    pub fn new(centerline: &Centerline) -> Self {
        Self {
            centerline: centerline.clone(),
        }
    }
}

impl FrameEval for FrenetFrame {
    fn centerline(&self) -> &Centerline {
        &self.centerline
    }

    fn section(&self, s: f64) -> Section {
        let (_, _, dt, _) = tangent_and_derivative(&self.centerline, s);
        complete_frame(&self.centerline, s, dt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Builtin;
    use approx::assert_abs_diff_eq;

    fn assert_orthonormal(sec: &Section) {
        let (t, n, b) = (sec.tangent, sec.normal, sec.binormal);
        assert_abs_diff_eq!(t.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.dot(&n), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n.dot(&b), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((t.cross(&n) - b).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn circle_frame_is_closed_form() {
        let c = Centerline::builtin(&Builtin::Circle { radius: 1.0 }).unwrap();
        let f = FrameField::bishop_with_normal(&c, DEFAULT_FRAME_TOL, Vec3::x()).unwrap();
        assert_abs_diff_eq!(f.twist(), 0.0, epsilon = 1e-10);
        for j in 0..50 {
            let s = 0.1257 * j as f64;
            let sec = f.section(s);
            assert!((sec.normal - Vec3::new(s.cos(), s.sin(), 0.0)).norm() < 1e-10);
            assert!((sec.binormal.z.abs() - 1.0).abs() < 1e-10);
            assert_abs_diff_eq!(sec.kappa1, -1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(sec.kappa2, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn default_normal_for_planar_circle_is_z() {
        let c = Centerline::builtin(&Builtin::Circle { radius: 1.0 }).unwrap();
        let f = FrameField::bishop(&c, DEFAULT_FRAME_TOL).unwrap();
        assert!((f.section(1.0).normal - Vec3::z()).norm() < 1e-10);
    }

    #[test]
    fn fourball_frame_exists_where_frenet_fails() {
        let c = Centerline::builtin(&Builtin::FourBall).unwrap();
        let f = FrameField::bishop(&c, DEFAULT_FRAME_TOL).unwrap();
        assert!(f.closure_error() < 1e-8, "closure {}", f.closure_error());
        assert!(f.tangent_deviation() < 1e-8);
        for j in 0..100 {
            assert_orthonormal(&f.section(0.0628 * j as f64));
        }
    }

    #[test]
    fn trefoil_frame_is_periodic_and_consistent() {
        let c = Centerline::builtin(&Builtin::Trefoil).unwrap();
        let f = FrameField::bishop(&c, DEFAULT_FRAME_TOL).unwrap();
        assert!(f.closure_error() < 1e-8, "closure {}", f.closure_error());
        assert!(f.tangent_deviation() < 1e-8, "tangent {}", f.tangent_deviation());
        let [_, n_end, b_end] = f.transported(TAU - 1e-15);
        let [_, n0, b0] = f.initial_frame();
        assert!((n_end - n0).norm() < 1e-8 && (b_end - b0).norm() < 1e-8);
    }

    #[test]
    fn frenet_normal_points_at_curvature_center() {
        let c = Centerline::builtin(&Builtin::Circle { radius: 2.0 }).unwrap();
        let f = FrenetFrame::new(&c);
        let sec = f.section(0.0);
        assert!((sec.normal - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-13);
        assert_abs_diff_eq!(sec.kappa1, 0.5, epsilon = 1e-13);
    }
}
