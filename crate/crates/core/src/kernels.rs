// SPDX-License-Identifier: Apache-2.0

//! Free-space Stokes kernels as bare tensors, and the closed-form
//! circumferential moments of the point-source completion.
//!
//! Prefactors (1/8π, −3/4π, 1/4π) and the −½ρ jump are applied by the
//! assembly code.

use crate::error::{Error, Result};
use crate::geometry::Section;
use crate::Vec3;
use nalgebra::Matrix3;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Dynamic viscosity. The problem is linear in μ; all computations use 1.
pub const VISCOSITY: f64 = 1.0;

fn separation(x: &Vec3, y: &Vec3) -> Result<Vec3> {
    let r = x - y;
    if r.norm_squared() == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(r)
}

/// G = δ/r + r rᵀ/r³ with r = x − y.
pub fn stokeslet(x: &Vec3, y: &Vec3) -> Result<Matrix3<f64>> {
    let r = separation(x, y)?;
    let d = r.norm();
    Ok(Matrix3::identity() / d + r * r.transpose() / (d * d * d))
}

/// K = r rᵀ (r·ν_x)/r⁵ with r = x − y.
pub fn traction_kernel(x: &Vec3, y: &Vec3, normal_x: &Vec3) -> Result<Matrix3<f64>> {
    let r = separation(x, y)?;
    let d2 = r.norm_squared();
    Ok(r * r.transpose() * (r.dot(normal_x) / (d2 * d2 * d2.sqrt())))
}

/// R/R³ with R = x − γ(s).
pub fn source_velocity_kernel(x: &Vec3, center: &Vec3) -> Result<Vec3> {
    let r = separation(x, center)?;
    Ok(r / r.norm().powi(3))
}

/// 2ν_x/R³ − 6R(R·ν_x)/R⁵ with R = x − γ(s).
pub fn source_traction_kernel(x: &Vec3, center: &Vec3, normal_x: &Vec3) -> Result<Vec3> {
    let r = separation(x, center)?;
    let d = r.norm();
    let d3 = d * d * d;
    Ok(normal_x * (2.0 / d3) - r * (6.0 * r.dot(normal_x) / (d3 * d * d)))
}

/// ∫₀^{2π} ν(s, θ) e^{i(k_s s + k_θ θ)} J(s, θ) dθ in closed form.
pub fn circumferential_moment(k_theta: i64, k_s: i64, section: &Section, radius: f64) -> [Complex64; 3] {
    let phase = Complex64::from_polar(1.0, k_s as f64 * section.s);
    let (n, b) = (section.normal, section.binormal);
    let v = section.speed;
    let i = Complex64::i();
    let geometric: [Complex64; 3] = match k_theta.unsigned_abs() {
        0 => {
            let m = (n * section.kappa1 + b * section.kappa2) * (-PI * radius * radius * v);
            [m.x.into(), m.y.into(), m.z.into()]
        }
        1 => {
            let c = PI * radius * v;
            std::array::from_fn(|k| Complex64::new(n[k], b[k]) * c)
        }
        2 => {
            let kappa = Complex64::new(section.kappa1, section.kappa2);
            let c = -0.5 * PI * radius * radius * v;
            std::array::from_fn(|k| (n[k] + i * b[k]) * kappa * c)
        }
        _ => [Complex64::new(0.0, 0.0); 3],
    };
    geometric.map(|g| if k_theta < 0 { g.conj() * phase } else { g * phase })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Builtin, Centerline, FrameEval, FrameField, DEFAULT_FRAME_TOL};
    use proptest::prelude::*;

    fn vec3() -> impl Strategy<Value = Vec3> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, c)| Vec3::new(a, b, c))
    }

    #[test]
    fn stokeslet_unit_separation() {
        let g = stokeslet(&Vec3::new(1.0, 0.0, 0.0), &Vec3::zeros()).unwrap();
        assert!((g - Matrix3::from_diagonal(&Vec3::new(2.0, 1.0, 1.0))).norm() < 1e-15);
        assert_eq!(stokeslet(&Vec3::x(), &Vec3::x()), Err(Error::CoincidentPoints));
    }

    #[test]
    fn stokeslet_diagonal_separation() {
        let r = Vec3::new(1.0, 1.0, 0.0) * 2f64.sqrt();
        let g = stokeslet(&r, &Vec3::zeros()).unwrap();
        // |r| = 2, r_i r_j / r³ = 2/8 for i, j ∈ {x, y}.
        let expected = Matrix3::new(0.75, 0.25, 0.0, 0.25, 0.75, 0.0, 0.0, 0.0, 0.5);
        assert!((g - expected).norm() < 1e-15);
    }

    #[test]
    fn traction_and_source_examples() {
        let zero = Vec3::zeros();
        let k = traction_kernel(&Vec3::x(), &zero, &Vec3::x()).unwrap();
        assert!((k - Matrix3::from_fn(|i, j| (i == 0 && j == 0) as u8 as f64)).norm() < 1e-15);
        assert_eq!(traction_kernel(&Vec3::x(), &zero, &Vec3::y()).unwrap(), Matrix3::zeros());
        let v = source_velocity_kernel(&Vec3::new(2.0, 0.0, 0.0), &zero).unwrap();
        assert!((v - Vec3::new(0.25, 0.0, 0.0)).norm() < 1e-15);
        let t = source_traction_kernel(&Vec3::x(), &zero, &Vec3::y()).unwrap();
        assert!((t - Vec3::new(0.0, 2.0, 0.0)).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn kernels_match_component_formulas(x in vec3(), y in vec3(), n in vec3()) {
            prop_assume!((x - y).norm() > 1e-3 && n.norm() > 1e-3);
            let n = n.normalize();
            let r = x - y;
            let d = r.norm();
            let g = stokeslet(&x, &y).unwrap();
            let k = traction_kernel(&x, &y, &n).unwrap();
            let rn = r[0] * n[0] + r[1] * n[1] + r[2] * n[2];
            for i in 0..3 {
                for j in 0..3 {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    let ge = delta / d + r[i] * r[j] / d.powi(3);
                    let ke = r[i] * r[j] * rn / d.powi(5);
                    prop_assert!((g[(i, j)] - ge).abs() <= 1e-12 * ge.abs().max(1.0 / d));
                    prop_assert!((k[(i, j)] - ke).abs() <= 1e-12 * (1.0 / (d * d)));
                    prop_assert_eq!(g[(i, j)], g[(j, i)]);
                }
                let se = 2.0 * n[i] / d.powi(3) - 6.0 * r[i] * rn / d.powi(5);
                let st = source_traction_kernel(&x, &y, &n).unwrap();
                prop_assert!((st[i] - se).abs() <= 1e-12 / d.powi(3) * 10.0);
            }
            prop_assert!((stokeslet(&y, &x).unwrap() - g).norm() <= 1e-14 * g.norm());
        }

        #[test]
        fn kernels_are_homogeneous(x in vec3(), y in vec3(), lambda in 0.1..10.0f64) {
            prop_assume!((x - y).norm() > 1e-3);
            let n = Vec3::new(0.3, -0.4, 0.5).normalize();
            let (xs, ys) = (x * lambda, y * lambda);
            let g = stokeslet(&x, &y).unwrap();
            let k = traction_kernel(&x, &y, &n).unwrap();
            let v = source_velocity_kernel(&x, &y).unwrap();
            prop_assert!((stokeslet(&xs, &ys).unwrap() * lambda - g).norm() <= 1e-12 * g.norm());
            prop_assert!((traction_kernel(&xs, &ys, &n).unwrap() * lambda * lambda - k).norm() <= 1e-12 * k.norm().max(1e-300));
            prop_assert!((source_velocity_kernel(&xs, &ys).unwrap() * lambda * lambda - v).norm() <= 1e-12 * v.norm());
        }
    }

    /// 512-point trapezoid oracle for the θ-integral of ν e^{i(k_s s + k_θ θ)} J.
    fn brute_force_moment(k_theta: i64, k_s: i64, sec: &Section, eps: f64) -> [Complex64; 3] {
        let n = 512;
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for j in 0..n {
            let theta = 2.0 * PI * j as f64 / n as f64;
            let nu = sec.surface_normal(theta);
            let w = sec.jacobian(eps, theta) * 2.0 * PI / n as f64;
            let e = Complex64::from_polar(w, k_s as f64 * sec.s + k_theta as f64 * theta);
            for k in 0..3 {
                acc[k] += e * nu[k];
            }
        }
        acc
    }

    fn check_moments(frame: &FrameField, s: f64, eps: f64) -> std::result::Result<(), TestCaseError> {
        let sec = frame.section(s);
        let scale = PI * eps * sec.speed;
        for kt in -5..=5 {
            for ks in [0, 3, 7] {
                let m = circumferential_moment(kt, ks, &sec, eps);
                let o = brute_force_moment(kt, ks, &sec, eps);
                for k in 0..3 {
                    prop_assert!((m[k] - o[k]).norm() <= 1e-10 * scale, "s={} kθ={} ks={}", s, kt, ks);
                }
            }
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn moments_match_brute_force(s in 0.0..2.0 * PI) {
            for builtin in [Builtin::Circle { radius: 1.0 }, Builtin::Trefoil] {
                let c = Centerline::builtin(&builtin).unwrap();
                let frame = FrameField::bishop(&c, DEFAULT_FRAME_TOL).unwrap();
                check_moments(&frame, s, 0.02)?;
            }
        }
    }

    #[test]
    fn moment_examples_and_symmetry() {
        let c = Centerline::builtin(&Builtin::Circle { radius: 1.0 }).unwrap();
        let frame = FrameField::bishop_with_normal(&c, DEFAULT_FRAME_TOL, Vec3::x()).unwrap();
        let mut sec = frame.section(0.0);
        // Orient B along +z so the frame reads N = x̂, B = ẑ.
        if sec.binormal.z < 0.0 {
            sec.binormal = -sec.binormal;
            sec.kappa2 = -sec.kappa2;
        }
        let m = circumferential_moment(1, 0, &sec, 0.01);
        let expected = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)];
        for k in 0..3 {
            assert!((m[k] - expected[k] * (PI * 0.01)).norm() < 1e-14);
        }
        assert!(circumferential_moment(3, 2, &sec, 0.01).iter().all(|z| z.norm() == 0.0));
        let sec = frame.section(1.234);
        for kt in -4..=4 {
            for ks in -3..=3 {
                let a = circumferential_moment(kt, ks, &sec, 0.05);
                let b = circumferential_moment(-kt, -ks, &sec, 0.05);
                for k in 0..3 {
                    assert_eq!(a[k], b[k].conj());
                }
            }
        }
    }
}
