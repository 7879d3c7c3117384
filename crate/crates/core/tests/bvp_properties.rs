// SPDX-License-Identifier: Apache-2.0

use slenderflow_core::bvp::{
    assemble, drag_coefficient, field_velocity, layer_velocity, solve, ForceDensity, ProblemSpec, Solution,
};
use slenderflow_core::geometry::{Builtin, Centerline, FiberSurface, FrameField, DEFAULT_FRAME_TOL};
use slenderflow_core::Vec3;
use std::f64::consts::{PI, TAU};

fn surface(builtin: Builtin, eps: f64) -> FiberSurface<FrameField> {
    let c = Centerline::builtin(&builtin).unwrap();
    FiberSurface::new(FrameField::bishop(&c, DEFAULT_FRAME_TOL).unwrap(), eps).unwrap()
}

fn solve_with(surf: &FiberSurface<FrameField>, f: ForceDensity, ns: usize, nt: usize, qn: usize) -> Solution {
    let p = ProblemSpec::new(surf.clone(), f, ns, nt, qn).unwrap();
    solve(&assemble(&p).unwrap()).unwrap()
}

fn max_norm(v: &[Vec3]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Exterior points at distance ≥ 10ε from the trefoil tube.
fn exterior_points(surf: &FiberSurface<FrameField>) -> Vec<Vec3> {
    let eps = surf.radius();
    [0.3, 1.7, 4.1]
        .iter()
        .flat_map(|&s| {
            let sec = surf.section(s);
            [12.0 * eps, 40.0 * eps].map(|d| sec.point + sec.surface_normal(0.8) * (eps + d))
        })
        .chain([Vec3::new(0.0, 0.0, 5.0), Vec3::new(6.0, -2.0, 1.0)])
        .collect()
}

#[test]
fn normal_density_is_in_the_single_layer_nullspace() {
    let surf = surface(Builtin::Trefoil, 0.02);
    for x in exterior_points(&surf) {
        let v = layer_velocity(&surf, &x, |sec, theta| sec.surface_normal(theta)).unwrap();
        assert!(v.single_layer.norm() <= 1e-6, "{x:?}: {:e}", v.single_layer.norm());
        // The completed field reduces to the point sources alone.
        let rel = (v.total() - v.point_source).norm() / v.point_source.norm();
        assert!(rel <= 1e-6, "{x:?}: {rel:e}");
        assert!(v.point_source.norm() > 0.0);
    }
}

#[test]
fn layer_velocity_rejects_points_near_the_surface() {
    let surf = surface(Builtin::Circle { radius: 1.0 }, 0.05);
    let x = Vec3::new(1.0 + 0.07, 0.0, 0.0);
    assert!(layer_velocity(&surf, &x, |sec, theta| sec.surface_normal(theta)).is_err());
}

#[test]
fn solution_is_real_and_linear_in_the_force() {
    let surf = surface(Builtin::Trefoil, 0.05);
    let f1 = ForceDensity::new("a", |s: f64| Vec3::new(s.cos(), 0.5, (2.0 * s).sin()));
    let f2 = ForceDensity::new("b", |s: f64| Vec3::new(0.0, (3.0 * s).cos(), 1.0));
    let f1c = f1.clone();
    let f2c = f2.clone();
    let combo = ForceDensity::new("a + 2b", move |s| f1c.eval(s) + f2c.eval(s) * 2.0);
    let (ns, nt, qn) = (9, 5, 12);
    let s1 = solve_with(&surf, f1.clone(), ns, nt, qn);
    let s2 = solve_with(&surf, f2, ns, nt, qn);
    let s3 = solve_with(&surf, combo, ns, nt, qn);
    let s4 = solve_with(&surf, f1.scaled(2.0), ns, nt, qn);
    for s in [&s1, &s2, &s3] {
        assert!(s.velocity_imaginary_ratio() <= 1e-8);
        assert!(s.density_imaginary_ratio() <= 1e-8);
    }
    let (c1, c2, c3, c4) = (
        s1.velocity_samples(),
        s2.velocity_samples(),
        s3.velocity_samples(),
        s4.velocity_samples(),
    );
    let diff: Vec<Vec3> = (0..ns).map(|j| c3[j] - c1[j] - c2[j] * 2.0).collect();
    assert!(max_norm(&diff) <= 1e-12 * max_norm(&c3), "{:e}", max_norm(&diff) / max_norm(&c3));
    let diff: Vec<Vec3> = (0..ns).map(|j| c4[j] - c1[j] * 2.0).collect();
    assert!(max_norm(&diff) <= 1e-12 * max_norm(&c4));
}

#[test]
fn net_force_balances_the_applied_density() {
    let f = ForceDensity::new("f", |s: f64| Vec3::new(1.0 + s.sin(), (2.0 * s).cos(), 0.3));
    // ∮ f ds on the unit circle.
    let exact = Vec3::new(TAU, 0.0, 0.3 * TAU);
    for (builtin, reference) in [(Builtin::Circle { radius: 1.0 }, Some(exact)), (Builtin::Trefoil, None)] {
        let surf = surface(builtin, 0.05);
        let p = ProblemSpec::new(surf.clone(), f.clone(), 9, 5, 12).unwrap();
        let sys = assemble(&p).unwrap();
        let sol = solve(&sys).unwrap();
        let n = sys.index.dimension();
        let mut x = vec![faer::c64::new(0.0, 0.0); n];
        x[..sol.alpha.len()].copy_from_slice(&sol.alpha);
        for (js, c) in sol.velocity.iter().enumerate() {
            for i in 0..3 {
                x[sys.index.velocity_column(i, js)] = c[i];
            }
        }
        let h = TAU / p.ns as f64;
        for i in 0..3 {
            let applied: f64 = (0..p.ns)
                .map(|js| {
                    let s = p.collocation_s(js);
                    f.eval(s)[i] * surf.centerline().speed(s) * h
                })
                .sum();
            let computed: f64 = (0..p.ns)
                .map(|js| {
                    let row = sys.index.force_row(i, js);
                    let ax: faer::c64 = (0..n).map(|k| sys.matrix[(row, k)] * x[k]).sum();
                    ax.re * h
                })
                .sum();
            let scale = applied.abs().max(1.0);
            assert!((computed - applied).abs() <= 1e-8 * scale, "{builtin} component {i}");
            if let Some(r) = reference {
                assert!((computed - r[i]).abs() <= 1e-8 * r[i].abs().max(1.0), "{builtin} component {i}");
            }
        }
    }
}

#[test]
fn torus_drag_is_insensitive_to_circumferential_resolution() {
    let coarse = drag_coefficient(1e-2, 11, 5, 20).unwrap();
    let fine = drag_coefficient(1e-2, 11, 13, 20).unwrap();
    let rel = (coarse.coefficient - fine.coefficient).abs() / fine.coefficient;
    assert!(rel <= 1e-5, "{rel:e}");
}

#[test]
fn torus_flow_is_axisymmetric_and_decays_like_a_stokeslet() {
    let surf = surface(Builtin::Circle { radius: 1.0 }, 0.05);
    let p = ProblemSpec::new(surf, ForceDensity::uniform(-Vec3::z()), 11, 5, 16).unwrap();
    let sol = solve(&assemble(&p).unwrap()).unwrap();
    // Rotating the evaluation point about the axis leaves the velocity rotated.
    let x = Vec3::new(1.6, 0.0, 0.4);
    let u = field_velocity(&sol, &p, &x).unwrap();
    for phi in [0.9, 2.5, 4.0] {
        let (sn, cs) = f64::sin_cos(phi);
        let xr = Vec3::new(cs * x.x, sn * x.x, x.z);
        let ur = field_velocity(&sol, &p, &xr).unwrap();
        let expected = Vec3::new(cs * u.x - sn * u.y, sn * u.x + cs * u.y, u.z);
        assert!((ur - expected).norm() <= 1e-8 * u.norm(), "phi {phi}");
    }
    // The fluid receives −f, a net force 2π ẑ, so on the axis u_z r → 2π·2/(8π).
    let far: Vec<f64> = [50.0, 100.0, 200.0]
        .iter()
        .map(|&r| field_velocity(&sol, &p, &Vec3::new(0.0, 0.0, r)).unwrap().z * r)
        .collect();
    let limit = TAU * 2.0 / (8.0 * PI);
    for (k, v) in far.iter().enumerate() {
        assert!((v - limit).abs() <= 0.05 * limit.abs(), "r index {k}: {v} vs {limit}");
    }
    assert!((far[2] - limit).abs() < (far[0] - limit).abs());
}
