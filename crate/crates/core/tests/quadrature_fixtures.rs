// SPDX-License-Identifier: Apache-2.0

use slenderflow_core::quadrature::{hairtie_test_surface, model_integrals, QuadratureRule};
use std::f64::consts::PI;

/// (ε, q_n, I_{1/r}, I_SL, I_DL) for the H = 0.9 tube with source at (π/3, 0).
const PUBLISHED: &[(f64, usize, f64, f64, f64)] = &[
    (5e-2, 24, 7.589782838781604e+00, 8.793927729104493e-04, -2.220137549905115e-02),
    (5e-2, 31, 7.589782838781603e+00, 8.793927729104521e-04, -2.220137549905804e-02),
    (5e-2, 39, 7.589782838781612e+00, 8.793927729104533e-04, -2.220137549904386e-02),
    (5e-2, 48, 7.589782838781607e+00, 8.793927729104308e-04, -2.220137549899438e-02),
    (5e-2, 58, 7.589782838781607e+00, 8.793927729104445e-04, -2.220137549903136e-02),
    (5e-3, 24, 9.256898207525426e-01, 6.082225851130320e-06, 6.279192290716310e-05),
    (5e-3, 31, 9.256898207525437e-01, 6.082225851541232e-06, 6.279192348132032e-05),
    (5e-3, 39, 9.256898207525388e-01, 6.082225851527452e-06, 6.279192298478882e-05),
    (5e-3, 48, 9.256898207525420e-01, 6.082225851528601e-06, 6.279192339740517e-05),
    (5e-3, 58, 9.256898207525425e-01, 6.082225851524810e-06, 6.279192336884141e-05),
    (5e-4, 24, 1.072470604378060e-01, 2.712525879230430e-08, 5.407832974464318e-05),
    (5e-4, 31, 1.072470604378063e-01, 2.712525879697797e-08, 5.407833049027967e-05),
    (5e-4, 39, 1.072470604378077e-01, 2.712525879947280e-08, 5.407833147346922e-05),
    (5e-4, 48, 1.072470604378010e-01, 2.712525876683408e-08, 5.407833241615479e-05),
    (5e-4, 58, 1.072470604378035e-01, 2.712525877772501e-08, 5.407833337423479e-05),
    (5e-5, 24, 1.217323961763635e-02, 1.829372722135347e-09, 5.883533250724377e-06),
    (5e-5, 31, 1.217323961763636e-02, 1.829372718474100e-09, 5.883539417174405e-06),
    (5e-5, 39, 1.217323961763877e-02, 1.829372719598264e-09, 5.883535786441918e-06),
    (5e-5, 48, 1.217323961764001e-02, 1.829372727088588e-09, 5.883559961474092e-06),
    (5e-5, 58, 1.217323961763658e-02, 1.829372712986068e-09, 5.883500032425172e-06),
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn model_integrals_match_published_table() {
    for &(eps, qn, inv, sl, dl) in PUBLISHED {
        let surf = hairtie_test_surface(eps).unwrap();
        let m = model_integrals(&surf, PI / 3.0, 0.0, qn).unwrap();
        println!(
            "eps {eps:e} qn {qn}: 1/r {:.3e} SL {:.3e} DL {:.3e}",
            rel(m.inverse_distance, inv),
            rel(m.single_layer, sl),
            rel(m.double_layer, dl)
        );
        assert!(rel(m.inverse_distance, inv) <= 1e-10, "1/r at eps {eps}, qn {qn}");
        if qn >= 31 && eps >= 5e-4 {
            assert!(rel(m.single_layer, sl) <= 1e-7, "SL at eps {eps}, qn {qn}");
            assert!(rel(m.double_layer, dl) <= 1e-4, "DL at eps {eps}, qn {qn}");
        }
    }
}

#[test]
fn smallest_radius_value_at_qn_31() {
    let m = model_integrals(&hairtie_test_surface(5e-5).unwrap(), PI / 3.0, 0.0, 31).unwrap();
    assert!(rel(m.inverse_distance, 1.217323961763636e-02) <= 1e-11);
}

#[test]
fn refinement_gains_six_orders() {
    let surf = hairtie_test_surface(5e-2).unwrap();
    let reference = 7.589782838781607;
    let coarse = model_integrals(&surf, PI / 3.0, 0.0, 9).unwrap().inverse_distance;
    let fine = model_integrals(&surf, PI / 3.0, 0.0, 58).unwrap().inverse_distance;
    let (e9, e58) = (rel(coarse, reference), rel(fine, reference).max(f64::EPSILON));
    assert!(e9 / e58 >= 1e6, "q_n = 9 error {e9:e}, q_n = 58 error {e58:e}");
}

#[test]
fn theta_shift_reuses_the_rule() {
    let surf = hairtie_test_surface(5e-3).unwrap();
    let base = QuadratureRule::build(&surf, PI / 3.0, 0.0, 24).unwrap();
    for theta in [0.7, 2.9, 5.5] {
        let direct = QuadratureRule::build(&surf, PI / 3.0, theta, 24).unwrap();
        let shifted = base.with_source_theta(theta);
        assert_eq!(direct.node_count(), shifted.node_count());
        let eps = surf.radius();
        let x0 = surf.section(PI / 3.0).surface_point(eps, theta);
        let f = |s: f64, t: f64| {
            let sec = surf.section(s);
            sec.jacobian(eps, t) / (sec.surface_point(eps, t) - x0).norm()
        };
        let a: f64 = direct.integrate(f).unwrap();
        let b: f64 = shifted.integrate(f).unwrap();
        assert!(rel(a, b) < 1e-12, "theta {theta}: {a} vs {b}");
    }
}

#[test]
fn weights_recover_surface_area() {
    for eps in [5e-2, 5e-4] {
        let surf = hairtie_test_surface(eps).unwrap();
        let rule = QuadratureRule::build(&surf, PI / 3.0, 0.0, 18).unwrap();
        let area: f64 = rule.integrate(|s, t| surf.section(s).jacobian(eps, t)).unwrap();
        let reference = surf.area(4096);
        assert!(rel(area, reference) < 1e-11, "eps {eps}: {area} vs {reference}");
    }
}

#[test]
fn inverse_distance_error_decreases_with_qn() {
    for (eps, reference) in [(5e-2, 7.589782838781607), (5e-3, 9.256898207525425e-01)] {
        let surf = hairtie_test_surface(eps).unwrap();
        let errors: Vec<f64> = [9, 13, 18, 24, 31]
            .iter()
            .map(|&qn| rel(model_integrals(&surf, PI / 3.0, 0.0, qn).unwrap().inverse_distance, reference))
            .collect();
        for w in errors.windows(2) {
            assert!(w[1] <= w[0] || w[1] <= 1e-12, "eps {eps}: {errors:?}");
        }
    }
}
