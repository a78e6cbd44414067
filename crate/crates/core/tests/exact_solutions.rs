mod common;

use std::f64::consts::PI;

use common::{interior_with_margin, strong_form_mismatch};
use imhd::bench::{corner_exponent, lshape_singular, manufactured_smooth_2d, ExactSolution};
use proptest::prelude::*;

fn variants() -> Vec<ExactSolution> {
    let mut v = Vec::new();
    for e in [manufactured_smooth_2d(), lshape_singular()] {
        v.push(e.clone());
        v.push(e.clone().with_params(0.71, 1e4, 2.5, -3.0));
        v.push(e.with_params(7.0, 0.0, 0.3, 0.0));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sources_match_finite_differences(x in -0.5f64..1.0, y in -0.5f64..1.0) {
        for e in variants() {
            if !interior_with_margin(&e, [x, y], 0.01) {
                continue;
            }
            let m = strong_form_mismatch(&e, [x, y]);
            prop_assert!(m <= 1e-6, "{} at ({x}, {y}): {m:e}", e.name);
        }
    }
}

#[test]
fn smooth_fields_vanish_on_the_boundary() {
    let e = manufactured_smooth_2d();
    for i in 0..=20 {
        let s = i as f64 / 20.0;
        for p in [[s, 0.0], [s, 1.0], [0.0, s], [1.0, s]] {
            let f = e.at(p);
            assert!(f.u[0].v.abs() < 1e-15 && f.u[1].v.abs() < 1e-15 && f.theta.v.abs() < 1e-15, "{p:?}");
            // Zero normal current on the walls.
            let n = if p[0] == 0.0 || p[0] == 1.0 { 0 } else { 1 };
            assert!(f.j[n].v.abs() < 1e-15);
        }
    }
}

#[test]
fn corner_velocity_vanishes_on_reentrant_walls() {
    let e = lshape_singular();
    for i in 1..=10 {
        let r = 0.05 * i as f64;
        for p in [[r, 0.0], [0.0, -r]] {
            let u = e.at(p).velocity();
            assert!(u[0].abs() < 1e-13 && u[1].abs() < 1e-13, "{p:?}: {u:?}");
        }
    }
    assert_eq!(e.at([0.0, 0.0]).velocity(), [0.0, 0.0]);
}

#[test]
fn corner_current_is_the_gradient_of_a_harmonic() {
    let e = lshape_singular();
    for &(r, t) in &[(0.1, 0.3), (0.3, 2.0), (0.4, 4.5)] {
        let p = [r * f64::cos(t), r * f64::sin(t)];
        let f = e.at(p);
        // grad(r^{2/3} sin(2t/3)) in polar form.
        let gr = 2.0 / 3.0 * r.powf(-1.0 / 3.0) * (2.0 * t / 3.0).sin();
        let gt = 2.0 / 3.0 * r.powf(-1.0 / 3.0) * (2.0 * t / 3.0).cos();
        let want = [gr * t.cos() - gt * t.sin(), gr * t.sin() + gt * t.cos()];
        assert!((f.j[0].v - want[0]).abs() < 1e-13 && (f.j[1].v - want[1]).abs() < 1e-13);
        assert!(f.current_div().abs() < 1e-12);
    }
}

#[test]
fn corner_exponent_solves_its_equation() {
    let mu = corner_exponent();
    let alpha = 1.5 * PI;
    assert!((mu * alpha.sin() + (mu * alpha).sin()).abs() < 1e-14);
    assert!((mu - 0.5444837367825).abs() < 1e-12);
}
