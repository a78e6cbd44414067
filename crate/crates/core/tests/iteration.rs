mod common;

use std::sync::Arc;

use common::{dense_solve, max_abs_diff_vec, oracle_system, pin_rows};
use imhd::assembly::{Linearization, Method, ProblemConfig, SystemAssembler};
use imhd::bench::manufactured_smooth_2d;
use imhd::fem::{field_norms, potential_integral, pressure_integral, remove_means, FeSystem, FieldSolution};
use imhd::iterate::{initialize, run, step, IterState, SolveStatus, Solver};
use imhd::mesh::{build_structured_rect, BoundaryTag};

fn unit_square(n: usize, cfg: &ProblemConfig) -> FeSystem {
    let mesh = build_structured_rect(n, n, [[0.0, 1.0], [0.0, 1.0]]).unwrap();
    FeSystem::new(mesh, cfg.boundary_mode, &cfg.temperature_walls).unwrap()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn all_fields(s: &FieldSolution) -> Vec<f64> {
    [&s.u, &s.j, &s.p, &s.phi, &s.theta].into_iter().flatten().copied().collect()
}

#[test]
fn zero_data_gives_zero_state() {
    let cfg = ProblemConfig::default();
    let sys = unit_square(3, &cfg);
    let s = initialize(&sys, &cfg).unwrap();
    assert_eq!(s.index, 0);
    assert_eq!(max_abs(&all_fields(&s.fields)), 0.0);
    let (_, rep) = run(&sys, &cfg).unwrap();
    assert_eq!(rep.status, SolveStatus::Converged);
    assert_eq!(rep.iterations, 1);
}

#[test]
fn decoupled_temperature_matches_laplace_oracle() {
    let cfg = ProblemConfig { ra: 0.0, b3: 0.0, ..ProblemConfig::default() }.with_sources(
        Arc::new(|_| [0.0, 0.0]),
        Arc::new(|_| [0.0, 0.0]),
        Arc::new(|_| 1.0),
    );
    let sys = unit_square(4, &cfg);
    let s = initialize(&sys, &cfg).unwrap().fields;
    assert!(max_abs(&s.u) < 1e-14, "velocity {:e}", max_abs(&s.u));
    assert!(max_abs(&s.j) < 1e-14);

    // Independent P1 Laplace solve with unit load and zero boundary values.
    let mesh = sys.mesh();
    let nv = mesh.num_vertices();
    let mut k = vec![vec![0.0; nv]; nv];
    let mut f = vec![0.0; nv];
    for t in 0..mesh.num_triangles() {
        let tri = mesh.triangles[t];
        let p = tri.map(|i| mesh.vertices[i]);
        let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
        let g: Vec<[f64; 2]> = (0..3)
            .map(|a| {
                let (b, c) = (p[(a + 1) % 3], p[(a + 2) % 3]);
                [(b[1] - c[1]) / (2.0 * area), (c[0] - b[0]) / (2.0 * area)]
            })
            .collect();
        for a in 0..3 {
            f[tri[a]] += area / 3.0;
            for b in 0..3 {
                k[tri[a]][tri[b]] += area * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
            }
        }
    }
    let bcs: Vec<(usize, f64)> =
        (0..nv).filter(|&v| mesh.vertex_tags[v] != BoundaryTag::Interior).map(|v| (v, 0.0)).collect();
    pin_rows(&mut k, &mut f, &bcs);
    let th = dense_solve(&k, &f);
    assert!(max_abs_diff_vec(&th, &s.theta) <= 1e-12);
    assert!(max_abs(&s.theta) > 1e-3);
}

fn oracle_initial_solve(n: usize) {
    let exact = manufactured_smooth_2d();
    let cfg = exact.config(Method::Oseen);
    let sys = unit_square(n, &cfg);
    let s = initialize(&sys, &cfg).unwrap().fields;
    let norms = field_norms(&sys, &s);
    assert!(norms.is_finite() && norms.u_h1 > 0.0 && norms.theta_h1 > 0.0);

    let (mut a, mut b) = oracle_system(&sys, &cfg, Linearization::Initial, &FieldSolution::zeros(&sys));
    let bcs = SystemAssembler::new(&sys, &cfg).unwrap().boundary_values().to_vec();
    pin_rows(&mut a, &mut b, &bcs);
    let x = dense_solve(&a, &b);
    let mut o = FieldSolution::from_global(&sys, &x).unwrap();
    remove_means(&sys, &mut o);
    let d = max_abs_diff_vec(&all_fields(&o), &all_fields(&s));
    assert!(d <= 1e-9, "n = {n}: {d:e}");
}

#[test]
fn initial_solve_matches_dense_oracle_n2() {
    oracle_initial_solve(2);
}

#[test]
fn initial_solve_matches_dense_oracle_n8() {
    oracle_initial_solve(8);
}

#[test]
fn oseen_step_from_zero_is_the_initial_solve() {
    let exact = manufactured_smooth_2d();
    let cfg = exact.config(Method::Oseen);
    let sys = unit_square(4, &cfg);
    let init = initialize(&sys, &cfg).unwrap();
    let zero = IterState { fields: FieldSolution::zeros(&sys), index: 0 };
    let s = step(&sys, &cfg, &zero).unwrap();
    assert_eq!(s.index, 1);
    assert!(max_abs_diff_vec(&all_fields(&s.fields), &all_fields(&init.fields)) < 1e-13);
}

#[test]
fn linear_problem_converges_in_one_step() {
    let cfg = ProblemConfig { ra: 0.0, temperature_bc: Arc::new(|p| p[0] + 2.0 * p[1]), ..ProblemConfig::default() };
    let sys = unit_square(4, &cfg);
    for m in Method::ALL {
        let cfg = ProblemConfig { method: m, ..cfg.clone() };
        let (s, rep) = run(&sys, &cfg).unwrap();
        assert_eq!(rep.status, SolveStatus::Converged, "{m}");
        assert_eq!(rep.iterations, 1, "{m}");
        assert!(max_abs(&s.u) < 1e-13);
        // Linear data is reproduced exactly.
        for (v, p) in sys.mesh().vertices.iter().enumerate() {
            assert!((s.theta[v] - (p[0] + 2.0 * p[1])).abs() < 1e-12);
        }
    }
}

#[test]
fn converged_state_is_a_fixed_point_of_every_method() {
    let exact = manufactured_smooth_2d();
    let cfg = ProblemConfig { tol: 1e-13, ..exact.config(Method::Newton) };
    let sys = unit_square(8, &cfg);
    let (s, rep) = run(&sys, &cfg).unwrap();
    assert_eq!(rep.status, SolveStatus::Converged);
    let state = IterState { fields: s, index: rep.iterations };
    let solver = Solver::new(&sys, &cfg).unwrap();
    for m in Method::ALL {
        let (next, _) = solver.step(m, &state).unwrap();
        let d = field_norms(&sys, &next.fields.sub(&state.fields));
        assert!(d.max() <= 1e-9, "{m}: {d:?}");
    }
}

#[test]
fn every_iterate_is_charge_conservative_with_zero_means() {
    let exact = manufactured_smooth_2d();
    for m in Method::ALL {
        let cfg = exact.config(m);
        let sys = unit_square(8, &cfg);
        let solver = Solver::new(&sys, &cfg).unwrap();
        let (mut state, _) = solver.initialize().unwrap();
        for _ in 0..6 {
            assert!(pressure_integral(&sys, &state.fields).abs() <= 1e-10);
            assert!(potential_integral(&sys, &state.fields).abs() <= 1e-10);
            assert!(imhd::fem::divergence_l2(&sys, &state.fields) <= 1e-10);
            state = solver.step(m, &state).unwrap().0;
        }
        let (_, rep) = run(&sys, &cfg).unwrap();
        assert!(rep.history.iter().all(|r| r.div_j <= 1e-10));
        let tail: Vec<f64> = rep.history.iter().rev().take(3).map(|r| r.rel_diff).collect();
        assert!(tail.windows(2).all(|w| w[0] <= w[1]), "{m}: {tail:?}");
    }
}

#[test]
fn blow_up_is_reported_as_divergence() {
    let exact = manufactured_smooth_2d();
    let cfg = ProblemConfig { divergence_cap: 1e-3, ..exact.config(Method::Oseen) };
    let sys = unit_square(4, &cfg);
    let (_, rep) = run(&sys, &cfg).unwrap();
    assert_eq!(rep.status, SolveStatus::Diverged);
    assert!(rep.failure.unwrap().contains("cap"));
}

#[test]
fn max_iter_status() {
    let exact = manufactured_smooth_2d();
    let cfg = ProblemConfig { tol: 1e-15, max_iter: 2, ..exact.config(Method::Stokes) };
    let sys = unit_square(4, &cfg);
    let (_, rep) = run(&sys, &cfg).unwrap();
    assert_eq!(rep.status, SolveStatus::MaxIter);
    assert_eq!(rep.iterations, 2);
    assert_eq!(rep.history.len(), 2);
    assert_eq!(rep.linear.len(), 3);
}

#[test]
fn repeated_runs_are_bit_identical() {
    let exact = manufactured_smooth_2d();
    let cfg = exact.config(Method::Newton);
    let sys = unit_square(6, &cfg);
    let (a, ra) = run(&sys, &cfg).unwrap();
    let (b, rb) = run(&sys, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(ra.history, rb.history);
}
