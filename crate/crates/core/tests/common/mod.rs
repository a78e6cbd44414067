//! Independent oracles shared by the integration and acceptance tests.

#![allow(dead_code)]

use imhd::assembly::{Linearization, Method, ProblemConfig};
use imhd::bench::ExactSolution;
use imhd::fem::{quad_rule, FeSystem, FieldSolution};
use imhd::mesh::{Mesh, Point};

/// One global basis function evaluated at a point. Only the entries of its
/// own field are nonzero.
#[derive(Clone, Copy, Default)]
struct Probe {
    u: [f64; 2],
    gu: [[f64; 2]; 2],
    j: [f64; 2],
    div_j: f64,
    p: f64,
    phi: f64,
    th: f64,
    gth: [f64; 2],
}

fn area2(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
}

/// Barycentric coordinate of `x` for corner `k` of triangle `t` and its gradient.
fn hat(mesh: &Mesh, t: usize, k: usize, x: Point) -> (f64, [f64; 2]) {
    let v = mesh.triangles[t].map(|i| mesh.vertices[i]);
    let (a, b) = (v[(k + 1) % 3], v[(k + 2) % 3]);
    let d = area2(v[0], v[1], v[2]);
    (area2(x, a, b) / d, [(a[1] - b[1]) / d, (b[0] - a[0]) / d])
}

/// Every global basis function at a point `x` of triangle `t`, in global DOF order.
fn probes(sys: &FeSystem, t: usize, x: Point) -> Vec<Probe> {
    let mesh = sys.mesh();
    let l = sys.layout;
    let (nv, nt) = (mesh.num_vertices(), mesh.num_triangles());
    let ns = nv + nt;
    let mut out = vec![Probe::default(); l.total];
    let tri = mesh.triangles[t];
    let lam: Vec<(f64, [f64; 2])> = (0..3).map(|k| hat(mesh, t, k, x)).collect();
    let mut scalar = vec![(0.0, [0.0; 2]); ns];
    for k in 0..3 {
        scalar[tri[k]] = lam[k];
    }
    let b = 27.0 * lam[0].0 * lam[1].0 * lam[2].0;
    let gb = [0, 1].map(|d| {
        27.0 * (lam[0].1[d] * lam[1].0 * lam[2].0
            + lam[0].0 * lam[1].1[d] * lam[2].0
            + lam[0].0 * lam[1].0 * lam[2].1[d])
    });
    scalar[nv + t] = (b, gb);
    for c in 0..2 {
        for (i, &(v, g)) in scalar.iter().enumerate() {
            let pr = &mut out[l.u + c * ns + i];
            pr.u[c] = v;
            pr.gu[c] = g;
        }
    }
    let v = tri.map(|i| mesh.vertices[i]);
    let area = 0.5 * area2(v[0], v[1], v[2]);
    for e in 0..mesh.num_edges() {
        let [a, bb] = mesh.edges[e];
        let Some(k) = (0..3).find(|&k| tri[k] != a && tri[k] != bb) else { continue };
        if !(tri.contains(&a) && tri.contains(&bb)) {
            continue;
        }
        let opp = v[k];
        let (pa, pb) = (mesh.vertices[a], mesh.vertices[bb]);
        let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        let n = [(pb[1] - pa[1]) / len, -(pb[0] - pa[0]) / len];
        let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
        let outward = (mid[0] - opp[0]) * n[0] + (mid[1] - opp[1]) * n[1] > 0.0;
        let s = if outward { 1.0 } else { -1.0 };
        let c = s * len / (2.0 * area);
        let pr = &mut out[l.j + e];
        pr.j = [c * (x[0] - opp[0]), c * (x[1] - opp[1])];
        pr.div_j = 2.0 * c;
    }
    for k in 0..3 {
        out[l.p + tri[k]].p = lam[k].0;
        out[l.theta + tri[k]].th = lam[k].0;
        out[l.theta + tri[k]].gth = lam[k].1;
    }
    out[l.phi + t].phi = 1.0;
    out
}

fn combine(ps: &[Probe], coef: &[f64]) -> Probe {
    let mut r = Probe::default();
    for (p, &c) in ps.iter().zip(coef) {
        if c == 0.0 {
            continue;
        }
        for a in 0..2 {
            r.u[a] += c * p.u[a];
            r.j[a] += c * p.j[a];
            r.gth[a] += c * p.gth[a];
            for b in 0..2 {
                r.gu[a][b] += c * p.gu[a][b];
            }
        }
        r.div_j += c * p.div_j;
        r.p += c * p.p;
        r.phi += c * p.phi;
        r.th += c * p.th;
    }
    r
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// `(a.grad) b` for vector fields.
fn adv(a: [f64; 2], gb: [[f64; 2]; 2]) -> [f64; 2] {
    [dot(a, gb[0]), dot(a, gb[1])]
}

/// `c(w; u, v)` plus `h(w; theta, r)` at a point.
fn convection(w: [f64; 2], trial: &Probe, test: &Probe) -> f64 {
    let cu = 0.5 * (dot(adv(w, trial.gu), test.u) - dot(adv(w, test.gu), trial.u));
    let ct = 0.5 * (dot(w, trial.gth) * test.th - dot(w, test.gth) * trial.th);
    cu + ct
}

/// Dense system matrix and load vector, before boundary elimination, from a
/// brute-force loop over all pairs of global basis functions.
pub fn oracle_system(
    sys: &FeSystem,
    cfg: &ProblemConfig,
    lin: Linearization,
    prev: &FieldSolution,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mesh = sys.mesh();
    let l = sys.layout;
    let n = l.total;
    let rule = quad_rule(6).unwrap();
    let prev_x = prev.to_global(sys);
    let mut a = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];
    let (pr, ra, kappa, b3) = (cfg.pr, cfg.ra, cfg.kappa, cfg.b3);
    let dir = cfg.buoyancy_dir;
    for t in 0..mesh.num_triangles() {
        let v = mesh.triangles[t].map(|i| mesh.vertices[i]);
        for (lam, w) in rule.on(0.5 * area2(v[0], v[1], v[2])) {
            let x = [0, 1].map(|d| lam[0] * v[0][d] + lam[1] * v[1][d] + lam[2] * v[2][d]);
            let ps = probes(sys, t, x);
            let star = combine(&ps, &prev_x);
            let active: Vec<usize> = (0..n)
                .filter(|&i| {
                    let p = &ps[i];
                    p.u != [0.0; 2]
                        || p.gu != [[0.0; 2]; 2]
                        || p.j != [0.0; 2]
                        || p.div_j != 0.0
                        || p.p != 0.0
                        || p.phi != 0.0
                        || p.th != 0.0
                        || p.gth != [0.0; 2]
                })
                .collect();
            for &r in &active {
                let te = &ps[r];
                for &c in &active {
                    let tr = &ps[c];
                    let mut s = pr * (dot(tr.gu[0], te.gu[0]) + dot(tr.gu[1], te.gu[1]));
                    s += kappa * dot(tr.j, te.j);
                    s += -kappa * b3 * (tr.j[1] * te.u[0] - tr.j[0] * te.u[1]);
                    s += kappa * b3 * (te.j[1] * tr.u[0] - te.j[0] * tr.u[1]);
                    let div_u = |p: &Probe| p.gu[0][0] + p.gu[1][1];
                    s += -pr * tr.p * div_u(te) - pr * te.p * div_u(tr);
                    s += -kappa * tr.phi * te.div_j - kappa * te.phi * tr.div_j;
                    s += -pr * ra * tr.th * dot(dir, te.u);
                    s += dot(tr.gth, te.gth);
                    match lin {
                        Linearization::Initial | Linearization::Step(Method::Stokes) => {}
                        Linearization::Step(Method::Oseen) => s += convection(star.u, tr, te),
                        Linearization::Step(Method::Newton) => {
                            s += convection(star.u, tr, te);
                            // u -> c(u; w*, v) + h(u; theta*, r)
                            s += 0.5 * (dot(adv(tr.u, star.gu), te.u) - dot(adv(tr.u, te.gu), star.u));
                            s += 0.5 * (dot(tr.u, star.gth) * te.th - dot(tr.u, te.gth) * star.th);
                        }
                    }
                    a[r][c] += w * s;
                }
                let mut f = 0.0;
                if !cfg.zero_sources {
                    let fx = (cfg.force)(x);
                    let gx = (cfg.ohm_source)(x);
                    f += dot(fx, te.u) + kappa * dot(gx, te.j) + (cfg.heat_source)(x) * te.th;
                }
                let cstar = convection(star.u, &star, te);
                match lin {
                    Linearization::Step(Method::Stokes) => f -= cstar,
                    Linearization::Step(Method::Newton) => f += cstar,
                    _ => {}
                }
                rhs[r] += w * f;
                a[r][l.p_border] += w * te.p;
                if let Some(pb) = l.phi_border {
                    a[r][pb] += w * te.phi;
                }
            }
        }
    }
    a[l.p_border][l.p] = 1.0;
    if let Some(pb) = l.phi_border {
        a[pb][l.phi] = 1.0;
    }
    (a, rhs)
}

pub fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().zip(b).flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs())).fold(0.0, f64::max)
}

pub fn max_abs_diff_vec(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// Central finite-difference view of the exact fields at one point.
struct Fd<'a> {
    e: &'a ExactSolution,
    h1: f64,
    h2: f64,
}

impl Fd<'_> {
    /// Values `[u1, u2, p, j1, j2, phi, theta]`.
    fn val(&self, x: Point) -> [f64; 7] {
        let f = self.e.at(x);
        [f.u[0].v, f.u[1].v, f.p.v, f.j[0].v, f.j[1].v, f.phi.v, f.theta.v]
    }

    fn d1(&self, x: Point, dim: usize) -> [f64; 7] {
        let h = self.h1;
        let mut xp = x;
        let mut xm = x;
        xp[dim] += h;
        xm[dim] -= h;
        let (a, b) = (self.val(xp), self.val(xm));
        std::array::from_fn(|i| (a[i] - b[i]) / (2.0 * h))
    }

    /// Fourth-order second derivative along `dim`.
    fn d2(&self, x: Point, dim: usize) -> [f64; 7] {
        let h = self.h2;
        let at = |k: f64| {
            let mut y = x;
            y[dim] += k * h;
            self.val(y)
        };
        let (m2, m1, z, p1, p2) = (at(-2.0), at(-1.0), at(0.0), at(1.0), at(2.0));
        std::array::from_fn(|i| (-m2[i] + 16.0 * m1[i] - 30.0 * z[i] + 16.0 * p1[i] - p2[i]) / (12.0 * h * h))
    }
}

/// Largest mismatch, relative to the largest term (at least 1), between the stored sources
/// and the strong operator applied by finite differences, including the two
/// divergence constraints.
pub fn strong_form_mismatch(e: &ExactSolution, x: Point) -> f64 {
    // Near the re-entrant corner the second-difference step shrinks with the
    // distance so the truncation error stays relative to the local scale.
    let h2 = match e.domain {
        imhd::bench::ExactDomain::UnitSquare => 1e-3,
        imhd::bench::ExactDomain::LShape => (0.02 * x[0].hypot(x[1])).min(1e-3),
    };
    let fd = Fd { e, h1: 1e-5, h2 };
    let v = fd.val(x);
    let (dx, dy) = (fd.d1(x, 0), fd.d1(x, 1));
    let (dxx, dyy) = (fd.d2(x, 0), fd.d2(x, 1));
    let lap = |i: usize| dxx[i] + dyy[i];
    let u = [v[0], v[1]];
    let jxb = [v[4] * e.b3, -v[3] * e.b3];
    let uxb = [v[1] * e.b3, -v[0] * e.b3];
    let grad = |i: usize| [dx[i], dy[i]];
    let f = e.force(x);
    let g = e.ohm_source(x);
    let s = e.heat_source(x);
    let mut worst: f64 = 0.0;
    // Compares against the sum of `terms`, relative to the largest term.
    let mut check = |stored: f64, terms: &[f64]| {
        let scale = terms.iter().fold(1.0f64, |m, t| m.max(t.abs()));
        worst = worst.max((stored - terms.iter().sum::<f64>()).abs() / scale);
    };
    for c in 0..2 {
        check(
            f[c],
            &[
                -e.pr * lap(c),
                dot(u, grad(c)),
                e.pr * grad(2)[c],
                -e.kappa * jxb[c],
                -e.pr * e.ra * v[6] * e.buoyancy_dir[c],
            ],
        );
        check(g[c], &[v[3 + c], grad(5)[c], -uxb[c]]);
    }
    check(s, &[-lap(6), dot(u, grad(6))]);
    check(0.0, &[dx[0], dy[1]]);
    check(0.0, &[dx[3], dy[4]]);
    worst
}

/// Whether `x` lies in the domain with a margin that keeps FD stencils inside
/// and away from the re-entrant corner.
pub fn interior_with_margin(e: &ExactSolution, x: Point, m: f64) -> bool {
    match e.domain {
        imhd::bench::ExactDomain::UnitSquare => x.iter().all(|&c| c > m && c < 1.0 - m),
        imhd::bench::ExactDomain::LShape => {
            let inside_box = x.iter().all(|&c| c > -0.5 + m && c < 0.5 - m);
            let notch = x[0] > -m && x[1] < m;
            inside_box && !notch && (x[0].hypot(x[1]) > 0.05)
        }
    }
}

/// Gaussian elimination with partial pivoting on a dense copy.
pub fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &bi)| r.iter().copied().chain([bi]).collect()).collect();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
        m.swap(k, piv);
        assert!(m[k][k] != 0.0, "dense oracle: singular at column {k}");
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            if f != 0.0 {
                for j in k..=n {
                    m[i][j] -= f * m[k][j];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[k][j] * x[j]).sum();
        x[k] = (m[k][n] - s) / m[k][k];
    }
    x
}

/// Replaces prescribed rows by identity rows, leaving the columns in place.
pub fn pin_rows(a: &mut [Vec<f64>], b: &mut [f64], bcs: &[(usize, f64)]) {
    for &(d, g) in bcs {
        a[d].iter_mut().for_each(|v| *v = 0.0);
        a[d][d] = 1.0;
        b[d] = g;
    }
}
