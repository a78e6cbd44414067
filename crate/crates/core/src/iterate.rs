//! Nonlinear iteration driver: initial solve, method steps, stopping and divergence detection.

use std::fmt::Write as _;
use std::time::Instant;

use crate::assembly::{Linearization, Method, ProblemConfig, SystemAssembler};
use crate::error::Result;
use crate::fem::{divergence_l2, field_norms, remove_means, FeSystem, FieldNorms, FieldSolution};
use crate::linsolve::{self, LinearSolveStats};

/// Iterate `n` of a nonlinear solve.
#[derive(Clone, Debug)]
pub struct IterState {
    pub fields: FieldSolution,
    pub index: usize,
}

/// Successive differences after one step.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IterRecord {
    pub iter: usize,
    /// `|grad(u^n - u^{n-1})|_0 + |J^n - J^{n-1}|_div`.
    pub diff_u: f64,
    /// `|grad(theta^n - theta^{n-1})|_0`.
    pub diff_theta: f64,
    pub diff_p: f64,
    pub diff_phi: f64,
    /// `|div J^n|_0`.
    pub div_j: f64,
    /// Stopping quantity: `(diff_u + diff_theta) / max(norm, 1)`.
    pub rel_diff: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIter,
    Diverged,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIter => "max_iter",
            SolveStatus::Diverged => "diverged",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub method: Method,
    pub history: Vec<IterRecord>,
    pub status: SolveStatus,
    /// Number of method steps taken after the initial solve.
    pub iterations: usize,
    /// Initial solve first, then one entry per step.
    pub linear: Vec<LinearSolveStats>,
    pub seconds: f64,
    /// Why the run stopped early, when it diverged.
    pub failure: Option<String>,
}

/// One run in progress: assembled static parts plus the current iterate.
pub struct Solver<'a> {
    sys: &'a FeSystem,
    cfg: &'a ProblemConfig,
    assembler: SystemAssembler<'a>,
}

impl<'a> Solver<'a> {
    pub fn new(sys: &'a FeSystem, cfg: &'a ProblemConfig) -> Result<Self> {
        Ok(Solver { sys, cfg, assembler: SystemAssembler::new(sys, cfg)? })
    }

    fn solve(&self, lin: Linearization, prev: &FieldSolution) -> Result<(FieldSolution, LinearSolveStats)> {
        let ls = self.assembler.assemble(lin, prev)?;
        let (x, stats) = linsolve::solve(&ls.matrix, &ls.rhs)?;
        let mut fields = FieldSolution::from_global(self.sys, &x)?;
        remove_means(self.sys, &mut fields);
        Ok((fields, stats))
    }

    /// Convection-free coupled solve.
    pub fn initialize(&self) -> Result<(IterState, LinearSolveStats)> {
        let zero = FieldSolution::zeros(self.sys);
        let (fields, stats) = self.solve(Linearization::Initial, &zero)?;
        Ok((IterState { fields, index: 0 }, stats))
    }

    /// One step of `method` about `state`.
    pub fn step(&self, method: Method, state: &IterState) -> Result<(IterState, LinearSolveStats)> {
        let (fields, stats) = self.solve(Linearization::Step(method), &state.fields)?;
        Ok((IterState { fields, index: state.index + 1 }, stats))
    }

    pub fn run(&self) -> Result<(FieldSolution, SolveReport)> {
        let start = Instant::now();
        let method = self.cfg.method;
        let (mut state, stats) = self.initialize()?;
        let mut report = SolveReport {
            method,
            history: Vec::new(),
            status: SolveStatus::MaxIter,
            iterations: 0,
            linear: vec![stats],
            seconds: 0.0,
            failure: None,
        };
        if let Some(msg) = self.diverged(&field_norms(self.sys, &state.fields)) {
            report.status = SolveStatus::Diverged;
            report.failure = Some(msg);
        } else {
            for _ in 0..self.cfg.max_iter {
                let next = match self.step(method, &state) {
                    Ok((next, stats)) => {
                        report.linear.push(stats);
                        next
                    }
                    Err(e) => {
                        report.status = SolveStatus::Diverged;
                        report.failure = Some(e.to_string());
                        break;
                    }
                };
                report.iterations = next.index;
                let norms = field_norms(self.sys, &next.fields);
                let record = difference_record(self.sys, &next, &state.fields, &norms);
                report.history.push(record);
                state = next;
                if let Some(msg) = self.diverged(&norms) {
                    report.status = SolveStatus::Diverged;
                    report.failure = Some(msg);
                    break;
                }
                if record.rel_diff <= self.cfg.tol {
                    report.status = SolveStatus::Converged;
                    break;
                }
            }
        }
        report.seconds = start.elapsed().as_secs_f64();
        Ok((state.fields, report))
    }

    fn diverged(&self, n: &FieldNorms) -> Option<String> {
        if !n.is_finite() {
            Some("non-finite iterate".into())
        } else if n.max() > self.cfg.divergence_cap {
            Some(format!("iterate norm {:.3e} exceeds cap {:.3e}", n.max(), self.cfg.divergence_cap))
        } else {
            None
        }
    }
}

fn difference_record(sys: &FeSystem, next: &IterState, prev: &FieldSolution, norms: &FieldNorms) -> IterRecord {
    let d = field_norms(sys, &next.fields.sub(prev));
    let diff_u = d.u_h1 + d.j_div;
    let scale = (norms.u_h1 + norms.j_div + norms.theta_h1).max(1.0);
    IterRecord {
        iter: next.index,
        diff_u,
        diff_theta: d.theta_h1,
        diff_p: d.p_l2,
        diff_phi: d.phi_l2,
        div_j: divergence_l2(sys, &next.fields),
        rel_diff: (diff_u + d.theta_h1) / scale,
    }
}

/// Convection-free solve from the configuration.
pub fn initialize(sys: &FeSystem, cfg: &ProblemConfig) -> Result<IterState> {
    Ok(Solver::new(sys, cfg)?.initialize()?.0)
}

/// One step of the configured method.
pub fn step(sys: &FeSystem, cfg: &ProblemConfig, state: &IterState) -> Result<IterState> {
    Ok(Solver::new(sys, cfg)?.step(cfg.method, state)?.0)
}

/// Initial solve followed by method steps until the relative successive
/// difference drops below `cfg.tol`, `cfg.max_iter` steps are taken, or the
/// iterates blow up.
pub fn run(sys: &FeSystem, cfg: &ProblemConfig) -> Result<(FieldSolution, SolveReport)> {
    Solver::new(sys, cfg)?.run()
}

pub const HISTORY_HEADER: &str = "iter,diff_u,diff_theta,diff_p,diff_phi,divJ";

pub fn history_csv(report: &SolveReport) -> String {
    let mut s = String::from(HISTORY_HEADER);
    s.push('\n');
    for r in &report.history {
        let _ =
            writeln!(s, "{},{:e},{:e},{:e},{:e},{:e}", r.iter, r.diff_u, r.diff_theta, r.diff_p, r.diff_phi, r.div_j);
    }
    s
}

/// Least-squares slope of `log d_{n+1}` against `log d_n` over the last
/// `window` pairs whose later difference stays above `floor`.
pub fn convergence_order(diffs: &[f64], window: usize, floor: f64) -> Option<f64> {
    let pairs: Vec<(f64, f64)> =
        diffs.windows(2).filter(|w| w[0] > floor && w[1] > floor).map(|w| (w[0].ln(), w[1].ln())).collect();
    let tail = &pairs[pairs.len().saturating_sub(window)..];
    if tail.len() < 2 {
        return None;
    }
    let n = tail.len() as f64;
    let mx = tail.iter().map(|p| p.0).sum::<f64>() / n;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
