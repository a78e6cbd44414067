//! Mesh-refinement studies with observed convergence rates.

use std::fmt::Write as _;

use crate::assembly::{Method, ProblemConfig};
use crate::bench::errors::{error_norms, ErrorReport};
use crate::bench::exact::ExactSolution;
use crate::error::{Error, Result};
use crate::fem::FeSystem;
use crate::iterate::{run, SolveStatus};

pub const STUDY_HEADER: &str =
    "h,err_u_h1,rate_u,err_p_l2,rate_p,err_J_div,rate_J,err_phi_l2,rate_phi,err_theta_h1,rate_theta,divJ,iters,seconds";

/// One refinement level: its errors, or why it failed.
#[derive(Clone, Debug)]
pub struct StudyLevel {
    pub n: usize,
    pub h: f64,
    pub status: Option<SolveStatus>,
    pub report: Option<ErrorReport>,
    pub failure: Option<String>,
}

/// Observed orders between consecutive successful levels, in report order
/// `[u, p, J, phi, theta]`.
#[derive(Clone, Debug)]
pub struct StudyTable {
    pub levels: Vec<StudyLevel>,
    pub rates: Vec<Option<[f64; 5]>>,
}

fn errors(r: &ErrorReport) -> [f64; 5] {
    [r.err_u_h1, r.err_p_l2, r.err_j_div, r.err_phi_l2, r.err_theta_h1]
}

pub fn rate(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (e_coarse / e_fine).ln() / (h_coarse / h_fine).ln()
}

impl StudyTable {
    /// Rates of the finest pair of levels.
    pub fn final_rates(&self) -> Option<[f64; 5]> {
        *self.rates.last()?
    }

    pub fn to_csv(&self, with_timing: bool) -> String {
        let mut s = String::from(STUDY_HEADER);
        s.push('\n');
        for (lvl, rates) in self.levels.iter().zip(&self.rates) {
            let Some(r) = &lvl.report else {
                let _ = writeln!(s, "{:e},,,,,,,,,,,,failed,", lvl.h);
                continue;
            };
            let e = errors(r);
            let _ = write!(s, "{:e}", r.h);
            for k in 0..5 {
                let rt = rates.map(|x| format!("{:.4}", x[k])).unwrap_or_default();
                let _ = write!(s, ",{:e},{}", e[k], rt);
            }
            let secs = if with_timing { format!("{:.3}", r.seconds) } else { String::new() };
            let _ = writeln!(s, ",{:e},{},{}", r.div_j, r.iterations, secs);
        }
        s
    }
}

/// Solves `exact` with `method` on each level `n` and tabulates errors and
/// rates. Levels that fail are kept as failed rows.
pub fn convergence_study(exact: &ExactSolution, method: Method, levels: &[usize]) -> Result<StudyTable> {
    convergence_study_with(exact, &exact.config(method), levels)
}

/// Study with an explicit run configuration, e.g. custom stopping parameters.
pub fn convergence_study_with(exact: &ExactSolution, cfg: &ProblemConfig, levels: &[usize]) -> Result<StudyTable> {
    if levels.len() < 2 {
        return Err(Error::InvalidConfig("a convergence study needs at least two levels".into()));
    }
    let mut out = Vec::new();
    for &n in levels {
        let mesh = exact.mesh(n)?;
        let h = mesh.h;
        let sys = FeSystem::new(mesh, cfg.boundary_mode, &cfg.temperature_walls)?;
        let level = match run(&sys, cfg) {
            Ok((sol, rep)) if rep.status == SolveStatus::Converged => {
                let mut r = error_norms(&sol, exact, &sys);
                r.iterations = rep.iterations;
                r.seconds = rep.seconds;
                StudyLevel { n, h, status: Some(rep.status), report: Some(r), failure: None }
            }
            Ok((_, rep)) => StudyLevel {
                n,
                h,
                status: Some(rep.status),
                report: None,
                failure: Some(rep.failure.unwrap_or_else(|| rep.status.name().to_string())),
            },
            Err(e) => StudyLevel { n, h, status: None, report: None, failure: Some(e.to_string()) },
        };
        out.push(level);
    }
    let mut rates = vec![None];
    for w in out.windows(2) {
        rates.push(match (&w[0].report, &w[1].report) {
            (Some(a), Some(b)) => {
                let (ea, eb) = (errors(a), errors(b));
                Some([0, 1, 2, 3, 4].map(|k| rate(ea[k], eb[k], a.h, b.h)))
            }
            _ => None,
        });
    }
    Ok(StudyTable { levels: out, rates })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halving_rate() {
        assert!((rate(1.0, 0.25, 0.1, 0.05) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn failed_rows_and_empty_first_rates() {
        let ok = ErrorReport { h: 0.5, err_u_h1: 1.0, ..Default::default() };
        let t = StudyTable {
            levels: vec![
                StudyLevel { n: 2, h: 0.5, status: None, report: Some(ok), failure: None },
                StudyLevel { n: 4, h: 0.25, status: None, report: None, failure: Some("x".into()) },
            ],
            rates: vec![None, None],
        };
        let csv = t.to_csv(false);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], STUDY_HEADER);
        assert_eq!(lines[1].split(',').count(), 14);
        assert_eq!(lines[1].split(',').nth(2), Some(""));
        assert!(lines[2].contains("failed"));
        assert_eq!(lines[2].split(',').count(), 14);
    }
}
