//! Velocity samples along the centre lines of a rectangular domain.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fem::{FeSystem, FieldSolution};
use crate::mesh::{Domain, Point};

pub const PROFILE_POINTS: usize = 101;

#[derive(Clone, Debug, PartialEq)]
pub struct Profiles {
    /// Abscissae along the horizontal midline.
    pub x: Vec<f64>,
    /// Vertical velocity on the horizontal midline.
    pub u2_mid: Vec<f64>,
    /// Ordinates along the vertical midline.
    pub y: Vec<f64>,
    /// Horizontal velocity on the vertical midline.
    pub u1_mid: Vec<f64>,
}

fn velocity(s: &FieldSolution, sys: &FeSystem, p: Point) -> Result<Point> {
    let (t, lam) = sys.mesh().locate(p).ok_or(Error::PointOutsideDomain(p))?;
    Ok(s.velocity_at(sys, &sys.element(t), lam))
}

/// `u2` along `y = (y0+y1)/2` and `u1` along `x = (x0+x1)/2`, at
/// [`PROFILE_POINTS`] uniformly spaced points each.
pub fn midline_profiles(s: &FieldSolution, sys: &FeSystem) -> Result<Profiles> {
    let [x0, x1, y0, y1] = match sys.mesh().domain {
        Domain::Rect { x0, x1, y0, y1 } => [x0, x1, y0, y1],
        Domain::LShape => [-0.5, 0.5, -0.5, 0.5],
    };
    let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let n = PROFILE_POINTS - 1;
    let x: Vec<f64> = (0..=n).map(|i| x0 + (x1 - x0) * i as f64 / n as f64).collect();
    let y: Vec<f64> = (0..=n).map(|i| y0 + (y1 - y0) * i as f64 / n as f64).collect();
    let u2_mid = x.iter().map(|&xi| velocity(s, sys, [xi, ym]).map(|v| v[1])).collect::<Result<_>>()?;
    let u1_mid = y.iter().map(|&yi| velocity(s, sys, [xm, yi]).map(|v| v[0])).collect::<Result<_>>()?;
    Ok(Profiles { x, u2_mid, y, u1_mid })
}

pub fn profiles_csv(p: &Profiles) -> String {
    let mut s = String::from("i,x,u2_mid,y,u1_mid\n");
    for i in 0..p.x.len() {
        let _ = writeln!(s, "{},{},{:e},{},{:e}", i, p.x[i], p.u2_mid[i], p.y[i], p.u1_mid[i]);
    }
    s
}

/// Number of strict sign changes, ignoring samples with `|v| <= eps`.
pub fn sign_changes(v: &[f64], eps: f64) -> usize {
    let signs: Vec<bool> = v.iter().filter(|x| x.abs() > eps).map(|&x| x > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Trapezoidal integral of samples on a uniform grid.
pub fn trapezoid(x: &[f64], v: &[f64]) -> f64 {
    x.windows(2).zip(v.windows(2)).map(|(xs, vs)| 0.5 * (xs[1] - xs[0]) * (vs[0] + vs[1])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_change_count() {
        assert_eq!(sign_changes(&[0.0, 1.0, 2.0, -1.0, 0.0, -3.0, 1e-20], 1e-12), 1);
        assert_eq!(sign_changes(&[], 0.0), 0);
    }

    #[test]
    fn trapezoid_exact_for_linear() {
        let x: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let v: Vec<f64> = x.iter().map(|t| 2.0 * t - 1.0).collect();
        assert!(trapezoid(&x, &v).abs() < 1e-15);
    }
}
