//! Symmetric quadrature rules on triangles, in barycentric coordinates.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 3]>,
    /// Reference weights; they sum to 1/2, the area of the reference triangle.
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Iterate `(barycentric point, physical weight)` on a triangle of the given area.
    pub fn on(&self, area: f64) -> impl Iterator<Item = ([f64; 3], f64)> + '_ {
        self.points.iter().zip(&self.weights).map(move |(p, w)| (*p, 2.0 * area * w))
    }
}

fn push_orbit3(points: &mut Vec<[f64; 3]>, weights: &mut Vec<f64>, a: f64, b: f64, w: f64) {
    for p in [[a, b, b], [b, a, b], [b, b, a]] {
        points.push(p);
        weights.push(0.5 * w);
    }
}

fn push_orbit6(points: &mut Vec<[f64; 3]>, weights: &mut Vec<f64>, a: f64, b: f64, c: f64, w: f64) {
    for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
        points.push(p);
        weights.push(0.5 * w);
    }
}

/// Positive-weight rule exact for polynomials of degree `min_degree` or less.
pub fn quad_rule(min_degree: usize) -> Result<QuadratureRule> {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let degree = match min_degree {
        0 | 1 => {
            points.push([1.0 / 3.0; 3]);
            weights.push(0.5);
            1
        }
        2 => {
            push_orbit3(&mut points, &mut weights, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
            2
        }
        3..=6 => {
            // Dunavant, 12 points.
            push_orbit3(&mut points, &mut weights, 0.501426509658179, 0.249286745170910, 0.116786275726379);
            push_orbit3(&mut points, &mut weights, 0.873821971016996, 0.063089014491502, 0.050844906370207);
            push_orbit6(
                &mut points,
                &mut weights,
                0.053145049844817,
                0.310352451033784,
                0.636502499121399,
                0.082851075618374,
            );
            // The tabulated digits sum to 1 only to ~1e-15; fix the barycentric
            // coordinates and weights up to round-off.
            for p in points.iter_mut() {
                let s: f64 = p.iter().sum();
                p.iter_mut().for_each(|v| *v /= s);
            }
            let s: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w *= 0.5 / s);
            6
        }
        d => return Err(Error::UnsupportedDegree(d)),
    };
    Ok(QuadratureRule { points, weights, degree })
}

/// Two-point Gauss rule on `[0, 1]`: `(parameter, weight)` pairs with weights summing to 1.
pub fn gauss_segment2() -> [(f64, f64); 2] {
    let d = 0.5 / 3f64.sqrt();
    [(0.5 - d, 0.5), (0.5 + d, 0.5)]
}
