//! Second-order forward-mode differentiation in two variables.
//!
//! A [`Jet`] carries a value with its gradient and Hessian, so closed-form
//! fields written with jets yield the derivatives needed to manufacture
//! source terms without hand differentiation.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Jet { v, ..Default::default() }
    }

    pub fn x(x: f64) -> Self {
        Jet { v: x, dx: 1.0, ..Default::default() }
    }

    pub fn y(y: f64) -> Self {
        Jet { v: y, dy: 1.0, ..Default::default() }
    }

    pub fn grad(&self) -> [f64; 2] {
        [self.dx, self.dy]
    }

    pub fn laplacian(&self) -> f64 {
        self.dxx + self.dyy
    }

    /// `g(self)` given `g`, `g'` and `g''` at `self.v`.
    pub fn chain(&self, g: f64, g1: f64, g2: f64) -> Self {
        Jet {
            v: g,
            dx: g1 * self.dx,
            dy: g1 * self.dy,
            dxx: g2 * self.dx * self.dx + g1 * self.dxx,
            dxy: g2 * self.dx * self.dy + g1 * self.dxy,
            dyy: g2 * self.dy * self.dy + g1 * self.dyy,
        }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn powf(self, a: f64) -> Self {
        let v = self.v;
        self.chain(v.powf(a), a * v.powf(a - 1.0), a * (a - 1.0) * v.powf(a - 2.0))
    }

    pub fn powi(self, n: i32) -> Self {
        let v = self.v;
        let nf = n as f64;
        self.chain(v.powi(n), nf * v.powi(n - 1), nf * (nf - 1.0) * v.powi(n - 2))
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn scale(self, a: f64) -> Self {
        Jet { v: a * self.v, dx: a * self.dx, dy: a * self.dy, dxx: a * self.dxx, dxy: a * self.dxy, dyy: a * self.dyy }
    }
}

/// Polar coordinates `(r, angle)` of `(x, y)` with the angle in `[0, 2 pi)`.
pub fn polar(x: f64, y: f64) -> (Jet, Jet) {
    let r = (Jet::x(x) * Jet::x(x) + Jet::y(y) * Jet::y(y)).sqrt();
    let r2 = x * x + y * y;
    let r4 = r2 * r2;
    let mut a = y.atan2(x);
    if a < 0.0 {
        a += 2.0 * std::f64::consts::PI;
    }
    let angle =
        Jet { v: a, dx: -y / r2, dy: x / r2, dxx: 2.0 * x * y / r4, dxy: (y * y - x * x) / r4, dyy: -2.0 * x * y / r4 };
    (r, angle)
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            dxx: self.dxx + o.dxx,
            dxy: self.dxy + o.dxy,
            dyy: self.dyy + o.dyy,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            dx: self.dx * o.v + self.v * o.dx,
            dy: self.dy * o.v + self.v * o.dy,
            dxx: self.dxx * o.v + 2.0 * self.dx * o.dx + self.v * o.dxx,
            dxy: self.dxy * o.v + self.dx * o.dy + self.dy * o.dx + self.v * o.dxy,
            dyy: self.dyy * o.v + 2.0 * self.dy * o.dy + self.v * o.dyy,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let v = o.v;
        self * o.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, c: f64) -> Jet {
        self.v += c;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, c: f64) -> Jet {
        self.v -= c;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, j: Jet) -> Jet {
        j.scale(self)
    }
}
