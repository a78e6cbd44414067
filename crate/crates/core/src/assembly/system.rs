//! Global linear systems for the initial solve and each nonlinear step.

use crate::assembly::config::{Linearization, Method, ProblemConfig};
use crate::assembly::csr::{CsrMatrix, Triplets};
use crate::assembly::forms::{
    assemble_a0, assemble_b, assemble_convection, assemble_convection_advector, assemble_convection_load,
    assemble_diffusion_theta, assemble_loads, assemble_q, ConvectionTarget,
};
use crate::error::{Error, Result};
use crate::fem::{FeSystem, FieldSolution};

/// Matrix and right-hand side with essential conditions already eliminated.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
}

/// Caches the parts of the system that do not change between iterations.
pub struct SystemAssembler<'a> {
    sys: &'a FeSystem,
    static_part: Triplets,
    loads: Vec<f64>,
    bcs: Vec<(usize, f64)>,
}

impl<'a> SystemAssembler<'a> {
    pub fn new(sys: &'a FeSystem, cfg: &ProblemConfig) -> Result<Self> {
        cfg.validate()?;
        let mut static_part = Triplets::new(sys.total());
        assemble_a0(sys, cfg, &mut static_part);
        assemble_b(sys, cfg, &mut static_part);
        assemble_q(sys, cfg, &mut static_part);
        assemble_diffusion_theta(sys, &mut static_part);
        let loads = assemble_loads(sys, cfg);
        let bcs = sys.boundary_values(&*cfg.velocity_bc, &*cfg.temperature_bc);
        Ok(SystemAssembler { sys, static_part, loads, bcs })
    }

    pub fn boundary_values(&self) -> &[(usize, f64)] {
        &self.bcs
    }

    /// Matrix and right-hand side before boundary elimination.
    pub fn raw(&self, lin: Linearization, prev: &FieldSolution) -> (Triplets, Vec<f64>) {
        let sys = self.sys;
        let mut t = self.static_part.clone();
        let mut rhs = self.loads.clone();
        let (u, th) = (&prev.u, &prev.theta);
        let mut add = |v: Vec<f64>, sign: f64| {
            for (r, x) in rhs.iter_mut().zip(v) {
                *r += sign * x;
            }
        };
        match lin {
            Linearization::Initial => {}
            Linearization::Step(Method::Stokes) => {
                add(assemble_convection_load(sys, u, u, ConvectionTarget::Momentum), -1.0);
                add(assemble_convection_load(sys, u, th, ConvectionTarget::Temperature), -1.0);
            }
            Linearization::Step(Method::Oseen) => {
                assemble_convection(sys, u, ConvectionTarget::Momentum, &mut t);
                assemble_convection(sys, u, ConvectionTarget::Temperature, &mut t);
            }
            Linearization::Step(Method::Newton) => {
                assemble_convection(sys, u, ConvectionTarget::Momentum, &mut t);
                assemble_convection(sys, u, ConvectionTarget::Temperature, &mut t);
                assemble_convection_advector(sys, u, th, &mut t);
                add(assemble_convection_load(sys, u, u, ConvectionTarget::Momentum), 1.0);
                add(assemble_convection_load(sys, u, th, ConvectionTarget::Temperature), 1.0);
            }
        }
        (t, rhs)
    }

    pub fn assemble(&self, lin: Linearization, prev: &FieldSolution) -> Result<LinearSystem> {
        if lin != Linearization::Initial {
            let expected = 2 * self.sys.layout.n_scalar_u;
            if prev.u.len() != expected {
                return Err(Error::DimensionMismatch { expected, got: prev.u.len() });
            }
        }
        let (t, mut rhs) = self.raw(lin, prev);
        let mut matrix = t.to_csr();
        apply_essential_bc(&mut matrix, &mut rhs, &self.bcs);
        Ok(LinearSystem { matrix, rhs })
    }
}

/// One-shot assembly of the system for `lin` around `prev`.
pub fn build_method_system(
    sys: &FeSystem,
    cfg: &ProblemConfig,
    lin: Linearization,
    prev: &FieldSolution,
) -> Result<LinearSystem> {
    SystemAssembler::new(sys, cfg)?.assemble(lin, prev)
}

/// Symmetric elimination of prescribed DOFs: constrained rows and columns are
/// replaced by the identity, and the known column contributions move to the
/// right-hand side of the free rows. Eliminated entries are dropped from the
/// sparsity pattern.
pub fn apply_essential_bc(a: &mut CsrMatrix, rhs: &mut [f64], bcs: &[(usize, f64)]) {
    let n = a.n;
    let mut value = vec![None; n];
    for &(d, v) in bcs {
        value[d] = Some(v);
    }
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::with_capacity(a.nnz());
    let mut values = Vec::with_capacity(a.nnz());
    row_ptr.push(0);
    for i in 0..n {
        if let Some(g) = value[i] {
            col_idx.push(i);
            values.push(1.0);
            rhs[i] = g;
        } else {
            for (j, v) in a.row(i) {
                match value[j] {
                    Some(g) => rhs[i] -= v * g,
                    None => {
                        col_idx.push(j);
                        values.push(v);
                    }
                }
            }
        }
        row_ptr.push(col_idx.len());
    }
    *a = CsrMatrix { n, row_ptr, col_idx, values };
}
