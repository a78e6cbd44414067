use thiserror::Error;

use crate::mesh::Point;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid extent [{x0}, {x1}] x [{y0}, {y1}]")]
    InvalidExtent { x0: f64, x1: f64, y0: f64, y1: f64 },
    #[error("triangle {0} is degenerate or clockwise")]
    DegenerateTriangle(usize),
    #[error("boundary edge {a:?}-{b:?} lies on no declared wall")]
    UnclassifiedBoundary { a: Point, b: Point },
    #[error("no quadrature rule of degree {0}")]
    UnsupportedDegree(usize),
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("point {0:?} is outside the domain")]
    PointOutsideDomain(Point),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("usage: {0}")]
    Usage(String),
    /// Help or version text requested on the command line.
    #[error("{0}")]
    Help(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
