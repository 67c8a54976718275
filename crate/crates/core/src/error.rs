use thiserror::Error;

/// Errors produced by geometry construction, quadrature generation and the
/// elasticity solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A polynomial is identically zero on its interval, so it has no isolated
    /// roots. The caller decides whether that means "everywhere" or "nowhere".
    #[error("polynomial is identically zero on its interval")]
    DegeneratePolynomial,

    #[error("root isolation did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("tiling failed in cell ({i}, {j}): {detail}")]
    Tiling { i: usize, j: usize, detail: String },

    #[error("degenerate tile: Jacobian determinant {det:e} at reference point ({u}, {v})")]
    DegenerateTile { det: f64, u: f64, v: f64 },

    #[error("zero set is not a graph over the base direction in cell ({i}, {j})")]
    NotAGraph { i: usize, j: usize },

    #[error("quadrature failed in cell ({i}, {j}): {source}")]
    Cell {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("linear system is numerically singular: {0}")]
    Singular(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("study step {step} failed: {source}")]
    Study {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn in_cell(self, i: usize, j: usize) -> Error {
        match self {
            e @ (Error::Cell { .. } | Error::Tiling { .. } | Error::NotAGraph { .. }) => e,
            e => Error::Cell {
                i,
                j,
                source: Box::new(e),
            },
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
