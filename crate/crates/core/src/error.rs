use thiserror::Error;

use crate::graph::GraphError;

/// Failures of the numerical layers (spectra, scattering, nodal counts).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error("wave number must be positive, got {0}")]
    NonPositiveK(f64),

    #[error("negative delta coefficient {alpha} at vertex `{vertex}` is not supported by the root finder")]
    NegativeDelta { vertex: String, alpha: f64 },

    #[error("root refinement did not converge in [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64 },

    #[error("eigenphase bookkeeping inconsistent on [{lo}, {hi}]: net crossing estimate {estimate}")]
    PhaseBookkeeping { lo: f64, hi: f64, estimate: f64 },

    #[error("Weyl sanity check failed: N({k_max}) = {count}, Weyl term {weyl:.3}, allowed deviation {allowed}")]
    WeylCheck { k_max: f64, count: usize, weyl: f64, allowed: usize },

    #[error("eigenvalue at k = {k} has {crossings} phase crossings but kernel dimension {kernel}")]
    MultiplicityMismatch { k: f64, crossings: usize, kernel: usize },

    #[error("ambiguous count: k = {0} lies within 1e-9 of an eigenvalue")]
    AmbiguousCount(f64),

    #[error("eigenvalue k = {k} is degenerate (multiplicity {multiplicity})")]
    Degenerate { k: f64, multiplicity: usize },

    #[error("eigenfunction at k = {k} vanishes at vertex `{vertex}`")]
    VertexVanishing { k: f64, vertex: String },

    #[error("boundary-degenerate edge: kL/pi = {0} is within 1e-9 of an integer, use direct count")]
    BoundaryDegenerate(f64),

    #[error("eigenfunction is not real after phase rotation: relative imaginary part {0:.3e}")]
    NotReal(f64),

    #[error("linear solve residual {0:.3e} exceeds 1e-6 (kernel containment violated)")]
    KernelContainment(f64),

    #[error("matrix is not unitary: deviation {0:.3e}")]
    NotUnitary(f64),

    #[error("refine sweep: {0}")]
    RefineSweep(String),

    #[error("eigenfunction vanishes at a probe point (k in the singular set: {0:?})")]
    ProbeVanishing(Vec<f64>),

    #[error("singular set nonempty below k_max: {0:?}")]
    DeltaNonEmpty(Vec<f64>),

    #[error("vertex `{0}` is marked more than once")]
    DuplicateLead(String),

    #[error("at least one marked vertex is required")]
    NoLeads,

    #[error("operation requires Neumann/Dirichlet conditions only")]
    RequiresNeumannDirichlet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
