pub mod builtins;
pub mod dihedral;
pub mod error;
mod flow;
pub mod graph;
pub mod linalg;
pub mod nodal;
pub mod random;
pub mod report;
pub mod scattering;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{GraphPoint, MetricGraph, VertexCondition};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/graphs.md")]
mod book_graphs {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/spectra.md")]
mod book_spectra {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/scattering.md")]
mod book_scattering {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/nodal.md")]
mod book_nodal {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/dihedral.md")]
mod book_dihedral {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
