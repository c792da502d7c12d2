//! Filtered grid homology for links in the three-sphere.
//!
//! Starting from a toroidal grid diagram this crate enumerates grid states,
//! builds the filtered chain complex whose differential counts empty
//! rectangles, computes the dimensions of every filtration level of its
//! homology over GF(2), and extracts the function `T_L(d, s)` together with
//! the concordance invariants τ, τ* and the τ-set. Slice-genus and
//! Thurston-Bennequin bounds are derived from those.
//!
//! ```
//! use gridtau_core::{compute_t, tau_report, GridDiagram, Options};
//!
//! let trefoil = GridDiagram::torus(2, 3).unwrap();
//! let t = compute_t(&trefoil, &Options::default()).unwrap();
//! assert_eq!(tau_report(&t).unwrap().tau, 1);
//! ```

pub mod complex;
pub mod exec;
pub mod gf2;
pub mod grading;
pub mod grid;
pub mod homology;
pub mod invariants;
pub mod report;
pub mod tfunction;
pub mod verify;

pub use exec::Execution;
pub use grid::{GridDiagram, GridMove, RawDiagram};
pub use homology::{compute_t, tau_report, Computation, TauReport};
pub use report::InvariantReport;
pub use tfunction::TFunction;

use thiserror::Error;

/// Default cap on the grid size; `N!` states are enumerated.
pub const DEFAULT_MAX_GRID: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub max_grid: usize,
    pub execution: Execution,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            max_grid: DEFAULT_MAX_GRID,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Grid(#[from] grid::GridError),
    #[error(transparent)]
    Grading(#[from] grading::GradingError),
    #[error(transparent)]
    Complex(#[from] complex::ComplexError),
    #[error(transparent)]
    Homology(#[from] homology::HomologyError),
    #[error(transparent)]
    Invariant(#[from] invariants::InvariantError),
}

impl Error {
    /// True when the failure is the grid-size cap rather than bad input or
    /// an internal inconsistency.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::Complex(complex::ComplexError::GridTooLarge { .. })
        )
    }
}
