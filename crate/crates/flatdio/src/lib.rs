//! Diophantine approximation experiments on translation surfaces.
//!
//! The library is organised around planar resonant sets: the directions of
//! saddle connections (`scan::resonant_sc`) and of large-area cylinders
//! (`scan::resonant_cyl`) of a translation surface, weighted by minimal
//! length. On top of those sit
//!
//! - metric property checkers (quadratic growth, ubiquity, Dirichlet,
//!   decaying) in [`resonant`],
//! - Hausdorff dimension estimators (covering upper bound, Cantor lower
//!   bound, box counting) in [`hdim`],
//! - Teichmüller geodesic observables (systole traces, excursion
//!   statistics) in [`dynamics`],
//! - straight-line / billiard flow recurrence rates in [`billiard`].
//!
//! Surfaces are polygon presentations ([`surface`]); all planar linear
//! algebra lives in [`geom`].

pub mod billiard;
pub mod cf;
pub mod circle;
pub mod dynamics;
pub mod geom;
pub mod hdim;
pub mod resonant;
pub mod scan;
pub mod surface;

pub use geom::{AreaPreservingMatrix, Direction, PlanarVector};
pub use surface::TranslationSurface;

/// Node budget for the enumeration cores.
///
/// Reads `FLATDIO_BUDGET` when set, otherwise defaults to 10^7 developed
/// chart nodes per enumeration call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        match std::env::var("FLATDIO_BUDGET") {
            Ok(s) => Budget(s.trim().parse().unwrap_or(10_000_000)),
            Err(_) => Budget(10_000_000),
        }
    }
}

/// Top-level error type; each module keeps its own error enum and this one
/// only exists so callers (the CLI in particular) can match once.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Geom(#[from] geom::GeomError),
    #[error(transparent)]
    Surface(#[from] surface::SurfaceError),
    #[error(transparent)]
    Scan(#[from] scan::ScanError),
    #[error(transparent)]
    Resonant(#[from] resonant::ResonantError),
    #[error(transparent)]
    Hdim(#[from] hdim::HdimError),
    #[error(transparent)]
    Dynamics(#[from] dynamics::DynamicsError),
    #[error(transparent)]
    Billiard(#[from] billiard::BilliardError),
}

impl Error {
    /// True when the failure is an exhausted enumeration budget.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::Scan(scan::ScanError::BudgetExceeded { .. })
                | Error::Dynamics(dynamics::DynamicsError::Scan(scan::ScanError::BudgetExceeded { .. }))
        )
    }

    /// True when a theorem hypothesis was not met by the supplied data.
    pub fn is_hypothesis(&self) -> bool {
        matches!(
            self,
            Error::Resonant(resonant::ResonantError::HypothesisNotMet { .. })
        )
    }
}
