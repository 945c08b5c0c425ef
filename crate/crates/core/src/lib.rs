//! Closed-form sub-Riemannian geometry on SU(2)×ℝ and SO(3)×ℝ.
//!
//! Two left-invariant sub-Riemannian metrics are treated on each group,
//! indexed by the adapted basis [`BasisKind::D1`] or [`BasisKind::D2`].
//! For each group/metric pair the crate provides arclength geodesics from
//! the identity, conjugate and cut times, first-conjugate and cut locus
//! membership, and exact distances from the identity. The [`oracle`] module
//! holds an independent ODE integrator and a shooting search used to check
//! the closed forms.
//!
//! ```
//! use srlie_core::{distance, Su2RPoint};
//! use num_complex::Complex64;
//!
//! let p = Su2RPoint::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), 0.0).unwrap();
//! let d = distance::dist_su2r_d2(&p).unwrap();
//! assert!((d.value - std::f64::consts::PI).abs() < 1e-12);
//! ```

pub mod algebra;
pub mod cutconj;
pub mod distance;
pub mod geodesics;
pub mod groups;
pub mod oracle;
pub mod verify;

pub use algebra::{AlgebraVector, BasisKind, So3Tangent, Su2Tangent};
pub use cutconj::{CutInfo, LocusClass, WindingReading};
pub use distance::DistanceResult;
pub use geodesics::{GeodesicFrame, GeodesicParams};
pub use groups::{GroupKind, GroupPoint, So3RPoint, Su2RPoint};
pub use oracle::{CovectorState, ShootingConfig, ShootingReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("no grid point within capture radius {radius} (best endpoint error {best}); use a denser grid")]
    NoCapture { radius: f64, best: f64 },
}

impl Error {
    /// True for errors caused by the caller's input rather than a numerical
    /// failure.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidPoint(_) | Error::InvalidParams(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
