//! Numerical toolkit for entire-function expansions in the Bargmann setting.
//!
//! The crate is organized in layers:
//!
//! * [`numerics`] — log-domain scalars, multi-indices, log-gamma, adaptive
//!   quadrature.  Everything above is built on these.
//! * [`weights`] — coefficient weight sequences, growth majorants, and the
//!   radial-weight → coefficient-weight transform.
//! * [`bargmann`] — Hermite functions, the Bargmann transform, the Gaussian
//!   short-time Fourier transform, its adjoint, and the phase-space bridges
//!   between them.
//! * [`projection`] — the reproducing-kernel projection against radial
//!   compactly supported cutoffs, its normalization constants, and quadrature
//!   oracles for both.
//! * [`paleywiener`] — growth-class classification of coefficient series,
//!   radius bookkeeping, the reconstruction operator, and executable
//!   verifiers for the characterization theorems.
//! * [`series_io`] / [`report`] — the line-oriented series file format and
//!   the JSON verification report consumed by the CLI.

pub mod bargmann;
mod error;
pub mod numerics;
pub mod paleywiener;
pub mod projection;
pub mod report;
pub mod series;
pub mod series_io;
pub mod weights;

pub use error::{Error, Result};
pub use numerics::{LogComplex, MultiIndex, QuadratureSpec};
pub use series::CoefficientSeries;
