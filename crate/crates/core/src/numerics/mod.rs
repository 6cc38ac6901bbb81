//! Scalar foundations: log-domain complex numbers, multi-indices,
//! gamma-family special functions, and adaptive 1D quadrature.

mod gamma;
mod log_complex;
mod multi_index;
mod quad;

pub use gamma::{
    log_factorial, log_factorial_1d, log_gamma, regularized_gamma_p, stirling_limit,
    stirling_ratio,
};
pub use log_complex::LogComplex;
pub use multi_index::{multi_indices, MultiIndex};
pub use quad::{integrate_1d, integrate_1d_complex, QuadratureSpec};
