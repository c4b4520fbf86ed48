//! Spectral approximation on the real line in the Malmquist-Takenaka (MT)
//! rational basis and its relatives.
//!
//! The crate provides:
//!
//! * pointwise evaluation of the MT system, the generalized MT family,
//!   Fourier-Laguerre functions (`alpha > -1`) and twisted Hermite
//!   functions ([`basis`], [`laguerre`]);
//! * an `O(N log N)` FFT transform between samples on a tan-mapped grid
//!   and expansion coefficients, plus slow quadrature oracles ([`transform`]);
//! * skew-Hermitian tridiagonal differentiation operators, product and
//!   multiplication identities in coefficient space, and a unitary
//!   propagator for coefficient ODEs ([`operators`]);
//! * convergence diagnostics: decay-model fitting and the analyticity
//!   region attached to a geometric decay rate ([`analysis`]).
//!
//! ```
//! use mt_spectral::{BasisSpec, transform, operators};
//! use num_complex::Complex64;
//!
//! // Expand f(x) = 1/(1+x^2) in the MT basis with one FFT ...
//! let grid = transform::make_grid(32)?;
//! let f = |x: f64| Complex64::new(1.0 / (1.0 + x * x), 0.0);
//! let coeffs = transform::analyze(f, &grid);
//!
//! // ... differentiate in coefficient space ...
//! let d = operators::diff_op(&BasisSpec::Mt, -32, 31)?;
//! let df = d.apply(&coeffs)?.expansion;
//!
//! // ... and check against the exact derivative -2x/(1+x^2)^2.
//! let x = 0.7_f64;
//! let exact = -2.0 * x / (1.0 + x * x).powi(2);
//! assert!((transform::synthesize(&df, x).re - exact).abs() < 1e-9);
//! # Ok::<(), mt_spectral::Error>(())
//! ```

pub mod analysis;
pub mod basis;
pub mod error;
pub mod laguerre;
pub mod operators;
pub mod transform;

mod gauss_hermite;
mod tridiag_eigen;

pub use basis::{
    envelope, eval_general_mt, eval_mt, eval_mt_theta, theta_of_x, x_of_theta, BasisSpec,
    GeneralMtParams, PhaseConvention,
};
pub use error::{Error, Result};
pub use transform::{Expansion, MappedGrid};

#[cfg(test)]
pub(crate) mod testutil {
    use num_complex::Complex64;

    /// Fifth-order centered difference; truncation `O(h^4)` keeps the
    /// derivative checks far below the asserted tolerances even for the
    /// most oscillatory basis functions in the test windows.
    pub fn central_derivative(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
        (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
    }
}
