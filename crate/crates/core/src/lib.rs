//! Exact computation of the n-point generating function of ψ-class
//! intersection numbers on the moduli space of stable curves.
//!
//! Everything runs over arbitrary-precision rationals; there is no floating
//! point anywhere. The crate is organised as follows:
//!
//! - [`algebra`]: rational scalars, truncated multivariate power series,
//!   linear forms and the special series ζ, S and exp((Σxᵢ)³/24).
//! - [`kernel`]: the permutation-sum kernel Pₙ(a; x), evaluated at numeric
//!   a-vectors and recovered symbolically in a by exact interpolation.
//! - [`dr`]: generating series of ψ-integrals over double ramification
//!   cycles, including the push-forward series with forgotten points.
//! - [`npoint`]: the n-point function pipeline (Gaussian-moment substitution
//!   on the kernel, exponential prefactor, exact division), the one- and
//!   two-point closed forms, and an independent recomputation through the
//!   double-ramification push-forward.
//! - [`oracle`]: the DVV (Virasoro) recursion, validated against the closed
//!   forms before it may be cited as ground truth.

pub mod algebra;
pub mod dr;
mod error;
pub mod kernel;
pub mod npoint;
pub mod oracle;

pub use algebra::{AlgebraError, ExponentVector, LinearForm, Rational, TruncatedSeries};
pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
