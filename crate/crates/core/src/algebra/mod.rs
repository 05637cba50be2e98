//! Exact rational scalars and truncated multivariate power series.
//!
//! - [`Rational`]: arbitrary-precision rational, the sole scalar type.
//! - [`ExponentVector`]: a multi-index (d₁,…,dₙ), ordered by total degree
//!   first so that maps keyed by it iterate in graded order.
//! - [`TruncatedSeries`]: sparse polynomial in x₁,…,xₙ graded by total
//!   degree and truncated at an explicit order.
//! - [`LinearForm`]: Σ cᵢxᵢ, the shape of every determinant the kernel
//!   divides by.
//! - [`special`]: the series ζ(x) = e^{x/2} − e^{−x/2}, S(x) = ζ(x)/x and
//!   exp((Σxᵢ)³/24).

mod exponents;
pub mod factorials;
mod series;
pub mod special;

pub use exponents::{exponent_vectors, exponent_vectors_up_to, ExponentVector};
pub use series::{LinearForm, TruncatedSeries};

use num_bigint::BigInt;

/// Arbitrary-precision exact rational number.
///
/// Always stored in lowest terms with a positive denominator; equality is
/// value equality. These invariants are maintained by `num_rational`.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Integer weights as a rational vector.
pub fn from_ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// Errors from the series arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    /// Synthetic division left a nonzero remainder. Every division the
    /// library performs is exact by theorem, so this signals a broken
    /// invariant or a degenerate input.
    #[error("non-exact division: remainder is nonzero")]
    NonExactDivision,
    #[error("constant term must be 1 to invert a unit series")]
    NonUnitConstant,
    #[error("cannot divide by the zero linear form")]
    ZeroLinearForm,
    #[error("degree {0} exceeds truncation order {1}")]
    DegreeAboveTruncation(u32, u32),
}
