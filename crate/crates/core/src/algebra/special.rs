//! The special series of the theory.
//!
//! With ζ(x) = e^{x/2} − e^{−x/2} = Σ_{i≥0} x^{2i+1}/(2^{2i}(2i+1)!) and
//! S(x) = ζ(x)/x, this module expands S(L), ζ(L) for a linear form L, the
//! prefactor exp((Σxᵢ)³/24), and exp of a general series without constant
//! term.

use num_bigint::BigInt;
use num_traits::One;

use super::factorials::factorial;
use super::{AlgebraError, LinearForm, Rational, TruncatedSeries};

/// Coefficient of x^{2i} in S(x): 1/(2^{2i}(2i+1)!).
pub fn s_coefficient(i: u32) -> Rational {
    let den = (BigInt::one() << (2 * i)) * factorial(2 * i as u64 + 1);
    Rational::new(BigInt::one(), den)
}

/// S(L) = 1 + L²/24 + L⁴/1920 + …, truncated at `order`.
pub fn s_of_form(l: &LinearForm, order: u32) -> TruncatedSeries {
    let n = l.n_vars();
    let mut out = TruncatedSeries::one(n, order);
    if l.is_zero() {
        return out;
    }
    let l_series = l.to_series(order);
    let l_squared = l_series
        .mul_truncated(&l_series, order)
        .expect("same variable count");
    let mut power = TruncatedSeries::one(n, order);
    let mut i = 1;
    while 2 * i <= order {
        power = power
            .mul_truncated(&l_squared, order)
            .expect("same variable count");
        out = out.add(&power.scale(&s_coefficient(i)));
        i += 1;
    }
    out
}

/// ζ(L) = L·S(L), truncated at `order`.
pub fn zeta_of_form(l: &LinearForm, order: u32) -> TruncatedSeries {
    l.to_series(order)
        .mul_truncated(&s_of_form(l, order), order)
        .expect("same variable count")
}

/// exp((x₁+⋯+xₙ)³/24), truncated at `order`.
pub fn exp_cube(n_vars: usize, order: u32) -> TruncatedSeries {
    let x = LinearForm::sum_of_vars(n_vars).to_series(order);
    let x2 = x.mul_truncated(&x, order).expect("same variable count");
    let cube = x2.mul_truncated(&x, order).expect("same variable count");
    exp_series(&cube.scale(&Rational::new(BigInt::one(), BigInt::from(24))))
        .expect("cube has no constant term")
}

/// exp of a series with zero constant term.
pub fn exp_series(s: &TruncatedSeries) -> Result<TruncatedSeries, AlgebraError> {
    let min = match s.min_total_degree() {
        None => return Ok(TruncatedSeries::one(s.n_vars(), s.order())),
        Some(0) => return Err(AlgebraError::NonUnitConstant),
        Some(m) => m,
    };
    let order = s.order();
    let mut out = TruncatedSeries::one(s.n_vars(), order);
    let mut power = TruncatedSeries::one(s.n_vars(), order);
    let mut k: u64 = 1;
    while k as u32 * min <= order {
        power = power.mul_truncated(s, order)?;
        out = out.add(&power.scale(&Rational::new(BigInt::one(), factorial(k))));
        k += 1;
    }
    Ok(out)
}
