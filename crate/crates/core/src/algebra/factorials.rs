//! Factorials and double factorials as exact big integers.

use num_bigint::BigInt;
use num_traits::One;

use super::Rational;

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut out = BigInt::one();
    for k in 2..=n {
        out *= k;
    }
    out
}

/// n!! = n(n−2)(n−4)⋯, with (−1)!! = 0!! = 1.
pub fn double_factorial(n: i64) -> BigInt {
    let mut out = BigInt::one();
    let mut k = n;
    while k > 1 {
        out *= k;
        k -= 2;
    }
    out
}

/// n!! as a rational, for use in coefficient arithmetic.
pub fn double_factorial_rat(n: i64) -> Rational {
    Rational::from_integer(double_factorial(n))
}

/// Binomial coefficient C(n, k) as a machine integer (desk-scale sizes).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: usize = 1;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}
