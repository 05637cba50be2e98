//! The n-point generating function of ψ-class intersection numbers.
//!
//! The pipeline: build the symbolic kernel Pₙ(a; x), apply the
//! Gaussian-moment substitution (each monomial ∏aᵢ^{dᵢ} with all dᵢ even
//! becomes (−1)^{Σdᵢ/2}∏(dᵢ−1)!!·xᵢ^{dᵢ/2}, everything else dies), multiply
//! by exp((Σxᵢ)³/24), subtract the two-point correction, and divide exactly
//! by X = Σxᵢ:
//!
//! ```text
//!   F(x₁,…,xₙ) = [e^{X³/24} · T(Pₙ) − δ_{n,2}] / X,        n ≥ 2,
//!   F(x₁)      = (e^{x₁³/24} − 1)/x₁².
//! ```
//!
//! The coefficient of x₁^{d₁}⋯xₙ^{dₙ} is ⟨τ_{d₁}⋯τ_{dₙ}⟩_g with
//! Σdᵢ = 3g − 3 + n. Also here: the one- and two-point closed forms, the
//! C_k = 2ᵏ/(2k+1)!! identity check, and an independent recomputation of
//! the homogeneous genus-g part through double-ramification push-forwards.

mod table;

pub use table::{IntersectionTable, Provenance, TableEntry};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::factorials::{double_factorial_rat, factorial};
use crate::algebra::special::{exp_cube, exp_series};
use crate::algebra::{int, rat, ExponentVector, LinearForm, Rational, TruncatedSeries};
use crate::dr::{forgotten_series, ForgottenSpec};
use crate::kernel::{pn_symbolic_cached, PnSymbolic};
use crate::{Error, Result};

/// The kernel order needed for the transform to be complete through
/// x-degree `target`: a source layer of x-degree D carries a-degree
/// D − n + 2 and lands at transformed degree D + (D−n+2)/2, so every
/// D ≤ ⌊(2·target + n − 2)/3⌋ must be present.
pub fn kernel_order_for(n: usize, target: u32) -> u32 {
    ((2 * target as i64 + n as i64 - 2) / 3).max(0) as u32
}

/// The Gaussian-moment substitution applied to the symbolic kernel,
/// accumulated into a series truncated at `order`.
///
/// Monomials with any odd a-exponent vanish, so only even a-degree layers
/// contribute; the source must have been built at least to
/// [`kernel_order_for`]`(n, order)`.
pub fn gaussian_transform(p: &PnSymbolic, order: u32) -> Result<TruncatedSeries> {
    let n = p.n();
    let needed = kernel_order_for(n, order);
    if p.order() < needed {
        return Err(Error::InvalidInput(format!(
            "symbolic kernel built to order {} but order {} is needed for a transform at {}",
            p.order(),
            needed,
            order
        )));
    }
    let mut out = TruncatedSeries::zero(n, order);
    for (e, poly) in p.layers() {
        let h = poly.degree();
        if h % 2 != 0 {
            continue;
        }
        let sign = if (h / 2) % 2 == 0 { int(1) } else { int(-1) };
        for (amono, c) in poly.terms() {
            if !amono.all_even() {
                continue;
            }
            let mut weight = c * &sign;
            for &di in amono.exponents() {
                weight *= double_factorial_rat(di as i64 - 1);
            }
            out.add_term(e.add(&amono.halved()), weight);
        }
    }
    Ok(out)
}

/// F(x₁,…,xₙ) truncated at total degree `order`.
pub fn npoint_series(n: usize, order: u32) -> Result<TruncatedSeries> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one marked point".into()));
    }
    if n == 1 {
        return one_point_closed(order);
    }
    let target = order + 1;
    let kernel = pn_symbolic_cached(n, kernel_order_for(n, target))?;
    let transformed = gaussian_transform(&kernel, target)?;
    let mut numerator = exp_cube(n, target).mul(&transformed)?;
    if n == 2 {
        numerator = numerator.sub(&TruncatedSeries::one(2, target));
    }
    Ok(numerator.div_linear(&LinearForm::sum_of_vars(n))?)
}

/// ⟨τ_{d₁}⋯τ_{dₙ}⟩_g: zero unless the case is stable and Σdᵢ = 3g − 3 + n,
/// otherwise the corresponding coefficient of the n-point function.
pub fn intersection_number(g: u32, d: &[u32]) -> Result<Rational> {
    let n = d.len();
    if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
        return Ok(Rational::zero());
    }
    let sum_d: u32 = d.iter().sum();
    if sum_d as i64 != 3 * g as i64 - 3 + n as i64 {
        return Ok(Rational::zero());
    }
    let series = npoint_series(n, sum_d)?;
    Ok(series.coefficient(&ExponentVector::new(d.to_vec()))?)
}

/// The one-point function (e^{x³/24} − 1)/x².
pub fn one_point_closed(order: u32) -> Result<TruncatedSeries> {
    let numerator = exp_cube(1, order + 2).sub(&TruncatedSeries::one(1, order + 2));
    let x = LinearForm::sum_of_vars(1);
    Ok(numerator.div_linear(&x)?.div_linear(&x)?)
}

/// Dijkgraaf's two-point function
/// e^{(x₁³+x₂³)/24}/(x₁+x₂) · Σ_k k!/(2k+1)!·(x₁x₂(x₁+x₂)/2)^k − 1/(x₁+x₂).
pub fn two_point_closed(order: u32) -> Result<TruncatedSeries> {
    let target = order + 1;
    let mut cubes = TruncatedSeries::zero(2, target);
    cubes.add_term(ExponentVector::new(vec![3, 0]), rat(1, 24));
    cubes.add_term(ExponentVector::new(vec![0, 3]), rat(1, 24));
    let exp_part = exp_series(&cubes)?;

    // u = x₁x₂(x₁+x₂)/2, homogeneous of degree 3
    let mut u = TruncatedSeries::zero(2, target);
    u.add_term(ExponentVector::new(vec![2, 1]), rat(1, 2));
    u.add_term(ExponentVector::new(vec![1, 2]), rat(1, 2));
    let mut dijkgraaf = TruncatedSeries::one(2, target);
    let mut power = TruncatedSeries::one(2, target);
    let mut k: u64 = 1;
    while 3 * k as u32 <= target {
        power = power.mul(&u)?;
        let coeff = Rational::new(factorial(k), factorial(2 * k + 1));
        dijkgraaf = dijkgraaf.add(&power.scale(&coeff));
        k += 1;
    }

    let numerator = exp_part
        .mul(&dijkgraaf)?
        .sub(&TruncatedSeries::one(2, target));
    Ok(numerator.div_linear(&LinearForm::sum_of_vars(2))?)
}

/// Outcome of verifying C_k := Σ_{m₁+m₂=k} (−1)^{m₂}/(m₁!m₂!(2m₂+1))
/// against 2ᵏ/(2k+1)!! for all k ≤ max_k.
#[derive(Debug, Clone)]
pub struct CnReport {
    pub max_k: u32,
    /// (k, direct sum, closed form) for every mismatch; expected empty.
    pub failures: Vec<(u32, Rational, Rational)>,
}

impl CnReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the combinatorial identity behind the two-point closed form.
pub fn cn_identity_check(max_k: u32) -> CnReport {
    let mut failures = Vec::new();
    for k in 0..=max_k {
        let mut direct = Rational::zero();
        for m2 in 0..=k {
            let m1 = k - m2;
            let den = factorial(m1 as u64) * factorial(m2 as u64) * BigInt::from(2 * m2 + 1);
            let term = Rational::new(BigInt::one(), den);
            if m2 % 2 == 0 {
                direct += term;
            } else {
                direct -= term;
            }
        }
        let closed = Rational::new(
            BigInt::one() << k,
            crate::algebra::factorials::double_factorial(2 * k as i64 + 1),
        );
        if direct != closed {
            failures.push((k, direct, closed));
        }
    }
    CnReport { max_k, failures }
}

/// The homogeneous genus-g part of F(x₁,…,xₙ) recomputed through
/// double-ramification push-forwards, independently of the Gaussian
/// transform.
///
/// With A = Σaᵢ and B = Σb_j, the push-forward series for the weights
/// (a₁,…,aₙ,−A−B; b₁,…,b_g), restricted to x_{n+1} = 0, has all
/// coefficients below degree 3g−2+n equal to zero, and its
/// degree-(3g−2+n) part equals g!·b₁²⋯b_g²·X·F_g. The result must not
/// depend on the choice of a and b (b_j ≠ 0).
pub fn npoint_via_dr(g: u32, n: usize, a: &[i64], b: &[i64]) -> Result<TruncatedSeries> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "the push-forward route needs n >= 3 points, got {n}"
        )));
    }
    if a.len() != n {
        return Err(Error::InvalidInput(format!(
            "weight vector must have {n} entries, got {}",
            a.len()
        )));
    }
    if b.len() != g as usize {
        return Err(Error::InvalidInput(format!(
            "need exactly g = {g} auxiliary weights, got {}",
            b.len()
        )));
    }
    if b.contains(&0) {
        return Err(Error::InvalidInput(
            "auxiliary weights must be nonzero (the result is divided by ∏b_j²)".into(),
        ));
    }

    let total: i64 = a.iter().sum::<i64>() + b.iter().sum::<i64>();
    let mut kept = a.to_vec();
    kept.push(-total);
    let spec = ForgottenSpec::new(kept, b.to_vec())?;

    let threshold = 3 * g + n as u32 - 2;
    let series = forgotten_series(&spec, threshold)?;
    let restricted = series.restrict_var(n).remove_var(n)?;
    if let Some(min) = restricted.min_total_degree() {
        if min < threshold {
            return Err(Error::Internal(format!(
                "push-forward series has a nonzero coefficient at degree {min} < {threshold}"
            )));
        }
    }

    let mut norm = Rational::from_integer(factorial(g as u64));
    for &bj in b {
        norm *= int(bj * bj);
    }
    let scaled = restricted.scale(&(int(1) / norm));
    Ok(scaled.div_linear(&LinearForm::sum_of_vars(n))?)
}
