//! Generating series of ψ-integrals over double ramification cycles.
//!
//! For integer weights a₁,…,aₙ with Σaᵢ = 0, the series of the integrals
//! ∫_{DR_g(a)} ψ₁^{d₁}⋯ψₙ^{dₙ} over all genera is
//!
//! ```text
//!   Pₙ(a; x)/ζ(x₁+⋯+xₙ) − δ_{n,2}/(x₁+x₂),
//! ```
//!
//! computed here as an exact division by X = Σxᵢ followed by multiplication
//! with 1/S(X). On top of that sit:
//!
//! - [`zero_points_series`]: the same integrals when the trailing points
//!   carry no ψ-classes, which collapses those points into S(bᵢX) factors;
//! - [`forgotten_series`] / [`forgotten_integral_direct`]: integrals over
//!   push-forwards π_{m*}DR_g along the map forgetting m points, via the
//!   set-partition sum over which forgotten points merge into which kept
//!   point (two independent routes, cross-checked in tests);
//! - [`dr_integral_poly`]: the integral as a polynomial in the weights,
//!   recovered by exact interpolation and verified on held-out points.

use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::special::s_of_form;
use crate::algebra::{from_ints, ExponentVector, LinearForm, Rational, TruncatedSeries};
use crate::kernel::{affine_grid, kernel_series_cached, Interpolator, Polynomial};
use crate::{Error, Result};

fn check_balanced(weights: &[i64]) -> Result<()> {
    let sum: i64 = weights.iter().sum();
    if sum != 0 {
        return Err(Error::Unbalanced(sum));
    }
    Ok(())
}

/// Genus determined by the dimension count Σdᵢ = 2g − 3 + n + m, where m is
/// the number of forgotten points. `None` when no non-negative integer
/// genus fits or the target space is unstable.
fn inferred_genus(sum_d: u32, n: usize, m: usize) -> Option<u32> {
    let num = sum_d as i64 + 3 - n as i64 - m as i64;
    if num < 0 || num % 2 != 0 {
        return None;
    }
    let g = (num / 2) as u32;
    if 2 * g as i64 - 2 + n as i64 > 0 {
        Some(g)
    } else {
        None
    }
}

/// The generating series Σ_g Σ_d (∫_{DR_g(a)} ψ^d) x^d, truncated at `order`.
///
/// Needs n ≥ 2 and Σaᵢ = 0. Degenerate weight vectors (two zero entries)
/// are evaluated through the symbolic kernel.
pub fn dr_series(a: &[i64], order: u32) -> Result<TruncatedSeries> {
    let n = a.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "double ramification series needs n >= 2 points, got {n}"
        )));
    }
    check_balanced(a)?;
    let x = LinearForm::sum_of_vars(n);
    let kernel = kernel_series_cached(&from_ints(a), order + 1)?;
    // fold the −δ_{n,2}/(x₁+x₂) correction into the numerator: for n = 2
    // the quotient is (P₂ − S(X))/(X·S(X))
    let numerator = if n == 2 {
        kernel.sub(&s_of_form(&x, order + 1))
    } else {
        kernel
    };
    let quotient = numerator.div_linear(&x)?;
    let s_inverse = s_of_form(&x, order).invert_unit()?;
    Ok(quotient.mul(&s_inverse)?)
}

/// Σ_g Σ_d (∫_{DR_g(a₁,…,a_k,b₁,…,b_m)} ψ₁^{d₁}⋯ψ_k^{d_k}) x^d: the DR
/// series in which the trailing m points carry no ψ-classes. Equal to
///
/// ```text
///   (∏ᵢ S(bᵢX) / S(X)) · X^{m−1} · P_k(a; x),        X = x₁+⋯+x_k,
/// ```
///
/// with k ≥ 3 kept points and Σa + Σb = 0.
pub fn zero_points_series(kept: &[i64], forgotten: &[i64], order: u32) -> Result<TruncatedSeries> {
    let k = kept.len();
    if k < 3 {
        return Err(Error::InvalidInput(format!(
            "zero-points series needs >= 3 kept points, got {k}"
        )));
    }
    let all: Vec<i64> = kept.iter().chain(forgotten).copied().collect();
    check_balanced(&all)?;

    let x = LinearForm::sum_of_vars(k);
    let working = order + 1;
    let mut numerator = kernel_series_cached(&from_ints(kept), working)?;
    for &b in forgotten {
        let factor = s_of_form(&x.scaled(&crate::algebra::int(b)), working);
        numerator = numerator.mul_truncated(&factor, working)?;
        // one power of X per forgotten point (X^{m−1} plus the one divided out)
        numerator = numerator.mul_truncated(&x.to_series(working), working)?;
    }
    let quotient = numerator.div_linear(&x)?;
    let s_inverse = s_of_form(&x, order).invert_unit()?;
    Ok(quotient.mul(&s_inverse)?)
}

/// ∫_{DR_g(a)} ψ₁^{d₁}⋯ψₙ^{dₙ} with g inferred from Σdᵢ = 2g − 3 + n.
///
/// When no valid genus fits, the coefficient is extracted anyway and
/// asserted to vanish (a nonzero value would mean the series violates its
/// dimension grading). Points with dᵢ = 0 beyond the third are shed through
/// [`zero_points_series`], which keeps the kernel evaluation small.
pub fn dr_integral(a: &[i64], d: &[u32]) -> Result<Rational> {
    let n = a.len();
    if d.len() != n {
        return Err(Error::InvalidInput(format!(
            "weight vector has {n} entries but degree vector has {}",
            d.len()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "double ramification integral needs n >= 2 points, got {n}"
        )));
    }
    check_balanced(a)?;
    let sum_d: u32 = d.iter().sum();

    let zero_positions: Vec<usize> = (0..n).filter(|&i| d[i] == 0).collect();
    let value = if n > 3 && !zero_positions.is_empty() {
        // keep every point with a ψ-power, padded to three kept points
        let mut kept: Vec<usize> = (0..n).filter(|&i| d[i] > 0).collect();
        for &i in &zero_positions {
            if kept.len() >= 3 {
                break;
            }
            kept.push(i);
        }
        kept.sort_unstable();
        let forgotten: Vec<i64> = (0..n).filter(|i| !kept.contains(i)).map(|i| a[i]).collect();
        let kept_a: Vec<i64> = kept.iter().map(|&i| a[i]).collect();
        let kept_d = ExponentVector::new(kept.iter().map(|&i| d[i]).collect());
        let series = zero_points_series(&kept_a, &forgotten, sum_d)?;
        series.coefficient(&kept_d)?
    } else {
        let series = dr_series(a, sum_d)?;
        series.coefficient(&ExponentVector::new(d.to_vec()))?
    };

    if inferred_genus(sum_d, n, 0).is_none() && !value.is_zero() {
        return Err(Error::Internal(format!(
            "nonzero DR integral at dimension-violating degrees {d:?}"
        )));
    }
    Ok(value)
}

/// The integral a ↦ ∫_{DR_g(a)} ψ^d as a polynomial in a₁,…,a_{n−1}, with
/// aₙ eliminated by the balance constraint.
///
/// The integral is polynomial of degree ≤ 2g in the weights; it is
/// interpolated on a shifted simplex lattice and then verified on three
/// held-out points (a mismatch is a fatal internal error).
pub fn dr_integral_poly(n: usize, d: &[u32]) -> Result<Polynomial> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "double ramification integral needs n >= 2 points, got {n}"
        )));
    }
    if d.len() != n {
        return Err(Error::InvalidInput(format!(
            "degree vector must have {n} entries, got {}",
            d.len()
        )));
    }
    let sum_d: u32 = d.iter().sum();
    let vars = n - 1;
    let g = match inferred_genus(sum_d, n, 0) {
        Some(g) => g,
        None => return Ok(Polynomial::zero(vars)),
    };
    let degree = 2 * g;
    let monomials = crate::algebra::exponent_vectors_up_to(vars, degree);

    const RETRIES: u32 = 8;
    'attempt: for attempt in 0..RETRIES {
        let offset = 1 + attempt as i64;
        let grid = affine_grid(vars, degree, offset);
        let points: Vec<Vec<Rational>> = grid.iter().map(|p| from_ints(p)).collect();
        let solver = match Interpolator::new(&points, &monomials) {
            Some(solver) => solver,
            None => continue 'attempt,
        };
        let values = grid
            .par_iter()
            .map(|p| dr_integral(&balanced(p), d))
            .collect::<Result<Vec<_>>>()?;
        let coeffs = solver.solve(&values);
        let poly = Polynomial::from_terms(vars, monomials.iter().cloned().zip(coeffs));

        // held-out verification at points beyond the lattice
        for v in 0..3i64 {
            let point: Vec<i64> = (0..vars)
                .map(|i| offset + degree as i64 + 1 + v + i as i64)
                .collect();
            let expected = dr_integral(&balanced(&point), d)?;
            if poly.evaluate(&from_ints(&point)) != expected {
                return Err(Error::Internal(format!(
                    "interpolated DR polynomial disagrees with the integral at {point:?}"
                )));
            }
        }
        return Ok(poly);
    }
    Err(Error::SingularGrid(RETRIES))
}

/// Append the balancing weight −Σ to a partial weight vector.
fn balanced(partial: &[i64]) -> Vec<i64> {
    let mut full = partial.to_vec();
    full.push(-partial.iter().sum::<i64>());
    full
}

/// Weights for integrals over push-forwards of DR cycles along the map that
/// forgets the last m points: n ≥ 3 kept weights, m forgotten weights,
/// Σaᵢ + Σb_j = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForgottenSpec {
    kept: Vec<i64>,
    forgotten: Vec<i64>,
}

impl ForgottenSpec {
    pub fn new(kept: Vec<i64>, forgotten: Vec<i64>) -> Result<Self> {
        if kept.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "push-forward series needs >= 3 kept points, got {}",
                kept.len()
            )));
        }
        let all: Vec<i64> = kept.iter().chain(&forgotten).copied().collect();
        check_balanced(&all)?;
        Ok(Self { kept, forgotten })
    }

    pub fn kept(&self) -> &[i64] {
        &self.kept
    }

    pub fn forgotten(&self) -> &[i64] {
        &self.forgotten
    }

    /// Sum of the forgotten weights routed to bin `bin` (1-based kept point;
    /// bin 0 collects the points that stay unmerged).
    fn bin_shift(&self, assignment: &[usize], bin: usize) -> i64 {
        assignment
            .iter()
            .zip(&self.forgotten)
            .filter(|(&to, _)| to == bin)
            .map(|(_, &b)| b)
            .sum()
    }
}

/// All ways to route each forgotten point into one of `bins` bins.
fn assignments(m: usize, bins: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; m]];
    for j in 0..m {
        out = out
            .into_iter()
            .flat_map(|base| {
                (0..bins).map(move |bin| {
                    let mut next = base.clone();
                    next[j] = bin;
                    next
                })
            })
            .collect();
    }
    out
}

/// Σ_g Σ_d (∫_{π_{m*}DR_g(a,b)} ψ₁^{d₁}⋯ψₙ^{dₙ}) x^d: the push-forward
/// series over the partition sum
///
/// ```text
///   (1/S(X)) Σ_{I₀⊔I₁⊔…⊔Iₙ = {1..m}} X^{|I₀|−1} ∏ᵢ(−xᵢ)^{|Iᵢ|}
///            ∏_{i∈I₀} S(bᵢX) · Pₙ(a₁+B_{I₁},…,aₙ+B_{Iₙ}; x).
/// ```
///
/// Shifted weight vectors that are degenerate for the direct kernel
/// evaluation fall back to the symbolic kernel.
pub fn forgotten_series(spec: &ForgottenSpec, order: u32) -> Result<TruncatedSeries> {
    let n = spec.kept.len();
    let m = spec.forgotten.len();
    let x = LinearForm::sum_of_vars(n);
    let working = order + 1;

    let total = assignments(m, n + 1)
        .into_par_iter()
        .map(|assignment| -> Result<TruncatedSeries> {
            let shifted: Vec<i64> = (0..n)
                .map(|i| spec.kept[i] + spec.bin_shift(&assignment, i + 1))
                .collect();
            let mut term = kernel_series_cached(&from_ints(&shifted), working)?;
            let mut merged = 0u32;
            let mut mono = ExponentVector::zeros(n);
            for (j, &bin) in assignment.iter().enumerate() {
                if bin == 0 {
                    // unmerged: one S(b_jX) factor and one power of X
                    let b = crate::algebra::int(spec.forgotten[j]);
                    term = term.mul_truncated(&s_of_form(&x.scaled(&b), working), working)?;
                    term = term.mul_truncated(&x.to_series(working), working)?;
                } else {
                    merged += 1;
                    mono = mono.add(&ExponentVector::unit(n, bin - 1));
                }
            }
            // ∏ᵢ(−xᵢ)^{|Iᵢ|}
            let sign = if merged.is_multiple_of(2) { 1 } else { -1 };
            let factor = TruncatedSeries::monomial(n, working, mono, crate::algebra::int(sign))?;
            Ok(term.mul_truncated(&factor, working)?)
        })
        .try_reduce(|| TruncatedSeries::zero(n, working), |a, b| Ok(a.add(&b)))?;

    let quotient = total.div_linear(&x)?;
    let s_inverse = s_of_form(&x, order).invert_unit()?;
    Ok(quotient.mul(&s_inverse)?)
}

/// ∫_{π_{m*}DR_g(a,b)} ψ₁^{d₁}⋯ψₙ^{dₙ} by the signed partition sum
///
/// ```text
///   Σ_{⊔ᵢIᵢ = {1..m}, |Iᵢ|≤dᵢ} (−1)^{m−|I₀|}
///     ∫_{DR_g(a₁+B_{I₁},…,aₙ+B_{Iₙ}, b̄_{I₀})} ∏ᵢ ψᵢ^{dᵢ−|Iᵢ|},
/// ```
///
/// each term an honest DR integral over n + |I₀| points. This is the
/// independent route against which [`forgotten_series`] is checked.
pub fn forgotten_integral_direct(spec: &ForgottenSpec, d: &[u32]) -> Result<Rational> {
    let n = spec.kept.len();
    let m = spec.forgotten.len();
    if d.len() != n {
        return Err(Error::InvalidInput(format!(
            "degree vector must have {n} entries, got {}",
            d.len()
        )));
    }

    let mut total = Rational::zero();
    'assignment: for assignment in assignments(m, n + 1) {
        let mut counts = vec![0u32; n + 1];
        for &bin in &assignment {
            counts[bin] += 1;
        }
        for i in 0..n {
            if counts[i + 1] > d[i] {
                continue 'assignment;
            }
        }
        let mut weights: Vec<i64> = (0..n)
            .map(|i| spec.kept[i] + spec.bin_shift(&assignment, i + 1))
            .collect();
        let mut degrees: Vec<u32> = (0..n).map(|i| d[i] - counts[i + 1]).collect();
        for (j, &bin) in assignment.iter().enumerate() {
            if bin == 0 {
                weights.push(spec.forgotten[j]);
                degrees.push(0);
            }
        }
        let term = dr_integral(&weights, &degrees)?;
        let unmerged = counts[0];
        if (m as u32 - unmerged).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector::from(e)
    }

    #[test]
    fn two_point_series_examples() {
        // coefficient of x₁ is (k²−1)/24
        let s = dr_series(&[2, -2], 3).unwrap();
        assert_eq!(s.coefficient(&ev(&[1, 0])).unwrap(), rat(1, 8));
        let s = dr_series(&[1, -1], 3).unwrap();
        assert_eq!(s.coefficient(&ev(&[1, 0])).unwrap(), int(0));
    }

    #[test]
    fn three_point_constant_term() {
        let s = dr_series(&[1, 1, -2], 2).unwrap();
        assert_eq!(s.coefficient(&ev(&[0, 0, 0])).unwrap(), int(1));
    }

    #[test]
    fn unbalanced_weights_rejected() {
        assert!(matches!(
            dr_series(&[1, 2], 2).unwrap_err(),
            Error::Unbalanced(3)
        ));
    }

    #[test]
    fn integral_examples() {
        assert_eq!(dr_integral(&[3, -3], &[1, 0]).unwrap(), rat(1, 3));
        assert_eq!(dr_integral(&[1, 1, -2], &[0, 0, 0]).unwrap(), int(1));
        // degree 0 on two points is not of the form 2g−1: coefficient absent
        assert_eq!(dr_integral(&[1, -1], &[0, 0]).unwrap(), int(0));
    }

    #[test]
    fn integral_symmetric_in_marked_points() {
        assert_eq!(
            dr_integral(&[3, -3], &[1, 0]).unwrap(),
            dr_integral(&[-3, 3], &[0, 1]).unwrap()
        );
    }

    #[test]
    fn series_symmetric_under_simultaneous_permutation() {
        let a = [1i64, 2, -3];
        let s = dr_series(&a, 4).unwrap();
        let perm = [2usize, 0, 1];
        let pa: Vec<i64> = perm.iter().map(|&i| a[i]).collect();
        assert_eq!(dr_series(&pa, 4).unwrap().permute_vars(&perm), s);
    }

    #[test]
    fn parity_vanishing() {
        // for n=3 the dimension forces Σd = 2g, so odd layers vanish
        let s = dr_series(&[1, 2, -3], 5).unwrap();
        for (e, c) in s.terms() {
            assert!(
                e.total_degree() % 2 == 0,
                "unexpected odd-degree term {e:?} -> {c}"
            );
        }
    }

    #[test]
    fn zero_points_series_matches_restriction() {
        // forgetting ψ-powers at the 4th point = restricting its variable
        let full = dr_series(&[1, 1, -3, 1], 4).unwrap();
        let restricted = full.restrict_var(3).remove_var(3).unwrap();
        let reduced = zero_points_series(&[1, 1, -3], &[1], 4).unwrap();
        assert_eq!(reduced, restricted);
    }

    #[test]
    fn integral_reduction_consistent_with_full_series() {
        // shedding zero-degree points must not change the integral
        let a = [1i64, 2, 3, -6];
        let d = [3u32, 0, 0, 0];
        let direct = dr_series(&a, 3).unwrap().coefficient(&ev(&d)).unwrap();
        assert_eq!(dr_integral(&a, &d).unwrap(), direct);
    }

    #[test]
    fn polynomial_in_weights() {
        // n=2, d=(1,0): (a₁²−1)/24
        let p = dr_integral_poly(2, &[1, 0]).unwrap();
        assert_eq!(p.coefficient(&ev(&[2])), rat(1, 24));
        assert_eq!(p.coefficient(&ev(&[0])), rat(-1, 24));
        assert_eq!(p.coefficient(&ev(&[1])), int(0));
        // symmetry: d=(0,1) gives the same polynomial
        assert_eq!(dr_integral_poly(2, &[0, 1]).unwrap(), p);
        // n=3, d=(0,0,0): constant 1
        let p = dr_integral_poly(3, &[0, 0, 0]).unwrap();
        assert_eq!(p.coefficient(&ev(&[0, 0])), int(1));
        assert_eq!(p.total_degree(), 0);
    }

    #[test]
    fn forgotten_series_with_no_forgotten_points() {
        let spec = ForgottenSpec::new(vec![1, 1, -2], vec![]).unwrap();
        assert_eq!(
            forgotten_series(&spec, 4).unwrap(),
            dr_series(&[1, 1, -2], 4).unwrap()
        );
        assert_eq!(
            forgotten_integral_direct(&spec, &[0, 0, 2]).unwrap(),
            dr_integral(&[1, 1, -2], &[0, 0, 2]).unwrap()
        );
    }

    #[test]
    fn forgotten_routes_agree_on_one_point() {
        // kept (1,1,−2), one forgotten point of weight 0, d = (1,0,0)
        let spec = ForgottenSpec::new(vec![1, 1, -2], vec![0]).unwrap();
        let series = forgotten_series(&spec, 2).unwrap();
        let direct = forgotten_integral_direct(&spec, &[1, 0, 0]).unwrap();
        assert_eq!(series.coefficient(&ev(&[1, 0, 0])).unwrap(), direct);
    }

    #[test]
    fn forgotten_routes_agree_on_two_points() {
        let spec = ForgottenSpec::new(vec![1, 2, -6], vec![1, 2]).unwrap();
        let series = forgotten_series(&spec, 4).unwrap();
        for d in crate::algebra::exponent_vectors_up_to(3, 4) {
            let direct = forgotten_integral_direct(&spec, d.exponents()).unwrap();
            assert_eq!(series.coefficient(&d).unwrap(), direct, "degrees {d:?}");
        }
    }

    #[test]
    fn spec_validation() {
        assert!(ForgottenSpec::new(vec![1, -1], vec![0]).is_err());
        assert!(ForgottenSpec::new(vec![1, 1, -1], vec![0]).is_err());
        assert!(ForgottenSpec::new(vec![1, 1, -2], vec![5, -5]).is_ok());
    }

    #[test]
    fn degenerate_weights_use_symbolic_kernel() {
        // (0, 2, −2) shifted by a forgotten weight −2 into the second bin
        // passes through (0, 0, −2)-style degenerate kernels
        let spec = ForgottenSpec::new(vec![0, 2, -2], vec![-2, 2]).unwrap();
        let series = forgotten_series(&spec, 3).unwrap();
        for d in crate::algebra::exponent_vectors_up_to(3, 3) {
            let direct = forgotten_integral_direct(&spec, d.exponents()).unwrap();
            assert_eq!(series.coefficient(&d).unwrap(), direct, "degrees {d:?}");
        }
    }
}
