//! The permutation-sum kernel Pₙ(a₁,…,aₙ; x₁,…,xₙ).
//!
//! For n ≥ 2 the kernel is a sum over permutations σ with σ(1) = 1 of
//!
//! ```text
//!   x'₂⋯x'_{n−1} · ζ(C₁)⋯ζ(C_{n−1}) / (D₁⋯D_{n−1})
//! ```
//!
//! where C_k = (a'₁+⋯+a'_k)x'_{k+1} − a'_{k+1}(x'₁+⋯+x'_k) and
//! D_k = a'_k x'_{k+1} − a'_{k+1} x'_k. Each summand has genuine poles along
//! the hyperplanes a_p x_q − a_q x_p = 0; only the sum is regular. We
//! therefore put every summand over the common denominator ∏_{p<q} Δ_{pq}
//! (numeric a makes each Δ a linear form), sum the numerators, and divide
//! the total exactly by each Δ_{pq} — every division must leave remainder
//! zero, which doubles as a consistency check.
//!
//! The symbolic form of the kernel (coefficients as polynomials in a) is
//! recovered from numeric evaluations by exact interpolation: the x-layer of
//! total degree D carries an a-polynomial homogeneous of degree D − n + 2,
//! which pins the interpolation space.

mod apoly;
mod interp;

pub use apoly::{APolynomial, Polynomial};
pub(crate) use interp::{affine_grid, Interpolator};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::special::zeta_of_form;
use crate::algebra::{exponent_vectors, ExponentVector, LinearForm, Rational, TruncatedSeries};
use crate::{Error, Result};

/// Retry budget for interpolation grids before giving up as singular.
const GRID_RETRY_BUDGET: u32 = 8;

/// Rejects a-vectors with a pair (a_p, a_q) = (0, 0): the common denominator
/// of the permutation sum would vanish identically.
pub fn check_nondegenerate(a: &[Rational]) -> Result<()> {
    let zeros: Vec<usize> = (0..a.len()).filter(|&i| a[i].is_zero()).collect();
    if zeros.len() >= 2 {
        return Err(Error::DegenerateA(zeros[0], zeros[1]));
    }
    Ok(())
}

/// The canonical pair form Δ_{pq} = a_p x_q − a_q x_p for p < q.
fn pair_form(a: &[Rational], p: usize, q: usize) -> LinearForm {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n];
    coeffs[q] = a[p].clone();
    coeffs[p] = -a[q].clone();
    LinearForm::new(coeffs)
}

/// One summand of the permutation sum, normalised to the common denominator
/// ∏_{p<q} Δ_{pq}.
///
/// The n−1 adjacent unordered pairs {σ(k), σ(k+1)} are pairwise distinct;
/// each adjacent determinant D_k contributes sign −1 when its pair appears
/// in descending order, which relates it to the canonical Δ_{pq}.
struct PermTerm {
    /// Visit order; seq[0] = 0 always.
    seq: Vec<usize>,
    /// Cumulative determinants C₁,…,C_{n−1}.
    cumulative: Vec<LinearForm>,
    /// Product of the orientation flips of the adjacent determinants.
    sign: i32,
    /// Canonical pairs not appearing as adjacent determinants.
    unused: Vec<(usize, usize)>,
}

impl PermTerm {
    fn build(a: &[Rational], seq: Vec<usize>) -> Self {
        let n = a.len();
        let mut cumulative = Vec::with_capacity(n - 1);
        let mut prefix_a = a[seq[0]].clone();
        let mut prefix_x = LinearForm::single(n, seq[0], Rational::one());
        for &v in &seq[1..] {
            // C_k = (Σ_{j≤k} a'_j)·x_v − a_v·(Σ_{j≤k} x'_j)
            let c =
                LinearForm::single(n, v, prefix_a.clone()).add(&prefix_x.scaled(&-a[v].clone()));
            cumulative.push(c);
            prefix_a += &a[v];
            prefix_x = prefix_x.add(&LinearForm::single(n, v, Rational::one()));
        }
        let mut sign = 1;
        let mut used = BTreeSet::new();
        for k in 0..n - 1 {
            let (u, v) = (seq[k], seq[k + 1]);
            if u > v {
                sign = -sign;
            }
            let fresh = used.insert((u.min(v), u.max(v)));
            debug_assert!(fresh, "adjacent pairs must be pairwise distinct");
        }
        let unused = all_pairs(n)
            .into_iter()
            .filter(|pq| !used.contains(pq))
            .collect();
        Self {
            seq,
            cumulative,
            sign,
            unused,
        }
    }

    /// The numerator summand sign · x'₂⋯x'_{n−1} · ∏ζ(C_k) · ∏_{unused}Δ,
    /// truncated at `working`. Factors are folded with the truncation opened
    /// up step by step according to the minimum degrees of the factors still
    /// pending (each ζ and Δ has minimum degree 1).
    fn numerator(&self, a: &[Rational], working: u32) -> TruncatedSeries {
        let n = a.len();
        if self.cumulative.iter().any(LinearForm::is_zero) {
            // a zero cumulative determinant makes ζ(C_k) = 0
            return TruncatedSeries::zero(n, working);
        }
        let mut mono = ExponentVector::zeros(n);
        for &v in &self.seq[1..n - 1] {
            mono = mono.add(&ExponentVector::unit(n, v));
        }
        let mut remaining = (self.cumulative.len() + self.unused.len()) as u32;
        let base_order = working.saturating_sub(remaining);
        if base_order < mono.total_degree() {
            // the requested order lies below the kernel's minimum degree
            return TruncatedSeries::zero(n, working);
        }
        let mut acc = TruncatedSeries::monomial(
            n,
            base_order,
            mono,
            Rational::from_integer(self.sign.into()),
        )
        .expect("leading monomial fits below the working order");
        for zeta_arg in &self.cumulative {
            remaining -= 1;
            let target = working - remaining;
            acc = acc
                .mul_truncated(&zeta_of_form(zeta_arg, target), target)
                .expect("same variable count");
        }
        for &(p, q) in &self.unused {
            remaining -= 1;
            let target = working - remaining;
            acc = acc
                .mul_truncated(&pair_form(a, p, q).to_series(target), target)
                .expect("same variable count");
        }
        acc
    }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for p in 0..n {
        for q in p + 1..n {
            out.push((p, q));
        }
    }
    out
}

/// Pₙ(a; x) truncated at total degree `order`, by direct evaluation of the
/// permutation sum at a numeric a-vector.
///
/// Requires n ≥ 2 and a nondegenerate: no pair (a_p, a_q) = (0, 0). The
/// numerators are accumulated at order `order` + C(n,2) so that the exact
/// divisions by the C(n,2) canonical pair forms land on the requested order.
pub fn pn_eval(a: &[Rational], order: u32) -> Result<TruncatedSeries> {
    let n = a.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "kernel evaluation needs n >= 2 points, got {n}"
        )));
    }
    check_nondegenerate(a)?;
    let npairs = (n * (n - 1) / 2) as u32;
    let working = order + npairs;

    let perms: Vec<Vec<usize>> = (1..n)
        .permutations(n - 1)
        .map(|rest| {
            let mut seq = Vec::with_capacity(n);
            seq.push(0);
            seq.extend(rest);
            seq
        })
        .collect();
    let numerator = perms
        .into_par_iter()
        .map(|seq| PermTerm::build(a, seq).numerator(a, working))
        .reduce(|| TruncatedSeries::zero(n, working), |x, y| x.add(&y));

    let mut quotient = numerator;
    for (p, q) in all_pairs(n) {
        quotient = quotient
            .div_linear(&pair_form(a, p, q))
            .map_err(Error::from)?;
    }
    debug_assert_eq!(quotient.order(), order);
    Ok(quotient)
}

/// Pₙ with its x-coefficients recovered as polynomials in a₁,…,aₙ.
///
/// The x-monomial layer of total degree D holds an a-polynomial homogeneous
/// of degree D − n + 2; layers with D < n − 2 are absent, and odd a-degree
/// layers vanish because Pₙ is even in a.
#[derive(Clone, Debug)]
pub struct PnSymbolic {
    n: usize,
    order: u32,
    coeffs: BTreeMap<ExponentVector, APolynomial>,
}

impl PnSymbolic {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The a-polynomial attached to the x-monomial `e` (absent means zero).
    pub fn coefficient(&self, e: &ExponentVector) -> Option<&APolynomial> {
        self.coeffs.get(e)
    }

    pub fn layers(&self) -> impl Iterator<Item = (&ExponentVector, &APolynomial)> {
        self.coeffs.iter()
    }

    /// Evaluate every a-polynomial at a concrete vector. Works for any a,
    /// including vectors that are degenerate for [`pn_eval`].
    pub fn evaluate(&self, a: &[Rational]) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.n, self.order);
        for (e, poly) in &self.coeffs {
            out.add_term(e.clone(), poly.evaluate(a));
        }
        out
    }

    /// Set xᵢ = 0: drop every x-monomial with a positive exponent at `i`.
    pub fn restrict_var(&self, i: usize) -> Self {
        Self {
            n: self.n,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| e.get(i) == 0)
                .map(|(e, p)| (e.clone(), p.clone()))
                .collect(),
        }
    }
}

/// Recover the symbolic kernel by exact interpolation.
///
/// For each even a-degree h ≤ `order` − n + 2 the x-layer D = h + n − 2 is
/// interpolated from evaluations on a shifted simplex-lattice grid of
/// C(h+n−1, n−1) points; the grid is provably unisolvent, but the linear
/// system is still checked exactly and the lattice re-shifted on failure
/// (budget of 8 attempts).
pub fn pn_symbolic(n: usize, order: u32) -> Result<PnSymbolic> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "symbolic kernel needs n >= 2 points, got {n}"
        )));
    }
    if (order as i64) < n as i64 - 2 {
        // every layer lies above the truncation order
        return Ok(PnSymbolic {
            n,
            order,
            coeffs: BTreeMap::new(),
        });
    }
    let h_max = order - (n as u32 - 2);

    'attempt: for attempt in 0..GRID_RETRY_BUDGET {
        let grid = interp::homogeneous_grid(n, h_max, 1 + attempt as i64);
        let evals = grid
            .par_iter()
            .map(|point| kernel_series_cached(point, order))
            .collect::<Result<Vec<_>>>()?;
        structural_check(n, &evals)?;

        let mut coeffs = BTreeMap::new();
        for h in (0..=h_max).step_by(2) {
            let monomials = exponent_vectors(n, h);
            let m = monomials.len();
            // prefix property: the first m grid points serve degree h
            let solver = match Interpolator::new(&grid[..m], &monomials) {
                Some(solver) => solver,
                None => continue 'attempt,
            };
            let d = h + n as u32 - 2;
            for e in exponent_vectors(n, d) {
                let values = evals[..m]
                    .iter()
                    .map(|s| s.coefficient(&e).map_err(Error::from))
                    .collect::<Result<Vec<_>>>()?;
                let solution = solver.solve(&values);
                let mut poly = APolynomial::zero(n, h);
                for (mono, c) in monomials.iter().zip(solution) {
                    poly.add_term(mono.clone(), c);
                }
                if !poly.is_zero() {
                    coeffs.insert(e, poly);
                }
            }
        }
        return Ok(PnSymbolic { n, order, coeffs });
    }
    Err(Error::SingularGrid(GRID_RETRY_BUDGET))
}

/// Every evaluated kernel must start at x-degree n−2 and carry only layers
/// whose a-degree D − n + 2 is even; a violation means the kernel
/// implementation is broken.
fn structural_check(n: usize, evals: &[TruncatedSeries]) -> Result<()> {
    for s in evals {
        for (e, _) in s.terms() {
            let d = e.total_degree() as i64;
            let h = d - (n as i64 - 2);
            if h < 0 || h % 2 != 0 {
                return Err(Error::Internal(format!(
                    "kernel term at x-degree {d} violates the degree structure for n={n}"
                )));
            }
        }
    }
    Ok(())
}

type SymbolicCache = Mutex<HashMap<(usize, u32), Arc<PnSymbolic>>>;

static SYMBOLIC_CACHE: OnceLock<SymbolicCache> = OnceLock::new();

/// Memoised [`pn_symbolic`]; the symbolic kernel is deterministic, so the
/// cache is observationally transparent.
pub fn pn_symbolic_cached(n: usize, order: u32) -> Result<Arc<PnSymbolic>> {
    let cache = SYMBOLIC_CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&(n, order)) {
        return Ok(hit.clone());
    }
    let fresh = Arc::new(pn_symbolic(n, order)?);
    cache
        .lock()
        .unwrap()
        .entry((n, order))
        .or_insert_with(|| fresh.clone());
    Ok(fresh)
}

/// Highest-order kernel series computed so far, per a-vector.
type EvalCache = Mutex<HashMap<Vec<Rational>, TruncatedSeries>>;

static EVAL_CACHE: OnceLock<EvalCache> = OnceLock::new();

/// Pₙ(a; x) for any a-vector: direct evaluation where a is nondegenerate,
/// evaluation of the symbolic kernel otherwise. Results are memoised per
/// a-vector at the highest order computed so far.
pub fn kernel_series_cached(a: &[Rational], order: u32) -> Result<TruncatedSeries> {
    let cache = EVAL_CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(a) {
        if hit.order() >= order {
            return Ok(hit.truncated(order));
        }
    }
    let fresh = if check_nondegenerate(a).is_ok() {
        pn_eval(a, order)?
    } else {
        pn_symbolic_cached(a.len(), order)?.evaluate(a)
    };
    let mut map = cache.lock().unwrap();
    match map.get(a) {
        Some(existing) if existing.order() >= fresh.order() => {}
        _ => {
            map.insert(a.to_vec(), fresh.clone());
        }
    }
    Ok(fresh)
}
