//! Exact polynomial interpolation on simplex-lattice grids.
//!
//! A polynomial of degree ≤ h in k variables is uniquely determined by its
//! values on the lattice {v ∈ ℤ^k_{≥0} : Σvᵢ ≤ h} (the principal lattice of
//! a simplex), and this stays true under any affine shift of the lattice.
//! A *homogeneous* polynomial of degree h in k+1 variables dehomogenises to
//! such a polynomial, so evaluating at lattice points with the last
//! coordinate pinned to the shift constant gives a provably nonsingular
//! linear system. Nonsingularity is still verified during elimination and
//! the lattice is re-shifted on failure.

use num_traits::{One, Zero};

use crate::algebra::{exponent_vectors_up_to, ExponentVector, Rational};

/// Points (k₁+c, …, k_{m}+c, c) for all lattice vectors k with Σk ≤ `degree`
/// in `n_vars`−1 coordinates; unisolvent for homogeneous polynomials of
/// degree `degree` in `n_vars` variables. Ascending by lattice degree, so a
/// prefix of length C(h+n−1, n−1) serves every lower degree h.
pub fn homogeneous_grid(n_vars: usize, degree: u32, offset: i64) -> Vec<Vec<Rational>> {
    assert!(n_vars >= 1);
    let c = Rational::from_integer(offset.into());
    exponent_vectors_up_to(n_vars - 1, degree)
        .into_iter()
        .map(|k| {
            let mut point: Vec<Rational> = k
                .exponents()
                .iter()
                .map(|&e| Rational::from_integer(e.into()) + &c)
                .collect();
            point.push(c.clone());
            point
        })
        .collect()
}

/// Integer lattice points (k₁+c, …, kₙ+c) with Σk ≤ `degree`; unisolvent
/// for general polynomials of degree ≤ `degree` in `n_vars` variables.
pub fn affine_grid(n_vars: usize, degree: u32, offset: i64) -> Vec<Vec<i64>> {
    exponent_vectors_up_to(n_vars, degree)
        .into_iter()
        .map(|k| k.exponents().iter().map(|&e| e as i64 + offset).collect())
        .collect()
}

/// x^e over the point coordinates.
pub fn monomial_value(point: &[Rational], e: &ExponentVector) -> Rational {
    let mut v = Rational::one();
    for (i, &exp) in e.exponents().iter().enumerate() {
        for _ in 0..exp {
            v *= &point[i];
        }
    }
    v
}

/// An exactly inverted interpolation matrix: rows indexed by grid points,
/// columns by monomials.
pub struct Interpolator {
    inverse: Vec<Vec<Rational>>,
}

impl Interpolator {
    /// Build from the values monomialⱼ(pointᵢ); `None` if singular.
    pub fn new(points: &[Vec<Rational>], monomials: &[ExponentVector]) -> Option<Self> {
        let m = monomials.len();
        assert_eq!(points.len(), m, "square system required");
        let matrix: Vec<Vec<Rational>> = points
            .iter()
            .map(|p| monomials.iter().map(|e| monomial_value(p, e)).collect())
            .collect();
        invert(matrix).map(|inverse| Self { inverse })
    }

    /// Monomial coefficients from the values at the grid points.
    pub fn solve(&self, values: &[Rational]) -> Vec<Rational> {
        assert_eq!(values.len(), self.inverse.len());
        self.inverse
            .iter()
            .map(|row| {
                let mut acc = Rational::zero();
                for (a, v) in row.iter().zip(values) {
                    if !a.is_zero() && !v.is_zero() {
                        acc += a * v;
                    }
                }
                acc
            })
            .collect()
    }
}

/// Exact Gauss-Jordan inverse; `None` if the matrix is singular.
fn invert(mut a: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
            *x /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let t = &a[col][c] * &f;
                a[r][c] -= t;
                let t = &inv[col][c] * &f;
                inv[r][c] -= t;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{exponent_vectors, int, rat};

    #[test]
    fn invert_small_matrix() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = invert(m).unwrap();
        assert_eq!(inv[0], vec![int(1), int(-1)]);
        assert_eq!(inv[1], vec![int(-1), int(2)]);
    }

    #[test]
    fn singular_matrix_detected() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(invert(m).is_none());
    }

    #[test]
    fn homogeneous_interpolation_recovers_polynomial() {
        // recover p(a) = a₁²a₂ − 3a₂a₃² (homogeneous of degree 3 in 3 vars)
        let monos = exponent_vectors(3, 3);
        let points = homogeneous_grid(3, 3, 1);
        assert_eq!(points.len(), monos.len());
        let interp = Interpolator::new(&points, &monos).unwrap();
        let p = |a: &[Rational]| -> Rational {
            &a[0] * &a[0] * &a[1] - rat(3, 1) * &a[1] * &a[2] * &a[2]
        };
        let values: Vec<Rational> = points.iter().map(|pt| p(pt)).collect();
        let coeffs = interp.solve(&values);
        for (mono, c) in monos.iter().zip(&coeffs) {
            let expected = match mono.exponents() {
                [2, 1, 0] => int(1),
                [0, 1, 2] => int(-3),
                _ => int(0),
            };
            assert_eq!(*c, expected, "monomial {mono:?}");
        }
    }

    #[test]
    fn grid_sizes_match_monomial_counts() {
        // #lattice points with Σk ≤ h in n−1 vars = #degree-h monomials in n vars
        for (n, h) in [(2usize, 5u32), (3, 4), (4, 3)] {
            let grid = homogeneous_grid(n, h, 1);
            assert_eq!(grid.len(), exponent_vectors(n, h).len(), "n={n} h={h}");
        }
    }
}
