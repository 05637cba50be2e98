use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::algebra::{ExponentVector, Rational};

/// A homogeneous polynomial in a₁,…,aₙ.
///
/// These are the coefficients of Pₙ(a; x): the x-monomial of total degree D
/// carries an a-polynomial homogeneous of degree D − n + 2.
#[derive(Clone, PartialEq, Eq)]
pub struct APolynomial {
    n_vars: usize,
    degree: u32,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl APolynomial {
    pub fn zero(n_vars: usize, degree: u32) -> Self {
        Self {
            n_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Homogeneous degree; every stored monomial has exactly this total
    /// degree.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: ExponentVector, c: Rational) {
        assert_eq!(e.total_degree(), self.degree, "homogeneity violated");
        assert_eq!(e.len(), self.n_vars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Exact value at a point.
    pub fn evaluate(&self, a: &[Rational]) -> Rational {
        assert_eq!(a.len(), self.n_vars);
        eval_terms(&self.terms, a)
    }
}

impl fmt::Debug for APolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "APoly[deg {}; ", self.degree)?;
        for (e, c) in &self.terms {
            write!(f, "({}) a^{:?} ", c, e)?;
        }
        write!(f, "]")
    }
}

/// A general (not necessarily homogeneous) polynomial over [`Rational`].
///
/// Used for the double-ramification integrals viewed as polynomials in the
/// weights a₁,…,a_{n−1} after the balance constraint eliminates aₙ.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    n_vars: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl Polynomial {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        n_vars: usize,
        terms: impl IntoIterator<Item = (ExponentVector, Rational)>,
    ) -> Self {
        let mut out = Self::zero(n_vars);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(ExponentVector::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: ExponentVector, c: Rational) {
        assert_eq!(e.len(), self.n_vars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn evaluate(&self, a: &[Rational]) -> Rational {
        assert_eq!(a.len(), self.n_vars);
        eval_terms(&self.terms, a)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[")?;
        for (e, c) in &self.terms {
            write!(f, "({}) a^{:?} ", c, e)?;
        }
        write!(f, "]")
    }
}

fn eval_terms(terms: &BTreeMap<ExponentVector, Rational>, a: &[Rational]) -> Rational {
    let mut out = Rational::zero();
    for (e, c) in terms {
        let mut v = c.clone();
        for (i, &exp) in e.exponents().iter().enumerate() {
            for _ in 0..exp {
                v *= &a[i];
            }
        }
        out += v;
    }
    out
}
