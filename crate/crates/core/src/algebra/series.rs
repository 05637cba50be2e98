use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{AlgebraError, ExponentVector, Rational};

/// A linear form Σ cᵢxᵢ over the series variables.
///
/// Houses the 2×2 determinants a_p x_q − a_q x_p of the kernel and the form
/// X = Σ xᵢ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearForm {
    coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn zero(n_vars: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); n_vars],
        }
    }

    /// X = x₁ + ⋯ + xₙ.
    pub fn sum_of_vars(n_vars: usize) -> Self {
        Self {
            coeffs: vec![Rational::one(); n_vars],
        }
    }

    /// c·xᵢ as a form on `n_vars` variables.
    pub fn single(n_vars: usize, i: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); n_vars];
        coeffs[i] = c;
        Self { coeffs }
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the lowest-indexed variable with a nonzero coefficient.
    pub fn pivot(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// The form as a degree-1 series truncated at `order`.
    pub fn to_series(&self, order: u32) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(self.coeffs.len(), order);
        if order == 0 {
            return s;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                s.terms
                    .insert(ExponentVector::unit(self.coeffs.len(), i), c.clone());
            }
        }
        s
    }
}

/// A multivariate polynomial over [`Rational`], graded by total degree and
/// truncated at an explicit order.
///
/// Invariants: every stored exponent vector has total degree ≤ the
/// truncation order, zero coefficients are never stored, and equality is
/// map equality (the truncation order is bookkeeping about completeness,
/// not part of the value).
#[derive(Clone, Eq)]
pub struct TruncatedSeries {
    n_vars: usize,
    order: u32,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.n_vars == other.n_vars && self.terms == other.terms
    }
}

impl TruncatedSeries {
    pub fn zero(n_vars: usize, order: u32) -> Self {
        Self {
            n_vars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n_vars: usize, order: u32) -> Self {
        Self::constant(n_vars, order, Rational::one())
    }

    pub fn constant(n_vars: usize, order: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ExponentVector::zeros(n_vars), c);
        }
        Self {
            n_vars,
            order,
            terms,
        }
    }

    /// The single term c·x^e.
    pub fn monomial(
        n_vars: usize,
        order: u32,
        e: ExponentVector,
        c: Rational,
    ) -> Result<Self, AlgebraError> {
        if e.len() != n_vars {
            return Err(AlgebraError::VariableMismatch(e.len(), n_vars));
        }
        if e.total_degree() > order {
            return Err(AlgebraError::DegreeAboveTruncation(e.total_degree(), order));
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Ok(Self {
            n_vars,
            order,
            terms,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Lowest total degree among stored terms.
    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|e| e.total_degree())
    }

    /// The exact stored coefficient of x^e (zero if absent). Asking above
    /// the truncation order is an error: those coefficients are unknown.
    pub fn coefficient(&self, e: &ExponentVector) -> Result<Rational, AlgebraError> {
        if e.len() != self.n_vars {
            return Err(AlgebraError::VariableMismatch(e.len(), self.n_vars));
        }
        if e.total_degree() > self.order {
            return Err(AlgebraError::DegreeAboveTruncation(
                e.total_degree(),
                self.order,
            ));
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(Rational::zero))
    }

    pub(crate) fn add_term(&mut self, e: ExponentVector, c: Rational) {
        debug_assert_eq!(e.len(), self.n_vars);
        if c.is_zero() || e.total_degree() > self.order {
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

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let order = self.order.min(other.order);
        let mut out = self.truncated(order);
        for (e, c) in &other.terms {
            if e.total_degree() <= order {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            n_vars: self.n_vars,
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.n_vars, self.order);
        }
        Self {
            n_vars: self.n_vars,
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Copy truncated at a lower order (coefficients above it are dropped).
    pub fn truncated(&self, order: u32) -> Self {
        debug_assert!(order <= self.order, "cannot raise a truncation order");
        Self {
            n_vars: self.n_vars,
            order,
            terms: self
                .terms
                .iter()
                .take_while(|(e, _)| e.total_degree() <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient-exact product, truncated at min(N₁, N₂).
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        let order = self.order.min(other.order);
        self.mul_truncated(other, order)
    }

    /// Product of the stored terms, discarding degrees above `order` and
    /// declaring the result at that order.
    ///
    /// Unlike [`mul`](Self::mul) the requested order may exceed the inputs':
    /// the caller asserts the inputs are complete enough (e.g. because a
    /// factor has a known minimum degree) for the result to be correct there.
    pub fn mul_truncated(&self, other: &Self, order: u32) -> Result<Self, AlgebraError> {
        if self.n_vars != other.n_vars {
            return Err(AlgebraError::VariableMismatch(self.n_vars, other.n_vars));
        }
        let mut out = Self::zero(self.n_vars, order);
        // iterate the smaller map outermost
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (ea, ca) in &small.terms {
            let da = ea.total_degree();
            if da > order {
                break;
            }
            for (eb, cb) in &large.terms {
                if da + eb.total_degree() > order {
                    break;
                }
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Exact quotient by a nonzero linear form, at order N−1.
    ///
    /// Synthetic division along the lowest-indexed variable with a nonzero
    /// coefficient in `l`; the remainder must vanish, otherwise the dividend
    /// was not divisible and `NonExactDivision` is returned.
    pub fn div_linear(&self, l: &LinearForm) -> Result<Self, AlgebraError> {
        if self.n_vars != l.n_vars() {
            return Err(AlgebraError::VariableMismatch(self.n_vars, l.n_vars()));
        }
        let p = l.pivot().ok_or(AlgebraError::ZeroLinearForm)?;
        let c = l.coeff(p).clone();
        let out_order = self.order.saturating_sub(1);
        let mut quotient = Self::zero(self.n_vars, out_order);

        // The equation l·q = s decouples into homogeneous layers: the
        // degree-d layer of q is determined by the degree-(d+1) layer of s.
        // Within a layer, peel powers of the pivot variable from the top;
        // what remains at pivot power 0 is the remainder.
        let mut by_degree: BTreeMap<u32, BTreeMap<ExponentVector, Rational>> = BTreeMap::new();
        for (e, v) in &self.terms {
            by_degree
                .entry(e.total_degree())
                .or_default()
                .insert(e.clone(), v.clone());
        }
        for (degree, mut layer) in by_degree {
            for j in (1..=degree).rev() {
                let slice: Vec<ExponentVector> =
                    layer.keys().filter(|e| e.get(p) == j).cloned().collect();
                for e in slice {
                    let v = layer.remove(&e).expect("slice key present");
                    let qe = e.with_shifted(p, -1);
                    let qv = &v / &c;
                    // subtract (l − c·x_p)·(qv·x^qe) from the layer
                    for (i, li) in l.coeffs().iter().enumerate() {
                        if i == p || li.is_zero() {
                            continue;
                        }
                        let te = qe.with_shifted(i, 1);
                        let entry = layer.entry(te).or_insert_with(Rational::zero);
                        *entry -= li * &qv;
                    }
                    layer.retain(|_, val| !val.is_zero());
                    quotient.add_term(qe, qv);
                }
            }
            if !layer.is_empty() {
                return Err(AlgebraError::NonExactDivision);
            }
        }
        Ok(quotient)
    }

    /// Multiplicative inverse of a series with constant term 1, through the
    /// same order.
    pub fn invert_unit(&self) -> Result<Self, AlgebraError> {
        let const_term = self
            .terms
            .get(&ExponentVector::zeros(self.n_vars))
            .cloned()
            .unwrap_or_else(Rational::zero);
        if !const_term.is_one() {
            return Err(AlgebraError::NonUnitConstant);
        }
        // t_d = −Σ_{j=1..d} s_j · t_{d−j}, solved degree by degree.
        let s_layers = self.layers();
        let mut t_layers: Vec<BTreeMap<ExponentVector, Rational>> =
            vec![BTreeMap::new(); self.order as usize + 1];
        t_layers[0].insert(ExponentVector::zeros(self.n_vars), Rational::one());
        for d in 1..=self.order as usize {
            let mut layer: BTreeMap<ExponentVector, Rational> = BTreeMap::new();
            for j in 1..=d {
                if let Some(sj) = s_layers.get(j) {
                    for (es, cs) in sj {
                        for (et, ct) in &t_layers[d - j] {
                            let e = es.add(et);
                            let entry = layer.entry(e).or_insert_with(Rational::zero);
                            *entry -= cs * ct;
                        }
                    }
                }
            }
            layer.retain(|_, v| !v.is_zero());
            t_layers[d] = layer;
        }
        let mut out = Self::zero(self.n_vars, self.order);
        for layer in t_layers {
            for (e, c) in layer {
                out.terms.insert(e, c);
            }
        }
        Ok(out)
    }

    /// Stored terms grouped by total degree (index = degree).
    fn layers(&self) -> Vec<BTreeMap<ExponentVector, Rational>> {
        let mut layers = vec![BTreeMap::new(); self.order as usize + 1];
        for (e, c) in &self.terms {
            layers[e.total_degree() as usize].insert(e.clone(), c.clone());
        }
        layers
    }

    /// The homogeneous part of total degree `d` (same truncation order).
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            n_vars: self.n_vars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.total_degree() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Set xᵢ = 0: drop every monomial with a positive exponent at `i`.
    pub fn restrict_var(&self, i: usize) -> Self {
        Self {
            n_vars: self.n_vars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.get(i) == 0)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Remove variable `i` from the index set; every stored monomial must
    /// have exponent 0 there (restrict first).
    pub fn remove_var(&self, i: usize) -> Result<Self, AlgebraError> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.get(i) != 0 {
                return Err(AlgebraError::VariableMismatch(self.n_vars, self.n_vars - 1));
            }
            let mut exps = e.exponents().to_vec();
            exps.remove(i);
            terms.insert(ExponentVector::new(exps), c.clone());
        }
        Ok(Self {
            n_vars: self.n_vars - 1,
            order: self.order,
            terms,
        })
    }

    /// Append `extra` fresh variables (exponent 0 everywhere).
    pub fn pad_vars(&self, extra: usize) -> Self {
        let n = self.n_vars + extra;
        Self {
            n_vars: n,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut exps = e.exponents().to_vec();
                    exps.resize(n, 0);
                    (ExponentVector::new(exps), c.clone())
                })
                .collect(),
        }
    }

    /// Rename variables: xᵢ ↦ x_{perm[i]}. `perm` must be a permutation of
    /// 0..n_vars.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.n_vars);
        Self {
            n_vars: self.n_vars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut exps = vec![0u32; self.n_vars];
                    for (i, &x) in e.exponents().iter().enumerate() {
                        exps[perm[i]] = x;
                    }
                    (ExponentVector::new(exps), c.clone())
                })
                .collect(),
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[n={}, N={}; ", self.n_vars, self.order)?;
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}) x^{:?}", c, e)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat, special};
    use super::*;

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector::from(e)
    }

    #[test]
    fn mul_difference_of_squares() {
        // (1 + x₁)(1 − x₁) = 1 − x₁² at N=2
        let mut a = TruncatedSeries::one(1, 2);
        a.add_term(ev(&[1]), int(1));
        let mut b = TruncatedSeries::one(1, 2);
        b.add_term(ev(&[1]), int(-1));
        let prod = a.mul(&b).unwrap();
        let mut expected = TruncatedSeries::one(1, 2);
        expected.add_term(ev(&[2]), int(-1));
        assert_eq!(prod, expected);
    }

    #[test]
    fn mul_identity() {
        let s = special::s_of_form(&LinearForm::sum_of_vars(2), 4);
        let one = TruncatedSeries::one(2, 4);
        assert_eq!(s.mul(&one).unwrap(), s);
    }

    #[test]
    fn mul_variable_mismatch() {
        let a = TruncatedSeries::one(1, 2);
        let b = TruncatedSeries::one(2, 2);
        assert_eq!(a.mul(&b).unwrap_err(), AlgebraError::VariableMismatch(1, 2));
    }

    #[test]
    fn div_linear_factorization() {
        // (x₁² − x₂²) ÷ (x₁ + x₂) = x₁ − x₂
        let mut s = TruncatedSeries::zero(2, 2);
        s.add_term(ev(&[2, 0]), int(1));
        s.add_term(ev(&[0, 2]), int(-1));
        let q = s.div_linear(&LinearForm::sum_of_vars(2)).unwrap();
        let mut expected = TruncatedSeries::zero(2, 1);
        expected.add_term(ev(&[1, 0]), int(1));
        expected.add_term(ev(&[0, 1]), int(-1));
        assert_eq!(q, expected);
    }

    #[test]
    fn div_linear_round_trip() {
        // ((x₁+x₂)·S(x₁+x₂)) ÷ (x₁+x₂) = S(x₁+x₂)
        let x = LinearForm::sum_of_vars(2);
        let s = special::s_of_form(&x, 5);
        let prod = x.to_series(6).mul_truncated(&s, 6).unwrap();
        assert_eq!(prod.div_linear(&x).unwrap(), s);
    }

    #[test]
    fn div_linear_non_exact() {
        let s = TruncatedSeries::monomial(2, 2, ev(&[2, 0]), int(1)).unwrap();
        assert_eq!(
            s.div_linear(&LinearForm::sum_of_vars(2)).unwrap_err(),
            AlgebraError::NonExactDivision
        );
    }

    #[test]
    fn div_by_zero_form() {
        let s = TruncatedSeries::one(2, 2);
        assert_eq!(
            s.div_linear(&LinearForm::zero(2)).unwrap_err(),
            AlgebraError::ZeroLinearForm
        );
    }

    #[test]
    fn invert_s_series() {
        // 1/S(X) at N=4 is 1 − X²/24 + 7X⁴/5760
        let x = LinearForm::sum_of_vars(1);
        let s = special::s_of_form(&x, 4);
        let inv = s.invert_unit().unwrap();
        let mut expected = TruncatedSeries::one(1, 4);
        expected.add_term(ev(&[2]), rat(-1, 24));
        expected.add_term(ev(&[4]), rat(7, 5760));
        assert_eq!(inv, expected);
        // two-sided inverse through order N
        assert_eq!(s.mul(&inv).unwrap(), TruncatedSeries::one(1, 4));
        assert_eq!(inv.mul(&s).unwrap(), TruncatedSeries::one(1, 4));
    }

    #[test]
    fn invert_one_and_geometric() {
        let one = TruncatedSeries::one(3, 5);
        assert_eq!(one.invert_unit().unwrap(), one);

        // 1/(1+x₁) at N=3 is the alternating geometric series
        let mut s = TruncatedSeries::one(1, 3);
        s.add_term(ev(&[1]), int(1));
        let inv = s.invert_unit().unwrap();
        let mut expected = TruncatedSeries::one(1, 3);
        expected.add_term(ev(&[1]), int(-1));
        expected.add_term(ev(&[2]), int(1));
        expected.add_term(ev(&[3]), int(-1));
        assert_eq!(inv, expected);
    }

    #[test]
    fn invert_requires_unit() {
        let s = TruncatedSeries::zero(1, 3);
        assert_eq!(s.invert_unit().unwrap_err(), AlgebraError::NonUnitConstant);
    }

    #[test]
    fn coefficient_access() {
        let s = special::s_of_form(&LinearForm::sum_of_vars(2), 4);
        // cross term of (x₁+x₂)²/24
        assert_eq!(s.coefficient(&ev(&[1, 1])).unwrap(), rat(1, 12));
        assert_eq!(s.coefficient(&ev(&[1, 0])).unwrap(), int(0));
        assert_eq!(
            TruncatedSeries::one(2, 4)
                .coefficient(&ev(&[0, 0]))
                .unwrap(),
            int(1)
        );
        assert_eq!(
            s.coefficient(&ev(&[5, 0])).unwrap_err(),
            AlgebraError::DegreeAboveTruncation(5, 4)
        );
    }

    #[test]
    fn restrict_and_remove() {
        let s = special::s_of_form(&LinearForm::sum_of_vars(2), 4);
        let r = s.restrict_var(1);
        assert!(r.terms().all(|(e, _)| e.get(1) == 0));
        let one_var = r.remove_var(1).unwrap();
        assert_eq!(one_var, special::s_of_form(&LinearForm::sum_of_vars(1), 4));
        assert!(s.remove_var(1).is_err());
    }

    #[test]
    fn permute_vars_round_trip() {
        let mut s = TruncatedSeries::zero(3, 3);
        s.add_term(ev(&[2, 1, 0]), int(5));
        let p = s.permute_vars(&[1, 2, 0]);
        assert_eq!(p.coefficient(&ev(&[0, 2, 1])).unwrap(), int(5));
        assert_eq!(p.permute_vars(&[2, 0, 1]), s);
    }
}
