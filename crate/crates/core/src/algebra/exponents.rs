use std::cmp::Ordering;
use std::fmt;

/// A multi-index: one non-negative exponent per variable.
///
/// The ordering is graded lexicographic (total degree first, then the
/// exponent list), so `BTreeMap`s keyed by `ExponentVector` iterate
/// homogeneous layer by homogeneous layer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    exps: Vec<u32>,
    degree: u32,
}

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Self { exps, degree }
    }

    /// The zero multi-index (the constant monomial) on `n` variables.
    pub fn zeros(n: usize) -> Self {
        Self {
            exps: vec![0; n],
            degree: 0,
        }
    }

    /// The multi-index of the single variable xᵢ.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Self { exps, degree: 1 }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn get(&self, i: usize) -> u32 {
        self.exps[i]
    }

    /// Entrywise sum (monomial product). Panics on length mismatch.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            exps,
            degree: self.degree + other.degree,
        }
    }

    /// Copy with the exponent at `i` changed by `delta` (may not underflow).
    pub fn with_shifted(&self, i: usize, delta: i32) -> Self {
        let mut exps = self.exps.clone();
        let new = (exps[i] as i64 + delta as i64) as u32;
        exps[i] = new;
        Self::new(exps)
    }

    /// True if every entry is even.
    pub fn all_even(&self) -> bool {
        self.exps.iter().all(|&e| e % 2 == 0)
    }

    /// Entrywise half; requires all entries even.
    pub fn halved(&self) -> Self {
        debug_assert!(self.all_even());
        Self::new(self.exps.iter().map(|&e| e / 2).collect())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

impl From<&[u32]> for ExponentVector {
    fn from(exps: &[u32]) -> Self {
        Self::new(exps.to_vec())
    }
}

/// All multi-indices on `n_vars` variables of total degree exactly `degree`,
/// in a fixed deterministic order (first entry descending, then recursively).
pub fn exponent_vectors(n_vars: usize, degree: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n_vars];
    fill(&mut out, &mut current, 0, degree);
    out
}

fn fill(out: &mut Vec<ExponentVector>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(ExponentVector::new(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// All multi-indices of total degree ≤ `degree`, ascending by degree.
///
/// The result has the prefix property: for every d ≤ `degree` the first
/// C(d+n−1, n−1) entries are exactly the multi-indices of degree ≤ d.
pub fn exponent_vectors_up_to(n_vars: usize, degree: u32) -> Vec<ExponentVector> {
    (0..=degree)
        .flat_map(|d| exponent_vectors(n_vars, d))
        .collect()
}
