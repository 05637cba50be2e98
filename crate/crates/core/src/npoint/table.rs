use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::Rational;
use crate::{Error, Result};

/// Where a tabulated intersection number came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    TheoremRoute,
    Oracle,
    ClosedForm,
    DrRoute,
}

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub value: Rational,
    pub provenance: Provenance,
}

/// Memoised intersection numbers keyed by (g, sorted degree vector).
///
/// An entry may exist only when Σdᵢ = 3g − 3 + n and the case is stable;
/// values are independent of the ordering of d, so the key stores the
/// non-decreasing representative.
#[derive(Clone, Debug, Default)]
pub struct IntersectionTable {
    entries: BTreeMap<(u32, Vec<u32>), TableEntry>,
}

impl IntersectionTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(
        &mut self,
        g: u32,
        d: &[u32],
        value: Rational,
        provenance: Provenance,
    ) -> Result<()> {
        let n = d.len() as i64;
        let sum: i64 = d.iter().map(|&x| x as i64).sum();
        if sum != 3 * g as i64 - 3 + n || 2 * g as i64 - 2 + n <= 0 {
            return Err(Error::InvalidInput(format!(
                "entry (g={g}, d={d:?}) violates the dimension constraint"
            )));
        }
        let mut key = d.to_vec();
        key.sort_unstable();
        self.entries
            .insert((g, key), TableEntry { value, provenance });
        Ok(())
    }

    /// Look up ⟨τ_{d₁}⋯τ_{dₙ}⟩_g (any ordering of d).
    pub fn get(&self, g: u32, d: &[u32]) -> Option<&TableEntry> {
        let mut key = d.to_vec();
        key.sort_unstable();
        self.entries.get(&(g, key))
    }

    /// Entries in lexicographic (g, d) order.
    pub fn entries(&self) -> impl Iterator<Item = (&(u32, Vec<u32>), &TableEntry)> {
        self.entries.iter()
    }

    /// Tabulate every stable (g, d) with n points and Σd = 3g − 3 + n ≤
    /// `order` from the n-point function, verifying along the way that the
    /// series is symmetric (all orderings of d share one coefficient) and
    /// dimension-gated (no stray terms at invalid degrees).
    pub fn from_npoint_series(n: usize, order: u32) -> Result<Self> {
        let series = super::npoint_series(n, order)?;
        let mut table = Self::new();
        let mut valid_degrees = Vec::new();
        for g in 0u32.. {
            let sum = 3 * g as i64 - 3 + n as i64;
            if sum > order as i64 {
                break;
            }
            if sum < 0 || 2 * g as i64 - 2 + (n as i64) <= 0 {
                continue;
            }
            valid_degrees.push((g, sum as u32));
        }
        for &(g, sum) in &valid_degrees {
            for e in crate::algebra::exponent_vectors(n, sum) {
                if !e.exponents().windows(2).all(|w| w[0] <= w[1]) {
                    continue; // keep the sorted representative only
                }
                let value = series.coefficient(&e)?;
                // symmetry: every reordering must carry the same coefficient
                for other in crate::algebra::exponent_vectors(n, sum) {
                    let mut sorted = other.exponents().to_vec();
                    sorted.sort_unstable();
                    if sorted == e.exponents() && series.coefficient(&other)? != value {
                        return Err(Error::Internal(format!(
                            "n-point function is not symmetric at {other:?}"
                        )));
                    }
                }
                table.insert(g, e.exponents(), value, Provenance::TheoremRoute)?;
            }
        }
        // dimension gating: every stored term must sit at a tabulated degree
        for (e, c) in series.terms() {
            if !valid_degrees.iter().any(|&(_, s)| s == e.total_degree()) && !c.is_zero() {
                return Err(Error::Internal(format!(
                    "coefficient at {e:?} violates the dimension constraint"
                )));
            }
        }
        Ok(table)
    }
}
