//! Independent ground truth: the DVV (Virasoro) recursion.
//!
//! The recursion determines every ⟨τ_{d₁}⋯τ_{dₙ}⟩_g from ⟨τ₀³⟩₀ = 1 and
//! ⟨τ₁⟩₁ = 1/24. Reducing on the largest index d_max = k+1:
//!
//! ```text
//! (2k+3)!!⟨τ_{k+1}∏_Sτ_{dᵢ}⟩_g =
//!     Σ_{j∈S} (2k+2d_j+1)!!/(2d_j−1)!! ⟨τ_{d_j+k}∏_{i≠j}τ_{dᵢ}⟩_g
//!   + ½ Σ_{p+q=k−1}(2p+1)!!(2q+1)!! [ ⟨τ_pτ_q∏_Sτ_{dᵢ}⟩_{g−1}
//!       + Σ_{S=I⊔J, g=g₁+g₂} ⟨τ_p∏_Iτ_{dᵢ}⟩_{g₁}⟨τ_q∏_Jτ_{dᵢ}⟩_{g₂} ] .
//! ```
//!
//! The recursion comes from the KdV/Virasoro side of the theory, not from
//! the kernel pipeline this crate implements, which is what makes it a
//! usable oracle — but its normalisation is only trusted after
//! [`Oracle::self_check`] validates it against the one- and two-point
//! closed forms and the string/dilaton identities. Querying an unvalidated
//! oracle is an error.

use std::collections::HashMap;

use num_traits::Zero;

use crate::algebra::factorials::double_factorial_rat;
use crate::algebra::{rat, ExponentVector, Rational};
use crate::npoint::{one_point_closed, two_point_closed};
use crate::{Error, Result};

/// Memoised DVV correlators with a validation gate.
pub struct Oracle {
    memo: HashMap<(u32, Vec<u32>), Rational>,
    validated: bool,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new()
    }
}

impl Oracle {
    pub fn new() -> Self {
        Self {
            memo: HashMap::new(),
            validated: false,
        }
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Drop the memo table (the validation flag survives); values must not
    /// change.
    pub fn clear_memo(&mut self) {
        self.memo.clear();
    }

    /// ⟨τ_{d₁}⋯τ_{dₙ}⟩_g by the recursion. Fails unless [`Self::self_check`]
    /// has passed.
    pub fn dvv_number(&mut self, g: u32, d: &[u32]) -> Result<Rational> {
        if !self.validated {
            return Err(Error::OracleNotValidated);
        }
        Ok(self.bracket(g, d.to_vec()))
    }

    fn bracket(&mut self, g: u32, mut d: Vec<u32>) -> Rational {
        let n = d.len() as i64;
        if 2 * g as i64 - 2 + n <= 0 {
            return Rational::zero();
        }
        let sum: i64 = d.iter().map(|&x| x as i64).sum();
        if sum != 3 * g as i64 - 3 + n {
            return Rational::zero();
        }
        d.sort_unstable();
        if let Some(hit) = self.memo.get(&(g, d.clone())) {
            return hit.clone();
        }
        // seeds: the recursion itself cannot produce either of these
        if g == 0 && d == [0, 0, 0] {
            return Rational::from_integer(1.into());
        }
        if g == 1 && d == [1] {
            return rat(1, 24);
        }

        let d_max = *d.last().expect("nonempty by the stability guard");
        debug_assert!(d_max >= 1, "all-zero stable cases are seeds");
        let k = d_max - 1;
        let rest: Vec<u32> = d[..d.len() - 1].to_vec();

        let mut rhs = Rational::zero();
        // merge τ_{k+1} with one of the remaining insertions
        for j in 0..rest.len() {
            let dj = rest[j];
            let factor = double_factorial_rat(2 * k as i64 + 2 * dj as i64 + 1)
                / double_factorial_rat(2 * dj as i64 - 1);
            let mut merged: Vec<u32> = rest
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &x)| x)
                .collect();
            merged.push(dj + k);
            rhs += factor * self.bracket(g, merged);
        }
        // split τ_{k+1} into τ_p τ_q with p + q = k − 1
        let half = rat(1, 2);
        for p in 0..k {
            let q = k - 1 - p;
            let factor =
                double_factorial_rat(2 * p as i64 + 1) * double_factorial_rat(2 * q as i64 + 1);
            if g >= 1 {
                let mut joined = rest.clone();
                joined.push(p);
                joined.push(q);
                rhs += &half * &factor * self.bracket(g - 1, joined);
            }
            for mask in 0..(1u32 << rest.len()) {
                let mut left = vec![p];
                let mut right = vec![q];
                for (i, &x) in rest.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        left.push(x);
                    } else {
                        right.push(x);
                    }
                }
                for g1 in 0..=g {
                    let a = self.bracket(g1, left.clone());
                    if a.is_zero() {
                        continue;
                    }
                    let b = self.bracket(g - g1, right.clone());
                    rhs += &half * &factor * a * b;
                }
            }
        }
        let value = rhs / double_factorial_rat(2 * k as i64 + 3);
        self.memo.insert((g, d), value.clone());
        value
    }

    /// Validate the recursion against the closed forms (one-point through
    /// x¹³, two-point through total degree 12) and twenty string/dilaton
    /// instances. Any mismatch leaves the oracle unvalidated.
    pub fn self_check(&mut self) -> Result<SelfCheckReport> {
        let mut mismatches = Vec::new();

        let one = one_point_closed(13)?;
        for deg in 0u32..=13 {
            let closed = one.coefficient(&ExponentVector::new(vec![deg]))?;
            let shifted = deg + 2;
            let recursed = if shifted % 3 == 0 {
                self.bracket(shifted / 3, vec![deg])
            } else {
                Rational::zero()
            };
            if closed != recursed {
                mismatches.push(format!(
                    "one-point x^{deg}: closed {closed}, recursion {recursed}"
                ));
            }
        }

        let two = two_point_closed(12)?;
        for d1 in 0u32..=12 {
            for d2 in 0..=(12 - d1) {
                let closed = two.coefficient(&ExponentVector::new(vec![d1, d2]))?;
                let recursed = if (d1 + d2 + 1) % 3 == 0 {
                    self.bracket((d1 + d2 + 1) / 3, vec![d1, d2])
                } else {
                    Rational::zero()
                };
                if closed != recursed {
                    mismatches.push(format!(
                        "two-point x^({d1},{d2}): closed {closed}, recursion {recursed}"
                    ));
                }
            }
        }

        // string: ⟨τ₀∏τ_d⟩_g = Σ_j ⟨τ_{d_j−1}∏_{i≠j}τ_d⟩_g
        let string_cases: [(u32, &[u32]); 10] = [
            (1, &[1, 2]),
            (1, &[0, 3]),
            (1, &[0, 1, 3]),
            (1, &[1, 1, 2]),
            (1, &[0, 2, 2]),
            (1, &[0, 0, 4]),
            (2, &[5]),
            (2, &[2, 4]),
            (2, &[3, 3]),
            (0, &[0, 0, 1, 1]),
        ];
        for (g, d) in string_cases {
            let mut with_zero = d.to_vec();
            with_zero.push(0);
            let lhs = self.bracket(g, with_zero);
            let mut rhs = Rational::zero();
            for j in 0..d.len() {
                if d[j] == 0 {
                    continue;
                }
                let mut lowered = d.to_vec();
                lowered[j] -= 1;
                rhs += self.bracket(g, lowered);
            }
            if lhs != rhs {
                mismatches.push(format!("string at (g={g}, d={d:?}): {lhs} vs {rhs}"));
            }
        }

        // dilaton: ⟨τ₁∏τ_d⟩_g = (2g−2+n)⟨∏τ_d⟩_g
        let dilaton_cases: [(u32, &[u32]); 10] = [
            (0, &[0, 0, 0]),
            (0, &[0, 0, 0, 1]),
            (1, &[1, 1]),
            (1, &[0, 2]),
            (1, &[0, 0, 3]),
            (1, &[0, 1, 1, 2]),
            (2, &[4]),
            (2, &[0, 5]),
            (2, &[1, 2, 3]),
            (3, &[7]),
        ];
        for (g, d) in dilaton_cases {
            let mut with_one = d.to_vec();
            with_one.push(1);
            let lhs = self.bracket(g, with_one);
            let factor = 2 * g as i64 - 2 + d.len() as i64;
            let rhs = self.bracket(g, d.to_vec()) * rat(factor, 1);
            if lhs != rhs {
                mismatches.push(format!("dilaton at (g={g}, d={d:?}): {lhs} vs {rhs}"));
            }
        }

        self.validated = mismatches.is_empty();
        Ok(SelfCheckReport { mismatches })
    }
}

/// Outcome of [`Oracle::self_check`].
#[derive(Debug, Clone)]
pub struct SelfCheckReport {
    pub mismatches: Vec<String>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}
