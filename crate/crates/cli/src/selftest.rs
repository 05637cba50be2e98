//! The `selftest` subcommand: verification suites over the library.
//!
//! `quick` runs a small smoke envelope; `full` runs the complete
//! acceptance envelope (one-/two-point closed forms, oracle agreement for
//! n=3 g≤3 and n=4 g≤2, the string equation, kernel invariants, the
//! push-forward route comparisons, and weight polynomiality).

use std::process::ExitCode;
use std::time::Instant;

use psi_point::algebra::special::{s_of_form, zeta_of_form};
use psi_point::algebra::{exponent_vectors_up_to, from_ints, int, LinearForm, Rational};
use psi_point::dr::{dr_integral_poly, forgotten_integral_direct, forgotten_series, ForgottenSpec};
use psi_point::kernel::pn_eval;
use psi_point::npoint::{
    cn_identity_check, npoint_series, npoint_via_dr, one_point_closed, two_point_closed,
};
use psi_point::oracle::Oracle;
use psi_point::{Result, TruncatedSeries};

use crate::Level;

struct Suite {
    checks: u32,
    failures: u32,
}

impl Suite {
    fn record(&mut self, name: &str, passed: bool) {
        self.checks += 1;
        if passed {
            println!("ok   {name}");
        } else {
            self.failures += 1;
            println!("FAIL {name}");
        }
    }
}

pub fn run(level: Level) -> Result<ExitCode> {
    let start = Instant::now();
    let mut suite = Suite {
        checks: 0,
        failures: 0,
    };
    let full = level == Level::Full;

    suite.record(
        "C_k identity",
        cn_identity_check(if full { 20 } else { 10 }).passed(),
    );

    let mut oracle = Oracle::new();
    let oracle_ok = oracle.self_check()?.passed();
    suite.record("oracle self-check against closed forms", oracle_ok);

    let one_order = if full { 13 } else { 9 };
    suite.record(
        "one-point function matches closed form",
        npoint_series(1, one_order)? == one_point_closed(one_order)?,
    );
    let two_order = if full { 12 } else { 6 };
    suite.record(
        "two-point function matches closed form",
        npoint_series(2, two_order)? == two_point_closed(two_order)?,
    );

    if oracle_ok {
        let envelope: &[(usize, u32)] = if full { &[(3, 9), (4, 7)] } else { &[(3, 6)] };
        for &(n, order) in envelope {
            let f = npoint_series(n, order)?;
            let mut ok = true;
            for e in exponent_vectors_up_to(n, order) {
                let sum = e.total_degree() as i64;
                let expected = if (sum + 3 - n as i64) % 3 == 0 && sum + 3 >= n as i64 {
                    oracle.dvv_number(((sum + 3 - n as i64) / 3) as u32, e.exponents())?
                } else {
                    Rational::from_integer(0.into())
                };
                if f.coefficient(&e)? != expected {
                    ok = false;
                    eprintln!("  mismatch at n={n}, monomial {e:?}");
                }
            }
            suite.record(
                &format!("oracle agreement for n={n} through order {order}"),
                ok,
            );
        }
    }

    // string equation
    let string_order = if full { 9 } else { 6 };
    for n in [2usize, 3, 4] {
        let lhs = npoint_series(n, string_order)?.restrict_var(n - 1);
        let smaller = npoint_series(n - 1, string_order - 1)?.pad_vars(1);
        let mut coeffs = vec![int(1); n - 1];
        coeffs.push(int(0));
        let mut rhs = LinearForm::new(coeffs)
            .to_series(string_order)
            .mul_truncated(&smaller, string_order)?;
        if n == 3 {
            rhs = rhs.add(&TruncatedSeries::one(n, string_order));
        }
        suite.record(&format!("string equation for n={n}"), lhs == rhs);
    }

    // kernel invariants on a fixed vector
    {
        let a = from_ints(&[1, 2, 5]);
        let p = pn_eval(&a, 4)?;
        let perm = [2usize, 0, 1];
        let pa: Vec<Rational> = perm.iter().map(|&i| a[i].clone()).collect();
        suite.record(
            "kernel symmetry under simultaneous permutation",
            pn_eval(&pa, 4)?.permute_vars(&perm) == p,
        );
        let restricted = p.restrict_var(2);
        let y = LinearForm::new(vec![int(1), int(1), int(0)]);
        let zeta = zeta_of_form(&y.scaled(&a[2]), 4).scale(&(int(1) / &a[2]));
        let rhs = zeta.mul_truncated(&pn_eval(&a[..2], 4)?.pad_vars(1), 4)?;
        suite.record("kernel restriction identity", restricted == rhs);
        let balanced = pn_eval(&from_ints(&[1, 4, -5]), 4)?;
        suite.record(
            "kernel divisible by X on the balanced locus",
            balanced.div_linear(&LinearForm::sum_of_vars(3)).is_ok(),
        );
        let x2 = LinearForm::sum_of_vars(2);
        let diff = pn_eval(&from_ints(&[3, -3]), 4)?.sub(&s_of_form(&x2, 4));
        suite.record(
            "two-point kernel minus S(X) divisible by X",
            diff.div_linear(&x2).is_ok(),
        );
    }

    // push-forward route against the theorem route
    let combos: &[(u32, usize)] = if full {
        &[(0, 3), (1, 3), (2, 3), (1, 4)]
    } else {
        &[(0, 3), (1, 3)]
    };
    for &(g, n) in combos {
        let a1: Vec<i64> = (1..=n as i64).collect();
        let b1: Vec<i64> = (1..=g as i64).collect();
        let a2: Vec<i64> = (2..=n as i64 + 1).collect();
        let b2: Vec<i64> = (1..=g as i64).rev().collect();
        let first = npoint_via_dr(g, n, &a1, &b1)?;
        let second = npoint_via_dr(g, n, &a2, &b2)?;
        let degree = 3 * g + n as u32 - 3;
        let theorem = npoint_series(n, degree)?.homogeneous_part(degree);
        suite.record(
            &format!("push-forward route for (g,n)=({g},{n})"),
            first == second && first == theorem,
        );
    }

    // push-forward series vs signed partition sums
    let specs: &[(&[i64], &[i64])] = if full {
        &[
            (&[1, 1, -2], &[]),
            (&[2, 3, -5], &[]),
            (&[1, 1, -2], &[0]),
            (&[1, 1, -3], &[1]),
            (&[1, 2, -5], &[2]),
            (&[3, -1, -1], &[-1]),
            (&[1, 1, -2], &[1, -1]),
            (&[1, 2, -6], &[1, 2]),
            (&[0, 2, -2], &[-2, 2]),
            (&[1, 2, 3, -6], &[]),
            (&[1, 2, 3, -7], &[1]),
            (&[1, 1, 1, -5], &[1, 1]),
        ]
    } else {
        &[(&[1, 1, -2], &[0]), (&[1, 1, -3], &[1])]
    };
    let max_sum = if full { 6 } else { 4 };
    for &(kept, forgotten) in specs {
        let spec = ForgottenSpec::new(kept.to_vec(), forgotten.to_vec())?;
        let series = forgotten_series(&spec, max_sum)?;
        let mut ok = true;
        for e in exponent_vectors_up_to(kept.len(), max_sum) {
            if series.coefficient(&e)? != forgotten_integral_direct(&spec, e.exponents())? {
                ok = false;
            }
        }
        suite.record(
            &format!("forgotten-points routes agree for ({kept:?}; {forgotten:?})"),
            ok,
        );
    }

    // weight polynomiality (held-out verification happens inside)
    let poly_sum = if full { 5 } else { 3 };
    let mut ok = true;
    for n in [2usize, 3] {
        for e in exponent_vectors_up_to(n, poly_sum) {
            if dr_integral_poly(n, e.exponents()).is_err() {
                ok = false;
            }
        }
    }
    suite.record("DR integrals are polynomial in the weights", ok);

    let level_name = if full { "full" } else { "quick" };
    println!(
        "selftest ({level_name}): {} checks, {} failures, {:?}",
        suite.checks,
        suite.failures,
        start.elapsed()
    );
    if suite.failures == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}
