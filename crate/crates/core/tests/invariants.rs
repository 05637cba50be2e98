//! Property-level invariants of the series algebra and the kernel.

use num_traits::Zero;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use psi_point::algebra::special::s_of_form;
use psi_point::algebra::{from_ints, int, rat, ExponentVector, LinearForm, Rational};
use psi_point::kernel::{pn_eval, pn_symbolic};
use psi_point::TruncatedSeries;

fn arb_series(n_vars: usize, order: u32) -> impl Strategy<Value = TruncatedSeries> {
    let exps = prop::collection::vec(0u32..=order, n_vars)
        .prop_filter("within order", move |e| e.iter().sum::<u32>() <= order);
    prop::collection::vec((exps, -9i64..=9, 1i64..=9), 0..6).prop_map(move |terms| {
        let mut s = TruncatedSeries::zero(n_vars, order);
        for (e, num, den) in terms {
            s = s.add(
                &TruncatedSeries::monomial(n_vars, order, ExponentVector::new(e), rat(num, den))
                    .unwrap(),
            );
        }
        s
    })
}

fn arb_form(n_vars: usize) -> impl Strategy<Value = LinearForm> {
    prop::collection::vec(-5i64..=5, n_vars)
        .prop_filter("nonzero form", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| LinearForm::new(from_ints(&c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_then_div_by_linear_form_round_trips(
        s in arb_series(3, 5),
        l in arb_form(3),
    ) {
        let product = l.to_series(6).mul_truncated(&s, 6).unwrap();
        let back = product.div_linear(&l).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn invert_unit_is_two_sided(s in arb_series(2, 4)) {
        // force constant term 1
        let unit = s
            .sub(&TruncatedSeries::constant(2, 4, s.coefficient(&ExponentVector::zeros(2)).unwrap()))
            .add(&TruncatedSeries::one(2, 4));
        let inv = unit.invert_unit().unwrap();
        prop_assert_eq!(unit.mul(&inv).unwrap(), TruncatedSeries::one(2, 4));
        prop_assert_eq!(inv.mul(&unit).unwrap(), TruncatedSeries::one(2, 4));
    }

    #[test]
    fn s_of_form_is_even_with_known_coefficients(c in prop::collection::vec(-4i64..=4, 2)) {
        let l = LinearForm::new(from_ints(&c));
        let s = s_of_form(&l, 6);
        // S(L) agrees with substituting L into the one-variable S
        let one_var = s_of_form(&LinearForm::sum_of_vars(1), 6);
        let l_series = l.to_series(6);
        let mut expected = TruncatedSeries::zero(2, 6);
        let mut power = TruncatedSeries::one(2, 6);
        let mut current = 0u32;
        for (e, coeff) in one_var.terms() {
            while current < e.total_degree() {
                power = power.mul(&l_series).unwrap();
                current += 1;
            }
            expected = expected.add(&power.scale(coeff));
        }
        prop_assert_eq!(s, expected);
    }
}

fn random_nondegenerate(rng: &mut StdRng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-6i64..=6)).collect();
        if v.iter().filter(|&&x| x == 0).count() <= 1 && v.iter().any(|&x| x != 0) {
            return from_ints(&v);
        }
    }
}

fn random_balanced_nondegenerate(rng: &mut StdRng, n: usize) -> Vec<i64> {
    loop {
        let mut v: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-5i64..=5)).collect();
        v.push(-v.iter().sum::<i64>());
        if v.iter().filter(|&&x| x == 0).count() <= 1 {
            return v;
        }
    }
}

#[test]
fn kernel_symmetry_on_random_vectors() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in [3usize, 4] {
        for _ in 0..3 {
            let a = random_nondegenerate(&mut rng, n);
            let reference = pn_eval(&a, 4).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let permuted_a: Vec<Rational> = perm.iter().map(|&i| a[i].clone()).collect();
            assert_eq!(
                pn_eval(&permuted_a, 4).unwrap().permute_vars(&perm),
                reference,
                "n={n} a={a:?} perm={perm:?}"
            );
        }
    }
}

#[test]
fn kernel_homogeneity_on_random_vectors() {
    let mut rng = StdRng::seed_from_u64(8);
    let lambda = int(2);
    for n in [3usize, 4] {
        let a = random_nondegenerate(&mut rng, n);
        let scaled: Vec<Rational> = a.iter().map(|x| x / &lambda).collect();
        let p = pn_eval(&a, 4).unwrap();
        let ps = pn_eval(&scaled, 4).unwrap();
        for (e, c) in p.terms() {
            let pow = n as i64 - 2 - e.total_degree() as i64;
            let mut factor = int(1);
            for _ in 0..pow.abs() {
                factor *= &lambda;
            }
            let expected = if pow >= 0 { c * &factor } else { c / &factor };
            assert_eq!(ps.coefficient(e).unwrap(), expected);
        }
        // and nothing extra appears on the scaled side
        for (e, c) in ps.terms() {
            if p.coefficient(e).unwrap().is_zero() {
                panic!("stray term {e:?} -> {c}");
            }
        }
    }
}

#[test]
fn kernel_divisible_by_x_on_balanced_vectors() {
    let mut rng = StdRng::seed_from_u64(9);
    for n in [3usize, 4] {
        for _ in 0..3 {
            let a = random_balanced_nondegenerate(&mut rng, n);
            let p = pn_eval(&from_ints(&a), 4).unwrap();
            assert!(p.div_linear(&LinearForm::sum_of_vars(n)).is_ok(), "a={a:?}");
        }
    }
}

#[test]
fn kernel_restriction_identity_on_random_vectors() {
    let mut rng = StdRng::seed_from_u64(10);
    for n in [3usize, 4] {
        let a = loop {
            // the identity divides by aₙ
            let candidate = random_nondegenerate(&mut rng, n);
            if !candidate[n - 1].is_zero() {
                break candidate;
            }
        };
        let order = 4;
        let restricted = pn_eval(&a, order).unwrap().restrict_var(n - 1);
        let mut y_coeffs = vec![int(1); n - 1];
        y_coeffs.push(int(0));
        let y = LinearForm::new(y_coeffs);
        let zeta = psi_point::algebra::special::zeta_of_form(&y.scaled(&a[n - 1]), order)
            .scale(&(int(1) / &a[n - 1]));
        let smaller = pn_eval(&a[..n - 1], order).unwrap().pad_vars(1);
        assert_eq!(
            restricted,
            zeta.mul_truncated(&smaller, order).unwrap(),
            "n={n} a={a:?}"
        );
    }
}

#[test]
fn symbolic_kernel_reproduces_evaluations_off_grid() {
    let mut rng = StdRng::seed_from_u64(11);
    let p = pn_symbolic(3, 5).unwrap();
    for _ in 0..3 {
        let a = random_nondegenerate(&mut rng, 3);
        assert_eq!(p.evaluate(&a), pn_eval(&a, 5).unwrap(), "a={a:?}");
    }
}
