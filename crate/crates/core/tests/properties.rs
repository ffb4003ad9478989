use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

use powsum::compositions::{
    chain_to_composition, composition_to_chain, decreasing_chains, gessel_coefficient_bruteforce,
    gessel_coefficient_series, Composition,
};
use powsum::dirichlet::{enumerate_characters, l_value, s_sum, totient};
use powsum::exact::{
    binomial, cyclo_root_power, cyclotomic_polynomial, format_rational, parse_rational, rat, CyclotomicRing,
    Polynomial, Rational, Variable,
};
use powsum::exp_sums::{exp_power_sum_cyclo, ExpSumQuery, Frequency};
use powsum::power_sums::{h_faulhaber, h_naive, interpolated_polynomial, PowerSums};

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_len: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(rational(), 0..max_len).prop_map(|c| Polynomial::from_coeffs(Variable::K, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(r in rational()) {
        let s = format_rational(&r);
        prop_assert_eq!(parse_rational(&s).unwrap(), r.clone());
        prop_assert_eq!(s.contains('/'), !r.is_integer());
    }

    #[test]
    fn polynomial_ring_laws(a in poly(6), b in poly(6), c in poly(6), x in rational()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!((&a - &a).degree(), None);
    }

    #[test]
    fn division_with_remainder(a in poly(9), b in poly(5)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
    }

    #[test]
    fn chain_bijection(upper in 2usize..14, seed in any::<u64>()) {
        let lower = (seed % upper as u64) as usize;
        for ch in decreasing_chains(upper, lower).unwrap() {
            let comp = chain_to_composition(&ch);
            prop_assert_eq!(comp.total(), upper - lower);
            prop_assert_eq!(comp.len(), ch.len() + 1);
            prop_assert_eq!(composition_to_chain(&comp, upper, lower).unwrap(), ch);
        }
    }

    #[test]
    fn composition_round_trip(parts in prop::collection::vec(1usize..5, 1..8), lower in 0usize..5) {
        let comp = Composition::new(parts).unwrap();
        let upper = lower + comp.total();
        let chain = composition_to_chain(&comp, upper, lower).unwrap();
        prop_assert_eq!(chain_to_composition(&chain), comp);
    }

    #[test]
    fn gessel_series_matches_enumeration(u in prop::collection::vec(rational(), 12), n in 0usize..12) {
        prop_assert_eq!(
            gessel_coefficient_series(&u, n).unwrap(),
            gessel_coefficient_bruteforce(&u, n).unwrap()
        );
    }

    #[test]
    fn power_sum_telescopes(p in 0u32..20, k in 1u64..200) {
        let d = h_naive(p, k) - h_naive(p, k - 1);
        prop_assert_eq!(d, BigInt::from(k).pow(p));
        prop_assert_eq!(h_faulhaber(p, k).unwrap(), Rational::from_integer(h_naive(p, k)));
    }

    #[test]
    fn odd_recurrence_matches_direct_sum(half in 0u32..10, k in 0u64..100) {
        let p = 2 * half + 1;
        prop_assert_eq!(PowerSums::new().h_recurrence(p, k).unwrap(), h_naive(p, k));
    }

    #[test]
    fn cyclotomic_conjugation(p in 1u32..6, k in 2u64..16, m in 1i64..40) {
        let neg = exp_power_sum_cyclo(&ExpSumQuery::new(p, k, m, Frequency::Negative).unwrap());
        let pos = exp_power_sum_cyclo(&ExpSumQuery::new(p, k, k as i64 - m, Frequency::Positive).unwrap());
        prop_assert_eq!(neg, pos);
    }

    #[test]
    fn root_powers_multiply(k in 2u64..30, a in -60i64..60, b in -60i64..60) {
        let za = cyclo_root_power(k, a).unwrap();
        let zb = cyclo_root_power(k, b).unwrap();
        prop_assert_eq!(&za * &zb, cyclo_root_power(k, a + b).unwrap());
        prop_assert!(cyclo_root_power(k, k as i64 * a).unwrap().is_one());
    }
}

#[test]
fn closed_forms_degree_leading_constant() {
    let mut sums = PowerSums::new();
    for p in 0..=20u32 {
        let h = sums.h_polynomial(p).unwrap();
        assert_eq!(h.degree(), Some(p as usize + 1));
        assert_eq!(h.leading_coefficient(), Some(&rat(1, p as i64 + 1)));
        assert!(h.coefficient(0).is_zero());
        assert_eq!(h, interpolated_polynomial(p));
    }
}

#[test]
fn cyclotomic_degree_and_symmetry() {
    for k in 2..=40u64 {
        let phi = cyclotomic_polynomial(k).unwrap();
        assert_eq!(phi.degree(), Some(totient(k) as usize));
        let c = phi.coeffs();
        let reversed: Vec<Rational> = c.iter().rev().cloned().collect();
        assert_eq!(c, reversed.as_slice(), "Φ_{k} is palindromic");
        let ring = CyclotomicRing::new(k).unwrap();
        let sum = (0..k as i64).fold(ring.zero(), |acc, e| &acc + &ring.root_power(e));
        assert!(sum.is_zero(), "roots of unity sum to zero for k={k}");
    }
}

#[test]
fn binomial_row_sums() {
    for n in 0..40u64 {
        let s: BigInt = (0..=n as i64).map(|r| binomial(n, r)).sum();
        assert_eq!(s, BigInt::one() << n);
    }
}

#[test]
fn characters_orthogonal_and_multiplicative() {
    for k in 1..=40u64 {
        let chars = enumerate_characters(k).unwrap();
        assert_eq!(chars.len() as u64, totient(k));
        for (i, a) in chars.iter().enumerate() {
            for b in &chars[i + 1..] {
                assert_ne!(a.values(), b.values(), "k={k}");
            }
            let total: Complex64 = (1..=k as i64).map(|n| a.value(n)).sum();
            if !a.is_principal() {
                assert!(total.norm() <= 1e-9, "k={k}");
            }
            let mut worst = 0.0f64;
            for x in 1..=k as i64 {
                for y in 1..=k as i64 {
                    worst = worst.max((a.value(x * y) - a.value(x) * a.value(y)).norm());
                }
            }
            assert!(worst <= 1e-10, "k={k}");
        }
    }
}

#[test]
fn s_sum_matches_double_loop() {
    for k in 2..=12u64 {
        for chi in enumerate_characters(k).unwrap() {
            for m in 0..=4u32 {
                let mut direct = Complex64::new(0.0, 0.0);
                for j in 1..=k {
                    for n in 1..=k {
                        let angle = 2.0 * std::f64::consts::PI * (n * j) as f64 / k as f64;
                        direct += chi.value(n as i64) * Complex64::from_polar(1.0, angle) * (j as f64 / k as f64).powi(m as i32);
                    }
                }
                assert!((s_sum(m, &chi) - direct).norm() <= 1e-10, "k={k} m={m}");
            }
        }
    }
}

#[test]
fn l_value_tail_bound_is_honest() {
    use powsum::dirichlet::l_partial_sum;
    for k in [3u64, 4, 5, 7] {
        for chi in enumerate_characters(k).unwrap() {
            if chi.is_principal() {
                continue;
            }
            for r in 1..=3u32 {
                let l = l_value(r, &chi, 1e-4).unwrap();
                let longer = l_partial_sum(r, &chi, 4 * l.truncation_n);
                assert!((longer - l.value).norm() <= l.tail_bound, "k={k} r={r}");
            }
        }
    }
}

#[test]
fn gessel_unit_weights_count_compositions() {
    let ones = vec![Rational::one(); 16];
    for n in 1..=16usize {
        let c = gessel_coefficient_series(&ones, n).unwrap();
        assert_eq!(c, Rational::from_integer(BigInt::one() << (n - 1)));
    }
}
