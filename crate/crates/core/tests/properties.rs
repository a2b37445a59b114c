use num_complex::Complex64;
use proptest::prelude::*;

use twistprod_core::arith::{primes_up_to, totient};
use twistprod_core::catalog::{gen_delta, gen_elliptic, gen_zeta_squared, EllipticCurve};
use twistprod_core::characters::{
    additive_basis, enumerate_characters, linear_twist, primitive_inducer, twist,
};
use twistprod_core::invariants::{mult_order, GammaFactor};
use twistprod_core::local::{log_local, rational_reconstruct};
use twistprod_core::verify::{
    check_lemma2, check_orthogonality, local_term_via_lemma2, local_term_via_orthogonality,
    max_residual, CheckConfig, Verdict,
};
use twistprod_core::CoeffSeries;

const TOL: f64 = 1e-10;

fn complex_unit() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2)
}

fn series(len: std::ops::Range<usize>) -> impl Strategy<Value = CoeffSeries<f64>> {
    prop::collection::vec(complex_unit(), len).prop_map(|mut v| {
        v[0] = Complex64::new(1.0, 0.0);
        CoeffSeries::new(v).unwrap()
    })
}

fn prime_power() -> impl Strategy<Value = (u64, u32)> {
    prop::sample::select(vec![
        (2u64, 1u32),
        (2, 2),
        (2, 3),
        (2, 5),
        (3, 1),
        (3, 2),
        (3, 4),
        (5, 1),
        (5, 3),
        (7, 2),
        (11, 1),
        (13, 2),
        (97, 1),
    ])
}

fn diff(a: &CoeffSeries<f64>, b: &CoeffSeries<f64>) -> f64 {
    max_residual(a.coeffs(), b.coeffs(), a.len().min(b.len())).0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_commutes_and_associates(a in series(1..120), b in series(1..120), c in series(1..120)) {
        prop_assert!(diff(&a.convolve(&b), &b.convolve(&a)) <= TOL);
        let left = a.convolve(&b).convolve(&c);
        let right = a.convolve(&b.convolve(&c));
        prop_assert!(diff(&left, &right) <= TOL);
    }

    #[test]
    fn inverse_is_two_sided(a in series(1..150)) {
        let inv = a.invert().unwrap();
        let delta = CoeffSeries::<f64>::delta(a.len());
        prop_assert!(diff(&a.convolve(&inv), &delta) <= 1e-8);
        prop_assert!(diff(&inv.convolve(&a), &delta) <= 1e-8);
    }

    #[test]
    fn shifts_compose(a in series(1..300), p in prop::sample::select(vec![2u64, 3, 5, 7]), l1 in 0u32..4, l2 in 0u32..4) {
        let twice = a.shift_by_prime_power(p, l1).shift_by_prime_power(p, l2);
        prop_assert_eq!(twice, a.shift_by_prime_power(p, l1 + l2));
    }

    #[test]
    fn shift_moves_local_series_one_slot(a in series(30..300), p in prop::sample::select(vec![2u64, 3, 5])) {
        let shifted = a.shift_by_prime_power(p, 1);
        let local = a.extract_local(p).unwrap();
        let moved = shifted.extract_local(p).unwrap();
        prop_assert_eq!(moved.coeffs()[0], Complex64::new(0.0, 0.0));
        for k in 1..moved.coeffs().len() {
            prop_assert_eq!(moved.coeffs()[k], local.coeffs()[k - 1]);
        }
    }

    #[test]
    fn characters_are_orthonormal((p, r) in prime_power(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let chars = enumerate_characters::<f64>(p, r).unwrap();
        let (a, b) = (&chars[i.index(chars.len())], &chars[j.index(chars.len())]);
        let q = p.pow(r);
        let s: Complex64 = (1..=q).map(|n| a.value(n) * b.value(n).conj()).sum();
        let expect = if a == b { 1.0 } else { 0.0 };
        prop_assert!((s / totient(q) as f64 - Complex64::new(expect, 0.0)).norm() <= TOL);
    }

    #[test]
    fn twist_by_conjugate_undoes_twist(a in series(1..200), (p, r) in prime_power(), i in any::<prop::sample::Index>()) {
        let chars = enumerate_characters::<f64>(p, r).unwrap();
        let chi = &chars[i.index(chars.len())];
        let back = twist(&twist(&a, chi), &chi.conj());
        for n in (1..=a.len()).filter(|n| !(*n as u64).is_multiple_of(p)) {
            prop_assert!((back.coeff(n) - a.coeff(n)).norm() <= 1e-14);
        }
    }

    #[test]
    fn linear_twist_decomposes_into_characters(a in series(1..200), (p, r) in prime_power()) {
        // Restrict to p-free support.
        let a = a.pointwise(|n| if (n as u64).is_multiple_of(p) { Complex64::new(0.0, 0.0) } else { Complex64::new(1.0, 0.0) });
        let basis = additive_basis::<f64>(p, r).unwrap();
        let mut acc = a.scale(Complex64::new(0.0, 0.0));
        for (chi, c) in basis.iter() {
            acc.add_scaled(c, &twist(&a, chi));
        }
        let lin = linear_twist(&a, 1, p.pow(r)).unwrap();
        prop_assert!(diff(&acc, &lin) <= TOL);
    }

    #[test]
    fn primitive_inducer_agrees((p, r) in prime_power(), i in any::<prop::sample::Index>()) {
        let chars = enumerate_characters::<f64>(p, r).unwrap();
        let chi = &chars[i.index(chars.len())];
        let star = primitive_inducer(chi);
        prop_assert_eq!(star.modulus(), chi.conductor());
        for n in (1..=p.pow(r)).filter(|n| n % p != 0) {
            prop_assert!((star.value(n) - chi.value(n)).norm() <= 1e-12);
        }
    }

    #[test]
    fn conductor_is_permutation_invariant(
        factors in prop::collection::vec((0.1..3.0f64, 0.0..2.0f64, -2.0..2.0f64), 0..5),
        q in 0.05..3.0f64,
        seed in any::<u64>(),
    ) {
        let list: Vec<(f64, Complex64)> = factors.iter().map(|&(l, re, im)| (l, Complex64::new(re, im))).collect();
        let mut shuffled = list.clone();
        let len = shuffled.len();
        if len > 1 {
            shuffled.rotate_left((seed as usize) % len);
            shuffled.swap(0, len - 1);
        }
        let omega = Complex64::new(1.0, 0.0);
        let a = GammaFactor::new(q, list, omega, 0).unwrap().invariants();
        let b = GammaFactor::new(q, shuffled, omega, 0).unwrap().invariants();
        prop_assert!((a.conductor - b.conductor).abs() <= 1e-10 * a.conductor.max(1.0));
        prop_assert!((a.degree - b.degree).abs() <= 1e-12);
        prop_assert!((a.xi - (b.xi)).norm() <= 1e-12);
        prop_assert!((a.xi.im - a.degree * a.theta).abs() <= 1e-12);
        prop_assert!((a.omega_star.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mult_order_divides_totient(p in prop::sample::select(primes_up_to(200)), q in 1u64..500) {
        prop_assume!(q % p != 0);
        let m = mult_order(p, q).unwrap();
        prop_assert_eq!(totient(q) % m, 0);
    }

    /// Any series that splits at p satisfies both identities there.
    #[test]
    fn split_series_satisfy_identities(
        base in series(300..600),
        local in prop::collection::vec(complex_unit(), 10),
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        m in 1u32..=2,
    ) {
        let mut local = local;
        local[0] = Complex64::new(1.0, 0.0);
        let split = base.with_local_factor(p, &local);
        prop_assert!(split.split_check(p).holds);
        let data = gen_zeta_squared::<f64>(1).unwrap().map_coeffs(split.clone());
        let cfg = CheckConfig::default();
        let r = check_lemma2(&data, p, m, &cfg).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Pass, "{:?}", r);
        prop_assert_eq!(check_orthogonality(&data, p, &cfg).unwrap().verdict, Verdict::Pass);
        let via_l2 = local_term_via_lemma2(&split, p).unwrap();
        let via_orth = local_term_via_orthogonality(&split, p).unwrap();
        prop_assert!(diff(&via_l2, &via_orth) <= TOL);
    }

    /// A bump at an index whose p-multiple is still compared breaks the identity.
    #[test]
    fn single_coefficient_faults_are_detected(
        base in series(400..600),
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        m in 1u32..=2,
        pick in any::<prop::sample::Index>(),
        size in 1e-3..1e-1f64,
    ) {
        let local: Vec<Complex64> = (0..10).map(|k| Complex64::new(0.5f64.powi(k), 0.0)).collect();
        let split = base.with_local_factor(p, &local);
        let horizon = split.len() / p.pow(m - 1) as usize;
        let candidates: Vec<usize> = (2..=horizon / p as usize).filter(|n| !(*n as u64).is_multiple_of(p)).collect();
        let n0 = candidates[pick.index(candidates.len())];
        let bumped = split.coeff(n0) * (1.0 + size) + Complex64::new(size, 0.0);
        let data = gen_zeta_squared::<f64>(1).unwrap().map_coeffs(split.with_coeff(n0, bumped));
        let r = check_lemma2(&data, p, m, &CheckConfig::default()).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Fail);
    }
}

#[test]
fn catalog_series_split_everywhere() {
    let catalog = [
        gen_zeta_squared::<f64>(3000).unwrap(),
        gen_delta::<f64>(3000).unwrap(),
        gen_elliptic::<f64>(&EllipticCurve::e11a1(), 3000).unwrap(),
    ];
    for data in &catalog {
        for p in primes_up_to(50) {
            let r = data.coeffs.split_check_with_tol(p, 1e-12);
            assert!(r.holds, "{} p={p}: {:.2e} at {}", data.label, r.worst_deviation, r.worst_index);
        }
    }
}

#[test]
fn delta_follows_hecke_recursion() {
    let d = gen_delta::<f64>(3000).unwrap();
    for p in [2usize, 3, 5, 7] {
        let ap = d.coeffs.coeff(p);
        let mut prev = Complex64::new(1.0, 0.0);
        let mut cur = ap;
        let mut pk = p;
        for _ in 1..4 {
            if pk * p > 3000 {
                break;
            }
            let next = ap * cur - prev;
            assert!((d.coeffs.coeff(pk * p) - next).norm() <= 1e-12, "p={p}");
            prev = cur;
            cur = next;
            pk *= p;
        }
    }
    let e = gen_elliptic::<f64>(&EllipticCurve::e11a1(), 3000).unwrap();
    for p in primes_up_to(3000) {
        assert!(d.coeffs.coeff(p as usize).norm() <= 2.0 + 1e-12);
        if p != 11 {
            assert!(e.coeffs.coeff(p as usize).norm() <= 2.0 + 1e-12);
        }
    }
}

#[test]
fn catalog_local_factors_log_roundtrip_and_root_bounds() {
    let catalog = [
        (gen_zeta_squared::<f64>(2000).unwrap(), 1u64),
        (gen_delta::<f64>(2000).unwrap(), 1),
        (gen_elliptic::<f64>(&EllipticCurve::e11a1(), 2000).unwrap(), 11),
    ];
    for (data, q) in &catalog {
        for p in primes_up_to(100) {
            let local = data.local_factor(p, 8).unwrap();
            let log = log_local(&local).unwrap();
            let exp = log.exp_series();
            for (a, b) in exp.iter().zip(local.coeffs()) {
                assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()), "{} p={p}", data.label);
            }
            if q % p == 0 {
                continue;
            }
            let fit = rational_reconstruct(&local, 0, 2).unwrap();
            for alpha in fit.denominator_reciprocal_roots() {
                assert!(alpha.norm() <= (p as f64).sqrt(), "{} p={p}", data.label);
            }
        }
    }
}
