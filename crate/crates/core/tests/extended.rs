use twistprod_core::catalog::{gen_delta, gen_elliptic, gen_zeta_squared, EllipticCurve};
use twistprod_core::verify::{check_lemma2, check_orthogonality, CheckConfig};
use twistprod_core::{DoubleDouble, PrecisionMode, Real};

#[test]
fn identities_hold_in_extended_precision() {
    assert_eq!(DoubleDouble::MODE, PrecisionMode::Extended);
    let cfg = CheckConfig::default();
    let catalog = [
        gen_zeta_squared::<DoubleDouble>(3000).unwrap(),
        gen_delta::<DoubleDouble>(3000).unwrap(),
        gen_elliptic::<DoubleDouble>(&EllipticCurve::e11a1(), 3000).unwrap(),
    ];
    for data in &catalog {
        for p in [2u64, 3, 7] {
            for m in 1..=2 {
                let r = check_lemma2(data, p, m, &cfg).unwrap();
                assert!(r.tolerance < 1e-20, "{}", r.tolerance);
                assert!(r.verdict.is_pass(), "{} p={p} m={m}: {:.3e}", data.label, r.max_residual);
            }
            let r = check_orthogonality(data, p, &cfg).unwrap();
            assert!(r.verdict.is_pass(), "{} p={p}: {:.3e}", data.label, r.max_residual);
        }
    }
}

#[test]
fn double_precision_misses_extended_tolerance() {
    // The same data rounded to f64 cannot meet the extended tolerance.
    let data = gen_delta::<f64>(3000).unwrap().cast::<DoubleDouble>();
    let r = check_lemma2(&data, 2, 2, &CheckConfig::default()).unwrap();
    assert!(!r.verdict.is_pass());
    assert!(r.max_residual < 1e-12);
}
