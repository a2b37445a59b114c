use std::f64::consts::PI;

use num_complex::{Complex, Complex64};

use super::{LFunctionData, LocalModel};
use crate::error::{Error, Result};
use crate::invariants::GammaFactor;
use crate::real::Real;
use crate::series::CoeffSeries;

fn require_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation N must be at least 1".into()));
    }
    Ok(())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn divisor_sums(n: usize, weight: impl Fn(usize) -> i64) -> Vec<i64> {
    let mut out = vec![0i64; n];
    for d in 1..=n {
        let w = weight(d);
        if w == 0 {
            continue;
        }
        for m in (d..=n).step_by(d) {
            out[m - 1] += w;
        }
    }
    out
}

/// `zeta(s)^2`: `a(n)` is the number of divisors of `n`.
pub fn gen_zeta_squared<T: Real>(n: usize) -> Result<LFunctionData<T>> {
    require_len(n)?;
    let d = divisor_sums(n, |_| 1);
    let coeffs = d
        .into_iter()
        .map(|v| Complex::new(T::from_i128(v as i128), T::zero()))
        .collect();
    Ok(LFunctionData {
        label: "zeta^2".into(),
        coeffs: CoeffSeries::new(coeffs)?,
        gamma: Some(GammaFactor {
            q: 1.0 / PI,
            factors: vec![(0.5, c(0.0, 0.0)), (0.5, c(0.0, 0.0))],
            omega: c(1.0, 0.0),
            pole_order: 2,
        }),
        claimed_conductor: Some(1),
        normalization_note: "analytic; a(n) = d(n)".into(),
        local_model: Some(LocalModel::Hecke2 { level: 1 }),
    })
}

fn chi4(n: usize) -> i64 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Two gamma factors describing `zeta(s) L(s, chi_4)`: the product of the two
/// degree-one factors, and the single `Gamma(s)` obtained by duplication.
pub fn zeta_chi4_gamma_forms() -> (GammaFactor, GammaFactor) {
    let split = GammaFactor {
        q: 2.0 / PI,
        factors: vec![(0.5, c(0.0, 0.0)), (0.5, c(0.5, 0.0))],
        omega: c(1.0, 0.0),
        pole_order: 1,
    };
    let merged = GammaFactor {
        q: 1.0 / PI,
        factors: vec![(1.0, c(0.0, 0.0))],
        omega: c(1.0, 0.0),
        pole_order: 1,
    };
    (split, merged)
}

/// `zeta(s) L(s, chi_4)`: `a(n) = sum_{d | n} chi_4(d)`.
pub fn gen_zeta_chi4<T: Real>(n: usize) -> Result<LFunctionData<T>> {
    require_len(n)?;
    let coeffs = divisor_sums(n, chi4)
        .into_iter()
        .map(|v| Complex::new(T::from_i128(v as i128), T::zero()))
        .collect();
    Ok(LFunctionData {
        label: "zeta*L(chi_4)".into(),
        coeffs: CoeffSeries::new(coeffs)?,
        gamma: Some(zeta_chi4_gamma_forms().0),
        claimed_conductor: Some(4),
        normalization_note: "analytic; a(n) = sum_{d|n} chi_4(d)".into(),
        local_model: None,
    })
}

/// `tau(1..=n)` from `q prod (1 - q^k)^24 = q (sum_m (-1)^m (2m+1) q^{m(m+1)/2})^8`.
pub fn ramanujan_tau(n: usize) -> Result<Vec<i128>> {
    require_len(n)?;
    // Sparse cube of the eta product, degrees 0..n-1.
    let mut cube: Vec<(usize, i128)> = Vec::new();
    let mut m = 0usize;
    while m * (m + 1) / 2 < n {
        let sign = if m.is_multiple_of(2) { 1 } else { -1 };
        cube.push((m * (m + 1) / 2, sign * (2 * m as i128 + 1)));
        m += 1;
    }
    let overflow = || Error::InvalidArgument(format!("tau overflows i128 at N = {n}"));
    let mut acc = vec![0i128; n];
    for &(d, v) in &cube {
        acc[d] = v;
    }
    for _ in 1..8 {
        let mut next = vec![0i128; n];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(d, v) in &cube {
                if i + d >= n {
                    break;
                }
                let term = a.checked_mul(v).ok_or_else(overflow)?;
                next[i + d] = next[i + d].checked_add(term).ok_or_else(overflow)?;
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// The discriminant modular form: `a(n) = tau(n) / n^{11/2}`.
pub fn gen_delta<T: Real>(n: usize) -> Result<LFunctionData<T>> {
    let tau = ramanujan_tau(n)?;
    let coeffs = tau
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let k = T::from_i128(i as i128 + 1);
            let scale = k * k * k * k * k * k.sqrt();
            Complex::new(T::from_i128(t) / scale, T::zero())
        })
        .collect();
    Ok(LFunctionData {
        label: "delta".into(),
        coeffs: CoeffSeries::new(coeffs)?,
        gamma: Some(GammaFactor {
            q: 1.0 / (2.0 * PI),
            factors: vec![(1.0, c(5.5, 0.0))],
            omega: c(1.0, 0.0),
            pole_order: 0,
        }),
        claimed_conductor: Some(1),
        normalization_note: "analytic; a(n) = tau(n) / n^(11/2)".into(),
        local_model: Some(LocalModel::Hecke2 { level: 1 }),
    })
}
