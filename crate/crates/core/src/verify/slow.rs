//! Per-index evaluation of both identities straight from their definitions.
//!
//! Nothing here goes through the series arithmetic, the FFT-based additive
//! basis or the power-series helpers, so it serves as an independent
//! reference for the fast pipeline.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::arith::{is_prime, totient};
use crate::characters::{enumerate_characters, DirichletCharacter};
use crate::error::{Error, Result};
use crate::real::{unit_root, Real};
use crate::series::CoeffSeries;

/// `lhs[n - 1]`, `rhs[n - 1]` for `n = 1..=horizon`.
#[derive(Clone, Debug)]
pub struct SlowSides<T: Real> {
    pub lhs: Vec<Complex<T>>,
    pub rhs: Vec<Complex<T>>,
    pub horizon: usize,
}

/// `c(chi, q) = phi(q)^{-1} sum_{n <= q, (n, q) = 1} e(-n/q) conj(chi(n))`.
fn direct_coefficient<T: Real>(chi: &DirichletCharacter<T>) -> Complex<T> {
    let q = chi.modulus();
    let mut acc = Complex::<T>::zero();
    for n in 1..=q {
        let v = chi.value(n);
        if !v.is_zero() {
            acc += unit_root::<T>(-(n as i128), q) * v.conj();
        }
    }
    acc / T::from_i128(totient(q) as i128)
}

/// `a(p^k)` for `p^k <= N`.
fn local_coeffs<T: Real>(a: &CoeffSeries<T>, p: u64) -> Vec<Complex<T>> {
    let mut out = Vec::new();
    let mut q = 1usize;
    while q <= a.len() {
        out.push(a.coeff(q));
        q = match q.checked_mul(p as usize) {
            Some(next) => next,
            None => break,
        };
    }
    out
}

/// Power-series reciprocal by the schoolbook recursion.
fn naive_reciprocal<T: Real>(c: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if c[0].is_zero() {
        return Err(Error::NonUnitConstantTerm("a(1) = 0".into()));
    }
    let mut v: Vec<Complex<T>> = Vec::with_capacity(c.len());
    for k in 0..c.len() {
        let mut s: Complex<T> = if k == 0 { Complex::one() } else { Complex::zero() };
        for j in 1..=k {
            s -= c[j] * v[k - j];
        }
        v.push(s / c[0]);
    }
    Ok(v)
}

/// `(v, p^j) -> sum_{j: p^j | n} v_j a(n / p^j)`.
fn p_power_convolution<T: Real>(a: &CoeffSeries<T>, p: u64, v: &[Complex<T>], n: usize) -> Complex<T> {
    let mut acc = Complex::zero();
    let mut d = 1usize;
    let mut j = 0;
    while n.is_multiple_of(d) && j < v.len() {
        acc += v[j] * a.coeff(n / d);
        j += 1;
        d *= p as usize;
    }
    acc
}

pub fn slow_lemma2<T: Real>(a: &CoeffSeries<T>, p: u64, m: u32) -> Result<SlowSides<T>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let pu = p as usize;
    let n_max = a.len();
    let pm1 = pu.pow(m - 1);
    if pm1 > n_max {
        return Err(Error::TruncationTooShort(format!("{p}^{} > {n_max}", m - 1)));
    }
    let pm = p.pow(m);
    let horizon = n_max / pm1;
    let local = local_coeffs(a, p);

    // Nonprincipal characters and their coefficients, one list per layer.
    let mut layers = Vec::new();
    for l in 0..m {
        let chars = enumerate_characters::<T>(p, m - l)?;
        let list: Vec<(DirichletCharacter<T>, Complex<T>)> = chars
            .into_iter()
            .filter(|chi| !chi.is_principal())
            .map(|chi| {
                let c = direct_coefficient(&chi);
                (chi, c)
            })
            .collect();
        layers.push(list);
    }

    let pt = T::from_i128(p as i128);
    let mut w: Vec<Complex<T>> = local[..m as usize].to_vec();
    let last = m as usize - 1;
    w[last] *= pt / (pt - T::one());
    let v = naive_reciprocal(&local)?;
    let u: Vec<Complex<T>> = (0..local.len())
        .map(|k| {
            (0..=k.min(last)).fold(Complex::zero(), |s, j| s + w[j] * v[k - j])
        })
        .collect();

    let mut lhs = Vec::with_capacity(horizon);
    let mut rhs = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let an = a.coeff(n);
        lhs.push(an * unit_root::<T>(-((n as u64 % pm) as i128), pm));
        let mut r = Complex::<T>::zero();
        let mut d = 1usize;
        for (l, layer) in layers.iter().enumerate() {
            if n % d != 0 {
                break;
            }
            let k = n / d;
            if !k.is_multiple_of(pu) {
                let s = layer
                    .iter()
                    .fold(Complex::<T>::zero(), |s, (chi, c)| s + *c * chi.value(k as u64));
                r += local[l] * s * a.coeff(k);
            }
            d *= pu;
        }
        r += an - p_power_convolution(a, p, &u, n);
        rhs.push(r);
    }
    Ok(SlowSides { lhs, rhs, horizon })
}

pub fn slow_orthogonality<T: Real>(a: &CoeffSeries<T>, p: u64) -> Result<SlowSides<T>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let v = naive_reciprocal(&local_coeffs(a, p))?;
    let pt = T::from_i128(p as i128);
    let horizon = a.len();
    let mut lhs = Vec::with_capacity(horizon);
    let mut rhs = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let an = a.coeff(n);
        let mut s = Complex::<T>::zero();
        for r in 1..p {
            s += an * unit_root::<T>(-((r as u128 * n as u128 % p as u128) as i128), p);
        }
        lhs.push(s);
        rhs.push(an * (pt - T::one()) - p_power_convolution(a, p, &v, n) * pt);
    }
    Ok(SlowSides { lhs, rhs, horizon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::gen_zeta_squared;
    use crate::verify::{lemma2_sides, max_residual, orthogonality_sides};

    #[test]
    fn slow_matches_fast_on_zeta_squared() {
        let z = gen_zeta_squared::<f64>(600).unwrap().coeffs;
        for (p, m) in [(2, 1), (3, 2), (5, 2), (2, 3)] {
            let fast = lemma2_sides(&z, p, m).unwrap();
            let slow = slow_lemma2(&z, p, m).unwrap();
            assert_eq!(fast.horizon, slow.horizon);
            let (dl, _) = max_residual(&fast.lhs.coeffs()[..slow.horizon], &slow.lhs, slow.horizon);
            let (dr, _) = max_residual(&fast.rhs.coeffs()[..slow.horizon], &slow.rhs, slow.horizon);
            assert!(dl < 1e-12 && dr < 1e-11, "p={p} m={m}: {dl} {dr}");
            let (res, _) = max_residual(&slow.lhs, &slow.rhs, slow.horizon);
            assert!(res < 1e-10, "slow identity residual {res}");
        }
        let fast = orthogonality_sides(&z, 7).unwrap();
        let slow = slow_orthogonality(&z, 7).unwrap();
        let (d, _) = max_residual(fast.rhs.coeffs(), &slow.rhs, 600);
        assert!(d < 1e-12);
    }
}
