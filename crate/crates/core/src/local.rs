//! Power series in `X = p^{-s}` attached to a single prime: logarithms,
//! rational reconstruction, the `W_{m,p}` polynomial and root checks.

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{cabs_f64, creal, to_c64, Real};

/// Absolute cap on either degree accepted by [`rational_reconstruct`].
pub const ABSOLUTE_DEGREE_CAP: usize = 8;
/// Reconstruction never looks past `X^32`.
pub const MAX_FIT_DEPTH: usize = 32;
/// Default denominator cap (degree-2 setting).
pub const DEFAULT_DEN_CAP: usize = 2;
/// Relative pivot threshold of the Hankel solve.
pub const HANKEL_SINGULAR: f64 = 1e-10;
/// Relative distance under which two roots count as shared.
pub const ROOT_CLUSTER: f64 = 1e-8;
/// Relative validation tolerance of a rational fit.
pub const FIT_TOLERANCE: f64 = 1e-8;
/// Slack on `|alpha_p|, |beta_p| <= 1`.
pub const RAMANUJAN_SLACK: f64 = 1e-9;
/// Default cap on the empirical theta estimate.
pub const THETA_CAP: f64 = 0.5;

/// `F_p(X) = sum_{k=0}^{K} a(p^k) X^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFactor<T: Real = f64> {
    prime: u64,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> LocalFactor<T> {
    pub fn new(prime: u64, coeffs: Vec<Complex<T>>) -> Self {
        assert!(!coeffs.is_empty(), "local factor needs c_0");
        LocalFactor { prime, coeffs }
    }

    pub fn from_real(prime: u64, coeffs: &[f64]) -> Self {
        Self::new(prime, coeffs.iter().map(|&x| creal(T::from_f64(x))).collect())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `K`, the largest available power of `X`.
    pub fn depth(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_f64(&self) -> LocalFactor<f64> {
        LocalFactor {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|&c| to_c64(c)).collect(),
        }
    }

    /// `1 / F_p` to the same depth.
    pub fn inverse(&self) -> Result<Vec<Complex<T>>> {
        series_inverse(&self.coeffs, self.coeffs.len())
    }
}

/// Product of two power series truncated to `len` terms.
pub fn series_mul<T: Real>(a: &[Complex<T>], b: &[Complex<T>], len: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::zero(); len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `1 / a` as a power series truncated to `len` terms.
pub fn series_inverse<T: Real>(a: &[Complex<T>], len: usize) -> Result<Vec<Complex<T>>> {
    let a0 = a[0];
    if cabs_f64(a0) < crate::series::INVERT_THRESHOLD {
        return Err(Error::NonUnitConstantTerm(format!("{}", to_c64(a0))));
    }
    let inv0 = Complex::<T>::one() / a0;
    let mut b = vec![Complex::zero(); len];
    if len == 0 {
        return Ok(b);
    }
    b[0] = inv0;
    for k in 1..len {
        let mut acc = Complex::<T>::zero();
        for j in 1..=k.min(a.len() - 1) {
            acc += a[j] * b[k - j];
        }
        b[k] = -acc * inv0;
    }
    Ok(b)
}

// ---------------------------------------------------------------------------
// logarithm

/// `log F_p = sum_{k >= 1} b(p^k) X^k` and the empirical theta estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct LogLocalReport<T: Real = f64> {
    pub prime: u64,
    /// `b(p^k)` for `k = 1..=K`, stored at index `k - 1`.
    pub b_coeffs: Vec<Complex<T>>,
    /// `max(0, max_{k >= 2} log|b(p^k)| / (k log p))`.
    pub theta_estimate: f64,
    /// Max deviation of `exp(log F_p)` from `F_p`; zero when built from `b` directly.
    pub roundtrip_error: f64,
}

impl<T: Real> LogLocalReport<T> {
    pub fn from_b_coeffs(prime: u64, b_coeffs: Vec<Complex<T>>) -> Self {
        let theta_estimate = theta_estimate(prime, &b_coeffs);
        LogLocalReport {
            prime,
            b_coeffs,
            theta_estimate,
            roundtrip_error: 0.0,
        }
    }

    /// `exp(sum b_k X^k)` to depth `K`.
    pub fn exp_series(&self) -> Vec<Complex<T>> {
        let depth = self.b_coeffs.len();
        let mut c = vec![Complex::<T>::zero(); depth + 1];
        c[0] = Complex::one();
        for k in 1..=depth {
            let mut acc = Complex::<T>::zero();
            for j in 1..=k {
                acc += self.b_coeffs[j - 1] * c[k - j] * creal(T::from_i128(j as i128));
            }
            c[k] = acc / creal(T::from_i128(k as i128));
        }
        c
    }
}

fn theta_estimate<T: Real>(prime: u64, b: &[Complex<T>]) -> f64 {
    let lp = (prime as f64).ln();
    b.iter()
        .enumerate()
        .skip(1)
        .filter_map(|(i, &bk)| {
            let mag = cabs_f64(bk);
            (mag > 0.0).then(|| mag.ln() / ((i + 1) as f64 * lp))
        })
        .fold(0.0, f64::max)
}

/// Power-series logarithm via `k c_k = sum_{j=1}^{k} j b_j c_{k-j}`.
pub fn log_local<T: Real>(local: &LocalFactor<T>) -> Result<LogLocalReport<T>> {
    let c = local.coeffs();
    if cabs_f64(c[0] - Complex::one()) > 1e-10 {
        return Err(Error::NonUnitConstantTerm(format!("{}", to_c64(c[0]))));
    }
    let depth = local.depth();
    let mut b = vec![Complex::<T>::zero(); depth];
    for k in 1..=depth {
        let mut acc = c[k] * creal(T::from_i128(k as i128));
        for j in 1..k {
            acc -= b[j - 1] * c[k - j] * creal(T::from_i128(j as i128));
        }
        b[k - 1] = acc / creal(T::from_i128(k as i128));
    }
    let mut report = LogLocalReport::from_b_coeffs(local.prime(), b);
    report.roundtrip_error = report
        .exp_series()
        .iter()
        .zip(c)
        .map(|(&x, &y)| cabs_f64(x - y))
        .fold(0.0, f64::max);
    Ok(report)
}

/// `theta_estimate < cap`.
pub fn theta_ok<T: Real>(report: &LogLocalReport<T>, cap: f64) -> bool {
    report.theta_estimate < cap
}

// ---------------------------------------------------------------------------
// rational reconstruction

/// `F_p(X) = N_p(X) / D_p(X)` with `N_p(0) = D_p(0) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalLocalFactor {
    pub prime: u64,
    pub numerator: Vec<Complex64>,
    pub denominator: Vec<Complex64>,
    /// Largest `k` such that `D * F_p = N mod X^{k+1}` was checked.
    pub fit_order: usize,
    pub max_validation_residual: f64,
}

impl RationalLocalFactor {
    pub fn numerator_degree(&self) -> usize {
        self.numerator.len() - 1
    }

    pub fn denominator_degree(&self) -> usize {
        self.denominator.len() - 1
    }

    /// `N_p = 1`, i.e. `F_p^{-1}` is a polynomial.
    pub fn is_polynomial_type(&self) -> bool {
        self.numerator_degree() == 0
    }

    /// Reciprocal roots of `D_p`: `D_p(X) = prod (1 - alpha X)`.
    pub fn denominator_reciprocal_roots(&self) -> Vec<Complex64> {
        poly_roots(&self.denominator)
            .into_iter()
            .map(|r| Complex64::new(1.0, 0.0) / r)
            .collect()
    }
}

/// Finds the minimal pair `(deg N, deg D)` (denominator degree first) with
/// `deg N <= max_num`, `deg D <= max_den` reproducing every available
/// coefficient of `local`.
pub fn rational_reconstruct<T: Real>(
    local: &LocalFactor<T>,
    max_num: usize,
    max_den: usize,
) -> Result<RationalLocalFactor> {
    if max_num > ABSOLUTE_DEGREE_CAP || max_den > ABSOLUTE_DEGREE_CAP {
        return Err(Error::InvalidArgument(format!(
            "degree caps ({max_num}, {max_den}) exceed the absolute cap {ABSOLUTE_DEGREE_CAP}"
        )));
    }
    let need = max_num + max_den + 2;
    if local.depth() < need {
        return Err(Error::TruncationTooShort(format!(
            "local depth {} at p = {} but caps ({max_num}, {max_den}) need {need}",
            local.depth(),
            local.prime()
        )));
    }
    let local = local.to_f64();
    let depth = local.depth().min(MAX_FIT_DEPTH);
    let c = &local.coeffs()[..=depth];
    if (c[0] - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::NonUnitConstantTerm(format!("{}", c[0])));
    }
    let scale = 1.0 + c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = FIT_TOLERANCE * scale;

    for den in 0..=max_den {
        for num in 0..=max_num {
            let Some(denominator) = solve_denominator(c, num, den) else {
                continue;
            };
            let full = series_mul(&denominator, c, depth + 1);
            let numerator: Vec<Complex64> = full[..=num].to_vec();
            let residual = full[num + 1..]
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if residual > tol {
                continue;
            }
            if shares_root(&numerator, &denominator) {
                continue;
            }
            return Ok(RationalLocalFactor {
                prime: local.prime(),
                numerator,
                denominator,
                fit_order: depth,
                max_validation_residual: residual,
            });
        }
    }
    Err(Error::NoRationalFit {
        max_num,
        max_den,
        order: depth,
    })
}

/// Solves `sum_{j=0}^{den} d_j c_{k-j} = 0` for `k = num+1 ..= num+den`,
/// `d_0 = 1`. `None` when the Hankel system is numerically singular.
fn solve_denominator(c: &[Complex64], num: usize, den: usize) -> Option<Vec<Complex64>> {
    let mut d = vec![Complex64::new(1.0, 0.0)];
    if den == 0 {
        return Some(d);
    }
    let coef = |i: isize| -> Complex64 {
        if i < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            c[i as usize]
        }
    };
    let mut a = vec![vec![Complex64::new(0.0, 0.0); den]; den];
    let mut rhs = vec![Complex64::new(0.0, 0.0); den];
    for (row, k) in (num + 1..=num + den).enumerate() {
        for j in 1..=den {
            a[row][j - 1] = coef(k as isize - j as isize);
        }
        rhs[row] = -c[k];
    }
    let x = solve_pivoted(a, rhs)?;
    d.extend(x);
    Some(d)
}

/// Gaussian elimination with complete pivoting.
fn solve_pivoted(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let mut cols: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pr, mut pc, mut best) = (k, k, 0.0);
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, z) in row.iter().enumerate().skip(k) {
                if z.norm() > best {
                    best = z.norm();
                    pr = i;
                    pc = j;
                }
            }
        }
        if best <= HANKEL_SINGULAR * scale {
            return None;
        }
        a.swap(k, pr);
        b.swap(k, pr);
        for row in a.iter_mut() {
            row.swap(k, pc);
        }
        cols.swap(k, pc);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
            let t = b[k];
            b[i] -= f * t;
        }
    }
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in k + 1..n {
            acc -= a[k][j] * y[j];
        }
        y[k] = acc / a[k][k];
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for (k, &col) in cols.iter().enumerate() {
        x[col] = y[k];
    }
    Some(x)
}

fn shares_root(p: &[Complex64], q: &[Complex64]) -> bool {
    let rp = poly_roots(p);
    let rq = poly_roots(q);
    rp.iter().any(|a| {
        rq.iter()
            .any(|b| (a - b).norm() <= ROOT_CLUSTER * a.norm().max(b.norm()).max(1.0))
    })
}

fn trimmed(p: &[Complex64]) -> &[Complex64] {
    let max = p.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut len = p.len();
    while len > 1 && p[len - 1].norm() <= 1e-12 * max {
        len -= 1;
    }
    &p[..len]
}

/// Roots of `sum p_k X^k` (coefficients low to high) by Durand-Kerner
/// iteration; closed forms for degree 1 and 2.
pub fn poly_roots(p: &[Complex64]) -> Vec<Complex64> {
    let p = trimmed(p);
    let deg = p.len() - 1;
    match deg {
        0 => Vec::new(),
        1 => vec![-p[0] / p[1]],
        2 => {
            let (a, b, c) = (p[2], p[1], p[0]);
            let disc = (b * b - a * c * 4.0).sqrt();
            let q = if (b.conj() * disc).re >= 0.0 {
                -(b + disc) * 0.5
            } else {
                -(b - disc) * 0.5
            };
            if q.norm() == 0.0 {
                vec![Complex64::new(0.0, 0.0); 2]
            } else {
                vec![q / a, c / q]
            }
        }
        _ => {
            let lead = p[deg];
            let monic: Vec<Complex64> = p.iter().map(|&z| z / lead).collect();
            let radius = 1.0
                + monic[..deg]
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
            let seed = Complex64::new(0.4, 0.9);
            let mut roots: Vec<Complex64> =
                (0..deg).map(|k| seed.powu(k as u32) * radius * 0.5).collect();
            let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c);
            for _ in 0..1000 {
                let mut delta = 0.0f64;
                for i in 0..deg {
                    let mut denom = Complex64::new(1.0, 0.0);
                    for j in 0..deg {
                        if i != j {
                            denom *= roots[i] - roots[j];
                        }
                    }
                    if denom.norm() == 0.0 {
                        denom = Complex64::new(1e-12, 0.0);
                    }
                    let step = eval(roots[i]) / denom;
                    roots[i] -= step;
                    delta = delta.max(step.norm());
                }
                if delta < 1e-15 * radius {
                    break;
                }
            }
            roots
        }
    }
}

// ---------------------------------------------------------------------------
// W polynomial and divisibility

/// `W_{m,p}(X) = sum_{l=0}^{m-2} a(p^l) X^l + p/(p-1) a(p^{m-1}) X^{m-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WPolynomial<T: Real = f64> {
    pub prime: u64,
    pub m: u32,
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> WPolynomial<T> {
    pub fn to_f64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|&c| to_c64(c)).collect()
    }
}

pub fn w_polynomial<T: Real>(local: &LocalFactor<T>, m: u32) -> Result<WPolynomial<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let m_us = m as usize;
    if local.depth() + 1 < m_us {
        return Err(Error::TruncationTooShort(format!(
            "W_{{{m},{}}} needs a(p^{}) but local depth is {}",
            local.prime(),
            m - 1,
            local.depth()
        )));
    }
    let p = T::from_i128(local.prime() as i128);
    let factor = creal(p / (p - T::one()));
    let mut coeffs: Vec<Complex<T>> = local.coeffs()[..m_us].to_vec();
    coeffs[m_us - 1] *= factor;
    Ok(WPolynomial {
        prime: local.prime(),
        m,
        coeffs,
    })
}

/// Outcome of dividing `W_{m,p}` by a numerator `N_p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Divisibility {
    pub divides: bool,
    pub remainder_norm: f64,
    /// `deg N_p <= m - 1`.
    pub degree_ok: bool,
}

pub fn divides<T: Real>(numerator: &[Complex64], w: &WPolynomial<T>, tol: f64) -> Result<Divisibility> {
    if numerator.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroPolynomial);
    }
    let n = trimmed(numerator);
    let dn = n.len() - 1;
    let mut rem = w.to_f64();
    let degree_ok = dn < w.m as usize;
    if rem.len() > dn {
        let lead = n[dn];
        for i in (0..rem.len() - dn).rev() {
            let q = rem[i + dn] / lead;
            for (j, &nj) in n.iter().enumerate() {
                rem[i + j] -= q * nj;
            }
        }
        rem.truncate(dn);
    }
    let remainder_norm = rem.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(Divisibility {
        divides: remainder_norm <= tol,
        remainder_norm,
        degree_ok,
    })
}

// ---------------------------------------------------------------------------
// reciprocal roots of quadratic denominators

/// Reciprocal roots of a degree-2 denominator with trivial numerator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RamanujanRoots {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub ramanujan_ok: bool,
}

pub fn quadratic_roots_check(r: &RationalLocalFactor) -> Result<RamanujanRoots> {
    let n = trimmed(&r.numerator);
    if n.len() != 1 || (n[0] - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::WrongShape(format!(
            "numerator has degree {}",
            n.len() - 1
        )));
    }
    let d = trimmed(&r.denominator);
    let zero = Complex64::new(0.0, 0.0);
    let (alpha, beta) = match d.len() - 1 {
        0 => (zero, zero),
        1 => (-d[1], zero),
        2 => {
            // alpha, beta are the roots of t^2 + d1 t + d2.
            let roots = poly_roots(&[d[2], d[1], Complex64::new(1.0, 0.0)]);
            let (mut a, mut b) = (roots[0], roots[1]);
            if b.norm() > a.norm() {
                std::mem::swap(&mut a, &mut b);
            }
            (a, b)
        }
        k => {
            return Err(Error::WrongShape(format!("denominator has degree {k}")));
        }
    };
    let bound = 1.0 + RAMANUJAN_SLACK;
    Ok(RamanujanRoots {
        alpha,
        beta,
        ramanujan_ok: alpha.norm() <= bound && beta.norm() <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn zeta2_local(p: u64, depth: usize) -> LocalFactor<f64> {
        let v: Vec<f64> = (0..=depth).map(|k| (k + 1) as f64).collect();
        LocalFactor::from_real(p, &v)
    }

    #[test]
    fn log_of_inverse_square() {
        let report = log_local(&zeta2_local(3, 10)).unwrap();
        for (i, b) in report.b_coeffs.iter().enumerate() {
            let k = (i + 1) as f64;
            assert!((b - c(2.0 / k)).norm() < 1e-14);
        }
        assert_eq!(report.theta_estimate, 0.0);
        assert!(report.roundtrip_error < 1e-13);
        assert!(theta_ok(&report, THETA_CAP));
    }

    #[test]
    fn log_of_one_vanishes() {
        let mut v = vec![0.0; 9];
        v[0] = 1.0;
        let report = log_local(&LocalFactor::<f64>::from_real(2, &v)).unwrap();
        assert!(report.b_coeffs.iter().all(|b| b.norm() == 0.0));
    }

    #[test]
    fn log_rejects_nonunit_constant() {
        let l = LocalFactor::<f64>::from_real(2, &[2.0, 1.0, 1.0]);
        assert!(matches!(log_local(&l), Err(Error::NonUnitConstantTerm(_))));
    }

    #[test]
    fn theta_violation_detected() {
        let p = 3u64;
        let b: Vec<Complex64> = (1..=8).map(|k| c((p as f64).powf(0.6 * k as f64))).collect();
        let report = LogLocalReport::from_b_coeffs(p, b);
        assert!((report.theta_estimate - 0.6).abs() < 1e-12);
        assert!(!theta_ok(&report, THETA_CAP));
    }

    #[test]
    fn reconstructs_inverse_square() {
        let r = rational_reconstruct(&zeta2_local(5, 8), 1, 2).unwrap();
        assert_eq!(r.numerator_degree(), 0);
        assert_eq!(r.denominator_degree(), 2);
        for (got, want) in r.denominator.iter().zip([1.0, -2.0, 1.0]) {
            assert!((got - c(want)).norm() < 1e-12);
        }
        assert!(r.is_polynomial_type());
    }

    #[test]
    fn perturbed_fibonacci_has_no_fit() {
        let mut fib = vec![1.0, 1.0];
        while fib.len() < 11 {
            let n = fib.len();
            fib.push(fib[n - 1] + fib[n - 2]);
        }
        let clean = LocalFactor::<f64>::from_real(2, &fib);
        let r = rational_reconstruct(&clean, 1, 2).unwrap();
        assert_eq!(r.denominator_degree(), 2);
        fib[5] += 0.5;
        let bad = LocalFactor::<f64>::from_real(2, &fib);
        assert!(matches!(
            rational_reconstruct(&bad, 1, 2),
            Err(Error::NoRationalFit { .. })
        ));
    }

    #[test]
    fn reconstruction_needs_slack() {
        assert!(matches!(
            rational_reconstruct(&zeta2_local(2, 4), 1, 2),
            Err(Error::TruncationTooShort(_))
        ));
        assert!(matches!(
            rational_reconstruct(&zeta2_local(2, 40), 9, 2),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn w_polynomial_definition() {
        let l = zeta2_local(3, 8);
        let w1 = w_polynomial(&l, 1).unwrap();
        assert_eq!(w1.coeffs, vec![c(1.5)]);
        let w3 = w_polynomial(&l, 3).unwrap();
        assert_eq!(w3.coeffs, vec![c(1.0), c(2.0), c(4.5)]);
        let delta = LocalFactor::<f64>::from_real(2, &[1.0, 0.0, 0.0]);
        assert_eq!(w_polynomial(&delta, 2).unwrap().coeffs, vec![c(1.0), c(0.0)]);
        let short = LocalFactor::<f64>::from_real(2, &[1.0, 0.0]);
        assert!(matches!(w_polynomial(&short, 4), Err(Error::TruncationTooShort(_))));
    }

    #[test]
    fn divisibility_cases() {
        let w = w_polynomial(&zeta2_local(3, 8), 3).unwrap();
        let unit = divides(&[c(1.0)], &w, 1e-8).unwrap();
        assert!(unit.divides && unit.degree_ok);
        assert_eq!(unit.remainder_norm, 0.0);

        let own = divides(&w.coeffs, &w, 1e-8).unwrap();
        assert!(own.divides && own.degree_ok);

        let w = WPolynomial { prime: 2, m: 2, coeffs: vec![c(1.0), c(1.0)] };
        let d = divides(&[c(1.0), c(-1.0)], &w, 1e-8).unwrap();
        assert!(!d.divides);
        assert!((d.remainder_norm - 2.0).abs() < 1e-15);

        assert_eq!(divides(&[c(0.0)], &w, 1e-8).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn quadratic_roots() {
        let r = rational_reconstruct(&zeta2_local(7, 8), 0, 2).unwrap();
        let roots = quadratic_roots_check(&r).unwrap();
        assert!((roots.alpha - c(1.0)).norm() < 1e-7);
        assert!((roots.beta - c(1.0)).norm() < 1e-7);
        assert!(roots.ramanujan_ok);

        // Degree-1 denominator: 1 - X / sqrt(11).
        let a = 1.0 / 11f64.sqrt();
        let geo: Vec<f64> = (0..8).map(|k| a.powi(k)).collect();
        let r = rational_reconstruct(&LocalFactor::<f64>::from_real(11, &geo), 0, 2).unwrap();
        assert_eq!(r.denominator_degree(), 1);
        let roots = quadratic_roots_check(&r).unwrap();
        assert!((roots.alpha - c(a)).norm() < 1e-12);
        assert_eq!(roots.beta, c(0.0));

        let wrong = RationalLocalFactor {
            prime: 2,
            numerator: vec![c(1.0), c(0.5)],
            denominator: vec![c(1.0)],
            fit_order: 4,
            max_validation_residual: 0.0,
        };
        assert!(matches!(quadratic_roots_check(&wrong), Err(Error::WrongShape(_))));
    }

    #[test]
    fn durand_kerner_matches_planted_roots() {
        let roots = [c(0.5), Complex64::new(-1.0, 2.0), c(3.0), Complex64::new(0.0, -1.5)];
        let mut poly = vec![c(1.0)];
        for r in roots {
            // multiply by (X - r)
            let mut next = vec![c(0.0); poly.len() + 1];
            for (i, &a) in poly.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            poly = next;
        }
        let found = poly_roots(&poly);
        for r in roots {
            assert!(found.iter().any(|f| (f - r).norm() < 1e-10));
        }
    }
}
