//! Truncated ordinary Dirichlet series `sum_{n <= N} a(n) n^{-s}`.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::ilog;
use crate::error::{Error, Result};
use crate::local::LocalFactor;
use crate::real::{cabs_f64, to_c64, PrecisionMode, Real};

/// Threshold on `|a(1)|` below which [`CoeffSeries::invert`] refuses to run.
pub const INVERT_THRESHOLD: f64 = 1e-8;

/// Default truncation used by generators and the CLI.
pub const DEFAULT_TRUNCATION: usize = 10_000;

/// Coefficients `a(1), ..., a(N)` of a truncated Dirichlet series.
///
/// `horizon` is the largest index whose coefficient is trusted; it starts at
/// `N` and only shrinks when series of different horizons are combined.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffSeries<T: Real = f64> {
    coeffs: Vec<Complex<T>>,
    horizon: usize,
}

/// Outcome of the splitting test `a(p^l k) = a(p^l) a(k)`, `p` not dividing `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitReport {
    pub prime: u64,
    pub holds: bool,
    pub worst_index: usize,
    pub worst_deviation: f64,
    pub tolerance: f64,
}

/// Truncated partial sum together with a crude bound on the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex<f64>,
    pub tail_bound: f64,
}

/// Result of the diagnostic `|a(n)| <= C n^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthDiagnostic {
    pub constant: f64,
    pub exponent: f64,
    pub worst_index: usize,
    pub worst_ratio: f64,
    pub holds: bool,
}

impl<T: Real> CoeffSeries<T> {
    /// Builds a series from user data. Rejects empty, non-finite and
    /// identically vanishing input.
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(i) = coeffs
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFiniteCoefficient(i + 1));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::VanishingSeries);
        }
        Ok(Self::from_vec(coeffs))
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> Complex<T>) -> Result<Self> {
        Self::new((1..=len).map(&mut f).collect())
    }

    /// Unchecked constructor for results of arithmetic, which may vanish.
    pub(crate) fn from_vec(coeffs: Vec<Complex<T>>) -> Self {
        let horizon = coeffs.len();
        CoeffSeries { coeffs, horizon }
    }

    pub(crate) fn zeros(len: usize) -> Self {
        Self::from_vec(vec![Complex::zero(); len])
    }

    /// The identity element `1^{-s}`.
    pub fn delta(len: usize) -> Self {
        let mut s = Self::zeros(len.max(1));
        s.coeffs[0] = Complex::one();
        s
    }

    /// `zeta(s)` truncated: every coefficient 1.
    pub fn ones(len: usize) -> Self {
        Self::from_vec(vec![Complex::one(); len.max(1)])
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Truncation `N`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn precision_mode(&self) -> PrecisionMode {
        T::MODE
    }

    /// `a(n)`, zero beyond the truncation. Panics on `n = 0`.
    pub fn coeff(&self, n: usize) -> Complex<T> {
        assert!(n >= 1, "Dirichlet coefficients are indexed from 1");
        self.coeffs.get(n - 1).copied().unwrap_or_else(Complex::zero)
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = self.horizon.min(horizon).max(1);
        self
    }

    /// Copy with `a(n)` replaced.
    pub fn with_coeff(&self, n: usize, value: Complex<T>) -> Self {
        let mut out = self.clone();
        if n >= 1 && n <= out.coeffs.len() {
            out.coeffs[n - 1] = value;
        }
        out
    }

    /// Copy truncated to the first `len` coefficients.
    pub fn truncated(&self, len: usize) -> Self {
        let len = len.clamp(1, self.len());
        CoeffSeries {
            coeffs: self.coeffs[..len].to_vec(),
            horizon: self.horizon.min(len),
        }
    }

    pub fn to_f64(&self) -> CoeffSeries<f64> {
        CoeffSeries {
            coeffs: self.coeffs.iter().map(|&c| to_c64(c)).collect(),
            horizon: self.horizon,
        }
    }

    /// `max_{n <= upto} |a(n)|`.
    pub fn max_abs(&self, upto: usize) -> f64 {
        self.coeffs
            .iter()
            .take(upto)
            .map(|&c| cabs_f64(c))
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        let len = self.len().min(other.len());
        CoeffSeries {
            coeffs: (0..len).map(|i| f(self.coeffs[i], other.coeffs[i])).collect(),
            horizon: self.horizon.min(other.horizon).min(len),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        CoeffSeries {
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
            horizon: self.horizon,
        }
    }

    /// `self += factor * other` over the common truncation.
    pub fn add_scaled(&mut self, factor: Complex<T>, other: &Self) {
        let len = self.len().min(other.len());
        self.coeffs.truncate(len);
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
        self.horizon = self.horizon.min(other.horizon).min(len);
    }

    /// Coefficientwise product `a(n) w(n)`.
    pub fn pointwise(&self, mut weight: impl FnMut(usize) -> Complex<T>) -> Self {
        CoeffSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if c.is_zero() { c } else { c * weight(i + 1) })
                .collect(),
            horizon: self.horizon,
        }
    }

    /// Dirichlet product, truncated to the shorter input.
    ///
    /// Runs in `O(N log N)`; the outer loop only visits nonzero coefficients
    /// of the sparser operand, so products with prime-power supported series
    /// cost `O(N)`.
    pub fn convolve(&self, other: &Self) -> Self {
        let len = self.len().min(other.len());
        let nnz = |s: &Self| s.coeffs[..len].iter().filter(|c| !c.is_zero()).count();
        let (outer, inner) = if nnz(self) <= nnz(other) {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![Complex::zero(); len];
        for d in 1..=len {
            let ad = outer.coeffs[d - 1];
            if ad.is_zero() {
                continue;
            }
            let mut n = d;
            let mut k = 0;
            while n <= len {
                out[n - 1] += ad * inner.coeffs[k];
                n += d;
                k += 1;
            }
        }
        CoeffSeries {
            coeffs: out,
            horizon: self.horizon.min(other.horizon).min(len),
        }
    }

    /// Dirichlet inverse with the default leading-coefficient threshold.
    pub fn invert(&self) -> Result<Self> {
        self.invert_with_threshold(INVERT_THRESHOLD)
    }

    pub fn invert_with_threshold(&self, threshold: f64) -> Result<Self> {
        let a1 = self.coeffs[0];
        let magnitude = cabs_f64(a1);
        if !(magnitude >= threshold) {
            return Err(Error::NonUnitLeadingCoeff {
                magnitude,
                threshold,
            });
        }
        let len = self.len();
        let inv_a1 = Complex::<T>::one() / a1;
        let mut acc = vec![Complex::<T>::zero(); len];
        let mut b = vec![Complex::<T>::zero(); len];
        for d in 1..=len {
            let bd = if d == 1 { inv_a1 } else { -acc[d - 1] * inv_a1 };
            b[d - 1] = bd;
            if bd.is_zero() {
                continue;
            }
            let mut k = 2;
            while d * k <= len {
                acc[d * k - 1] += bd * self.coeffs[k - 1];
                k += 1;
            }
        }
        Ok(CoeffSeries {
            coeffs: b,
            horizon: self.horizon,
        })
    }

    /// Multiplication by `p^{-l s}`: `a(n / p^l)` when `p^l | n`, else 0.
    pub fn shift_by_prime_power(&self, p: u64, l: u32) -> Self {
        if l == 0 {
            return self.clone();
        }
        let len = self.len();
        let mut out = vec![Complex::zero(); len];
        if let Some(step) = p.checked_pow(l) {
            let step = step as usize;
            let mut n = step;
            let mut k = 0;
            while n <= len {
                out[n - 1] = self.coeffs[k];
                n += step;
                k += 1;
            }
        }
        CoeffSeries {
            coeffs: out,
            horizon: self.horizon,
        }
    }

    /// Partial sum at `Re(s) > 1` with tail bound
    /// `max |a(n)| * N^{1 - sigma} / (sigma - 1)`. Evaluated in `f64`.
    pub fn evaluate(&self, s: Complex<f64>) -> Result<Evaluation> {
        let sigma = s.re;
        if !(sigma > 1.0) {
            return Err(Error::DomainError(sigma));
        }
        let mut value = Complex::new(0.0, 0.0);
        // Sum from the tail inwards to limit cancellation error.
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let n = (i + 1) as f64;
            value += to_c64(c) * (-s * n.ln()).exp();
        }
        let len = self.len() as f64;
        let tail_bound = self.max_abs(self.len()) * len.powf(1.0 - sigma) / (sigma - 1.0);
        Ok(Evaluation { value, tail_bound })
    }

    /// All available `a(p^k)` with `p^k <= N`, `k >= 0`.
    pub fn prime_power_coeffs(&self, p: u64) -> Vec<Complex<T>> {
        let depth = ilog(p, self.len() as u64);
        let mut out = Vec::with_capacity(depth as usize + 1);
        let mut q = 1u64;
        for _ in 0..=depth {
            out.push(self.coeff(q as usize));
            q = q.saturating_mul(p);
        }
        out
    }

    /// Local series `F_p = sum_k a(p^k) X^k` with `X = p^{-s}`.
    pub fn extract_local(&self, p: u64) -> Result<LocalFactor<T>> {
        let depth = ilog(p, self.len() as u64);
        if depth < 2 {
            return Err(Error::TruncationTooShort(format!(
                "only {} power(s) of {p} below N = {}",
                depth,
                self.len()
            )));
        }
        Ok(LocalFactor::new(p, self.prime_power_coeffs(p)))
    }

    /// Splitting test at `p` with the default tolerance
    /// `factor * (1 + max |a(n)|)`.
    pub fn split_check(&self, p: u64) -> SplitReport {
        let tol = T::MODE.identity_factor() * (1.0 + self.max_abs(self.len()));
        self.split_check_with_tol(p, tol)
    }

    pub fn split_check_with_tol(&self, p: u64, tolerance: f64) -> SplitReport {
        let len = self.len();
        let mut worst_index = 1;
        let mut worst_deviation = cabs_f64(self.coeffs[0] - Complex::one());
        let pu = p as usize;
        for n in 2..=len {
            if n % pu != 0 {
                continue;
            }
            let mut k = n;
            let mut pl = 1;
            while k % pu == 0 {
                k /= pu;
                pl *= pu;
            }
            if k == 1 {
                continue;
            }
            let dev = cabs_f64(self.coeffs[n - 1] - self.coeffs[pl - 1] * self.coeffs[k - 1]);
            if dev > worst_deviation {
                worst_deviation = dev;
                worst_index = n;
            }
        }
        SplitReport {
            prime: p,
            holds: worst_deviation <= tolerance,
            worst_index,
            worst_deviation,
            tolerance,
        }
    }

    /// Rebuilds the series with its `p`-part replaced: the result has
    /// `a'(p^v k) = local[v] a(k)` for `p` not dividing `k`. Missing local
    /// coefficients are treated as 0.
    pub fn with_local_factor(&self, p: u64, local: &[Complex<T>]) -> Self {
        let pu = p as usize;
        let coeffs = (1..=self.len())
            .map(|n| {
                let mut k = n;
                let mut v = 0;
                while k % pu == 0 {
                    k /= pu;
                    v += 1;
                }
                let lv = local.get(v).copied().unwrap_or_else(Complex::zero);
                lv * self.coeffs[k - 1]
            })
            .collect();
        CoeffSeries {
            coeffs,
            horizon: self.horizon,
        }
    }

    /// Sanity check `|a(n)| <= C n^exponent` (a sampled Ramanujan-type bound,
    /// not a proof of anything).
    pub fn growth_diagnostic(&self, constant: f64, exponent: f64) -> GrowthDiagnostic {
        let mut worst_index = 1;
        let mut worst_ratio = 0.0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let n = (i + 1) as f64;
            let ratio = cabs_f64(c) / n.powf(exponent);
            if ratio > worst_ratio {
                worst_ratio = ratio;
                worst_index = i + 1;
            }
        }
        GrowthDiagnostic {
            constant,
            exponent,
            worst_index,
            worst_ratio,
            holds: worst_ratio <= constant,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::DoubleDouble;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    fn divisor_count(n: usize) -> f64 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).count() as f64
    }

    fn mobius(n: usize) -> f64 {
        let mut m = n;
        let mut sign = 1.0;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                m /= p;
                if m.is_multiple_of(p) {
                    return 0.0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if m > 1 {
            sign = -sign;
        }
        sign
    }

    #[test]
    fn convolution_of_ones_counts_divisors() {
        let ones = CoeffSeries::<f64>::ones(100);
        let d = ones.convolve(&ones);
        assert_eq!(d.coeff(6), c(4.0));
        for n in 1..=100 {
            assert_eq!(d.coeff(n).re, divisor_count(n));
        }
    }

    #[test]
    fn delta_is_the_identity() {
        let a = CoeffSeries::from_fn(50, |n| Complex::new(n as f64, -(n as f64).sqrt())).unwrap();
        assert_eq!(a.convolve(&CoeffSeries::delta(50)), a);
        assert_eq!(CoeffSeries::<f64>::delta(50).invert().unwrap(), CoeffSeries::delta(50));
    }

    #[test]
    fn mobius_inversion() {
        let ones = CoeffSeries::<f64>::ones(200);
        let mu = CoeffSeries::from_fn(200, |n| c(mobius(n))).unwrap();
        assert_eq!(ones.convolve(&mu), CoeffSeries::delta(200));
        let inv = ones.invert().unwrap();
        assert_eq!(inv.coeff(6), c(1.0));
        assert_eq!(inv.coeff(4), c(0.0));
        assert_eq!(inv, mu);
    }

    #[test]
    fn invert_rejects_small_leading_coefficient() {
        let a = CoeffSeries::from_fn(10, |n| c(if n == 1 { 1e-9 } else { 1.0 })).unwrap();
        assert!(matches!(a.invert(), Err(Error::NonUnitLeadingCoeff { .. })));
    }

    #[test]
    fn construction_rejects_degenerate_input() {
        assert_eq!(
            CoeffSeries::<f64>::new(vec![c(0.0); 5]).unwrap_err(),
            Error::VanishingSeries
        );
        assert_eq!(CoeffSeries::<f64>::new(vec![]).unwrap_err(), Error::EmptySeries);
        assert_eq!(
            CoeffSeries::new(vec![c(1.0), c(f64::NAN)]).unwrap_err(),
            Error::NonFiniteCoefficient(2)
        );
    }

    #[test]
    fn shifts() {
        let d = CoeffSeries::<f64>::delta(30).shift_by_prime_power(3, 2);
        for n in 1..=30 {
            assert_eq!(d.coeff(n), c(if n == 9 { 1.0 } else { 0.0 }));
        }
        let ones = CoeffSeries::<f64>::ones(30);
        assert_eq!(ones.shift_by_prime_power(2, 0), ones);
        let s = ones.shift_by_prime_power(2, 1);
        assert_eq!(s.coeff(6), c(1.0));
        assert_eq!(s.coeff(3), c(0.0));
        assert_eq!(s.horizon(), 30);
    }

    #[test]
    fn evaluate_rejects_left_half_plane_and_handles_delta() {
        let d = CoeffSeries::<f64>::delta(10);
        let e = d.evaluate(Complex::new(3.0, 0.0)).unwrap();
        assert_eq!(e.value, c(1.0));
        assert!(matches!(
            d.evaluate(Complex::new(1.0, 5.0)),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn evaluate_zeta_two() {
        // Oracle: sum 1/n^2 directly in reverse order.
        let n = 10_000;
        let oracle: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum();
        let e = CoeffSeries::<f64>::ones(n).evaluate(Complex::new(2.0, 0.0)).unwrap();
        assert!((e.value.re - oracle).abs() < 1e-13);
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((e.value.re - zeta2).abs() <= e.tail_bound);
        assert!((e.value.re - 1.64493).abs() < 1e-3);
    }

    #[test]
    fn extract_local_of_divisor_function() {
        let ones = CoeffSeries::<f64>::ones(10_000);
        let d = ones.convolve(&ones);
        let local = d.extract_local(3).unwrap();
        assert_eq!(local.depth(), 8);
        for (k, &ck) in local.coeffs().iter().enumerate() {
            assert_eq!(ck, c((k + 1) as f64));
        }
        let delta_local = CoeffSeries::<f64>::delta(100).extract_local(2).unwrap();
        assert_eq!(delta_local.coeffs()[0], c(1.0));
        assert!(delta_local.coeffs()[1..].iter().all(|z| z.is_zero()));
        assert!(matches!(
            CoeffSeries::<f64>::ones(50).extract_local(11),
            Err(Error::TruncationTooShort(_))
        ));
    }

    #[test]
    fn split_check_detects_injected_defect() {
        let ones = CoeffSeries::<f64>::ones(1000);
        let d = ones.convolve(&ones);
        let report = d.split_check(5);
        assert!(report.holds);
        assert_eq!(report.worst_deviation, 0.0);

        let bad = d.with_coeff(4, d.coeff(4) + c(0.1));
        let report = bad.split_check(2);
        assert!(!report.holds);
        assert_eq!(report.worst_index % 4, 0);
    }

    #[test]
    fn with_local_factor_preserves_splitting() {
        let ones = CoeffSeries::<f64>::ones(500);
        let d = ones.convolve(&ones);
        let junk: Vec<_> = (0..10).map(|k| c((1..=k).product::<usize>() as f64)).collect();
        let e = d.with_local_factor(3, &junk);
        assert!(e.split_check(3).holds);
        assert_eq!(e.coeff(27), c(6.0));
        assert_eq!(e.coeff(54), c(12.0));
        assert_eq!(e.coeff(10), d.coeff(10));
    }

    #[test]
    fn growth_diagnostic_flags_fast_growth() {
        let ones = CoeffSeries::<f64>::ones(1000);
        assert!(ones.growth_diagnostic(1.0, 0.1).holds);
        let lin = CoeffSeries::from_fn(1000, |n| c(n as f64)).unwrap();
        let g = lin.growth_diagnostic(10.0, 0.1);
        assert!(!g.holds);
        assert_eq!(g.worst_index, 1000);
    }

    #[test]
    fn extended_precision_inverse() {
        let ones = CoeffSeries::<DoubleDouble>::ones(300);
        let sq = ones.convolve(&ones);
        let inv = sq.invert().unwrap();
        let id = sq.convolve(&inv);
        for n in 1..=300 {
            let expect = if n == 1 { 1.0 } else { 0.0 };
            assert!((id.coeff(n).re.to_f64() - expect).abs() < 1e-28);
        }
    }
}
