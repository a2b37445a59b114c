//! Scalar backends for coefficient arithmetic.
//!
//! Coefficients live in `Complex<T>` where `T` is either `f64` or
//! [`DoubleDouble`], an unevaluated sum of two doubles carrying roughly 106
//! bits of mantissa. Only the operations the rest of the crate needs are
//! provided: field arithmetic, square root, and sine/cosine on a reduced
//! argument for roots of unity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign,
};

use num_complex::Complex;
use num_traits::{Num, NumAssign, One, Zero};
use serde::{Deserialize, Serialize};

/// Selects the coefficient domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionMode {
    Double,
    Extended,
}

impl PrecisionMode {
    /// Relative factor of the default identity tolerance
    /// `factor * (1 + max coefficient magnitude)`.
    pub fn identity_factor(self) -> f64 {
        match self {
            PrecisionMode::Double => 1e-10,
            PrecisionMode::Extended => 1e-25,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PrecisionMode::Double => "double",
            PrecisionMode::Extended => "extended",
        }
    }
}

impl std::str::FromStr for PrecisionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "double" => Ok(PrecisionMode::Double),
            "extended" => Ok(PrecisionMode::Extended),
            other => Err(format!("unknown precision mode '{other}'")),
        }
    }
}

/// Real scalar used for coefficient arithmetic.
pub trait Real:
    Copy
    + Send
    + Sync
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Num
    + NumAssign
    + Neg<Output = Self>
    + 'static
{
    const MODE: PrecisionMode;

    fn from_f64(x: f64) -> Self;
    fn from_i128(x: i128) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn pi() -> Self;
    /// `(sin x, cos x)`, only called with `|x| <= pi/4`.
    fn sin_cos_reduced(self) -> (Self, Self);
    fn is_finite(self) -> bool;
}

impl Real for f64 {
    const MODE: PrecisionMode = PrecisionMode::Double;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i128(x: i128) -> Self {
        x as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn sin_cos_reduced(self) -> (Self, Self) {
        self.sin_cos()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

/// Modulus of a complex number in its own precision.
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Modulus rounded to `f64`, used for residuals and tolerances.
pub fn cabs_f64<T: Real>(z: Complex<T>) -> f64 {
    cabs(z).to_f64()
}

pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

pub fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `e(k/m) = exp(2 pi i k / m)`, with the fraction reduced exactly before any
/// floating-point work so that large `k` loses no accuracy.
pub fn unit_root<T: Real>(k: i128, m: u64) -> Complex<T> {
    assert!(m > 0, "root of unity of order 0");
    let m128 = m as i128;
    let k = k.rem_euclid(m128);
    if k == 0 {
        return Complex::one();
    }
    // Octant o = floor(8k/m); remainder fraction (8k - o m) / (8m) in [0, 1/8).
    let eight_k = 8 * k;
    let octant = (eight_k / m128) as u8;
    let num = eight_k - octant as i128 * m128;
    let (s, c) = if num == 0 {
        (T::zero(), T::one())
    } else {
        // angle = 2 pi num / (8 m) = pi num / (4 m)
        let angle = T::pi() * T::from_i128(num) / T::from_i128(4 * m128);
        angle.sin_cos_reduced()
    };
    // Rotate the reduced angle phi by octant * pi/4.
    let half = T::one() / (T::one() + T::one());
    let r = half.sqrt();
    let (re, im) = match octant {
        0 => (c, s),
        1 => (r * (c - s), r * (c + s)),
        2 => (-s, c),
        3 => (-r * (c + s), r * (c - s)),
        4 => (-c, -s),
        5 => (r * (s - c), -r * (c + s)),
        6 => (s, -c),
        _ => (r * (c + s), r * (s - c)),
    };
    Complex::new(re, im)
}

// ---------------------------------------------------------------------------
// double-double

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        DoubleDouble { hi: h, lo: l }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, mut e) = two_prod(self.hi, b);
        e += self.lo * b;
        Self::renorm(p, e)
    }

    fn trunc(self) -> Self {
        let hi = self.hi.trunc();
        if hi == self.hi {
            Self::renorm(hi, self.lo.trunc())
        } else {
            DoubleDouble { hi, lo: 0.0 }
        }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&(self.hi + self.lo), f)
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, mut e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        e += t;
        let (s, mut e) = quick_two_sum(s, e);
        e += f;
        Self::renorm(s, e)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, mut e) = two_prod(self.hi, b.hi);
        e += self.hi * b.lo + self.lo * b.hi;
        Self::renorm(p, e)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q, e) = quick_two_sum(q1, q2);
        DoubleDouble { hi: q, lo: e } + DoubleDouble { hi: q3, lo: 0.0 }
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        self - (self / b).trunc() * b
    }
}

macro_rules! assign_op {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            fn $method(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}

assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble { hi: 0.0, lo: 0.0 }
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble { hi: 1.0, lo: 0.0 }
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = String;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(format!("radix {radix} not supported"));
        }
        s.trim()
            .parse::<f64>()
            .map(Self::from_f64)
            .map_err(|e| e.to_string())
    }
}

impl Real for DoubleDouble {
    const MODE: PrecisionMode = PrecisionMode::Extended;

    fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    fn from_i128(x: i128) -> Self {
        let hi = x as f64;
        // |x - hi| < 2^75 for the magnitudes used here, so the subtraction is exact.
        let lo = (x - hi as i128) as f64;
        Self::renorm(hi, lo)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::zero();
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let ax_dd = Self::from_f64(ax);
        let diff = self - ax_dd * ax_dd;
        ax_dd + Self::from_f64(diff.hi * x * 0.5)
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    fn pi() -> Self {
        DoubleDouble {
            hi: 3.141_592_653_589_793,
            lo: 1.224_646_799_147_353_2e-16,
        }
    }

    fn sin_cos_reduced(self) -> (Self, Self) {
        // Taylor series; |x| <= pi/4 needs 16 terms for ~1e-32.
        let x2 = self * self;
        let mut term = self;
        let mut sin = self;
        let mut k = 1i128;
        loop {
            term = -term * x2 / Self::from_i128((2 * k) * (2 * k + 1));
            sin += term;
            k += 1;
            if term.hi.abs() < 1e-34 || k > 40 {
                break;
            }
        }
        let mut term = Self::one();
        let mut cos = Self::one();
        let mut k = 1i128;
        loop {
            term = -term * x2 / Self::from_i128((2 * k - 1) * (2 * k));
            cos += term;
            k += 1;
            if term.hi.abs() < 1e-34 || k > 40 {
                break;
            }
        }
        (sin, cos)
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from_f64(x)
    }

    #[test]
    fn double_double_carries_extra_bits() {
        let one = dd(1.0);
        let tiny = dd(1e-20);
        let sum = one + tiny;
        assert_eq!(sum.hi(), 1.0);
        assert!((sum.lo() - 1e-20).abs() < 1e-36);
        assert!(((sum - one).to_f64() - 1e-20).abs() < 1e-36);
    }

    #[test]
    fn division_and_sqrt_round_trip() {
        let three = dd(3.0);
        let third = DoubleDouble::one() / three;
        let back = third * three - DoubleDouble::one();
        assert!(back.to_f64().abs() < 1e-31);

        let two = dd(2.0);
        let r = two.sqrt();
        assert!((r * r - two).to_f64().abs() < 1e-31);
    }

    #[test]
    fn i128_conversion_is_exact_for_large_values() {
        let x: i128 = 123_456_789_012_345_678_901_234_567;
        let d = DoubleDouble::from_i128(x);
        let hi = d.hi() as i128;
        let lo = d.lo() as i128;
        assert_eq!(hi + lo, x);
    }

    #[test]
    fn unit_roots_hit_exact_symmetry_points() {
        let i: Complex<f64> = unit_root(1, 4);
        assert!((i - Complex::new(0.0, 1.0)).norm() < 1e-16);
        let minus_i: Complex<f64> = unit_root(-1, 4);
        assert!((minus_i - Complex::new(0.0, -1.0)).norm() < 1e-16);
        let w: Complex<f64> = unit_root(1, 3);
        assert!((w - Complex::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn extended_unit_roots_are_accurate() {
        for m in [3u64, 7, 9, 49, 97, 1000] {
            for k in 0..m as i128 {
                let z: Complex<DoubleDouble> = unit_root(k, m);
                let norm = z.re * z.re + z.im * z.im - DoubleDouble::one();
                assert!(norm.to_f64().abs() < 1e-30, "m={m} k={k}");
                // z^m = 1 checked through z * conj(previous) structure: compare against f64
                let f: Complex<f64> = unit_root(k, m);
                assert!((to_c64(z) - f).norm() < 1e-15);
            }
        }
        // e(1/3)^3 = 1 to extended precision
        let w: Complex<DoubleDouble> = unit_root(1, 3);
        let cube = w * w * w;
        assert!((cube.re - DoubleDouble::one()).to_f64().abs() < 1e-30);
        assert!(cube.im.to_f64().abs() < 1e-30);
    }
}
