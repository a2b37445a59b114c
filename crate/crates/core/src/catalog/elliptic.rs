use std::f64::consts::PI;

use num_complex::{Complex, Complex64};

use super::{LFunctionData, LocalModel};
use crate::arith::{prime_factors, primes_up_to, smallest_prime_factors};
use crate::error::{Error, Result};
use crate::invariants::GammaFactor;
use crate::real::Real;
use crate::series::CoeffSeries;

/// Weierstrass model `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    pub a: [i64; 5],
}

impl EllipticCurve {
    pub fn new(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Result<Self> {
        let e = EllipticCurve {
            a: [a1, a2, a3, a4, a6],
        };
        if e.discriminant() == 0 {
            return Err(Error::SingularModel);
        }
        Ok(e)
    }

    /// Curve 11a1, `[0, -1, 1, -10, -20]`.
    pub fn e11a1() -> Self {
        EllipticCurve {
            a: [0, -1, 1, -10, -20],
        }
    }

    /// `(b2, b4, b6, b8)`.
    pub fn b_invariants(&self) -> (i128, i128, i128, i128) {
        let [a1, a2, a3, a4, a6] = self.a.map(|x| x as i128);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> i128 {
        let (b2, b4, b6, b8) = self.b_invariants();
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        prime_factors(self.discriminant().unsigned_abs() as u64)
    }

    /// `#E(F_p)` including the point at infinity. At bad primes this counts
    /// every affine solution, singular point included.
    pub fn count_points(&self, p: u64) -> u64 {
        if p == 2 {
            let [a1, a2, a3, a4, a6] = self.a.map(|x| x.rem_euclid(2));
            let mut count = 1;
            for x in 0..2 {
                for y in 0..2 {
                    let lhs = y * y + a1 * x * y + a3 * y;
                    let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                    if (lhs - rhs).rem_euclid(2) == 0 {
                        count += 1;
                    }
                }
            }
            return count;
        }
        // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        let (b2, b4, b6, _) = self.b_invariants();
        let pi = p as i128;
        let m = |v: i128| v.rem_euclid(pi) as usize;
        let mut squares = vec![0u64; p as usize];
        for y in 0..p as usize {
            squares[y * y % p as usize] += 1;
        }
        let (c2, c1, c0) = (m(b2) as i128, m(2 * b4) as i128, m(b6) as i128);
        let mut count = 1;
        for x in 0..pi {
            let f = ((4 * x % pi + c2) * x % pi + c1) * x % pi + c0;
            count += squares[(f % pi) as usize];
        }
        count
    }

    /// `a_p = p + 1 - #E(F_p)`.
    pub fn trace_of_frobenius(&self, p: u64) -> i64 {
        p as i64 + 1 - self.count_points(p) as i64
    }

    /// `-prod_{p | N} (-a_p)` for semistable curves, `None` otherwise.
    pub fn semistable_data(&self) -> Option<(u64, i64)> {
        let mut conductor = 1u64;
        let mut sign = -1i64;
        for p in self.bad_primes() {
            let ap = self.trace_of_frobenius(p);
            if ap == 0 {
                return None;
            }
            conductor *= p;
            sign *= -ap;
        }
        Some((conductor, sign))
    }
}

/// Unnormalized integer coefficients `a(1..=n)`.
pub fn elliptic_integer_coeffs(curve: &EllipticCurve, n: usize) -> Vec<i64> {
    let bad = curve.bad_primes();
    let spf = smallest_prime_factors(n);
    let mut a = vec![0i64; n + 1];
    if n >= 1 {
        a[1] = 1;
    }
    for p in primes_up_to(n as u64) {
        let ap = curve.trace_of_frobenius(p);
        let good = !bad.contains(&p);
        let p = p as usize;
        let mut prev = 1i64;
        let mut cur = ap;
        let mut pk = p;
        loop {
            a[pk] = cur;
            let Some(next_pk) = pk.checked_mul(p).filter(|&q| q <= n) else {
                break;
            };
            let next = if good {
                ap * cur - p as i64 * prev
            } else {
                ap * cur
            };
            prev = cur;
            cur = next;
            pk = next_pk;
        }
    }
    for k in 2..=n {
        let p = spf[k] as usize;
        let mut pk = p;
        while (k / pk).is_multiple_of(p) {
            pk *= p;
        }
        if pk != k {
            a[k] = a[pk] * a[k / pk];
        }
    }
    a.remove(0);
    a
}

/// Coefficients of `L(E, s + 1/2)`: `a(n) / sqrt(n)`.
pub fn gen_elliptic<T: Real>(curve: &EllipticCurve, n: usize) -> Result<LFunctionData<T>> {
    if curve.discriminant() == 0 {
        return Err(Error::SingularModel);
    }
    if n == 0 {
        return Err(Error::InvalidArgument("truncation N must be at least 1".into()));
    }
    let ints = elliptic_integer_coeffs(curve, n);
    let coeffs = ints
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let k = T::from_i128(i as i128 + 1);
            Complex::new(T::from_i128(v as i128) / k.sqrt(), T::zero())
        })
        .collect();
    let data = curve.semistable_data();
    let gamma = data.map(|(cond, sign)| GammaFactor {
        q: (cond as f64).sqrt() / (2.0 * PI),
        factors: vec![(1.0, Complex64::new(0.5, 0.0))],
        omega: Complex64::new(sign as f64, 0.0),
        pole_order: 0,
    });
    let [a1, a2, a3, a4, a6] = curve.a;
    Ok(LFunctionData {
        label: format!("elliptic:{a1},{a2},{a3},{a4},{a6}"),
        coeffs: CoeffSeries::new(coeffs)?,
        gamma,
        claimed_conductor: data.map(|d| d.0),
        normalization_note: "analytic; a(n) = a_E(n) / sqrt(n)".into(),
        local_model: data.map(|(level, _)| LocalModel::Hecke2 { level }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::natural_conductor;

    /// Oracle: exhaustive enumeration of the affine equation over F_p.
    fn brute_count(e: &EllipticCurve, p: i64) -> i64 {
        let [a1, a2, a3, a4, a6] = e.a;
        let mut count = 1;
        for x in 0..p {
            for y in 0..p {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if (lhs - rhs).rem_euclid(p) == 0 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn e11a1_traces() {
        let e = EllipticCurve::e11a1();
        assert_eq!(e.discriminant(), -161_051);
        assert_eq!(e.bad_primes(), vec![11]);
        let expected = [(2, -2), (3, -1), (5, 1), (7, -2), (11, 1), (13, 4), (23, -1)];
        for (p, ap) in expected {
            assert_eq!(e.trace_of_frobenius(p), ap, "p = {p}");
        }
        assert_eq!(e.semistable_data(), Some((11, 1)));
    }

    #[test]
    fn fast_count_matches_enumeration() {
        for curve in [
            EllipticCurve::e11a1(),
            EllipticCurve::new(1, 0, 1, -1, 0).unwrap(),
            EllipticCurve::new(0, 0, 1, -1, 0).unwrap(),
            EllipticCurve::new(1, -1, 1, -3, 3).unwrap(),
        ] {
            for p in primes_up_to(60) {
                assert_eq!(curve.count_points(p) as i64, brute_count(&curve, p as i64), "{curve:?} p={p}");
            }
        }
    }

    #[test]
    fn hecke_and_multiplicativity() {
        let a = elliptic_integer_coeffs(&EllipticCurve::e11a1(), 200);
        assert_eq!(a[3], 2); // a(4) = a(2)^2 - 2
        assert_eq!(a[5], a[1] * a[2]);
        assert_eq!(a[120], 1); // a(121) = a(11)^2
        let data = gen_elliptic::<f64>(&EllipticCurve::e11a1(), 200).unwrap();
        assert!((data.coeffs.coeff(2).re + 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(natural_conductor(&data.gamma.clone().unwrap().invariants()), Some(11));
        assert!(data.validate().is_ok());
    }

    #[test]
    fn singular_model_rejected() {
        assert_eq!(EllipticCurve::new(0, 0, 0, 0, 0).unwrap_err(), Error::SingularModel);
        let cusp = EllipticCurve { a: [0, 0, 0, 0, 0] };
        assert!(matches!(gen_elliptic::<f64>(&cusp, 10), Err(Error::SingularModel)));
    }

    #[test]
    fn additive_reduction_has_no_claimed_conductor() {
        // y^2 = x^3 - x has conductor 32 and additive reduction at 2.
        let e = EllipticCurve::new(0, 0, 0, -1, 0).unwrap();
        assert_eq!(e.trace_of_frobenius(2), 0);
        let data = gen_elliptic::<f64>(&e, 50).unwrap();
        assert!(data.claimed_conductor.is_none());
        assert_eq!(data.coeffs.coeff(4).re, 0.0);
    }
}
