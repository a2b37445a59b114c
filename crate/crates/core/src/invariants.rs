//! Gamma-factor data of a functional equation and the invariants derived
//! from it, plus the multiplicative order `m_q(p)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};

/// Gate for treating a computed conductor as an integer.
pub const CONDUCTOR_GATE: f64 = 1e-6;

const UNIT_TOL: f64 = 1e-12;

/// `gamma(s) = Q^s prod_j Gamma(lambda_j s + mu_j)` together with the root
/// number `omega` and the order of the pole at `s = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaFactor {
    pub q: f64,
    /// Pairs `(lambda_j, mu_j)`.
    pub factors: Vec<(f64, Complex64)>,
    pub omega: Complex64,
    pub pole_order: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SelbergInvariants {
    pub degree: f64,
    pub conductor: f64,
    pub root_number: Complex64,
    pub xi: Complex64,
    pub eta: f64,
    pub theta: f64,
    pub omega_star: Complex64,
    pub tau: f64,
}

impl GammaFactor {
    pub fn new(
        q: f64,
        factors: Vec<(f64, Complex64)>,
        omega: Complex64,
        pole_order: u32,
    ) -> Result<Self> {
        let g = GammaFactor {
            q,
            factors,
            omega,
            pole_order,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q.is_finite() && self.q > 0.0) {
            return Err(Error::InvalidData(format!("Q = {} must be positive", self.q)));
        }
        for (j, &(lambda, mu)) in self.factors.iter().enumerate() {
            if !(lambda.is_finite() && lambda > 0.0) {
                return Err(Error::InvalidData(format!(
                    "lambda_{} = {lambda} must be positive",
                    j + 1
                )));
            }
            if !(mu.re.is_finite() && mu.im.is_finite()) || mu.re < 0.0 {
                return Err(Error::InvalidData(format!(
                    "mu_{} = {mu} must have nonnegative real part",
                    j + 1
                )));
            }
        }
        if (self.omega.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidData(format!(
                "|omega| = {} is not 1",
                self.omega.norm()
            )));
        }
        Ok(())
    }

    pub fn invariants(&self) -> SelbergInvariants {
        invariants(self)
    }
}

pub fn invariants(gamma: &GammaFactor) -> SelbergInvariants {
    let degree = 2.0 * gamma.factors.iter().map(|f| f.0).sum::<f64>();
    let log_q = (2.0 * PI).ln() * degree
        + 2.0 * gamma.q.ln()
        + gamma
            .factors
            .iter()
            .map(|&(l, _)| 2.0 * l * l.ln())
            .sum::<f64>();
    let conductor = log_q.exp();
    // prod lambda^{-2 i Im mu} = exp(-2 i sum Im(mu) ln lambda)
    let phase: f64 = gamma
        .factors
        .iter()
        .map(|&(l, mu)| -2.0 * mu.im * l.ln())
        .sum();
    let root_number = gamma.omega * Complex64::from_polar(1.0, phase);
    let xi = gamma
        .factors
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &(_, mu)| {
            acc + (mu - Complex64::new(0.5, 0.0)) * 2.0
        });
    let eta = xi.re;
    let theta = if degree > 0.0 { xi.im / degree } else { 0.0 };
    let omega_star = root_number
        * Complex64::from_polar(1.0, -PI * (eta + 1.0) / 2.0)
        * Complex64::from_polar(1.0, theta / 2.0 * (conductor / (4.0 * PI * PI)).ln());
    let tau = gamma
        .factors
        .iter()
        .map(|&(l, mu)| (mu.im / l).abs())
        .fold(0.0, f64::max);
    SelbergInvariants {
        degree,
        conductor,
        root_number,
        xi,
        eta,
        theta,
        omega_star,
        tau,
    }
}

/// Least `m >= 1` with `p^m = 1 (mod q)`.
pub fn mult_order(p: u64, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    if q == 1 {
        return Ok(1);
    }
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let base = (p % q) as u128;
    let mut x = base;
    let mut m = 1;
    while x != 1 {
        x = x * base % q as u128;
        m += 1;
    }
    Ok(m)
}

/// `Some(round(q_F))` when the conductor is a positive integer within the gate.
pub fn natural_conductor(inv: &SelbergInvariants) -> Option<u64> {
    let r = inv.conductor.round();
    if (inv.conductor - r).abs() <= CONDUCTOR_GATE && r >= 1.0 {
        Some(r as u64)
    } else {
        None
    }
}

pub fn conductor_is_natural(inv: &SelbergInvariants) -> bool {
    natural_conductor(inv).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_squared_shape() {
        let g = GammaFactor::new(1.0 / PI, vec![(0.5, c(0.0, 0.0)); 2], c(1.0, 0.0), 2).unwrap();
        let inv = g.invariants();
        assert!((inv.degree - 2.0).abs() < 1e-15);
        assert!((inv.conductor - 1.0).abs() < 1e-12);
        assert!((inv.xi - c(-2.0, 0.0)).norm() < 1e-15);
        assert_eq!(inv.theta, 0.0);
        assert_eq!(inv.tau, 0.0);
        assert_eq!(natural_conductor(&inv), Some(1));
    }

    #[test]
    fn elliptic_shape() {
        let g = GammaFactor::new(11f64.sqrt() / (2.0 * PI), vec![(1.0, c(0.5, 0.0))], c(1.0, 0.0), 0)
            .unwrap();
        let inv = g.invariants();
        assert!((inv.conductor - 11.0).abs() < 1e-12);
        assert_eq!(inv.xi, c(0.0, 0.0));
        assert!((inv.omega_star - c(0.0, -1.0)).norm() < 1e-12);
        assert!((inv.root_number.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_gamma() {
        let g = GammaFactor::new(1.0, vec![], c(1.0, 0.0), 0).unwrap();
        let inv = g.invariants();
        assert_eq!(inv.degree, 0.0);
        assert_eq!(inv.conductor, 1.0);
    }

    #[test]
    fn imaginary_shifts() {
        // Oracle: the defining formulas with one factor (2, 1 + 3i).
        let g = GammaFactor::new(0.7, vec![(2.0, c(1.0, 3.0))], c(0.0, 1.0), 0).unwrap();
        let inv = g.invariants();
        assert!((inv.degree - 4.0).abs() < 1e-15);
        let q = (2.0 * PI).powi(4) * 0.49 * 16.0;
        assert!((inv.conductor - q).abs() < 1e-10 * q);
        assert!((inv.xi - c(1.0, 6.0)).norm() < 1e-14);
        assert!((inv.theta - 1.5).abs() < 1e-15);
        assert!((inv.tau - 1.5).abs() < 1e-15);
        let rn = c(0.0, 1.0) * c(2.0, 0.0).powc(c(0.0, -6.0));
        assert!((inv.root_number - rn).norm() < 1e-12);
        assert!((inv.omega_star.norm() - 1.0).abs() < 1e-12);
        assert!((inv.eta - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_validation() {
        assert!(GammaFactor::new(0.0, vec![], c(1.0, 0.0), 0).is_err());
        assert!(GammaFactor::new(1.0, vec![(-1.0, c(0.0, 0.0))], c(1.0, 0.0), 0).is_err());
        assert!(GammaFactor::new(1.0, vec![(1.0, c(-0.5, 0.0))], c(1.0, 0.0), 0).is_err());
        assert!(GammaFactor::new(1.0, vec![], c(2.0, 0.0), 0).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(23, 11).unwrap(), 1);
        assert_eq!(mult_order(3, 11).unwrap(), 5);
        assert_eq!(mult_order(2, 11).unwrap(), 10);
        assert_eq!(mult_order(97, 11).unwrap(), 5);
        assert_eq!(mult_order(7, 1).unwrap(), 1);
        assert_eq!(mult_order(11, 11).unwrap_err(), Error::NotCoprime { p: 11, q: 11 });
    }

    #[test]
    fn conductor_gate() {
        let mut inv = GammaFactor::new(1.0, vec![], c(1.0, 0.0), 0).unwrap().invariants();
        inv.conductor = 1.000_000_000_1;
        assert_eq!(natural_conductor(&inv), Some(1));
        inv.conductor = 11.0;
        assert!(conductor_is_natural(&inv));
        inv.conductor = 2.5;
        assert!(!conductor_is_natural(&inv));
        inv.conductor = 0.0;
        assert!(!conductor_is_natural(&inv));
    }
}
