//! Concrete degree-2 coefficient data: built-in generators and the
//! `LFUNC v1` text format.

mod elliptic;
mod format;
mod generators;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::invariants::{natural_conductor, GammaFactor};
use crate::local::LocalFactor;
use crate::real::{cabs_f64, from_c64, to_c64, Real};
use crate::series::CoeffSeries;

pub use elliptic::{gen_elliptic, EllipticCurve};
pub use format::{parse_lfunc, read_lfunc, write_lfunc, write_lfunc_file};
pub use generators::{
    gen_delta, gen_zeta_chi4, gen_zeta_squared, ramanujan_tau, zeta_chi4_gamma_forms,
};

/// Tolerance on `a(1) = 1`.
pub const LEADING_COEFF_TOL: f64 = 1e-12;

/// Rule extending `a(p^k)` past the stored truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalModel {
    /// Degree-2 Hecke recursion in analytic normalization:
    /// `a(p^{k+1}) = a(p) a(p^k) - a(p^{k-1})` for `p` not dividing `level`,
    /// `a(p^{k+1}) = a(p) a(p^k)` otherwise.
    Hecke2 { level: u64 },
}

impl LocalModel {
    pub fn extend<T: Real>(&self, p: u64, coeffs: &mut Vec<Complex<T>>, depth: usize) {
        let LocalModel::Hecke2 { level } = *self;
        if coeffs.is_empty() {
            coeffs.push(Complex::one());
        }
        if coeffs.len() < 2 {
            return;
        }
        let ap = coeffs[1];
        let bad = level % p == 0;
        while coeffs.len() <= depth {
            let k = coeffs.len() - 1;
            let next = if bad {
                ap * coeffs[k]
            } else {
                ap * coeffs[k] - coeffs[k - 1]
            };
            coeffs.push(next);
        }
    }
}

/// One L-function's coefficient data together with its metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct LFunctionData<T: Real = f64> {
    pub label: String,
    pub coeffs: CoeffSeries<T>,
    pub gamma: Option<GammaFactor>,
    pub claimed_conductor: Option<u64>,
    pub normalization_note: String,
    pub local_model: Option<LocalModel>,
}

impl<T: Real> LFunctionData<T> {
    /// Checks `a(1) = 1`, the gamma data, and agreement between the conductor
    /// computed from the gamma factor and the claimed one.
    pub fn validate(&self) -> Result<()> {
        let a1 = self.coeffs.coeff(1);
        let dev = cabs_f64(a1 - Complex::one());
        if dev > LEADING_COEFF_TOL {
            return Err(Error::InvalidData(format!(
                "{}: a(1) = {} but the leading coefficient must be 1",
                self.label,
                to_c64(a1)
            )));
        }
        if let Some(g) = &self.gamma {
            g.validate()?;
            if let Some(claimed) = self.claimed_conductor {
                let inv = g.invariants();
                if natural_conductor(&inv) != Some(claimed) {
                    return Err(Error::InvalidData(format!(
                        "{}: gamma data gives conductor {} but {} is claimed",
                        self.label, inv.conductor, claimed
                    )));
                }
            }
        }
        Ok(())
    }

    /// `q_F`: the claimed conductor, else the one computed from gamma data.
    pub fn conductor(&self) -> Option<u64> {
        self.claimed_conductor.or_else(|| {
            self.gamma
                .as_ref()
                .and_then(|g| natural_conductor(&g.invariants()))
        })
    }

    pub fn conductor_or_err(&self) -> Result<u64> {
        self.conductor().ok_or(Error::MissingConductor)
    }

    pub fn is_good_prime(&self, p: u64) -> Result<bool> {
        Ok(self.conductor_or_err()? % p != 0)
    }

    /// `a(p^k)` for `k = 0..=max(available, min_depth)`, extended by the
    /// local model when the truncation is too short.
    pub fn local_factor(&self, p: u64, min_depth: usize) -> Result<LocalFactor<T>> {
        let mut coeffs = self.coeffs.prime_power_coeffs(p);
        if coeffs.len() <= min_depth {
            match &self.local_model {
                Some(model) => model.extend(p, &mut coeffs, min_depth),
                None => {
                    return Err(Error::TruncationTooShort(format!(
                        "{} has a(p^k) only up to k = {} at p = {p}, {min_depth} needed",
                        self.label,
                        coeffs.len() - 1
                    )))
                }
            }
        }
        Ok(LocalFactor::new(p, coeffs))
    }

    pub fn map_coeffs(&self, coeffs: CoeffSeries<T>) -> Self {
        LFunctionData {
            coeffs,
            ..self.clone()
        }
    }

    /// Same data in another scalar domain.
    pub fn cast<U: Real>(&self) -> LFunctionData<U> {
        let coeffs: Vec<Complex<U>> = self
            .coeffs
            .coeffs()
            .iter()
            .map(|&c| from_c64(to_c64(c)))
            .collect();
        let mut series = CoeffSeries::from_vec(coeffs);
        if series.coeffs().iter().all(|c| c.is_zero()) {
            series = CoeffSeries::delta(series.len());
        }
        LFunctionData {
            label: self.label.clone(),
            coeffs: series.with_horizon(self.coeffs.horizon()),
            gamma: self.gamma.clone(),
            claimed_conductor: self.claimed_conductor,
            normalization_note: self.normalization_note.clone(),
            local_model: self.local_model,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn local_model_extends_zeta_squared() {
        let z = gen_zeta_squared::<f64>(100).unwrap();
        let local = z.local_factor(97, 6).unwrap();
        for (k, c) in local.coeffs().iter().enumerate() {
            assert_eq!(*c, Complex64::new(k as f64 + 1.0, 0.0));
        }
        let bare = LFunctionData {
            local_model: None,
            ..z
        };
        assert!(matches!(
            bare.local_factor(97, 6),
            Err(Error::TruncationTooShort(_))
        ));
    }

    #[test]
    fn validation_messages() {
        let z = gen_zeta_squared::<f64>(20).unwrap();
        assert!(z.validate().is_ok());
        let bad = z.map_coeffs(z.coeffs.with_coeff(1, Complex64::new(0.5, 0.0)));
        let err = bad.validate().unwrap_err();
        assert!(err.to_string().contains("a(1)"), "{err}");
        let wrong = LFunctionData {
            claimed_conductor: Some(3),
            ..z
        };
        assert!(wrong.validate().is_err());
    }
}
