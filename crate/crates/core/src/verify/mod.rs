//! Coefficientwise verification of the twist identities, plus probes of the
//! local Euler factors recovered from coefficient data.

mod identities;
mod probes;
pub mod slow;

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::real::{cabs_f64, Real};
use crate::series::CoeffSeries;

pub use identities::{
    check_lemma2, check_orthogonality, lemma2_sides, local_term_direct, local_term_via_lemma2,
    local_term_via_orthogonality, orthogonality_sides, IdentitySides,
};
pub use probes::{
    check_theorem2_pair, check_theorem4_shape, probe_twist_regularity, probe_with_caps,
    reconstruct_local, ShapeRow, TwistRegularityProbe, DIVISIBILITY_TOL,
};

pub const LEMMA2_NAME: &str = "twist-decomposition";
pub const ORTHOGONALITY_NAME: &str = "orthogonality";
pub const PAIR_NAME: &str = "polynomial-pair";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_residual(residual: f64, tolerance: f64) -> Self {
        if residual <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub prime: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_prime: Option<u64>,
    pub m: Option<u32>,
    pub comparison_horizon: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    /// Index of the largest residual.
    pub worst_index: usize,
    pub details: Vec<String>,
}

/// Options shared by the identity checks.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CheckConfig {
    /// Relative tolerance factor; the precision mode's default when `None`.
    pub tol_factor: Option<f64>,
}

impl CheckConfig {
    pub fn with_factor(tol_factor: f64) -> Self {
        CheckConfig {
            tol_factor: Some(tol_factor),
        }
    }

    pub fn factor<T: Real>(&self) -> f64 {
        self.tol_factor.unwrap_or(T::MODE.identity_factor())
    }

    /// `factor * (1 + max_{n <= horizon} |a(n)|)`.
    pub fn tolerance<T: Real>(&self, series: &CoeffSeries<T>, horizon: usize) -> f64 {
        self.factor::<T>() * (1.0 + series.max_abs(horizon))
    }
}

/// `(max_{n <= horizon} |lhs(n) - rhs(n)|, argmax)`.
pub fn max_residual<T: Real>(lhs: &[Complex<T>], rhs: &[Complex<T>], horizon: usize) -> (f64, usize) {
    let mut worst = (0.0, 1);
    for (i, (&a, &b)) in lhs.iter().zip(rhs).take(horizon).enumerate() {
        let r = cabs_f64(a - b);
        if r > worst.0 || r.is_nan() {
            worst = (r, i + 1);
        }
    }
    worst
}

/// The power series `sum_k c_k X^k` with `X = p^{-s}` as a Dirichlet series
/// of length `len`.
pub fn embed_local<T: Real>(p: u64, coeffs: &[Complex<T>], len: usize) -> CoeffSeries<T> {
    let mut out = vec![Complex::zero(); len.max(1)];
    let mut q = 1usize;
    for &c in coeffs {
        if q > len {
            break;
        }
        out[q - 1] = c;
        match q.checked_mul(p as usize) {
            Some(next) => q = next,
            None => break,
        }
    }
    CoeffSeries::from_vec(out)
}
