use num_complex::Complex64;
use serde::Serialize;

use super::{IdentityReport, Verdict, PAIR_NAME};
use crate::arith::{is_prime, primes_up_to};
use crate::catalog::LFunctionData;
use crate::error::{Error, Result};
use crate::invariants::mult_order;
use crate::local::{
    divides, quadratic_roots_check, rational_reconstruct, w_polynomial, RationalLocalFactor,
    ABSOLUTE_DEGREE_CAP, DEFAULT_DEN_CAP,
};
use crate::real::Real;

/// Remainder bound for `N_p | W_{m,p}`.
pub const DIVISIBILITY_TOL: f64 = 1e-8;

/// Result of recovering `F_p = N_p / D_p` and testing its numerator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistRegularityProbe {
    pub prime: u64,
    /// `m_{q_F}(p)`.
    pub m: u64,
    pub numerator_cap: usize,
    pub denominator_cap: usize,
    pub reconstructed: Option<RationalLocalFactor>,
    /// `deg N_p <= m - 1`.
    pub numerator_degree_ok: bool,
    pub divides_w: bool,
    pub remainder_norm: Option<f64>,
    /// `N_p` constant.
    pub polynomial_type: bool,
    pub failure: Option<String>,
}

impl TwistRegularityProbe {
    pub fn passed(&self) -> bool {
        self.reconstructed.is_some() && self.numerator_degree_ok && self.divides_w
    }
}

/// Reconstructs `F_p` with the given caps, extending the local data through
/// the data's local model when the truncation is too short.
pub fn reconstruct_local<T: Real>(
    data: &LFunctionData<T>,
    p: u64,
    max_num: usize,
    max_den: usize,
) -> Result<RationalLocalFactor> {
    let local = data.local_factor(p, max_num + max_den + 2)?;
    rational_reconstruct(&local, max_num, max_den)
}

fn require_split<T: Real>(data: &LFunctionData<T>, p: u64) -> Result<()> {
    let split = data.coeffs.split_check(p);
    if !split.holds {
        return Err(Error::NotSplit {
            prime: p,
            index: split.worst_index,
            deviation: split.worst_deviation,
        });
    }
    Ok(())
}

pub fn probe_twist_regularity<T: Real>(
    data: &LFunctionData<T>,
    p: u64,
) -> Result<TwistRegularityProbe> {
    probe_with_caps(data, p, None, DEFAULT_DEN_CAP)
}

/// Probe with an explicit numerator cap (default `m - 1`). Caps are clamped
/// to [`ABSOLUTE_DEGREE_CAP`]; `numerator_degree_ok` always refers to `m - 1`.
pub fn probe_with_caps<T: Real>(
    data: &LFunctionData<T>,
    p: u64,
    max_num: Option<usize>,
    max_den: usize,
) -> Result<TwistRegularityProbe> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = data.conductor_or_err()?;
    if q % p == 0 {
        return Err(Error::NotCoprime { p, q });
    }
    require_split(data, p)?;
    let m = mult_order(p, q)?;
    let num_cap = max_num
        .unwrap_or(m as usize - 1)
        .min(ABSOLUTE_DEGREE_CAP);
    let den_cap = max_den.min(ABSOLUTE_DEGREE_CAP);

    let mut probe = TwistRegularityProbe {
        prime: p,
        m,
        numerator_cap: num_cap,
        denominator_cap: den_cap,
        reconstructed: None,
        numerator_degree_ok: false,
        divides_w: false,
        remainder_norm: None,
        polynomial_type: false,
        failure: None,
    };
    let fit = match reconstruct_local(data, p, num_cap, den_cap) {
        Ok(fit) => fit,
        Err(e @ Error::NoRationalFit { .. }) => {
            probe.failure = Some(e.to_string());
            return Ok(probe);
        }
        Err(e) => return Err(e),
    };
    let local = data.local_factor(p, m as usize - 1)?;
    let w = w_polynomial(&local, m as u32)?;
    let div = divides(&fit.numerator, &w, DIVISIBILITY_TOL)?;
    probe.numerator_degree_ok = fit.numerator_degree() < m as usize;
    probe.divides_w = div.divides;
    probe.remainder_norm = Some(div.remainder_norm);
    probe.polynomial_type = fit.is_polynomial_type();
    probe.reconstructed = Some(fit);
    Ok(probe)
}

/// For two primes congruent modulo `q_F`, both local inverses should be
/// polynomials. `max_residual` is the largest non-constant numerator
/// coefficient over the pair (infinite when a fit is missing).
pub fn check_theorem2_pair<T: Real>(
    data: &LFunctionData<T>,
    p: u64,
    q: u64,
) -> Result<IdentityReport> {
    for r in [p, q] {
        if !is_prime(r) {
            return Err(Error::NotPrime(r));
        }
    }
    if p == q {
        return Err(Error::InvalidArgument(format!("the primes must be distinct, got {p} twice")));
    }
    let modulus = data.conductor_or_err()?;
    for r in [p, q] {
        if modulus % r == 0 {
            return Err(Error::NotCoprime { p: r, q: modulus });
        }
    }
    if p % modulus != q % modulus {
        return Err(Error::CongruenceViolation { p, q, modulus });
    }
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    let mut all_polynomial = true;
    for r in [p, q] {
        let probe = probe_twist_regularity(data, r)?;
        match &probe.reconstructed {
            Some(fit) => {
                let tail = fit
                    .numerator
                    .iter()
                    .skip(1)
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                worst = worst.max(tail);
                details.push(format!(
                    "p = {r}: m = {}, deg N = {}, deg D = {}, polynomial: {}",
                    probe.m,
                    fit.numerator_degree(),
                    fit.denominator_degree(),
                    probe.polynomial_type
                ));
            }
            None => {
                worst = f64::INFINITY;
                details.push(format!(
                    "p = {r}: {}",
                    probe.failure.as_deref().unwrap_or("no rational fit")
                ));
            }
        }
        all_polynomial &= probe.polynomial_type;
    }
    let tolerance = crate::local::FIT_TOLERANCE;
    let mut verdict = Verdict::from_residual(worst, tolerance);
    if !all_polynomial {
        verdict = Verdict::Fail;
    }
    Ok(IdentityReport {
        identity_name: PAIR_NAME.to_string(),
        prime: p,
        second_prime: Some(q),
        m: None,
        comparison_horizon: data.coeffs.len(),
        max_residual: worst,
        tolerance,
        verdict,
        worst_index: 1,
        details,
    })
}

/// Per-prime outcome of the quadratic shape test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeRow {
    pub prime: u64,
    pub alpha: Option<Complex64>,
    pub beta: Option<Complex64>,
    pub abs_alpha: Option<f64>,
    pub abs_beta: Option<f64>,
    pub ok: bool,
    pub error: Option<String>,
}

/// For every good prime `p <= p_max`, recovers `F_p` and tests
/// `F_p = (1 - alpha p^{-s})^{-1} (1 - beta p^{-s})^{-1}` with
/// `|alpha|, |beta| <= 1`. Per-prime failures are collected in the rows.
pub fn check_theorem4_shape<T: Real>(data: &LFunctionData<T>, p_max: u64) -> Result<Vec<ShapeRow>> {
    let q = data.conductor_or_err()?;
    let mut rows = Vec::new();
    for p in primes_up_to(p_max).into_iter().filter(|&p| q % p != 0) {
        let mut row = ShapeRow {
            prime: p,
            alpha: None,
            beta: None,
            abs_alpha: None,
            abs_beta: None,
            ok: false,
            error: None,
        };
        let outcome = probe_twist_regularity(data, p).and_then(|probe| match probe.reconstructed {
            Some(fit) => quadratic_roots_check(&fit),
            None => Err(Error::WrongShape(
                probe.failure.unwrap_or_else(|| "no rational fit".into()),
            )),
        });
        match outcome {
            Ok(roots) => {
                row.alpha = Some(roots.alpha);
                row.beta = Some(roots.beta);
                row.abs_alpha = Some(roots.alpha.norm());
                row.abs_beta = Some(roots.beta.norm());
                row.ok = roots.ramanujan_ok;
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        rows.push(row);
    }
    Ok(rows)
}
