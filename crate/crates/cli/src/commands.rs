use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use twistprod_core::arith::{gcd, primes_up_to};
use twistprod_core::catalog::{
    gen_delta, gen_elliptic, gen_zeta_squared, read_lfunc, write_lfunc, EllipticCurve,
    LFunctionData,
};
use twistprod_core::characters::{additive_basis, linear_twist, twist};
use twistprod_core::invariants::{invariants, mult_order, natural_conductor, CONDUCTOR_GATE};
use twistprod_core::local::RAMANUJAN_SLACK;
use twistprod_core::real::{cabs_f64, to_c64, unit_root};
use twistprod_core::verify::{
    check_lemma2, check_orthogonality, check_theorem2_pair, check_theorem4_shape,
    probe_twist_regularity, CheckConfig, ShapeRow, TwistRegularityProbe, DIVISIBILITY_TOL,
    LEMMA2_NAME, ORTHOGONALITY_NAME, PAIR_NAME,
};
use twistprod_core::{Error, Real};

use crate::config::{Command, Generator, InputSource, RunConfig};
use crate::report::{DataSummary, Report, Row, Status};
use crate::CliError;

pub const SPLIT_NAME: &str = "split";
pub const EULER_NAME: &str = "euler-recovery";
pub const SHAPE_NAME: &str = "ramanujan-shape";
pub const CONDUCTOR_NAME: &str = "conductor";
pub const BASIS_NAME: &str = "basis-reconstruction";
pub const PARSEVAL_NAME: &str = "parseval";
pub const DECOMPOSITION_NAME: &str = "linear-twist-decomposition";

const SPLIT_FAILED: &str = "skipped: split check failed";

fn generate<T: Real>(g: &Generator, n: usize) -> Result<LFunctionData<T>, Error> {
    match g {
        Generator::Zeta2 => gen_zeta_squared(n),
        Generator::Delta => gen_delta(n),
        Generator::Elliptic { a } => {
            let curve = EllipticCurve::new(a[0], a[1], a[2], a[3], a[4])?;
            gen_elliptic(&curve, n)
        }
    }
}

/// Generated or ingested data, truncated to `--n-max` and validated.
pub fn load<T: Real>(cfg: &RunConfig) -> Result<LFunctionData<T>, CliError> {
    let data = match &cfg.input {
        InputSource::Generator(g) => generate::<T>(g, cfg.truncation())?,
        InputSource::File(path) => {
            let raw = read_lfunc(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let raw = match cfg.n_max {
                Some(n) if n < raw.coeffs.len() => raw.map_coeffs(raw.coeffs.truncated(n)),
                _ => raw,
            };
            raw.cast::<T>()
        }
    };
    data.validate()?;
    Ok(data)
}

/// LFUNC text for `gen`; always stored in double precision.
pub fn gen_text(cfg: &RunConfig) -> Result<String, CliError> {
    let data = load::<f64>(cfg)?;
    Ok(write_lfunc(&data))
}

fn summary<T: Real>(data: &LFunctionData<T>) -> DataSummary {
    DataSummary {
        label: data.label.clone(),
        conductor: data.conductor(),
        truncation: data.coeffs.len(),
        precision: T::MODE.as_str(),
    }
}

fn check_config(cfg: &RunConfig) -> CheckConfig {
    CheckConfig {
        tol_factor: cfg.tolerance,
    }
}

fn nonempty(primes: Vec<u64>) -> Result<Vec<u64>, CliError> {
    if primes.is_empty() {
        Err(CliError::Usage("the prime list is empty".into()))
    } else {
        Ok(primes)
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im.abs() <= 1e-12 * (1.0 + z.re.abs()) {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

fn fmt_poly(c: &[Complex64]) -> String {
    let parts: Vec<String> = c.iter().map(|&z| fmt_complex(z)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn execute<T: Real>(command: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    let data = load::<T>(cfg)?;
    let mut report = Report::new(command.name(), summary(&data));
    match command {
        Command::Gen(_) => unreachable!("gen is handled before dispatch"),
        Command::Invariants(_) => cmd_invariants(&data, cfg, &mut report)?,
        Command::CheckSplit(_) => {
            let check = check_config(cfg);
            for p in nonempty(cfg.prime_list(data.conductor()))? {
                report.rows.push(split_row(&data, p, &check));
            }
        }
        Command::Twist(_) => cmd_twist(&data, cfg, &mut report)?,
        Command::CheckLemma2(_) => {
            let check = check_config(cfg);
            let ms = cfg.m_values.clone().unwrap_or_else(|| vec![1, 2]);
            for p in nonempty(cfg.prime_list(data.conductor()))? {
                for &m in &ms {
                    report.rows.push(lemma2_row(&data, p, m, &check));
                }
            }
        }
        Command::CheckOrthogonality(_) => {
            let check = check_config(cfg);
            for p in nonempty(cfg.prime_list(data.conductor()))? {
                report.rows.push(orthogonality_row(&data, p, &check));
            }
        }
        Command::RecoverEuler(_) => {
            let q = data.conductor_or_err()?;
            for p in nonempty(cfg.prime_list(Some(q)))? {
                report.rows.push(euler_row(&data, p));
            }
        }
        Command::CheckTheorem2(_) => cmd_theorem2(&data, cfg, &mut report)?,
        Command::CheckRamanujan(_) => cmd_ramanujan(&data, cfg, &mut report)?,
        Command::ReportAll(_) => cmd_report_all(&data, cfg, &mut report)?,
    }
    Ok(report)
}

pub fn split_row<T: Real>(data: &LFunctionData<T>, p: u64, check: &CheckConfig) -> Row {
    let len = data.coeffs.len();
    let tol = check.tolerance(&data.coeffs, len);
    let split = data.coeffs.split_check_with_tol(p, tol);
    let mut row = Row::new(SPLIT_NAME, Some(p), None, Status::from_bool(split.holds))
        .with_residual(split.worst_deviation, tol)
        .with_result(&split);
    row.comparison_horizon = Some(len);
    row.worst_index = Some(split.worst_index);
    if !split.holds {
        row.details
            .push(format!("a(p^l k) != a(p^l) a(k) at n = {}", split.worst_index));
    }
    row
}

fn lemma2_row<T: Real>(data: &LFunctionData<T>, p: u64, m: u32, check: &CheckConfig) -> Row {
    match check_lemma2(data, p, m, check) {
        Ok(r) => Row::from_identity(&r),
        Err(e) => Row::failed(LEMMA2_NAME, Some(p), Some(m), e.to_string()),
    }
}

fn orthogonality_row<T: Real>(data: &LFunctionData<T>, p: u64, check: &CheckConfig) -> Row {
    match check_orthogonality(data, p, check) {
        Ok(r) => Row::from_identity(&r),
        Err(e) => Row::failed(ORTHOGONALITY_NAME, Some(p), None, e.to_string()),
    }
}

fn probe_row(probe: &TwistRegularityProbe) -> Row {
    let mut row = Row::new(EULER_NAME, Some(probe.prime), None, Status::from_bool(probe.passed()))
        .with_result(probe);
    if let Some(norm) = probe.remainder_norm {
        row = row.with_residual(norm, DIVISIBILITY_TOL);
    }
    match (&probe.reconstructed, &probe.failure) {
        (Some(fit), _) => {
            row.details.push(format!(
                "m = {}, N = {}, D = {}",
                probe.m,
                fmt_poly(&fit.numerator),
                fmt_poly(&fit.denominator)
            ));
            if !probe.numerator_degree_ok {
                row.details.push(format!(
                    "numerator degree {} exceeds m - 1 = {}",
                    fit.numerator_degree(),
                    probe.m - 1
                ));
            }
            if !probe.divides_w {
                row.details.push("numerator does not divide W".into());
            }
        }
        (None, Some(msg)) => row.details.push(msg.clone()),
        (None, None) => row.details.push("no rational fit".into()),
    }
    row
}

fn euler_row<T: Real>(data: &LFunctionData<T>, p: u64) -> Row {
    match probe_twist_regularity(data, p) {
        Ok(probe) => probe_row(&probe),
        Err(Error::NotCoprime { q, .. }) => {
            Row::skipped(EULER_NAME, p, None, format!("skipped: {p} divides the conductor {q}"))
        }
        Err(Error::MissingConductor) => {
            Row::skipped(EULER_NAME, p, None, "skipped: conductor unknown")
        }
        Err(e) => Row::failed(EULER_NAME, Some(p), None, e.to_string()),
    }
}

fn shape_row(row: &ShapeRow) -> Row {
    let mut out = Row::new(SHAPE_NAME, Some(row.prime), None, Status::from_bool(row.ok))
        .with_result(row);
    match (row.abs_alpha, row.abs_beta) {
        (Some(a), Some(b)) => {
            out = out
                .with_residual(a.max(b), 1.0 + RAMANUJAN_SLACK)
                .with_detail(format!("|alpha| = {a:.12}, |beta| = {b:.12}"));
        }
        _ => {
            out.details
                .push(row.error.clone().unwrap_or_else(|| "no roots".into()));
        }
    }
    out
}

fn cmd_invariants<T: Real>(
    data: &LFunctionData<T>,
    cfg: &RunConfig,
    report: &mut Report,
) -> Result<(), CliError> {
    let gamma = data
        .gamma
        .as_ref()
        .ok_or_else(|| CliError::Input(format!("{} has no gamma factor", data.label)))?;
    let inv = invariants(gamma);
    report.preamble.extend([
        format!("degree       {}", inv.degree),
        format!("conductor    {:.12}", inv.conductor),
        format!("root number  {}", fmt_complex(inv.root_number)),
        format!("xi           {}", fmt_complex(inv.xi)),
        format!("eta          {}", inv.eta),
        format!("theta        {}", inv.theta),
        format!("omega*       {}", fmt_complex(inv.omega_star)),
        format!("tau          {}", inv.tau),
    ]);
    report.extra.insert("invariants".into(), json!(inv));
    report.extra.insert("gamma".into(), json!(gamma));

    let natural = natural_conductor(&inv);
    let deviation = (inv.conductor - inv.conductor.round()).abs();
    let mut row = Row::new(CONDUCTOR_NAME, None, None, Status::from_bool(natural.is_some()))
        .with_residual(deviation, CONDUCTOR_GATE);
    match (natural, data.claimed_conductor) {
        (Some(q), Some(c)) if q != c => {
            row.status = Status::Fail;
            row.details.push(format!("computed {q}, claimed {c}"));
        }
        (Some(q), _) => row.details.push(format!("q_F = {q}")),
        (None, _) => row
            .details
            .push(format!("{} is not a natural number", inv.conductor)),
    }
    report.rows.push(row);

    if let (Some(primes), Some(q)) = (&cfg.primes, natural) {
        for &p in primes {
            let row = match mult_order(p, q) {
                Ok(k) => Row::new("multiplicative-order", Some(p), None, Status::Pass)
                    .with_detail(format!("m_{q}({p}) = {k}")),
                Err(e) => Row::skipped("multiplicative-order", p, None, format!("skipped: {e}")),
            };
            report.rows.push(row);
        }
    }
    Ok(())
}

fn cmd_twist<T: Real>(
    data: &LFunctionData<T>,
    cfg: &RunConfig,
    report: &mut Report,
) -> Result<(), CliError> {
    let p = cfg
        .single_prime
        .ok_or_else(|| CliError::Usage("twist requires --prime".into()))?;
    let r = cfg.m_values.as_ref().map_or(1, |ms| ms[0]);
    let basis = additive_basis::<T>(p, r)?;
    let q = basis.modulus();
    let factor = check_config(cfg).factor::<T>();

    let mut listing = Vec::new();
    report.preamble.push(format!(
        "characters mod {q}: {:>4} {:>9} {:>6}  c(chi)",
        "#", "conductor", "order"
    ));
    for (i, (chi, c)) in basis.iter().enumerate() {
        let c = to_c64(c);
        report.preamble.push(format!(
            "{:>20}{:>4} {:>9} {:>6}  {}",
            "",
            i,
            chi.conductor(),
            chi.order(),
            fmt_complex(c)
        ));
        listing.push(json!({
            "index": i,
            "conductor": chi.conductor(),
            "order": chi.order(),
            "principal": chi.is_principal(),
            "primitive": chi.is_primitive(),
            "coefficient": [c.re, c.im],
        }));
    }
    report.extra.insert("modulus".into(), json!(q));
    report.extra.insert("characters".into(), Value::Array(listing));

    let mut worst = (0.0f64, 1u64);
    for n in (1..=q).filter(|&n| gcd(n, q) == 1) {
        let d = cabs_f64(basis.reconstruct(n) - unit_root::<T>(-(n as i128), q));
        if d > worst.0 {
            worst = (d, n);
        }
    }
    let mut row = Row::new(BASIS_NAME, Some(p), Some(r), Status::from_bool(worst.0 <= factor))
        .with_residual(worst.0, factor);
    row.comparison_horizon = Some(q as usize);
    row.worst_index = Some(worst.1 as usize);
    report.rows.push(row);

    let parseval = (basis.parseval().to_f64() - 1.0).abs();
    report.rows.push(
        Row::new(PARSEVAL_NAME, Some(p), Some(r), Status::from_bool(parseval <= factor))
            .with_residual(parseval, factor),
    );

    let series = &data.coeffs;
    let lhs = linear_twist(series, 1, q)?;
    let mut rhs = series.scale(num_complex::Complex::new(T::zero(), T::zero()));
    for (chi, c) in basis.iter() {
        rhs.add_scaled(c, &twist(series, chi));
    }
    let len = series.len();
    let tol = check_config(cfg).tolerance(series, len);
    let mut worst = (0.0f64, 1usize);
    for n in (1..=len).filter(|&n| !(n as u64).is_multiple_of(p)) {
        let d = cabs_f64(lhs.coeff(n) - rhs.coeff(n));
        if d > worst.0 {
            worst = (d, n);
        }
    }
    let mut row = Row::new(DECOMPOSITION_NAME, Some(p), Some(r), Status::from_bool(worst.0 <= tol))
        .with_residual(worst.0, tol)
        .with_detail("indices coprime to p");
    row.comparison_horizon = Some(len);
    row.worst_index = Some(worst.1);
    report.rows.push(row);
    Ok(())
}

fn cmd_theorem2<T: Real>(
    data: &LFunctionData<T>,
    cfg: &RunConfig,
    report: &mut Report,
) -> Result<(), CliError> {
    let q = data.conductor_or_err()?;
    let pairs: Vec<(u64, u64)> = match (cfg.single_prime, &cfg.primes) {
        (Some(p), _) => {
            let bound = cfg.p_max.unwrap_or(crate::config::DEFAULT_PRIME_BOUND);
            primes_up_to(bound)
                .into_iter()
                .filter(|&r| r != p && q % r != 0 && r % q == p % q)
                .map(|r| (p.min(r), p.max(r)))
                .collect()
        }
        _ => {
            let primes = cfg.prime_list(Some(q));
            let primes: Vec<u64> = primes.into_iter().filter(|&r| q % r != 0).collect();
            let mut pairs = Vec::new();
            for (i, &a) in primes.iter().enumerate() {
                for &b in &primes[i + 1..] {
                    if a % q == b % q {
                        pairs.push((a, b));
                    }
                }
            }
            pairs
        }
    };
    if pairs.is_empty() {
        return Err(CliError::Usage(format!(
            "no pair of distinct primes congruent modulo {q} in the range"
        )));
    }
    for (a, b) in pairs {
        let row = match check_theorem2_pair(data, a, b) {
            Ok(r) => Row::from_identity(&r),
            Err(e) => {
                let mut row = Row::failed(PAIR_NAME, Some(a), None, e.to_string());
                row.second_prime = Some(b);
                row
            }
        };
        report.rows.push(row);
    }
    Ok(())
}

fn cmd_ramanujan<T: Real>(
    data: &LFunctionData<T>,
    cfg: &RunConfig,
    report: &mut Report,
) -> Result<(), CliError> {
    let p_max = cfg
        .p_max
        .or_else(|| cfg.primes.as_ref().and_then(|ps| ps.last().copied()))
        .unwrap_or(crate::config::DEFAULT_PRIME_BOUND);
    let rows = check_theorem4_shape(data, p_max)?;
    let rows: Vec<ShapeRow> = match &cfg.primes {
        Some(ps) => rows.into_iter().filter(|r| ps.contains(&r.prime)).collect(),
        None => rows,
    };
    if rows.is_empty() {
        return Err(CliError::Usage("the prime list is empty".into()));
    }
    let roots: Vec<Value> = rows
        .iter()
        .map(|r| json!([r.prime, r.abs_alpha, r.abs_beta]))
        .collect();
    report.extra.insert("roots".into(), Value::Array(roots));
    report.rows.extend(rows.iter().map(shape_row));
    Ok(())
}

fn cmd_report_all<T: Real>(
    data: &LFunctionData<T>,
    cfg: &RunConfig,
    report: &mut Report,
) -> Result<(), CliError> {
    let check = check_config(cfg);
    let conductor = data.conductor();
    let primes = nonempty(cfg.prime_list(conductor))?;
    let shapes: BTreeMap<u64, ShapeRow> = match conductor {
        Some(_) => {
            let p_max = primes.iter().copied().max().unwrap_or(2);
            check_theorem4_shape(data, p_max)?
                .into_iter()
                .map(|r| (r.prime, r))
                .collect()
        }
        None => BTreeMap::new(),
    };

    for p in primes {
        let split = split_row(data, p, &check);
        let split_ok = split.status == Status::Pass;
        report.rows.push(split);
        let order = conductor.and_then(|q| mult_order(p, q).ok());
        let ms: Vec<u32> = match order {
            Some(k) => (1..=k.min(2) as u32).collect(),
            None => vec![1, 2],
        };
        if !split_ok {
            for &m in &ms {
                report.rows.push(Row::skipped(LEMMA2_NAME, p, Some(m), SPLIT_FAILED));
            }
            for name in [ORTHOGONALITY_NAME, EULER_NAME, SHAPE_NAME] {
                report.rows.push(Row::skipped(name, p, None, SPLIT_FAILED));
            }
            continue;
        }
        for &m in &ms {
            report.rows.push(lemma2_row(data, p, m, &check));
        }
        report.rows.push(orthogonality_row(data, p, &check));
        report.rows.push(euler_row(data, p));
        let shape = match (conductor, shapes.get(&p)) {
            (_, Some(row)) => shape_row(row),
            (None, None) => Row::skipped(SHAPE_NAME, p, None, "skipped: conductor unknown"),
            (Some(q), None) => {
                Row::skipped(SHAPE_NAME, p, None, format!("skipped: {p} divides the conductor {q}"))
            }
        };
        report.rows.push(shape);
    }
    Ok(())
}
