//! The `LFUNC v1` text format.
//!
//! ```text
//! LFUNC v1
//! label E11
//! conductor 11
//! normalization analytic
//! localmodel hecke2 11
//! gamma Q=5.2785e-1 omega=1,0 pole_order=0
//! gfactor 1 0.5 0
//! coeffs 3
//! 1 1 0
//! 2 -1.4142135623730951e0 0
//! 3 -5.7735026918962584e-1 0
//! ```
//!
//! `gamma`, its `gfactor` lines and `localmodel` are optional. Values are
//! written with 17 significant digits so `f64` data round-trips exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::{LFunctionData, LocalModel};
use crate::error::{Error, Result};
use crate::invariants::GammaFactor;
use crate::series::CoeffSeries;

const MAGIC: &str = "LFUNC v1";

fn malformed(line: usize, message: impl Into<String>) -> Error {
    Error::MalformedFile {
        line,
        message: message.into(),
    }
}

fn parse_f64(line: usize, field: &str, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| malformed(line, format!("{field}: cannot parse '{s}' as a real number")))
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_lfunc(data: &LFunctionData<f64>) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "label {}", data.label).unwrap();
    match data.claimed_conductor {
        Some(q) => writeln!(out, "conductor {q}").unwrap(),
        None => writeln!(out, "conductor none").unwrap(),
    }
    writeln!(out, "normalization {}", data.normalization_note).unwrap();
    if let Some(LocalModel::Hecke2 { level }) = data.local_model {
        writeln!(out, "localmodel hecke2 {level}").unwrap();
    }
    if let Some(g) = &data.gamma {
        writeln!(
            out,
            "gamma Q={} omega={},{} pole_order={}",
            fmt_f64(g.q),
            fmt_f64(g.omega.re),
            fmt_f64(g.omega.im),
            g.pole_order
        )
        .unwrap();
        for &(lambda, mu) in &g.factors {
            writeln!(
                out,
                "gfactor {} {} {}",
                fmt_f64(lambda),
                fmt_f64(mu.re),
                fmt_f64(mu.im)
            )
            .unwrap();
        }
    }
    let coeffs = data.coeffs.coeffs();
    writeln!(out, "coeffs {}", coeffs.len()).unwrap();
    for (i, c) in coeffs.iter().enumerate() {
        writeln!(out, "{} {} {}", i + 1, fmt_f64(c.re), fmt_f64(c.im)).unwrap();
    }
    out
}

pub fn write_lfunc_file(data: &LFunctionData<f64>, path: &Path) -> Result<()> {
    std::fs::write(path, write_lfunc(data))?;
    Ok(())
}

pub fn read_lfunc(path: &Path) -> Result<LFunctionData<f64>> {
    parse_lfunc(&std::fs::read_to_string(path)?)
}

fn parse_gamma(line: usize, rest: &str) -> Result<GammaFactor> {
    let mut q = None;
    let mut omega = None;
    let mut pole_order = None;
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| malformed(line, format!("gamma: expected key=value, got '{field}'")))?;
        match key {
            "Q" => q = Some(parse_f64(line, "gamma Q", value)?),
            "omega" => {
                let (re, im) = value
                    .split_once(',')
                    .ok_or_else(|| malformed(line, "gamma omega: expected <re>,<im>"))?;
                omega = Some(Complex64::new(
                    parse_f64(line, "gamma omega", re)?,
                    parse_f64(line, "gamma omega", im)?,
                ));
            }
            "pole_order" => {
                pole_order = Some(value.parse::<u32>().map_err(|_| {
                    malformed(line, format!("gamma pole_order: cannot parse '{value}'"))
                })?)
            }
            other => return Err(malformed(line, format!("gamma: unknown key '{other}'"))),
        }
    }
    Ok(GammaFactor {
        q: q.ok_or_else(|| malformed(line, "gamma: missing Q"))?,
        factors: Vec::new(),
        omega: omega.ok_or_else(|| malformed(line, "gamma: missing omega"))?,
        pole_order: pole_order.ok_or_else(|| malformed(line, "gamma: missing pole_order"))?,
    })
}

/// Parses `LFUNC v1` text. Only the format is checked here; call
/// [`LFunctionData::validate`] for the mathematical invariants.
pub fn parse_lfunc(text: &str) -> Result<LFunctionData<f64>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let (_, first) = lines.next().ok_or_else(|| malformed(1, "empty file"))?;
    if first != MAGIC {
        if let Some(version) = first.strip_prefix("LFUNC ") {
            return Err(Error::VersionUnsupported(version.trim().to_string()));
        }
        return Err(malformed(1, format!("expected '{MAGIC}', got '{first}'")));
    }

    let mut label = None;
    let mut conductor: Option<Option<u64>> = None;
    let mut normalization = None;
    let mut local_model = None;
    let mut gamma: Option<GammaFactor> = None;
    let mut count = None;
    let mut last_line = 1;

    for (line, content) in lines.by_ref() {
        last_line = line;
        if content.trim().is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(' ').unwrap_or((content, ""));
        let rest = rest.trim();
        match key {
            "label" => label = Some(rest.to_string()),
            "normalization" => normalization = Some(rest.to_string()),
            "conductor" => {
                conductor = Some(if rest == "none" {
                    None
                } else {
                    Some(rest.parse::<u64>().ok().filter(|&q| q >= 1).ok_or_else(|| {
                        malformed(line, format!("conductor: expected a positive integer or 'none', got '{rest}'"))
                    })?)
                })
            }
            "localmodel" => {
                let mut parts = rest.split_whitespace();
                match (parts.next(), parts.next().map(str::parse::<u64>), parts.next()) {
                    (Some("hecke2"), Some(Ok(level)), None) if level >= 1 => {
                        local_model = Some(LocalModel::Hecke2 { level })
                    }
                    _ => return Err(malformed(line, format!("localmodel: unsupported '{rest}'"))),
                }
            }
            "gamma" => {
                if gamma.is_some() {
                    return Err(malformed(line, "gamma: given twice"));
                }
                gamma = Some(parse_gamma(line, rest)?);
            }
            "gfactor" => {
                let g = gamma
                    .as_mut()
                    .ok_or_else(|| malformed(line, "gfactor before gamma"))?;
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(malformed(line, "gfactor: expected <lambda> <mu_re> <mu_im>"));
                }
                g.factors.push((
                    parse_f64(line, "gfactor lambda", fields[0])?,
                    Complex64::new(
                        parse_f64(line, "gfactor mu_re", fields[1])?,
                        parse_f64(line, "gfactor mu_im", fields[2])?,
                    ),
                ));
            }
            "coeffs" => {
                let n = rest
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| malformed(line, format!("coeffs: expected a positive count, got '{rest}'")))?;
                count = Some((line, n));
                break;
            }
            other => return Err(malformed(line, format!("unknown header field '{other}'"))),
        }
    }

    let (coeffs_line, n) = count.ok_or_else(|| malformed(last_line, "missing 'coeffs' block"))?;
    let label = label.ok_or_else(|| malformed(coeffs_line, "missing 'label'"))?;
    let conductor = conductor.ok_or_else(|| malformed(coeffs_line, "missing 'conductor'"))?;
    let normalization =
        normalization.ok_or_else(|| malformed(coeffs_line, "missing 'normalization'"))?;

    let mut coeffs = Vec::with_capacity(n);
    for (line, content) in lines.by_ref() {
        if content.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(malformed(line, "coefficient: expected '<n> <re> <im>'"));
        }
        let idx = fields[0]
            .parse::<usize>()
            .map_err(|_| malformed(line, format!("coefficient index '{}' is not an integer", fields[0])))?;
        let expected = coeffs.len() + 1;
        if idx != expected {
            let what = if idx < expected { "duplicate or out-of-order" } else { "gap before" };
            return Err(malformed(line, format!("{what} index {idx}, expected {expected}")));
        }
        if expected > n {
            return Err(malformed(line, format!("more than the declared {n} coefficients")));
        }
        coeffs.push(Complex64::new(
            parse_f64(line, "coefficient re", fields[1])?,
            parse_f64(line, "coefficient im", fields[2])?,
        ));
    }
    if coeffs.len() != n {
        return Err(malformed(
            coeffs_line,
            format!("declared {n} coefficients, found {}", coeffs.len()),
        ));
    }
    let coeffs = CoeffSeries::new(coeffs).map_err(|e| malformed(coeffs_line, e.to_string()))?;
    Ok(LFunctionData {
        label,
        coeffs,
        gamma,
        claimed_conductor: conductor,
        normalization_note: normalization,
        local_model,
    })
}
