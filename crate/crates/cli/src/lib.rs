//! Command-line front end for `twistprod-core`.
//!
//! [`run`] parses arguments, generates or ingests coefficient data, runs the
//! requested checks and writes a text or JSON report. Exit codes: 0 when
//! every verdict passes, 1 when any fails, 2 on usage or input errors.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{CommandFactory, Parser};

use twistprod_core::{DoubleDouble, PrecisionMode};

use config::{Cli, Command, OutputFormat, RunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags or flag values.
    Usage(String),
    /// Unreadable, malformed or invalid input data.
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<twistprod_core::Error> for CliError {
    fn from(e: twistprod_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn usage_line(command: &str) -> String {
    let mut cli = Cli::command();
    cli.build();
    match cli.find_subcommand_mut(command) {
        Some(sub) => sub.render_usage().to_string(),
        None => cli.render_usage().to_string(),
    }
}

fn report_error(err: &mut dyn Write, command: &str, e: &CliError) -> i32 {
    let _ = writeln!(err, "error: {e}");
    if matches!(e, CliError::Usage(_)) {
        let _ = writeln!(err, "\n{}", usage_line(command));
    }
    EXIT_USAGE
}

fn emit(text: &str, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write report: {e}"))),
    }
}

fn run_command(command: &Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Command::Gen(_) = command {
        let text = commands::gen_text(cfg)?;
        emit(&text, cfg, out)?;
        return Ok(EXIT_PASS);
    }
    let report = match cfg.precision_mode {
        PrecisionMode::Double => commands::execute::<f64>(command, cfg)?,
        PrecisionMode::Extended => commands::execute::<DoubleDouble>(command, cfg)?,
    };
    let text = match cfg.output_format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Json => {
            let timestamp = cfg.timestamp.then(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map_or(0, |d| d.as_secs())
            });
            let json = report.to_json(cfg, timestamp);
            let mut s = serde_json::to_string_pretty(&json)
                .map_err(|e| CliError::Input(format!("cannot encode report: {e}")))?;
            s.push('\n');
            s
        }
    };
    emit(&text, cfg, out)?;
    Ok(report.exit_code())
}

/// Runs one invocation and returns its exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_PASS
            };
        }
    };
    let name = cli.command.name();
    let cfg = match RunConfig::from_args(cli.command.args()) {
        Ok(cfg) => cfg,
        Err(e) => return report_error(err, name, &e),
    };
    match run_command(&cli.command, &cfg, out) {
        Ok(code) => code,
        Err(e) => report_error(err, name, &e),
    }
}
