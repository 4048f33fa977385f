//! CSV time series and JSON verdict reports.
//!
//! Floating-point values are written with 17 significant digits so that a
//! given configuration and seed reproduce byte-identical files.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use helical_ns::data::DecaySample;
use helical_ns::verify::CheckReport;
use helical_ns::DiagnosticsRow;

use crate::error::CliError;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// `diagnostics.csv`: one row per recorded step. The perturbation block
/// appends its four columns when present.
pub fn write_diagnostics_csv(path: &Path, rows: &[DiagnosticsRow]) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path)?;
    let with_perturbation = rows.iter().any(|r| r.perturbation.is_some());
    let mut header =
        "t,E,H,Ec_plus,Ec_minus,c0_drift,Hhalf_plus,Hhalf_minus,div_residual".to_string();
    if with_perturbation {
        header.push_str(",h_l2,h_curl_l2,h_h1,constraint_res");
    }
    writeln!(file, "{header}")?;
    for r in rows {
        let mut line = [
            r.t,
            r.e,
            r.h,
            r.ec_plus,
            r.ec_minus,
            r.c0_drift,
            r.hhalf_plus,
            r.hhalf_minus,
            r.div_residual,
        ]
        .map(fmt)
        .join(",");
        if with_perturbation {
            let p = r.perturbation.as_ref().ok_or_else(|| {
                CliError::Validation("row without perturbation block in perturbation run".into())
            })?;
            line.push(',');
            line.push_str(
                &[p.h_l2, p.h_curl_l2, p.h_h1, p.constraint_res]
                    .map(fmt)
                    .join(","),
            );
        }
        writeln!(file, "{line}")?;
    }
    Ok(())
}

/// Decay sweep CSV: `r,g_abs,grad_g_abs,profile` with
/// `profile = (1 + r)(|g| + |grad g|)/A`.
pub fn write_decay_csv(path: &Path, samples: &[DecaySample]) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "r,g_abs,grad_g_abs,profile")?;
    for s in samples {
        writeln!(
            file,
            "{},{},{},{}",
            fmt(s.r),
            fmt(s.g_abs),
            fmt(s.grad_abs),
            fmt(s.profile)
        )?;
    }
    Ok(())
}

/// Verdict report written by `verify` (and `decay`).
#[derive(Debug, Serialize)]
pub struct VerdictReport {
    pub config_hash: String,
    pub code_version: String,
    pub wall_time_s: f64,
    /// Seed of the random verification fields, recorded for replay.
    pub seed: u64,
    /// Conjunction of the per-check passes.
    pub pass: bool,
    pub checks: Vec<CheckReport>,
}

impl VerdictReport {
    pub fn new(config_hash: String, seed: u64, wall_time_s: f64, checks: Vec<CheckReport>) -> Self {
        Self {
            config_hash,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s,
            seed,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
        std::fs::write(path, json)?;
        Ok(())
    }
}
