//! CSV rendering: `#` metadata lines, a header row and one record per row.

use std::io::Write;

use pointrad_core::constants::CONSTANTS_VERSION;

use crate::config::{Mode, ScenarioConfig};
use crate::run::{Param, Row, Status};

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn parameter_column(cfg: &ScenarioConfig) -> &'static str {
    match (&cfg.mode, &cfg.sweep) {
        (Mode::Sweep, Some(s)) => s.parameter.column(),
        (Mode::Convergence, _) => "l_max",
        _ => "point",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// When false the wall-time column holds 0, making output reproducible byte for byte.
    pub timing: bool,
}

/// Writes the full CSV document for `rows`.
pub fn write_csv<W: Write>(out: W, cfg: &ScenarioConfig, rows: &[Row], opts: Options) -> std::io::Result<()> {
    let mut out = out;
    writeln!(out, "# tool: pointrad {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# config_sha256: {}", cfg.hash())?;
    writeln!(out, "# constants: {CONSTANTS_VERSION}")?;
    writeln!(out, "# mode: {}", serde_json::to_value(cfg.mode)?.as_str().unwrap_or("?"))?;
    writeln!(out, "# rel_tol: {}", float(cfg.quadrature.rel_tol))?;
    if rows.iter().any(|r| r.status != Status::Ok) {
        writeln!(out, "# status: partial (accuracy not met)")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "series",
        parameter_column(cfg),
        "value_w",
        "normalized",
        "reference_w",
        "ratio",
        "quad_error_w",
        "max_l",
        "wall_time_s",
        "status",
    ])?;
    for (i, r) in rows.iter().enumerate() {
        let param = match r.parameter {
            Param::Real(v) => float(v),
            Param::Order(l) => l.to_string(),
            Param::None => i.to_string(),
        };
        let wall = if opts.timing { r.wall_time } else { 0.0 };
        w.write_record([
            r.series.clone(),
            param,
            float(r.value),
            float(r.normalized),
            float(r.reference),
            float(r.ratio),
            float(r.error),
            r.max_l.to_string(),
            float(wall),
            r.status.as_str().to_string(),
        ])?;
    }
    w.flush()
}
