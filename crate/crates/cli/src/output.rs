//! Row types and deterministic CSV/JSON emission.
//!
//! Floats are written with Rust's shortest round-trip representation
//! (`{:?}`, which switches to exponent form for very small or large
//! magnitudes), so parsing a CSV cell gives back the exact `f64`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rabi_core::{CrossingEvent, SweepResult};
use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub axis1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2: Option<f64>,
    pub level: usize,
    pub energy: f64,
    pub energy_rel: f64,
    pub entropy: f64,
    pub n_trunc: usize,
}

/// One row per grid point and level, grid order first.
pub fn sweep_records(result: &SweepResult) -> Vec<SweepRecord> {
    let mut rows = Vec::with_capacity(result.points.len() * result.n_levels);
    for p in &result.points {
        let rel = p.relative_energies();
        for level in 1..=result.n_levels {
            rows.push(SweepRecord {
                axis1: p.coords[0],
                axis2: p.coords.get(1).copied(),
                level,
                energy: p.energies[level - 1],
                energy_rel: rel[level - 1],
                entropy: p.entropies[level - 1],
                n_trunc: p.n_trunc,
            });
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingRecord {
    /// Lower level of the gap.
    pub level: usize,
    pub locus: f64,
    pub min_gap: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
}

impl From<&CrossingEvent> for CrossingRecord {
    fn from(e: &CrossingEvent) -> Self {
        CrossingRecord {
            level: e.level_low,
            locus: e.locus,
            min_gap: e.min_gap,
            bracket_lo: e.bracket.0,
            bracket_hi: e.bracket.1,
        }
    }
}

pub fn render_sweep(rows: &[SweepRecord], two_d: bool, format: Format) -> Result<String> {
    match format {
        Format::Json => json(rows),
        Format::Csv => {
            let mut out = String::new();
            out.push_str(if two_d {
                "axis1,axis2,level,energy,energy_rel,entropy,n_trunc\n"
            } else {
                "axis1,level,energy,energy_rel,entropy,n_trunc\n"
            });
            for r in rows {
                let _ = write!(out, "{:?}", r.axis1);
                if let Some(a2) = r.axis2 {
                    let _ = write!(out, ",{a2:?}");
                }
                let _ = writeln!(
                    out,
                    ",{},{:?},{:?},{:?},{}",
                    r.level, r.energy, r.energy_rel, r.entropy, r.n_trunc
                );
            }
            Ok(out)
        }
    }
}

pub fn render_crossings(rows: &[CrossingRecord], format: Format) -> Result<String> {
    match format {
        Format::Json => json(rows),
        Format::Csv => {
            let mut out = String::from("level,locus,min_gap,bracket_lo,bracket_hi\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{:?},{:?},{:?},{:?}",
                    r.level, r.locus, r.min_gap, r.bracket_lo, r.bracket_hi
                );
            }
            Ok(out)
        }
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::config(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path` through a sibling temporary file and a rename, so an
/// interrupted run never leaves a partial file; `None` prints to stdout.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(contents.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::io("<stdout>", e));
    };
    let file_name = path.file_name().ok_or_else(|| {
        CliError::config(format!("output path `{}` has no file name", path.display()))
    })?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);

    let write = || -> std::io::Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}
