//! CSV serialization of sweep results.
//!
//! The column set and formatting are fixed so downstream plotting scripts can
//! rely on them: floats carry nine significant digits, non-finite values are
//! written as `NaN` and `inf`, and rows appear in the runner's canonical
//! order. Two runs with the same config produce byte-identical files.

use crate::sweep::{SweepResult, SweepRow};
use artsig_core::{Error, Result};
use std::path::Path;

pub const CSV_HEADER: &str = "scheme,receiver,n,phi,snr_db,trials,evm_db,ber,capacity_bob,\
capacity_eve,secrecy,mean_radiated_power,mean_solver_iterations";

/// Renders a whole sweep as CSV text with a trailing newline.
pub fn format_csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(64 + result.rows.len() * 160);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        format_row(&mut out, row);
        out.push('\n');
    }
    out
}

fn format_row(out: &mut String, row: &SweepRow) {
    use std::fmt::Write;
    write!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        row.scheme.name(),
        row.receiver.name(),
        row.n,
        fmt_float(row.phi),
        fmt_float(row.snr_db),
        row.trials,
        fmt_float(row.evm_db),
        fmt_float(row.ber),
        fmt_float(row.capacity_bob),
        fmt_float(row.capacity_eve),
        fmt_float(row.secrecy),
        fmt_float(row.mean_radiated_power),
        fmt_float(row.mean_solver_iterations),
    )
    .expect("writing to a String cannot fail");
}

/// Nine significant digits; special values spelled so `str::parse::<f64>`
/// round-trips them.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        format!("{x:.8e}")
    }
}

/// Writes the sweep to a file, creating parent directories as needed.
pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Error::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, format_csv(result))
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}
