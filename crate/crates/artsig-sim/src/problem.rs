//! Loading a single constrained least-squares instance from a TOML file.
//!
//! Matrix and vector entries are complex literals in engineering notation,
//! for example `"1.5"`, `"-2j"`, `"0.25-1e-3j"`. Both `j` and `i` mark the
//! imaginary unit.
//!
//! ```toml
//! radius = 2.0
//! a = [["1", "0.5j"], ["0", "1"]]
//! target = ["3", "4-1j"]
//! ```

use artsig_core::{ComplexMatrix, Error, LsqiProblem, Result, DEFAULT_SOLVER_TOL};
use num_complex::Complex64;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    radius: f64,
    tol: Option<f64>,
    a: Vec<Vec<String>>,
    target: Vec<String>,
}

/// Reads and validates a problem file.
pub fn load_problem(path: &Path) -> Result<LsqiProblem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read problem {}: {e}", path.display())))?;
    let file: ProblemFile = toml::from_str(&text)
        .map_err(|e| Error::invalid(format!("problem {}: {e}", path.display())))?;

    let rows = file.a.len();
    if rows == 0 {
        return Err(Error::invalid("matrix a must have at least one row"));
    }
    let cols = file.a[0].len();
    if cols == 0 {
        return Err(Error::invalid("matrix a must have at least one column"));
    }
    if file.a.iter().any(|row| row.len() != cols) {
        return Err(Error::invalid("matrix a rows have inconsistent lengths"));
    }
    if file.target.len() != rows {
        return Err(Error::invalid(format!(
            "target length {} does not match matrix row count {rows}",
            file.target.len()
        )));
    }

    let mut a = ComplexMatrix::zeros(rows, cols);
    for (r, row) in file.a.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            a.set(r, c, parse_complex(cell)?);
        }
    }
    let target: Vec<Complex64> = file
        .target
        .iter()
        .map(|cell| parse_complex(cell))
        .collect::<Result<_>>()?;

    let mut problem = LsqiProblem::new(a, target, file.radius)?;
    if let Some(tol) = file.tol {
        problem.tol = tol;
        problem.validate()?;
    } else {
        problem.tol = DEFAULT_SOLVER_TOL;
    }
    Ok(problem)
}

/// Parses a complex literal such as `1`, `-2.5e-3`, `j`, `-1.5i`, `1+2j`,
/// or `2.5e1-3e-2j`. Whitespace around and inside the literal is ignored.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::invalid("empty complex literal"));
    }
    let bad = |()| Error::invalid(format!("cannot parse complex literal {text:?}"));

    let has_unit = compact.ends_with('j') || compact.ends_with('i');
    if !has_unit {
        return compact
            .parse::<f64>()
            .map(Complex64::from)
            .map_err(|_| bad(()));
    }

    let body = &compact[..compact.len() - 1];
    // Split at the last '+' or '-' that is not a leading sign and not part of
    // an exponent; everything before it is the real part.
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();

    let (real_text, imag_text) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let real = if real_text.is_empty() {
        0.0
    } else {
        real_text.parse::<f64>().map_err(|_| bad(()))?
    };
    let imag = match imag_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad(()))?,
    };
    Ok(Complex64::new(real, imag))
}
