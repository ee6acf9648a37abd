//! Plain-text state files.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! dims 2 2
//! (0.5, 0) (0, 0) (0, 0) (0.5, 0)
//! ...one line per matrix row...
//! ```

use std::fmt::Write as _;
use std::path::Path;

use discord_core::{ComplexMatrix, DensityMatrix, C64};

use crate::error::CliError;

pub fn read(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<DensityMatrix, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty());

    let (header_line, header) = lines.next().ok_or(CliError::Parse {
        line: 1,
        message: "empty state file; expected 'dims <m> <n>'".into(),
    })?;
    let (m, n) = parse_dims(header_line, header)?;
    let dim = m * n;

    let mut data = Vec::with_capacity(dim * dim);
    let mut rows = 0;
    for (line_no, line) in lines {
        if rows == dim {
            return Err(CliError::Parse {
                line: line_no,
                message: format!("unexpected extra row; the matrix has {dim} rows"),
            });
        }
        let entries = parse_row(line_no, line)?;
        if entries.len() != dim {
            return Err(CliError::Parse {
                line: line_no,
                message: format!("expected {dim} entries, found {}", entries.len()),
            });
        }
        data.extend(entries);
        rows += 1;
    }
    if rows != dim {
        return Err(CliError::Parse {
            line: text.lines().count().max(1),
            message: format!("expected {dim} rows, found {rows}"),
        });
    }
    let matrix = ComplexMatrix::from_row_major(dim, data)?;
    Ok(DensityMatrix::bipartite(matrix, m, n)?)
}

fn parse_dims(line_no: usize, line: &str) -> Result<(usize, usize), CliError> {
    let err = |message: String| CliError::Parse {
        line: line_no,
        message,
    };
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields.as_slice() {
        ["dims", m, n] => {
            let parse = |s: &str| {
                s.parse::<usize>()
                    .ok()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| err(format!("dimension '{s}' is not a positive integer")))
            };
            Ok((parse(m)?, parse(n)?))
        }
        _ => Err(err(format!("expected 'dims <m> <n>', found '{line}'"))),
    }
}

fn parse_row(line_no: usize, line: &str) -> Result<Vec<C64>, CliError> {
    let err = |message: String| CliError::Parse {
        line: line_no,
        message,
    };
    let mut entries = Vec::new();
    let mut rest = line.trim_start();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| err(format!("expected '(' at '{rest}'")))?;
        let close = body
            .find(')')
            .ok_or_else(|| err("unterminated '(' entry".into()))?;
        let (re, im) = body[..close].split_once(',').ok_or_else(|| {
            err(format!(
                "entry '({})' needs a real and an imaginary part",
                &body[..close]
            ))
        })?;
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| err(format!("'{}' is not a number", s.trim())))
        };
        entries.push(C64::new(number(re)?, number(im)?));
        rest = body[close + 1..].trim_start();
    }
    Ok(entries)
}

/// Serializes a bipartite state so that [`parse`] reads it back exactly.
pub fn render(rho: &DensityMatrix, header: &str) -> String {
    let split = rho.split().expect("bipartite state");
    let dim = rho.dim();
    let mut out = String::new();
    for line in header.lines() {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "dims {} {}", split.m, split.n);
    for r in 0..dim {
        let row: Vec<String> = (0..dim)
            .map(|c| {
                let z = rho.matrix()[(r, c)];
                format!("({}, {})", z.re + 0.0, z.im + 0.0)
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
