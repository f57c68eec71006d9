//! Channel file format.
//!
//! A JSON document with fields `dim`, `rho0`, `rho1` and optional `t`
//! (default 0.5). Each matrix is a list of rows, each row a list of
//! `[re, im]` pairs. Written numbers carry 17 significant digits so that
//! doubles round-trip exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::channel::{validate_density, BinaryChannel};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    dim: usize,
    rho0: Vec<Vec<[f64; 2]>>,
    rho1: Vec<Vec<[f64; 2]>>,
    t: Option<f64>,
}

pub fn parse_channel(text: &str) -> Result<BinaryChannel> {
    let file: ChannelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.dim == 0 {
        return Err(Error::Range {
            field: "dim".into(),
            value: 0.0,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    let rho0 = decode_matrix(file.dim, &file.rho0)
        .and_then(validate_density)
        .map_err(|e| e.in_field("rho0"))?;
    let rho1 = decode_matrix(file.dim, &file.rho1)
        .and_then(validate_density)
        .map_err(|e| e.in_field("rho1"))?;
    BinaryChannel::new(rho0, rho1, file.t.unwrap_or(BinaryChannel::DEFAULT_PRIOR))
}

pub fn load_channel(path: impl AsRef<Path>) -> Result<BinaryChannel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_channel(&text)
}

pub fn render_channel(channel: &BinaryChannel) -> String {
    let mut out = String::new();
    writeln!(out, "{{").unwrap();
    writeln!(out, "  \"dim\": {},", channel.dim()).unwrap();
    writeln!(out, "  \"t\": {},", format_number(channel.t())).unwrap();
    writeln!(
        out,
        "  \"rho0\": {},",
        render_matrix(channel.rho0().matrix(), 2)
    )
    .unwrap();
    writeln!(
        out,
        "  \"rho1\": {}",
        render_matrix(channel.rho1().matrix(), 2)
    )
    .unwrap();
    writeln!(out, "}}").unwrap();
    out
}

pub fn save_channel(channel: &BinaryChannel, path: impl AsRef<Path>) -> Result<()> {
    write_text(path, &render_channel(channel))
}

pub(crate) fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// 17 significant digits, valid as a JSON number.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Matrix as nested JSON rows of `[re, im]` pairs, rows indented by
/// `indent + 2` spaces.
pub fn render_matrix(m: &ComplexMatrix, indent: usize) -> String {
    let pad = " ".repeat(indent + 2);
    let rows: Vec<String> = (0..m.dim())
        .map(|i| {
            let cells: Vec<String> = m
                .row(i)
                .iter()
                .map(|z| format!("[{}, {}]", format_number(z.re), format_number(z.im)))
                .collect();
            format!("{pad}[{}]", cells.join(", "))
        })
        .collect();
    format!("[\n{}\n{}]", rows.join(",\n"), " ".repeat(indent))
}

fn decode_matrix(dim: usize, rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    if rows.len() != dim {
        return Err(Error::shape(
            format!("{dim} rows"),
            format!("{} rows", rows.len()),
        ));
    }
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    const VALID: &str = r#"{"dim": 2, "rho0": [[[0.6,0],[0,0]],[[0,0],[0.4,0]]],
                           "rho1": [[[0.3,0],[0,0]],[[0,0],[0.7,0]]]}"#;

    #[test]
    fn prior_defaults_to_half() {
        let ch = parse_channel(VALID).unwrap();
        assert_eq!(ch.t(), 0.5);
        assert_eq!(ch.dim(), 2);
    }

    #[test]
    fn prior_out_of_range() {
        let text = VALID.replacen("\"dim\": 2", "\"dim\": 2, \"t\": 1.5", 1);
        assert!(matches!(parse_channel(&text), Err(Error::Range { .. })));
    }

    #[test]
    fn non_hermitian_names_field() {
        let text = r#"{"dim": 2, "rho0": [[[0.5,0],[0.1,0]],[[0,0],[0.5,0]]],
                      "rho1": [[[0.3,0],[0,0]],[[0,0],[0.7,0]]]}"#;
        let err = parse_channel(text).unwrap_err();
        assert!(err.to_string().starts_with("rho0:"), "{err}");
        match err {
            Error::Field { field, source } => {
                assert_eq!(field, "rho0");
                assert!(matches!(*source, Error::NotHermitian { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_row_count() {
        let text = r#"{"dim": 3, "rho0": [[[1,0]]], "rho1": [[[1,0]]]}"#;
        assert!(matches!(parse_channel(text), Err(Error::Field { .. })));
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(parse_channel("{ dim: 2"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_channel(r#"{"dim": 2}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn missing_file() {
        let err = load_channel("/nonexistent/channel.json").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(format_number(0.5), "5.0000000000000000e-1");
        assert_eq!(format_number(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
