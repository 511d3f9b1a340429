//! Reading and writing a single curve as CSV or JSON lines.
//!
//! One vertex per line. CSV rows are comma-separated coordinates, JSON lines
//! are arrays of numbers. A blank line ends the curve; anything after it is a
//! second curve and is rejected.

use std::fmt::Write as _;
use std::path::Path;

use subtraj_core::{Point, PolygonalCurve};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    #[value(name = "json-lines")]
    JsonLines,
}

impl Format {
    /// `.jsonl` / `.ndjson` / `.json` read as JSON lines, everything else as CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("jsonl" | "ndjson" | "json") => Format::JsonLines,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: expected {expected} coordinates, found {found}")]
    DimensionMismatch { line: usize, expected: usize, found: usize },
    #[error("line {line}: non-finite coordinate")]
    NonFinite { line: usize },
    #[error(
        "line {line}: input holds more than one curve; join them into a single curve \
         (append the vertices of each curve after the previous one, without blank lines)"
    )]
    MultipleCurves { line: usize },
    #[error("a curve needs at least 2 distinct consecutive vertices, got {0}")]
    TooFewVertices(usize),
}

pub fn ingest(path: &Path, format: Format) -> Result<PolygonalCurve, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text, format)
}

fn parse_csv_row(line: &str, n: usize) -> Result<Vec<f64>, IngestError> {
    line.split(',')
        .map(|f| {
            f.trim().parse::<f64>().map_err(|e| IngestError::Parse {
                line: n,
                msg: format!("{:?} is not a number ({e})", f.trim()),
            })
        })
        .collect()
}

fn parse_json_row(line: &str, n: usize) -> Result<Vec<f64>, IngestError> {
    let v: serde_json::Value = serde_json::from_str(line).map_err(|e| IngestError::Parse {
        line: n,
        msg: e.to_string(),
    })?;
    let arr = v.as_array().ok_or_else(|| IngestError::Parse {
        line: n,
        msg: "expected an array of numbers".into(),
    })?;
    arr.iter()
        .map(|x| {
            x.as_f64().ok_or_else(|| IngestError::Parse {
                line: n,
                msg: format!("{x} is not a number"),
            })
        })
        .collect()
}

/// A first CSV row made only of non-numeric fields is a header.
fn is_header(line: &str) -> bool {
    line.split(',').all(|f| {
        let f = f.trim();
        !f.is_empty() && f.parse::<f64>().is_err()
    })
}

pub fn parse(text: &str, format: Format) -> Result<PolygonalCurve, IngestError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut ended = false;
    let mut header_seen = false;
    for (k, raw) in text.lines().enumerate() {
        let n = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            ended |= !rows.is_empty();
            continue;
        }
        if ended {
            return Err(IngestError::MultipleCurves { line: n });
        }
        if format == Format::Csv && rows.is_empty() && !header_seen && is_header(line) {
            header_seen = true;
            continue;
        }
        let row = match format {
            Format::Csv => parse_csv_row(line, n)?,
            Format::JsonLines => parse_json_row(line, n)?,
        };
        if row.iter().any(|x| !x.is_finite()) {
            return Err(IngestError::NonFinite { line: n });
        }
        let expected = rows.first().map_or(row.len(), Vec::len);
        if row.len() != expected || row.is_empty() {
            return Err(IngestError::DimensionMismatch {
                line: n,
                expected,
                found: row.len(),
            });
        }
        if rows.last() == Some(&row) {
            log::warn!("line {n}: duplicate of the previous vertex, collapsed");
            continue;
        }
        rows.push(row);
    }
    if rows.len() < 2 {
        return Err(IngestError::TooFewVertices(rows.len()));
    }
    PolygonalCurve::new(rows.into_iter().map(Point).collect()).map_err(|e| IngestError::Parse {
        line: 0,
        msg: e.to_string(),
    })
}

/// Shortest round-trip decimal form of every coordinate.
pub fn serialize(curve: &PolygonalCurve, format: Format) -> String {
    let mut out = String::new();
    for v in curve.vertices() {
        let cells: Vec<String> = v.coords().iter().map(|x| format!("{x:?}")).collect();
        match format {
            Format::Csv => writeln!(out, "{}", cells.join(",")),
            Format::JsonLines => writeln!(out, "[{}]", cells.join(",")),
        }
        .expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_rows_make_a_segment() {
        let c = parse("0,0\n1,0\n", Format::Csv).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn header_and_trailing_blank_lines_are_fine() {
        let c = parse("x,y\n0,0\n1,0\n\n\n", Format::Csv).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn mixed_dimensions_are_rejected() {
        let e = parse("0,0\n1,0,2\n", Format::Csv).unwrap_err();
        assert!(matches!(e, IngestError::DimensionMismatch { line: 2, expected: 2, found: 3 }));
    }

    #[test]
    fn bad_values_are_rejected() {
        assert!(matches!(parse("0,0\nNaN,1\n", Format::Csv).unwrap_err(), IngestError::NonFinite { line: 2 }));
        assert!(matches!(parse("0,0\n1,a\n", Format::Csv).unwrap_err(), IngestError::Parse { line: 2, .. }));
        assert!(matches!(parse("0,0\n", Format::Csv).unwrap_err(), IngestError::TooFewVertices(1)));
        assert!(matches!(parse("[0,0]\n{\"x\":1}\n", Format::JsonLines).unwrap_err(), IngestError::Parse { line: 2, .. }));
    }

    #[test]
    fn duplicates_collapse() {
        let c = parse("0,0\n0,0\n1,0\n1,0\n2,0\n", Format::Csv).unwrap();
        assert_eq!(c.len(), 3);
        assert!(matches!(parse("1,1\n1,1\n", Format::Csv).unwrap_err(), IngestError::TooFewVertices(1)));
    }

    #[test]
    fn second_curve_is_rejected() {
        let e = parse("0,0\n1,0\n\n5,5\n6,5\n", Format::Csv).unwrap_err();
        assert!(matches!(e, IngestError::MultipleCurves { line: 4 }));
    }

    #[test]
    fn json_lines() {
        let c = parse("[0, 0, 1]\n[1.5, 0, 1]\n", Format::JsonLines).unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.vertex(1).coords(), &[1.5, 0.0, 1.0]);
    }

    #[test]
    fn gps_like_track_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1000);
        let (mut lat, mut lon) = (52.520008f64, 13.404954f64);
        let mut pts = Vec::new();
        for _ in 0..1000 {
            lat += rng.gen_range(-1e-4..1e-4);
            lon += rng.gen_range(-1e-4..1e-4);
            pts.push(Point(vec![lon, lat]));
        }
        let c = PolygonalCurve::new(pts).unwrap();
        for f in [Format::Csv, Format::JsonLines] {
            assert_eq!(parse(&serialize(&c, f), f).unwrap(), c);
        }
    }
}
