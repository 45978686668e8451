//! CSV serialization of metric records.
//!
//! The header is fixed: `pair_id,method,band,metric,value,excluded_pixels`.
//! Values use the shortest round-trip decimal form, with `inf` and `nan`
//! for the non-finite cases.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use panfuse::metrics::{BandLabel, MetricKind, MetricRecord};

use crate::error::{CliError, Result};

pub const HEADER: [&str; 6] = ["pair_id", "method", "band", "metric", "value", "excluded_pixels"];

pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

fn parse_value(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => s.parse().ok().filter(|v: &f64| v.is_finite()),
    }
}

/// Serializes records, optionally preceded by the header line.
pub fn to_csv(records: &[MetricRecord], header: bool) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    if header {
        w.write_record(HEADER).expect("in-memory write");
    }
    for r in records {
        w.write_record([
            r.pair_id.as_str(),
            r.method.as_str(),
            &r.band.to_string(),
            r.metric.name(),
            &format_value(r.value),
            &r.excluded_pixels.to_string(),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Writes a complete CSV file, replacing any existing one.
pub fn write_csv(path: &Path, records: &[MetricRecord]) -> Result<()> {
    fs::write(path, to_csv(records, true)).map_err(|e| CliError::io(path, e))
}

/// Appends records, writing the header first when the file is new or empty.
pub fn append_csv(path: &Path, records: &[MetricRecord]) -> Result<()> {
    let needs_header = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| CliError::io(path, e))?;
    file.write_all(&to_csv(records, needs_header))
        .map_err(|e| CliError::io(path, e))
}

/// Parses a metrics CSV, rejecting any other header and naming the line of
/// the first malformed row.
pub fn read_csv(path: &Path) -> Result<Vec<MetricRecord>> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    parse_csv(path, &bytes)
}

pub fn parse_csv(path: &Path, bytes: &[u8]) -> Result<Vec<MetricRecord>> {
    let bad = |line: u64, message: String| CliError::Csv {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(bytes);
    let header = reader
        .headers()
        .map_err(|e| bad(1, e.to_string()))?
        .clone();
    if header.iter().ne(HEADER) {
        return Err(bad(1, format!("expected header {}", HEADER.join(","))));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            bad(line, e.to_string())
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != HEADER.len() {
            return Err(bad(line, format!("expected 6 fields, found {}", row.len())));
        }
        let band: BandLabel = row[2]
            .parse()
            .map_err(|_| bad(line, format!("bad band {:?}", &row[2])))?;
        let metric: MetricKind = row[3]
            .parse()
            .map_err(|_| bad(line, format!("unknown metric {:?}", &row[3])))?;
        let value =
            parse_value(&row[4]).ok_or_else(|| bad(line, format!("bad value {:?}", &row[4])))?;
        let excluded_pixels = row[5]
            .parse()
            .map_err(|_| bad(line, format!("bad excluded_pixels {:?}", &row[5])))?;
        if row[0].is_empty() || row[1].is_empty() {
            return Err(bad(line, "empty pair_id or method".into()));
        }
        out.push(MetricRecord {
            pair_id: row[0].to_string(),
            method: row[1].to_string(),
            band,
            metric,
            value,
            excluded_pixels,
        });
    }
    Ok(out)
}
