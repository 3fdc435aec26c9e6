//! Serialized forms of [`MomentReport`].
//!
//! Three renderings, all deterministic:
//!
//! * a JSON document tagged `"format": "report_v1"`;
//! * a line-oriented text form starting with `# report_v1`;
//! * CSV with a header row (rows only).
//!
//! The JSON and text forms parse back to an identical report. Floats are
//! written in shortest round-trip form.
//!
//! Text form:
//!
//! ```text
//! # report_v1
//! id ex4
//! calibration_ratio 2e0
//! max_relative_error 2.220446049250313e-16
//! note <free text>
//! row <n> <exact> <numeric> <relative_error> <scheme>
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{MomentReport, MomentRow};

pub const FORMAT_VERSION: &str = "report_v1";

#[derive(Serialize)]
struct DocumentOut<'a> {
    format: &'a str,
    #[serde(flatten)]
    report: &'a MomentReport,
}

#[derive(Deserialize)]
struct DocumentIn {
    format: String,
    #[serde(flatten)]
    report: MomentReport,
}

/// Pretty-printed JSON document.
pub fn to_json(report: &MomentReport) -> String {
    let doc = DocumentOut {
        format: FORMAT_VERSION,
        report,
    };
    serde_json::to_string_pretty(&doc).expect("reports serialize")
}

pub fn from_json(text: &str) -> Result<MomentReport> {
    let doc: DocumentIn = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.format != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported report format '{}', expected {FORMAT_VERSION}",
            doc.format
        )));
    }
    Ok(doc.report)
}

pub fn to_text(report: &MomentReport) -> String {
    let mut out = format!("# {FORMAT_VERSION}\n");
    out += &format!("id {}\n", report.id);
    out += &format!("calibration_ratio {:e}\n", report.calibration_ratio);
    out += &format!("max_relative_error {:e}\n", report.max_relative_error);
    for note in &report.notes {
        out += &format!("note {}\n", note.replace('\n', " "));
    }
    for row in &report.rows {
        out += &format!(
            "row {} {} {:e} {:e} {}\n",
            row.n, row.exact, row.numeric, row.relative_error, row.scheme
        );
    }
    out
}

pub fn from_text(text: &str) -> Result<MomentReport> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == format!("# {FORMAT_VERSION}") => {}
        _ => return Err(Error::Parse(format!("missing '# {FORMAT_VERSION}' header"))),
    }
    let (mut id, mut ratio, mut max_err) = (None, None, None);
    let mut notes = Vec::new();
    let mut rows = Vec::new();
    for (index, line) in lines {
        let bad = |what: &str| Error::Parse(format!("line {}: {what}: '{line}'", index + 1));
        if line.trim().is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(' ')
            .ok_or_else(|| bad("expected a key and a value"))?;
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad("invalid number"));
        match key {
            "id" => id = Some(rest.parse().map_err(|_| bad("invalid id"))?),
            "calibration_ratio" => ratio = Some(float(rest)?),
            "max_relative_error" => max_err = Some(float(rest)?),
            "note" => notes.push(rest.to_string()),
            "row" => {
                let fields: Vec<&str> = rest.split(' ').collect();
                let [n, exact, numeric, relative_error, scheme] = fields[..] else {
                    return Err(bad("row needs 5 fields"));
                };
                rows.push(MomentRow {
                    n: n.parse().map_err(|_| bad("invalid n"))?,
                    exact: exact.parse().map_err(|_| bad("invalid exact value"))?,
                    numeric: float(numeric)?,
                    relative_error: float(relative_error)?,
                    scheme: scheme.to_string(),
                });
            }
            _ => return Err(bad("unknown key")),
        }
    }
    let missing = |k: &str| Error::Parse(format!("missing '{k}' line"));
    Ok(MomentReport {
        id: id.ok_or_else(|| missing("id"))?,
        rows,
        max_relative_error: max_err.ok_or_else(|| missing("max_relative_error"))?,
        calibration_ratio: ratio.ok_or_else(|| missing("calibration_ratio"))?,
        notes,
    })
}

/// Rows as CSV: `n,exact,numeric,relative_error,scheme`.
pub fn to_csv(report: &MomentReport) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["n", "exact", "numeric", "relative_error", "scheme"])
        .expect("in-memory write");
    for row in &report.rows {
        writer
            .write_record([
                row.n.to_string(),
                row.exact.to_string(),
                format!("{:e}", row.numeric),
                format!("{:e}", row.relative_error),
                row.scheme.clone(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}
