//! Plain-text coefficient files.
//!
//! Format: one line `b: c0 c1 ...`, one line `a: c0 c1 ...`, `#` starts a
//! comment, values in decimal or scientific notation. Also used for FIR tap
//! import (a single `b:` line with `a: 1`).

use std::path::Path;

use crate::filter::{FilterKind, PrototypeFilter};
use crate::{Error, Result};

/// Parse coefficient text into a normalized, stability-checked prototype.
///
/// `kind` is not encoded in the file; callers state how the set should be
/// used (it only matters for bookkeeping, not for the arithmetic).
pub fn parse_prototype(
    text: &str,
    kind: FilterKind,
    sample_rate_hz: f64,
    label: impl Into<String>,
) -> Result<PrototypeFilter> {
    let (b, a) = parse_ba(text)?;
    PrototypeFilter::new(b, a, kind, sample_rate_hz, label)
}

pub fn load_prototype(
    path: &Path,
    kind: FilterKind,
    sample_rate_hz: f64,
) -> Result<PrototypeFilter> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_prototype(&text, kind, sample_rate_hz, path.display().to_string())
}

/// Parse the raw `b:`/`a:` vectors without constructing a filter.
pub fn parse_ba(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut b: Option<Vec<f64>> = None;
    let mut a: Option<Vec<f64>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| Error::ParseError {
            line: idx + 1,
            msg: "expected `b: ...` or `a: ...`".into(),
        })?;
        let values: Vec<f64> = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::ParseError {
                    line: idx + 1,
                    msg: format!("bad number `{tok}`"),
                })
            })
            .collect::<Result<_>>()?;
        if values.is_empty() {
            return Err(Error::ParseError { line: idx + 1, msg: "empty coefficient list".into() });
        }
        match key.trim() {
            "b" => b = Some(values),
            "a" => a = Some(values),
            other => {
                return Err(Error::ParseError {
                    line: idx + 1,
                    msg: format!("unknown key `{other}`"),
                })
            }
        }
    }
    match (b, a) {
        (Some(b), Some(a)) => Ok((b, a)),
        _ => Err(Error::ParseError { line: 0, msg: "file must contain both b: and a: lines".into() }),
    }
}

/// Render a coefficient set in the file format (17 significant digits).
pub fn format_ba(b: &[f64], a: &[f64], comment: &str) -> String {
    let join = |v: &[f64]| v.iter().map(|c| format!("{c:.17e}")).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    for line in comment.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("b: {}\n", join(b)));
    out.push_str(&format!("a: {}\n", join(a)));
    out
}
