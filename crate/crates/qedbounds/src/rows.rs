//! One self-describing CSV schema shared by every task.
//!
//! Column contract: floats print with 17 significant digits (`{:.16e}`), which
//! is exactly enough for `f64` round trips; optional columns (`box_side`, `n`,
//! `aux_name`, `aux_value`) are empty when they do not apply. The first line
//! of a file is a `# qedbounds <version> <timestamp>` comment, the only part
//! of the output allowed to differ between identical runs. A `status` other
//! than `ok` marks a failed row: its value is NaN and the process exits 1
//! after writing everything it has. Degenerate but well-defined results (for
//! example a vacuous lower bound of 0) keep `status = ok` and carry
//! `aux_name = degenerate`.

use std::io::{self, Write};

use selfenergy::BoundRecord;

use crate::config::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const CSV_HEADER: &str =
    "task,model,statistics,side,alpha,lambda,box_side,n,value,aux_name,aux_value,seed,status,tool_version";

pub const STATUS_OK: &str = "ok";

/// 17-significant-digit float formatting; NaN and infinities print as their
/// `f64::from_str` spellings so every value parses back.
pub fn g17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone)]
pub struct ResultRow {
    pub task: String,
    pub model: String,
    pub statistics: String,
    pub side: String,
    pub alpha: f64,
    pub lambda: f64,
    pub box_side: Option<f64>,
    pub n: Option<u64>,
    pub value: f64,
    pub aux_name: Option<String>,
    pub aux_value: Option<f64>,
    pub seed: u64,
    pub status: String,
    pub tool_version: String,
}

// status is the only free-text field; keep every line a single record
fn sanitize_status(status: &str) -> String {
    status.replace([',', '\n', '\r'], ";").trim().to_owned()
}

fn float_eq(a: f64, b: f64) -> bool {
    a == b || (a.is_nan() && b.is_nan())
}

fn opt_float_eq(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => float_eq(x, y),
        (None, None) => true,
        _ => false,
    }
}

impl ResultRow {
    /// Adopt a library bound record. The first aux pair (the record's primary
    /// auxiliary, for example `ell_star` or `r_star`) rides along; degenerate
    /// records carry `degenerate = 1` instead.
    pub fn from_record(task: &str, rec: &BoundRecord, seed: u64) -> Self {
        let (aux_name, aux_value) = if rec.degenerate {
            (Some("degenerate".to_owned()), Some(1.0))
        } else {
            match rec.aux.first() {
                Some(&(name, value)) => (Some(name.to_owned()), Some(value)),
                None => (None, None),
            }
        };
        ResultRow {
            task: task.to_owned(),
            model: rec.model.as_str().to_owned(),
            statistics: rec.statistics.as_str().to_owned(),
            side: rec.side.as_str().to_owned(),
            alpha: rec.alpha,
            lambda: rec.lambda_uv,
            box_side: rec.box_side,
            n: Some(rec.n_particles),
            value: rec.value,
            aux_name,
            aux_value,
            seed,
            status: STATUS_OK.to_owned(),
            tool_version: TOOL_VERSION.to_owned(),
        }
    }

    /// A row whose computation failed: value NaN, status carrying the error.
    /// The status is sanitized here so the in-memory row equals its CSV
    /// round trip.
    #[allow(clippy::too_many_arguments)]
    pub fn failed(
        task: &str,
        model: &str,
        statistics: &str,
        side: &str,
        alpha: f64,
        lambda: f64,
        seed: u64,
        status: &str,
    ) -> Self {
        let status = sanitize_status(status);
        ResultRow {
            task: task.to_owned(),
            model: model.to_owned(),
            statistics: statistics.to_owned(),
            side: side.to_owned(),
            alpha,
            lambda,
            box_side: None,
            n: None,
            value: f64::NAN,
            aux_name: None,
            aux_value: None,
            seed,
            status,
            tool_version: TOOL_VERSION.to_owned(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }

    /// Field-by-field equality with NaN == NaN, for round-trip checks.
    pub fn same_as(&self, other: &ResultRow) -> bool {
        self.task == other.task
            && self.model == other.model
            && self.statistics == other.statistics
            && self.side == other.side
            && float_eq(self.alpha, other.alpha)
            && float_eq(self.lambda, other.lambda)
            && opt_float_eq(self.box_side, other.box_side)
            && self.n == other.n
            && float_eq(self.value, other.value)
            && self.aux_name == other.aux_name
            && opt_float_eq(self.aux_value, other.aux_value)
            && self.seed == other.seed
            && self.status == other.status
            && self.tool_version == other.tool_version
    }

    fn csv_line(&self) -> String {
        // backstop for hand-built rows; failed() already sanitized
        let status = sanitize_status(&self.status);
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.task,
            self.model,
            self.statistics,
            self.side,
            g17(self.alpha),
            g17(self.lambda),
            self.box_side.map(g17).unwrap_or_default(),
            self.n.map(|n| n.to_string()).unwrap_or_default(),
            g17(self.value),
            self.aux_name.clone().unwrap_or_default(),
            self.aux_value.map(g17).unwrap_or_default(),
            self.seed,
            status,
            self.tool_version,
        )
    }
}

/// First line of every CSV file; the timestamp is the only run-dependent part.
pub fn header_comment(timestamp: &str) -> String {
    format!("qedbounds {TOOL_VERSION} {timestamp}")
}

pub fn write_csv<W: Write>(mut w: W, comment: &str, rows: &[ResultRow]) -> io::Result<()> {
    writeln!(w, "# {comment}")?;
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.csv_line())?;
    }
    Ok(())
}

pub fn csv_string(comment: &str, rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, comment, rows).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("rows are valid UTF-8")
}

fn parse_f64(field: &str, line_no: usize) -> Result<f64, CliError> {
    field
        .parse::<f64>()
        .map_err(|_| CliError::Config(format!("line {line_no}: bad float {field:?}")))
}

fn parse_opt_f64(field: &str, line_no: usize) -> Result<Option<f64>, CliError> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_f64(field, line_no).map(Some)
    }
}

/// Parse a CSV produced by [`write_csv`]. Leading `#` comment lines are
/// skipped; the header must match [`CSV_HEADER`] exactly.
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>, CliError> {
    let mut lines = text.lines().enumerate().peekable();
    while let Some((_, line)) = lines.peek() {
        if line.starts_with('#') || line.trim().is_empty() {
            lines.next();
        } else {
            break;
        }
    }
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((i, header)) => {
            return Err(CliError::Config(format!(
                "line {}: header mismatch: {header:?}",
                i + 1
            )))
        }
        None => return Err(CliError::Config("empty CSV: no header line".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 14 {
            return Err(CliError::Config(format!(
                "line {line_no}: expected 14 fields, found {}",
                fields.len()
            )));
        }
        rows.push(ResultRow {
            task: fields[0].to_owned(),
            model: fields[1].to_owned(),
            statistics: fields[2].to_owned(),
            side: fields[3].to_owned(),
            alpha: parse_f64(fields[4], line_no)?,
            lambda: parse_f64(fields[5], line_no)?,
            box_side: parse_opt_f64(fields[6], line_no)?,
            n: if fields[7].is_empty() {
                None
            } else {
                Some(fields[7].parse::<u64>().map_err(|_| {
                    CliError::Config(format!("line {line_no}: bad count {:?}", fields[7]))
                })?)
            },
            value: parse_f64(fields[8], line_no)?,
            aux_name: if fields[9].is_empty() {
                None
            } else {
                Some(fields[9].to_owned())
            },
            aux_value: parse_opt_f64(fields[10], line_no)?,
            seed: fields[11].parse::<u64>().map_err(|_| {
                CliError::Config(format!("line {line_no}: bad seed {:?}", fields[11]))
            })?,
            status: fields[12].to_owned(),
            tool_version: fields[13].to_owned(),
        });
    }
    Ok(rows)
}
