//! Power-law fits over result rows: select two numeric columns, filter, and
//! regress log y on log x. The regression itself lives in
//! `selfenergy::numerics::fit`; this layer handles row plumbing and the
//! nonpositive-data contract (dropped with a count the caller can warn on).

use selfenergy::numerics::{fit_powerlaw_xy, PowerLawFit};

use crate::config::CliError;
use crate::rows::ResultRow;

/// Numeric row columns addressable in a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSel {
    Alpha,
    Lambda,
    BoxSide,
    N,
    Value,
    AuxValue,
}

impl FieldSel {
    pub fn get(self, row: &ResultRow) -> Option<f64> {
        match self {
            FieldSel::Alpha => Some(row.alpha),
            FieldSel::Lambda => Some(row.lambda),
            FieldSel::BoxSide => row.box_side,
            FieldSel::N => row.n.map(|n| n as f64),
            FieldSel::Value => Some(row.value),
            FieldSel::AuxValue => row.aux_value,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FieldSel::Alpha => "alpha",
            FieldSel::Lambda => "lambda",
            FieldSel::BoxSide => "box_side",
            FieldSel::N => "n",
            FieldSel::Value => "value",
            FieldSel::AuxValue => "aux_value",
        }
    }
}

impl std::str::FromStr for FieldSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "alpha" => Ok(FieldSel::Alpha),
            "lambda" => Ok(FieldSel::Lambda),
            "box_side" => Ok(FieldSel::BoxSide),
            "n" => Ok(FieldSel::N),
            "value" => Ok(FieldSel::Value),
            "aux_value" => Ok(FieldSel::AuxValue),
            other => Err(format!(
                "unknown field {other:?}; expected alpha, lambda, box_side, n, value, or aux_value"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitSummary {
    pub fit: PowerLawFit,
    /// Rows that passed the filter but were dropped for a missing,
    /// nonfinite, or nonpositive coordinate.
    pub n_dropped: usize,
}

/// Least-squares slope of log y vs log x over the filtered rows. Rows whose
/// selected coordinates are absent or not strictly positive are dropped (the
/// count is reported); fewer than three surviving points is an error.
pub fn fit_powerlaw<F>(
    rows: &[ResultRow],
    x_field: FieldSel,
    y_field: FieldSel,
    filter: F,
) -> Result<FitSummary, CliError>
where
    F: Fn(&ResultRow) -> bool,
{
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut n_dropped = 0usize;
    for row in rows.iter().filter(|r| filter(r)) {
        match (x_field.get(row), y_field.get(row)) {
            (Some(x), Some(y)) if x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite() => {
                xs.push(x);
                ys.push(y);
            }
            _ => n_dropped += 1,
        }
    }
    if xs.len() < 3 {
        return Err(CliError::Numerical(format!(
            "fit_powerlaw {} vs {}: need >= 3 positive points, have {} ({n_dropped} dropped)",
            y_field.as_str(),
            x_field.as_str(),
            xs.len()
        )));
    }
    let fit = fit_powerlaw_xy(&xs, &ys)?;
    Ok(FitSummary { fit, n_dropped })
}
