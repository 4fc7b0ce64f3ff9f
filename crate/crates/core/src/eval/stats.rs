//! Per-column descriptive statistics and plot-ready distribution
//! curves. Aggregation runs in `f64` whatever the input scalar, so the
//! binomial variance identity holds to reporting precision.

use serde::{Deserialize, Serialize};

use crate::scalar::{to_f64, Real};
use crate::tabular::{IndicatorMatrix, Schema};

use super::EvalError;

/// Per-indicator-column mean and sample standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub columns: Vec<ColumnStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub column: String,
    pub mean: f64,
    pub sd: f64,
}

/// Indicator column names in matrix order: variable name directly
/// followed by category label, `V1C1` style.
pub fn indicator_column_names<T: Real>(m: &IndicatorMatrix<T>, schema: &Schema) -> Vec<String> {
    m.column_map()
        .iter()
        .map(|&(v, c)| {
            let var = schema.variable(v);
            format!("{}{}", var.name, var.categories[c])
        })
        .collect()
}

/// Column means and sample standard deviations (N-1 denominator).
pub fn descriptive_stats<T: Real>(
    m: &IndicatorMatrix<T>,
    schema: &Schema,
) -> Result<DescriptiveStats, EvalError> {
    let n = m.n_rows();
    if n < 2 {
        return Err(EvalError::TooFewRows { got: n, need: 2 });
    }
    let names = indicator_column_names(m, schema);
    let values = m.values();
    let mut columns = Vec::with_capacity(m.width());
    for c in 0..m.width() {
        let mut sum = 0.0;
        for r in 0..n {
            sum += to_f64(values.get(r, c));
        }
        let mean = sum / n as f64;
        let mut ss = 0.0;
        for r in 0..n {
            let d = to_f64(values.get(r, c)) - mean;
            ss += d * d;
        }
        let sd = (ss / (n - 1) as f64).sqrt();
        columns.push(ColumnStats { column: names[c].clone(), mean, sd });
    }
    Ok(DescriptiveStats { columns })
}

/// Cumulative sums per column (running totals in row order) and
/// per-variable category relative frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionCurves {
    pub cumulative_sums: Vec<ColumnCumulative>,
    pub densities: Vec<VariableDensity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnCumulative {
    pub column: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableDensity {
    pub variable: String,
    pub categories: Vec<String>,
    pub frequencies: Vec<f64>,
}

pub fn distribution_curves<T: Real>(
    m: &IndicatorMatrix<T>,
    schema: &Schema,
) -> Result<DistributionCurves, EvalError> {
    let n = m.n_rows();
    if n < 1 {
        return Err(EvalError::TooFewRows { got: n, need: 1 });
    }
    let names = indicator_column_names(m, schema);
    let values = m.values();
    let mut cumulative_sums = Vec::with_capacity(m.width());
    for c in 0..m.width() {
        let mut acc = 0.0;
        let mut running = Vec::with_capacity(n);
        for r in 0..n {
            acc += to_f64(values.get(r, c));
            running.push(acc);
        }
        cumulative_sums.push(ColumnCumulative { column: names[c].clone(), values: running });
    }

    // relative frequency per category = column mean of its indicator
    let mut densities = Vec::new();
    let mut col = 0usize;
    while col < m.width() {
        let (v, _) = m.column_map()[col];
        let var = schema.variable(v);
        let width = var.cardinality();
        let mut frequencies = Vec::with_capacity(width);
        for offset in 0..width {
            let last = cumulative_sums[col + offset].values[n - 1];
            frequencies.push(last / n as f64);
        }
        densities.push(VariableDensity {
            variable: var.name.clone(),
            categories: var.categories.clone(),
            frequencies,
        });
        col += width;
    }
    Ok(DistributionCurves { cumulative_sums, densities })
}
