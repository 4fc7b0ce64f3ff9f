//! Discretization of raw string columns into schema categories.

use std::collections::BTreeMap;

use super::{CategoricalTable, RawTable, Schema, TabularError};

/// Cut points and labels for one numeric source column.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnBins {
    /// Strictly increasing cut points, in the units of the source values.
    pub cuts: Vec<f64>,
    /// Category labels; `cuts.len() + 1` of them.
    pub labels: Vec<String>,
}

/// Per-column binning rules, keyed by source column name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BinningSpec {
    bins: BTreeMap<String, ColumnBins>,
}

impl BinningSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        column: impl Into<String>,
        cuts: Vec<f64>,
        labels: Vec<String>,
    ) -> Result<(), TabularError> {
        let column = column.into();
        if !cuts.windows(2).all(|w| w[0] < w[1]) {
            return Err(TabularError::CutsNotIncreasing { column });
        }
        if labels.len() != cuts.len() + 1 {
            return Err(TabularError::BinLabelCount {
                column,
                labels: labels.len(),
                cuts: cuts.len(),
            });
        }
        self.bins.insert(column, ColumnBins { cuts, labels });
        Ok(())
    }

    pub fn get(&self, column: &str) -> Option<&ColumnBins> {
        self.bins.get(column)
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ColumnBins)> {
        self.bins.iter()
    }
}

/// Bin index of `value`: the number of cut points `<=` value, so a
/// value equal to a cut lands in the upper bin.
pub fn bin_index(cuts: &[f64], value: f64) -> usize {
    cuts.partition_point(|&c| c <= value)
}

/// Map a raw string grid onto `schema` categories.
///
/// Columns with an entry in `spec` are parsed as numbers and binned;
/// the remaining columns are matched label-for-label against the
/// schema categories. Raw columns are found by name when the raw table
/// has a header, by position otherwise.
pub fn discretize(
    raw: &RawTable,
    spec: &BinningSpec,
    schema: &Schema,
) -> Result<CategoricalTable, TabularError> {
    let col_of: Vec<usize> = if raw.has_names {
        schema
            .variables()
            .iter()
            .map(|v| {
                raw.column_index(&v.name)
                    .ok_or_else(|| TabularError::MissingColumn { column: v.name.clone() })
            })
            .collect::<Result<_, _>>()?
    } else {
        if raw.n_columns() != schema.len() {
            return Err(TabularError::RowArity {
                row: 0,
                got: raw.n_columns(),
                expected: schema.len(),
            });
        }
        (0..schema.len()).collect()
    };

    // A binned column's labels must agree with the schema categories.
    for v in schema.variables() {
        if let Some(bins) = spec.get(&v.name) {
            if bins.labels != v.categories {
                return Err(TabularError::BinLabelsDisagree { column: v.name.clone() });
            }
        }
    }

    let mut rows = Vec::with_capacity(raw.rows.len());
    for (r, raw_row) in raw.rows.iter().enumerate() {
        let mut row = Vec::with_capacity(schema.len());
        for (v, var) in schema.variables().iter().enumerate() {
            let cell = raw_row[col_of[v]].trim();
            let idx = if let Some(bins) = spec.get(&var.name) {
                let value: f64 = cell.parse().map_err(|_| TabularError::UnparseableCell {
                    row: r,
                    column: var.name.clone(),
                    value: cell.to_string(),
                })?;
                bin_index(&bins.cuts, value)
            } else {
                var.categories
                    .iter()
                    .position(|c| c == cell)
                    .ok_or_else(|| TabularError::UnknownLabel {
                        row: r,
                        column: var.name.clone(),
                        label: cell.to_string(),
                    })?
            };
            row.push(idx);
        }
        rows.push(row);
    }
    CategoricalTable::new(schema.clone(), rows)
}

/// Default two-bin rule: a single cut at the column median.
///
/// For an even row count the median is the midpoint of the two middle
/// values. Labels are `C1` (below the cut) and `C2` (at or above it).
pub fn median_binning(raw: &RawTable, columns: &[String]) -> Result<BinningSpec, TabularError> {
    let mut spec = BinningSpec::new();
    for name in columns {
        let col = raw
            .column_index(name)
            .ok_or_else(|| TabularError::MissingColumn { column: name.clone() })?;
        let mut values = Vec::with_capacity(raw.rows.len());
        for (r, row) in raw.rows.iter().enumerate() {
            let cell = row[col].trim();
            let v: f64 = cell.parse().map_err(|_| TabularError::UnparseableCell {
                row: r,
                column: name.clone(),
                value: cell.to_string(),
            })?;
            values.push(v);
        }
        if values.is_empty() {
            return Err(TabularError::EmptyTable);
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = values.len();
        let median = if n % 2 == 1 {
            values[n / 2]
        } else {
            (values[n / 2 - 1] + values[n / 2]) / 2.0
        };
        spec.insert(name.clone(), vec![median], vec!["C1".into(), "C2".into()])?;
    }
    Ok(spec)
}
