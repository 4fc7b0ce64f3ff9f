//! RFC-4180 CSV ingestion and emission.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use super::{CategoricalTable, Schema, TabularError};

/// Untyped cell grid straight from a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    pub column_names: Vec<String>,
    /// True when the names came from a header row (rather than being
    /// synthesized as `col0`, `col1`, ...).
    pub has_names: bool,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn n_columns(&self) -> usize {
        self.column_names.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|n| n == name)
    }
}

fn csv_error(path: &Path, err: csv::Error) -> TabularError {
    let path_str = path.display().to_string();
    if let csv::ErrorKind::UnequalLengths { pos, expected_len, len } = err.kind() {
        return TabularError::RaggedRow {
            path: path_str,
            line: pos.as_ref().map_or(0, |p| p.line()),
            expected: *expected_len,
            got: *len,
        };
    }
    TabularError::Csv { path: path_str, source: err }
}

/// Read a CSV file into a string grid. No type coercion is applied.
pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<RawTable, TabularError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| TabularError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(false)
        .from_reader(BufReader::new(file));

    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        rows.push(record.iter().map(str::to_string).collect());
    }

    let (column_names, has_names) = if has_header {
        let headers = reader.headers().map_err(|e| csv_error(path, e))?;
        if headers.is_empty() {
            return Err(TabularError::EmptyFile { path: path.display().to_string() });
        }
        (headers.iter().map(str::to_string).collect(), true)
    } else {
        if rows.is_empty() {
            return Err(TabularError::EmptyFile { path: path.display().to_string() });
        }
        let width = rows[0].len();
        ((0..width).map(|i| format!("col{i}")).collect(), false)
    };

    Ok(RawTable { column_names, has_names, rows })
}

/// Write a categorical table as CSV: header = variable names, cells =
/// category labels.
pub fn write_table_csv(out: impl Write, table: &CategoricalTable) -> Result<(), TabularError> {
    let mut writer = csv::Writer::from_writer(out);
    let schema = table.schema();
    let fail = |source: csv::Error| TabularError::Csv { path: "<writer>".into(), source };
    writer
        .write_record(schema.variables().iter().map(|v| v.name.as_str()))
        .map_err(fail)?;
    for row in table.rows() {
        writer
            .write_record(
                row.iter()
                    .enumerate()
                    .map(|(v, &c)| schema.variable(v).categories[c].as_str()),
            )
            .map_err(fail)?;
    }
    writer.flush().map_err(|source| TabularError::Io { path: "<writer>".into(), source })?;
    Ok(())
}

pub fn write_table_csv_file(
    path: impl AsRef<Path>,
    table: &CategoricalTable,
) -> Result<(), TabularError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| TabularError::Io {
        path: path.display().to_string(),
        source,
    })?;
    write_table_csv(BufWriter::new(file), table)
}

/// Read a label CSV back into a categorical table under `schema`.
///
/// The header row is required and must name the schema variables in
/// schema order.
pub fn read_table_csv(
    path: impl AsRef<Path>,
    schema: &Schema,
) -> Result<CategoricalTable, TabularError> {
    let path = path.as_ref();
    let raw = load_csv(path, true)?;
    for v in schema.variables() {
        if raw.column_index(&v.name).is_none() {
            return Err(TabularError::MissingColumn { column: v.name.clone() });
        }
    }
    let col_of: Vec<usize> = schema
        .variables()
        .iter()
        .map(|v| raw.column_index(&v.name).unwrap())
        .collect();
    let mut rows = Vec::with_capacity(raw.rows.len());
    for (r, raw_row) in raw.rows.iter().enumerate() {
        let mut row = Vec::with_capacity(schema.len());
        for (v, var) in schema.variables().iter().enumerate() {
            let label = &raw_row[col_of[v]];
            let idx = var
                .categories
                .iter()
                .position(|c| c == label)
                .ok_or_else(|| TabularError::UnknownLabel {
                    row: r,
                    column: var.name.clone(),
                    label: label.clone(),
                })?;
            row.push(idx);
        }
        rows.push(row);
    }
    CategoricalTable::new(schema.clone(), rows)
}
