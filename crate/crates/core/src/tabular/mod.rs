//! Data model for categorical tables: schema, rows of category
//! indices, one-hot indicators, discretization and deterministic
//! splitting.

mod binning;
mod csv_io;
mod encode;
mod schema_doc;

pub use binning::{discretize, median_binning, BinningSpec, ColumnBins};
pub use csv_io::{load_csv, read_table_csv, write_table_csv, RawTable};
pub use encode::{one_hot_decode, one_hot_encode, IndicatorMatrix};
pub use schema_doc::SchemaDoc;

use std::collections::HashSet;

use thiserror::Error;

use crate::rng;

#[derive(Debug, Error)]
pub enum TabularError {
    #[error("schema has no variables")]
    EmptySchema,
    #[error("variable name must be non-empty (variable {index})")]
    EmptyVariableName { index: usize },
    #[error("duplicate variable name {name:?}")]
    DuplicateVariable { name: String },
    #[error("variable {name:?} needs at least 2 categories, got {count}")]
    TooFewCategories { name: String, count: usize },
    #[error("variable {name:?} has duplicate category label {label:?}")]
    DuplicateCategory { name: String, label: String },
    #[error("target index {target} out of range for {variables} variables")]
    TargetOutOfRange { target: usize, variables: usize },
    #[error("row {row} has {got} cells, expected {expected}")]
    RowArity { row: usize, got: usize, expected: usize },
    #[error("row {row}, variable {variable:?}: category index {value} out of range ({categories} categories)")]
    CellOutOfRange { row: usize, variable: String, value: usize, categories: usize },
    #[error("CSV file {path:?} is empty")]
    EmptyFile { path: String },
    #[error("ragged CSV row at line {line} in {path:?}: expected {expected} fields, got {got}")]
    RaggedRow { path: String, line: u64, expected: u64, got: u64 },
    #[error("CSV error in {path:?}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("I/O error on {path:?}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("row {row}, column {column:?}: cannot parse {value:?} as a number")]
    UnparseableCell { row: usize, column: String, value: String },
    #[error("row {row}, column {column:?}: label {label:?} is not a category of the schema")]
    UnknownLabel { row: usize, column: String, label: String },
    #[error("column {column:?} not found in the raw table")]
    MissingColumn { column: String },
    #[error("binning for column {column:?}: cut points must be strictly increasing")]
    CutsNotIncreasing { column: String },
    #[error("binning for column {column:?}: {labels} labels for {cuts} cuts (need cuts + 1)")]
    BinLabelCount { column: String, labels: usize, cuts: usize },
    #[error("binning labels for column {column:?} do not match the schema categories")]
    BinLabelsDisagree { column: String },
    #[error("split fraction {fraction} outside (0, 1)")]
    BadFraction { fraction: f64 },
    #[error("cannot split an empty table")]
    EmptyTable,
    #[error("indicator column map does not match the schema")]
    ColumnMapMismatch,
    #[error("indicator variable block for {variable:?} is empty")]
    EmptyBlock { variable: String },
    #[error("indicator entry at ({row}, {col}) = {value} outside [0, 1]")]
    IndicatorOutOfRange { row: usize, col: usize, value: f64 },
    #[error("row {row}: strict one-hot block for variable {variable:?} is not a unit indicator")]
    NotOneHot { row: usize, variable: String },
    #[error("schema document: {0}")]
    SchemaDoc(String),
}

/// One categorical variable: a name plus its ordered category labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub categories: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, categories: &[&str]) -> Self {
        Self {
            name: name.into(),
            categories: categories.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn cardinality(&self) -> usize {
        self.categories.len()
    }
}

/// Ordered categorical variables plus the index of the label to predict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    variables: Vec<Variable>,
    target_index: usize,
}

impl Schema {
    pub fn new(variables: Vec<Variable>, target_index: usize) -> Result<Self, TabularError> {
        if variables.is_empty() {
            return Err(TabularError::EmptySchema);
        }
        let mut names = HashSet::new();
        for (index, v) in variables.iter().enumerate() {
            if v.name.is_empty() {
                return Err(TabularError::EmptyVariableName { index });
            }
            if !names.insert(v.name.clone()) {
                return Err(TabularError::DuplicateVariable { name: v.name.clone() });
            }
            if v.categories.len() < 2 {
                return Err(TabularError::TooFewCategories {
                    name: v.name.clone(),
                    count: v.categories.len(),
                });
            }
            let mut labels = HashSet::new();
            for label in &v.categories {
                if !labels.insert(label.clone()) {
                    return Err(TabularError::DuplicateCategory {
                        name: v.name.clone(),
                        label: label.clone(),
                    });
                }
            }
        }
        if target_index >= variables.len() {
            return Err(TabularError::TargetOutOfRange {
                target: target_index,
                variables: variables.len(),
            });
        }
        Ok(Self { variables, target_index })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, index: usize) -> &Variable {
        &self.variables[index]
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn target_index(&self) -> usize {
        self.target_index
    }

    pub fn target(&self) -> &Variable {
        &self.variables[self.target_index]
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Total category count over all variables (the one-hot width).
    pub fn indicator_width(&self) -> usize {
        self.variables.iter().map(Variable::cardinality).sum()
    }

    /// Category cardinality per variable, in schema order.
    pub fn cardinalities(&self) -> Vec<usize> {
        self.variables.iter().map(Variable::cardinality).collect()
    }
}

/// Rows of category indices under a fixed [`Schema`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoricalTable {
    schema: Schema,
    rows: Vec<Vec<usize>>,
}

impl CategoricalTable {
    pub fn new(schema: Schema, rows: Vec<Vec<usize>>) -> Result<Self, TabularError> {
        for (r, row) in rows.iter().enumerate() {
            if row.len() != schema.len() {
                return Err(TabularError::RowArity {
                    row: r,
                    got: row.len(),
                    expected: schema.len(),
                });
            }
            for (v, &cell) in row.iter().enumerate() {
                let cats = schema.variable(v).cardinality();
                if cell >= cats {
                    return Err(TabularError::CellOutOfRange {
                        row: r,
                        variable: schema.variable(v).name.clone(),
                        value: cell,
                        categories: cats,
                    });
                }
            }
        }
        Ok(Self { schema, rows })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of one variable down all rows.
    pub fn column(&self, variable: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[variable]).collect()
    }

    /// The target column (class labels).
    pub fn labels(&self) -> Vec<usize> {
        self.column(self.schema.target_index())
    }

    /// New table holding the given rows, in order.
    pub fn select(&self, idx: &[usize]) -> Self {
        Self {
            schema: self.schema.clone(),
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

/// Seeded shuffle followed by a prefix split.
///
/// `train` receives `floor(fraction * n)` rows; together the halves are
/// an exact partition of the input rows.
pub fn split_rows(
    table: &CategoricalTable,
    fraction: f64,
    seed: u64,
) -> Result<(CategoricalTable, CategoricalTable), TabularError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(TabularError::BadFraction { fraction });
    }
    if table.is_empty() {
        return Err(TabularError::EmptyTable);
    }
    let n = table.n_rows();
    let mut rng = rng::stream(seed);
    let perm = rng::permutation(n, &mut rng);
    let train_len = (fraction * n as f64).floor() as usize;
    let train = table.select(&perm[..train_len]);
    let test = table.select(&perm[train_len..]);
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_var_schema() -> Schema {
        Schema::new(
            vec![Variable::new("V1", &["C1", "C2"]), Variable::new("V2", &["C1", "C2"])],
            1,
        )
        .unwrap()
    }

    #[test]
    fn schema_rejects_duplicate_names() {
        let err = Schema::new(
            vec![Variable::new("a", &["x", "y"]), Variable::new("a", &["x", "y"])],
            0,
        )
        .unwrap_err();
        assert!(matches!(err, TabularError::DuplicateVariable { .. }));
    }

    #[test]
    fn schema_rejects_single_category() {
        let err = Schema::new(vec![Variable::new("a", &["x"])], 0).unwrap_err();
        assert!(matches!(err, TabularError::TooFewCategories { .. }));
    }

    #[test]
    fn schema_rejects_target_out_of_range() {
        let err = Schema::new(vec![Variable::new("a", &["x", "y"])], 1).unwrap_err();
        assert!(matches!(err, TabularError::TargetOutOfRange { .. }));
    }

    #[test]
    fn table_rejects_out_of_range_cell() {
        let err = CategoricalTable::new(two_var_schema(), vec![vec![0, 2]]).unwrap_err();
        assert!(matches!(err, TabularError::CellOutOfRange { .. }));
    }

    #[test]
    fn table_rejects_wrong_arity() {
        let err = CategoricalTable::new(two_var_schema(), vec![vec![0]]).unwrap_err();
        assert!(matches!(err, TabularError::RowArity { .. }));
    }

    #[test]
    fn split_sizes_use_floor() {
        let schema = two_var_schema();
        let rows: Vec<Vec<usize>> = (0..4).map(|i| vec![i % 2, (i / 2) % 2]).collect();
        let table = CategoricalTable::new(schema, rows).unwrap();
        let (train, test) = split_rows(&table, 0.75, 1).unwrap();
        assert_eq!(train.n_rows(), 3);
        assert_eq!(test.n_rows(), 1);
    }

    #[test]
    fn split_is_deterministic_and_partitions() {
        let schema = two_var_schema();
        let rows: Vec<Vec<usize>> = (0..40).map(|i| vec![i % 2, (i / 2) % 2]).collect();
        let table = CategoricalTable::new(schema, rows.clone()).unwrap();
        let (tr1, te1) = split_rows(&table, 0.6, 9).unwrap();
        let (tr2, te2) = split_rows(&table, 0.6, 9).unwrap();
        assert_eq!(tr1, tr2);
        assert_eq!(te1, te2);
        let mut merged: Vec<Vec<usize>> =
            tr1.rows().iter().chain(te1.rows()).cloned().collect();
        merged.sort();
        let mut original = rows;
        original.sort();
        assert_eq!(merged, original);
    }

    #[test]
    fn split_rejects_bad_fraction() {
        let schema = two_var_schema();
        let table = CategoricalTable::new(schema, vec![vec![0, 0]]).unwrap();
        assert!(matches!(
            split_rows(&table, 1.0, 0).unwrap_err(),
            TabularError::BadFraction { .. }
        ));
        assert!(matches!(
            split_rows(&table, 0.0, 0).unwrap_err(),
            TabularError::BadFraction { .. }
        ));
    }
}
