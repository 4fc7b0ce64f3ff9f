//! One-hot indicators and their inverse.

use crate::matrix::Matrix;
use crate::scalar::{to_f64, Real};

use super::{CategoricalTable, Schema, TabularError};

/// N x D matrix of indicator values in `[0, 1]` plus the mapping from
/// matrix columns to `(variable, category)` pairs.
///
/// `strict_one_hot` marks matrices whose per-variable blocks are exact
/// unit indicators (every block of every row sums to 1 with a single
/// 1.0 entry). Raw generator output does not carry the flag: its
/// blocks are unconstrained apart from the `[0, 1]` range.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorMatrix<T = f64> {
    column_map: Vec<(usize, usize)>,
    values: Matrix<T>,
    strict_one_hot: bool,
}

/// The canonical column order: variables in schema order, categories
/// ascending within each variable.
pub fn column_map_for(schema: &Schema) -> Vec<(usize, usize)> {
    let mut map = Vec::with_capacity(schema.indicator_width());
    for (v, var) in schema.variables().iter().enumerate() {
        for c in 0..var.cardinality() {
            map.push((v, c));
        }
    }
    map
}

impl<T: Real> IndicatorMatrix<T> {
    pub fn new(
        column_map: Vec<(usize, usize)>,
        values: Matrix<T>,
        strict_one_hot: bool,
    ) -> Result<Self, TabularError> {
        assert_eq!(column_map.len(), values.cols(), "column map width mismatch");
        let m = Self { column_map, values, strict_one_hot };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), TabularError> {
        for r in 0..self.values.rows() {
            for (c, &x) in self.values.row(r).iter().enumerate() {
                if !(x >= T::zero() && x <= T::one()) {
                    return Err(TabularError::IndicatorOutOfRange {
                        row: r,
                        col: c,
                        value: to_f64(x),
                    });
                }
            }
        }
        if self.strict_one_hot {
            for r in 0..self.values.rows() {
                for (variable, block) in self.blocks() {
                    let row = self.values.row(r);
                    let mut ones = 0usize;
                    let mut sum = T::zero();
                    for &x in &row[block.clone()] {
                        if x == T::one() {
                            ones += 1;
                        } else if x != T::zero() {
                            return Err(TabularError::NotOneHot {
                                row: r,
                                variable: variable.to_string(),
                            });
                        }
                        sum = sum + x;
                    }
                    if ones != 1 || sum != T::one() {
                        return Err(TabularError::NotOneHot {
                            row: r,
                            variable: variable.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn column_map(&self) -> &[(usize, usize)] {
        &self.column_map
    }

    pub fn values(&self) -> &Matrix<T> {
        &self.values
    }

    pub fn strict_one_hot(&self) -> bool {
        self.strict_one_hot
    }

    pub fn n_rows(&self) -> usize {
        self.values.rows()
    }

    pub fn width(&self) -> usize {
        self.values.cols()
    }

    /// Contiguous column ranges per variable, labelled with a stable
    /// variable key (the variable index as it appears in the map).
    fn blocks(&self) -> Vec<(usize, std::ops::Range<usize>)> {
        let mut blocks: Vec<(usize, std::ops::Range<usize>)> = Vec::new();
        for (col, &(variable, _)) in self.column_map.iter().enumerate() {
            match blocks.last_mut() {
                Some((v, range)) if *v == variable => range.end = col + 1,
                _ => blocks.push((variable, col..col + 1)),
            }
        }
        blocks
    }

    /// Column ranges per variable in schema order; errors if the map
    /// is not the canonical one for `schema`.
    pub fn blocks_for(
        &self,
        schema: &Schema,
    ) -> Result<Vec<std::ops::Range<usize>>, TabularError> {
        if self.column_map != column_map_for(schema) {
            return Err(TabularError::ColumnMapMismatch);
        }
        let mut out = Vec::with_capacity(schema.len());
        let mut start = 0;
        for var in schema.variables() {
            let end = start + var.cardinality();
            if start == end {
                return Err(TabularError::EmptyBlock { variable: var.name.clone() });
            }
            out.push(start..end);
            start = end;
        }
        Ok(out)
    }

    /// Keep only the columns in `cols`, in order. The result is never
    /// marked strict.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let values = Matrix::from_fn(self.values.rows(), cols.len(), |r, j| {
            self.values.get(r, cols[j])
        });
        Self {
            column_map: cols.iter().map(|&c| self.column_map[c]).collect(),
            values,
            strict_one_hot: false,
        }
    }
}

/// Strict one-hot encoding of a categorical table.
pub fn one_hot_encode<T: Real>(table: &CategoricalTable) -> IndicatorMatrix<T> {
    let schema = table.schema();
    let column_map = column_map_for(schema);
    let width = column_map.len();
    let mut offsets = Vec::with_capacity(schema.len());
    let mut acc = 0;
    for var in schema.variables() {
        offsets.push(acc);
        acc += var.cardinality();
    }
    let mut values = Matrix::zeros(table.n_rows(), width);
    for (r, row) in table.rows().iter().enumerate() {
        for (v, &cat) in row.iter().enumerate() {
            values.set(r, offsets[v] + cat, T::one());
        }
    }
    IndicatorMatrix { column_map, values, strict_one_hot: true }
}

/// Decode indicators back to categories: per variable block, the
/// category is the argmax, ties broken by the lowest category index.
pub fn one_hot_decode<T: Real>(
    m: &IndicatorMatrix<T>,
    schema: &Schema,
) -> Result<CategoricalTable, TabularError> {
    let blocks = m.blocks_for(schema)?;
    let mut rows = Vec::with_capacity(m.n_rows());
    for r in 0..m.n_rows() {
        let row = m.values().row(r);
        let mut decoded = Vec::with_capacity(schema.len());
        for block in &blocks {
            let slice = &row[block.clone()];
            let mut best = 0usize;
            let mut best_val = slice[0];
            for (i, &x) in slice.iter().enumerate().skip(1) {
                if x > best_val {
                    best = i;
                    best_val = x;
                }
            }
            decoded.push(best);
        }
        rows.push(decoded);
    }
    CategoricalTable::new(schema.clone(), rows)
}
