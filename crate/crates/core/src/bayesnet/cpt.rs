//! Conditional probability tables.

use crate::scalar::{real, to_f64, Real};

use super::BayesNetError;

const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Distribution of one node's categories for every configuration of
/// its parents.
///
/// Rows are stored densely, indexed by the mixed-radix rank of the
/// parent configuration (parents in the declared, ascending order; the
/// last parent varies fastest). A root node has one row at rank 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt<T = f64> {
    node: usize,
    parents: Vec<usize>,
    parent_cards: Vec<usize>,
    rows: Vec<Vec<T>>,
}

impl<T: Real> Cpt<T> {
    pub fn new(
        node: usize,
        parents: Vec<usize>,
        parent_cards: Vec<usize>,
        rows: Vec<Vec<T>>,
    ) -> Result<Self, BayesNetError> {
        assert_eq!(parents.len(), parent_cards.len(), "parent arity mismatch");
        let expected: usize = parent_cards.iter().product();
        if rows.len() != expected {
            return Err(BayesNetError::CptIncomplete { node, expected, got: rows.len() });
        }
        let width = rows.first().map_or(0, Vec::len);
        let cpt = Self { node, parents, parent_cards, rows };
        for rank in 0..cpt.rows.len() {
            let row = &cpt.rows[rank];
            if row.len() != width || width < 2 {
                return Err(BayesNetError::CptRowWidth {
                    node,
                    got: row.len(),
                    expected: width.max(2),
                });
            }
            let config = cpt.unrank(rank);
            let mut sum = T::zero();
            for &p in row {
                if p < T::zero() {
                    return Err(BayesNetError::CptNegativeEntry { node, config });
                }
                sum = sum + p;
            }
            if (to_f64(sum) - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(BayesNetError::CptRowNotNormalized {
                    node,
                    config,
                    sum: to_f64(sum),
                });
            }
        }
        Ok(cpt)
    }

    pub fn node(&self) -> usize {
        self.node
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn parent_cards(&self) -> &[usize] {
        &self.parent_cards
    }

    /// Number of categories of the node itself.
    pub fn cardinality(&self) -> usize {
        self.rows[0].len()
    }

    pub fn n_configurations(&self) -> usize {
        self.rows.len()
    }

    /// Rank of a parent configuration (last parent fastest).
    pub fn rank(&self, config: &[usize]) -> usize {
        assert_eq!(config.len(), self.parents.len(), "configuration arity mismatch");
        let mut rank = 0usize;
        for (&value, &card) in config.iter().zip(&self.parent_cards) {
            debug_assert!(value < card);
            rank = rank * card + value;
        }
        rank
    }

    /// Inverse of [`Cpt::rank`].
    pub fn unrank(&self, mut rank: usize) -> Vec<usize> {
        let mut config = vec![0usize; self.parent_cards.len()];
        for i in (0..self.parent_cards.len()).rev() {
            config[i] = rank % self.parent_cards[i];
            rank /= self.parent_cards[i];
        }
        config
    }

    /// Probability vector for a parent configuration.
    pub fn row(&self, config: &[usize]) -> &[T] {
        &self.rows[self.rank(config)]
    }

    pub fn row_at_rank(&self, rank: usize) -> &[T] {
        &self.rows[rank]
    }

    /// P(node = `category` | parents = `config`).
    pub fn probability(&self, config: &[usize], category: usize) -> T {
        self.row(config)[category]
    }

    /// Rebuild with each probability converted through `f64`.
    pub fn map_scalar<U: Real>(&self) -> Cpt<U> {
        Cpt {
            node: self.node,
            parents: self.parents.clone(),
            parent_cards: self.parent_cards.clone(),
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|&p| real::<U>(to_f64(p))).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_cpt_has_single_row() {
        let cpt: Cpt<f64> = Cpt::new(0, vec![], vec![], vec![vec![0.3, 0.7]]).unwrap();
        assert_eq!(cpt.n_configurations(), 1);
        assert_eq!(cpt.probability(&[], 0), 0.3);
    }

    #[test]
    fn rank_uses_last_parent_fastest() {
        let rows = vec![
            vec![1.0, 0.0], // (0,0)
            vec![0.0, 1.0], // (0,1)
            vec![0.5, 0.5], // (1,0)
            vec![0.25, 0.75], // (1,1)
        ];
        let cpt: Cpt<f64> = Cpt::new(2, vec![0, 1], vec![2, 2], rows).unwrap();
        assert_eq!(cpt.rank(&[0, 1]), 1);
        assert_eq!(cpt.rank(&[1, 0]), 2);
        assert_eq!(cpt.unrank(3), vec![1, 1]);
        assert_eq!(cpt.row(&[1, 1]), &[0.25, 0.75]);
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let err = Cpt::<f64>::new(1, vec![0], vec![2], vec![vec![0.5, 0.5]]).unwrap_err();
        assert!(matches!(err, BayesNetError::CptIncomplete { expected: 2, got: 1, .. }));
    }

    #[test]
    fn unnormalized_row_is_rejected() {
        let err = Cpt::<f64>::new(0, vec![], vec![], vec![vec![0.5, 0.6]]).unwrap_err();
        assert!(matches!(err, BayesNetError::CptRowNotNormalized { .. }));
    }

    #[test]
    fn negative_entry_is_rejected() {
        let err = Cpt::<f64>::new(0, vec![], vec![], vec![vec![-0.1, 1.1]]).unwrap_err();
        assert!(matches!(err, BayesNetError::CptNegativeEntry { .. }));
    }
}
