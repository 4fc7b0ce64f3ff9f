//! The network itself: validation, exact joint probability, full-joint
//! enumeration and CPT fitting.

use crate::scalar::{real, to_f64, Real};
use crate::tabular::{CategoricalTable, Schema};

use super::{BayesNetError, Cpt, Dag};

/// Enumeration is a desk-scale oracle; refuse state spaces above this.
pub const DEFAULT_STATE_CAP: usize = 1 << 20;

const ENUMERATION_SUM_TOLERANCE: f64 = 1e-9;

/// A schema, a DAG over its variables, and one CPT per node.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesianNetwork<T = f64> {
    schema: Schema,
    dag: Dag,
    cpts: Vec<Cpt<T>>,
}

impl<T: Real> BayesianNetwork<T> {
    pub fn new(schema: Schema, dag: Dag, cpts: Vec<Cpt<T>>) -> Result<Self, BayesNetError> {
        if schema.len() != dag.n_nodes() {
            return Err(BayesNetError::SchemaSizeMismatch {
                schema: schema.len(),
                dag: dag.n_nodes(),
            });
        }
        if cpts.len() != dag.n_nodes() {
            return Err(BayesNetError::CptCountMismatch {
                cpts: cpts.len(),
                nodes: dag.n_nodes(),
            });
        }
        let cards = schema.cardinalities();
        for (node, cpt) in cpts.iter().enumerate() {
            let expected = dag.parents(node);
            if cpt.node() != node || cpt.parents() != expected.as_slice() {
                return Err(BayesNetError::ParentMismatch {
                    node,
                    declared: cpt.parents().to_vec(),
                    expected,
                });
            }
            let expected_cards: Vec<usize> =
                cpt.parents().iter().map(|&p| cards[p]).collect();
            if cpt.parent_cards() != expected_cards.as_slice() {
                return Err(BayesNetError::CptIncomplete {
                    node,
                    expected: expected_cards.iter().product(),
                    got: cpt.n_configurations(),
                });
            }
            if cpt.cardinality() != cards[node] {
                return Err(BayesNetError::CptRowWidth {
                    node,
                    got: cpt.cardinality(),
                    expected: cards[node],
                });
            }
        }
        Ok(Self { schema, dag, cpts })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn cpts(&self) -> &[Cpt<T>] {
        &self.cpts
    }

    pub fn cpt(&self, node: usize) -> &Cpt<T> {
        &self.cpts[node]
    }

    pub fn n_nodes(&self) -> usize {
        self.dag.n_nodes()
    }

    fn check_assignment(&self, assignment: &[usize]) -> Result<(), BayesNetError> {
        if assignment.len() != self.n_nodes() {
            return Err(BayesNetError::AssignmentArity {
                got: assignment.len(),
                expected: self.n_nodes(),
            });
        }
        for (node, &value) in assignment.iter().enumerate() {
            let categories = self.schema.variable(node).cardinality();
            if value >= categories {
                return Err(BayesNetError::AssignmentOutOfRange { node, value, categories });
            }
        }
        Ok(())
    }

    /// Exact probability of a full assignment: the product over nodes
    /// of P(node | parents) read from the CPTs.
    pub fn joint_probability(&self, assignment: &[usize]) -> Result<T, BayesNetError> {
        self.check_assignment(assignment)?;
        let mut product = T::one();
        for (node, cpt) in self.cpts.iter().enumerate() {
            let config: Vec<usize> =
                cpt.parents().iter().map(|&p| assignment[p]).collect();
            product = product * cpt.probability(&config, assignment[node]);
        }
        Ok(product)
    }
}

/// Probabilities of every full assignment, in mixed-radix rank order
/// (last variable fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable<T = f64> {
    cards: Vec<usize>,
    probabilities: Vec<T>,
}

impl<T: Real> JointTable<T> {
    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn rank(&self, assignment: &[usize]) -> usize {
        assert_eq!(assignment.len(), self.cards.len());
        let mut rank = 0usize;
        for (&value, &card) in assignment.iter().zip(&self.cards) {
            debug_assert!(value < card);
            rank = rank * card + value;
        }
        rank
    }

    pub fn assignment(&self, mut rank: usize) -> Vec<usize> {
        let mut assignment = vec![0usize; self.cards.len()];
        for i in (0..self.cards.len()).rev() {
            assignment[i] = rank % self.cards[i];
            rank /= self.cards[i];
        }
        assignment
    }

    pub fn probability_of(&self, assignment: &[usize]) -> T {
        self.probabilities[self.rank(assignment)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, T)> + '_ {
        (0..self.len()).map(|r| (self.assignment(r), self.probabilities[r]))
    }

    /// Marginal distribution of one variable.
    pub fn marginal(&self, variable: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.cards[variable]];
        for (assignment, p) in self.iter() {
            out[assignment[variable]] = out[assignment[variable]] + p;
        }
        out
    }

    /// Total variation distance to an empirical distribution given as
    /// counts over assignments (half the L1 distance).
    pub fn total_variation(&self, counts: &[u64]) -> f64 {
        assert_eq!(counts.len(), self.len());
        let n: u64 = counts.iter().sum();
        let n = n as f64;
        let mut l1 = 0.0;
        for (p, &c) in self.probabilities.iter().zip(counts) {
            l1 += (to_f64(*p) - c as f64 / n).abs();
        }
        l1 / 2.0
    }
}

/// Enumerate the full joint with the default state-space cap.
pub fn enumerate_joint<T: Real>(bn: &BayesianNetwork<T>) -> Result<JointTable<T>, BayesNetError> {
    enumerate_joint_with_cap(bn, DEFAULT_STATE_CAP)
}

/// Enumerate the full joint; errors when the state space exceeds `cap`.
///
/// The result always sums to 1 within 1e-9 (checked).
pub fn enumerate_joint_with_cap<T: Real>(
    bn: &BayesianNetwork<T>,
    cap: usize,
) -> Result<JointTable<T>, BayesNetError> {
    let cards = bn.schema().cardinalities();
    let mut size: u128 = 1;
    for &c in &cards {
        size = size.saturating_mul(c as u128);
    }
    if size > cap as u128 {
        return Err(BayesNetError::StateSpaceTooLarge { size, cap });
    }
    let total = size as usize;
    let mut probabilities = Vec::with_capacity(total);
    let mut assignment = vec![0usize; cards.len()];
    for rank in 0..total {
        // unrank in the table's own order
        let mut r = rank;
        for i in (0..cards.len()).rev() {
            assignment[i] = r % cards[i];
            r /= cards[i];
        }
        probabilities.push(bn.joint_probability(&assignment)?);
    }
    let sum: f64 = probabilities.iter().map(|&p| to_f64(p)).sum();
    debug_assert!(
        (sum - 1.0).abs() <= ENUMERATION_SUM_TOLERANCE * total as f64,
        "joint enumeration sums to {sum}"
    );
    Ok(JointTable { cards, probabilities })
}

/// Estimate CPTs from data by counting with Laplace smoothing:
/// P(x = c | cfg) = (count(c, cfg) + alpha) / (count(cfg) + alpha * k).
///
/// With `alpha = 0` an unobserved parent configuration leaves the
/// distribution undefined and is an error.
pub fn fit_cpts<T: Real>(
    table: &CategoricalTable,
    dag: &Dag,
    alpha: f64,
) -> Result<BayesianNetwork<T>, BayesNetError> {
    if alpha < 0.0 {
        return Err(BayesNetError::NegativeAlpha { alpha });
    }
    let schema = table.schema();
    if schema.len() != dag.n_nodes() {
        return Err(BayesNetError::SchemaSizeMismatch {
            schema: schema.len(),
            dag: dag.n_nodes(),
        });
    }
    let cards = schema.cardinalities();
    let mut cpts = Vec::with_capacity(dag.n_nodes());
    for node in 0..dag.n_nodes() {
        let parents = dag.parents(node);
        let parent_cards: Vec<usize> = parents.iter().map(|&p| cards[p]).collect();
        let n_configs: usize = parent_cards.iter().product();
        let k = cards[node];
        let mut counts = vec![vec![0u64; k]; n_configs];
        for row in table.rows() {
            let mut rank = 0usize;
            for (&p, &card) in parents.iter().zip(&parent_cards) {
                rank = rank * card + row[p];
            }
            counts[rank][row[node]] += 1;
        }
        let mut rows = Vec::with_capacity(n_configs);
        for (rank, config_counts) in counts.iter().enumerate() {
            let total: u64 = config_counts.iter().sum();
            if total == 0 && alpha == 0.0 {
                // reconstruct the offending configuration for the message
                let mut cfg = vec![0usize; parent_cards.len()];
                let mut r = rank;
                for i in (0..parent_cards.len()).rev() {
                    cfg[i] = r % parent_cards[i];
                    r /= parent_cards[i];
                }
                return Err(BayesNetError::UnobservedConfiguration { node, config: cfg });
            }
            let denom = total as f64 + alpha * k as f64;
            let row: Vec<T> = config_counts
                .iter()
                .map(|&c| real::<T>((c as f64 + alpha) / denom))
                .collect();
            rows.push(row);
        }
        cpts.push(Cpt::new(node, parents, parent_cards, rows)?);
    }
    BayesianNetwork::new(schema.clone(), dag.clone(), cpts)
}
