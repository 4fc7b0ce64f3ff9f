//! Ancestral sampling.

use rand::Rng;

use crate::rng;
use crate::scalar::{to_f64, Real};
use crate::tabular::CategoricalTable;

use super::BayesianNetwork;

/// Draw `n` rows by sampling nodes in topological order, each from its
/// CPT row given the already-sampled parents.
///
/// One uniform is consumed per node per row, in topological order, and
/// each category is chosen by inverse CDF over the (f64-converted) CPT
/// row. This makes the draw sequence part of the reproducibility
/// contract: the same seed yields the same table for any scalar type.
///
/// Row blocks may be sampled independently by deriving block seeds
/// with [`rng::split_seed`] and concatenating in block order; the
/// sequential call here is the reference layout for block index 0.
pub fn ancestral_sample<T: Real>(
    bn: &BayesianNetwork<T>,
    n: usize,
    seed: u64,
) -> CategoricalTable {
    let order = bn
        .dag()
        .topological_order()
        .expect("network DAG is acyclic by construction");
    let mut stream = rng::stream(seed);
    let mut rows = Vec::with_capacity(n);
    let mut row = vec![0usize; bn.n_nodes()];
    for _ in 0..n {
        for &node in &order {
            let cpt = bn.cpt(node);
            let config: Vec<usize> = cpt.parents().iter().map(|&p| row[p]).collect();
            let probs = cpt.row(&config);
            let u: f64 = stream.gen();
            let mut acc = 0.0;
            let mut chosen = probs.len() - 1;
            for (c, &p) in probs.iter().enumerate() {
                acc += to_f64(p);
                if u < acc {
                    chosen = c;
                    break;
                }
            }
            row[node] = chosen;
        }
        rows.push(row.clone());
    }
    CategoricalTable::new(bn.schema().clone(), rows)
        .expect("sampled categories are in range by construction")
}
