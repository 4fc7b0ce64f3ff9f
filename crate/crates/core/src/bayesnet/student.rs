//! The five-node student admission network used throughout the tests
//! and as the CLI fixture generator.
//!
//! Nodes, in index order: exam level `el`, IQ level `iql`, aptitude
//! score `as`, marks `m`, admission `a`. Edges: `iql -> as`,
//! `el -> m`, `iql -> m`, `m -> a`, so the joint factorizes as
//! P(el) P(iql) P(as|iql) P(m|el,iql) P(a|m).

use crate::scalar::{real, Real};
use crate::tabular::{Schema, Variable};

use super::{BayesNetError, BayesianNetwork, Cpt, Dag};

pub const STUDENT_NODES: [&str; 5] = ["el", "iql", "as", "m", "a"];

fn student_schema() -> Schema {
    let variables = STUDENT_NODES
        .iter()
        .map(|name| Variable::new(*name, &["C1", "C2"]))
        .collect();
    // admission is the label to predict
    Schema::new(variables, 4).expect("student schema is valid")
}

fn student_dag() -> Dag {
    Dag::new(5, [(1, 2), (0, 3), (1, 3), (3, 4)]).expect("student DAG is acyclic")
}

fn rows<T: Real>(rows: &[[f64; 2]]) -> Vec<Vec<T>> {
    rows.iter().map(|r| vec![real(r[0]), real(r[1])]).collect()
}

/// Default CPTs: the anchor entries P(el=0)=0.7, P(iql=0)=0.8,
/// P(as=0|iql=0)=0.75, P(m=0|el=0,iql=0)=0.9, P(a=1|m=0)=0.6,
/// completed by complement within each row and by mirroring the anchor
/// row for every unlisted parent configuration.
fn default_tables() -> Vec<Vec<[f64; 2]>> {
    vec![
        vec![[0.7, 0.3]],
        vec![[0.8, 0.2]],
        vec![[0.75, 0.25], [0.25, 0.75]],
        vec![[0.9, 0.1], [0.1, 0.9], [0.1, 0.9], [0.1, 0.9]],
        vec![[0.4, 0.6], [0.6, 0.4]],
    ]
}

/// Sharpened CPTs for end-to-end benchmarking. The default tables give
/// the admission label a Bayes error of 0.4, which leaves any
/// classifier comparison inside the noise; these keep the same
/// structure but make the dependencies strong enough for the
/// classification task to separate a faithful generator from a broken
/// one.
fn benchmark_tables() -> Vec<Vec<[f64; 2]>> {
    vec![
        vec![[0.7, 0.3]],
        vec![[0.8, 0.2]],
        vec![[0.9, 0.1], [0.1, 0.9]],
        vec![[0.95, 0.05], [0.6, 0.4], [0.4, 0.6], [0.05, 0.95]],
        vec![[0.08, 0.92], [0.85, 0.15]],
    ]
}

fn build<T: Real>(tables: Vec<Vec<[f64; 2]>>) -> BayesianNetwork<T> {
    let schema = student_schema();
    let dag = student_dag();
    let cpts = tables
        .into_iter()
        .enumerate()
        .map(|(node, table)| {
            let parents = dag.parents(node);
            let cards = vec![2usize; parents.len()];
            Cpt::new(node, parents, cards, rows::<T>(&table)).expect("fixture CPT is valid")
        })
        .collect();
    BayesianNetwork::new(schema, dag, cpts).expect("fixture network is valid")
}

/// The student network with its default CPTs.
pub fn student_fixture<T: Real>() -> BayesianNetwork<T> {
    build(default_tables())
}

/// The student network with the sharpened benchmark CPTs.
pub fn student_fixture_benchmark<T: Real>() -> BayesianNetwork<T> {
    build(benchmark_tables())
}

/// The student network with some CPTs replaced.
///
/// Each override names a node and gives its full table as probability
/// rows in parent-rank order (parents ascending, last parent varies
/// fastest). Unnamed nodes keep their defaults.
pub fn student_fixture_with<T: Real>(
    overrides: &[(&str, Vec<Vec<T>>)],
) -> Result<BayesianNetwork<T>, BayesNetError> {
    let schema = student_schema();
    let dag = student_dag();
    let defaults = default_tables();
    let mut cpts = Vec::with_capacity(5);
    for node in 0..5 {
        let parents = dag.parents(node);
        let cards = vec![2usize; parents.len()];
        let name = STUDENT_NODES[node];
        let cpt = match overrides.iter().find(|(n, _)| *n == name) {
            Some((_, table)) => Cpt::new(node, parents, cards, table.clone())?,
            None => Cpt::new(node, parents, cards, rows::<T>(&defaults[node]))
                .expect("default fixture CPT is valid"),
        };
        cpts.push(cpt);
    }
    for (name, _) in overrides {
        if !STUDENT_NODES.contains(name) {
            return Err(BayesNetError::UnknownOverrideNode { name: name.to_string() });
        }
    }
    BayesianNetwork::new(schema, dag, cpts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayesnet::enumerate_joint;
    use crate::scalar::to_f64;

    #[test]
    fn default_fixture_satisfies_all_invariants() {
        // construction itself runs every validity check
        let bn: BayesianNetwork<f64> = student_fixture();
        assert_eq!(bn.n_nodes(), 5);
        let joint = enumerate_joint(&bn).unwrap();
        assert_eq!(joint.len(), 32);
        let total: f64 = joint.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn marks_depends_on_exam_and_iq_levels() {
        let bn: BayesianNetwork<f64> = student_fixture();
        assert_eq!(bn.cpt(3).parents(), &[0, 1]);
    }

    #[test]
    fn admission_depends_on_marks_only() {
        let bn: BayesianNetwork<f64> = student_fixture();
        assert_eq!(bn.cpt(4).parents(), &[3]);
    }

    #[test]
    fn hand_chained_product_matches_joint_probability() {
        let bn: BayesianNetwork<f64> = student_fixture();
        // (el, iql, as, m, a) = (0, 0, 0, 0, 1)
        let expected = 0.7 * 0.8 * 0.75 * 0.9 * 0.6;
        let p = bn.joint_probability(&[0, 0, 0, 0, 1]).unwrap();
        assert!((p - 0.2268).abs() < 1e-12);
        assert!((p - expected).abs() < 1e-15);
    }

    #[test]
    fn every_assignment_matches_an_independent_recomputation() {
        let bn: BayesianNetwork<f64> = student_fixture();
        let joint = enumerate_joint(&bn).unwrap();
        for (assignment, p) in joint.iter() {
            let (el, iql, asc, m, a) =
                (assignment[0], assignment[1], assignment[2], assignment[3], assignment[4]);
            // term-by-term product straight off the factorization
            let expected = to_f64(bn.cpt(0).probability(&[], el))
                * to_f64(bn.cpt(1).probability(&[], iql))
                * to_f64(bn.cpt(2).probability(&[iql], asc))
                * to_f64(bn.cpt(3).probability(&[el, iql], m))
                * to_f64(bn.cpt(4).probability(&[m], a));
            assert!((to_f64(p) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn overrides_replace_named_nodes_only() {
        let bn = student_fixture_with::<f64>(&[(
            "el",
            vec![vec![0.5, 0.5]],
        )])
        .unwrap();
        assert_eq!(bn.cpt(0).row(&[]), &[0.5, 0.5]);
        assert_eq!(bn.cpt(1).row(&[]), &[0.8, 0.2]);
    }

    #[test]
    fn malformed_overrides_are_rejected() {
        // wrong node name
        assert!(matches!(
            student_fixture_with::<f64>(&[("zz", vec![vec![0.5, 0.5]])]).unwrap_err(),
            BayesNetError::UnknownOverrideNode { .. }
        ));
        // wrong number of rows for m (needs 4)
        assert!(student_fixture_with::<f64>(&[("m", vec![vec![0.5, 0.5]])]).is_err());
        // row that does not normalize
        assert!(student_fixture_with::<f64>(&[("el", vec![vec![0.5, 0.6]])]).is_err());
    }

    #[test]
    fn benchmark_fixture_is_valid_and_shares_the_structure() {
        let bn: BayesianNetwork<f64> = student_fixture_benchmark();
        let joint = enumerate_joint(&bn).unwrap();
        let total: f64 = joint.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert_eq!(bn.cpt(3).parents(), &[0, 1]);
        assert_eq!(bn.cpt(4).parents(), &[3]);
    }
}
