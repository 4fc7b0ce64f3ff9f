//! The network model JSON document.
//!
//! ```json
//! {
//!   "nodes": [{"name": "el", "categories": ["C1", "C2"]}, ...],
//!   "edges": [["iql", "as"], ["m", "a"]],
//!   "target": "a",
//!   "cpts": {
//!     "el": {"": [0.7, 0.3]},
//!     "as": {"0": [0.75, 0.25], "1": [0.25, 0.75]}
//!   }
//! }
//! ```
//!
//! A CPT key is the parent configuration: category indices joined by
//! commas, parents in ascending node order; root nodes use the empty
//! string. `cpts` may be omitted entirely, leaving a structure-only
//! document (the input to fitting). `target` defaults to the last
//! node.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::{real, to_f64, Real};
use crate::tabular::{Schema, Variable};

use super::{BayesNetError, BayesianNetwork, Cpt, Dag};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDoc {
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cpts: BTreeMap<String, BTreeMap<String, Vec<f64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeDoc {
    pub name: String,
    pub categories: Vec<String>,
}

impl ModelDoc {
    pub fn from_json(text: &str) -> Result<Self, BayesNetError> {
        serde_json::from_str(text).map_err(|e| BayesNetError::ModelDoc(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model doc serializes")
    }

    /// Schema and DAG of the document, ignoring any CPTs.
    pub fn structure(&self) -> Result<(Schema, Dag), BayesNetError> {
        let variables: Vec<Variable> = self
            .nodes
            .iter()
            .map(|n| Variable { name: n.name.clone(), categories: n.categories.clone() })
            .collect();
        let index_of = |name: &str| {
            variables
                .iter()
                .position(|v| v.name == name)
                .ok_or_else(|| BayesNetError::ModelDoc(format!("unknown node {name:?} in edges")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (parent, child) in &self.edges {
            edges.push((index_of(parent)?, index_of(child)?));
        }
        let target_index = match &self.target {
            None => variables.len().saturating_sub(1),
            Some(name) => variables.iter().position(|v| &v.name == name).ok_or_else(|| {
                BayesNetError::ModelDoc(format!("target {name:?} is not a node"))
            })?,
        };
        let schema = Schema::new(variables, target_index)?;
        let dag = Dag::new(schema.len(), edges)?;
        Ok((schema, dag))
    }

    pub fn has_cpts(&self) -> bool {
        !self.cpts.is_empty()
    }

    /// Build the full network; requires `cpts` to be present and complete.
    pub fn into_network<T: Real>(&self) -> Result<BayesianNetwork<T>, BayesNetError> {
        let (schema, dag) = self.structure()?;
        let cards = schema.cardinalities();
        let mut cpts = Vec::with_capacity(schema.len());
        for node in 0..schema.len() {
            let name = &schema.variable(node).name;
            let table = self.cpts.get(name).ok_or_else(|| {
                BayesNetError::ModelDoc(format!("missing CPT for node {name:?}"))
            })?;
            let parents = dag.parents(node);
            let parent_cards: Vec<usize> = parents.iter().map(|&p| cards[p]).collect();
            let n_configs: usize = parent_cards.iter().product();
            let mut rows: Vec<Vec<T>> = vec![Vec::new(); n_configs];
            let mut seen = 0usize;
            for (key, probs) in table {
                let config = parse_config_key(key, name)?;
                if config.len() != parents.len() {
                    return Err(BayesNetError::ModelDoc(format!(
                        "CPT key {key:?} for node {name:?} has {} indices, expected {}",
                        config.len(),
                        parents.len()
                    )));
                }
                for (i, (&v, &card)) in config.iter().zip(&parent_cards).enumerate() {
                    if v >= card {
                        return Err(BayesNetError::ModelDoc(format!(
                            "CPT key {key:?} for node {name:?}: index {v} out of range at position {i}"
                        )));
                    }
                }
                let mut rank = 0usize;
                for (&v, &card) in config.iter().zip(&parent_cards) {
                    rank = rank * card + v;
                }
                if !rows[rank].is_empty() {
                    return Err(BayesNetError::ModelDoc(format!(
                        "duplicate CPT configuration {key:?} for node {name:?}"
                    )));
                }
                rows[rank] = probs.iter().map(|&p| real::<T>(p)).collect();
                seen += 1;
            }
            if seen != n_configs || rows.iter().any(Vec::is_empty) {
                return Err(BayesNetError::CptIncomplete {
                    node,
                    expected: n_configs,
                    got: seen,
                });
            }
            cpts.push(Cpt::new(node, parents, parent_cards, rows)?);
        }
        BayesianNetwork::new(schema, dag, cpts)
    }

    /// Document for a fitted network (structure plus CPTs).
    pub fn from_network<T: Real>(bn: &BayesianNetwork<T>) -> Self {
        let schema = bn.schema();
        let nodes = schema
            .variables()
            .iter()
            .map(|v| NodeDoc { name: v.name.clone(), categories: v.categories.clone() })
            .collect();
        let edges = bn
            .dag()
            .edges()
            .map(|(p, c)| {
                (schema.variable(p).name.clone(), schema.variable(c).name.clone())
            })
            .collect();
        let mut cpts = BTreeMap::new();
        for node in 0..schema.len() {
            let cpt = bn.cpt(node);
            let mut table = BTreeMap::new();
            for rank in 0..cpt.n_configurations() {
                let key = cpt
                    .unrank(rank)
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                let row = cpt.row_at_rank(rank).iter().map(|&p| to_f64(p)).collect();
                table.insert(key, row);
            }
            cpts.insert(schema.variable(node).name.clone(), table);
        }
        Self {
            nodes,
            edges,
            target: Some(schema.target().name.clone()),
            cpts,
        }
    }

    /// Structure-only document (no CPTs).
    pub fn from_structure(schema: &Schema, dag: &Dag) -> Self {
        Self {
            nodes: schema
                .variables()
                .iter()
                .map(|v| NodeDoc { name: v.name.clone(), categories: v.categories.clone() })
                .collect(),
            edges: dag
                .edges()
                .map(|(p, c)| {
                    (schema.variable(p).name.clone(), schema.variable(c).name.clone())
                })
                .collect(),
            target: Some(schema.target().name.clone()),
            cpts: BTreeMap::new(),
        }
    }
}

fn parse_config_key(key: &str, node: &str) -> Result<Vec<usize>, BayesNetError> {
    if key.is_empty() {
        return Ok(Vec::new());
    }
    key.split(',')
        .map(|part| {
            part.trim().parse::<usize>().map_err(|_| {
                BayesNetError::ModelDoc(format!("bad CPT key {key:?} for node {node:?}"))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayesnet::student_fixture;

    #[test]
    fn network_round_trips_through_the_document() {
        let bn: BayesianNetwork<f64> = student_fixture();
        let doc = ModelDoc::from_network(&bn);
        let text = doc.to_json();
        let back: BayesianNetwork<f64> =
            ModelDoc::from_json(&text).unwrap().into_network().unwrap();
        assert_eq!(bn, back);
    }

    #[test]
    fn structure_only_documents_parse() {
        let doc = r#"{
            "nodes": [{"name":"a","categories":["C1","C2"]},
                      {"name":"b","categories":["C1","C2"]}],
            "edges": [["a","b"]]
        }"#;
        let doc = ModelDoc::from_json(doc).unwrap();
        assert!(!doc.has_cpts());
        let (schema, dag) = doc.structure().unwrap();
        assert_eq!(schema.target_index(), 1);
        assert_eq!(dag.parents(1), vec![0]);
        assert!(matches!(
            doc.into_network::<f64>().unwrap_err(),
            BayesNetError::ModelDoc(_)
        ));
    }

    #[test]
    fn bad_edges_and_keys_are_reported() {
        let doc = r#"{
            "nodes": [{"name":"a","categories":["C1","C2"]}],
            "edges": [["a","zz"]]
        }"#;
        assert!(matches!(
            ModelDoc::from_json(doc).unwrap().structure().unwrap_err(),
            BayesNetError::ModelDoc(_)
        ));

        let doc = r#"{
            "nodes": [{"name":"a","categories":["C1","C2"]},
                      {"name":"b","categories":["C1","C2"]}],
            "edges": [["a","b"]],
            "cpts": {"a": {"": [0.5,0.5]}, "b": {"x": [1.0,0.0], "1": [0.0,1.0]}}
        }"#;
        assert!(matches!(
            ModelDoc::from_json(doc).unwrap().into_network::<f64>().unwrap_err(),
            BayesNetError::ModelDoc(_)
        ));
    }
}
