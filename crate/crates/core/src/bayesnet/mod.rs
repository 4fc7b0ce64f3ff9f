//! Expert-structured Bayesian networks over a categorical schema:
//! DAG validation, CPT fitting with Laplace smoothing, exact joint
//! probabilities, full-joint enumeration and ancestral sampling.

mod cpt;
mod dag;
mod model_doc;
mod network;
mod sample;
mod student;

pub use cpt::Cpt;
pub use dag::Dag;
pub use model_doc::ModelDoc;
pub use network::{
    enumerate_joint, enumerate_joint_with_cap, fit_cpts, BayesianNetwork, JointTable,
    DEFAULT_STATE_CAP,
};
pub use sample::ancestral_sample;
pub use student::{student_fixture, student_fixture_benchmark, student_fixture_with};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BayesNetError {
    #[error("edge ({parent}, {child}) out of range for {nodes} nodes")]
    EdgeOutOfRange { parent: usize, child: usize, nodes: usize },
    #[error("self edge on node {node}")]
    SelfEdge { node: usize },
    #[error("duplicate edge ({parent}, {child})")]
    DuplicateEdge { parent: usize, child: usize },
    #[error("graph has a cycle through nodes {nodes:?}")]
    Cycle { nodes: Vec<usize> },
    #[error("CPT for node {node}: expected {expected} parent configurations, got {got}")]
    CptIncomplete { node: usize, expected: usize, got: usize },
    #[error("CPT for node {node}, configuration {config:?}: probabilities sum to {sum}, not 1")]
    CptRowNotNormalized { node: usize, config: Vec<usize>, sum: f64 },
    #[error("CPT for node {node}, configuration {config:?}: negative probability")]
    CptNegativeEntry { node: usize, config: Vec<usize> },
    #[error("CPT for node {node}: row width {got} != {expected} categories")]
    CptRowWidth { node: usize, got: usize, expected: usize },
    #[error("network has {cpts} CPTs for {nodes} nodes")]
    CptCountMismatch { cpts: usize, nodes: usize },
    #[error("CPT for node {node} declares parents {declared:?}, DAG has {expected:?}")]
    ParentMismatch { node: usize, declared: Vec<usize>, expected: Vec<usize> },
    #[error("schema has {schema} variables, DAG has {dag} nodes")]
    SchemaSizeMismatch { schema: usize, dag: usize },
    #[error("smoothing alpha must be >= 0, got {alpha}")]
    NegativeAlpha { alpha: f64 },
    #[error("alpha = 0 and parent configuration {config:?} of node {node} is unobserved")]
    UnobservedConfiguration { node: usize, config: Vec<usize> },
    #[error("assignment has {got} values, network has {expected} nodes")]
    AssignmentArity { got: usize, expected: usize },
    #[error("assignment value {value} out of range for node {node} ({categories} categories)")]
    AssignmentOutOfRange { node: usize, value: usize, categories: usize },
    #[error("state space of {size} assignments exceeds the cap of {cap}")]
    StateSpaceTooLarge { size: u128, cap: usize },
    #[error("fixture override for unknown node {name:?}")]
    UnknownOverrideNode { name: String },
    #[error("model document: {0}")]
    ModelDoc(String),
    #[error(transparent)]
    Tabular(#[from] crate::tabular::TabularError),
}
