//! The schema-and-binning JSON document.
//!
//! ```json
//! {
//!   "variables": [{"name": "V1", "categories": ["C1", "C2"]}, ...],
//!   "target": "V4",
//!   "bins": {"V1": {"cuts": [2.5], "labels": ["C1", "C2"]}}
//! }
//! ```
//!
//! `target` may be a variable name or an index and defaults to the
//! last variable; `bins` is optional.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BinningSpec, Schema, TabularError, Variable};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemaDoc {
    pub variables: Vec<VariableDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetRef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bins: BTreeMap<String, BinsDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VariableDoc {
    pub name: String,
    pub categories: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BinsDoc {
    pub cuts: Vec<f64>,
    pub labels: Vec<String>,
}

impl SchemaDoc {
    pub fn from_json(text: &str) -> Result<Self, TabularError> {
        serde_json::from_str(text).map_err(|e| TabularError::SchemaDoc(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema doc serializes")
    }

    pub fn from_parts(schema: &Schema, bins: &BinningSpec) -> Self {
        Self {
            variables: schema
                .variables()
                .iter()
                .map(|v| VariableDoc { name: v.name.clone(), categories: v.categories.clone() })
                .collect(),
            target: Some(TargetRef::Name(schema.target().name.clone())),
            bins: bins
                .iter()
                .map(|(name, b)| {
                    (name.clone(), BinsDoc { cuts: b.cuts.clone(), labels: b.labels.clone() })
                })
                .collect(),
        }
    }

    /// Resolve into validated domain values.
    pub fn into_parts(self) -> Result<(Schema, BinningSpec), TabularError> {
        let variables: Vec<Variable> = self
            .variables
            .into_iter()
            .map(|v| Variable { name: v.name, categories: v.categories })
            .collect();
        let target_index = match &self.target {
            None => variables.len().saturating_sub(1),
            Some(TargetRef::Index(i)) => *i,
            Some(TargetRef::Name(name)) => variables
                .iter()
                .position(|v| &v.name == name)
                .ok_or_else(|| {
                    TabularError::SchemaDoc(format!("target {name:?} is not a variable"))
                })?,
        };
        let schema = Schema::new(variables, target_index)?;
        let mut spec = BinningSpec::new();
        for (column, b) in self.bins {
            spec.insert(column, b.cuts, b.labels)?;
        }
        Ok((schema, spec))
    }
}
