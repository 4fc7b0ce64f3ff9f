//! Model checkpoint JSON: config, schema binding, column map, and the
//! raw layer parameters of both networks. Parameters are stored as
//! `f64` nested arrays regardless of the working scalar.

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::nn::{Activation, Layer, Mlp};
use crate::scalar::{real, to_f64, Real};
use crate::tabular::{BinningSpec, SchemaDoc};

use super::{GanConfig, GanError, GanModel};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointDoc {
    pub config: GanConfig,
    pub schema: SchemaDoc,
    pub column_map: Vec<(usize, usize)>,
    pub generator: Vec<LayerDoc>,
    pub discriminator: Vec<LayerDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerDoc {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

fn layers_to_doc<T: Real>(mlp: &Mlp<T>) -> Vec<LayerDoc> {
    mlp.layers()
        .iter()
        .map(|l| LayerDoc {
            weights: (0..l.weights.rows())
                .map(|r| l.weights.row(r).iter().map(|&x| to_f64(x)).collect())
                .collect(),
            bias: l.bias.iter().map(|&x| to_f64(x)).collect(),
            activation: l.activation,
        })
        .collect()
}

fn layers_from_doc<T: Real>(docs: &[LayerDoc]) -> Result<Mlp<T>, GanError> {
    if docs.is_empty() {
        return Err(GanError::Checkpoint("network has no layers".into()));
    }
    let mut layers = Vec::with_capacity(docs.len());
    for (i, doc) in docs.iter().enumerate() {
        let rows = doc.weights.len();
        let cols = doc.weights.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || doc.weights.iter().any(|r| r.len() != cols) {
            return Err(GanError::Checkpoint(format!("layer {i}: ragged weight matrix")));
        }
        if doc.bias.len() != rows {
            return Err(GanError::Checkpoint(format!("layer {i}: bias length mismatch")));
        }
        if i > 0 && layers.last().map(|l: &Layer<T>| l.output_dim()) != Some(cols) {
            return Err(GanError::Checkpoint(format!("layer {i}: dimensions do not chain")));
        }
        let weights = Matrix::from_fn(rows, cols, |r, c| real::<T>(doc.weights[r][c]));
        layers.push(Layer {
            weights,
            bias: doc.bias.iter().map(|&b| real::<T>(b)).collect(),
            activation: doc.activation,
        });
    }
    Ok(Mlp::from_layers(layers))
}

impl CheckpointDoc {
    pub fn from_model<T: Real>(model: &GanModel<T>) -> Self {
        Self {
            config: model.config.clone(),
            schema: SchemaDoc::from_parts(model.schema(), &BinningSpec::new()),
            column_map: model.column_map().to_vec(),
            generator: layers_to_doc(&model.generator),
            discriminator: layers_to_doc(&model.discriminator),
        }
    }

    pub fn into_model<T: Real>(self) -> Result<GanModel<T>, GanError> {
        let (schema, _) = self.schema.into_parts()?;
        let generator = layers_from_doc::<T>(&self.generator)?;
        let discriminator = layers_from_doc::<T>(&self.discriminator)?;
        if generator.output_dim() != self.column_map.len()
            || discriminator.input_dim() != self.column_map.len()
            || schema.indicator_width() != self.column_map.len()
        {
            return Err(GanError::Checkpoint(
                "column map width disagrees with the networks or schema".into(),
            ));
        }
        Ok(GanModel::new(generator, discriminator, self.config, schema, self.column_map))
    }

    pub fn from_json(text: &str) -> Result<Self, GanError> {
        serde_json::from_str(text).map_err(|e| GanError::Checkpoint(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gan::train_gan;
    use crate::tabular::{CategoricalTable, Schema, Variable};

    #[test]
    fn checkpoint_round_trips_the_model() {
        let schema = Schema::new(
            vec![Variable::new("x", &["C1", "C2"]), Variable::new("y", &["C1", "C2"])],
            1,
        )
        .unwrap();
        let rows: Vec<Vec<usize>> = (0..32).map(|i| vec![i % 2, (i / 2) % 2]).collect();
        let table = CategoricalTable::new(schema, rows).unwrap();
        let cfg = GanConfig {
            latent_dim: 3,
            generator_hidden: vec![6],
            discriminator_hidden: vec![6],
            batch_size: 8,
            epochs: 2,
            seed: 1,
            ..GanConfig::default()
        };
        let (model, _) = train_gan::<f64>(&table, &cfg).unwrap();
        let doc = CheckpointDoc::from_model(&model);
        let text = doc.to_json();
        let back: GanModel<f64> = CheckpointDoc::from_json(&text).unwrap().into_model().unwrap();
        assert_eq!(model, back);
    }

    #[test]
    fn corrupt_checkpoints_are_rejected() {
        assert!(matches!(
            CheckpointDoc::from_json("{").unwrap_err(),
            GanError::Checkpoint(_)
        ));
    }
}
