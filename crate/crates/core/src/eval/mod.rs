//! The evaluation harness: descriptive statistics, distribution
//! curves, a kNN classifier under k-fold cross-validation, learning
//! curves, and the three-way real/BN/GAN comparison report.

mod cv;
mod knn;
mod metrics;
mod report;
mod stats;

pub use cv::{kfold_cv, learning_curve, LearningCurve};
pub use knn::knn_classify;
pub use metrics::{evaluate_classifier, BinaryCounts, ConfusionMatrix};
pub use report::{
    comparison_report, ComparisonReport, DatasetReport, EvalSettings, PairDelta, Protocol,
};
pub use stats::{
    descriptive_stats, distribution_curves, indicator_column_names, ColumnStats,
    DescriptiveStats, DistributionCurves, VariableDensity,
};

use thiserror::Error;

use crate::scalar::Real;
use crate::tabular::{one_hot_encode, CategoricalTable, IndicatorMatrix};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("need at least {need} rows, got {got}")]
    TooFewRows { got: usize, need: usize },
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("k = {k} exceeds the {rows} training rows")]
    KTooLarge { k: usize, rows: usize },
    #[error("k must be positive")]
    ZeroK,
    #[error("feature widths differ: train {train}, queries {queries}")]
    WidthMismatch { train: usize, queries: usize },
    #[error("label count {labels} does not match {rows} rows")]
    LabelCount { labels: usize, rows: usize },
    #[error("prediction and truth lengths differ: {truth} vs {predicted}")]
    LengthMismatch { truth: usize, predicted: usize },
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("need at least 2 folds, got {folds}")]
    BadFoldCount { folds: usize },
    #[error("learning-curve subset of {size} rows is smaller than {folds} folds")]
    SubsetTooSmall { size: usize, folds: usize },
    #[error("learning-curve fraction {fraction} outside (0, 1]")]
    BadCurveFraction { fraction: f64 },
    #[error("learning curve needs at least one size")]
    NoCurveSizes,
    #[error("datasets do not share a schema")]
    SchemaMismatch,
    #[error(transparent)]
    Tabular(#[from] crate::tabular::TabularError),
}

/// One-hot features with the target block removed, plus the labels.
///
/// kNN must never see the target's own indicator columns.
pub fn feature_matrix<T: Real>(table: &CategoricalTable) -> (IndicatorMatrix<T>, Vec<usize>) {
    let schema = table.schema();
    let encoded = one_hot_encode::<T>(table);
    let keep: Vec<usize> = encoded
        .column_map()
        .iter()
        .enumerate()
        .filter(|(_, (v, _))| *v != schema.target_index())
        .map(|(c, _)| c)
        .collect();
    (encoded.select_columns(&keep), table.labels())
}
