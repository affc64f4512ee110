//! The GP and SGP evolution loops and the trained classifier.

mod config;
mod gp;
mod sgp;

use crate::data::Dataset;
use crate::genetics::{GeneticsError, Individual, VariationParams, DECISION_THRESHOLD};
use crate::metrics::{confusion, MetricsError};
use crate::tree::{format_model, ExprTree, Variant};

pub use config::{ConfigError, EvolutionConfig};
pub use gp::{fit_gp, GpRun};
pub use sgp::{fit_sgp, migrate, SgpRun};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum EvolveError {
    #[error("degenerate labels: training data must contain both classes")]
    DegenerateLabels,
    #[error("row has {found} features, model expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Genetics(GeneticsError),
}

impl From<GeneticsError> for EvolveError {
    fn from(e: GeneticsError) -> Self {
        match e {
            GeneticsError::DegenerateLabels => EvolveError::DegenerateLabels,
            other => EvolveError::Genetics(other),
        }
    }
}

/// A trained logical-tree classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct Classifier {
    pub variant: Variant,
    pub model: ExprTree,
    pub n_features: usize,
    pub threshold: f64,
    pub train_fitness: f64,
    pub generations_run: usize,
    pub config: EvolutionConfig,
    /// Best-ever training fitness after initialisation and after each generation.
    pub best_history: Vec<f64>,
}

impl Classifier {
    /// Model text as written by `format_model`.
    pub fn model_text(&self) -> String {
        format_model(&self.model, self.n_features)
    }

    pub fn activation(&self, row: &[f64]) -> Result<f64, EvolveError> {
        check_dims(self.n_features, row)?;
        Ok(self.model.eval(row))
    }

    pub fn predict(&self, row: &[f64]) -> Result<u8, EvolveError> {
        predict(&self.model, self.n_features, row)
    }

    pub fn predict_all(&self, ds: &Dataset) -> Result<Vec<u8>, EvolveError> {
        predict_all(&self.model, self.n_features, ds)
    }

    pub fn score(&self, test: &Dataset) -> Result<f64, EvolveError> {
        score(&self.model, self.n_features, test)
    }
}

fn check_dims(expected: usize, row: &[f64]) -> Result<(), EvolveError> {
    if row.len() != expected {
        return Err(EvolveError::DimensionMismatch {
            expected,
            found: row.len(),
        });
    }
    Ok(())
}

/// Label 1 iff the activation reaches the decision threshold.
pub fn predict(model: &ExprTree, n_features: usize, row: &[f64]) -> Result<u8, EvolveError> {
    check_dims(n_features, row)?;
    Ok(u8::from(model.eval(row) >= DECISION_THRESHOLD))
}

pub fn predict_all(model: &ExprTree, n_features: usize, ds: &Dataset) -> Result<Vec<u8>, EvolveError> {
    if ds.n_features() != n_features {
        return Err(EvolveError::DimensionMismatch {
            expected: n_features,
            found: ds.n_features(),
        });
    }
    let act = model.eval_columns(&ds.column_major(), ds.n_rows());
    Ok(act.iter().map(|&a| u8::from(a >= DECISION_THRESHOLD)).collect())
}

/// Balanced accuracy of the model's predictions on `test`.
pub fn score(model: &ExprTree, n_features: usize, test: &Dataset) -> Result<f64, EvolveError> {
    let pred = predict_all(model, n_features, test)?;
    Ok(confusion(test.labels(), &pred)?.balanced_accuracy()?)
}

/// Range new constants are drawn from: the training features' range, or
/// `[-1, 1]` when that is empty or degenerate.
pub fn const_range(train: &Dataset) -> (f64, f64) {
    match train.feature_range() {
        Some((lo, hi)) if lo < hi => (lo, hi),
        Some((v, _)) => (v - 1.0, v + 1.0),
        None => (-1.0, 1.0),
    }
}

fn variation_params(train: &Dataset, cfg: &EvolutionConfig) -> VariationParams {
    VariationParams {
        bounds: cfg.bounds,
        ..VariationParams::new(train.n_features(), const_range(train))
    }
}

fn check_train(train: &Dataset, cfg: &EvolutionConfig) -> Result<(), EvolveError> {
    cfg.validate()?;
    if !train.has_both_classes() {
        return Err(EvolveError::DegenerateLabels);
    }
    Ok(())
}

fn classifier(
    best: &Individual,
    n_features: usize,
    generations_run: usize,
    cfg: &EvolutionConfig,
    history: Vec<f64>,
) -> Classifier {
    Classifier {
        variant: best.tree.variant,
        model: best.tree.clone(),
        n_features,
        threshold: DECISION_THRESHOLD,
        train_fitness: best.fitness().expect("best individual is evaluated"),
        generations_run,
        config: *cfg,
        best_history: history,
    }
}
