//! Datasets: ingestion, benchmark fetching, shuffling/splitting and the
//! synthetic 2D generators.

mod pmlb;
mod synthetic;
mod table;

use std::io;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use pmlb::{fetch_pmlb, fetch_pmlb_from, pmlb_url, PMLB_BASE_URL};
pub use synthetic::{gen_synthetic, SyntheticKind};
pub use table::{delimiter_for, load_table, read_table, write_csv, RawTable};

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}: empty file")]
    Empty(String),
    #[error("{0}")]
    Malformed(String),
    #[error("target column `{0}` not found")]
    MissingTarget(String),
    #[error("target is not binary: found {0} distinct values")]
    NotBinary(usize),
    #[error("non-numeric cell `{value}` at row {row}, column `{column}`")]
    NonNumeric { row: usize, column: String, value: String },
    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),
    #[error("network failure fetching `{name}`: {reason}")]
    Network { name: String, reason: String },
    #[error("corrupt archive for `{name}`: {reason}")]
    Corrupt { name: String, reason: String },
    #[error("split ratio {0} outside (0, 1)")]
    InvalidRatio(f64),
    #[error("could not draw a split with both classes in train and test after {0} attempts")]
    SplitFailed(usize),
    #[error("unknown synthetic dataset kind `{0}`")]
    InvalidKind(String),
    #[error("{0}")]
    InvalidArgument(String),
}

/// Feature matrix with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub columns: Vec<String>,
    x: Vec<f64>,
    y: Vec<u8>,
}

impl Dataset {
    /// Builds a dataset from row vectors. Every row must have one value per
    /// column and every label must be 0 or 1.
    pub fn new(
        name: impl Into<String>,
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<u8>,
    ) -> Result<Self, DataError> {
        let n = columns.len();
        if n == 0 {
            return Err(DataError::InvalidArgument("dataset needs at least one feature".into()));
        }
        if rows.len() != labels.len() {
            return Err(DataError::InvalidArgument(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if let Some(bad) = labels.iter().find(|&&l| l > 1) {
            return Err(DataError::InvalidArgument(format!("label {bad} is not 0/1")));
        }
        let mut x = Vec::with_capacity(rows.len() * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(DataError::InvalidArgument(format!(
                    "row {i} has {} values, expected {n}",
                    row.len()
                )));
            }
            x.extend(row);
        }
        Ok(Dataset {
            name: name.into(),
            columns,
            x,
            y: labels,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.y.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n_features();
        &self.x[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.x.chunks_exact(self.n_features())
    }

    pub fn labels(&self) -> &[u8] {
        &self.y
    }

    /// Feature values stored column by column.
    pub fn column_major(&self) -> Vec<Vec<f64>> {
        (0..self.n_features())
            .map(|j| self.rows().map(|r| r[j]).collect())
            .collect()
    }

    /// (negatives, positives)
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.y.iter().filter(|&&l| l == 1).count();
        (self.y.len() - pos, pos)
    }

    pub fn has_both_classes(&self) -> bool {
        let (neg, pos) = self.class_counts();
        neg > 0 && pos > 0
    }

    /// Smallest and largest finite feature value over the whole matrix.
    pub fn feature_range(&self) -> Option<(f64, f64)> {
        self.x.iter().filter(|v| v.is_finite()).fold(None, |acc, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
    }

    /// Rows selected by index, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let n = self.n_features();
        let mut x = Vec::with_capacity(indices.len() * n);
        for &i in indices {
            x.extend_from_slice(self.row(i));
        }
        Dataset {
            name: self.name.clone(),
            columns: self.columns.clone(),
            x,
            y: indices.iter().map(|&i| self.y[i]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub train: Dataset,
    pub test: Dataset,
    pub ratio: f64,
    /// Row indices of the original dataset, train rows first.
    pub permutation: Vec<usize>,
}

const SPLIT_ATTEMPTS: usize = 100;

/// Shuffles rows under `seed` and puts the first `round(ratio · rows)` into
/// train. Permutations are redrawn until both sides contain both classes.
pub fn shuffle_split(ds: &Dataset, ratio: f64, seed: u64) -> Result<SplitPair, DataError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(DataError::InvalidRatio(ratio));
    }
    let n_train = (ratio * ds.n_rows() as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..ds.n_rows()).collect();
    for _ in 0..SPLIT_ATTEMPTS {
        perm.shuffle(&mut rng);
        let train = ds.subset(&perm[..n_train]);
        let test = ds.subset(&perm[n_train..]);
        if train.has_both_classes() && test.has_both_classes() {
            return Ok(SplitPair {
                train,
                test,
                ratio,
                permutation: perm,
            });
        }
    }
    Err(DataError::SplitFailed(SPLIT_ATTEMPTS))
}
