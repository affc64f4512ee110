//! Logical-tree classifiers evolved with classical genetic programming (GP)
//! and soft genetic programming (SGP).
//!
//! ```
//! use sgp_core::data::{gen_synthetic, shuffle_split, SyntheticKind};
//! use sgp_core::evolve::{fit_sgp, EvolutionConfig};
//!
//! let ds = gen_synthetic(SyntheticKind::Circles, 100, 0.1, 7).unwrap();
//! let split = shuffle_split(&ds, 0.7, 1).unwrap();
//! let cfg = EvolutionConfig { max_generation: 3, population_size: 20, ..EvolutionConfig::sgp_default() };
//! let cls = fit_sgp(&split.train, &cfg).unwrap();
//! let acc = cls.score(&split.test).unwrap();
//! assert!((0.0..=1.0).contains(&acc));
//! ```

pub mod data;
pub mod evolve;
pub mod genetics;
pub mod metrics;
pub mod tree;

pub use data::{DataError, Dataset};
pub use evolve::{fit_gp, fit_sgp, Classifier, EvolutionConfig, EvolveError};
pub use genetics::{FitnessEval, Individual};
pub use metrics::{balanced_accuracy, confusion, ConfusionMatrix};
pub use tree::{ExprTree, GenBounds, Node, OpClass, OpKind, Variant};
