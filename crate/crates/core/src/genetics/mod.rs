//! Variation and selection operators for logical trees.
//!
//! The classical operators ([`rank_select`], [`crossover`], [`mutate`]) are
//! shared by both evolution loops. The fitness-gated operators
//! ([`positive_crossover`], [`positive_mutation`], [`weight_adjustment`],
//! [`extension_mutation`]) only ever return results at least as fit as their
//! inputs.

mod crossover;
mod mutation;
mod positive;
mod selection;

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::data::Dataset;
use crate::metrics::ConfusionMatrix;
use crate::tree::{format_tree, ExprTree, GenBounds, Generator, OpClass, Variant};

pub use crossover::{crossover, crossover_with_limits, swap_subtrees, CROSSOVER_ATTEMPTS};
pub use mutation::{mutate, mutate_class, mutate_term, sample_mutation_class};
pub use positive::{
    extension_mutation, positive_crossover, positive_mutation, weight_adjustment, EXTENSION_NODE_CAP,
    WEIGHT_SHIFT_STDDEV,
};
pub use selection::rank_select;

/// Activations at or above this value predict the positive class.
pub const DECISION_THRESHOLD: f64 = 0.5;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GeneticsError {
    #[error("empty population")]
    EmptyPopulation,
    #[error("individual has not been evaluated")]
    Unevaluated,
    #[error("hard trees carry no weights")]
    HardVariant,
    #[error("degenerate labels: both classes are required")]
    DegenerateLabels,
}

/// A tree with its cached training fitness. Any change to the tree goes
/// through [`Individual::new`], which leaves the fitness unset.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub tree: ExprTree,
    fitness: Option<f64>,
}

impl Individual {
    pub fn new(tree: ExprTree) -> Self {
        Individual { tree, fitness: None }
    }

    pub fn with_fitness(tree: ExprTree, fitness: f64) -> Self {
        Individual {
            tree,
            fitness: Some(fitness),
        }
    }

    pub fn fitness(&self) -> Option<f64> {
        self.fitness
    }

    pub fn is_evaluated(&self) -> bool {
        self.fitness.is_some()
    }

    pub(crate) fn expect_fitness(&self) -> Result<f64, GeneticsError> {
        self.fitness.ok_or(GeneticsError::Unevaluated)
    }
}

/// Total order used wherever individuals are ranked: higher fitness first,
/// ties broken by the serialized tree so results never depend on input order.
pub(crate) struct Ranked<'a> {
    pub fitness: f64,
    pub text: String,
    pub ind: &'a Individual,
}

impl<'a> Ranked<'a> {
    pub fn new(ind: &'a Individual) -> Result<Self, GeneticsError> {
        Ok(Ranked {
            fitness: ind.expect_fitness()?,
            text: format_tree(&ind.tree),
            ind,
        })
    }

    pub fn better_first(a: &Ranked<'_>, b: &Ranked<'_>) -> Ordering {
        b.fitness.total_cmp(&a.fitness).then_with(|| a.text.cmp(&b.text))
    }
}

/// Index of the best individual under the ranking order.
pub fn best_index(pop: &[Individual]) -> Result<usize, GeneticsError> {
    extreme_index(pop, Ordering::Less)
}

/// Index of the worst individual under the ranking order.
pub fn worst_index(pop: &[Individual]) -> Result<usize, GeneticsError> {
    extreme_index(pop, Ordering::Greater)
}

fn extreme_index(pop: &[Individual], want: Ordering) -> Result<usize, GeneticsError> {
    if pop.is_empty() {
        return Err(GeneticsError::EmptyPopulation);
    }
    let mut best = 0;
    for i in 1..pop.len() {
        let a = pop[i].expect_fitness()?;
        let b = pop[best].expect_fitness()?;
        // only serialize on exact ties
        let ord = b
            .total_cmp(&a)
            .then_with(|| format_tree(&pop[i].tree).cmp(&format_tree(&pop[best].tree)));
        if ord == want {
            best = i;
        }
    }
    Ok(best)
}

/// Categorical weights for picking the node class a mutation targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationWeights {
    pub boolean: f64,
    pub comparison: f64,
    pub mathematical: f64,
    pub terms: f64,
}

impl Default for MutationWeights {
    fn default() -> Self {
        MutationWeights {
            boolean: 0.1,
            comparison: 0.2,
            mathematical: 0.3,
            terms: 0.5,
        }
    }
}

impl MutationWeights {
    pub fn weight(&self, class: OpClass) -> f64 {
        match class {
            OpClass::Boolean => self.boolean,
            OpClass::Comparison => self.comparison,
            OpClass::Mathematical => self.mathematical,
            OpClass::Term => self.terms,
        }
    }

    pub fn is_valid(&self) -> bool {
        let all = [self.boolean, self.comparison, self.mathematical, self.terms];
        all.iter().all(|w| w.is_finite() && *w >= 0.0) && all.iter().any(|w| *w > 0.0)
    }
}

/// Everything a mutation needs to grow fresh subtrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationParams {
    pub bounds: GenBounds,
    pub weights: MutationWeights,
    pub n_features: usize,
    pub const_range: (f64, f64),
}

impl VariationParams {
    pub fn new(n_features: usize, const_range: (f64, f64)) -> Self {
        VariationParams {
            bounds: GenBounds::default(),
            weights: MutationWeights::default(),
            n_features,
            const_range,
        }
    }

    pub fn generator(&self, variant: Variant) -> Generator {
        Generator::new(variant, self.bounds, self.n_features, self.const_range)
    }
}

/// Balanced-accuracy fitness on a fixed training set.
#[derive(Debug)]
pub struct FitnessEval {
    columns: Vec<Vec<f64>>,
    labels: Vec<u8>,
    evaluations: AtomicU64,
}

impl FitnessEval {
    pub fn new(train: &Dataset) -> Result<Self, GeneticsError> {
        if !train.has_both_classes() {
            return Err(GeneticsError::DegenerateLabels);
        }
        Ok(FitnessEval {
            columns: train.column_major(),
            labels: train.labels().to_vec(),
            evaluations: AtomicU64::new(0),
        })
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn confusion(&self, tree: &ExprTree) -> ConfusionMatrix {
        let activations = tree.eval_columns(&self.columns, self.labels.len());
        let mut cm = ConfusionMatrix::default();
        for (a, &y) in activations.iter().zip(&self.labels) {
            cm.record(y == 1, *a >= DECISION_THRESHOLD);
        }
        cm
    }

    pub fn fitness(&self, tree: &ExprTree) -> f64 {
        self.evaluations.fetch_add(1, AtomicOrdering::Relaxed);
        self.confusion(tree)
            .balanced_accuracy()
            .expect("both classes are present by construction")
    }

    pub fn evaluate(&self, ind: &mut Individual) {
        if ind.fitness.is_none() {
            ind.fitness = Some(self.fitness(&ind.tree));
        }
    }

    pub fn evaluated(&self, tree: ExprTree) -> Individual {
        let f = self.fitness(&tree);
        Individual::with_fitness(tree, f)
    }

    /// Number of fitness evaluations performed so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(AtomicOrdering::Relaxed)
    }
}
