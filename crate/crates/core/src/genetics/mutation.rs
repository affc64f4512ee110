use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Individual, MutationWeights, VariationParams};
use crate::tree::{ExprTree, Node, OpClass, OpKind};

/// Picks the class a mutation targets, with the categorical weights
/// renormalised over the classes present in `tree`.
pub fn sample_mutation_class<R: Rng + ?Sized>(tree: &ExprTree, weights: &MutationWeights, rng: &mut R) -> OpClass {
    let present = tree.classes_present();
    let w: Vec<f64> = OpClass::ALL
        .iter()
        .map(|&c| if present[c as usize] { weights.weight(c) } else { 0.0 })
        .collect();
    match WeightedIndex::new(&w) {
        Ok(dist) => OpClass::ALL[dist.sample(rng)],
        // every present class has zero weight: fall back to terms, which always exist
        Err(_) => OpClass::Term,
    }
}

/// Operator or term mutation with the class drawn from `params.weights`.
pub fn mutate<R: Rng + ?Sized>(ind: &Individual, params: &VariationParams, rng: &mut R) -> Individual {
    let class = sample_mutation_class(&ind.tree, &params.weights, rng);
    mutate_class(ind, class, params, rng)
}

/// Mutates a uniformly chosen node of `class`.
///
/// Operator classes are replaced by a fresh random subtree of the same class
/// whose depth keeps the path within the generation bounds. Terms are never
/// replaced by subtrees: symbols move to a random feature and constants get
/// a standard normal shift.
pub fn mutate_class<R: Rng + ?Sized>(
    ind: &Individual,
    class: OpClass,
    params: &VariationParams,
    rng: &mut R,
) -> Individual {
    let sites: Vec<_> = ind.tree.sites().into_iter().filter(|s| s.class == class).collect();
    if sites.is_empty() {
        return Individual::new(ind.tree.clone());
    }
    let site = &sites[rng.random_range(0..sites.len())];
    let gen = params.generator(ind.tree.variant);
    let bounds = params.bounds;
    let mut tree = ind.tree.clone();
    let fresh = match class {
        OpClass::Boolean => {
            let budget = bounds.bool_max.saturating_sub(site.booleans_above).max(1);
            let lo = bounds.bool_min.clamp(1, budget);
            Some(gen.boolean(rng.random_range(lo..=budget), rng))
        }
        OpClass::Comparison => Some(gen.comparison(rng)),
        OpClass::Mathematical => {
            let budget = bounds.math_max.saturating_sub(site.maths_above).max(1);
            Some(gen.math(rng.random_range(1..=budget), rng))
        }
        OpClass::Term => None,
    };
    match fresh {
        Some(subtree) => {
            tree.replace(&site.path, subtree);
        }
        None => {
            let node = tree.get_mut(&site.path).expect("site resolves");
            mutate_term(node, params.n_features, rng);
        }
    }
    Individual::new(tree)
}

/// In-place term mutation: `x_i → x_j` with `j` uniform, `c → c + r` with
/// `r ~ N(0, 1)`.
pub fn mutate_term<R: Rng + ?Sized>(node: &mut Node, n_features: usize, rng: &mut R) {
    match node.kind {
        OpKind::Symbol(_) => node.kind = OpKind::Symbol(rng.random_range(0..n_features)),
        OpKind::Const(c) => {
            let r: f64 = StandardNormal.sample(rng);
            node.kind = OpKind::Const(c + r);
        }
        _ => {}
    }
}
