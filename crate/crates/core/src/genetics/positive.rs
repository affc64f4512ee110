use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{crossover, mutate, FitnessEval, GeneticsError, Individual, Ranked, VariationParams};
use crate::tree::{collect_weights, ExprTree, Node, OpKind, ValidationLimits, Variant};

/// Standard deviation of the additive weight perturbation.
pub const WEIGHT_SHIFT_STDDEV: f64 = 0.1;

/// Trees larger than this are not extended further.
pub const EXTENSION_NODE_CAP: usize = 200;

/// Crossover that keeps the two fittest of parents and children.
///
/// Ties prefer children over parents, then the lexically smaller tree.
pub fn positive_crossover<R: Rng + ?Sized>(
    ind1: &Individual,
    ind2: &Individual,
    eval: &FitnessEval,
    rng: &mut R,
) -> Result<(Individual, Individual), GeneticsError> {
    ind1.expect_fitness()?;
    ind2.expect_fitness()?;
    let (t1, t2) = crossover(&ind1.tree, &ind2.tree, rng);
    let child1 = eval.evaluated(t1);
    let child2 = eval.evaluated(t2);

    let pool = [(&child1, true), (&child2, true), (ind1, false), (ind2, false)];
    let mut ranked = pool
        .iter()
        .map(|&(ind, is_child)| Ranked::new(ind).map(|r| (r, is_child)))
        .collect::<Result<Vec<_>, _>>()?;
    ranked.sort_by(|(a, ac), (b, bc)| {
        b.fitness
            .total_cmp(&a.fitness)
            .then_with(|| bc.cmp(ac))
            .then_with(|| a.text.cmp(&b.text))
    });
    Ok((ranked[0].0.ind.clone(), ranked[1].0.ind.clone()))
}

/// Up to `max_tries` independent mutations; the first strict improvement wins.
pub fn positive_mutation<R: Rng + ?Sized>(
    ind: &Individual,
    max_tries: usize,
    params: &VariationParams,
    eval: &FitnessEval,
    rng: &mut R,
) -> Result<Individual, GeneticsError> {
    let base = ind.expect_fitness()?;
    for _ in 0..max_tries {
        let mut mutant = mutate(ind, params, rng);
        eval.evaluate(&mut mutant);
        if mutant.expect_fitness()? > base {
            return Ok(mutant);
        }
    }
    Ok(ind.clone())
}

/// Hill climbing over operator weights and linear coefficients.
///
/// Each try perturbs one uniformly chosen parameter by `N(0, 0.1)` and
/// returns as soon as fitness strictly improves.
pub fn weight_adjustment<R: Rng + ?Sized>(
    ind: &Individual,
    max_tries: usize,
    eval: &FitnessEval,
    rng: &mut R,
) -> Result<Individual, GeneticsError> {
    if ind.tree.variant == Variant::Hard {
        return Err(GeneticsError::HardVariant);
    }
    let base = ind.expect_fitness()?;
    let slots = collect_weights(&ind.tree);
    if slots.is_empty() {
        return Ok(ind.clone());
    }
    let shift = Normal::new(0.0, WEIGHT_SHIFT_STDDEV).expect("valid stddev");
    for _ in 0..max_tries {
        let (loc, w) = &slots[rng.random_range(0..slots.len())];
        let mut candidate = ind.tree.clone();
        candidate
            .set_weight_in_place(loc, w + shift.sample(rng))
            .expect("locator collected from this tree");
        let f = eval.fitness(&candidate);
        if f > base {
            return Ok(Individual::with_fitness(candidate, f));
        }
    }
    Ok(ind.clone())
}

/// Grafts a new `OR` root over the old tree and a fresh random boolean
/// branch, keeping the result only if fitness does not drop.
///
/// The new root has weight 1 in soft trees. Trees already at the boolean
/// depth cap, or that would exceed [`EXTENSION_NODE_CAP`] nodes, are
/// returned unchanged.
pub fn extension_mutation<R: Rng + ?Sized>(
    ind: &Individual,
    params: &VariationParams,
    eval: &FitnessEval,
    rng: &mut R,
) -> Result<Individual, GeneticsError> {
    let base = ind.expect_fitness()?;
    let cap = ValidationLimits::BOOL_DEPTH_CAP;
    if ind.tree.boolean_depth() + 1 > cap || ind.tree.size() + 1 >= EXTENSION_NODE_CAP {
        return Ok(ind.clone());
    }
    let gen = params.generator(ind.tree.variant);
    let budget = params.bounds.bool_max.min(cap - 1).max(1);
    let branch = gen.boolean(rng.random_range(1..=budget), rng);
    let children = vec![ind.tree.root.clone(), branch];
    let root = match ind.tree.variant {
        Variant::Soft => Node::weighted(OpKind::Or, 1.0, children),
        Variant::Hard => Node::op(OpKind::Or, children),
    };
    let extended = ExprTree::new(ind.tree.variant, root);
    if extended.size() > EXTENSION_NODE_CAP {
        return Ok(ind.clone());
    }
    let f = eval.fitness(&extended);
    if f >= base {
        Ok(Individual::with_fitness(extended, f))
    } else {
        Ok(ind.clone())
    }
}
