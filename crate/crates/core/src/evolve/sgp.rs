use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_train, classifier, variation_params, Classifier, EvolutionConfig, EvolveError};
use crate::data::Dataset;
use crate::genetics::{
    best_index, extension_mutation, positive_crossover, positive_mutation, rank_select, weight_adjustment, worst_index,
    FitnessEval, GeneticsError, Individual, VariationParams,
};
use crate::tree::{random_tree, Variant};

/// One SGP population with its own RNG stream.
#[derive(Debug, Clone)]
pub struct Island {
    pub population: Vec<Individual>,
    rng: ChaCha8Rng,
}

/// Soft GP over a ring of islands, stepped one generation at a time.
#[derive(Debug)]
pub struct SgpRun {
    cfg: EvolutionConfig,
    eval: FitnessEval,
    params: VariationParams,
    islands: Vec<Island>,
    best: Individual,
    generation: usize,
    history: Vec<f64>,
}

impl SgpRun {
    pub fn new(train: &Dataset, cfg: &EvolutionConfig) -> Result<Self, EvolveError> {
        check_train(train, cfg)?;
        let eval = FitnessEval::new(train)?;
        let params = variation_params(train, cfg);
        let islands: Vec<Island> = (0..cfg.population_num)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ i as u64);
                let population = (0..cfg.population_size)
                    .map(|_| {
                        let t = random_tree(
                            Variant::Soft,
                            &params.bounds,
                            params.n_features,
                            params.const_range,
                            &mut rng,
                        );
                        eval.evaluated(t)
                    })
                    .collect();
                Island { population, rng }
            })
            .collect();
        let best = overall_best(&islands)?;
        let history = vec![best.fitness().unwrap_or(0.0)];
        Ok(SgpRun {
            cfg: *cfg,
            eval,
            params,
            islands,
            best,
            generation: 0,
            history,
        })
    }

    pub fn islands(&self) -> &[Island] {
        &self.islands
    }

    pub fn best(&self) -> &Individual {
        &self.best
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn is_done(&self) -> bool {
        self.best.fitness().is_some_and(|f| f >= 1.0) || self.generation >= self.cfg.max_generation
    }

    /// One generation on every island, then migration when the number of
    /// completed generations is a multiple of `migration_period`.
    pub fn step(&mut self) -> Result<(), EvolveError> {
        for island in &mut self.islands {
            evolve_island(island, &self.cfg, &self.params, &self.eval)?;
        }
        self.generation += 1;
        if self.generation.is_multiple_of(self.cfg.migration_period) {
            migrate(&mut self.islands)?;
        }
        let gen_best = overall_best(&self.islands)?;
        if gen_best.fitness() > self.best.fitness() {
            self.best = gen_best;
        }
        self.history.push(self.best.fitness().unwrap_or(0.0));
        Ok(())
    }

    pub fn finish(self) -> Classifier {
        classifier(
            &self.best,
            self.params.n_features,
            self.generation,
            &self.cfg,
            self.history,
        )
    }
}

fn evolve_island(
    island: &mut Island,
    cfg: &EvolutionConfig,
    params: &VariationParams,
    eval: &FitnessEval,
) -> Result<(), GeneticsError> {
    let rng = &mut island.rng;
    let mut pop = rank_select(&island.population, rng)?;
    let n = pop.len();
    let mut i = 0;
    while i + 1 < n {
        if rng.random_bool(cfg.cx_prob) {
            let (a, b) = positive_crossover(&pop[i], &pop[i + 1], eval, rng)?;
            pop[i] = a;
            pop[i + 1] = b;
        }
        i += 2;
    }
    for ind in pop.iter_mut() {
        if rng.random_bool(cfg.mut_prob) {
            *ind = positive_mutation(ind, cfg.max_tries_mutation, params, eval, rng)?;
        }
    }
    for ind in pop.iter_mut() {
        *ind = weight_adjustment(ind, cfg.max_tries_weight, eval, rng)?;
    }
    for ind in pop.iter_mut() {
        if rng.random_bool(cfg.ext_prob) {
            *ind = extension_mutation(ind, params, eval, rng)?;
        }
    }
    island.population = pop;
    Ok(())
}

fn overall_best(islands: &[Island]) -> Result<Individual, GeneticsError> {
    let bests = islands
        .iter()
        .map(|isl| best_index(&isl.population).map(|i| isl.population[i].clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(bests[best_index(&bests)?].clone())
}

/// Ring migration: a copy of each island's best replaces the worst
/// individual of the next island. Bests are taken before any replacement.
/// A single island is left unchanged.
pub fn migrate(islands: &mut [Island]) -> Result<(), GeneticsError> {
    let n = islands.len();
    if n < 2 {
        return Ok(());
    }
    let bests = islands
        .iter()
        .map(|isl| best_index(&isl.population).map(|i| isl.population[i].clone()))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, best) in bests.into_iter().enumerate() {
        let target = &mut islands[(i + 1) % n].population;
        let w = worst_index(target)?;
        target[w] = best;
    }
    Ok(())
}

/// Evolves a soft tree on `population_num` islands until it classifies the
/// training set perfectly or `max_generation` generations have run.
pub fn fit_sgp(train: &Dataset, cfg: &EvolutionConfig) -> Result<Classifier, EvolveError> {
    let mut run = SgpRun::new(train, cfg)?;
    while !run.is_done() {
        run.step()?;
    }
    Ok(run.finish())
}
