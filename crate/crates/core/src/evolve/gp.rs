use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_train, classifier, variation_params, Classifier, EvolutionConfig, EvolveError};
use crate::data::Dataset;
use crate::genetics::{best_index, crossover, mutate, rank_select, FitnessEval, Individual, VariationParams};
use crate::tree::{random_tree, Variant};

/// Classical GP on hard trees, stepped one generation at a time.
#[derive(Debug)]
pub struct GpRun {
    cfg: EvolutionConfig,
    eval: FitnessEval,
    params: VariationParams,
    rng: ChaCha8Rng,
    population: Vec<Individual>,
    best: Individual,
    generation: usize,
    history: Vec<f64>,
}

impl GpRun {
    pub fn new(train: &Dataset, cfg: &EvolutionConfig) -> Result<Self, EvolveError> {
        check_train(train, cfg)?;
        let eval = FitnessEval::new(train)?;
        let params = variation_params(train, cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let population: Vec<Individual> = (0..cfg.population_size)
            .map(|_| {
                let t = random_tree(
                    Variant::Hard,
                    &params.bounds,
                    params.n_features,
                    params.const_range,
                    &mut rng,
                );
                eval.evaluated(t)
            })
            .collect();
        let best = population[best_index(&population)?].clone();
        let history = vec![best.fitness().unwrap_or(0.0)];
        Ok(GpRun {
            cfg: *cfg,
            eval,
            params,
            rng,
            population,
            best,
            generation: 0,
            history,
        })
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
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

    /// One generation: selection, pairwise crossover, mutation, evaluation.
    ///
    /// The elite in slot 0 is carried over untouched; pairs start at slot 1.
    pub fn step(&mut self) -> Result<(), EvolveError> {
        let mut pop = rank_select(&self.population, &mut self.rng)?;
        let n = pop.len();
        let mut i = 1;
        while i + 1 < n {
            if self.rng.random_bool(self.cfg.cx_prob) {
                let (a, b) = crossover(&pop[i].tree, &pop[i + 1].tree, &mut self.rng);
                pop[i] = Individual::new(a);
                pop[i + 1] = Individual::new(b);
            }
            i += 2;
        }
        for ind in pop.iter_mut().skip(1) {
            if self.rng.random_bool(self.cfg.mut_prob) {
                *ind = mutate(ind, &self.params, &mut self.rng);
            }
        }
        for ind in pop.iter_mut() {
            self.eval.evaluate(ind);
        }
        let gen_best = &pop[best_index(&pop)?];
        if gen_best.fitness() > self.best.fitness() {
            self.best = gen_best.clone();
        }
        self.population = pop;
        self.generation += 1;
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

/// Evolves a hard tree until it classifies the training set perfectly or
/// `max_generation` generations have run.
pub fn fit_gp(train: &Dataset, cfg: &EvolutionConfig) -> Result<Classifier, EvolveError> {
    let mut run = GpRun::new(train, cfg)?;
    while !run.is_done() {
        run.step()?;
    }
    Ok(run.finish())
}
