use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{GeneticsError, Individual, Ranked};

/// Linear rank selection with a single elite.
///
/// The best individual is always copied to slot 0. The remaining slots are
/// drawn with replacement; the individual ranked `k` from the bottom
/// (worst = 1, best = population size) is drawn with weight `k`.
pub fn rank_select<R: Rng + ?Sized>(pop: &[Individual], rng: &mut R) -> Result<Vec<Individual>, GeneticsError> {
    if pop.is_empty() {
        return Err(GeneticsError::EmptyPopulation);
    }
    let mut ranked = pop.iter().map(Ranked::new).collect::<Result<Vec<_>, _>>()?;
    ranked.sort_by(Ranked::better_first);

    let n = ranked.len();
    let mut out = Vec::with_capacity(n);
    out.push(ranked[0].ind.clone());
    if n > 1 {
        let dist = WeightedIndex::new((0..n).map(|k| (n - k) as f64)).expect("positive weights");
        for _ in 1..n {
            out.push(ranked[dist.sample(rng)].ind.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_tree;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ind(c: f64, f: f64) -> Individual {
        Individual::with_fitness(parse_tree(&format!("(NOT (GT x0 {c:?}))")).unwrap(), f)
    }

    #[test]
    fn clones_stay_clones() {
        let pop = vec![ind(1.0, 0.6); 10];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = rank_select(&pop, &mut rng).unwrap();
        assert_eq!(out.len(), 10);
        assert!(out.iter().all(|i| *i == pop[0]));
    }

    #[test]
    fn elite_always_first() {
        let mut pop: Vec<_> = (0..20).map(|i| ind(i as f64, 0.1)).collect();
        pop[13] = ind(99.0, 0.9);
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = rank_select(&pop, &mut rng).unwrap();
            assert_eq!(out[0], pop[13]);
            assert_eq!(out.len(), pop.len());
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let pop: Vec<_> = (0..30).map(|i| ind(i as f64, (i % 7) as f64 / 7.0)).collect();
        let run = |s| rank_select(&pop, &mut ChaCha8Rng::seed_from_u64(s)).unwrap();
        assert_eq!(run(4), run(4));
    }

    #[test]
    fn order_of_input_does_not_matter() {
        let pop: Vec<_> = (0..12).map(|i| ind(i as f64, (i % 3) as f64 / 3.0)).collect();
        let mut rev = pop.clone();
        rev.reverse();
        let a = rank_select(&pop, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let b = rank_select(&rev, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn selection_pressure_follows_rank() {
        // with 4 distinct ranks the draw weights are 4:3:2:1
        let pop: Vec<_> = (0..4).map(|i| ind(i as f64, i as f64 / 4.0)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut counts = [0usize; 4];
        let draws = 20_000;
        for _ in 0..draws / 3 {
            for i in &rank_select(&pop, &mut rng).unwrap()[1..] {
                let k = pop.iter().position(|p| p == i).unwrap();
                counts[k] += 1;
            }
        }
        let total: usize = counts.iter().sum();
        for (k, c) in counts.iter().enumerate() {
            let expected = (k + 1) as f64 / 10.0;
            assert!((*c as f64 / total as f64 - expected).abs() < 0.015, "{counts:?}");
        }
    }

    #[test]
    fn errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(rank_select(&[], &mut rng), Err(GeneticsError::EmptyPopulation));
        let pop = vec![Individual::new(parse_tree("(NOT (GT x0 1.0))").unwrap())];
        assert_eq!(rank_select(&pop, &mut rng), Err(GeneticsError::Unevaluated));
    }
}
