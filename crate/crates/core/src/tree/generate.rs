use rand::Rng;

use super::{ExprTree, GenBounds, Node, OpKind, Variant};

/// Random subtree factory for one variant and feature space.
///
/// Each layer samples its own depth uniformly within the bounds; the first
/// child of a node always carries the full remaining depth so the sampled
/// depth is realised on at least one path, while siblings draw a shorter or
/// equal depth.
#[derive(Debug, Clone, Copy)]
pub struct Generator {
    pub variant: Variant,
    pub bounds: GenBounds,
    pub n_features: usize,
    pub const_range: (f64, f64),
}

impl Generator {
    pub fn new(variant: Variant, bounds: GenBounds, n_features: usize, const_range: (f64, f64)) -> Self {
        assert!(n_features >= 1, "at least one feature is required");
        assert!(const_range.0 <= const_range.1, "empty constant range");
        Generator {
            variant,
            bounds,
            n_features,
            const_range,
        }
    }

    pub fn tree<R: Rng + ?Sized>(&self, rng: &mut R) -> ExprTree {
        let depth = rng.random_range(self.bounds.bool_min..=self.bounds.bool_max);
        ExprTree::new(self.variant, self.boolean(depth, rng))
    }

    /// Boolean subtree whose deepest boolean chain is exactly `depth`.
    pub fn boolean<R: Rng + ?Sized>(&self, depth: usize, rng: &mut R) -> Node {
        let depth = depth.max(1);
        let ops: &[OpKind] = match self.variant {
            Variant::Hard => &OpKind::BOOLEAN_HARD,
            Variant::Soft => &OpKind::BOOLEAN_SOFT,
        };
        let kind = ops[rng.random_range(0..ops.len())];
        let children = (0..kind.arity())
            .map(|i| {
                if depth == 1 {
                    self.comparison(rng)
                } else if i == 0 {
                    self.boolean(depth - 1, rng)
                } else {
                    let d = rng.random_range(1..depth);
                    self.boolean(d, rng)
                }
            })
            .collect();
        self.weighted(kind, children, rng)
    }

    pub fn comparison<R: Rng + ?Sized>(&self, rng: &mut R) -> Node {
        let kind = OpKind::COMPARISON[rng.random_range(0..2)];
        let children = (0..2)
            .map(|_| {
                let d = self.math_depth(rng);
                self.math_or_term(d, rng)
            })
            .collect();
        self.weighted(kind, children, rng)
    }

    fn math_depth<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(self.bounds.math_min..=self.bounds.math_max)
    }

    fn math_or_term<R: Rng + ?Sized>(&self, depth: usize, rng: &mut R) -> Node {
        if depth == 0 {
            self.term(rng)
        } else {
            self.math(depth, rng)
        }
    }

    /// Arithmetic subtree whose deepest arithmetic chain is exactly `depth` (≥ 1).
    pub fn math<R: Rng + ?Sized>(&self, depth: usize, rng: &mut R) -> Node {
        let depth = depth.max(1);
        let ops: &[OpKind] = match self.variant {
            Variant::Hard => &OpKind::MATH_HARD,
            Variant::Soft => &OpKind::MATH_SOFT,
        };
        let kind = ops[rng.random_range(0..ops.len())];
        let children: Vec<Node> = (0..kind.arity())
            .map(|i| {
                if depth == 1 {
                    self.term(rng)
                } else if i == 0 {
                    self.math(depth - 1, rng)
                } else {
                    let d = rng.random_range(0..depth);
                    self.math_or_term(d, rng)
                }
            })
            .collect();
        match kind.coeff_count() {
            0 => Node::op(kind, children),
            k => {
                let coeffs = (0..k).map(|_| rng.random_range(-1.0..=1.0)).collect();
                Node::linear(kind, coeffs, children)
            }
        }
    }

    pub fn term<R: Rng + ?Sized>(&self, rng: &mut R) -> Node {
        if rng.random_bool(0.5) {
            Node::symbol(self.feature(rng))
        } else {
            Node::constant(self.constant(rng))
        }
    }

    pub fn feature<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.n_features)
    }

    pub fn constant<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (lo, hi) = self.const_range;
        if lo == hi {
            lo
        } else {
            rng.random_range(lo..=hi)
        }
    }

    fn weighted<R: Rng + ?Sized>(&self, kind: OpKind, children: Vec<Node>, rng: &mut R) -> Node {
        match self.variant {
            Variant::Hard => Node::op(kind, children),
            Variant::Soft => Node::weighted(kind, rng.random::<f64>(), children),
        }
    }
}

/// Random tree honouring the generation bounds.
pub fn random_tree<R: Rng + ?Sized>(
    variant: Variant,
    bounds: &GenBounds,
    n_features: usize,
    const_range: (f64, f64),
    rng: &mut R,
) -> ExprTree {
    Generator::new(variant, *bounds, n_features, const_range).tree(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{format_tree, validate, OpClass};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_trees_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for variant in [Variant::Hard, Variant::Soft] {
            for _ in 0..1000 {
                let t = random_tree(variant, &GenBounds::default(), 3, (-2.0, 5.0), &mut rng);
                let r = validate(&t, 3);
                assert!(r.is_valid(), "{}\n{r}", format_tree(&t));
                assert!((1..=3).contains(&t.boolean_depth()));
                assert!((1..=4).contains(&t.math_depth()));
            }
        }
    }

    #[test]
    fn same_seed_same_tree() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            format_tree(&random_tree(
                Variant::Soft,
                &GenBounds::default(),
                4,
                (0.0, 1.0),
                &mut rng,
            ))
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
    }

    #[test]
    fn single_feature_uses_x0() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let t = random_tree(Variant::Soft, &GenBounds::default(), 1, (0.0, 1.0), &mut rng);
            for site in t.sites() {
                if let OpKind::Symbol(i) = t.get(&site.path).unwrap().kind {
                    assert_eq!(i, 0);
                }
            }
        }
    }

    #[test]
    fn boolean_depth_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut counts = [0usize; 4];
        let n = 6000;
        for _ in 0..n {
            let t = random_tree(Variant::Hard, &GenBounds::default(), 2, (0.0, 1.0), &mut rng);
            counts[t.boolean_depth()] += 1;
        }
        for c in &counts[1..] {
            let p = *c as f64 / n as f64;
            assert!((p - 1.0 / 3.0).abs() < 0.03, "{counts:?}");
        }
        assert_eq!(counts[0], 0);
    }

    #[test]
    fn every_comparison_has_arithmetic_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let t = random_tree(Variant::Soft, &GenBounds::default(), 2, (0.0, 1.0), &mut rng);
            for s in t.sites() {
                let node = t.get(&s.path).unwrap();
                if node.class() == OpClass::Comparison {
                    assert!(node.children.iter().all(|c| c.class() == OpClass::Mathematical));
                }
            }
        }
    }
}
