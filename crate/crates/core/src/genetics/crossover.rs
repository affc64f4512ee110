use rand::Rng;

use crate::tree::{ExprTree, Node, NodeSite, OpClass, ValidationLimits};

/// Draws of the second crossover point before giving up.
pub const CROSSOVER_ATTEMPTS: usize = 20;

/// Exchanges the subtrees at `path1` in `t1` and `path2` in `t2`.
pub fn swap_subtrees(t1: &ExprTree, path1: &[usize], t2: &ExprTree, path2: &[usize]) -> Option<(ExprTree, ExprTree)> {
    let s1 = t1.get(path1)?.clone();
    let s2 = t2.get(path2)?.clone();
    let mut c1 = t1.clone();
    let mut c2 = t2.clone();
    c1.replace(path1, s2)?;
    c2.replace(path2, s1)?;
    Some((c1, c2))
}

/// Subtree crossover between points of the same operator class.
///
/// A point is drawn uniformly in `t1`, then a same-class point uniformly in
/// `t2`. Draws that would push a path past the validation depth limits are
/// redrawn; after [`CROSSOVER_ATTEMPTS`] failures the parents are returned
/// unchanged.
pub fn crossover<R: Rng + ?Sized>(t1: &ExprTree, t2: &ExprTree, rng: &mut R) -> (ExprTree, ExprTree) {
    crossover_with_limits(t1, t2, ValidationLimits::default(), rng)
}

pub fn crossover_with_limits<R: Rng + ?Sized>(
    t1: &ExprTree,
    t2: &ExprTree,
    limits: ValidationLimits,
    rng: &mut R,
) -> (ExprTree, ExprTree) {
    let sites1 = t1.sites();
    let p1 = &sites1[rng.random_range(0..sites1.len())];
    let candidates: Vec<NodeSite> = t2.sites().into_iter().filter(|s| s.class == p1.class).collect();
    if candidates.is_empty() {
        return (t1.clone(), t2.clone());
    }
    let s1 = t1.get(&p1.path).expect("site from t1");
    for _ in 0..CROSSOVER_ATTEMPTS {
        let p2 = &candidates[rng.random_range(0..candidates.len())];
        let s2 = t2.get(&p2.path).expect("site from t2");
        if fits(p1, s2, limits) && fits(p2, s1, limits) {
            return swap_subtrees(t1, &p1.path, t2, &p2.path).expect("paths resolve");
        }
    }
    (t1.clone(), t2.clone())
}

fn fits(site: &NodeSite, incoming: &Node, limits: ValidationLimits) -> bool {
    site.booleans_above + incoming.class_height(OpClass::Boolean) <= limits.bool_max
        && site.maths_above + incoming.class_height(OpClass::Mathematical) <= limits.math_max
}
