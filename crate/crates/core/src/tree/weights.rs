use super::{clamp_weight, ExprTree, Node, TreeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightSlot {
    OperatorWeight,
    LinCoeff(usize),
}

/// Address of one tunable parameter: a child-index path from the root plus
/// the slot on that node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightLocator {
    pub path: Vec<usize>,
    pub slot: WeightSlot,
}

/// All operator weights and linear coefficients, in preorder.
pub fn collect_weights(tree: &ExprTree) -> Vec<(WeightLocator, f64)> {
    fn walk(node: &Node, path: &mut Vec<usize>, out: &mut Vec<(WeightLocator, f64)>) {
        if let Some(w) = node.weight {
            out.push((
                WeightLocator {
                    path: path.clone(),
                    slot: WeightSlot::OperatorWeight,
                },
                w,
            ));
        }
        for (i, &a) in node.coeffs.iter().enumerate() {
            out.push((
                WeightLocator {
                    path: path.clone(),
                    slot: WeightSlot::LinCoeff(i),
                },
                a,
            ));
        }
        for (i, child) in node.children.iter().enumerate() {
            path.push(i);
            walk(child, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(&tree.root, &mut Vec::new(), &mut out);
    out
}

/// Copy of `tree` with one parameter replaced. Operator weights are clamped
/// to `[0, 1]`; linear coefficients are stored as given.
pub fn set_weight(tree: &ExprTree, loc: &WeightLocator, value: f64) -> Result<ExprTree, TreeError> {
    let mut out = tree.clone();
    out.set_weight_in_place(loc, value)?;
    Ok(out)
}

impl ExprTree {
    pub fn set_weight_in_place(&mut self, loc: &WeightLocator, value: f64) -> Result<(), TreeError> {
        let invalid = || TreeError::InvalidLocator(loc.clone());
        let node = self.root.get_mut(&loc.path).ok_or_else(invalid)?;
        match loc.slot {
            WeightSlot::OperatorWeight => {
                let w = node.weight.as_mut().ok_or_else(invalid)?;
                *w = clamp_weight(value);
            }
            WeightSlot::LinCoeff(i) => {
                let a = node.coeffs.get_mut(i).ok_or_else(invalid)?;
                *a = value;
            }
        }
        Ok(())
    }

    pub fn weight_at(&self, loc: &WeightLocator) -> Option<f64> {
        let node = self.root.get(&loc.path)?;
        match loc.slot {
            WeightSlot::OperatorWeight => node.weight,
            WeightSlot::LinCoeff(i) => node.coeffs.get(i).copied(),
        }
    }
}
