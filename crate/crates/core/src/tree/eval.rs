use super::{ExprTree, Node, OpKind};

/// Clamps overflowed arithmetic to the largest finite magnitude.
#[inline]
pub fn saturate(v: f64) -> f64 {
    v.clamp(-f64::MAX, f64::MAX)
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Heaviside step with H(0) = 0.
#[inline]
fn step(d: f64) -> f64 {
    if d > 0.0 {
        1.0
    } else {
        0.0
    }
}

impl ExprTree {
    /// Activation of the tree on one feature row.
    ///
    /// Hard trees return exactly 0 or 1; soft trees return a value in `[0, 1]`.
    /// A hard node has no weight and evaluates as if its weight were 1, which
    /// reduces the soft formulas to ordinary boolean algebra.
    pub fn eval(&self, row: &[f64]) -> f64 {
        eval_row(&self.root, row)
    }

    /// Activations for a column-major feature block of `n_rows` rows.
    pub fn eval_columns(&self, columns: &[Vec<f64>], n_rows: usize) -> Vec<f64> {
        eval_block(&self.root, columns, n_rows)
    }
}

fn eval_row(node: &Node, row: &[f64]) -> f64 {
    let w = node.weight.unwrap_or(1.0);
    let arg = |i: usize| eval_row(&node.children[i], row);
    match node.kind {
        OpKind::Or | OpKind::Or3 => {
            w * node
                .children
                .iter()
                .map(|c| eval_row(c, row))
                .fold(f64::NEG_INFINITY, f64::max)
        }
        OpKind::And | OpKind::And3 => {
            w * node
                .children
                .iter()
                .map(|c| eval_row(c, row))
                .fold(f64::INFINITY, f64::min)
        }
        OpKind::Not => w * (1.0 - arg(0)),
        OpKind::Gt => w * step(arg(0) - arg(1)),
        OpKind::Lt => w * step(arg(1) - arg(0)),
        OpKind::Add => saturate(arg(0) + arg(1)),
        OpKind::Mul => saturate(arg(0) * arg(1)),
        OpKind::Neg => -arg(0),
        OpKind::Sigm => sigmoid(arg(0)),
        OpKind::Lin2 | OpKind::Lin3 => node
            .coeffs
            .iter()
            .zip(&node.children)
            .fold(0.0, |s, (a, c)| saturate(s + saturate(a * eval_row(c, row)))),
        OpKind::Symbol(i) => row[i],
        OpKind::Const(c) => c,
    }
}

fn eval_block(node: &Node, cols: &[Vec<f64>], n: usize) -> Vec<f64> {
    let w = node.weight.unwrap_or(1.0);
    match node.kind {
        OpKind::Symbol(i) => cols[i][..n].to_vec(),
        OpKind::Const(c) => vec![c; n],
        OpKind::Or | OpKind::Or3 | OpKind::And | OpKind::And3 => {
            let is_or = matches!(node.kind, OpKind::Or | OpKind::Or3);
            let mut acc = eval_block(&node.children[0], cols, n);
            for child in &node.children[1..] {
                let v = eval_block(child, cols, n);
                if is_or {
                    acc.iter_mut().zip(&v).for_each(|(a, b)| *a = a.max(*b));
                } else {
                    acc.iter_mut().zip(&v).for_each(|(a, b)| *a = a.min(*b));
                }
            }
            if w != 1.0 {
                acc.iter_mut().for_each(|a| *a *= w);
            }
            acc
        }
        OpKind::Not => {
            let mut v = eval_block(&node.children[0], cols, n);
            v.iter_mut().for_each(|a| *a = w * (1.0 - *a));
            v
        }
        OpKind::Gt | OpKind::Lt => {
            let mut x = eval_block(&node.children[0], cols, n);
            let y = eval_block(&node.children[1], cols, n);
            let gt = node.kind == OpKind::Gt;
            x.iter_mut().zip(&y).for_each(|(a, b)| {
                let d = if gt { *a - *b } else { *b - *a };
                *a = w * step(d);
            });
            x
        }
        OpKind::Add => {
            let mut x = eval_block(&node.children[0], cols, n);
            let y = eval_block(&node.children[1], cols, n);
            x.iter_mut().zip(&y).for_each(|(a, b)| *a = saturate(*a + *b));
            x
        }
        OpKind::Mul => {
            let mut x = eval_block(&node.children[0], cols, n);
            let y = eval_block(&node.children[1], cols, n);
            x.iter_mut().zip(&y).for_each(|(a, b)| *a = saturate(*a * *b));
            x
        }
        OpKind::Neg => {
            let mut v = eval_block(&node.children[0], cols, n);
            v.iter_mut().for_each(|a| *a = -*a);
            v
        }
        OpKind::Sigm => {
            let mut v = eval_block(&node.children[0], cols, n);
            v.iter_mut().for_each(|a| *a = sigmoid(*a));
            v
        }
        OpKind::Lin2 | OpKind::Lin3 => {
            let mut acc = vec![0.0; n];
            for (a, child) in node.coeffs.iter().zip(&node.children) {
                let v = eval_block(child, cols, n);
                acc.iter_mut()
                    .zip(&v)
                    .for_each(|(s, x)| *s = saturate(*s + saturate(a * x)));
            }
            acc
        }
    }
}
