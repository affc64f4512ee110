//! Typed logical expression trees.
//!
//! A tree is layered: boolean operators at the top, one comparison on every
//! root-to-leaf path, an optional chain of arithmetic operators, and a term
//! (feature symbol or constant) at the leaf. The same representation serves
//! both the classical hard variant and the soft variant, where each boolean
//! and comparison node carries a weight in `[0, 1]` and linear combination
//! nodes carry coefficients.

mod eval;
mod generate;
mod text;
mod validate;
mod weights;

use std::fmt;

pub use eval::{saturate, sigmoid};
pub use generate::{random_tree, Generator};
pub use text::{format_model, format_tree, parse_model, parse_tree, parse_tree_as, ParseError};
pub use validate::{validate, validate_with, ValidationLimits, ValidationReport, Violation, ViolationKind};
pub use weights::{collect_weights, set_weight, WeightLocator, WeightSlot};

/// Hard (classical GP) or soft (weighted, continuous) tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Hard,
    Soft,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Hard => "hard",
            Variant::Soft => "soft",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Operator type class, in layer order from root to leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpClass {
    Boolean,
    Comparison,
    Mathematical,
    Term,
}

impl OpClass {
    pub const ALL: [OpClass; 4] = [
        OpClass::Boolean,
        OpClass::Comparison,
        OpClass::Mathematical,
        OpClass::Term,
    ];

    /// Classes allowed directly below a node of this class.
    pub fn may_parent(self, child: OpClass) -> bool {
        match self {
            OpClass::Boolean => matches!(child, OpClass::Boolean | OpClass::Comparison),
            OpClass::Comparison | OpClass::Mathematical => {
                matches!(child, OpClass::Mathematical | OpClass::Term)
            }
            OpClass::Term => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpKind {
    Or,
    And,
    Not,
    Or3,
    And3,
    Gt,
    Lt,
    Add,
    Mul,
    Neg,
    Sigm,
    Lin2,
    Lin3,
    /// Feature reference `x<i>`.
    Symbol(usize),
    Const(f64),
}

impl OpKind {
    pub const BOOLEAN_HARD: [OpKind; 3] = [OpKind::Or, OpKind::And, OpKind::Not];
    pub const BOOLEAN_SOFT: [OpKind; 5] = [OpKind::Or, OpKind::And, OpKind::Not, OpKind::Or3, OpKind::And3];
    pub const COMPARISON: [OpKind; 2] = [OpKind::Gt, OpKind::Lt];
    pub const MATH_HARD: [OpKind; 3] = [OpKind::Add, OpKind::Mul, OpKind::Neg];
    pub const MATH_SOFT: [OpKind; 6] = [
        OpKind::Add,
        OpKind::Mul,
        OpKind::Neg,
        OpKind::Sigm,
        OpKind::Lin2,
        OpKind::Lin3,
    ];

    pub fn arity(self) -> usize {
        match self {
            OpKind::Not | OpKind::Neg | OpKind::Sigm => 1,
            OpKind::Or | OpKind::And | OpKind::Gt | OpKind::Lt | OpKind::Add | OpKind::Mul => 2,
            OpKind::Lin2 => 2,
            OpKind::Or3 | OpKind::And3 | OpKind::Lin3 => 3,
            OpKind::Symbol(_) | OpKind::Const(_) => 0,
        }
    }

    pub fn class(self) -> OpClass {
        match self {
            OpKind::Or | OpKind::And | OpKind::Not | OpKind::Or3 | OpKind::And3 => OpClass::Boolean,
            OpKind::Gt | OpKind::Lt => OpClass::Comparison,
            OpKind::Add | OpKind::Mul | OpKind::Neg | OpKind::Sigm | OpKind::Lin2 | OpKind::Lin3 => {
                OpClass::Mathematical
            }
            OpKind::Symbol(_) | OpKind::Const(_) => OpClass::Term,
        }
    }

    /// Operators that only exist in soft trees.
    pub fn soft_only(self) -> bool {
        matches!(
            self,
            OpKind::Or3 | OpKind::And3 | OpKind::Sigm | OpKind::Lin2 | OpKind::Lin3
        )
    }

    /// Boolean and comparison operators carry a weight in soft trees.
    pub fn is_weighted(self) -> bool {
        matches!(self.class(), OpClass::Boolean | OpClass::Comparison)
    }

    /// Number of linear coefficients (LIN2 / LIN3 only).
    pub fn coeff_count(self) -> usize {
        match self {
            OpKind::Lin2 => 2,
            OpKind::Lin3 => 3,
            _ => 0,
        }
    }

    /// Operator name as written in the text format. Terms have no name.
    pub fn name(self) -> Option<&'static str> {
        Some(match self {
            OpKind::Or => "OR",
            OpKind::And => "AND",
            OpKind::Not => "NOT",
            OpKind::Or3 => "OR3",
            OpKind::And3 => "AND3",
            OpKind::Gt => "GT",
            OpKind::Lt => "LT",
            OpKind::Add => "ADD",
            OpKind::Mul => "MUL",
            OpKind::Neg => "NEG",
            OpKind::Sigm => "SIGM",
            OpKind::Lin2 => "LIN2",
            OpKind::Lin3 => "LIN3",
            OpKind::Symbol(_) | OpKind::Const(_) => return None,
        })
    }

    pub fn from_name(name: &str) -> Option<OpKind> {
        Some(match name {
            "OR" => OpKind::Or,
            "AND" => OpKind::And,
            "NOT" => OpKind::Not,
            "OR3" => OpKind::Or3,
            "AND3" => OpKind::And3,
            "GT" => OpKind::Gt,
            "LT" => OpKind::Lt,
            "ADD" => OpKind::Add,
            "MUL" => OpKind::Mul,
            "NEG" => OpKind::Neg,
            "SIGM" => OpKind::Sigm,
            "LIN2" => OpKind::Lin2,
            "LIN3" => OpKind::Lin3,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: OpKind,
    /// Operator weight; `Some` only on boolean and comparison nodes of soft trees.
    pub weight: Option<f64>,
    /// LIN2 / LIN3 coefficients, one per child.
    pub coeffs: Vec<f64>,
    pub children: Vec<Node>,
}

impl Node {
    pub fn symbol(feature: usize) -> Self {
        Self::leaf(OpKind::Symbol(feature))
    }

    pub fn constant(value: f64) -> Self {
        Self::leaf(OpKind::Const(value))
    }

    fn leaf(kind: OpKind) -> Self {
        Node {
            kind,
            weight: None,
            coeffs: Vec::new(),
            children: Vec::new(),
        }
    }

    /// Unweighted operator node (hard trees, and arithmetic nodes in soft trees).
    pub fn op(kind: OpKind, children: Vec<Node>) -> Self {
        Node {
            kind,
            weight: None,
            coeffs: Vec::new(),
            children,
        }
    }

    /// Weighted operator node; the weight is clamped to `[0, 1]`.
    pub fn weighted(kind: OpKind, weight: f64, children: Vec<Node>) -> Self {
        Node {
            kind,
            weight: Some(clamp_weight(weight)),
            coeffs: Vec::new(),
            children,
        }
    }

    pub fn linear(kind: OpKind, coeffs: Vec<f64>, children: Vec<Node>) -> Self {
        Node {
            kind,
            weight: None,
            coeffs,
            children,
        }
    }

    pub fn class(&self) -> OpClass {
        self.kind.class()
    }

    /// Total number of nodes in this subtree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Node::size).sum::<usize>()
    }

    /// Largest number of nodes of `class` on any path from this node down.
    pub fn class_height(&self, class: OpClass) -> usize {
        let own = usize::from(self.class() == class);
        own + self.children.iter().map(|c| c.class_height(class)).max().unwrap_or(0)
    }

    pub fn get(&self, path: &[usize]) -> Option<&Node> {
        let mut node = self;
        for &i in path {
            node = node.children.get(i)?;
        }
        Some(node)
    }

    pub fn get_mut(&mut self, path: &[usize]) -> Option<&mut Node> {
        let mut node = self;
        for &i in path {
            node = node.children.get_mut(i)?;
        }
        Some(node)
    }
}

pub(crate) fn clamp_weight(w: f64) -> f64 {
    if w.is_nan() {
        0.0
    } else {
        w.clamp(0.0, 1.0)
    }
}

/// Position of a node inside a tree, with the layer context above it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSite {
    pub path: Vec<usize>,
    pub class: OpClass,
    /// Boolean nodes strictly above this node.
    pub booleans_above: usize,
    /// Arithmetic nodes strictly above this node.
    pub maths_above: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExprTree {
    pub variant: Variant,
    pub root: Node,
}

impl ExprTree {
    pub fn new(variant: Variant, root: Node) -> Self {
        ExprTree { variant, root }
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }

    /// Deepest boolean chain on any root-to-leaf path.
    pub fn boolean_depth(&self) -> usize {
        self.root.class_height(OpClass::Boolean)
    }

    pub fn math_depth(&self) -> usize {
        self.root.class_height(OpClass::Mathematical)
    }

    pub fn get(&self, path: &[usize]) -> Option<&Node> {
        self.root.get(path)
    }

    pub fn get_mut(&mut self, path: &[usize]) -> Option<&mut Node> {
        self.root.get_mut(path)
    }

    /// Replaces the subtree at `path`, returning the old subtree.
    pub fn replace(&mut self, path: &[usize], subtree: Node) -> Option<Node> {
        let slot = self.root.get_mut(path)?;
        Some(std::mem::replace(slot, subtree))
    }

    /// Every node in preorder with its layer context.
    pub fn sites(&self) -> Vec<NodeSite> {
        let mut out = Vec::with_capacity(self.size());
        let mut path = Vec::new();
        collect_sites(&self.root, &mut path, 0, 0, &mut out);
        out
    }

    /// Classes that occur at least once in the tree.
    pub fn classes_present(&self) -> [bool; 4] {
        let mut present = [false; 4];
        fn walk(node: &Node, present: &mut [bool; 4]) {
            present[node.class() as usize] = true;
            node.children.iter().for_each(|c| walk(c, present));
        }
        walk(&self.root, &mut present);
        present
    }
}

fn collect_sites(
    node: &Node,
    path: &mut Vec<usize>,
    booleans_above: usize,
    maths_above: usize,
    out: &mut Vec<NodeSite>,
) {
    let class = node.class();
    out.push(NodeSite {
        path: path.clone(),
        class,
        booleans_above,
        maths_above,
    });
    let b = booleans_above + usize::from(class == OpClass::Boolean);
    let m = maths_above + usize::from(class == OpClass::Mathematical);
    for (i, child) in node.children.iter().enumerate() {
        path.push(i);
        collect_sites(child, path, b, m, out);
        path.pop();
    }
}

impl fmt::Display for ExprTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_tree(self))
    }
}

/// Random-generation bounds on the operator type subchain of every path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenBounds {
    pub bool_min: usize,
    pub bool_max: usize,
    pub cmp_exact: usize,
    pub math_min: usize,
    pub math_max: usize,
    pub term_exact: usize,
}

impl Default for GenBounds {
    fn default() -> Self {
        GenBounds {
            bool_min: 1,
            bool_max: 3,
            cmp_exact: 1,
            math_min: 1,
            math_max: 4,
            term_exact: 1,
        }
    }
}

impl GenBounds {
    pub fn is_consistent(&self) -> bool {
        self.bool_min >= 1
            && self.bool_min <= self.bool_max
            && self.math_min <= self.math_max
            && self.cmp_exact == 1
            && self.term_exact == 1
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TreeError {
    #[error("weight locator {0:?} does not resolve to a weight slot")]
    InvalidLocator(WeightLocator),
}
