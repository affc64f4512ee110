use std::fmt;

use super::{ExprTree, Node, OpClass, OpKind, Variant};

/// Depth limits the validator enforces on every root-to-leaf path.
///
/// Random generation stays within [`GenBounds`](super::GenBounds); the
/// boolean limit here is the absolute cap that extension mutation may grow
/// a tree to. Arithmetic depth may be zero, so a comparison may sit directly
/// over terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationLimits {
    pub bool_max: usize,
    pub math_max: usize,
}

impl ValidationLimits {
    pub const BOOL_DEPTH_CAP: usize = 6;
}

impl Default for ValidationLimits {
    fn default() -> Self {
        ValidationLimits {
            bool_max: Self::BOOL_DEPTH_CAP,
            math_max: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    RootNotBoolean,
    SoftOnlyInHardTree(&'static str),
    MissingWeight,
    UnexpectedWeight,
    WeightOutOfRange(f64),
    CoefficientCount { expected: usize, found: usize },
    Arity { expected: usize, found: usize },
    LayerOrder { parent: OpClass, child: OpClass },
    FeatureOutOfRange { index: usize, n_features: usize },
    NonFinite,
    BooleanDepth { depth: usize, max: usize },
    MathDepth { depth: usize, max: usize },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::RootNotBoolean => write!(f, "root not Boolean"),
            ViolationKind::SoftOnlyInHardTree(op) => {
                write!(f, "SGP-only operator in hard tree: {op}")
            }
            ViolationKind::MissingWeight => write!(f, "weighted operator without weight"),
            ViolationKind::UnexpectedWeight => write!(f, "weight on an unweighted node"),
            ViolationKind::WeightOutOfRange(w) => write!(f, "weight {w} outside [0, 1]"),
            ViolationKind::CoefficientCount { expected, found } => {
                write!(f, "expected {expected} coefficients, found {found}")
            }
            ViolationKind::Arity { expected, found } => {
                write!(f, "expected {expected} children, found {found}")
            }
            ViolationKind::LayerOrder { parent, child } => {
                write!(f, "{child:?} node below {parent:?} node")
            }
            ViolationKind::FeatureOutOfRange { index, n_features } => {
                write!(f, "feature x{index} out of range for {n_features} features")
            }
            ViolationKind::NonFinite => write!(f, "non-finite constant or coefficient"),
            ViolationKind::BooleanDepth { depth, max } => {
                write!(f, "boolean chain of {depth} exceeds {max}")
            }
            ViolationKind::MathDepth { depth, max } => {
                write!(f, "arithmetic chain of {depth} exceeds {max}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: Vec<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: {}", self.path, self.kind)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, pred: impl Fn(&ViolationKind) -> bool) -> bool {
        self.violations.iter().any(|v| pred(&v.kind))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate(tree: &ExprTree, n_features: usize) -> ValidationReport {
    validate_with(tree, n_features, ValidationLimits::default())
}

pub fn validate_with(tree: &ExprTree, n_features: usize, limits: ValidationLimits) -> ValidationReport {
    let mut checker = Checker {
        variant: tree.variant,
        n_features,
        limits,
        path: Vec::new(),
        out: Vec::new(),
    };
    if tree.root.class() != OpClass::Boolean {
        checker.push(ViolationKind::RootNotBoolean);
    }
    checker.node(&tree.root, 0, 0);
    ValidationReport {
        violations: checker.out,
    }
}

struct Checker {
    variant: Variant,
    n_features: usize,
    limits: ValidationLimits,
    path: Vec<usize>,
    out: Vec<Violation>,
}

impl Checker {
    fn push(&mut self, kind: ViolationKind) {
        self.out.push(Violation {
            path: self.path.clone(),
            kind,
        });
    }

    fn node(&mut self, node: &Node, bools: usize, maths: usize) {
        let kind = node.kind;
        let class = kind.class();
        let bools = bools + usize::from(class == OpClass::Boolean);
        let maths = maths + usize::from(class == OpClass::Mathematical);

        if self.variant == Variant::Hard && kind.soft_only() {
            self.push(ViolationKind::SoftOnlyInHardTree(kind.name().unwrap_or("?")));
        }
        let wants_weight = self.variant == Variant::Soft && kind.is_weighted();
        match (wants_weight, node.weight) {
            (true, None) => self.push(ViolationKind::MissingWeight),
            (false, Some(_)) => self.push(ViolationKind::UnexpectedWeight),
            (true, Some(w)) if !(0.0..=1.0).contains(&w) => self.push(ViolationKind::WeightOutOfRange(w)),
            _ => {}
        }
        if node.coeffs.len() != kind.coeff_count() {
            self.push(ViolationKind::CoefficientCount {
                expected: kind.coeff_count(),
                found: node.coeffs.len(),
            });
        }
        if node.coeffs.iter().any(|c| !c.is_finite()) {
            self.push(ViolationKind::NonFinite);
        }
        if node.children.len() != kind.arity() {
            self.push(ViolationKind::Arity {
                expected: kind.arity(),
                found: node.children.len(),
            });
        }
        match kind {
            OpKind::Symbol(index) if index >= self.n_features => self.push(ViolationKind::FeatureOutOfRange {
                index,
                n_features: self.n_features,
            }),
            OpKind::Const(c) if !c.is_finite() => self.push(ViolationKind::NonFinite),
            _ => {}
        }
        // Depth is reported once, at the node that first crosses the limit.
        if class == OpClass::Boolean && bools == self.limits.bool_max + 1 {
            self.push(ViolationKind::BooleanDepth {
                depth: bools,
                max: self.limits.bool_max,
            });
        }
        if class == OpClass::Mathematical && maths == self.limits.math_max + 1 {
            self.push(ViolationKind::MathDepth {
                depth: maths,
                max: self.limits.math_max,
            });
        }

        for (i, child) in node.children.iter().enumerate() {
            self.path.push(i);
            if !class.may_parent(child.class()) {
                self.push(ViolationKind::LayerOrder {
                    parent: class,
                    child: child.class(),
                });
            }
            self.node(child, bools, maths);
            self.path.pop();
        }
    }
}
