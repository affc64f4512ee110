//! S-expression text format for trees and model files.
//!
//! ```text
//! (AND 1.0 (GT 1.0 x0 0.5) (NOT 1.0 (LT 1.0 x1 x0)))    soft
//! (AND (GT x0 0.5) (NOT (LT x1 x0)))                    hard
//! ```
//!
//! Soft trees write the operator weight right after the name of every
//! boolean and comparison operator; LIN2/LIN3 always write their
//! coefficients before the children. Reals use the shortest representation
//! that parses back to the identical `f64`.

use std::fmt::Write as _;

use super::{ExprTree, Node, OpClass, OpKind, Variant};

const MODEL_MAGIC: &str = "#sgp-tree";
const MODEL_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown operator `{name}`")]
    UnknownOperator { line: usize, col: usize, name: String },
    #[error("{line}:{col}: {op} takes {expected} arguments, found {found}")]
    Arity {
        line: usize,
        col: usize,
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("bad model header: {0}")]
    Header(String),
}

pub fn format_tree(tree: &ExprTree) -> String {
    let mut out = String::new();
    write_node(&tree.root, &mut out);
    out
}

fn write_real(v: f64, out: &mut String) {
    // `{:?}` is the shortest round-trip form and always keeps a `.` or exponent.
    let _ = write!(out, "{v:?}");
}

fn write_node(node: &Node, out: &mut String) {
    match node.kind {
        OpKind::Symbol(i) => {
            let _ = write!(out, "x{i}");
        }
        OpKind::Const(c) => write_real(c, out),
        kind => {
            out.push('(');
            out.push_str(kind.name().expect("operators are named"));
            if let Some(w) = node.weight {
                out.push(' ');
                write_real(w, out);
            }
            for &a in &node.coeffs {
                out.push(' ');
                write_real(a, out);
            }
            for child in &node.children {
                out.push(' ');
                write_node(child, out);
            }
            out.push(')');
        }
    }
}

/// Parses a tree, inferring the variant from whether the first operator
/// carries a weight.
pub fn parse_tree(text: &str) -> Result<ExprTree, ParseError> {
    let tokens = tokenize(text);
    let variant = match (tokens.first(), tokens.get(1), tokens.get(2)) {
        (Some(t0), Some(name), Some(next)) if t0.text == "(" => {
            let weighted = OpKind::from_name(name.text).is_some_and(|k| k.is_weighted());
            if weighted && next.text.parse::<f64>().is_ok() {
                Variant::Soft
            } else {
                Variant::Hard
            }
        }
        _ => Variant::Hard,
    };
    Parser::new(tokens, variant).parse_all()
}

pub fn parse_tree_as(text: &str, variant: Variant) -> Result<ExprTree, ParseError> {
    Parser::new(tokenize(text), variant).parse_all()
}

/// Model file: one header line followed by the tree.
pub fn format_model(tree: &ExprTree, n_features: usize) -> String {
    format!(
        "{MODEL_MAGIC} {MODEL_VERSION} variant={} n_features={n_features}\n{}\n",
        tree.variant,
        format_tree(tree)
    )
}

pub fn parse_model(text: &str) -> Result<(ExprTree, usize), ParseError> {
    let (header, body) = text
        .split_once('\n')
        .ok_or_else(|| ParseError::Header("missing header line".into()))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some(MODEL_MAGIC) {
        return Err(ParseError::Header(format!("expected `{MODEL_MAGIC}`")));
    }
    if fields.next() != Some(MODEL_VERSION) {
        return Err(ParseError::Header(format!(
            "unsupported version, expected {MODEL_VERSION}"
        )));
    }
    let mut variant = None;
    let mut n_features = None;
    for field in fields {
        match field.split_once('=') {
            Some(("variant", "hard")) => variant = Some(Variant::Hard),
            Some(("variant", "soft")) => variant = Some(Variant::Soft),
            Some(("n_features", n)) => {
                n_features = Some(
                    n.parse::<usize>()
                        .map_err(|_| ParseError::Header(format!("bad n_features `{n}`")))?,
                )
            }
            _ => return Err(ParseError::Header(format!("unknown field `{field}`"))),
        }
    }
    let variant = variant.ok_or_else(|| ParseError::Header("missing variant".into()))?;
    let n_features = n_features.ok_or_else(|| ParseError::Header("missing n_features".into()))?;
    // body line numbers are reported relative to the whole file
    let mut parser = Parser::new(tokenize(body), variant);
    parser.line_offset = 1;
    Ok((parser.parse_all()?, n_features))
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let mut start: Option<usize> = None;
        for (i, b) in line.bytes().enumerate() {
            let is_paren = b == b'(' || b == b')';
            if is_paren || b.is_ascii_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token {
                        text: &line[s..i],
                        line: li + 1,
                        col: s + 1,
                    });
                }
                if is_paren {
                    tokens.push(Token {
                        text: &line[i..i + 1],
                        line: li + 1,
                        col: i + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            tokens.push(Token {
                text: &line[s..],
                line: li + 1,
                col: s + 1,
            });
        }
    }
    tokens
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    variant: Variant,
    line_offset: usize,
}

impl<'a> Parser<'a> {
    fn new(tokens: Vec<Token<'a>>, variant: Variant) -> Self {
        Parser {
            tokens,
            pos: 0,
            variant,
            line_offset: 0,
        }
    }

    fn parse_all(mut self) -> Result<ExprTree, ParseError> {
        let root = self.node()?;
        if let Some(t) = self.tokens.get(self.pos) {
            return Err(self.syntax(t, "trailing input after tree"));
        }
        Ok(ExprTree::new(self.variant, root))
    }

    fn syntax(&self, t: &Token<'_>, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: t.line + self.line_offset,
            col: t.col,
            msg: msg.into(),
        }
    }

    fn end_error(&self) -> ParseError {
        let (line, col) = self
            .tokens
            .last()
            .map(|t| (t.line + self.line_offset, t.col + t.text.len()))
            .unwrap_or((1 + self.line_offset, 1));
        ParseError::Syntax {
            line,
            col,
            msg: "unexpected end of input".into(),
        }
    }

    fn next(&mut self) -> Result<Token<'a>, ParseError> {
        let t = self.tokens.get(self.pos).cloned().ok_or_else(|| self.end_error())?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn real(&mut self, what: &str) -> Result<f64, ParseError> {
        let t = self.next()?;
        match t.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.syntax(&t, format!("expected {what}, found `{}`", t.text))),
        }
    }

    fn node(&mut self) -> Result<Node, ParseError> {
        let t = self.next()?;
        match t.text {
            "(" => self.operator(),
            ")" => Err(self.syntax(&t, "unexpected `)`")),
            text => self.term(&t, text),
        }
    }

    fn term(&self, t: &Token<'_>, text: &str) -> Result<Node, ParseError> {
        if let Some(index) = text.strip_prefix('x') {
            return index
                .parse::<usize>()
                .map(Node::symbol)
                .map_err(|_| self.syntax(t, format!("bad feature symbol `{text}`")));
        }
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Node::constant(v)),
            Ok(_) => Err(self.syntax(t, format!("non-finite constant `{text}`"))),
            Err(_) if text.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => {
                Err(ParseError::UnknownOperator {
                    line: t.line + self.line_offset,
                    col: t.col,
                    name: text.to_string(),
                })
            }
            Err(_) => Err(self.syntax(t, format!("bad term `{text}`"))),
        }
    }

    fn operator(&mut self) -> Result<Node, ParseError> {
        let name_tok = self.next()?;
        let kind = OpKind::from_name(name_tok.text).ok_or_else(|| ParseError::UnknownOperator {
            line: name_tok.line + self.line_offset,
            col: name_tok.col,
            name: name_tok.text.to_string(),
        })?;
        let weight = if self.variant == Variant::Soft && kind.is_weighted() {
            Some(self.real("operator weight")?)
        } else {
            None
        };
        let coeffs = (0..kind.coeff_count())
            .map(|_| self.real("linear coefficient"))
            .collect::<Result<Vec<_>, _>>()?;
        let mut children = Vec::with_capacity(kind.arity());
        loop {
            match self.peek() {
                Some(t) if t.text == ")" => {
                    self.pos += 1;
                    break;
                }
                Some(_) => children.push(self.node()?),
                None => return Err(self.end_error()),
            }
        }
        if children.len() != kind.arity() {
            return Err(ParseError::Arity {
                line: name_tok.line + self.line_offset,
                col: name_tok.col,
                op: kind.name().unwrap_or("?"),
                expected: kind.arity(),
                found: children.len(),
            });
        }
        debug_assert!(kind.class() != OpClass::Term);
        Ok(Node {
            kind,
            weight,
            coeffs,
            children,
        })
    }
}
