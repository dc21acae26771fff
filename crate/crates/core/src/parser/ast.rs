use super::lexer::{tokenize, Spanned, Tok};
use super::ParseError;
use crate::polyhedral::{LinearExpr, LinearTerm, Relation};

/// Kind of a parsed constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Leq,
    Geq,
    Eq,
    /// `|lhs| <= rhs`
    AbsLeq,
}

/// An expression tree as written, before linearization.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Num(f64),
    Var(String),
    Neg(Box<ExprNode>),
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
    /// Product; `column` locates the operator (or the second factor when implicit).
    Mul(Box<ExprNode>, Box<ExprNode>, usize),
    Div(Box<ExprNode>, Box<ExprNode>, usize),
}

/// A parsed constraint line.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSyntaxTree {
    pub kind: ConstraintKind,
    pub lhs: ExprNode,
    pub rhs: ExprNode,
}

impl ConstraintSyntaxTree {
    /// Linear terms for this constraint; `|e| <= k` yields two.
    pub fn lower(&self, line: usize) -> Result<Vec<LinearTerm>, ParseError> {
        let lhs = linearize(&self.lhs, line)?;
        let rhs = linearize(&self.rhs, line)?;
        let diff = lhs.add_scaled(-1.0, &rhs);
        Ok(match self.kind {
            ConstraintKind::Leq => vec![LinearTerm::from_expr(&diff, Relation::Leq)],
            ConstraintKind::Geq => vec![LinearTerm::from_expr(&diff.scaled(-1.0), Relation::Leq)],
            ConstraintKind::Eq => vec![LinearTerm::from_expr(&diff, Relation::Eq)],
            ConstraintKind::AbsLeq => {
                let upper = lhs.add_scaled(-1.0, &rhs);
                let lower = lhs.scaled(-1.0).add_scaled(-1.0, &rhs);
                vec![
                    LinearTerm::from_expr(&upper, Relation::Leq),
                    LinearTerm::from_expr(&lower, Relation::Leq),
                ]
            }
        })
    }
}

pub(crate) fn linearize(node: &ExprNode, line: usize) -> Result<LinearExpr, ParseError> {
    Ok(match node {
        ExprNode::Num(x) => LinearExpr::constant(*x),
        ExprNode::Var(v) => LinearExpr::var(v.clone()),
        ExprNode::Neg(a) => linearize(a, line)?.scaled(-1.0),
        ExprNode::Add(a, b) => linearize(a, line)?.add_scaled(1.0, &linearize(b, line)?),
        ExprNode::Sub(a, b) => linearize(a, line)?.add_scaled(-1.0, &linearize(b, line)?),
        ExprNode::Mul(a, b, column) => {
            let (a, b) = (linearize(a, line)?, linearize(b, line)?);
            if a.is_constant() {
                b.scaled(a.constant_part())
            } else if b.is_constant() {
                a.scaled(b.constant_part())
            } else {
                return Err(ParseError {
                    line,
                    column: *column,
                    expected: vec!["linear expression".into()],
                    found: "product of two variables".into(),
                });
            }
        }
        ExprNode::Div(a, b, column) => {
            let (a, b) = (linearize(a, line)?, linearize(b, line)?);
            if !b.is_constant() || b.constant_part() == 0.0 {
                return Err(ParseError {
                    line,
                    column: *column,
                    expected: vec!["nonzero numeric divisor".into()],
                    found: if b.is_constant() {
                        "division by zero".into()
                    } else {
                        "division by a variable".into()
                    },
                });
            }
            a.scaled(1.0 / b.constant_part())
        }
    })
}

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
}

const FACTOR_START: [&str; 4] = ["number", "variable", "'('", "'-'"];

impl Parser {
    pub(crate) fn new(src: &str, line: usize) -> Result<Self, ParseError> {
        Ok(Self {
            toks: tokenize(src, line)?,
            pos: 0,
            line,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn column(&self) -> usize {
        self.toks[self.pos].column
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    pub(crate) fn constraint(&mut self) -> Result<ConstraintSyntaxTree, ParseError> {
        let tree = if *self.peek() == Tok::Bar {
            self.bump();
            let inner = self.expr()?;
            self.expect(Tok::Bar, "'|'")?;
            self.expect(Tok::Le, "'<='")?;
            let bound = self.expr()?;
            ConstraintSyntaxTree {
                kind: ConstraintKind::AbsLeq,
                lhs: inner,
                rhs: bound,
            }
        } else {
            let lhs = self.expr()?;
            let kind = match self.peek() {
                Tok::Le => ConstraintKind::Leq,
                Tok::Ge => ConstraintKind::Geq,
                Tok::Eq => ConstraintKind::Eq,
                _ => return Err(self.error(&["'<='", "'>='", "'='", "'+'", "'-'", "'*'"])),
            };
            self.bump();
            let rhs = self.expr()?;
            ConstraintSyntaxTree { kind, lhs, rhs }
        };
        if *self.peek() != Tok::End {
            return Err(self.error(&["end of input", "'+'", "'-'"]));
        }
        if tree.kind == ConstraintKind::AbsLeq {
            let bound = linearize(&tree.rhs, self.line)?;
            if !bound.is_constant() {
                return Err(ParseError {
                    line: self.line,
                    column: self
                        .toks
                        .iter()
                        .rev()
                        .find(|t| matches!(t.tok, Tok::Le))
                        .map_or(1, |t| t.column + 2),
                    expected: vec!["numeric bound".into()],
                    found: "expression with variables".into(),
                });
            }
        }
        Ok(tree)
    }

    pub(crate) fn full_expr(&mut self) -> Result<ExprNode, ParseError> {
        let e = self.expr()?;
        if *self.peek() != Tok::End {
            return Err(self.error(&["end of input", "'+'", "'-'"]));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<ExprNode, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = ExprNode::Add(Box::new(acc), Box::new(self.unary()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = ExprNode::Sub(Box::new(acc), Box::new(self.unary()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprNode, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(ExprNode::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.product(),
        }
    }

    fn product(&mut self) -> Result<ExprNode, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let column = self.column();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = ExprNode::Mul(Box::new(acc), Box::new(self.factor()?), column);
                }
                Tok::Slash => {
                    self.bump();
                    acc = ExprNode::Div(Box::new(acc), Box::new(self.factor()?), column);
                }
                // Implicit multiplication: "2o", "-0.5 i", "2(x + y)".
                Tok::Ident(_) | Tok::LParen => {
                    acc = ExprNode::Mul(Box::new(acc), Box::new(self.factor()?), column);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprNode, ParseError> {
        match self.peek().clone() {
            Tok::Num(x) => {
                self.bump();
                Ok(ExprNode::Num(x))
            }
            Tok::Ident(v) => {
                self.bump();
                Ok(ExprNode::Var(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Minus => {
                self.bump();
                Ok(ExprNode::Neg(Box::new(self.factor()?)))
            }
            _ => Err(self.error(&FACTOR_START)),
        }
    }
}
