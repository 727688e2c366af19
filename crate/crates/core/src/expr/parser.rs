use super::lexer::{lex, Tok, Token};
use super::{AnalyticExpr, Node};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::Arc;

const FUNCTIONS: [&str; 3] = ["exp", "log", "koebe"];

// Identifiers people reach for when they forget only analytic building
// blocks exist here.
const NON_ANALYTIC: [&str; 9] =
    ["conj", "conjugate", "bar", "abs", "re", "im", "Re", "Im", "arg"];

pub(super) fn parse(src: &str) -> Result<AnalyticExpr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let node = p.expr()?;
    match p.peek().tok {
        Tok::Eof => Ok(AnalyticExpr { root: node }),
        _ => Err(p.unexpected("end of input")),
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, ahead: usize) -> &Token {
        let idx = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[idx]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        let t = self.peek();
        let got = match &t.tok {
            Tok::Eof => "end of input".to_string(),
            Tok::Num { value, imag } => {
                if *imag {
                    format!("`{value}i`")
                } else {
                    format!("`{value}`")
                }
            }
            Tok::Ident(name) => format!("`{name}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        };
        Error::Syntax { offset: t.offset, message: format!("expected {wanted}, found {got}") }
    }

    fn expr(&mut self) -> Result<Arc<Node>> {
        // Leading unary minus is accepted as a convenience; it parses as
        // negation of the first term. Negating a bare literal folds into
        // the constant so `-0.5` and a printed negative constant are the
        // same node, jets included.
        let mut acc = if matches!(self.peek().tok, Tok::Minus) {
            self.bump();
            let term = self.term()?;
            match &*term {
                Node::Const(c) => Arc::new(Node::Const(super::neg_const(*c))),
                _ => Arc::new(Node::Neg(term)),
            }
        } else {
            self.term()?
        };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = Arc::new(Node::Add(acc, self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Arc::new(Node::Sub(acc, self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Arc<Node>> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    acc = Arc::new(Node::Mul(acc, self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    acc = Arc::new(Node::Div(acc, self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Arc<Node>> {
        let base = self.base()?;
        if matches!(self.peek().tok, Tok::Caret) {
            self.bump();
            let n = self.exponent()?;
            return Ok(Arc::new(Node::Pow(base, n)));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32> {
        let negative = if matches!(self.peek().tok, Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let t = self.peek().clone();
        match t.tok {
            Tok::Num { value, imag: false } if value.fract() == 0.0 && value.abs() <= 64.0 => {
                self.bump();
                let n = value as i32;
                Ok(if negative { -n } else { n })
            }
            Tok::Num { .. } => Err(Error::Syntax {
                offset: t.offset,
                message: "exponent must be an integer with |n| <= 64".into(),
            }),
            _ => Err(self.unexpected("integer exponent")),
        }
    }

    fn base(&mut self) -> Result<Arc<Node>> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num { value, imag } => {
                self.bump();
                let first = if imag {
                    Complex64::new(0.0, value)
                } else {
                    Complex64::new(value, 0.0)
                };
                // Greedy combined literal: real ("+"|"-") real "i" collapses
                // to one constant token-wise, per the grammar.
                if !imag {
                    let sign = match self.peek().tok {
                        Tok::Plus => Some(1.0),
                        Tok::Minus => Some(-1.0),
                        _ => None,
                    };
                    if let Some(sign) = sign {
                        if let Tok::Num { value: im, imag: true } = self.peek_at(1).tok {
                            self.bump();
                            self.bump();
                            return Ok(Arc::new(Node::Const(Complex64::new(value, sign * im))));
                        }
                    }
                }
                Ok(Arc::new(Node::Const(first)))
            }
            Tok::Ident(name) => {
                if name == "z" {
                    self.bump();
                    return Ok(Arc::new(Node::Var));
                }
                if FUNCTIONS.contains(&name.as_str()) {
                    self.bump();
                    if !matches!(self.peek().tok, Tok::LParen) {
                        return Err(self.unexpected(&format!("`(` after `{name}`")));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    if !matches!(self.peek().tok, Tok::RParen) {
                        return Err(self.unexpected("`)`"));
                    }
                    self.bump();
                    let node = match name.as_str() {
                        "exp" => Node::Exp(arg),
                        "log" => Node::Log(arg),
                        _ => Node::Koebe(arg),
                    };
                    return Ok(Arc::new(node));
                }
                if NON_ANALYTIC.contains(&name.as_str()) {
                    return Err(Error::NonAnalyticConstruct { offset: t.offset, name });
                }
                Err(Error::UnknownIdentifier { offset: t.offset, name })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek().tok, Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("`z`, a number, a function call, or `(`")),
        }
    }
}
