//! Analytic expressions over the unit disk.
//!
//! The grammar is a small calculator language in one free variable `z`:
//!
//! ```text
//! expr    := ["-"] term { ("+" | "-") term }
//! term    := factor { ("*" | "/") factor }
//! factor  := base [ "^" integer ]
//! base    := "z" | literal | ident "(" expr ")" | "(" expr ")"
//! ident   := "exp" | "log" | "koebe"
//! literal := real | real "i" | real ("+" | "-") real "i"
//! ```
//!
//! Whitespace is insignificant. A combined literal such as `0.5+0.25i` is
//! consumed greedily as a single constant wherever a base is expected, so in
//! the rare position where that binds tighter than intended (inside a
//! product), parenthesize. Reals accept an optional exponent suffix
//! (`2e-3`) so that printed constants always re-parse.
//!
//! Only analytic constructs exist. Asking for `conj`, `abs`, `re`, `im`, or
//! `arg` is rejected with a dedicated error rather than a generic unknown
//! identifier, because those requests usually mean the caller wanted a
//! harmonic map, which is two analytic expressions, not one.
//!
//! Evaluation produces an order-3 jet and is only defined on |z| < 1.
//! Every quotient checks its denominator at evaluation time; `log` rejects
//! arguments within 1e-9 of the branch cut (-inf, 0].

mod jet;
mod lexer;
mod parser;

pub use jet::Jet3;

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Denominators smaller than this poison a quotient.
pub const DIV_EPS: f64 = 1e-14;
/// Log arguments closer than this to the cut or to 0 are rejected.
pub const LOG_CUT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Const(Complex64),
    Var,
    Neg(Arc<Node>),
    Add(Arc<Node>, Arc<Node>),
    Sub(Arc<Node>, Arc<Node>),
    Mul(Arc<Node>, Arc<Node>),
    Div(Arc<Node>, Arc<Node>),
    Pow(Arc<Node>, i32),
    Exp(Arc<Node>),
    Log(Arc<Node>),
    Koebe(Arc<Node>),
    /// outer after inner; only built through [`AnalyticExpr::compose`], the
    /// grammar has no surface syntax for it.
    Compose { outer: Arc<Node>, inner: Arc<Node> },
}

/// An immutable analytic expression tree. Cheap to clone and share.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticExpr {
    root: Arc<Node>,
}

impl AnalyticExpr {
    /// Parse source text against the grammar above.
    pub fn parse(src: &str) -> Result<AnalyticExpr> {
        parser::parse(src)
    }

    pub fn var() -> AnalyticExpr {
        Node::Var.into()
    }

    pub fn constant(c: Complex64) -> AnalyticExpr {
        Node::Const(c).into()
    }

    pub fn real(x: f64) -> AnalyticExpr {
        Self::constant(Complex64::new(x, 0.0))
    }

    pub fn neg(a: &AnalyticExpr) -> AnalyticExpr {
        // Fold literal negation, mirroring the parser.
        match &*a.root {
            Node::Const(c) => Node::Const(neg_const(*c)).into(),
            _ => Node::Neg(a.root.clone()).into(),
        }
    }

    pub fn add(a: &AnalyticExpr, b: &AnalyticExpr) -> AnalyticExpr {
        Node::Add(a.root.clone(), b.root.clone()).into()
    }

    pub fn sub(a: &AnalyticExpr, b: &AnalyticExpr) -> AnalyticExpr {
        Node::Sub(a.root.clone(), b.root.clone()).into()
    }

    pub fn mul(a: &AnalyticExpr, b: &AnalyticExpr) -> AnalyticExpr {
        Node::Mul(a.root.clone(), b.root.clone()).into()
    }

    pub fn div(a: &AnalyticExpr, b: &AnalyticExpr) -> AnalyticExpr {
        Node::Div(a.root.clone(), b.root.clone()).into()
    }

    pub fn powi(a: &AnalyticExpr, n: i32) -> AnalyticExpr {
        Node::Pow(a.root.clone(), n).into()
    }

    pub fn exp(a: &AnalyticExpr) -> AnalyticExpr {
        Node::Exp(a.root.clone()).into()
    }

    pub fn log(a: &AnalyticExpr) -> AnalyticExpr {
        Node::Log(a.root.clone()).into()
    }

    pub fn koebe(a: &AnalyticExpr) -> AnalyticExpr {
        Node::Koebe(a.root.clone()).into()
    }

    /// Functional composition outer(inner). At evaluation time the inner
    /// value must stay in the open disk or the point is rejected with
    /// [`Error::RangeViolation`].
    pub fn compose(outer: &AnalyticExpr, inner: &AnalyticExpr) -> AnalyticExpr {
        Node::Compose { outer: outer.root.clone(), inner: inner.root.clone() }.into()
    }

    /// True when the tree is literally the zero constant.
    pub fn is_const_zero(&self) -> bool {
        matches!(&*self.root, Node::Const(c) if c.re == 0.0 && c.im == 0.0)
    }

    /// Value and first three derivatives at z, |z| < 1.
    pub fn eval_jet(&self, z: Complex64) -> Result<Jet3> {
        if !(z.norm_sqr() < 1.0) {
            return Err(Error::OutsideDisk { at: z });
        }
        let j = eval(&self.root, z)?;
        if !j.is_finite() {
            return Err(Error::MathDomain { at: z, what: "jet overflowed to non-finite".into() });
        }
        Ok(j)
    }

    /// Value only; convenience over [`AnalyticExpr::eval_jet`].
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_jet(z)?.f0)
    }
}

impl From<Node> for AnalyticExpr {
    fn from(n: Node) -> Self {
        AnalyticExpr { root: Arc::new(n) }
    }
}

impl FromStr for AnalyticExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AnalyticExpr::parse(s)
    }
}

fn eval(node: &Node, z: Complex64) -> Result<Jet3> {
    match node {
        Node::Const(c) => Ok(Jet3::constant(*c)),
        Node::Var => Ok(Jet3::variable(z)),
        Node::Neg(a) => Ok(-eval(a, z)?),
        Node::Add(a, b) => Ok(eval(a, z)? + eval(b, z)?),
        Node::Sub(a, b) => Ok(eval(a, z)? - eval(b, z)?),
        Node::Mul(a, b) => Ok(eval(a, z)? * eval(b, z)?),
        Node::Div(a, b) => {
            let den = eval(b, z)?;
            guard_div(den.f0, z)?;
            Ok(eval(a, z)?.div(den))
        }
        Node::Pow(a, n) => {
            let base = eval(a, z)?;
            if *n >= 0 {
                Ok(base.powi(*n as u32))
            } else {
                let pos = base.powi(n.unsigned_abs());
                guard_div(pos.f0, z)?;
                Ok(Jet3::constant(Complex64::new(1.0, 0.0)).div(pos))
            }
        }
        Node::Exp(a) => Ok(eval(a, z)?.exp()),
        Node::Log(a) => {
            let inner = eval(a, z)?;
            let w = inner.f0;
            // Distance from w to the cut (-inf, 0]: |Im w| left of the
            // origin, |w| otherwise.
            let dist = if w.re > 0.0 { w.norm() } else { w.im.abs() };
            if dist < LOG_CUT_EPS {
                return Err(Error::MathDomain {
                    at: z,
                    what: format!("log argument {w} within {LOG_CUT_EPS:e} of the branch cut"),
                });
            }
            Ok(inner.log())
        }
        Node::Koebe(a) => {
            // k(w) = w / (1 - w)^2, jet-composed with the inner jet.
            let inner = eval(a, z)?;
            let one = Jet3::constant(Complex64::new(1.0, 0.0));
            let den = (one - inner) * (one - inner);
            guard_div(den.f0, z)?;
            Ok(inner.div(den))
        }
        Node::Compose { outer, inner } => {
            let gj = eval(inner, z)?;
            if !(gj.f0.norm_sqr() < 1.0) {
                return Err(Error::RangeViolation { at: z, value: gj.f0 });
            }
            let fj = eval(outer, gj.f0)?;
            Ok(Jet3::chain(fj, gj))
        }
    }
}

fn guard_div(den: Complex64, z: Complex64) -> Result<()> {
    if den.norm() < DIV_EPS {
        Err(Error::MathDomain { at: z, what: format!("denominator {den} below {DIV_EPS:e}") })
    } else {
        Ok(())
    }
}

// Printing. Operators carry their usual precedence; composition prints by
// substituting the parenthesized inner text for the variable, which
// re-parses to a tree with identical evaluation semantics.

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_POW: u8 = 3;
const PREC_ATOM: u8 = 4;

fn precedence(node: &Node) -> u8 {
    match node {
        Node::Add(..) | Node::Sub(..) | Node::Neg(..) => PREC_ADD,
        // A constant that renders with a leading minus binds like a
        // negation: it must be parenthesized anywhere the grammar does not
        // accept a unary minus.
        Node::Const(c) if const_leads_with_minus(*c) => PREC_ADD,
        Node::Mul(..) | Node::Div(..) => PREC_MUL,
        Node::Pow(..) => PREC_POW,
        _ => PREC_ATOM,
    }
}

fn const_leads_with_minus(c: Complex64) -> bool {
    if c.im == 0.0 {
        c.re.is_sign_negative()
    } else if c.re == 0.0 {
        c.im.is_sign_negative()
    } else {
        c.re < 0.0
    }
}

// Negation of a literal, preserving the sign of zero components. The
// parser's minus fold and the neg() builder both go through here so a
// folded constant evaluates bit-for-bit like the printed form it came
// from ("-2i" must not pick up a negative-zero real part).
pub(crate) fn neg_const(c: Complex64) -> Complex64 {
    let nz = |x: f64| if x == 0.0 { x } else { -x };
    Complex64::new(nz(c.re), nz(c.im))
}

fn fmt_const(c: Complex64, out: &mut String) {
    if c.im == 0.0 {
        out.push_str(&format!("{}", c.re));
    } else if c.re == 0.0 {
        out.push_str(&format!("{}i", c.im));
    } else if c.re < 0.0 {
        // A combined literal starts with an unsigned real token, so a
        // negative real part cannot sit inside one: a leading minus would
        // fold over the whole literal. Print the negation of the
        // component-flipped constant instead; the fold restores it.
        out.push_str("-(");
        out.push_str(&format!("{}", -c.re));
        if -c.im >= 0.0 {
            out.push('+');
        }
        out.push_str(&format!("{}i", -c.im));
        out.push(')');
    } else {
        // Wrapped so the constant stays one base regardless of context.
        out.push('(');
        out.push_str(&format!("{}", c.re));
        if c.im >= 0.0 {
            out.push('+');
        }
        out.push_str(&format!("{}i", c.im));
        out.push(')');
    }
}

fn fmt_node(node: &Node, var_text: &str, out: &mut String) {
    let child = |n: &Node, min_prec: u8, out: &mut String| {
        if precedence(n) < min_prec {
            out.push('(');
            fmt_node(n, var_text, out);
            out.push(')');
        } else {
            fmt_node(n, var_text, out);
        }
    };
    match node {
        Node::Const(c) => fmt_const(*c, out),
        Node::Var => out.push_str(var_text),
        Node::Neg(a) => {
            out.push('-');
            child(a, PREC_MUL, out);
        }
        Node::Add(a, b) => {
            child(a, PREC_ADD, out);
            out.push('+');
            child(b, PREC_ADD + 1, out);
        }
        Node::Sub(a, b) => {
            child(a, PREC_ADD, out);
            out.push('-');
            child(b, PREC_ADD + 1, out);
        }
        Node::Mul(a, b) => {
            child(a, PREC_MUL, out);
            out.push('*');
            child(b, PREC_MUL + 1, out);
        }
        Node::Div(a, b) => {
            child(a, PREC_MUL, out);
            out.push('/');
            child(b, PREC_MUL + 1, out);
        }
        Node::Pow(a, n) => {
            child(a, PREC_ATOM, out);
            out.push('^');
            out.push_str(&n.to_string());
        }
        Node::Exp(a) => {
            out.push_str("exp(");
            fmt_node(a, var_text, out);
            out.push(')');
        }
        Node::Log(a) => {
            out.push_str("log(");
            fmt_node(a, var_text, out);
            out.push(')');
        }
        Node::Koebe(a) => {
            out.push_str("koebe(");
            fmt_node(a, var_text, out);
            out.push(')');
        }
        Node::Compose { outer, inner } => {
            let mut inner_text = String::from("(");
            fmt_node(inner, var_text, &mut inner_text);
            inner_text.push(')');
            fmt_node(outer, &inner_text, out);
        }
    }
}

impl fmt::Display for AnalyticExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        fmt_node(&self.root, "z", &mut out);
        f.write_str(&out)
    }
}

impl serde::Serialize for AnalyticExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for AnalyticExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        AnalyticExpr::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
