//! Parsing, evaluation and symbolic differentiation of entire functions.
//!
//! Accepted grammar: decimal numbers with an optional `i` suffix, the
//! variable `z`, the imaginary unit `i`, the operators `+ - * / ^`,
//! parentheses, unary minus and the primitives `exp`, `sin`, `cos`.
//! Division is only allowed by a nonzero constant and `^` only takes a
//! non-negative integer exponent, so every accepted expression is entire.

mod expr;
mod parser;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

pub use expr::{Expr, Primitive};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("expression is not entire (byte {position}): {reason}")]
    NonEntire { position: usize, reason: String },
    #[error("constant subexpression is not finite: {0}")]
    NonFiniteConstant(String),
}

/// Result of evaluating a function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    /// The true value is not representable; `value` has been saturated
    /// to modulus `f64::MAX`.
    pub overflowed: bool,
}

/// The value reported for an overflowed evaluation.
pub const SATURATED: Complex64 = Complex64::new(f64::MAX, 0.0);

/// A validated entire function together with its symbolic derivative.
///
/// Immutable once built; cloning is cheap.
#[derive(Debug, Clone)]
pub struct FunctionExpression {
    source: Arc<str>,
    root: Arc<Expr>,
    derivative: Arc<Expr>,
}

impl FunctionExpression {
    /// Parses and validates `source`.
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let root = parser::parse_expr(source)?;
        check_finite(&root)?;
        Ok(Self::from_parts(source.trim().into(), root))
    }

    /// Wraps an already-built tree. The tree constructors on [`Expr`]
    /// maintain the entirety invariants.
    pub fn from_expr(root: Expr) -> Self {
        let source: Arc<str> = root.to_string().into();
        Self::from_parts(source, root)
    }

    fn from_parts(source: Arc<str>, root: Expr) -> Self {
        let derivative = root.derivative();
        Self {
            source,
            root: Arc::new(root),
            derivative: Arc::new(derivative),
        }
    }

    /// The text this function was parsed from (or its canonical form).
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    /// Fully parenthesized canonical text; parses back to an identical tree.
    pub fn print(&self) -> String {
        self.root.to_string()
    }

    /// Evaluates with the saturate-and-flag overflow policy.
    pub fn evaluate(&self, z: Complex64) -> Evaluation {
        saturate(self.root.eval(z))
    }

    /// Shorthand for `evaluate(z).value`.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.evaluate(z).value
    }

    /// Evaluates the cached derivative.
    pub fn eval_derivative(&self, z: Complex64) -> Evaluation {
        saturate(self.derivative.eval(z))
    }

    /// The symbolic derivative as a function in its own right.
    pub fn derivative(&self) -> FunctionExpression {
        Self::from_expr((*self.derivative).clone())
    }
}

impl fmt::Display for FunctionExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.root, f)
    }
}

impl std::str::FromStr for FunctionExpression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

#[inline]
fn saturate(value: Complex64) -> Evaluation {
    if value.re.is_finite() && value.im.is_finite() {
        Evaluation {
            value,
            overflowed: false,
        }
    } else {
        Evaluation {
            value: SATURATED,
            overflowed: true,
        }
    }
}

fn check_finite(e: &Expr) -> Result<(), ParseError> {
    match e {
        Expr::Const(c) if !(c.re.is_finite() && c.im.is_finite()) => {
            Err(ParseError::NonFiniteConstant(format!("{c}")))
        }
        Expr::Div(_, c) if !(c.re.is_finite() && c.im.is_finite()) => {
            Err(ParseError::NonFiniteConstant(format!("{c}")))
        }
        Expr::Const(_) | Expr::Var => Ok(()),
        Expr::Neg(a) | Expr::Div(a, _) | Expr::Pow(a, _) | Expr::Unary(_, a) => check_finite(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            check_finite(a)?;
            check_finite(b)
        }
    }
}
