//! Expression tree for entire functions of one complex variable.

use std::fmt;

use num_complex::Complex64;

/// A unary entire primitive together with its derivative rule.
///
/// New primitives are added here: a name for the parser, an evaluation
/// rule and a derivative expressed in the same grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    Exp,
    Sin,
    Cos,
}

impl Primitive {
    pub const ALL: [Primitive; 3] = [Primitive::Exp, Primitive::Sin, Primitive::Cos];

    pub fn name(self) -> &'static str {
        match self {
            Primitive::Exp => "exp",
            Primitive::Sin => "sin",
            Primitive::Cos => "cos",
        }
    }

    pub fn lookup(name: &str) -> Option<Primitive> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    #[inline]
    pub fn apply(self, w: Complex64) -> Complex64 {
        match self {
            Primitive::Exp => w.exp(),
            Primitive::Sin => w.sin(),
            Primitive::Cos => w.cos(),
        }
    }

    /// Derivative of `self(u)` with respect to `u`, as an expression in `u`.
    fn outer_derivative(self, arg: &Expr) -> Expr {
        match self {
            Primitive::Exp => Expr::unary(Primitive::Exp, arg.clone()),
            Primitive::Sin => Expr::unary(Primitive::Cos, arg.clone()),
            Primitive::Cos => Expr::neg(Expr::unary(Primitive::Sin, arg.clone())),
        }
    }
}

/// Node of an entire-function expression.
///
/// The constructors below fold constant subtrees, so a tree never holds
/// an operator node whose operands are all constants. Quotients only
/// divide by nonzero constants and powers only use non-negative integer
/// exponents, which keeps every representable tree entire.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Quotient by a nonzero constant.
    Div(Box<Expr>, Complex64),
    Pow(Box<Expr>, u32),
    Unary(Primitive, Box<Expr>),
}

/// Maps `-0.0` to `+0.0` in both parts so folded constants print and
/// re-parse to the same bits.
#[inline]
pub(crate) fn canonical(c: Complex64) -> Complex64 {
    Complex64::new(c.re + 0.0, c.im + 0.0)
}

impl Expr {
    pub fn constant(c: Complex64) -> Expr {
        Expr::Const(canonical(c))
    }

    pub fn real(x: f64) -> Expr {
        Expr::constant(Complex64::new(x, 0.0))
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(Complex64::new(0.0, 0.0))
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(Complex64::new(1.0, 0.0))
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::constant(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::constant(x + y),
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::constant(x - y),
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::constant(x * y),
            _ => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    /// Caller guarantees `c != 0`.
    pub fn div(a: Expr, c: Complex64) -> Expr {
        match a {
            Expr::Const(x) => Expr::constant(x / c),
            other => Expr::Div(Box::new(other), canonical(c)),
        }
    }

    pub fn pow(a: Expr, n: u32) -> Expr {
        match a {
            Expr::Const(x) => Expr::constant(x.powu(n)),
            other => Expr::Pow(Box::new(other), n),
        }
    }

    pub fn unary(p: Primitive, a: Expr) -> Expr {
        match a {
            Expr::Const(x) => Expr::constant(p.apply(x)),
            other => Expr::Unary(p, Box::new(other)),
        }
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Div(a, _) | Expr::Pow(a, _) | Expr::Unary(_, a) => {
                a.contains_var()
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.contains_var() || b.contains_var()
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Neg(a) | Expr::Div(a, _) | Expr::Pow(a, _) | Expr::Unary(_, a) => 1 + a.size(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Plain double-precision evaluation. Intermediate overflow propagates
    /// as infinities or NaN; [`crate::funcspec::FunctionExpression`]
    /// applies the saturation policy on top of this.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var => z,
            Expr::Neg(a) => -a.eval(z),
            Expr::Add(a, b) => a.eval(z) + b.eval(z),
            Expr::Sub(a, b) => a.eval(z) - b.eval(z),
            Expr::Mul(a, b) => a.eval(z) * b.eval(z),
            Expr::Div(a, c) => a.eval(z) / c,
            Expr::Pow(a, n) => a.eval(z).powu(*n),
            Expr::Unary(p, a) => p.apply(a.eval(z)),
        }
    }

    /// Symbolic derivative with respect to `z`, lightly simplified.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::real(0.0),
            Expr::Var => Expr::real(1.0),
            Expr::Neg(a) => simplify_neg(a.derivative()),
            Expr::Add(a, b) => simplify_add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => simplify_sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => simplify_add(
                simplify_mul(a.derivative(), (**b).clone()),
                simplify_mul((**a).clone(), b.derivative()),
            ),
            Expr::Div(a, c) => {
                let da = a.derivative();
                if da.is_zero() {
                    da
                } else {
                    Expr::div(da, *c)
                }
            }
            Expr::Pow(a, n) => match *n {
                0 => Expr::real(0.0),
                1 => a.derivative(),
                n => {
                    let outer = simplify_mul(
                        Expr::real(f64::from(n)),
                        pow_simplified((**a).clone(), n - 1),
                    );
                    simplify_mul(outer, a.derivative())
                }
            },
            Expr::Unary(p, a) => simplify_mul(p.outer_derivative(a), a.derivative()),
        }
    }
}

fn pow_simplified(a: Expr, n: u32) -> Expr {
    match n {
        0 => Expr::real(1.0),
        1 => a,
        n => Expr::pow(a, n),
    }
}

fn simplify_neg(a: Expr) -> Expr {
    Expr::neg(a)
}

fn simplify_add(a: Expr, b: Expr) -> Expr {
    if a.is_zero() {
        b
    } else if b.is_zero() {
        a
    } else if let Expr::Neg(inner) = a {
        // -u + v  ->  v - u
        simplify_sub(b, *inner)
    } else {
        Expr::add(a, b)
    }
}

fn simplify_sub(a: Expr, b: Expr) -> Expr {
    if b.is_zero() {
        a
    } else if a.is_zero() {
        Expr::neg(b)
    } else {
        Expr::sub(a, b)
    }
}

fn simplify_mul(a: Expr, b: Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        Expr::real(0.0)
    } else if a.is_one() {
        b
    } else if b.is_one() {
        a
    } else if a.as_const() == Some(Complex64::new(-1.0, 0.0)) {
        Expr::neg(b)
    } else if b.as_const() == Some(Complex64::new(-1.0, 0.0)) {
        Expr::neg(a)
    } else {
        match (a, b) {
            (Expr::Neg(x), Expr::Neg(y)) => simplify_mul(*x, *y),
            (Expr::Neg(x), y) | (y, Expr::Neg(x)) => Expr::neg(simplify_mul(*x, y)),
            (x, y) => Expr::mul(x, y),
        }
    }
}

fn fmt_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    // `{:?}` is the shortest representation that round-trips.
    write!(f, "{x:?}")
}

fn fmt_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    f.write_str("(")?;
    match (c.re != 0.0, c.im != 0.0) {
        (_, false) => fmt_real(f, c.re)?,
        (false, true) => {
            fmt_real(f, c.im)?;
            f.write_str("i")?;
        }
        (true, true) => {
            fmt_real(f, c.re)?;
            f.write_str("+")?;
            fmt_real(f, c.im)?;
            f.write_str("i")?;
        }
    }
    f.write_str(")")
}

/// Canonical, fully parenthesized form accepted by the parser.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => fmt_const(f, *c),
            Expr::Var => f.write_str("z"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, c) => {
                write!(f, "({a}/")?;
                fmt_const(f, *c)?;
                f.write_str(")")
            }
            Expr::Pow(a, n) => write!(f, "({a}^{n})"),
            Expr::Unary(p, a) => write!(f, "{}({a})", p.name()),
        }
    }
}
