use std::fmt;

/// Built-in scalar functions plus negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl UnaryOp {
    /// Function-call name, `None` for negation.
    pub fn name(self) -> Option<&'static str> {
        match self {
            UnaryOp::Neg => None,
            UnaryOp::Sin => Some("sin"),
            UnaryOp::Cos => Some("cos"),
            UnaryOp::Tan => Some("tan"),
            UnaryOp::Exp => Some("exp"),
            UnaryOp::Log => Some("log"),
            UnaryOp::Sqrt => Some("sqrt"),
            UnaryOp::Sinh => Some("sinh"),
            UnaryOp::Cosh => Some("cosh"),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "tan" => UnaryOp::Tan,
            "exp" => UnaryOp::Exp,
            "log" => UnaryOp::Log,
            "sqrt" => UnaryOp::Sqrt,
            "sinh" => UnaryOp::Sinh,
            "cosh" => UnaryOp::Cosh,
            _ => return None,
        })
    }

    pub const FUNCTIONS: [UnaryOp; 8] = [
        UnaryOp::Sin,
        UnaryOp::Cos,
        UnaryOp::Tan,
        UnaryOp::Exp,
        UnaryOp::Log,
        UnaryOp::Sqrt,
        UnaryOp::Sinh,
        UnaryOp::Cosh,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
        }
    }
}

/// Expression tree over the coordinates of a chart.
///
/// Variables carry both their name and their position in the chart's
/// coordinate list, so evaluation never has to look names up.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Num(f64),
    Var { name: String, index: usize },
    Unary(UnaryOp, Box<Expression>),
    Binary(BinaryOp, Box<Expression>, Box<Expression>),
    /// Power with a literal exponent.
    Pow(Box<Expression>, f64),
}

const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Expression {
    pub fn num(v: f64) -> Self {
        Expression::Num(v)
    }

    pub fn var(name: impl Into<String>, index: usize) -> Self {
        Expression::Var {
            name: name.into(),
            index,
        }
    }

    pub fn unary(op: UnaryOp, e: Expression) -> Self {
        Expression::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, a: Expression, b: Expression) -> Self {
        Expression::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn pow(base: Expression, exponent: f64) -> Self {
        Expression::Pow(Box::new(base), exponent)
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_var_index(&self) -> Option<usize> {
        match self {
            Expression::Num(_) => None,
            Expression::Var { index, .. } => Some(*index),
            Expression::Unary(_, e) | Expression::Pow(e, _) => e.max_var_index(),
            Expression::Binary(_, a, b) => match (a.max_var_index(), b.max_var_index()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expression::Num(_) | Expression::Var { .. } => 1,
            Expression::Unary(_, e) | Expression::Pow(e, _) => 1 + e.node_count(),
            Expression::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expression::Num(v) if *v < 0.0 || v.is_sign_negative() => PREC_NEG,
            Expression::Num(_) | Expression::Var { .. } => PREC_ATOM,
            Expression::Unary(UnaryOp::Neg, _) => PREC_NEG,
            Expression::Unary(_, _) => PREC_ATOM,
            Expression::Binary(op, _, _) => op.precedence(),
            Expression::Pow(_, _) => PREC_POW,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

fn fmt_number(v: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // `{}` on f64 is the shortest representation that reads back exactly.
    write!(f, "{v}")
}

/// Serializes back to the infix grammar. Parenthesization is chosen so that
/// re-parsing reproduces the same tree.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Num(v) => fmt_number(*v, f),
            Expression::Var { name, .. } => f.write_str(name),
            Expression::Unary(UnaryOp::Neg, e) => {
                f.write_str("-")?;
                e.fmt_child(f, PREC_NEG)
            }
            Expression::Unary(op, e) => write!(f, "{}({e})", op.name().unwrap_or_default()),
            Expression::Binary(op, a, b) => {
                let p = op.precedence();
                a.fmt_child(f, p)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_child(f, p + 1)
            }
            Expression::Pow(base, exponent) => {
                base.fmt_child(f, PREC_ATOM)?;
                f.write_str("^")?;
                fmt_number(*exponent, f)
            }
        }
    }
}
