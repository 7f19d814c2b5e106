//! Recursive-descent parser for the component-expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' number)?
//! base   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! The exponent literal may carry a leading minus sign (`x^-1`).

use super::ast::{BinaryOp, Expression, UnaryOp};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared variable \"{name}\" at offset {offset}")]
    UndeclaredVariable { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UndeclaredVariable { offset, .. } => {
                *offset
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier \"{s}\""),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number \"{text}\"")))?;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    coords: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        syntax(
            self.offset(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expression, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.factor()?;
            return Ok(Expression::unary(UnaryOp::Neg, inner));
        }
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expression::pow(base, if negative { -v } else { v }))
            }
            _ => Err(self.unexpected("numeric exponent")),
        }
    }

    fn base(&mut self) -> Result<Expression, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expression::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let (_, at) = self.bump();
                if *self.peek() == Tok::LParen {
                    let op = UnaryOp::from_name(&name)
                        .ok_or_else(|| syntax(at, format!("unknown function \"{name}\"")))?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expression::unary(op, arg));
                }
                match self.coords.iter().position(|c| *c == name) {
                    Some(index) => Ok(Expression::Var { name, index }),
                    None => Err(ParseError::UndeclaredVariable { name, offset: at }),
                }
            }
            _ => Err(self.unexpected("number, identifier or '('")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected("')'"))
        }
    }
}

/// Parses `source` against the chart coordinates `coords`.
pub fn parse<S: AsRef<str>>(source: &str, coords: &[S]) -> Result<Expression, ParseError> {
    let coords: Vec<String> = coords.iter().map(|c| c.as_ref().to_string()).collect();
    let toks = tokenize(source)?;
    let mut p = Parser {
        toks,
        pos: 0,
        coords: &coords,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vec<&'static str> {
        vec!["x", "y"]
    }

    #[test]
    fn sin_times_power() {
        let e = parse("sin(x)*y^2", &xy()).unwrap();
        let want = Expression::binary(
            BinaryOp::Mul,
            Expression::unary(UnaryOp::Sin, Expression::var("x", 0)),
            Expression::pow(Expression::var("y", 1), 2.0),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn incomplete_input_reports_end_offset() {
        let err = parse("x +", &["x"]).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 3, .. }), "{err}");
    }

    #[test]
    fn undeclared_variable_is_named() {
        let err = parse("z + 1", &xy()).unwrap_err();
        assert_eq!(
            err,
            ParseError::UndeclaredVariable {
                name: "z".into(),
                offset: 0
            }
        );
    }

    #[test]
    fn precedence_pow_over_neg_over_mul() {
        let e = parse("-x^2*3 - y", &xy()).unwrap();
        let want = Expression::binary(
            BinaryOp::Sub,
            Expression::binary(
                BinaryOp::Mul,
                Expression::unary(UnaryOp::Neg, Expression::pow(Expression::var("x", 0), 2.0)),
                Expression::num(3.0),
            ),
            Expression::var("y", 1),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn left_associative_subtraction() {
        let e = parse("x - y - 1", &xy()).unwrap();
        assert_eq!(e.to_string(), "x - y - 1");
        let e = parse("x - (y - 1)", &xy()).unwrap();
        assert_eq!(e.to_string(), "x - (y - 1)");
    }

    #[test]
    fn rejects_symbolic_exponent() {
        let err = parse("x^y", &xy()).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 2, .. }));
    }

    #[test]
    fn rejects_empty_and_unknown_function() {
        assert!(matches!(
            parse("", &xy()),
            Err(ParseError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse("  foo(x)", &xy()),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse("x $ y", &xy()),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse("(x", &xy()),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
    }

    #[test]
    fn numbers_with_exponents() {
        let e = parse("1.5e-3 + 2E2 + .25", &xy()).unwrap();
        assert_eq!(e.to_string(), "0.0015 + 200 + 0.25");
    }

    #[test]
    fn negative_exponent_round_trips() {
        let e = parse("(x + 1)^-0.5", &xy()).unwrap();
        assert_eq!(e.to_string(), "(x + 1)^-0.5");
        assert_eq!(parse(&e.to_string(), &xy()).unwrap(), e);
    }
}
