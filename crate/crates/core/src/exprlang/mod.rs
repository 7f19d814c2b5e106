//! Symbolic component expressions: parsing, serialization and evaluation
//! with exact first and second derivatives.

mod ast;
mod eval;
mod jet;
mod parser;

pub use ast::{BinaryOp, Expression, UnaryOp};
pub use eval::{eval, eval_jet2, EvalError};
pub use jet::Jet2;
pub use parser::{parse, ParseError};
