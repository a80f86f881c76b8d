mod ast;
mod eval;
mod parse;

pub use ast::{BinOp, Expr, Func, Param};
pub use eval::{eval_jet, eval_value, Bindings};
pub use parse::{parse, ParseError};
