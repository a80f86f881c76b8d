//! Recursive-descent parser for the map DSL.
//!
//! Grammar (pow is right-associative; unary minus binds weaker than pow,
//! so -x^2 means -(x^2) and x^-2 is legal):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := number | 'x' | 'a' | 'b' | 'pi' | 'e'
//!         | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp | ln | sqrt | abs
//! ```

use super::ast::{BinOp, Expr, Func, Param};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;

/// `offset` is a 1-based byte position; end-of-input reports `len + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl core::error::Error for ParseError {}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err_here(&self, message: &str) -> ParseError {
        ParseError {
            offset: self.pos + 1,
            message: String::from(message),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(match self.factor()? {
                // fold a signed literal so "x^-2" hits the integer-pow path
                Expr::Const(c) => Expr::Const(-c),
                e => Expr::Neg(Box::new(e)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.factor()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.err_here("unexpected end of input")),
        };
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err_here("expected ')'"));
            }
            return Ok(inner);
        }
        if c.is_ascii_digit() {
            return self.number();
        }
        if c.is_ascii_alphabetic() {
            return self.ident();
        }
        Err(self.err_here("expected a number, name, or '('"))
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let frac_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(self.err_here("expected digits after '.'"));
            }
        }
        // consume an exponent only when it is complete; otherwise '2e' is
        // the number 2 followed by the constant e (a parse error, since the
        // DSL has no implicit multiplication)
        if self.pos < self.src.len() && (self.src[self.pos] | 0x20) == b'e' {
            let mut probe = self.pos + 1;
            if probe < self.src.len() && (self.src[probe] == b'+' || self.src[probe] == b'-') {
                probe += 1;
            }
            if probe < self.src.len() && self.src[probe].is_ascii_digit() {
                self.pos = probe;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<f64>() {
            Ok(v) => Ok(Expr::Const(v)),
            Err(_) => Err(ParseError {
                offset: start + 1,
                message: format!("malformed number '{text}'"),
            }),
        }
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let func = match name {
            "x" => return Ok(Expr::X),
            "a" => return Ok(Expr::Param(Param::A)),
            "b" => return Ok(Expr::Param(Param::B)),
            "pi" => return Ok(Expr::Pi),
            "e" => return Ok(Expr::E),
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => {
                return Err(ParseError {
                    offset: start + 1,
                    message: format!("unknown identifier '{name}'"),
                })
            }
        };
        if !self.eat(b'(') {
            return Err(self.err_here(&format!("expected '(' after {name}")));
        }
        let arg = self.expr()?;
        if !self.eat(b')') {
            return Err(self.err_here("expected ')'"));
        }
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn precedence_matches_convention() {
        assert_eq!(p("-x^2"), p("-(x^2)"));
        assert_eq!(p("x^a^b"), p("x^(a^b)"));
        assert_eq!(p("a-b-x"), p("(a-b)-x"));
        assert_eq!(p("a/b/x"), p("(a/b)/x"));
        assert_eq!(p("a+b*x"), p("a+(b*x)"));
        assert_eq!(p("-a*x"), p("(-a)*x"));
    }

    #[test]
    fn signed_literals_fold() {
        assert_eq!(p("x^-2"), Expr::Bin(BinOp::Pow, Box::new(Expr::X), Box::new(Expr::Const(-2.0))));
        assert_eq!(p("--3"), Expr::Const(3.0));
    }

    #[test]
    fn truncated_pow_reports_offset_six() {
        let err = parse("x^(a/").unwrap_err();
        assert_eq!(err.offset, 6);
    }

    #[test]
    fn error_offsets_are_one_based() {
        assert_eq!(parse("").unwrap_err().offset, 1);
        assert_eq!(parse("x+q").unwrap_err().offset, 3);
        assert_eq!(parse("sin x").unwrap_err().offset, 5);
        assert_eq!(parse("(a*x").unwrap_err().offset, 5);
        assert_eq!(parse("x 2").unwrap_err().offset, 3);
        assert_eq!(parse("foo(x)").unwrap_err().offset, 1);
    }

    #[test]
    fn scientific_notation_vs_euler_constant() {
        assert_eq!(p("2e3"), Expr::Const(2000.0));
        assert_eq!(p("1e-2"), Expr::Const(0.01));
        assert_eq!(p("2*e"), Expr::Bin(BinOp::Mul, Box::new(Expr::Const(2.0)), Box::new(Expr::E)));
        assert!(parse("2e").is_err());
    }

    #[test]
    fn display_round_trips_structurally() {
        for src in [
            "a*x*(1-x)",
            "x^(a/x)",
            "-x^2",
            "x^-2",
            "(-2)^x",
            "a*(1.5625*(0.25-(x-0.5)^2))",
            "exp(-sin(pi*x))^a",
            "1-sin(pi*x^a)",
            "a*(sin(2*pi*x)/2+x)",
            "a-(b-x)",
            "a/(b/x)",
            "a*-b",
            "x^a^b",
            "abs(x)^3.5/sqrt(a)+ln(e)",
        ] {
            let t = p(src);
            let shown = t.to_string();
            assert_eq!(p(&shown), t, "{src} printed as {shown}");
        }
    }
}
