use alloc::boxed::Box;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Pi,
    E,
    X,
    Param(Param),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn uses_param(&self, p: Param) -> bool {
        match self {
            Expr::Param(q) => *q == p,
            Expr::Neg(e) | Expr::Call(_, e) => e.uses_param(p),
            Expr::Bin(_, l, r) => l.uses_param(p) || r.uses_param(p),
            _ => false,
        }
    }

    pub fn uses_x(&self) -> bool {
        match self {
            Expr::X => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.uses_x(),
            Expr::Bin(_, l, r) => l.uses_x() || r.uses_x(),
            _ => false,
        }
    }

    /// Replace every occurrence of parameter `p` by `sub`.
    pub fn substitute_param(&self, p: Param, sub: &Expr) -> Expr {
        match self {
            Expr::Param(q) if *q == p => sub.clone(),
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute_param(p, sub))),
            Expr::Call(f, e) => Expr::Call(*f, Box::new(e.substitute_param(p, sub))),
            Expr::Bin(op, l, r) => Expr::Bin(
                *op,
                Box::new(l.substitute_param(p, sub)),
                Box::new(r.substitute_param(p, sub)),
            ),
            other => other.clone(),
        }
    }

    /// Replace the variable x by `sub` (used by inner transforms like F(a*x)).
    pub fn substitute_x(&self, sub: &Expr) -> Expr {
        match self {
            Expr::X => sub.clone(),
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute_x(sub))),
            Expr::Call(f, e) => Expr::Call(*f, Box::new(e.substitute_x(sub))),
            Expr::Bin(op, l, r) => Expr::Bin(
                *op,
                Box::new(l.substitute_x(sub)),
                Box::new(r.substitute_x(sub)),
            ),
            other => other.clone(),
        }
    }
}

// precedence levels used by both the parser and the printer:
// add/sub = 1, mul/div = 2, unary minus = 3, pow = 4, atoms = 5
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        // a negative literal prints with a leading '-', so it parenthesizes
        // exactly like a unary minus
        Expr::Neg(_) => 3,
        Expr::Const(c) if c.is_sign_negative() => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

struct Paren<'a>(&'a Expr, u8);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if prec(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Pi => write!(f, "pi"),
            Expr::E => write!(f, "e"),
            Expr::X => write!(f, "x"),
            Expr::Param(Param::A) => write!(f, "a"),
            Expr::Param(Param::B) => write!(f, "b"),
            Expr::Neg(e) => write!(f, "-{}", Paren(e, 3)),
            Expr::Call(func, e) => write!(f, "{}({})", func.name(), e),
            Expr::Bin(op, l, r) => match op {
                BinOp::Add => write!(f, "{}+{}", Paren(l, 1), Paren(r, 2)),
                BinOp::Sub => write!(f, "{}-{}", Paren(l, 1), Paren(r, 2)),
                BinOp::Mul => write!(f, "{}*{}", Paren(l, 2), Paren(r, 3)),
                BinOp::Div => write!(f, "{}/{}", Paren(l, 2), Paren(r, 3)),
                // right-associative; a negated exponent keeps its parens
                BinOp::Pow => write!(f, "{}^{}", Paren(l, 5), Paren(r, 4)),
            },
        }
    }
}
