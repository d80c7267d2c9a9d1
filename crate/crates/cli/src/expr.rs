//! A small expression language: numbers, one variable, bound parameters,
//! `+ − * / ^`, unary minus and a fixed set of one-argument functions.
//!
//! Precedence from loosest to tightest: `+ −`, `* /`, unary `−`, `^`
//! (right-associative). So `-x^2` is `−(x²)` and `2^3^2` is `2^9`.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sinc,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 7] = [Func::Sin, Func::Cos, Func::Exp, Func::Sinc, Func::Log, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sinc => "sinc",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    /// `sinc(x) = sin(x)/x`, continued by 1 at 0; `log` is the real logarithm.
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
            Func::Sinc => {
                if x == 0.0 {
                    1.0
                } else {
                    x.sin() / x
                }
            }
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
        }
    }
}

/// Named constants accepted wherever a number is.
pub const CONSTANTS: [(&str, f64); 1] = [("pi", std::f64::consts::PI)];

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Non-negative decimal literal, kept as written.
    Num(String),
    /// The variable, a parameter or a named constant.
    Ident(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

/// Names an expression may mention besides functions and constants.
#[derive(Clone, Debug, PartialEq)]
pub struct Scope {
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
}

impl Default for Scope {
    fn default() -> Self {
        Scope { variables: vec!["x".into(), "t".into()], parameters: Vec::new() }
    }
}

impl Scope {
    pub fn new(variable: &str, parameters: &[String]) -> Self {
        Scope { variables: vec![variable.to_string()], parameters: parameters.to_vec() }
    }

    fn knows(&self, name: &str) -> bool {
        self.variables.iter().chain(&self.parameters).any(|v| v == name) || CONSTANTS.iter().any(|(c, _)| *c == name)
    }
}

/// Parses with the default scope (variables `x` and `t`, constant `pi`).
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    parse_in(text, &Scope::default())
}

pub fn parse_in(text: &str, scope: &Scope) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, scope };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let e = p.sum()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&format!("unexpected `{}`", p.peek_char())));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    scope: &'a Scope,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..]).ok().and_then(|s| s.chars().next()).unwrap_or('?')
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = if self.eat(b'+') {
                BinOp::Add
            } else if self.eat(b'-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.product()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(b'*') {
                BinOp::Mul
            } else if self.eat(b'/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            // The exponent may carry its own sign: x^-2.
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("expected an expression")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(b')') {
                    self.skip_ws();
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => Err(self.error(&format!("unexpected `{}`", self.peek_char()))),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(ParseError::Syntax { offset: start, message: "malformed number".into() });
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(Expr::Num(text.to_string()))
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
        let after_name = self.pos;
        if self.eat(b'(') {
            let Some(f) = Func::from_name(&name) else {
                return Err(ParseError::UnknownIdentifier { offset: start, name });
            };
            let arg = self.sum()?;
            if self.eat(b',') {
                return Err(ParseError::Syntax {
                    offset: self.pos - 1,
                    message: format!("{} takes exactly one argument", f.name()),
                });
            }
            if !self.eat(b')') {
                self.skip_ws();
                return Err(self.error("expected `)`"));
            }
            return Ok(Expr::Call(f, Box::new(arg)));
        }
        self.pos = after_name;
        if Func::from_name(&name).is_some() {
            return Err(ParseError::Syntax {
                offset: self.pos,
                message: format!("{name} needs an argument in parentheses"),
            });
        }
        if !self.scope.knows(&name) {
            return Err(ParseError::UnknownIdentifier { offset: start, name });
        }
        Ok(Expr::Ident(name))
    }
}

/// Binding strength used by the printer; higher binds tighter.
fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        Expr::Num(_) | Expr::Ident(_) | Expr::Call(..) => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(s) | Expr::Ident(s) => f.write_str(s),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_at(f, a, 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Bin(op, a, b) => {
                let (l, r) = match op {
                    BinOp::Add | BinOp::Sub => (1, 2),
                    BinOp::Mul | BinOp::Div => (2, 3),
                    BinOp::Pow => (5, 3),
                };
                write_at(f, a, l)?;
                match op {
                    BinOp::Add | BinOp::Sub => write!(f, " {} ", op.symbol())?,
                    _ => f.write_str(op.symbol())?,
                }
                write_at(f, b, r)
            }
        }
    }
}

/// Exact value of a decimal literal such as `2.5` or `1e-3`.
pub fn literal_value(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() { return None } else { digits.parse().ok()? };
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Some(if scale >= 0 { BigRational::from_integer(n * p) } else { BigRational::new(n, p) })
}

impl Expr {
    pub fn num(text: &str) -> Expr {
        Expr::Num(text.to_string())
    }

    pub fn ident(name: &str) -> Expr {
        Expr::Ident(name.to_string())
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    /// Replaces every occurrence of the identifier `name`.
    pub fn substitute(&self, name: &str, with: &Expr) -> Expr {
        match self {
            Expr::Ident(n) if n == name => with.clone(),
            Expr::Num(_) | Expr::Ident(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(name, with))),
            Expr::Bin(op, a, b) => Expr::bin(*op, a.substitute(name, with), b.substitute(name, with)),
            Expr::Call(f, a) => Expr::call(*f, a.substitute(name, with)),
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Expr::Ident(n) => n == name,
            Expr::Num(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.mentions(name),
            Expr::Bin(_, a, b) => a.mentions(name) || b.mentions(name),
        }
    }

    /// Plain floating-point evaluation with `var = x`. Identifiers other
    /// than `var` and the named constants evaluate to NaN.
    pub fn eval(&self, var: &str, x: f64) -> f64 {
        match self {
            Expr::Num(s) => s.parse().unwrap_or(f64::NAN),
            Expr::Ident(n) if n == var => x,
            Expr::Ident(n) => CONSTANTS.iter().find(|(c, _)| c == n).map_or(f64::NAN, |(_, v)| *v),
            Expr::Neg(a) => -a.eval(var, x),
            Expr::Call(f, a) => f.apply(a.eval(var, x)),
            Expr::Bin(op, a, b) => {
                let (u, v) = (a.eval(var, x), b.eval(var, x));
                match op {
                    BinOp::Add => u + v,
                    BinOp::Sub => u - v,
                    BinOp::Mul => u * v,
                    BinOp::Div => u / v,
                    BinOp::Pow => {
                        if v.fract() == 0.0 && v.abs() < i32::MAX as f64 {
                            u.powi(v as i32)
                        } else {
                            u.powf(v)
                        }
                    }
                }
            }
        }
    }

    /// [`Expr::eval`] with removable singularities filled in by the mean of
    /// the neighbouring values.
    pub fn eval_filled(&self, var: &str, x: f64) -> f64 {
        let v = self.eval(var, x);
        if v.is_finite() {
            return v;
        }
        let h = 1e-7 * x.abs().max(1.0);
        let (l, r) = (self.eval(var, x - h), self.eval(var, x + h));
        if l.is_finite() && r.is_finite() {
            0.5 * (l + r)
        } else {
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::ident("x")
    }

    #[test]
    fn spec_shapes() {
        assert_eq!(parse_expression("sin(x)/x").unwrap(), Expr::bin(BinOp::Div, Expr::call(Func::Sin, x()), x()));
        let e = parse_expression("x^2*cos(x)*exp(-x^2)").unwrap();
        let want = Expr::bin(
            BinOp::Mul,
            Expr::bin(BinOp::Mul, Expr::bin(BinOp::Pow, x(), Expr::num("2")), Expr::call(Func::Cos, x())),
            Expr::call(Func::Exp, Expr::Neg(Box::new(Expr::bin(BinOp::Pow, x(), Expr::num("2"))))),
        );
        assert_eq!(e, want);
        assert_eq!(parse_expression("sin(").unwrap_err().offset(), 4);
    }

    #[test]
    fn precedence_and_associativity() {
        let p = |s: &str| parse_expression(s).unwrap().to_string();
        assert_eq!(p("-x^2"), "-x^2");
        assert_eq!(parse_expression("-x^2").unwrap(), Expr::Neg(Box::new(parse_expression("x^2").unwrap())));
        assert_eq!(p("2^3^2"), "2^3^2");
        assert_eq!(p("(2^3)^2"), "(2^3)^2");
        assert_eq!(p("x - (x - x)"), "x - (x - x)");
        assert_eq!(p("x/(x*x)"), "x/(x*x)");
        assert_eq!(p("(-x)^2"), "(-x)^2");
        assert_eq!(p("x^-2"), "x^-2");
        assert_eq!(p("  1 +2*x "), "1 + 2*x");
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse_expression("foo(x)").unwrap_err(),
            ParseError::UnknownIdentifier { offset: 0, name: "foo".into() }
        );
        assert_eq!(parse_expression("x + y").unwrap_err().offset(), 4);
        assert_eq!(parse_expression("(x").unwrap_err().offset(), 2);
        assert_eq!(parse_expression("x $").unwrap_err().offset(), 2);
        assert!(parse_expression("sin(x, x)").is_err());
        assert!(parse_expression("").is_err());
    }

    #[test]
    fn literals_are_exact() {
        assert_eq!(literal_value("2.5").unwrap(), BigRational::new(5.into(), 2.into()));
        assert_eq!(literal_value("1e-3").unwrap(), BigRational::new(1.into(), 1000.into()));
        assert_eq!(literal_value("12").unwrap(), BigRational::from_integer(12.into()));
    }

    #[test]
    fn evaluation() {
        let e = parse_expression("sin(x)/x").unwrap();
        assert!(e.eval("x", 0.0).is_nan());
        assert!((e.eval_filled("x", 0.0) - 1.0).abs() < 1e-12);
        assert!((parse_expression("2^3^2").unwrap().eval("x", 0.0) - 512.0).abs() < 1e-12);
        assert!((parse_expression("pi").unwrap().eval("x", 0.0) - std::f64::consts::PI).abs() < 1e-15);
    }
}
