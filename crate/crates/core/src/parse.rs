//! Text syntax for scalars, `q`-rational functions, forms and operators.
//!
//! One small grammar serves every textual input:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' ['-'] integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```
//!
//! Juxtaposition is multiplication, so `3/4 i` reads as `(3/4)·i`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{CoreError, Result};
use crate::field::{ExpContext, ExpRat, Field, GaussQ};
use crate::poly::SparsePoly;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Op(char),
}

#[derive(Clone, Debug)]
enum Expr {
    Num(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            out.push(Token::Num(digits.parse().expect("ascii digits")));
        } else if ch.is_alphabetic() || ch == '∂' || ch == '_' {
            let start = k;
            k += 1;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Token::Ident(chars[start..k].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Token::Op(ch));
            k += 1;
        } else if ch == '−' {
            out.push(Token::Op('-'));
            k += 1;
        } else if ch == '·' {
            out.push(Token::Op('*'));
            k += 1;
        } else {
            return Err(CoreError::Parse(format!("unexpected character '{ch}' in '{s}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Bin('+', Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Bin('-', Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Bin('*', Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Bin('/', Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Token::Num(_) | Token::Ident(_) | Token::Op('('))) {
                lhs = Expr::Bin('*', Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = match self.toks.get(self.pos) {
            Some(Token::Num(n)) => n
                .to_i64()
                .ok_or_else(|| CoreError::Parse("exponent too large".into()))?,
            other => return Err(CoreError::Parse(format!("expected integer exponent, found {other:?}"))),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(CoreError::Parse("unbalanced parenthesis in exponent".into()));
        }
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Token::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(CoreError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(CoreError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(CoreError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(CoreError::Parse(format!("trailing input in '{s}' at token {:?}", p.toks[p.pos])));
    }
    Ok(e)
}

/// Interpretation of the parsed syntax tree in some algebra.
trait Env {
    type V: Clone;
    fn num(&self, n: &BigInt) -> Result<Self::V>;
    fn var(&self, name: &str) -> Result<Self::V>;
    fn neg(&self, a: Self::V) -> Result<Self::V>;
    fn bin(&self, op: char, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn pow(&self, a: Self::V, e: i64) -> Result<Self::V>;

    fn eval(&self, e: &Expr) -> Result<Self::V> {
        match e {
            Expr::Num(n) => self.num(n),
            Expr::Var(v) => self.var(v),
            Expr::Neg(a) => {
                let a = self.eval(a)?;
                self.neg(a)
            }
            Expr::Bin(op, a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.bin(*op, a, b)
            }
            Expr::Pow(a, k) => {
                let a = self.eval(a)?;
                self.pow(a, *k)
            }
        }
    }
}

fn int_gauss(n: &BigInt) -> GaussQ {
    GaussQ::new(BigRational::from_integer(n.clone()), BigRational::zero())
}

struct GaussEnv;

impl Env for GaussEnv {
    type V = GaussQ;
    fn num(&self, n: &BigInt) -> Result<GaussQ> {
        Ok(int_gauss(n))
    }
    fn var(&self, name: &str) -> Result<GaussQ> {
        match name {
            "i" | "I" => Ok(GaussQ::i()),
            _ => Err(CoreError::Parse(format!("unknown symbol '{name}' in a scalar"))),
        }
    }
    fn neg(&self, a: GaussQ) -> Result<GaussQ> {
        Ok(-a)
    }
    fn bin(&self, op: char, a: GaussQ, b: GaussQ) -> Result<GaussQ> {
        Ok(match op {
            '+' => &a + &b,
            '-' => &a - &b,
            '*' => &a * &b,
            _ => a.checked_div(&b)?,
        })
    }
    fn pow(&self, a: GaussQ, e: i64) -> Result<GaussQ> {
        a.powi(e)
    }
}

struct ExpEnv<'a> {
    ctx: &'a Arc<ExpContext>,
}

impl Env for ExpEnv<'_> {
    type V = ExpRat;
    fn num(&self, n: &BigInt) -> Result<ExpRat> {
        Ok(ExpRat::constant(self.ctx, int_gauss(n)))
    }
    fn var(&self, name: &str) -> Result<ExpRat> {
        match name {
            "q" => Ok(ExpRat::q(self.ctx)),
            _ => GaussEnv.var(name).map(|g| ExpRat::constant(self.ctx, g)),
        }
    }
    fn neg(&self, a: ExpRat) -> Result<ExpRat> {
        Ok(a.neg_ref())
    }
    fn bin(&self, op: char, a: ExpRat, b: ExpRat) -> Result<ExpRat> {
        match op {
            '+' => a.checked_add(&b),
            '-' => a.checked_sub(&b),
            '*' => a.checked_mul(&b),
            _ => a.checked_div(&b),
        }
    }
    fn pow(&self, a: ExpRat, e: i64) -> Result<ExpRat> {
        a.powi(e)
    }
}

/// Polynomials in named variables over a scalar algebra `E`.
struct PolyEnv<'a, E: Env> {
    names: &'a [(String, usize)],
    nvars: usize,
    scalars: E,
    one: E::V,
}

impl<E> Env for PolyEnv<'_, E>
where
    E: Env,
    E::V: Field,
{
    type V = SparsePoly<E::V>;
    fn num(&self, n: &BigInt) -> Result<Self::V> {
        Ok(SparsePoly::constant(self.nvars, self.scalars.num(n)?))
    }
    fn var(&self, name: &str) -> Result<Self::V> {
        if let Some((_, k)) = self.names.iter().find(|(s, _)| s == name) {
            return Ok(SparsePoly::var(self.nvars, *k, self.one.clone()));
        }
        Ok(SparsePoly::constant(self.nvars, self.scalars.var(name)?))
    }
    fn neg(&self, a: Self::V) -> Result<Self::V> {
        Ok(a.neg())
    }
    fn bin(&self, op: char, a: Self::V, b: Self::V) -> Result<Self::V> {
        match op {
            '+' => Ok(a.add(&b)),
            '-' => Ok(a.sub(&b)),
            '*' => Ok(a.mul(&b)),
            _ => {
                if b.is_zero() {
                    return Err(CoreError::DivisionByZero);
                }
                let c = b
                    .as_constant()
                    .ok_or_else(|| CoreError::Parse("division by a non-constant polynomial".into()))?;
                Ok(a.scale(&c.inverse()?))
            }
        }
    }
    fn pow(&self, a: Self::V, e: i64) -> Result<Self::V> {
        if e >= 0 {
            return Ok(a.pow(e as u32, &self.one));
        }
        let c = a
            .as_constant()
            .ok_or_else(|| CoreError::Parse("negative power of a non-constant polynomial".into()))?;
        let inv = c.inverse()?;
        Ok(SparsePoly::constant(self.nvars, inv).pow(e.unsigned_abs() as u32, &self.one))
    }
}

/// Parses a Gaussian rational such as `1/2+3/4 i` or `-i`.
pub fn parse_gauss(s: &str) -> Result<GaussQ> {
    GaussEnv.eval(&parse_expr(s)?)
}

/// Parses an element of `K`, e.g. `i*(1+q)/(1-q)`.
pub fn parse_exprat(s: &str, ctx: &Arc<ExpContext>) -> Result<ExpRat> {
    ExpEnv { ctx }.eval(&parse_expr(s)?)
}

/// Parses a polynomial with scalar coefficients. `names` maps each accepted
/// spelling of a variable to its index; several spellings may share an index.
pub fn parse_poly_gauss(s: &str, names: &[(String, usize)], nvars: usize) -> Result<SparsePoly<GaussQ>> {
    PolyEnv { names, nvars, scalars: GaussEnv, one: GaussQ::one() }.eval(&parse_expr(s)?)
}

/// Parses a polynomial whose coefficients may involve `q`.
pub fn parse_poly_exprat(
    s: &str,
    names: &[(String, usize)],
    nvars: usize,
    ctx: &Arc<ExpContext>,
) -> Result<SparsePoly<ExpRat>> {
    PolyEnv { names, nvars, scalars: ExpEnv { ctx }, one: ExpRat::one(ctx) }.eval(&parse_expr(s)?)
}
