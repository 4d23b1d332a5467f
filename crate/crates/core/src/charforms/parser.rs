//! Precedence-climbing parser for polynomial expressions in `a1..am`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::polyring::{symmetric_of, TruncatedPoly};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Var(usize),
    Euler,
    Pont,
    Elem,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    /// 1-based column of the first character.
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>()
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '0'..='9' => {
                let num = digits(&mut i);
                let num: BigInt = num.parse().expect("digits");
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let den = digits(&mut i);
                    if den.is_empty() {
                        return Err(syntax(i + 1, "expected denominator after `/`"));
                    }
                    let den: BigInt = den.parse().expect("digits");
                    if den == BigInt::from(0) {
                        return Err(syntax(pos, "zero denominator"));
                    }
                    out.push(Token { tok: Tok::Num(Rat::new(num, den)), pos });
                } else {
                    out.push(Token { tok: Tok::Num(Rat::from_integer(num)), pos });
                }
                continue;
            }
            'a' => {
                i += 1;
                let idx = digits(&mut i);
                let idx: usize = idx
                    .parse()
                    .map_err(|_| syntax(pos, "expected variable index after `a`"))?;
                out.push(Token { tok: Tok::Var(idx), pos });
                continue;
            }
            'E' => Tok::Euler,
            'p' => Tok::Pont,
            'e' => Tok::Elem,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, pos });
        i += 1;
    }
    out.push(Token { tok: Tok::End, pos: chars.len() + 1 });
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Num(Rat),
    Var(usize),
    Euler,
    Pont(usize),
    Elem(usize, Vec<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    m: usize,
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_POW: u8 = 3;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let t = self.bump();
        if t.tok == tok {
            Ok(())
        } else {
            Err(syntax(t.pos, format!("expected {what}")))
        }
    }

    fn integer(&mut self, what: &str) -> Result<u64> {
        let t = self.bump();
        match &t.tok {
            Tok::Num(r) if r.is_integer() => {
                u64::try_from(r.to_integer()).map_err(|_| syntax(t.pos, format!("{what} out of range")))
            }
            _ => Err(syntax(t.pos, format!("expected {what}"))),
        }
    }

    fn binary_prec(tok: &Tok) -> Option<u8> {
        match tok {
            Tok::Plus | Tok::Minus => Some(PREC_ADD),
            Tok::Star => Some(PREC_MUL),
            Tok::Caret => Some(PREC_POW),
            _ => None,
        }
    }

    fn expr(&mut self, min_prec: u8) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(prec) = Self::binary_prec(&self.peek().tok) {
            if prec < min_prec {
                break;
            }
            let op = self.bump();
            if op.tok == Tok::Caret {
                // right-associative, exponent must be a literal
                let e = self.integer("a nonnegative integer exponent")?;
                let e = u32::try_from(e).map_err(|_| syntax(op.pos, "exponent out of range"))?;
                lhs = Expr::Pow(Box::new(lhs), e);
                continue;
            }
            let rhs = self.expr(prec + 1)?;
            lhs = match op.tok {
                Tok::Plus => Expr::Add(Box::new(lhs), Box::new(rhs)),
                Tok::Minus => Expr::Sub(Box::new(lhs), Box::new(rhs)),
                _ => Expr::Mul(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            let inner = self.expr(PREC_POW)?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Num(r) => Ok(Expr::Num(r)),
            Tok::Var(i) => {
                if i == 0 || i > self.m {
                    Err(syntax(t.pos, format!("unknown variable a{i}; variables are a1..a{}", self.m)))
                } else {
                    Ok(Expr::Var(i - 1))
                }
            }
            Tok::Euler => Ok(Expr::Euler),
            Tok::Pont => {
                self.expect(Tok::LBracket, "`[` after `p`")?;
                let k = self.integer("a class index")? as usize;
                self.expect(Tok::RBracket, "`]`")?;
                if k > self.m {
                    return Err(syntax(t.pos, format!("p[{k}] exceeds m = {}", self.m)));
                }
                Ok(Expr::Pont(k))
            }
            Tok::Elem => {
                self.expect(Tok::LBracket, "`[` after `e`")?;
                let k = self.integer("a degree")? as usize;
                self.expect(Tok::RBracket, "`]`")?;
                self.expect(Tok::LParen, "`(` after `e[k]`")?;
                let mut args = vec![self.expr(PREC_ADD)?];
                while self.peek().tok == Tok::Comma {
                    self.bump();
                    args.push(self.expr(PREC_ADD)?);
                }
                self.expect(Tok::RParen, "`)` closing the argument list")?;
                if k > args.len() {
                    return Err(syntax(t.pos, format!("e[{k}] needs at least {k} arguments")));
                }
                Ok(Expr::Elem(k, args))
            }
            Tok::LParen => {
                let inner = self.expr(PREC_ADD)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::End => Err(syntax(t.pos, "unexpected end of expression")),
            _ => Err(syntax(t.pos, "expected a number, variable, macro, or `(`")),
        }
    }
}

impl Expr {
    /// Upper bound on the total degree of the expanded polynomial.
    fn degree_bound(&self, m: usize) -> u32 {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(_) => 1,
            Expr::Euler => m as u32,
            Expr::Pont(k) => 2 * *k as u32,
            Expr::Elem(k, args) => {
                *k as u32 * args.iter().map(|a| a.degree_bound(m)).max().unwrap_or(0)
            }
            Expr::Neg(e) => e.degree_bound(m),
            Expr::Add(a, b) | Expr::Sub(a, b) => a.degree_bound(m).max(b.degree_bound(m)),
            Expr::Mul(a, b) => a.degree_bound(m) + b.degree_bound(m),
            Expr::Pow(a, e) => a.degree_bound(m).saturating_mul(*e),
        }
    }

    fn eval(&self, m: usize, cutoff: u32) -> TruncatedPoly {
        match self {
            Expr::Num(r) => TruncatedPoly::constant(r.clone(), m, cutoff),
            Expr::Var(i) => TruncatedPoly::var(*i, m, cutoff),
            Expr::Euler => (0..m).fold(TruncatedPoly::one(m, cutoff), |acc, j| {
                acc.mul(&TruncatedPoly::var(j, m, cutoff))
            }),
            Expr::Pont(k) => {
                let squares: Vec<_> = (0..m).map(|j| TruncatedPoly::var(j, m, cutoff).pow(2)).collect();
                symmetric_of(&squares, *k, m, cutoff)
            }
            Expr::Elem(k, args) => {
                let vals: Vec<_> = args.iter().map(|a| a.eval(m, cutoff)).collect();
                symmetric_of(&vals, *k, m, cutoff)
            }
            Expr::Neg(e) => e.eval(m, cutoff).neg(),
            Expr::Add(a, b) => a.eval(m, cutoff).add(&b.eval(m, cutoff)),
            Expr::Sub(a, b) => a.eval(m, cutoff).sub(&b.eval(m, cutoff)),
            Expr::Mul(a, b) => a.eval(m, cutoff).mul(&b.eval(m, cutoff)),
            Expr::Pow(a, e) => a.eval(m, cutoff).pow(*e),
        }
    }
}

/// Largest expansion degree the parser will attempt.
const MAX_DEGREE: u32 = 256;

/// Parses and fully expands an expression in `a1..am`. The cutoff of the
/// result is large enough that nothing is truncated.
pub fn parse_polynomial(src: &str, m: usize) -> Result<TruncatedPoly> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, at: 0, m };
    let ast = parser.expr(PREC_ADD)?;
    let end = parser.peek().clone();
    if end.tok != Tok::End {
        return Err(syntax(end.pos, "unexpected trailing input"));
    }
    let bound = ast.degree_bound(m);
    if bound > MAX_DEGREE {
        return Err(syntax(1, format!("expression degree may reach {bound}, limit is {MAX_DEGREE}")));
    }
    Ok(ast.eval(m, bound.max(m as u32)))
}
