//! Recursive-descent parser for polynomial and enveloping-algebra
//! expressions.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?
//! exponent:= '-'? integer ('^' exponent)?
//! atom    := rational | x[n] | y[m] | e[n] | f[n] | h[n] | c | d | '(' sum ')'
//! ```
//!
//! `x`/`y` atoms belong to [`parse_element`], generator atoms to
//! [`parse_uelement`].

use ffr_core::{Element, Generator, Monomial, Rational, UElement, Var};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index error at {pos}: {msg}")]
    Index { pos: usize, msg: String },
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "SYNTAX_ERROR",
            ParseError::Index { .. } => "INDEX_ERROR",
        }
    }

    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Index { pos, .. } => *pos,
        }
    }
}

type PResult<T> = Result<T, ParseError>;

/// Values the grammar can be evaluated into.
trait Algebra: Sized + Clone {
    fn scalar(c: Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn pow(&self, p: i64) -> Result<Self, String>;
    fn ident(p: &mut Parser<'_>, name: &str, start: usize) -> PResult<Self>;
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(got) => self.err(format!("expected '{c}', found '{got}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn digits(&mut self) -> PResult<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        Ok(&self.src[start..self.pos])
    }

    fn integer(&mut self) -> PResult<i64> {
        let neg = self.eat('-');
        let start = self.pos;
        let d = self.digits()?;
        let n: i64 = d.parse().map_err(|_| ParseError::Syntax {
            pos: start,
            msg: format!("integer {d} out of range"),
        })?;
        Ok(if neg { -n } else { n })
    }

    fn exponent(&mut self) -> PResult<i64> {
        let start = self.pos;
        let base = self.integer()?;
        if self.eat('^') {
            let e = self.exponent()?;
            let e = u32::try_from(e).map_err(|_| ParseError::Syntax {
                pos: start,
                msg: "negative exponent inside an exponent".into(),
            })?;
            return base.checked_pow(e).ok_or(ParseError::Syntax {
                pos: start,
                msg: "exponent overflow".into(),
            });
        }
        Ok(base)
    }

    fn bracket_index(&mut self) -> PResult<(i64, usize)> {
        self.expect('[')?;
        self.skip_ws();
        let at = self.pos;
        let n = self.integer()?;
        self.expect(']')?;
        Ok((n, at))
    }

    fn sum<A: Algebra>(&mut self) -> PResult<A> {
        let mut acc = self.product::<A>()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product::<A>()?);
            } else if self.eat('-') {
                acc = acc.add(&self.product::<A>()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn product<A: Algebra>(&mut self) -> PResult<A> {
        let mut acc = self.unary::<A>()?;
        while self.eat('*') {
            acc = acc.mul(&self.unary::<A>()?);
        }
        Ok(acc)
    }

    fn unary<A: Algebra>(&mut self) -> PResult<A> {
        if self.eat('-') {
            Ok(self.unary::<A>()?.neg())
        } else {
            self.power::<A>()
        }
    }

    fn power<A: Algebra>(&mut self) -> PResult<A> {
        self.skip_ws();
        let start = self.pos;
        let base = self.atom::<A>()?;
        if self.eat('^') {
            let p = self.exponent()?;
            return base
                .pow(p)
                .map_err(|msg| ParseError::Syntax { pos: start, msg });
        }
        Ok(base)
    }

    fn atom<A: Algebra>(&mut self) -> PResult<A> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum::<A>()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                let mut r: Rational = num.parse().expect("digits");
                if self.eat('/') {
                    let at = self.pos;
                    let den: Rational = self.digits()?.parse().expect("digits");
                    if den.is_zero() {
                        return Err(ParseError::Syntax {
                            pos: at,
                            msg: "zero denominator".into(),
                        });
                    }
                    r /= den;
                }
                Ok(A::scalar(r))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek_raw(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                A::ident(self, name, start)
            }
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

impl Algebra for Element {
    fn scalar(c: Rational) -> Self {
        Element::constant(c)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn pow(&self, p: i64) -> Result<Self, String> {
        if p >= 0 {
            return Ok((0..p).fold(Element::one(), |acc, _| &acc * self));
        }
        let mut terms = self.terms();
        match (terms.next(), terms.next()) {
            (Some((m, c)), None) => {
                let inv = Monomial::from_pairs(m.iter().map(|(v, e)| (v, -e)));
                let base = Element::term(inv, Rational::one() / c);
                Ok((0..-p).fold(Element::one(), |acc, _| &acc * &base))
            }
            _ => Err("only single terms can be raised to negative powers".into()),
        }
    }
    fn ident(p: &mut Parser<'_>, name: &str, start: usize) -> PResult<Self> {
        match name {
            "x" => {
                let (n, _) = p.bracket_index()?;
                Ok(Element::var(Var::X(n)))
            }
            "y" => {
                let (m, at) = p.bracket_index()?;
                if m < 1 {
                    return Err(ParseError::Index {
                        pos: at,
                        msg: format!("y indices start at 1, got {m}"),
                    });
                }
                Ok(Element::var(Var::Y(m)))
            }
            _ => Err(ParseError::Syntax {
                pos: start,
                msg: format!("unknown variable '{name}'"),
            }),
        }
    }
}

impl Algebra for UElement {
    fn scalar(c: Rational) -> Self {
        UElement::scalar(c)
    }
    fn add(&self, o: &Self) -> Self {
        UElement::add(self, o)
    }
    fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }
    fn mul(&self, o: &Self) -> Self {
        UElement::mul(self, o)
    }
    fn pow(&self, p: i64) -> Result<Self, String> {
        if p >= 0 {
            return Ok(self.powi(p as u32));
        }
        let mut words = self.words();
        match (words.next(), words.next()) {
            (Some(w), None) if w.coeff.is_one() && w.factors.len() == 1 && w.factors[0].1 == 1 => {
                Ok(UElement::pow(w.factors[0].0, p))
            }
            _ => Err("only single generators can be raised to negative powers".into()),
        }
    }
    fn ident(p: &mut Parser<'_>, name: &str, start: usize) -> PResult<Self> {
        let g = match name {
            "c" => Generator::C,
            "d" => Generator::Dg,
            "e" | "f" | "h" => {
                let (n, _) = p.bracket_index()?;
                match name {
                    "e" => Generator::E(n),
                    "f" => Generator::F(n),
                    _ => Generator::H(n),
                }
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unknown generator '{name}'"),
                })
            }
        };
        Ok(UElement::gen(g))
    }
}

fn parse_all<A: Algebra>(text: &str) -> PResult<A> {
    let mut p = Parser { src: text, pos: 0 };
    let v = p.sum::<A>()?;
    match p.peek() {
        None => Ok(v),
        Some(c) => p.err(format!("unexpected '{c}'")),
    }
}

/// Parses a Laurent polynomial in `x[n]`, `y[m]` with rational coefficients.
pub fn parse_element(text: &str) -> PResult<Element> {
    parse_all(text)
}

/// Parses a combination of words in `e[n]`, `f[n]`, `h[n]`, `c`, `d`.
pub fn parse_uelement(text: &str) -> PResult<UElement> {
    parse_all(text)
}

/// Parses a single generator.
pub fn parse_generator(text: &str) -> PResult<Generator> {
    let u = parse_uelement(text)?;
    let mut words = u.words();
    match (words.next(), words.next()) {
        (Some(w), None) if w.coeff.is_one() && w.factors.len() == 1 && w.factors[0].1 == 1 => {
            Ok(w.factors[0].0)
        }
        _ => Err(ParseError::Syntax {
            pos: 0,
            msg: format!("expected a single generator, got {u}"),
        }),
    }
}
