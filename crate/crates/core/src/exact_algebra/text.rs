//! Parser for the polynomial text syntax.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' int]
//! atom   := int ['/' int] | 'zeta(' int ')' | 'd' int | '(' expr ')'
//! ```
//!
//! Everything printed by [`Polynomial::to_text`] and [`Cyclotomic`]'s
//! `Display` parses back to the same value.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::cyclotomic::Cyclotomic;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Malformed(format!("{msg} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        if self.src.get(self.pos) == Some(&b'.') {
            return Err(Error::UnsupportedCharacterValue(format!(
                "floating point value in {:?}; use exact rationals",
                String::from_utf8_lossy(self.src)
            )));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small_int(&mut self) -> Result<u64> {
        let v = self.int()?;
        u64::try_from(v).map_err(|_| self.err("integer out of range"))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            -&self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let negative = self.peek() == Some(b'-');
            if negative {
                self.pos += 1;
            }
            let k = self.small_int()? as i64;
            if negative {
                // only constants may carry negative exponents
                let c = constant_of(&base).ok_or_else(|| self.err("negative power of a variable"))?;
                let inv = c.pow(-k).ok_or_else(|| self.err("division by zero"))?;
                return Ok(Polynomial::constant(self.nvars, inv));
            }
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.int()?;
                let mut q = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.int()?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    q /= BigRational::from_integer(den);
                }
                Ok(Polynomial::constant(self.nvars, Cyclotomic::from_rational(q)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                match ident.as_str() {
                    "zeta" => {
                        self.expect(b'(')?;
                        let e = self.small_int()?;
                        self.expect(b')')?;
                        if e == 0 {
                            return Err(self.err("zeta(0) is undefined"));
                        }
                        Ok(Polynomial::constant(self.nvars, Cyclotomic::root_of_unity(e, 1)))
                    }
                    "d" => {
                        let i = self.small_int()? as usize;
                        if i == 0 || i > self.nvars {
                            return Err(Error::DimensionMismatch(format!(
                                "variable d{i} outside d1..d{}",
                                self.nvars
                            )));
                        }
                        Ok(Polynomial::var(self.nvars, i - 1))
                    }
                    _ => Err(Error::UnsupportedCharacterValue(format!(
                        "unknown identifier {ident:?}; only rationals and zeta(e) are supported"
                    ))),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn constant_of(p: &Polynomial) -> Option<Cyclotomic> {
    if p.is_zero() {
        return Some(Cyclotomic::zero());
    }
    if p.len() == 1 {
        let (m, c) = p.terms().next().unwrap();
        if m.iter().all(|&e| e == 0) {
            return Some(c.clone());
        }
    }
    None
}

pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, nvars };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parse an exact scalar such as `3/2`, `-zeta(4)^3` or `(1 + 1/2*zeta(8)^3)`.
pub fn parse_cyclotomic(text: &str) -> Result<Cyclotomic> {
    let p = parse_polynomial(text, 0)?;
    constant_of(&p).ok_or_else(|| Error::Malformed(format!("{text:?} is not a scalar")))
}
