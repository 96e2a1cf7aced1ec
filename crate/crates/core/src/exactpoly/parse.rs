use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Exponent, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial at byte {offset}: {message}")]
pub struct ParsePolyError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParsePolyError> {
        Err(ParsePolyError { offset: self.pos, message: message.into() })
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

    fn integer(&mut self) -> Result<BigInt, ParsePolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit string"))
    }

    fn ident(&mut self) -> Result<String, ParsePolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected variable or number");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident").to_string())
    }

    fn factor(&mut self) -> Result<Poly, ParsePolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let value = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                Ok(Poly::constant(value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident()?;
                let power = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let k = self.integer()?;
                    u32::try_from(k).or_else(|_| self.err("exponent too large"))?
                } else {
                    1
                };
                let e = match name.as_str() {
                    "x" => Exponent::coords(power, 0, 0),
                    "y" => Exponent::coords(0, power, 0),
                    "z" => Exponent::coords(0, 0, power),
                    _ => Exponent::param(&name, power),
                };
                Ok(Poly::monomial(e))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => self.err("unexpected token"),
        }
    }

    fn product(&mut self) -> Result<Poly, ParsePolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<Poly, ParsePolyError> {
        let mut acc = Poly::zero();
        let mut sign = Rational::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let t = self.product()?;
            acc = &acc + &t.scale(&sign);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rational::one();
                }
                _ => return Ok(acc),
            }
        }
    }
}

pub(super) fn parse_poly(s: &str) -> Result<Poly, ParsePolyError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let out = p.sum()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    out.check_parameter_bound().map_err(|e| ParsePolyError { offset: 0, message: e.to_string() })?;
    Ok(out)
}
