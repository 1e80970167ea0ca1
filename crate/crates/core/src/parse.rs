//! Recursive-descent reader for the textual polynomial grammar:
//!
//! ```text
//! poly   := ["-"] term { ("+"|"-") term }
//! term   := integer [ "*" factor { "*" factor } ] | factor { "*" factor }
//! factor := "x" index [ "^" natural ]
//! ```
//!
//! Whitespace is ignored everywhere. Integer literals of any length are
//! reduced modulo the field prime.

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::monomial::{Monomial, MAX_VARS};
use crate::poly::{Polynomial, Term};

/// Parses `text` as a polynomial in `nvars` variables.
pub fn parse_polynomial(text: &str, field: PrimeField, nvars: usize) -> Result<Polynomial> {
    parse_line(text, field, nvars, 1)
}

/// Like [`parse_polynomial`], with `line` used in error positions.
pub fn parse_line(text: &str, field: PrimeField, nvars: usize, line: usize) -> Result<Polynomial> {
    if nvars > MAX_VARS {
        return Err(Error::structural(format!(
            "{nvars} variables requested, at most {MAX_VARS} supported"
        )));
    }
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line,
        field,
        nvars,
    };
    p.poly()
}

/// Largest variable index (1-based) mentioned in `text`, 0 if none.
/// Purely lexical; the text is not validated.
pub fn max_variable_index(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    let mut k = 0;
    while k < bytes.len() {
        if bytes[k] == b'x' {
            let mut j = k + 1;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            let start = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(v) = text[start..j].parse::<usize>() {
                best = best.max(v);
            }
            k = j.max(k + 1);
        } else {
            k += 1;
        }
    }
    best
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    field: PrimeField,
    nvars: usize,
}

impl Parser {
    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut terms: Vec<Term> = Vec::new();
        let mut negate = self.eat('-');
        loop {
            let (m, mut c) = self.term()?;
            if negate {
                c = self.field.neg(c);
            }
            terms.push((m, c));
            match self.peek() {
                None => break,
                Some('+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(other) => {
                    return Err(self.error_at(self.pos, format!("expected '+' or '-', found '{other}'")))
                }
            }
        }
        Ok(Polynomial::from_terms(self.field, self.nvars, terms))
    }

    fn term(&mut self) -> Result<Term> {
        let mut coeff = self.field.one();
        let mut mono = Monomial::one(self.nvars);
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff = self.integer_mod_q()?;
                if !self.eat('*') {
                    return Ok((mono, coeff));
                }
                mono = self.factor()?;
            }
            Some('x') => mono = self.factor()?,
            Some(other) => {
                return Err(self.error_at(self.pos, format!("expected a term, found '{other}'")))
            }
            None => return Err(self.error_at(self.pos, "unexpected end of input, expected a term")),
        }
        while self.eat('*') {
            let f = self.factor()?;
            mono = mono.checked_mul(&f).ok_or(Error::ExponentOverflow)?;
        }
        Ok((mono, coeff))
    }

    fn factor(&mut self) -> Result<Monomial> {
        let start = {
            self.skip_ws();
            self.pos
        };
        if !self.eat('x') {
            return Err(self.error_at(start, "expected a variable 'x<index>'"));
        }
        let idx_pos = {
            self.skip_ws();
            self.pos
        };
        let index = self.natural()?;
        if index == 0 || index > self.nvars as u64 {
            return Err(self.error_at(
                idx_pos,
                format!("variable index {index} outside 1..={}", self.nvars),
            ));
        }
        let mut exp = 1u64;
        if self.eat('^') {
            exp = self.natural()?;
        }
        let exp = u16::try_from(exp).map_err(|_| Error::ExponentOverflow)?;
        let mut m = Monomial::one(self.nvars);
        m.set_exponent(index as usize - 1, exp);
        Ok(m)
    }

    fn digits(&mut self) -> Result<(usize, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error_at(start, "expected a number"));
        }
        Ok((start, self.pos))
    }

    fn natural(&mut self) -> Result<u64> {
        let (start, end) = self.digits()?;
        let mut v: u64 = 0;
        for &c in &self.chars[start..end] {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(c.to_digit(10).unwrap() as u64))
                .ok_or(Error::ExponentOverflow)?;
        }
        Ok(v)
    }

    fn integer_mod_q(&mut self) -> Result<FieldElement> {
        let (start, end) = self.digits()?;
        let f = self.field;
        let ten = f.elem(10);
        Ok(self.chars[start..end].iter().fold(f.zero(), |acc, c| {
            f.add(f.mul(acc, ten), f.elem(c.to_digit(10).unwrap() as u64))
        }))
    }
}
