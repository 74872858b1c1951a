//! BAN literal grammar: parsing and display.
//!
//! ```text
//! expression ::= term (('+'|'-') term)*
//! term       ::= decimal [ ('a'|'n') ['^' unsigned-int] ]
//!              | ('a'|'n') ['^' unsigned-int]
//! ```
//!
//! `a` stands for α, `n` for η = α⁻¹; whitespace is ignored. Decimals accept
//! an optional `e`/`E` exponent so that formatted values round-trip.
//! Examples: `"8+14n"`, `"-1a+3"`, `"2.5a^2-3a+1+0.5n"`.

use std::error::Error;
use std::fmt;

use super::Ban;
use crate::real::Real;

/// Parse failure with the byte position where it occurred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnexpectedChar(char),
    MalformedNumber,
    MalformedExponent,
    /// The literal spans more monosemium levels than the configured length
    /// can hold.
    SlotOverflow { span: usize, len: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Empty => write!(f, "empty BAN literal"),
            ParseErrorKind::UnexpectedChar(c) => {
                write!(f, "unexpected character '{c}' at position {}", self.position)
            }
            ParseErrorKind::MalformedNumber => {
                write!(f, "malformed number at position {}", self.position)
            }
            ParseErrorKind::MalformedExponent => {
                write!(f, "malformed power after '^' at position {}", self.position)
            }
            ParseErrorKind::SlotOverflow { span, len } => write!(
                f,
                "literal spans {span} monosemium levels but only {len} slots are configured"
            ),
        }
    }
}

impl Error for ParseError {}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, _text: text }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { position: self.pos, kind }
    }
}

pub fn parse<R: Real>(text: &str, len: usize) -> Result<Ban<R>, ParseError> {
    assert!(len >= 1, "a Ban needs at least one coefficient slot");
    let mut cur = Cursor::new(text);
    let mut terms: Vec<(i64, R)> = Vec::new();

    cur.skip_ws();
    if cur.peek().is_none() {
        return Err(cur.err(ParseErrorKind::Empty));
    }

    let mut sign = match cur.peek() {
        Some('+') => {
            cur.bump();
            R::one()
        }
        Some('-') => {
            cur.bump();
            -R::one()
        }
        _ => R::one(),
    };

    loop {
        cur.skip_ws();
        let (power, coeff) = parse_term(&mut cur)?;
        terms.push((power, sign * coeff));
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some('+') => {
                cur.bump();
                sign = R::one();
            }
            Some('-') => {
                cur.bump();
                sign = -R::one();
            }
            Some(c) => return Err(cur.err(ParseErrorKind::UnexpectedChar(c))),
        }
    }

    let max_power = terms
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, _)| *p)
        .max();
    let Some(max_power) = max_power else {
        return Ok(Ban::zero(len));
    };
    let mut coeffs = vec![R::zero(); len];
    for (p, c) in &terms {
        if c.is_zero() {
            continue;
        }
        let slot = max_power - p;
        if slot >= len as i64 {
            let span = terms
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, _)| (max_power - p) as usize + 1)
                .max()
                .unwrap();
            return Err(ParseError {
                position: 0,
                kind: ParseErrorKind::SlotOverflow { span, len },
            });
        }
        let slot = slot as usize;
        coeffs[slot] = coeffs[slot] + *c;
    }
    Ok(Ban::new(max_power, coeffs))
}

fn parse_term<R: Real>(cur: &mut Cursor) -> Result<(i64, R), ParseError> {
    let coeff = match cur.peek() {
        Some(c) if c.is_ascii_digit() || c == '.' => Some(parse_number::<R>(cur)?),
        Some('a') | Some('n') => None,
        Some(c) => return Err(cur.err(ParseErrorKind::UnexpectedChar(c))),
        None => return Err(cur.err(ParseErrorKind::Empty)),
    };
    cur.skip_ws();
    let unit_power = match cur.peek() {
        Some('a') => {
            cur.bump();
            1i64
        }
        Some('n') => {
            cur.bump();
            -1i64
        }
        _ => {
            let coeff = coeff.ok_or_else(|| cur.err(ParseErrorKind::Empty))?;
            return Ok((0, coeff));
        }
    };
    let exponent = if cur.peek() == Some('^') {
        cur.bump();
        let start = cur.pos;
        let mut digits = String::new();
        while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            digits.push(cur.bump().unwrap());
        }
        if digits.is_empty() {
            return Err(ParseError { position: start, kind: ParseErrorKind::MalformedExponent });
        }
        digits
            .parse::<i64>()
            .map_err(|_| ParseError { position: start, kind: ParseErrorKind::MalformedExponent })?
    } else {
        1
    };
    Ok((unit_power * exponent, coeff.unwrap_or_else(R::one)))
}

fn parse_number<R: Real>(cur: &mut Cursor) -> Result<R, ParseError> {
    let start = cur.pos;
    let mut text = String::new();
    while cur.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
        text.push(cur.bump().unwrap());
    }
    // optional exponent part; 'e' never collides with the unit symbols
    if cur.peek() == Some('e') || cur.peek() == Some('E') {
        text.push(cur.bump().unwrap());
        if cur.peek() == Some('+') || cur.peek() == Some('-') {
            text.push(cur.bump().unwrap());
        }
        while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            text.push(cur.bump().unwrap());
        }
    }
    R::from_str(&text)
        .map_err(|_| ParseError { position: start, kind: ParseErrorKind::MalformedNumber })
}

impl<R: Real> fmt::Display for Ban<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = self.power() - i as i64;
            if first {
                if *c < R::zero() {
                    write!(f, "-")?;
                }
                first = false;
            } else if *c < R::zero() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let mag = c.abs();
            if p == 0 {
                write!(f, "{mag}")?;
            } else {
                if mag != R::one() {
                    write!(f, "{mag}")?;
                }
                write!(f, "{}", if p > 0 { 'a' } else { 'n' })?;
                if p.abs() != 1 {
                    write!(f, "^{}", p.abs())?;
                }
            }
        }
        Ok(())
    }
}
