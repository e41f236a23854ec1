//! Text grammar for polynomial entry:
//!
//! ```text
//! expr     := sign? term (('+'|'-') term)*
//! term     := rational? factor*          (at least one of the two)
//! factor   := ('x'|'p') INDEX ('^' UINT)?
//! rational := INT ('/' UINT)?
//! ```
//!
//! Whitespace is ignored everywhere, `INDEX >= 1`, and an optional `*` may
//! separate the parts of a term.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{PhasePolynomial, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at offset {offset}")]
    Unexpected { found: char, offset: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("empty term at offset {0}")]
    EmptyTerm(usize),
    #[error("zero denominator at offset {0}")]
    ZeroDenominator(usize),
    #[error("variable {0} is out of range (INDEX must be in 1..={1})")]
    VariableOutOfRange(String, usize),
    #[error("exponent too large at offset {0}")]
    ExponentTooLarge(usize),
}

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(o, _)| o)
            .unwrap_or_else(|| self.chars.last().map(|&(o, _)| o + 1).unwrap_or(0))
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            self.chars[start..self.pos]
                .iter()
                .map(|&(_, c)| c)
                .collect()
        })
    }
}

/// Parses `src` into a polynomial over `num_base` x-variables and
/// `num_momenta` p-variables.
pub fn parse_polynomial(
    src: &str,
    num_base: usize,
    num_momenta: usize,
) -> Result<PhasePolynomial, ParseError> {
    let mut lx = Lexer::new(src);
    let mut acc = PhasePolynomial::zero(num_base, num_momenta);
    let mut sign = Rational::one();
    match lx.peek() {
        Some('-') => {
            lx.bump();
            sign = -sign;
        }
        Some('+') => {
            lx.bump();
        }
        None => return Err(ParseError::UnexpectedEnd),
        _ => {}
    }
    loop {
        let term = parse_term(&mut lx, num_base, num_momenta)?;
        acc = &acc + &term.scale(&sign);
        match lx.bump() {
            None => return Ok(acc),
            Some('+') => sign = Rational::one(),
            Some('-') => sign = -Rational::one(),
            Some(c) => {
                lx.pos -= 1;
                return Err(ParseError::Unexpected {
                    found: c,
                    offset: lx.offset(),
                });
            }
        }
    }
}

fn parse_term(
    lx: &mut Lexer<'_>,
    num_base: usize,
    num_momenta: usize,
) -> Result<PhasePolynomial, ParseError> {
    let start = lx.offset();
    let mut coeff = Rational::one();
    let mut seen = false;
    if let Some(num) = lx.digits() {
        seen = true;
        let n: BigInt = num.parse().expect("digits parse as integer");
        let mut d = BigInt::one();
        if lx.peek() == Some('/') {
            lx.bump();
            let off = lx.offset();
            let den = lx.digits().ok_or_else(|| unexpected(lx))?;
            d = den.parse().expect("digits parse as integer");
            if d.is_zero() {
                return Err(ParseError::ZeroDenominator(off));
            }
        }
        coeff = Rational::new(n, d);
    }
    let mut term = PhasePolynomial::constant(num_base, num_momenta, coeff);
    loop {
        if lx.peek() == Some('*') && seen {
            lx.bump();
        }
        let kind = match lx.peek() {
            Some('x') => 'x',
            Some('p') => 'p',
            _ => break,
        };
        lx.bump();
        let idx_str = lx.digits().ok_or_else(|| unexpected(lx))?;
        let idx: usize = idx_str.parse().unwrap_or(usize::MAX);
        let (v, limit) = if kind == 'x' {
            (Var::X(idx), num_base)
        } else {
            (Var::P(idx), num_momenta)
        };
        let mut exp = 1u32;
        if lx.peek() == Some('^') {
            lx.bump();
            let off = lx.offset();
            let e = lx.digits().ok_or_else(|| unexpected(lx))?;
            exp = e.parse().map_err(|_| ParseError::ExponentTooLarge(off))?;
            if exp > 1000 {
                return Err(ParseError::ExponentTooLarge(off));
            }
        }
        let var = PhasePolynomial::var(num_base, num_momenta, v)
            .map_err(|_| ParseError::VariableOutOfRange(format!("{kind}{idx_str}"), limit))?;
        term = &term * &var.pow(exp);
        seen = true;
    }
    if !seen {
        return Err(ParseError::EmptyTerm(start));
    }
    Ok(term)
}

fn unexpected(lx: &Lexer<'_>) -> ParseError {
    match lx.peek() {
        Some(c) => ParseError::Unexpected {
            found: c,
            offset: lx.offset(),
        },
        None => ParseError::UnexpectedEnd,
    }
}
