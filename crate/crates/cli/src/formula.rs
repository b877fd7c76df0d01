//! The small formula grammar accepted for `omega` and `dilatation`:
//!
//! ```text
//! formula := term (('+' | '-') term)*  |  '(z+' A ')/(1+' A 'z)'
//! term    := ['+' | '-'] coef ['*'] ['z' ['^' n]]  |  ['+' | '-'] 'z' ['^' n]
//! coef    := number ['i'] | 'i' | '(' number ('+' | '-') [number] 'i' ')'
//! ```
//!
//! `A` is a number or the letter `a`, which is taken from the function spec.
//! Whitespace is ignored.

use schlicht::zoo::{OmegaForm, SchwarzCandidate, SchwarzRole};
use schlicht::Complex64;
use thiserror::Error;

/// Largest exponent accepted in a monomial.
pub const MAX_POWER: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormulaError {
    #[error("empty formula")]
    Empty,
    #[error("unexpected {found} at position {pos}")]
    Unexpected { pos: usize, found: String },
    #[error("exponent {0} exceeds {MAX_POWER}")]
    PowerTooLarge(usize),
    #[error("bad number {0:?}")]
    BadNumber(String),
    #[error("the Mobius tag needs a value for a")]
    MissingA,
    #[error("Mobius tag uses two different values of a ({0} and {1})")]
    InconsistentA(f64, f64),
    #[error("{0}")]
    Invalid(String),
}

/// Parsed formula before a role is attached.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Polynomial(Vec<Complex64>),
    Mobius(f64),
}

impl Formula {
    pub fn into_candidate(self, role: SchwarzRole) -> Result<SchwarzCandidate, FormulaError> {
        let form = match self {
            Formula::Polynomial(coeffs) => OmegaForm::Polynomial { coeffs },
            Formula::Mobius(a) => OmegaForm::Mobius { a },
        };
        SchwarzCandidate::new(role, form).map_err(|e| FormulaError::Invalid(e.to_string()))
    }
}

/// Parses a formula; `a` fills the letter `a` in the Mobius tag.
pub fn parse_formula(src: &str, a: Option<f64>) -> Result<Formula, FormulaError> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(FormulaError::Empty);
    }
    if let Some(m) = parse_mobius(&chars, a)? {
        return Ok(Formula::Mobius(m));
    }
    let mut p = Parser { s: &chars, pos: 0 };
    let mut coeffs: Vec<Complex64> = Vec::new();
    let mut first = true;
    while p.pos < chars.len() {
        let sign = match p.peek() {
            Some('+') => {
                p.pos += 1;
                1.0
            }
            Some('-') => {
                p.pos += 1;
                -1.0
            }
            _ if first => 1.0,
            _ => return Err(p.unexpected()),
        };
        first = false;
        let (c, n) = p.term()?;
        if coeffs.len() <= n {
            coeffs.resize(n + 1, Complex64::new(0.0, 0.0));
        }
        coeffs[n] += sign * c;
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(FormulaError::Invalid("non-finite coefficient".into()));
    }
    Ok(Formula::Polynomial(coeffs))
}

/// Parses and attaches a role in one go.
pub fn parse_candidate(src: &str, a: Option<f64>, role: SchwarzRole) -> Result<SchwarzCandidate, FormulaError> {
    parse_formula(src, a)?.into_candidate(role)
}

fn parse_mobius(s: &[char], a: Option<f64>) -> Result<Option<f64>, FormulaError> {
    let text: String = s.iter().collect();
    let Some(rest) = text.strip_prefix("(z+") else {
        return Ok(None);
    };
    let Some((first, rest)) = rest.split_once(")/(1+") else {
        return Ok(None);
    };
    let Some(second) = rest.strip_suffix("z)") else {
        return Ok(None);
    };
    let value = |t: &str| -> Result<f64, FormulaError> {
        if t == "a" {
            a.ok_or(FormulaError::MissingA)
        } else {
            number(t)
        }
    };
    let (x, y) = (value(first)?, value(second.trim_end_matches('*'))?);
    if x != y {
        return Err(FormulaError::InconsistentA(x, y));
    }
    Ok(Some(x))
}

fn number(t: &str) -> Result<f64, FormulaError> {
    // reject forms f64::from_str accepts but the grammar does not
    if t.is_empty() || !t.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        return Err(FormulaError::BadNumber(t.into()));
    }
    t.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| FormulaError::BadNumber(t.into()))
}

struct Parser<'a> {
    s: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn unexpected(&self) -> FormulaError {
        FormulaError::Unexpected {
            pos: self.pos,
            found: self.peek().map_or("end of input".into(), |c| format!("{c:?}")),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn term(&mut self) -> Result<(Complex64, usize), FormulaError> {
        let coef = match self.peek() {
            Some('z') => None,
            Some(_) => Some(self.coef()?),
            None => return Err(self.unexpected()),
        };
        let star = self.eat('*');
        if !self.eat('z') {
            if star || coef.is_none() {
                return Err(self.unexpected());
            }
            return Ok((coef.expect("checked"), 0));
        }
        let mut n = 1;
        if self.eat('^') {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let digits: String = self.s[start..self.pos].iter().collect();
            n = digits.parse().map_err(|_| FormulaError::BadNumber(digits.clone()))?;
            if n > MAX_POWER {
                return Err(FormulaError::PowerTooLarge(n));
            }
        }
        Ok((coef.unwrap_or(Complex64::new(1.0, 0.0)), n))
    }

    fn coef(&mut self) -> Result<Complex64, FormulaError> {
        if self.eat('i') {
            return Ok(Complex64::new(0.0, 1.0));
        }
        if self.eat('(') {
            let re = self.number()?;
            if self.eat(')') {
                return Ok(Complex64::new(re, 0.0));
            }
            let sign = if self.eat('+') {
                1.0
            } else if self.eat('-') {
                -1.0
            } else {
                return Err(self.unexpected());
            };
            let im = if self.peek() == Some('i') { 1.0 } else { self.number()? };
            if !self.eat('i') || !self.eat(')') {
                return Err(self.unexpected());
            }
            return Ok(Complex64::new(re, sign * im));
        }
        let x = self.number()?;
        if self.eat('i') {
            Ok(Complex64::new(0.0, x))
        } else {
            Ok(Complex64::new(x, 0.0))
        }
    }

    fn number(&mut self) -> Result<f64, FormulaError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        // exponent, only when followed by digits
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        let text: String = self.s[start..self.pos].iter().collect();
        number(&text)
    }
}
