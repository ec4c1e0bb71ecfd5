//! Value literals: `[-]digits[/digits]`, Gaussian forms `a`, `bi`, `a+bi`,
//! `a-bi`, and cyclotomic combinations such as `1/2*z8^1 - z8^3`.
//! Whitespace is ignored.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::value::ExactValue;
use crate::error::{Error, Result};

/// Arithmetic mode selected for a session (`EO_FIELD=gauss|zeta:<N>`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FieldMode {
    #[default]
    Gauss,
    Zeta(u32),
}

impl FieldMode {
    pub fn from_env() -> Result<Self> {
        match std::env::var("EO_FIELD") {
            Ok(s) => s.parse(),
            Err(_) => Ok(FieldMode::Gauss),
        }
    }

    /// Parse a literal and check that its conductor is admissible in this mode.
    pub fn parse_value(&self, s: &str) -> Result<ExactValue> {
        let v: ExactValue = parse_literal(s)?;
        self.admit(&v).map(|_| v)
    }

    pub fn admit(&self, v: &ExactValue) -> Result<()> {
        let ok = match self {
            FieldMode::Gauss => 4 % v.order() == 0,
            FieldMode::Zeta(n) => n % v.order() == 0 || 4 % v.order() == 0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::parse(
                0,
                format!("value {} lies outside the {:?} field", v, self),
            ))
        }
    }
}

impl FromStr for FieldMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "gauss" {
            return Ok(FieldMode::Gauss);
        }
        if let Some(n) = s.strip_prefix("zeta:") {
            let n: u32 = n
                .parse()
                .map_err(|_| Error::parse(0, format!("bad field order in {s:?}")))?;
            if n == 0 {
                return Err(Error::parse(0, "field order must be positive"));
            }
            return Ok(FieldMode::Zeta(n));
        }
        Err(Error::parse(0, format!("unknown field mode {s:?}")))
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .unwrap()
        })
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

fn err(src: &str, msg: &str) -> Error {
    Error::parse(0, format!("{msg} in literal {src:?}"))
}

pub fn parse_literal(src: &str) -> Result<ExactValue> {
    let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err(src, "empty value"));
    }
    let mut cur = Cursor {
        s: compact.as_bytes(),
        pos: 0,
    };
    let mut total = ExactValue::zero();
    let mut first = true;
    while cur.peek().is_some() {
        let mut sign = BigInt::one();
        if cur.eat(b'-') {
            sign = -sign;
        } else if !cur.eat(b'+') && !first {
            return Err(err(src, "expected '+' or '-'"));
        }
        first = false;

        let coeff = match cur.digits() {
            Some(num) => {
                let den = if cur.eat(b'/') {
                    cur.digits().ok_or_else(|| err(src, "missing denominator"))?
                } else {
                    BigInt::one()
                };
                if den.is_zero() {
                    return Err(err(src, "zero denominator"));
                }
                Some(BigRational::new(num, den))
            }
            None => None,
        };
        let had_star = cur.eat(b'*');
        let unit = if cur.eat(b'i') {
            Some(ExactValue::i())
        } else if cur.eat(b'z') {
            let n = cur.digits().ok_or_else(|| err(src, "missing root order after 'z'"))?;
            if !cur.eat(b'^') {
                return Err(err(src, "expected '^' after zN"));
            }
            let neg = cur.eat(b'-');
            let k = cur.digits().ok_or_else(|| err(src, "missing exponent"))?;
            let n: u32 = n.try_into().map_err(|_| err(src, "root order too large"))?;
            if n == 0 {
                return Err(err(src, "root order must be positive"));
            }
            let k: i64 = k.try_into().map_err(|_| err(src, "exponent too large"))?;
            Some(ExactValue::zeta(n, if neg { -k } else { k }))
        } else {
            None
        };
        if had_star && (coeff.is_none() || unit.is_none()) {
            return Err(err(src, "'*' must join a coefficient and a root"));
        }
        let term = match (coeff, unit) {
            (Some(c), Some(u)) => ExactValue::from_rational(c) * u,
            (Some(c), None) => ExactValue::from_rational(c),
            (None, Some(u)) => u,
            (None, None) => return Err(err(src, "expected a term")),
        };
        total += &(ExactValue::from_rational(BigRational::from_integer(sign)) * term);
    }
    Ok(total)
}

impl FromStr for ExactValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_literal(s)
    }
}
