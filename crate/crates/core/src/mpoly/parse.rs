//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' exponent)?
//! atom   := number | variable | '(' expr ')'
//! number := digits ('/' digits)?
//! ```
//!
//! Variables are `x1`..`x9`, with `x`, `y`, `z` as aliases for `x1`, `x2`,
//! `x3`. Exponents must be non-negative integer literals, optionally
//! parenthesized.

use num::{BigInt, BigRational, Zero};

use super::MultiPoly;
use crate::error::{Error, Result};

pub fn parse_poly(text: &str, num_vars: usize) -> Result<MultiPoly> {
    if num_vars == 0 || num_vars > 9 {
        return Err(Error::VarOutOfRange {
            index: num_vars,
            num_vars: 9,
        });
    }
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        num_vars,
    };
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    num_vars: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
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

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(c) if c == b'(' || c == b'x' || c == b'y' || c == b'z' || c.is_ascii_digit() => {
                    return Err(self.syntax("implicit multiplication is not allowed"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.exponent()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        let start = self.pos;
        let parens = self.peek() == Some(b'(');
        if parens {
            self.pos += 1;
        }
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.syntax("expected an integer exponent"));
        }
        if self.peek() == Some(b'/') || self.peek() == Some(b'.') {
            return Err(Error::NegativeExponent { position: start });
        }
        if parens {
            if self.peek() != Some(b')') {
                return Err(self.syntax("expected ')' after exponent"));
            }
            self.pos += 1;
        }
        let value: BigInt = digits.parse().map_err(|_| self.syntax("bad exponent"))?;
        if negative && !value.is_zero() {
            return Err(Error::NegativeExponent { position: start });
        }
        u32::try_from(value).map_err(|_| self.syntax("exponent too large"))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let p = self.num_vars;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                // `5/2` is a single rational literal; whitespace is allowed
                // around the slash.
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(self.syntax("expected denominator after '/'"));
                    }
                    let d: BigInt = d.parse().expect("digits");
                    if d.is_zero() {
                        return Err(self.syntax("zero denominator"));
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(MultiPoly::constant(p, BigRational::new(num, den)))
            }
            Some(b'x') => {
                self.pos += 1;
                let d = self.digits();
                let index = if d.is_empty() {
                    1
                } else {
                    d.parse::<usize>().map_err(|_| self.syntax("bad variable index"))?
                };
                self.variable(index)
            }
            Some(b'y') => {
                self.pos += 1;
                self.variable(2)
            }
            Some(b'z') => {
                self.pos += 1;
                self.variable(3)
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn variable(&mut self, index: usize) -> Result<MultiPoly> {
        if self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            return Err(self.syntax("unknown identifier"));
        }
        if index == 0 || index > self.num_vars {
            return Err(Error::VarOutOfRange {
                index,
                num_vars: self.num_vars,
            });
        }
        Ok(MultiPoly::var(self.num_vars, index - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::int;

    #[test]
    fn basic_examples() {
        let f = parse_poly("x1^2 + x2^2 + 1", 2).unwrap();
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.degree(), Some(2));

        let g = parse_poly("(x1+1)*(x1+2)", 1).unwrap();
        let expected = MultiPoly::from_terms(1, [(vec![2], int(1)), (vec![1], int(3)), (vec![0], int(2))]);
        assert_eq!(g, expected);
    }

    #[test]
    fn negative_exponent() {
        assert!(matches!(
            parse_poly("x1^(-1)", 1),
            Err(Error::NegativeExponent { .. })
        ));
        assert!(matches!(
            parse_poly("x1^-2", 1),
            Err(Error::NegativeExponent { .. })
        ));
        assert!(matches!(
            parse_poly("x1^(1/2)", 1),
            Err(Error::NegativeExponent { .. })
        ));
    }

    #[test]
    fn variable_range_and_aliases() {
        assert!(matches!(
            parse_poly("x3 + 1", 2),
            Err(Error::VarOutOfRange { index: 3, .. })
        ));
        assert_eq!(
            parse_poly("x + y + z", 3).unwrap(),
            parse_poly("x1 + x2 + x3", 3).unwrap()
        );
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "2x", "x1 +", "(x1+1", "x1 ** 2", "x1 / 2", "w + 1", "x1)(x1"] {
            assert!(
                matches!(parse_poly(bad, 2), Err(Error::Syntax { .. })),
                "{bad:?} should be a syntax error"
            );
        }
    }

    #[test]
    fn rational_literals_and_unary() {
        let f = parse_poly("5/2*x1 - -x2 + 1/3", 2).unwrap();
        assert_eq!(f.to_string(), "5/2*x1 + x2 + 1/3");
        assert_eq!(parse_poly("-x^2", 1).unwrap().to_string(), "-x1^2");
        assert_eq!(parse_poly("x1^0", 1).unwrap(), MultiPoly::one(1));
    }
}
