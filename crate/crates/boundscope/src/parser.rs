//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (informal EBNF):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' uint)? | '-' factor
//! atom   := number | var | '(' expr ')'
//! var    := 'x' uint
//! ```
//!
//! `^` takes a nonnegative integer literal exponent and binds tighter than
//! unary minus. `/` is constant folding only (e.g. `5^6/6`): the divisor must
//! reduce to a nonzero constant, which keeps results inside the polynomial
//! ring. Implicit multiplication (`2x1`) is rejected.

use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    /// Numeric literal; `integral` is true when it was written as a plain
    /// digit string, which is what exponents require.
    Number {
        value: f64,
        integral: bool,
    },
    /// 1-based variable index from `x<uint>`.
    Var(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn tokens(mut self) -> Result<Vec<(Token, usize)>> {
        let mut out = Vec::new();
        loop {
            self.skip_whitespace();
            let start = self.pos;
            let Some(&b) = self.src.get(self.pos) else {
                out.push((Token::End, start));
                return Ok(out);
            };
            let tok = match b {
                b'+' => {
                    self.pos += 1;
                    Token::Plus
                }
                b'-' => {
                    self.pos += 1;
                    Token::Minus
                }
                b'*' => {
                    self.pos += 1;
                    Token::Star
                }
                b'/' => {
                    self.pos += 1;
                    Token::Slash
                }
                b'^' => {
                    self.pos += 1;
                    Token::Caret
                }
                b'(' => {
                    self.pos += 1;
                    Token::LParen
                }
                b')' => {
                    self.pos += 1;
                    Token::RParen
                }
                b'x' => {
                    self.pos += 1;
                    let digits = self.take_digits();
                    if digits.is_empty() {
                        return Err(Error::Parse {
                            position: start,
                            message: "expected a variable index after 'x'".into(),
                        });
                    }
                    let idx: u32 = digits.parse().map_err(|_| Error::Parse {
                        position: start,
                        message: "variable index too large".into(),
                    })?;
                    Token::Var(idx)
                }
                b'0'..=b'9' => self.lex_number(start)?,
                _ => {
                    return Err(Error::Parse {
                        position: start,
                        message: format!("unexpected character '{}'", self.src[start] as char),
                    })
                }
            };
            out.push((tok, start));
        }
    }

    fn skip_whitespace(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn take_digits(&mut self) -> String {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn lex_number(&mut self, start: usize) -> Result<Token> {
        self.take_digits();
        let mut integral = true;
        if self.src.get(self.pos) == Some(&b'.') {
            integral = false;
            self.pos += 1;
            if self.take_digits().is_empty() {
                return Err(Error::Parse {
                    position: self.pos,
                    message: "expected digits after decimal point".into(),
                });
            }
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            integral = false;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self.take_digits().is_empty() {
                return Err(Error::Parse {
                    position: self.pos,
                    message: "expected digits in exponent".into(),
                });
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: f64 = text.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("invalid number '{text}'"),
        })?;
        Ok(Token::Number { value, integral })
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    cursor: usize,
    dimension: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.cursor].0
    }

    fn position(&self) -> usize {
        self.tokens[self.cursor].1
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.cursor].0.clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.position(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.advance();
                    acc = &acc + &self.term()?;
                }
                Token::Minus => {
                    self.advance();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.advance();
                    acc = &acc * &self.factor()?;
                }
                Token::Slash => {
                    let pos = self.position();
                    self.advance();
                    let divisor = self.factor()?;
                    if divisor.degree() > 0 {
                        return Err(Error::Parse {
                            position: pos,
                            message: "division is only supported by a numeric constant".into(),
                        });
                    }
                    let c = divisor.coefficient(&vec![0; self.dimension]);
                    if c == 0.0 {
                        return Err(Error::Parse {
                            position: pos,
                            message: "division by zero".into(),
                        });
                    }
                    acc = acc.scale(1.0 / c);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        if matches!(self.peek(), Token::Minus) {
            self.advance();
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if matches!(self.peek(), Token::Caret) {
            self.advance();
            let exp = match self.peek().clone() {
                Token::Number {
                    value,
                    integral: true,
                } if value >= 0.0 && value <= f64::from(u32::MAX) => {
                    self.advance();
                    value as u32
                }
                _ => {
                    return Err(self.error("exponent must be a nonnegative integer literal"));
                }
            };
            return Ok(base.powi(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().clone() {
            Token::Number { value, .. } => {
                self.advance();
                Ok(Polynomial::constant(self.dimension, value))
            }
            Token::Var(idx) => {
                if idx == 0 {
                    return Err(self.error("variable indices start at x1"));
                }
                if idx as usize > self.dimension {
                    return Err(self.error(format!(
                        "variable x{idx} out of range for dimension {}",
                        self.dimension
                    )));
                }
                self.advance();
                Ok(Polynomial::variable(self.dimension, idx as usize - 1))
            }
            Token::LParen => {
                self.advance();
                let inner = self.expr()?;
                if !matches!(self.peek(), Token::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.advance();
                Ok(inner)
            }
            _ => Err(self.error("expected a number, variable, or '('")),
        }
    }
}

/// Parse `text` into a polynomial in `dimension` variables named `x1..xn`.
pub fn parse_polynomial(text: &str, dimension: usize) -> Result<Polynomial> {
    let tokens = Lexer::new(text).tokens()?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        dimension,
    };
    let poly = parser.expr()?;
    if !matches!(parser.peek(), Token::End) {
        return Err(parser.error("expected an operator or end of input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn parses_constant_one() {
        let p = parse_polynomial("1", 2).unwrap();
        assert_eq!(p.degree(), 0);
        assert_eq!(p.eval(&[0.3, -0.7]), 1.0);
    }

    #[test]
    fn parses_motzkin() {
        let p = parse_polynomial("64*(x1^4*x2^2 + x1^2*x2^4) - 48*x1^2*x2^2 + 1", 2).unwrap();
        assert_eq!(p.degree(), 6);
        assert_eq!(p.eval(&[1.0, 1.0]), 81.0);
        assert_eq!(p.coefficient(&[4, 2]), 64.0);
        assert_eq!(p.coefficient(&[2, 2]), -48.0);
    }

    #[test]
    fn parses_booth() {
        let p = parse_polynomial("(10*x1+20*x2-7)^2 + (20*x1+10*x2-5)^2", 2).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(&[-1.0, -1.0]), 2594.0);
        assert_eq!(p.coefficient(&[2, 0]), 500.0);
        assert_eq!(p.coefficient(&[1, 1]), 800.0);
    }

    #[test]
    fn folds_constant_fractions() {
        let p = parse_polynomial("5^6/6*x1^6", 1).unwrap();
        assert_relative_eq!(p.coefficient(&[6]), 15625.0 / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn unary_minus_binds_below_power() {
        // -x1^2 means -(x1^2)
        let p = parse_polynomial("-x1^2", 1).unwrap();
        assert_eq!(p.coefficient(&[2]), -1.0);
        assert_eq!(p.eval(&[3.0]), -9.0);
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let err = parse_polynomial("2x1", 1).unwrap_err();
        match err {
            Error::Parse { position, .. } => assert_eq!(position, 1),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn rejects_out_of_range_variable() {
        let err = parse_polynomial("x1 + x3", 2).unwrap_err();
        match err {
            Error::Parse { position, message } => {
                assert_eq!(position, 5);
                assert!(message.contains("x3"));
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn rejects_zero_variable_index() {
        assert!(parse_polynomial("x0", 2).is_err());
    }

    #[test]
    fn rejects_fractional_exponent() {
        let err = parse_polynomial("x1^2.5", 1).unwrap_err();
        match err {
            Error::Parse { message, .. } => assert!(message.contains("nonnegative integer")),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn rejects_negative_exponent() {
        assert!(parse_polynomial("x1^-2", 1).is_err());
    }

    #[test]
    fn rejects_polynomial_divisor() {
        assert!(parse_polynomial("1/x1", 1).is_err());
        assert!(parse_polynomial("x1/0", 1).is_err());
    }

    #[test]
    fn reports_unbalanced_parenthesis() {
        let err = parse_polynomial("(x1 + 1", 1).unwrap_err();
        match err {
            Error::Parse { message, .. } => assert!(message.contains("')'")),
            other => panic!("expected parse error, got {other}"),
        }
    }

    /// The builtin corpus: parse, expand, evaluate at random points, and
    /// compare against direct numeric evaluation of the unexpanded form.
    #[test]
    #[allow(clippy::type_complexity)]
    fn round_trips_corpus_expressions() {
        let cases: [(&str, fn(f64, f64) -> f64); 4] = [
            ("(10*x1+20*x2-7)^2 + (20*x1+10*x2-5)^2", |x, y| {
                (10.0 * x + 20.0 * y - 7.0).powi(2) + (20.0 * x + 10.0 * y - 5.0).powi(2)
            }),
            ("26*(x1^2+x2^2) - 48*x1*x2", |x, y| {
                26.0 * (x * x + y * y) - 48.0 * x * y
            }),
            ("64*(x1^4*x2^2 + x1^2*x2^4) - 48*x1^2*x2^2 + 1", |x, y| {
                64.0 * (x.powi(4) * y.powi(2) + x.powi(2) * y.powi(4))
                    - 48.0 * x.powi(2) * y.powi(2)
                    + 1.0
            }),
            (
                "5^6/6*x1^6 - 5^4*1.05*x1^4 + 50*x1^2 + 25*x1*x2 + 25*x2^2",
                |x, y| {
                    15625.0 / 6.0 * x.powi(6) - 656.25 * x.powi(4)
                        + 50.0 * x * x
                        + 25.0 * x * y
                        + 25.0 * y * y
                },
            ),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (expr, direct) in cases {
            let p = parse_polynomial(expr, 2).unwrap();
            for _ in 0..100 {
                let x = rng.gen_range(-1.0..1.0);
                let y = rng.gen_range(-1.0..1.0);
                let expanded = p.eval(&[x, y]);
                let reference = direct(x, y);
                assert!(
                    (expanded - reference).abs() <= 1e-10 * (1.0 + reference.abs()),
                    "{expr} at ({x}, {y}): {expanded} vs {reference}"
                );
            }
        }
    }

    proptest! {
        /// Total on arbitrary input: a polynomial or a positioned error,
        /// never a panic.
        #[test]
        fn never_panics_on_fuzzed_input(s in "[x0-9+*/^()\\-. ]{0,40}") {
            let _ = parse_polynomial(&s, 3);
        }

        #[test]
        fn never_panics_on_arbitrary_unicode(s in ".{0,24}") {
            let _ = parse_polynomial(&s, 2);
        }
    }
}
