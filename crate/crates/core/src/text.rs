//! Text grammar for polynomials and endomorphisms.
//!
//! Variables are `x1..xn` (`x` alone means `x1`), coefficients are integers
//! or rationals `a/b`, `^` takes a non-negative integer exponent, `*` is
//! optional between factors, and parenthesized subexpressions are allowed.
//! An endomorphism is a parenthesized comma list. Printing is canonical
//! (descending graded-lexicographic) and round-trips bit-exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::DdError;
use crate::poly::{Endomorphism, Monomial, Polynomial};
use crate::unipoly::IntPoly;

type Int = BigInt;
type Rat = BigRational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Int),
    Var(usize), // 1-based index
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
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

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<Option<(usize, Tok)>, DdError> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b',' => {
                self.pos += 1;
                Tok::Comma
            }
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                Tok::Num(s.parse().unwrap())
            }
            b'x' | b'X' => {
                let mut end = self.pos + 1;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let idx = if end == self.pos + 1 {
                    1
                } else {
                    std::str::from_utf8(&self.src[self.pos + 1..end])
                        .unwrap()
                        .parse()
                        .map_err(|_| DdError::Parse {
                            position: start,
                            message: "variable index too large".into(),
                        })?
                };
                if idx == 0 {
                    return Err(DdError::Parse {
                        position: start,
                        message: "variable indices start at 1".into(),
                    });
                }
                self.pos = end;
                Tok::Var(idx)
            }
            other => {
                return Err(DdError::Parse {
                    position: start,
                    message: format!("unexpected character '{}'", other as char),
                })
            }
        };
        Ok(Some((start, tok)))
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, DdError> {
    let mut lx = Lexer::new(src);
    let mut out = Vec::new();
    while let Some(t) = lx.next()? {
        out.push(t);
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    arity: usize,
    src_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.idx)
            .map(|(p, _)| *p)
            .unwrap_or(self.src_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn err(&self, msg: impl Into<String>) -> DdError {
        DdError::Parse {
            position: self.pos(),
            message: msg.into(),
        }
    }

    /// expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Polynomial, DdError> {
        let mut negate = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            negate = true;
        } else if matches!(self.peek(), Some(Tok::Plus)) {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// term := factor (('*')? factor)*
    fn term(&mut self) -> Result<Polynomial, DdError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                // implicit multiplication by adjacency
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// factor := base ('^' uint)?
    fn factor(&mut self) -> Result<Polynomial, DdError> {
        let base = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let e = match self.bump() {
                Some(Tok::Num(n)) => u32::try_from(n.clone())
                    .map_err(|_| self.err("exponent does not fit in 32 bits"))?,
                _ => return Err(self.err("expected integer exponent after '^'")),
            };
            return base
                .pow(e, &crate::config::Budget::unlimited())
                .map_err(|e| self.err(e.to_string()));
        }
        Ok(base)
    }

    /// base := number ('/' uint)? | var | '(' expr ')'
    fn base(&mut self) -> Result<Polynomial, DdError> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut value = Rat::from_integer(n);
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            value /= Rat::from_integer(d);
                        }
                        _ => return Err(self.err("expected non-zero denominator after '/'")),
                    }
                }
                Ok(Polynomial::constant(self.arity, value))
            }
            Some(Tok::Var(idx)) => {
                if idx > self.arity {
                    return Err(self.err(format!(
                        "variable x{idx} exceeds arity {}",
                        self.arity
                    )));
                }
                Ok(Polynomial::variable(self.arity, idx - 1))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(self.err("expected ')'")),
                }
            }
            Some(Tok::Minus) => {
                // unary minus inside a factor chain, e.g. `(-x1)`
                let f = self.factor()?;
                Ok(f.neg())
            }
            _ => Err(self.err("expected number, variable, or '('")),
        }
    }
}

fn max_var_index(toks: &[(usize, Tok)]) -> usize {
    toks.iter()
        .filter_map(|(_, t)| match t {
            Tok::Var(i) => Some(*i),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// Parse a polynomial with an explicit ambient arity.
pub fn parse_polynomial_with_arity(src: &str, arity: usize) -> Result<Polynomial, DdError> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        idx: 0,
        arity,
        src_len: src.len(),
    };
    let poly = p.expr()?;
    if p.idx != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(poly)
}

/// Parse a polynomial, inferring the arity from the highest variable index.
pub fn parse_polynomial(src: &str) -> Result<Polynomial, DdError> {
    let toks = tokenize(src)?;
    let arity = max_var_index(&toks).max(1);
    let mut p = Parser {
        toks,
        idx: 0,
        arity,
        src_len: src.len(),
    };
    let poly = p.expr()?;
    if p.idx != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(poly)
}

/// Parse an endomorphism `(p1, ..., pn)`; arity is the component count.
pub fn parse_endomorphism(src: &str) -> Result<Endomorphism, DdError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(DdError::Parse {
            position: 0,
            message: "empty input".into(),
        });
    }
    // split on top-level commas inside the outer parentheses
    if toks[0].1 != Tok::LParen || toks.last().unwrap().1 != Tok::RParen {
        return Err(DdError::Parse {
            position: toks[0].0,
            message: "endomorphism must be a parenthesized comma list".into(),
        });
    }
    let inner = &toks[1..toks.len() - 1];
    let mut pieces: Vec<Vec<(usize, Tok)>> = vec![Vec::new()];
    let mut depth = 0usize;
    for (p, t) in inner {
        match t {
            Tok::LParen => depth += 1,
            Tok::RParen => {
                if depth == 0 {
                    return Err(DdError::Parse {
                        position: *p,
                        message: "unbalanced ')'".into(),
                    });
                }
                depth -= 1;
            }
            Tok::Comma if depth == 0 => {
                pieces.push(Vec::new());
                continue;
            }
            _ => {}
        }
        pieces.last_mut().unwrap().push((*p, t.clone()));
    }
    if depth != 0 {
        return Err(DdError::Parse {
            position: src.len(),
            message: "unbalanced '('".into(),
        });
    }
    let arity = pieces.len();
    let max_idx = max_var_index(inner);
    if max_idx > arity {
        return Err(DdError::Parse {
            position: 0,
            message: format!("variable x{max_idx} exceeds arity {arity}"),
        });
    }
    let mut comps = Vec::with_capacity(arity);
    for piece in pieces {
        if piece.is_empty() {
            return Err(DdError::Parse {
                position: 0,
                message: "empty component".into(),
            });
        }
        let mut p = Parser {
            toks: piece,
            idx: 0,
            arity,
            src_len: src.len(),
        };
        let poly = p.expr()?;
        if p.idx != p.toks.len() {
            return Err(p.err("trailing input in component"));
        }
        comps.push(poly);
    }
    Endomorphism::new(comps)
}

fn format_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if e == 1 {
            parts.push(format!("x{}", i + 1));
        } else {
            parts.push(format!("x{}^{}", i + 1, e));
        }
    }
    parts.join("*")
}

fn format_coeff(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical polynomial printing: descending graded-lexicographic terms.
pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let terms: Vec<_> = p.terms().collect();
    for (k, (m, c)) in terms.into_iter().rev().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mono = format_monomial(m);
        if mono.is_empty() {
            out.push_str(&format_coeff(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format_coeff(&mag));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

/// Canonical endomorphism printing: `(p1, p2, ...)`.
pub fn format_endomorphism(f: &Endomorphism) -> String {
    let comps: Vec<String> = f.components().iter().map(format_polynomial).collect();
    format!("({})", comps.join(", "))
}

/// Convert an arity-1 polynomial with integer coefficients to a univariate
/// integer polynomial.
pub fn to_int_poly(p: &Polynomial) -> Result<IntPoly, DdError> {
    if p.arity() != 1 {
        return Err(DdError::structural("expected a univariate polynomial"));
    }
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![Int::zero(); deg + 1];
    for (m, c) in p.terms() {
        if !c.denom().is_one() {
            return Err(DdError::domain(
                "expected integer coefficients in the defining polynomial",
            ));
        }
        coeffs[m.exp(0) as usize] = c.numer().clone();
    }
    Ok(IntPoly::new(coeffs))
}

/// Parse a univariate integer polynomial such as `x^2 - 3*x + 1`.
pub fn parse_int_poly(src: &str) -> Result<IntPoly, DdError> {
    let p = parse_polynomial_with_arity(src, 1)?;
    to_int_poly(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_example() {
        let f = parse_endomorphism("(x3 + x1^2*x2, x2 + x1^3, x1)").unwrap();
        assert_eq!(f.arity(), 3);
        assert_eq!(f.degree(), Some(3));
    }

    #[test]
    fn roundtrips_are_bit_exact() {
        for s in [
            "(x3 + x1^2*x2, x2 + x1^3, x1)",
            "(x1^2 + x2, x1, x3 + (x3 + x4)^2, x4 - (x3 + x4)^2)",
            "(3/2*x1^2 - x2 + 5, x1)",
            "(x2, -x1)",
        ] {
            let f = parse_endomorphism(s).unwrap();
            let printed = format_endomorphism(&f);
            let g = parse_endomorphism(&printed).unwrap();
            assert_eq!(f, g, "roundtrip failed for {s} -> {printed}");
            assert_eq!(printed, format_endomorphism(&g));
        }
    }

    #[test]
    fn implicit_multiplication() {
        let a = parse_polynomial("2x1x2^3").unwrap();
        let b = parse_polynomial("2*x1*x2^3").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_error_carries_position() {
        let err = parse_endomorphism("(x1 + , x2)").unwrap_err();
        match err {
            DdError::Parse { position, .. } => assert!(position >= 6),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_variable_beyond_arity() {
        assert!(parse_endomorphism("(x1, x3)").is_err());
    }

    #[test]
    fn univariate_integer_polynomials() {
        let p = parse_int_poly("x^2 - 3*x + 1").unwrap();
        assert_eq!(p, IntPoly::from_i64(&[1, -3, 1]));
        assert!(parse_int_poly("x/2 + 1").is_err());
    }

    #[test]
    fn parenthesized_powers() {
        let f = parse_endomorphism("(x2 - x1^2, x3 + (x2 - x1^2)^2, x1)").unwrap();
        assert_eq!(f.degree(), Some(4));
    }
}
