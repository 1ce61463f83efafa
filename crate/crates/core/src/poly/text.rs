//! Text form of polynomials: `2z^3 + 3z^2 + w`, `(1/2+1/3i)zw`, `z^3 - 8iz - 5w`.
//!
//! The parser accepts sums of products of factors. A factor is a real literal
//! (`3`, `1/2`, `2.5e-3`), the imaginary unit `i`, an indeterminate `z` or `w`,
//! or a parenthesised sub-expression; `^n` raises a factor to a power and `*`
//! between factors is optional.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Scalar;

pub(crate) fn write_terms<'a, F: Scalar + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a F)>,
) -> fmt::Result {
    let mut first = true;
    for (mono, c) in terms {
        let coeff = if mono.is_empty() {
            c.format_coeff()
        } else if c.is_one() {
            String::new()
        } else if (-c.clone()).is_one() {
            "-".to_string()
        } else {
            c.format_coeff()
        };
        let text = format!("{coeff}{mono}");
        if first {
            write!(f, "{text}")?;
            first = false;
        } else if let Some(rest) = text.strip_prefix('-') {
            write!(f, " - {rest}")?;
        } else {
            write!(f, " + {text}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<F: Scalar> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms().rev().map(|(m, c)| {
            let mono = if m.degree() == 0 { String::new() } else { m.to_string() };
            (mono, c)
        });
        write_terms(f, terms)
    }
}

impl<F: Scalar> FromStr for Polynomial<F> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut parser = Parser { src: s, pos: 0 };
        let p = parser.expression().map_err(|reason| Error::Parse { input: s.to_string(), reason })?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(Error::Parse {
                input: s.to_string(),
                reason: format!("unexpected `{}` at offset {}", &s[parser.pos..], parser.pos),
            });
        }
        Ok(p)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type ParseResult<T> = std::result::Result<T, String>;

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expression<F: Scalar>(&mut self) -> ParseResult<Polynomial<F>> {
        self.skip_ws();
        let mut negate = self.sign();
        let mut acc = Polynomial::zero();
        loop {
            let t = self.product()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            self.skip_ws();
            match self.peek() {
                Some('+') | Some('-') => negate = self.sign(),
                _ => return Ok(acc),
            }
        }
    }

    fn sign(&mut self) -> bool {
        let mut negative = false;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    negative = !negative;
                    self.pos += 1;
                }
                _ => return negative,
            }
        }
    }

    fn product<F: Scalar>(&mut self) -> ParseResult<Polynomial<F>> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(c) if c.is_ascii_digit() || c == '.' || matches!(c, 'z' | 'w' | 'i' | '(') => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power<F: Scalar>(&mut self) -> ParseResult<Polynomial<F>> {
        let base = self.factor()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: u32 = self.src[start..self.pos]
                .parse()
                .map_err(|_| format!("expected exponent at offset {start}"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn factor<F: Scalar>(&mut self) -> ParseResult<Polynomial<F>> {
        self.skip_ws();
        match self.peek() {
            Some('z') => {
                self.pos += 1;
                Ok(Polynomial::monomial(Monomial::Z))
            }
            Some('w') => {
                self.pos += 1;
                Ok(Polynomial::monomial(Monomial::W))
            }
            Some('i') => {
                self.pos += 1;
                Ok(Polynomial::constant(F::imag_unit()))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expression()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(format!("expected `)` at offset {}", self.pos));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let lit = self.literal();
                F::parse_real(lit)
                    .map(Polynomial::constant)
                    .ok_or_else(|| format!("bad number `{lit}`"))
            }
            Some(c) => Err(format!("unexpected `{c}` at offset {}", self.pos)),
            None => Err("unexpected end of input".to_string()),
        }
    }

    /// `digits[.digits][e[+-]digits][/digits]`
    fn literal(&mut self) -> &str {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let digits = |p: &mut usize| {
            while *p < bytes.len() && bytes[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        let mut p = self.pos;
        digits(&mut p);
        if p < bytes.len() && bytes[p] == b'.' {
            p += 1;
            digits(&mut p);
        }
        if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
            let mut q = p + 1;
            if q < bytes.len() && (bytes[q] == b'+' || bytes[q] == b'-') {
                q += 1;
            }
            if q < bytes.len() && bytes[q].is_ascii_digit() {
                digits(&mut q);
                p = q;
            }
        }
        if p + 1 < bytes.len() && bytes[p] == b'/' && bytes[p + 1].is_ascii_digit() {
            p += 1;
            digits(&mut p);
        }
        self.pos = p;
        &self.src[start..p]
    }
}

#[cfg(test)]
mod tests {
    use crate::poly::{ApproxPoly, ExactPoly, Monomial};
    use crate::scalar::{Complex64, GaussianRational, Scalar};
    use proptest::prelude::*;

    use crate::scalar::rational as q;

    #[test]
    fn parses_mixed_coefficient_input() {
        let p: ExactPoly = "(1/2+1/3i)zw".parse().unwrap();
        assert_eq!(p.coeff(&Monomial::new(1, 1)), GaussianRational::new(q(1, 2), q(1, 3)));
        let q7: ExactPoly = "z^3 - 8iz - 5w".parse().unwrap();
        assert_eq!(q7.coeff(&Monomial::Z), GaussianRational::new(q(0, 1), q(-8, 1)));
        assert_eq!(q7.coeff(&Monomial::W), GaussianRational::from_i64(-5));
        let p: ExactPoly = "z^4 + 4/3z^3 + 2.5e-1 w".parse().unwrap();
        assert_eq!(p.coeff(&Monomial::new(0, 3)), GaussianRational::new(q(4, 3), q(0, 1)));
        assert_eq!(p.coeff(&Monomial::W), GaussianRational::new(q(1, 4), q(0, 1)));
        let p: ExactPoly = "i(z - iw)(wz - 5)".parse().unwrap();
        assert_eq!(p, "iz^2w + zw^2 - 5iz - 5w".parse().unwrap());
        let p: ExactPoly = "-2*z*w^2 + -3".parse().unwrap();
        assert_eq!(p.to_string(), "-2zw^2 - 3");
    }

    #[test]
    fn rejects_garbage() {
        assert!("z^".parse::<ExactPoly>().is_err());
        assert!("3x".parse::<ExactPoly>().is_err());
        assert!("(z + 1".parse::<ExactPoly>().is_err());
        assert!("".parse::<ExactPoly>().is_err());
        assert!("1/0".parse::<ExactPoly>().is_err());
    }

    #[test]
    fn formats_in_descending_order() {
        let p: ExactPoly = "w + 3z^2 + 2z^3".parse().unwrap();
        assert_eq!(p.to_string(), "2z^3 + 3z^2 + w");
        let p: ExactPoly = "iz^2w + zw^2 - 5iz - 5w".parse().unwrap();
        assert_eq!(p.to_string(), "iz^2w + zw^2 - 5iz - 5w");
        let p: ExactPoly = "(1/2-1/3i)zw - 1/2".parse().unwrap();
        assert_eq!(p.to_string(), "(1/2-1/3i)zw - 1/2");
        assert_eq!(ExactPoly::zero().to_string(), "0");
        assert_eq!(ExactPoly::one().to_string(), "1");
    }

    fn gauss() -> impl Strategy<Value = GaussianRational> {
        (-9i64..10, 1i64..5, -9i64..10, 1i64..5).prop_map(|(a, b, c, d)| GaussianRational::new(q(a, b), q(c, d)))
    }

    proptest! {
        #[test]
        fn text_round_trip_exact(ts in proptest::collection::vec(((0u32..4, 0u32..4), gauss()), 0..6)) {
            let p = ExactPoly::from_terms(ts.into_iter().map(|((w, z), c)| (Monomial::new(w, z), c)));
            let back: ExactPoly = p.to_string().parse().unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn text_round_trip_approx(ts in proptest::collection::vec(((0u32..4, 0u32..4), -1e3f64..1e3, -1e3f64..1e3), 0..6)) {
            let p = ApproxPoly::from_terms(ts.into_iter().map(|((w, z), re, im)| (Monomial::new(w, z), Complex64::new(re, im))));
            let back: ApproxPoly = p.to_string().parse().unwrap();
            prop_assert_eq!(back, p);
        }
    }

    #[test]
    fn approx_coefficients_print_17_digits() {
        let p = ApproxPoly::constant(Complex64::new(0.1, 0.0));
        assert_eq!(p.to_string(), "1.0000000000000001e-1");
        let back: ApproxPoly = p.to_string().parse().unwrap();
        assert_eq!(back.coeff(&Monomial::ONE), Complex64::new(0.1, 0.0));
    }
}
