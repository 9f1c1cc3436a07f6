//! The polynomial expression grammar used in definition files.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary | '/' INT)*
//! unary := '-' unary | power
//! power := atom ('^' INT | '^' FRAME)*
//! atom  := INT | IDENT | '(' expr ')'
//! ```
//!
//! `*` and `^ FRAME` are the wedge product once frame names are in scope, so
//! rendered multivectors such as `(x + 1)*e1^e2` parse back.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebroid::Multivector;
use crate::error::{Error, Result};
use crate::exactcore::{Poly, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        column,
        message: message.into(),
    }
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Int(text.parse().expect("digits")), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(syntax(col, format!("unexpected character '{c}'"))),
        };
        out.push((t, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    coords: &'a [String],
    frame: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn constant(&self, c: Rational) -> Multivector {
        Multivector::scalar(Poly::constant(self.coords.len(), c), self.frame.len())
    }

    fn expr(&mut self) -> Result<Multivector> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc += &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Multivector> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.wedge(&self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    let col = self.column();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => {
                            acc = acc.scale(&Rational::new(1.into(), d));
                        }
                        Tok::Int(_) => return Err(syntax(col, "division by zero")),
                        _ => return Err(syntax(col, "expected an integer denominator")),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Multivector> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Multivector> {
        let mut acc = self.atom()?;
        while *self.peek() == Tok::Caret {
            let caret = self.column();
            self.bump();
            let col = self.column();
            match self.bump() {
                Tok::Int(e) => {
                    if !acc.is_zero() && acc.homogeneous_degree() != Some(0) {
                        return Err(syntax(caret, "power of a non-function"));
                    }
                    let e = e
                        .to_u32()
                        .ok_or_else(|| syntax(col, "exponent too large"))?;
                    let f = acc.coeff(&[]).pow(e);
                    acc = Multivector::scalar(f, self.frame.len());
                }
                Tok::Ident(name) => match self.frame.iter().position(|f| *f == name) {
                    Some(i) => {
                        let g = Multivector::generator(self.coords.len(), self.frame.len(), i);
                        acc = acc.wedge(&g);
                    }
                    None => {
                        return Err(syntax(col, "expected an exponent or a frame name"));
                    }
                },
                _ => return Err(syntax(col, "expected a nonnegative integer exponent")),
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Multivector> {
        let col = self.column();
        match self.bump() {
            Tok::Int(v) => Ok(self.constant(Rational::from_integer(v))),
            Tok::Ident(name) => {
                if let Some(a) = self.coords.iter().position(|c| *c == name) {
                    Ok(Multivector::scalar(
                        Poly::var(self.coords.len(), a),
                        self.frame.len(),
                    ))
                } else if let Some(i) = self.frame.iter().position(|f| *f == name) {
                    Ok(Multivector::generator(
                        self.coords.len(),
                        self.frame.len(),
                        i,
                    ))
                } else {
                    Err(Error::UnknownIdentifier(name))
                }
            }
            Tok::LParen => {
                let v = self.expr()?;
                let close = self.column();
                if self.bump() != Tok::RParen {
                    return Err(syntax(close, "expected ')'"));
                }
                Ok(v)
            }
            Tok::End => Err(syntax(col, "unexpected end of input")),
            t => Err(syntax(col, format!("unexpected {t:?}"))),
        }
    }
}

/// Parse a multivector expression over the given coordinates and frame.
pub fn parse_multivector(s: &str, coords: &[String], frame: &[String]) -> Result<Multivector> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
        coords,
        frame,
    };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.column(), "unexpected trailing input"));
    }
    Ok(v)
}

/// Parse a polynomial in the given coordinates.
pub fn parse_expression(s: &str, coords: &[String]) -> Result<Poly> {
    Ok(parse_multivector(s, coords, &[])?.coeff(&[]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{default_names, qf, Monomial};
    use crate::random;
    use proptest::prelude::*;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn grammar_examples() {
        let p = parse_expression("3/2*x^2 - y", &xy()).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&Monomial(vec![2, 0])), qf(3, 2));
        assert_eq!(p.coeff(&Monomial(vec![0, 1])), qf(-1, 1));

        let z = parse_expression("0", &xy()).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);

        assert_eq!(
            parse_expression(" -(x + y)^2 ", &xy()).unwrap(),
            -(Poly::var(2, 0) + Poly::var(2, 1)).pow(2)
        );
    }

    #[test]
    fn grammar_errors() {
        assert!(matches!(
            parse_expression("x^(-1)", &xy()),
            Err(Error::Syntax { column: 3, .. })
        ));
        assert!(matches!(
            parse_expression("x + z", &xy()),
            Err(Error::UnknownIdentifier(n)) if n == "z"
        ));
        for bad in ["", "x +", "(x", "x / 0", "x / y", "2 $ 3", "x y"] {
            assert!(
                matches!(parse_expression(bad, &xy()), Err(Error::Syntax { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn multivector_expressions() {
        let frame: Vec<String> = vec!["e1".into(), "e2".into()];
        let coords = vec!["x".to_string()];
        let w = parse_multivector("(x + 1)*e1^e2 - e2*e1", &coords, &frame).unwrap();
        let e12 = Multivector::blade(1, 2, &[0, 1], Poly::one(1));
        assert_eq!(w, e12.mul_poly(&(Poly::var(1, 0) + Poly::from_int(1, 2))));
        assert!(matches!(
            parse_multivector("e1^2", &coords, &frame),
            Err(Error::Syntax { .. })
        ));
        assert!(parse_multivector("e1^e1", &coords, &frame)
            .unwrap()
            .is_zero());
    }

    proptest! {
        #[test]
        fn render_round_trip(seed in any::<u64>(), deg in 0u32..4) {
            let mut rng = random::rng(seed);
            let p = random::poly(&mut rng, 2, deg);
            let names = default_names(2);
            prop_assert_eq!(parse_expression(&p.render(&names), &names).unwrap(), p);
        }

        #[test]
        fn multivector_round_trip(seed in any::<u64>(), q in 0usize..3) {
            let mut rng = random::rng(seed);
            let p = crate::algebroid::fixtures::ati();
            let w = random::multivector(&mut rng, &p, q, 2);
            let back = parse_multivector(&p.render(&w), p.coords(), p.frame()).unwrap();
            prop_assert_eq!(back, w);
        }
    }
}
