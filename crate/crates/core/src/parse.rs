//! Parser and canonical printer for coefficient expressions.
//!
//! Grammar (EBNF, whitespace free between tokens):
//!
//! ```text
//! expr     = term , { ("+" | "-") , term } ;
//! term     = signed , { ("*" | "/") , signed } ;
//! signed   = { "-" | "+" } , power ;
//! power    = atom , [ "^" , exponent ] ;
//! exponent = [ "-" ] , digits ;
//! atom     = digits | "i" | name | "(" , expr , ")" ;
//! name     = letter , { letter | digit | "_" } ;   (* not "i"; must be declared *)
//! ```
//!
//! The printer emits the reduced form as `num` or `(num)/(den)` with terms in
//! descending lex order; its output always re-parses to the same value.

use crate::expr::{CoeffError, CoeffExpr, Params};
use crate::gauss::GaussRat;
use crate::poly::Poly;
use num::{BigInt, BigRational, One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Imag,
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token and its starting byte offset; `None` at end of input.
    fn next(&mut self) -> Result<Option<(Tok, usize)>, CoeffError> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                return Ok(Some((Tok::Int(text.parse().unwrap()), start)));
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                let tok = if text == "i" { Tok::Imag } else { Tok::Name(text) };
                return Ok(Some((tok, start)));
            }
            other => {
                return Err(CoeffError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", other as char),
                })
            }
        };
        self.pos += 1;
        Ok(Some((tok, start)))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
    params: Params,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.idx)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<CoeffExpr, CoeffError> {
        let mut acc = self.term()?;
        while let Some((tok, _)) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<CoeffExpr, CoeffError> {
        let mut acc = self.signed()?;
        while let Some((tok, pos)) = self.peek().cloned() {
            match tok {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.signed()?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.signed()?;
                    acc = acc.div(&rhs).map_err(|e| match e {
                        CoeffError::DivisionByZeroPolynomial => CoeffError::Syntax {
                            pos,
                            msg: "division by zero".into(),
                        },
                        other => other,
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn signed(&mut self) -> Result<CoeffExpr, CoeffError> {
        let mut negate = false;
        while let Some((tok, _)) = self.peek() {
            match tok {
                Tok::Minus => {
                    negate = !negate;
                    self.bump();
                }
                Tok::Plus => {
                    self.bump();
                }
                _ => break,
            }
        }
        let p = self.power()?;
        Ok(if negate { -&p } else { p })
    }

    fn power(&mut self) -> Result<CoeffExpr, CoeffError> {
        let base = self.atom()?;
        if let Some((Tok::Caret, caret_pos)) = self.peek().cloned() {
            self.bump();
            let mut neg = false;
            if let Some((Tok::Minus, _)) = self.peek() {
                neg = true;
                self.bump();
            }
            match self.bump() {
                Some((Tok::Int(n), pos)) => {
                    let exp: i64 = n.try_into().map_err(|_| CoeffError::Syntax {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                    let exp = if neg { -exp } else { exp };
                    base.pow(exp).map_err(|_| CoeffError::Syntax {
                        pos: caret_pos,
                        msg: "zero raised to a negative power".into(),
                    })
                }
                other => Err(CoeffError::Syntax {
                    pos: other.map(|(_, p)| p).unwrap_or(self.end),
                    msg: "expected integer exponent after `^`".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<CoeffExpr, CoeffError> {
        match self.bump() {
            Some((Tok::Int(n), _)) => Ok(CoeffExpr::constant(
                self.params.clone(),
                GaussRat::new(BigRational::from_integer(n), BigRational::zero()),
            )),
            Some((Tok::Imag, _)) => Ok(CoeffExpr::constant(self.params.clone(), GaussRat::i())),
            Some((Tok::Name(name), pos)) => CoeffExpr::parameter(self.params.clone(), &name)
                .map_err(|_| CoeffError::UndeclaredParameter { name, pos }),
            Some((Tok::LParen, open_pos)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    _ => Err(CoeffError::Syntax {
                        pos: open_pos,
                        msg: "unclosed parenthesis".into(),
                    }),
                }
            }
            Some((tok, pos)) => Err(CoeffError::Syntax {
                pos,
                msg: format!("unexpected token {tok:?}"),
            }),
            None => Err(CoeffError::Syntax { pos: self.end, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parses `text` into a canonical reduced expression over `params`.
pub fn parse_expr(text: &str, params: &Params) -> Result<CoeffExpr, CoeffError> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    while let Some(t) = lexer.next()? {
        toks.push(t);
    }
    let end = text.len();
    let mut parser = Parser { toks, idx: 0, end, params: params.clone() };
    let e = parser.expr()?;
    if let Some((tok, pos)) = parser.peek() {
        return Err(CoeffError::Syntax {
            pos: *pos,
            msg: format!("trailing input starting at token {tok:?}"),
        });
    }
    Ok(e)
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Coefficient inside a product: parenthesized when it is a two-part sum.
fn coeff_factor(c: &GaussRat) -> String {
    if c.is_real() {
        fmt_rational(c.re())
    } else if c.re().is_zero() {
        if c.im().is_one() {
            "i".into()
        } else if (-c.im()).is_one() {
            "-i".into()
        } else {
            format!("{}*i", fmt_rational(c.im()))
        }
    } else {
        format!("({})", c)
    }
}

/// `true` when the printed form of `c` begins with a minus sign that can be
/// absorbed into a `-` separator.
fn starts_negative(c: &GaussRat) -> (bool, GaussRat) {
    let leadneg = if c.re().is_zero() { c.im().is_negative() } else { c.re().is_negative() };
    if leadneg {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

/// Canonical polynomial printer over explicit variable names.
pub fn print_poly_public(p: &Poly, names: &[String]) -> String {
    print_poly(p, names)
}

pub(crate) fn print_poly(p: &Poly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    // Descending lex order, leading term first.
    for (k, (mono, coeff)) in p.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let (neg, mag) = starts_negative(coeff);
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        let is_const_mono = mono.iter().all(|&e| e == 0);
        if !mag.is_one() || is_const_mono {
            factors.push(coeff_factor(&mag));
        }
        for (v, &e) in mono.iter().enumerate() {
            if e == 1 {
                factors.push(names[v].clone());
            } else if e > 1 {
                factors.push(format!("{}^{}", names[v], e));
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Canonical printed form, stable under re-parsing.
pub fn print_expr(e: &CoeffExpr) -> String {
    let names = e.params().names();
    let num = print_poly(e.numerator(), names);
    if e.denominator().is_constant() {
        num
    } else {
        format!("({})/({})", num, print_poly(e.denominator(), names))
    }
}
