//! Recursive-descent parser for the expression grammar.
//!
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' INT)?
//! base   := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')' | '-' factor
//! NUMBER := decimal or adjacent rational 'p/q'
//!
//! Exponentiation binds tighter than unary minus, so "-x^2" is -(x^2).
//! A '/' with digits immediately on both sides lexes as one rational
//! literal; spaced division ("1 / 3") stays a Div node.

use super::Expr;
use crate::error::{Error, Result};
use crate::scalar::{parse_rat, Rat};
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Var,
    Func(&'static str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

const FUNCS: [&str; 6] = ["sin", "cos", "exp", "log", "abs", "sqrt"];

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(mut self) -> Result<Vec<(usize, Tok)>> {
        let mut out = vec![];
        while self.pos < self.src.len() {
            let start = self.pos;
            let c = self.src[self.pos];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'+' => {
                    self.pos += 1;
                    out.push((start, Tok::Plus));
                }
                b'-' => {
                    self.pos += 1;
                    out.push((start, Tok::Minus));
                }
                b'*' => {
                    self.pos += 1;
                    out.push((start, Tok::Star));
                }
                b'/' => {
                    self.pos += 1;
                    out.push((start, Tok::Slash));
                }
                b'^' => {
                    self.pos += 1;
                    out.push((start, Tok::Caret));
                }
                b'(' => {
                    self.pos += 1;
                    out.push((start, Tok::LParen));
                }
                b')' => {
                    self.pos += 1;
                    out.push((start, Tok::RParen));
                }
                b'0'..=b'9' | b'.' => {
                    out.push((start, self.number(start)?));
                }
                b'a'..=b'z' | b'A'..=b'Z' => {
                    let mut end = self.pos;
                    while end < self.src.len() && self.src[end].is_ascii_alphabetic() {
                        end += 1;
                    }
                    let word = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                    self.pos = end;
                    if word == "x" {
                        out.push((start, Tok::Var));
                    } else if let Some(f) = FUNCS.iter().find(|f| **f == word) {
                        out.push((start, Tok::Func(f)));
                    } else {
                        return Err(Error::UnknownIdentifier {
                            offset: start,
                            name: word.to_string(),
                        });
                    }
                }
                _ => {
                    return Err(Error::Syntax {
                        offset: start,
                        message: format!("unexpected character `{}`", c as char),
                    });
                }
            }
        }
        Ok(out)
    }

    fn number(&mut self, start: usize) -> Result<Tok> {
        let digits = |s: &mut Self| {
            while s.pos < s.src.len() && s.src[s.pos].is_ascii_digit() {
                s.pos += 1;
            }
        };
        digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            digits(self);
        } else if self.pos + 1 < self.src.len()
            && self.src[self.pos] == b'/'
            && self.src[self.pos + 1].is_ascii_digit()
        {
            // adjacent p/q rational literal
            self.pos += 1;
            digits(self);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match parse_rat(text) {
            Some(r) => Ok(Tok::Num(r)),
            None => Err(Error::Syntax {
                offset: start,
                message: format!("malformed number `{}`", text),
            }),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: self.offset(),
                message: format!("expected {}", what),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let off = self.offset();
            let neg = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.bump() {
                Some(Tok::Num(r)) if r.is_integer() => {
                    let n: BigInt = r.to_integer();
                    let n: i32 = n.try_into().map_err(|_| Error::Syntax {
                        offset: off,
                        message: "exponent too large".into(),
                    })?;
                    Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
                }
                _ => Err(Error::NonIntegerExponent { offset: off }),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(r)) => Ok(Expr::Const(r)),
            Some(Tok::Var) => Ok(Expr::Var),
            Some(Tok::Minus) => {
                // unary minus of a whole factor, so pow binds tighter
                let inner = self.factor()?;
                Ok(Expr::Neg(Box::new(inner)))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Func(name)) => {
                self.expect(Tok::LParen, "`(` after function name")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                let arg = Box::new(inner);
                Ok(match name {
                    "sin" => Expr::Sin(arg),
                    "cos" => Expr::Cos(arg),
                    "exp" => Expr::Exp(arg),
                    "log" => Expr::Log(arg),
                    "abs" => Expr::Abs(arg),
                    "sqrt" => Expr::Sqrt(arg),
                    _ => unreachable!(),
                })
            }
            _ => Err(Error::Syntax {
                offset: off,
                message: "expected a number, `x`, function call, `(` or `-`".into(),
            }),
        }
    }
}

/// Parses expression text into its unique tree under the grammar.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = Lexer {
        src: text.as_bytes(),
        pos: 0,
    }
    .tokens()?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Syntax {
            offset: p.offset(),
            message: "trailing input".into(),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, ratio};

    #[test]
    fn grammar_shapes() {
        assert_eq!(parse("x").unwrap(), Expr::Var);
        let e = parse("x^2 - sin(x)").unwrap();
        assert_eq!(
            e,
            Expr::Sub(
                Box::new(Expr::Pow(Box::new(Expr::Var), 2)),
                Box::new(Expr::Sin(Box::new(Expr::Var))),
            )
        );
    }

    #[test]
    fn syntax_error_offset() {
        match parse("2*x + + 1") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("expected syntax error, got {:?}", other),
        }
    }

    #[test]
    fn unknown_identifier() {
        assert!(matches!(
            parse("2*y"),
            Err(Error::UnknownIdentifier { offset: 2, .. })
        ));
    }

    #[test]
    fn non_integer_exponent_rejected() {
        assert!(matches!(
            parse("x^1.5"),
            Err(Error::NonIntegerExponent { .. })
        ));
        assert!(matches!(parse("x^x"), Err(Error::NonIntegerExponent { .. })));
        assert_eq!(parse("x^-2").unwrap(), Expr::Pow(Box::new(Expr::Var), -2));
    }

    #[test]
    fn rational_literals_vs_division() {
        assert_eq!(parse("2/3").unwrap(), Expr::Const(ratio(2, 3)));
        assert_eq!(
            parse("2 / 3").unwrap(),
            Expr::Div(
                Box::new(Expr::Const(rat_int(2))),
                Box::new(Expr::Const(rat_int(3))),
            )
        );
        assert_eq!(parse("0.25").unwrap(), Expr::Const(ratio(1, 4)));
    }

    #[test]
    fn precedence_and_associativity() {
        // pow > neg: -x^2 is -(x^2)
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var), 2)))
        );
        // left-assoc subtraction
        assert_eq!(
            parse("1 - 2 - 3").unwrap(),
            Expr::Sub(
                Box::new(Expr::Sub(
                    Box::new(Expr::Const(rat_int(1))),
                    Box::new(Expr::Const(rat_int(2))),
                )),
                Box::new(Expr::Const(rat_int(3))),
            )
        );
        // mul binds over add
        assert_eq!(
            parse("1 + 2*x").unwrap(),
            Expr::Add(
                Box::new(Expr::Const(rat_int(1))),
                Box::new(Expr::Mul(
                    Box::new(Expr::Const(rat_int(2))),
                    Box::new(Expr::Var),
                )),
            )
        );
    }

    #[test]
    fn display_round_trips_structurally() {
        for src in [
            "x",
            "x^2 - sin(x)",
            "2*x + 1",
            "(x + 1) * (x - 1)",
            "1 / (x + 2)",
            "-x^2",
            "exp(-(x^2))",
            "1/3 * x^4 - 2/5",
            "sqrt(x) / (1 + cos(x))",
            "abs(x - 1/2)",
            "2 / 3",
            "x^-3",
        ] {
            let e = parse(src).unwrap();
            let printed = format!("{}", e);
            let back = parse(&printed).unwrap();
            assert_eq!(e, back, "source `{}` printed `{}`", src, printed);
        }
    }
}
