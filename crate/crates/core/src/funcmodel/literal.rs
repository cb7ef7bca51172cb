//! Text literals for exact functions, used by the CLI and by reproducer
//! files:
//!
//! * piecewise: `pw[(0,1/2): -1; (1/2,1): x^2 - 1]`
//! * bounded variation: `bv[pieces: pw[(0,1): 1]; jumps: (0,0,0,1),(1,1,0,0)]`
//!
//! Jump tuples are `(t, left, point, right)`. Serialization round-trips
//! through the same grammar.

use super::bv::{BVFunction, JumpRecord};
use super::piecewise::PiecewisePoly;
use crate::error::{Error, Result};
use crate::expr;
use crate::scalar::{parse_rat, Rat};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: self.pos,
                message: format!("expected `{}`", token),
            })
        }
    }

    fn tries(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    /// Scans a rational up to one of the delimiter characters.
    fn rat_until(&mut self, delims: &[char]) -> Result<Rat> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest
            .find(|c: char| delims.contains(&c))
            .unwrap_or(rest.len());
        let text = rest[..end].trim();
        let r = parse_rat(text).ok_or_else(|| Error::Syntax {
            offset: self.pos,
            message: format!("malformed rational `{}`", text),
        })?;
        self.pos += end;
        Ok(r)
    }

    /// Scans expression text up to a top-level `;` or `]`.
    fn poly_text(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        for (i, c) in self.src[start..].char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ';' | ']' if depth == 0 => {
                    self.pos = start + i;
                    return self.src[start..start + i].trim();
                }
                _ => {}
            }
        }
        self.pos = self.src.len();
        self.src[start..].trim()
    }
}

fn parse_pw_body(cur: &mut Cursor) -> Result<PiecewisePoly> {
    cur.eat("pw")?;
    cur.eat("[")?;
    let mut breaks: Vec<Rat> = vec![];
    let mut pieces = vec![];
    loop {
        cur.eat("(")?;
        let lo = cur.rat_until(&[','])?;
        cur.eat(",")?;
        let hi = cur.rat_until(&[')'])?;
        cur.eat(")")?;
        cur.eat(":")?;
        let text = cur.poly_text();
        let poly = expr::parse(text)?.lower_to_poly()?;
        if let Some(last) = breaks.last() {
            if *last != lo {
                return Err(Error::InvalidPiecewise(format!(
                    "piece starting at {} does not continue from {}",
                    lo, last
                )));
            }
        } else {
            breaks.push(lo);
        }
        breaks.push(hi);
        pieces.push(poly);
        if cur.tries(";") {
            continue;
        }
        cur.eat("]")?;
        break;
    }
    PiecewisePoly::new(breaks, pieces)
}

pub fn parse_piecewise(text: &str) -> Result<PiecewisePoly> {
    let mut cur = Cursor::new(text);
    let pw = parse_pw_body(&mut cur)?;
    if !cur.at_end() {
        return Err(Error::Syntax {
            offset: cur.pos,
            message: "trailing input after piecewise literal".into(),
        });
    }
    Ok(pw)
}

pub fn parse_bv(text: &str) -> Result<BVFunction> {
    let mut cur = Cursor::new(text);
    cur.eat("bv")?;
    cur.eat("[")?;
    cur.eat("pieces")?;
    cur.eat(":")?;
    let base = parse_pw_body(&mut cur)?;
    let mut jumps = vec![];
    if cur.tries(";") {
        cur.eat("jumps")?;
        cur.eat(":")?;
        loop {
            cur.eat("(")?;
            let at = cur.rat_until(&[','])?;
            cur.eat(",")?;
            let left = cur.rat_until(&[','])?;
            cur.eat(",")?;
            let point = cur.rat_until(&[','])?;
            cur.eat(",")?;
            let right = cur.rat_until(&[')'])?;
            cur.eat(")")?;
            jumps.push(JumpRecord {
                at,
                left,
                point,
                right,
            });
            if cur.tries(",") {
                continue;
            }
            break;
        }
    }
    cur.eat("]")?;
    if !cur.at_end() {
        return Err(Error::Syntax {
            offset: cur.pos,
            message: "trailing input after bv literal".into(),
        });
    }
    BVFunction::new(base, jumps)
}

pub fn piecewise_literal(f: &PiecewisePoly) -> String {
    let mut out = String::from("pw[");
    for (i, piece) in f.pieces().iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        out.push_str(&format!(
            "({},{}): {}",
            f.breaks()[i],
            f.breaks()[i + 1],
            piece
        ));
    }
    out.push(']');
    out
}

pub fn bv_literal(u: &BVFunction) -> String {
    let mut out = format!("bv[pieces: {}", piecewise_literal(u.base()));
    if !u.jumps().is_empty() {
        out.push_str("; jumps: ");
        for (i, j) in u.jumps().iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!("({},{},{},{})", j.at, j.left, j.point, j.right));
        }
    }
    out.push(']');
    out
}
