//! Tiny recursive-descent reader for univariate expressions such as
//! `2*x^3 - (u+1)*x + 5`.

use crate::error::{Error, Result};

/// One parsed summand: sign, optional coefficient text (with its byte offset)
/// and exponent of the variable.
#[derive(Debug, Clone)]
pub(crate) struct Term<'a> {
    pub negative: bool,
    pub coeff: Option<(&'a str, usize)>,
    pub exp: u64,
}

pub(crate) fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn abs(&self) -> usize {
        self.base + self.pos
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<(&'a str, usize)> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| (&self.s[start..self.pos], self.base + start))
    }

    fn group(&mut self) -> Result<Option<(&'a str, usize)>> {
        self.skip_ws();
        if self.peek() != Some('(') {
            return Ok(None);
        }
        let open = self.pos;
        let mut depth = 0usize;
        for (i, c) in self.s[open..].char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        let inner = &self.s[open + 1..open + i];
                        self.pos = open + i + 1;
                        return Ok(Some((inner, self.base + open + 1)));
                    }
                }
                _ => {}
            }
        }
        Err(err(self.base + open, "unbalanced parenthesis"))
    }
}

/// Splits `s` into signed terms in the variable `var`.
///
/// `base` is added to every reported position so nested parses report offsets
/// relative to the outermost input.
pub(crate) fn terms(s: &str, var: char, base: usize) -> Result<Vec<Term<'_>>> {
    let mut cur = Cursor { s, pos: 0, base };
    let mut out = Vec::new();
    cur.skip_ws();
    if cur.pos == s.len() {
        return Err(err(base, "empty expression"));
    }
    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.pos == s.len() {
            break;
        }
        let mut negative = false;
        if cur.eat('+') {
        } else if cur.eat('-') {
            negative = true;
        } else if !first {
            return Err(err(cur.abs(), "expected '+' or '-'"));
        }
        first = false;
        let coeff = match cur.group()? {
            Some(g) => Some(g),
            None => cur.digits(),
        };
        let has_star = coeff.is_some() && cur.eat('*');
        cur.skip_ws();
        let exp = if cur.peek() == Some(var) {
            cur.pos += var.len_utf8();
            if cur.eat('^') {
                let (d, at) = cur
                    .digits()
                    .ok_or_else(|| err(cur.abs(), "expected exponent"))?;
                d.parse::<u64>()
                    .map_err(|_| err(at, "exponent out of range"))?
            } else {
                1
            }
        } else {
            if has_star {
                return Err(err(cur.abs(), format!("expected '{var}' after '*'")));
            }
            if coeff.is_none() {
                return Err(err(cur.abs(), "expected a term"));
            }
            0
        };
        out.push(Term {
            negative,
            coeff,
            exp,
        });
    }
    Ok(out)
}

/// Parses a signed decimal integer coefficient reduced modulo `p`.
pub(crate) fn int_mod(text: &str, at: usize, p: u64) -> Result<u64> {
    let t = text.trim();
    let digits = t.strip_prefix('-').unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(at, format!("expected an integer, found '{t}'")));
    }
    let mut r: u128 = 0;
    for b in digits.bytes() {
        r = (r * 10 + (b - b'0') as u128) % p as u128;
    }
    let r = r as u64;
    Ok(if t.starts_with('-') && r != 0 { p - r } else { r })
}
