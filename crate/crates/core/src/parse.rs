//! Parser for identities and identity schemes.
//!
//! ```text
//! identity := sum ("≈" | "=") sum [";" "optional" var+]
//! sum      := word ("+" word)*
//! word     := factor (["*"] factor)*
//! factor   := (var | "(" word ")") ["^" int]
//! var      := letter [["_"] digits]
//! ```
//!
//! Whitespace is insignificant. `x1` and `x_1` are the same variable.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::term::{Identity, IdentityScheme, TermSum, Var, Word};

/// Largest exponent accepted in `x^k`.
pub const MAX_EXPONENT: usize = 64;

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn new(src: &str, line: usize) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.line, self.pos + 1, message))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok().or(Some(usize::MAX))
    }

    fn var(&mut self) -> Result<Var> {
        let Some(c) = self.peek() else {
            return self.err("expected a variable");
        };
        if !c.is_ascii_lowercase() {
            return self.err(format!("expected a variable, found `{c}`"));
        }
        self.pos += 1;
        let underscore = self.chars.get(self.pos) == Some(&'_');
        if underscore {
            self.pos += 1;
        }
        let sub = match self.digits() {
            Some(d) if d >= (1 << 24) - 1 => return self.err("subscript too large"),
            Some(d) => Some(d as u32),
            None if underscore => return self.err("`_` must be followed by digits"),
            None => None,
        };
        Ok(Var::new(c, sub))
    }

    fn factor(&mut self) -> Result<Vec<Var>> {
        let base = if self.eat('(') {
            let inner = self.word()?;
            if !self.eat(')') {
                return self.err("expected `)`");
            }
            inner.as_slice().to_vec()
        } else {
            vec![self.var()?]
        };
        if self.eat('^') {
            self.skip_ws();
            let k = match self.digits() {
                Some(k) => k,
                None => return self.err("`^` must be followed by an exponent"),
            };
            if k == 0 || k > MAX_EXPONENT {
                return self.err(format!("exponent must be in 1..={MAX_EXPONENT}"));
            }
            let mut out = Vec::with_capacity(base.len() * k);
            for _ in 0..k {
                out.extend_from_slice(&base);
            }
            Ok(out)
        } else {
            Ok(base)
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut letters = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_lowercase() || c == '(' => letters.extend(self.factor()?),
                Some('*') if !letters.is_empty() => {
                    self.pos += 1;
                    match self.peek() {
                        Some(c) if c.is_ascii_lowercase() || c == '(' => {}
                        _ => return self.err("`*` must be followed by a factor"),
                    }
                }
                _ => break,
            }
        }
        match Word::new(letters) {
            Some(w) => Ok(w),
            None => self.err("empty word"),
        }
    }

    fn sum(&mut self) -> Result<TermSum> {
        let mut words = vec![self.word()?];
        while self.eat('+') {
            words.push(self.word()?);
        }
        Ok(TermSum::new(words).expect("at least one word"))
    }

    fn side(&mut self) -> Result<TermSum> {
        match self.peek() {
            None | Some('≈') | Some('=') | Some(';') => self.err("empty side"),
            _ => self.sum(),
        }
    }

    fn scheme(&mut self) -> Result<IdentityScheme> {
        let lhs = self.side()?;
        if !(self.eat('≈') || self.eat('=')) {
            return match self.peek() {
                Some(c) => self.err(format!("expected `≈` or `=`, found `{c}`")),
                None => self.err("expected `≈` or `=`"),
            };
        }
        let rhs = self.side()?;
        let identity = Identity::new(lhs, rhs);
        let mut optional = BTreeSet::new();
        if self.eat(';') {
            self.skip_ws();
            let kw = "optional";
            let here: String = self.chars[self.pos..].iter().take(kw.len()).collect();
            if here != kw {
                return self.err("expected `optional` after `;`");
            }
            self.pos += kw.len();
            loop {
                self.eat(',');
                match self.peek() {
                    Some(c) if c.is_ascii_lowercase() => {
                        optional.insert(self.var()?);
                    }
                    _ => break,
                }
            }
            if optional.is_empty() {
                return self.err("`optional` needs at least one variable");
            }
        }
        if let Some(c) = self.peek() {
            return self.err(format!("unexpected `{c}`"));
        }
        let vars = identity.vars();
        if let Some(v) = optional.iter().find(|v| !vars.contains(v)) {
            return self.err(format!("optional variable {v} does not occur in the identity"));
        }
        IdentityScheme::new(identity, optional)
    }
}

/// Parses an identity, optionally followed by a scheme suffix.
pub fn parse_scheme(text: &str) -> Result<IdentityScheme> {
    parse_scheme_at(text, 1)
}

pub(crate) fn parse_scheme_at(text: &str, line: usize) -> Result<IdentityScheme> {
    let mut p = Parser::new(text, line);
    p.scheme()
}

/// Parses a plain identity; a scheme suffix is rejected.
pub fn parse_identity(text: &str) -> Result<Identity> {
    let s = parse_scheme(text)?;
    if !s.optional().is_empty() {
        return Err(Error::parse(1, 1, "expected an identity without optional variables"));
    }
    Ok(s.identity().clone())
}

pub fn parse_word(text: &str) -> Result<Word> {
    let mut p = Parser::new(text, 1);
    let w = p.word()?;
    if !p.at_end() {
        return p.err("trailing input after word");
    }
    Ok(w)
}

pub fn parse_sum(text: &str) -> Result<TermSum> {
    let mut p = Parser::new(text, 1);
    let s = p.side()?;
    if !p.at_end() {
        return p.err("trailing input after sum");
    }
    Ok(s)
}

/// One scheme per nonblank line; `#` starts a comment. Errors carry file line numbers.
pub fn parse_identity_file(text: &str) -> Result<Vec<IdentityScheme>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_scheme_at(line, i + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::var;

    #[test]
    fn powers_and_sums() {
        let id = parse_identity("x^2 ≈ x^2 + x*y").unwrap();
        assert_eq!(id.lhs, TermSum::letters(&["xx"]));
        assert_eq!(id.rhs, TermSum::letters(&["xx", "xy"]));
        assert_eq!(id.to_string(), "x^2 ≈ x^2 + xy");
    }

    #[test]
    fn trivial_identity() {
        let id = parse_identity("x = x").unwrap();
        assert!(id.is_trivial());
    }

    #[test]
    fn scheme_suffix() {
        let s = parse_scheme("x*y*z ≈ x*y*z + y ; optional x z").unwrap();
        assert_eq!(s.optional(), &BTreeSet::from([var('x'), var('z')]));
        assert_eq!(s.to_string(), "xyz ≈ xyz + y ; optional x z");
        assert!(parse_identity("x*y*z ≈ x*y*z + y ; optional x z").is_err());
    }

    #[test]
    fn subscripts() {
        let a = parse_identity("x_1 ≈ x_1 + x_2x_3x_4").unwrap();
        let b = parse_identity("x1 ≈ x1 + x2*x3*x4").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "x_1 ≈ x_1 + x_2x_3x_4");
        assert_eq!(parse_word("x_1^2x_2").unwrap().len(), 3);
    }

    #[test]
    fn grouped_powers() {
        assert_eq!(parse_word("(xy)^2").unwrap(), Word::letters("xyxy"));
        assert_eq!(parse_word("x^2y^2").unwrap(), Word::letters("xxyy"));
        assert_eq!(parse_word("x (y z)").unwrap(), Word::letters("xyz"));
    }

    #[test]
    fn errors_have_positions() {
        let cases = [
            ("x + + y ≈ x", 5),
            ("≈ x", 1),
            ("x ≈ ", 5),
            ("x ≈ x ; optional", 17),
            ("x ≈ x ; optional y", 19),
            ("x^0 ≈ x", 4),
            ("x_ ≈ x", 3),
            ("x ≈ x )", 7),
            ("xy", 3),
            ("X ≈ x", 1),
        ];
        for (text, col) in cases {
            match parse_scheme(text) {
                Err(Error::Parse { line: 1, column, .. }) => assert_eq!(column, col, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn identity_files() {
        let text = "# basis\nxy ≈ yx\n\nx^2 ≈ x^2 + xy # comment\n";
        assert_eq!(parse_identity_file(text).unwrap().len(), 2);
        match parse_identity_file("xy ≈ yx\nxy ≈\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
