//! The `.dgl` text format.
//!
//! ```text
//! # comment
//! gen a 3 filt 1
//! gen a2 7 filt 2
//! d a = 0
//! d a2 = [a,a]
//! ```
//!
//! Expressions are sums of terms `[p or p/q] factor`, a factor being a
//! generator name or a bracket `[expr,expr]`; `0` is the zero element.
//! Generator names are identifiers, optionally followed by a parenthesised
//! suffix such as `s(a*b')`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dgl::DglPresentation;
use crate::error::{Error, Result};
use crate::lie::{Alphabet, BracketTree, Generator, LieElement};
use crate::linalg::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub col: usize,
}

/// A parsed presentation with source positions of declarations.
#[derive(Clone, Debug)]
pub struct DglFile {
    pub presentation: DglPresentation,
    pub declarations: BTreeMap<String, Location>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    /// Column of the next non-blank character.
    fn next_col(&mut self) -> usize {
        self.skip_ws();
        self.col()
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, self.col(), msg)
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

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => Err(self.err(format!("expected `{c}`, found `{found}`"))),
                None => Err(self.err(format!("expected `{c}`, found end of line"))),
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == '_' => self.pos += 1,
            Some(c) => return Err(self.err(format!("expected a generator name, found `{c}`"))),
            None => return Err(self.err("expected a generator name, found end of line")),
        }
        while let Some(&c) = self.chars.get(self.pos) {
            if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.chars.get(self.pos) == Some(&'(') {
            let open = self.pos;
            let mut depth = 0usize;
            loop {
                match self.chars.get(self.pos) {
                    Some('(') => depth += 1,
                    Some(')') => {
                        depth -= 1;
                        if depth == 0 {
                            self.pos += 1;
                            break;
                        }
                    }
                    Some(c) if c.is_whitespace() => {
                        return Err(self.err("whitespace inside a generator name"));
                    }
                    Some(_) => {}
                    None => return Err(perr(self.line, open + 1, "unbalanced `(` in generator name")),
                }
                self.pos += 1;
            }
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn unsigned(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let n = self.unsigned()?;
        if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            let col = self.col();
            let d = self.unsigned()?;
            if d.is_zero() {
                return Err(perr(self.line, col, "zero denominator"));
            }
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    fn rest(&self) -> String {
        self.chars[self.pos..].iter().collect()
    }
}

type Terms = Vec<(BracketTree, Rational)>;

/// Expression parser over a fixed alphabet.
struct ExprParser<'a> {
    cur: Cursor,
    alphabet: &'a Alphabet,
}

impl ExprParser<'_> {
    fn expr(&mut self) -> Result<Terms> {
        let mut out = Terms::new();
        let mut first = true;
        loop {
            let sign = if self.cur.eat('-') {
                -Rational::one()
            } else if self.cur.eat('+') || first {
                Rational::one()
            } else {
                break;
            };
            first = false;
            let coeff = if self.cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                let col = self.cur.next_col();
                let r = self.cur.rational()?;
                match self.cur.peek() {
                    Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '[' => r,
                    _ if r.is_zero() => {
                        // a bare `0`
                        continue;
                    }
                    _ => {
                        return Err(perr(
                            self.cur.line,
                            col,
                            "a coefficient must be followed by a generator or a bracket",
                        ))
                    }
                }
            } else {
                Rational::one()
            };
            let f = self.factor()?;
            let c = sign * coeff;
            out.extend(f.into_iter().map(|(t, x)| (t, x * &c)));
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<Terms> {
        if self.cur.eat('[') {
            let l = self.expr()?;
            self.cur.expect(',')?;
            let r = self.expr()?;
            self.cur.expect(']')?;
            let mut out = Terms::new();
            for (tl, cl) in &l {
                for (tr, cr) in &r {
                    out.push((BracketTree::node(tl.clone(), tr.clone()), cl * cr));
                }
            }
            Ok(out)
        } else {
            let col = self.cur.next_col();
            let name = self.cur.name()?;
            let id = self
                .alphabet
                .id(&name)
                .ok_or_else(|| perr(self.cur.line, col, format!("unknown generator `{name}`")))?;
            Ok(vec![(BracketTree::Leaf(id), Rational::one())])
        }
    }
}

/// Parses an expression on one line; `expected` fixes the degree.
fn parse_expr_line(
    alphabet: &Alphabet,
    src: &str,
    line: usize,
    col_offset: usize,
    expected: Option<u32>,
) -> Result<LieElement> {
    let mut p = ExprParser {
        cur: Cursor::new(src, line),
        alphabet,
    };
    let terms = p.expr().map_err(|e| shift(e, col_offset))?;
    if !p.cur.at_end() {
        return Err(shift(
            p.cur.err(format!("unexpected `{}`", p.cur.rest().trim())),
            col_offset,
        ));
    }
    let mut degree = expected;
    for (t, _) in &terms {
        let d = alphabet.tree_degree(t);
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => {
                return Err(perr(
                    line,
                    col_offset + 1,
                    format!("term {} has degree {d}, expected {e}", t.display(alphabet)),
                ))
            }
            _ => {}
        }
    }
    LieElement::from_terms(alphabet, degree.unwrap_or(0), terms)
}

fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { line, col, msg } => Error::Parse {
            line,
            col: col + offset,
            msg,
        },
        other => other,
    }
}

/// Parses a single expression over `alphabet`.
pub fn parse_element(alphabet: &Alphabet, text: &str) -> Result<LieElement> {
    parse_expr_line(alphabet, text, 1, 0, None)
}

/// Parses an expression and checks its degree.
pub fn parse_element_of_degree(alphabet: &Alphabet, text: &str, degree: u32) -> Result<LieElement> {
    parse_expr_line(alphabet, text, 1, 0, Some(degree))
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_dgl(text: &str) -> Result<DglFile> {
    let mut alphabet = Alphabet::new();
    let mut declarations = BTreeMap::new();
    let mut d_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        let mut cur = Cursor::new(line, line_no);
        if cur.at_end() {
            continue;
        }
        let kw_col = cur.next_col();
        let kw = cur.name()?;
        match kw.as_str() {
            "gen" => {
                let col = cur.next_col();
                let name = cur.name()?;
                let degree = cur.unsigned()?;
                let degree: u32 = degree.try_into().map_err(|_| cur.err("degree out of range"))?;
                let mut filtration = None;
                if !cur.at_end() {
                    let kcol = cur.next_col();
                    let k = cur.name()?;
                    if k != "filt" {
                        return Err(perr(line_no, kcol, format!("expected `filt`, found `{k}`")));
                    }
                    let f: u32 = cur
                        .unsigned()?
                        .try_into()
                        .map_err(|_| cur.err("filtration out of range"))?;
                    filtration = Some(f);
                }
                if !cur.at_end() {
                    return Err(cur.err(format!("unexpected `{}`", cur.rest().trim())));
                }
                let g = Generator {
                    name: name.clone(),
                    degree,
                    filtration,
                };
                alphabet.push(g).map_err(|e| perr(line_no, col, e.to_string()))?;
                declarations.insert(name, Location { line: line_no, col });
            }
            "d" => {
                let col = cur.next_col();
                let name = cur.name()?;
                cur.expect('=')?;
                d_lines.push((line_no, col, name, cur.pos));
            }
            _ => return Err(perr(line_no, kw_col, format!("expected `gen` or `d`, found `{kw}`"))),
        }
    }
    let mut p = DglPresentation::new(alphabet.clone());
    let mut seen = BTreeMap::new();
    for (line_no, col, name, start) in d_lines {
        let id = alphabet
            .id(&name)
            .ok_or_else(|| perr(line_no, col, format!("unknown generator `{name}`")))?;
        if seen.insert(id, line_no).is_some() {
            return Err(perr(line_no, col, format!("differential of `{name}` given twice")));
        }
        let line = strip_comment(text.lines().nth(line_no - 1).unwrap());
        let body: String = line.chars().skip(start).collect();
        let degree = alphabet.degree(id);
        if degree == 0 {
            return Err(perr(line_no, col, "generators must have positive degree"));
        }
        let el = parse_expr_line(&alphabet, &body, line_no, start, Some(degree - 1)).map_err(|e| match e {
            Error::Parse { line, col, msg } if msg.starts_with("term ") => Error::Parse {
                line,
                col,
                msg: format!("degree mismatch in d {name}: {msg}"),
            },
            other => other,
        })?;
        p.set_differential(id, el)
            .map_err(|e| perr(line_no, col, e.to_string()))?;
    }
    Ok(DglFile {
        presentation: p,
        declarations,
    })
}

/// Prints a presentation; `parse_dgl(print_dgl(p))` gives back `p`.
pub fn print_dgl(p: &DglPresentation) -> String {
    let mut out = String::new();
    let al = p.alphabet();
    for g in al.generators() {
        match g.filtration {
            Some(f) => writeln!(out, "gen {} {} filt {}", g.name, g.degree, f),
            None => writeln!(out, "gen {} {}", g.name, g.degree),
        }
        .unwrap();
    }
    for id in al.ids() {
        writeln!(out, "d {} = {}", al.get(id).name, p.differential(id).display(al)).unwrap();
    }
    out
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t),
    };
    let mut cur = Cursor::new(body, 1);
    let r = cur.rational()?;
    if !cur.at_end() {
        return Err(cur.err(format!("unexpected `{}`", cur.rest())));
    }
    Ok(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    const SECTION2: &str = "\
# four generators
gen a 1
gen b 3
gen e 4
gen f 6
d a = 0
d b = [a,a]
d e = 0
d f = [a,e] + [a,[a,b]]
";

    #[test]
    fn parses_example() {
        let file = parse_dgl(SECTION2).unwrap();
        let p = &file.presentation;
        assert_eq!(p.alphabet().len(), 4);
        let f = p.alphabet().id("f").unwrap();
        assert_eq!(
            format!("{}", p.differential(f).display(p.alphabet())),
            "[a,e] + [a,[a,b]]"
        );
        assert_eq!(file.declarations["e"], Location { line: 4, col: 5 });
    }

    #[test]
    fn round_trip() {
        let p = parse_dgl(SECTION2).unwrap().presentation;
        let again = parse_dgl(&print_dgl(&p)).unwrap().presentation;
        assert_eq!(p, again);
        assert_eq!(print_dgl(&p), print_dgl(&again));
    }

    #[test]
    fn coefficients_and_names() {
        let text = "gen a 3 filt 1\ngen a2 7 filt 2\ngen s(a*b') 14\nd a2 = [a,a]\nd s(a*b') = -1/4 [a2,[a,a]] + 3[a,[a,a2]]\n";
        let p = parse_dgl(text).unwrap().presentation;
        let s = p.alphabet().id("s(a*b')").unwrap();
        let d = p.differential(s);
        let a = p.alphabet().elem(0);
        let a2 = p.alphabet().elem(1);
        let expect = &a2.bracket(&a.bracket(&a)).scale(&ratio(-1, 4)) + &a.bracket(&a.bracket(&a2)).scale(&ratio(3, 1));
        assert_eq!(d, &expect);
        assert_eq!(p.alphabet().get(1).filtration, Some(2));
    }

    #[test]
    fn unknown_generator() {
        let err = parse_dgl("gen a 3\ngen b 5\nd b = [a,a] + x\n").unwrap_err();
        match err {
            Error::Parse { line, col, msg } => {
                assert_eq!(line, 3);
                assert_eq!(col, 15);
                assert!(msg.contains("unknown generator `x`"), "{msg}");
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn degree_mismatch() {
        let err = parse_dgl("gen a 3\ngen b 6\nd b = [a,a]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        assert!(err.to_string().contains("degree"), "{err}");
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_dgl("gen a 3\nd a = [a,\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_dgl("gen a 3\nfoo\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, col: 1, .. }), "{err:?}");
        let err = parse_dgl("gen a 3 filt\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn zero_and_rationals() {
        let p = parse_dgl("gen a 3\nd a = 0\n").unwrap().presentation;
        assert!(p.differential(0).is_zero());
        assert_eq!(parse_rational("-3/4").unwrap(), ratio(-3, 4));
        assert!(parse_rational("1/0").is_err());
    }
}
