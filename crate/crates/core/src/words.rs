//! Free-group words and finite presentations.
//!
//! A [`Word`] is a flat array of signed letters. The inverse of a generator is
//! never a separate alphabet symbol: each [`Letter`] carries its sign.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A generator or its inverse, packed as `±(index + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        let v = generator as i32 + 1;
        Letter(if inverse { -v } else { v })
    }

    pub fn pos(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub fn neg(generator: usize) -> Self {
        Self::new(generator, true)
    }

    #[inline]
    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// `+1` or `-1`.
    #[inline]
    pub fn sign(self) -> i64 {
        self.0.signum() as i64
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "s{}^-1", self.generator())
        } else {
            write!(f, "s{}", self.generator())
        }
    }
}

/// A word in a free group. Not necessarily reduced; see [`Word::reduced`].
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Wraps raw letters without reducing them.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    /// Builds a word from signed exponents `(generator, power)`, reduced.
    pub fn from_powers(powers: &[(usize, i64)]) -> Self {
        let mut letters = Vec::new();
        for &(g, e) in powers {
            let l = Letter::new(g, e < 0);
            letters.extend(std::iter::repeat(l).take(e.unsigned_abs() as usize));
        }
        free_reduce(&Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn reduced(&self) -> Word {
        free_reduce(self)
    }

    /// Reduced product `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        for &l in self.0.iter().chain(other.0.iter()) {
            push_reducing(&mut out, l);
        }
        Word(out)
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.reduced() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Largest generator index used, plus one.
    pub fn alphabet_bound(&self) -> usize {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }

    /// Cyclically reduced form of the reduced word.
    pub fn cyclically_reduced(&self) -> Word {
        let w = self.reduced();
        let s = &w.0;
        let mut lo = 0;
        let mut hi = s.len();
        while hi - lo >= 2 && s[lo] == s[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        Word(s[lo..hi].to_vec())
    }

    /// Renders the word with the given generator names (`a b^-1 a`), or `1`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| format!("{l:?}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return write!(f, "1");
        }
        // Runs of the same letter print as powers.
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign();
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = self
                .names
                .get(l.generator())
                .cloned()
                .unwrap_or_else(|| format!("s{}", l.generator()));
            if run == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{run}")?;
            }
            i = j;
        }
        Ok(())
    }
}

#[inline]
fn push_reducing(stack: &mut Vec<Letter>, l: Letter) {
    if stack.last() == Some(&l.inverse()) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

/// Single stack pass; returns the unique freely reduced form.
pub fn free_reduce(w: &Word) -> Word {
    let mut out = Vec::with_capacity(w.0.len());
    for &l in &w.0 {
        push_reducing(&mut out, l);
    }
    Word(out)
}

/// `u^{-1} v^{-1} u v`, reduced.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.inverse().mul(&v.inverse()).mul(u).mul(v)
}

/// `v^{-1} u v`, reduced.
pub fn conjugate(u: &Word, v: &Word) -> Word {
    v.inverse().mul(u).mul(v)
}

/// Signed letter counts per generator. Letters with index `>= k` are ignored.
pub fn exponent_sums(w: &Word, k: usize) -> Vec<i64> {
    let mut sums = vec![0i64; k];
    for l in w.letters() {
        if let Some(s) = sums.get_mut(l.generator()) {
            *s += l.sign();
        }
    }
    sums
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub index: usize,
    pub name: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected end of input at byte {pos}, expected {expected}")]
    UnexpectedEnd { pos: usize, expected: &'static str },
    #[error("unexpected character {found:?} at byte {pos}, expected {expected}")]
    Unexpected {
        pos: usize,
        found: char,
        expected: &'static str,
    },
    #[error("unknown generator {name:?} at byte {pos}")]
    UnknownGenerator { pos: usize, name: String },
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("exponent out of range at byte {pos}")]
    BadExponent { pos: usize },
}

/// A finitely presented group `<S | R>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
    source: Option<String>,
}

impl Presentation {
    /// Builds a presentation; relators are stored reduced and cyclically reduced,
    /// and trivial relators are dropped.
    pub fn new<S: Into<String>>(names: Vec<S>, relators: Vec<Word>) -> Result<Self, ParseError> {
        let mut generators: Vec<Generator> = Vec::new();
        for (index, name) in names.into_iter().enumerate() {
            let name = name.into();
            if generators.iter().any(|g| g.name == name) {
                return Err(ParseError::DuplicateGenerator(name));
            }
            generators.push(Generator { index, name });
        }
        let k = generators.len();
        for r in &relators {
            if r.alphabet_bound() > k {
                return Err(ParseError::UnknownGenerator {
                    pos: 0,
                    name: format!("s{}", r.alphabet_bound() - 1),
                });
            }
        }
        let relators = relators
            .iter()
            .map(Word::cyclically_reduced)
            .filter(|r| !r.is_empty())
            .collect();
        Ok(Presentation {
            generators,
            relators,
            source: None,
        })
    }

    /// Free group on the given generator names.
    pub fn free<S: Into<String>>(names: Vec<S>) -> Result<Self, ParseError> {
        Self::new(names, Vec::new())
    }

    /// Parses `<a, b | a = [a, a^b], ...>`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut p = Parser::new(text, Vec::new());
        p.skip_ws();
        p.expect('<', "'<'")?;
        let mut names = Vec::new();
        loop {
            p.skip_ws();
            match p.peek() {
                Some('|') | Some('>') => break,
                _ => {}
            }
            let (_, name) = p.ident()?;
            if names.contains(&name) {
                return Err(ParseError::DuplicateGenerator(name));
            }
            names.push(name);
            p.skip_ws();
            if p.peek() == Some(',') {
                p.bump();
            }
        }
        p.names = names.clone();
        let mut relators = Vec::new();
        p.skip_ws();
        if p.peek() == Some('|') {
            p.bump();
            loop {
                p.skip_ws();
                if p.peek() == Some('>') {
                    break;
                }
                relators.push(p.relation()?);
                p.skip_ws();
                match p.peek() {
                    Some(',') | Some(';') => {
                        p.bump();
                    }
                    Some('>') => break,
                    Some(c) => {
                        return Err(ParseError::Unexpected {
                            pos: p.pos,
                            found: c,
                            expected: "',' or '>'",
                        })
                    }
                    None => {
                        return Err(ParseError::UnexpectedEnd {
                            pos: p.pos,
                            expected: "'>'",
                        })
                    }
                }
            }
        }
        p.expect('>', "'>'")?;
        p.skip_ws();
        if let Some(c) = p.peek() {
            return Err(ParseError::Unexpected {
                pos: p.pos,
                found: c,
                expected: "end of input",
            });
        }
        let mut pres = Presentation::new(names, relators)?;
        pres.source = Some(text.trim().to_string());
        Ok(pres)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Original text, when parsed.
    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    /// Parses a word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        parse_word(text, &self.names())
    }

    /// Same generators, extra relators appended.
    pub fn with_relators(&self, extra: &[Word]) -> Presentation {
        let mut rels = self.relators.clone();
        rels.extend(extra.iter().map(Word::cyclically_reduced));
        rels.retain(|r| !r.is_empty());
        Presentation {
            generators: self.generators.clone(),
            relators: rels,
            source: None,
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        write!(f, "<{}", names.join(", "))?;
        if !self.relators.is_empty() {
            let rels: Vec<String> = self
                .relators
                .iter()
                .map(|r| r.display(&names).to_string())
                .collect();
            write!(f, " | {}", rels.join(", "))?;
        }
        write!(f, ">")
    }
}

/// Parses a word over the given generator names.
///
/// Accepts juxtaposition, `*` or `.` between factors, `^n` powers, `^-1`,
/// `[u, v]` commutators, `u^v` / `u^(w)` conjugation, parentheses and `1`.
/// Identifiers are split greedily into the longest declared names, so `yxy`
/// reads as `y x y` over `{x, y}`.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word, ParseError> {
    let mut p = Parser::new(text, names.to_vec());
    let w = p.word()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(ParseError::Unexpected {
            pos: p.pos,
            found: c,
            expected: "end of word",
        });
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, names: Vec<String>) -> Self {
        Parser { src, pos: 0, names }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(d) if d == c => {
                self.bump();
                Ok(())
            }
            Some(d) => Err(ParseError::Unexpected {
                pos: self.pos,
                found: d,
                expected: what,
            }),
            None => Err(ParseError::UnexpectedEnd {
                pos: self.pos,
                expected: what,
            }),
        }
    }

    fn ident(&mut self) -> Result<(usize, String), ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_alphabetic() || c == '_' => {}
            Some(c) => {
                return Err(ParseError::Unexpected {
                    pos: start,
                    found: c,
                    expected: "identifier",
                })
            }
            None => {
                return Err(ParseError::UnexpectedEnd {
                    pos: start,
                    expected: "identifier",
                })
            }
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                self.bump();
            } else {
                break;
            }
        }
        Ok((start, self.src[start..self.pos].to_string()))
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') || self.peek() == Some('+') {
            self.bump();
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| ParseError::BadExponent { pos: start })
    }

    /// Splits an identifier into declared generator names, longest match first.
    fn split_ident(&self, start: usize, ident: &str) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        let mut rest = ident;
        let mut off = start;
        while !rest.is_empty() {
            let best = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match best {
                Some((i, n)) => {
                    letters.push(Letter::pos(i));
                    rest = &rest[n.len()..];
                    off += n.len();
                }
                None => {
                    return Err(ParseError::UnknownGenerator {
                        pos: off,
                        name: rest.to_string(),
                    })
                }
            }
        }
        Ok(Word(letters))
    }

    fn relation(&mut self) -> Result<Word, ParseError> {
        let lhs = self.word()?;
        self.skip_ws();
        if self.peek() == Some('=') {
            self.bump();
            let rhs = self.word()?;
            Ok(lhs.inverse().mul(&rhs))
        } else {
            Ok(lhs)
        }
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut acc = Word::identity();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') | Some('.') => {
                    self.bump();
                    continue;
                }
                Some(c) if c.is_alphabetic() || c == '_' || c == '(' || c == '[' || c == '1' => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let w = self.word()?;
                self.expect(')', "')'")?;
                Ok(w)
            }
            Some('[') => {
                self.bump();
                let u = self.word()?;
                self.expect(',', "','")?;
                let v = self.word()?;
                self.expect(']', "']'")?;
                Ok(commutator(&u, &v))
            }
            Some('1') => {
                self.bump();
                Ok(Word::identity())
            }
            _ => {
                let (start, id) = self.ident()?;
                self.split_ident(start, &id)
            }
        }
    }

    fn factor(&mut self) -> Result<Word, ParseError> {
        self.skip_ws();
        let bare_ident = matches!(self.peek(), Some(c) if c.is_alphabetic() || c == '_');
        let atom = self.atom()?;
        // In `yxy^-1` the postfix binds to the last generator only.
        let (prefix, mut base) = if bare_ident && atom.len() > 1 {
            let (head, last) = atom.letters().split_at(atom.len() - 1);
            (Word::from_letters(head.to_vec()), Word::from_letters(last.to_vec()))
        } else {
            (Word::identity(), atom)
        };
        loop {
            // No whitespace skipping before '^' would make `a ^b` ambiguous; allow it.
            let save = self.pos;
            self.skip_ws();
            if self.peek() != Some('^') {
                self.pos = save;
                break;
            }
            self.bump();
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() || c == '-' || c == '+' => {
                    let e = self.integer()?;
                    if e.unsigned_abs() > 1 << 20 {
                        return Err(ParseError::BadExponent { pos: self.pos });
                    }
                    base = base.pow(e);
                }
                Some('(') => {
                    self.bump();
                    let c = self.word()?;
                    self.expect(')', "')'")?;
                    base = conjugate(&base, &c);
                }
                Some('[') => {
                    let c = self.atom()?;
                    base = conjugate(&base, &c);
                }
                _ => {
                    // Conjugation by a single generator name: `a^b`, `a^bc` is `a^(bc)`.
                    let (start, id) = self.ident()?;
                    let c = self.split_ident(start, &id)?;
                    base = conjugate(&base, &c);
                }
            }
        }
        Ok(prefix.mul(&base))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    /// Repeatedly deletes the first cancelling pair until none remain.
    fn naive_reduce(w: &[Letter]) -> Vec<Letter> {
        let mut v = w.to_vec();
        loop {
            let hit = v.windows(2).position(|p| p[0] == p[1].inverse());
            match hit {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return v,
            }
        }
    }

    #[test]
    fn reduce_cancels() {
        let xy = names(&["x", "y"]);
        let w = Word::from_letters(vec![
            Letter::pos(0),
            Letter::pos(1),
            Letter::neg(1),
            Letter::pos(0),
        ]);
        assert_eq!(free_reduce(&w), parse_word("x x", &xy).unwrap());
        assert_eq!(free_reduce(&Word::identity()), Word::identity());
    }

    #[test]
    fn baumslag_relator_expansion() {
        let ab = names(&["a", "b"]);
        let (a, b) = (Letter::pos(0), Letter::pos(1));
        // a^-1 . a^-1 . (a^b)^-1 . a . a^b . a, fully expanded.
        let raw = vec![
            a.inverse(),
            a.inverse(),
            b.inverse(),
            a.inverse(),
            b,
            a,
            b.inverse(),
            a,
            b,
            a,
        ];
        let w = Word::from_letters(raw.clone());
        let r = free_reduce(&w);
        assert_eq!(r.letters(), naive_reduce(&raw).as_slice());
        // No adjacent cancellation occurs; the conjugate collapses only cyclically.
        assert_eq!(r.len(), 10);
        assert_eq!(
            r.cyclically_reduced(),
            parse_word("a^-1 b^-1 a^-1 b a b^-1 a b", &ab).unwrap()
        );
        // The relator a^-1 [a, a^b] itself has nine letters and is cyclically reduced.
        let rel = parse_word("a^-1 [a, a^b]", &ab).unwrap();
        assert_eq!(rel, parse_word("a^-1 a^-1 b^-1 a^-1 b a b^-1 a b", &ab).unwrap());
        assert_eq!(rel.cyclically_reduced(), rel);
    }

    #[test]
    fn commutator_and_conjugate_conventions() {
        let xy = names(&["x", "y"]);
        let x = Word::generator(0);
        let y = Word::generator(1);
        assert!(commutator(&x, &x).is_empty());
        assert_eq!(commutator(&x, &y), parse_word("x^-1 y^-1 x y", &xy).unwrap());
        assert!(commutator(&x, &Word::identity()).is_empty());
        assert_eq!(conjugate(&x, &y), parse_word("y^-1 x y", &xy).unwrap());
        assert_eq!(conjugate(&x, &Word::identity()), x);
        assert!(conjugate(&Word::identity(), &y).is_empty());
    }

    #[test]
    fn exponent_sum_examples() {
        let xy = names(&["x", "y"]);
        let c = parse_word("[x,y]", &xy).unwrap();
        assert_eq!(exponent_sums(&c, 2), vec![0, 0]);
        let yp = parse_word("y x y x^-1 y^-1", &xy).unwrap();
        assert_eq!(exponent_sums(&yp, 2), vec![0, 1]);
        let ab = names(&["a", "b"]);
        let rel = parse_word("a^-1 [a, a^b]", &ab).unwrap();
        assert_eq!(exponent_sums(&rel, 2), vec![-1, 0]);
    }

    #[test]
    fn parse_presentation_sugar() {
        let p = Presentation::parse("<a,b | a = [a, a^b]>").unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0], p.parse_word("a^-1 [a, a^b]").unwrap());
        assert_eq!(p.source(), Some("<a,b | a = [a, a^b]>"));

        let bs = Presentation::parse("<a, t | t a^2 t^-1 a^-3>").unwrap();
        assert_eq!(exponent_sums(&bs.relators()[0], 2), vec![-1, 0]);

        let free = Presentation::parse("<x, y>").unwrap();
        assert!(free.relators().is_empty());
        let free2 = Presentation::parse("<x, y | >").unwrap();
        assert!(free2.relators().is_empty());
    }

    #[test]
    fn parse_multi_letter_names_and_juxtaposition() {
        let n = names(&["x12", "x21", "x1"]);
        let w = parse_word("x12x21^-1x12", &n).unwrap();
        assert_eq!(w.letters(), &[Letter::pos(0), Letter::neg(1), Letter::pos(0)]);
        let xy = names(&["x", "y"]);
        assert_eq!(
            parse_word("yxyx^-1y^-1", &xy).unwrap(),
            parse_word("y x y x^-1 y^-1", &xy).unwrap()
        );
        assert_eq!(
            parse_word("x^(y x)", &xy).unwrap(),
            parse_word("x^-1 y^-1 x y x", &xy).unwrap()
        );
        assert_eq!(parse_word("(x y)^-2", &xy).unwrap(), parse_word("y^-1 x^-1 y^-1 x^-1", &xy).unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Presentation::parse("<a,b | c>"),
            Err(ParseError::UnknownGenerator { .. })
        ));
        assert!(matches!(
            Presentation::parse("<a,a>"),
            Err(ParseError::DuplicateGenerator(_))
        ));
        assert!(Presentation::parse("<a,b | [a,b>").is_err());
        assert!(Presentation::parse("<a | a> junk").is_err());
    }

    #[test]
    fn cyclic_reduction_at_load() {
        let p = Presentation::parse("<a,b | b a b^-1>").unwrap();
        assert_eq!(p.relators()[0], Word::generator(0));
        let q = Presentation::parse("<a | a a^-1>").unwrap();
        assert!(q.relators().is_empty());
    }

    #[test]
    fn display_uses_powers() {
        let n = names(&["a", "b"]);
        let w = parse_word("a a b^-1 b^-1 b^-1 a", &n).unwrap();
        assert_eq!(w.display(&n).to_string(), "a^2 b^-3 a");
        assert_eq!(Word::identity().display(&n).to_string(), "1");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word(k: usize, max: usize) -> impl Strategy<Value = Word> {
            prop::collection::vec((0..k, any::<bool>()), 0..max).prop_map(|v| {
                Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(10_000))]

            #[test]
            fn reduce_matches_naive_and_is_idempotent(w in word(3, 40)) {
                let r = free_reduce(&w);
                prop_assert!(r.is_reduced());
                prop_assert!(r.len() <= w.len());
                let naive = naive_reduce(w.letters());
                prop_assert_eq!(r.letters(), naive.as_slice());
                prop_assert_eq!(free_reduce(&r), r.clone());
                prop_assert_eq!(exponent_sums(&r, 3), exponent_sums(&w, 3));
            }

            #[test]
            fn word_times_inverse_is_trivial(w in word(4, 60)) {
                prop_assert!(free_reduce(&w.concat(&w.inverse())).is_empty());
            }

            #[test]
            fn commutators_have_zero_exponents(u in word(3, 20), v in word(3, 20)) {
                prop_assert_eq!(exponent_sums(&commutator(&u, &v), 3), vec![0, 0, 0]);
            }
        }
    }
}
