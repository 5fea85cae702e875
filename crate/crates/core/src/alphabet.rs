//! Symbol tables and the textual word syntax.
//!
//! Syntax: letters are identifiers, `x^-1` inverts, `x^3` / `(xy)^-2` raise to
//! powers, `[u,v]` is `u v u^-1 v^-1`, `1` is the identity and juxtaposition
//! (with or without whitespace) multiplies. Identifiers written without spaces
//! are split by longest match against the table, so `ab` reads as `a b` when
//! `ab` itself is not a name.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Alphabet> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::Invalid(format!("`{n}` is not an identifier")));
            }
            if seen.insert(n.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate generator name `{n}`")));
            }
        }
        Ok(Alphabet { names })
    }

    /// `s` for one generator, `s1..sn` otherwise.
    pub fn standard(n: usize) -> Alphabet {
        if n == 1 {
            return Alphabet {
                names: vec!["s".into()],
            };
        }
        Alphabet {
            names: (1..=n).map(|i| format!("s{i}")).collect(),
        }
    }

    /// `a, b, c, ...` up to 26 letters, otherwise [`Alphabet::standard`].
    pub fn letters(n: usize) -> Alphabet {
        if n > 26 {
            return Alphabet::standard(n);
        }
        Alphabet {
            names: (0..n)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index - 1]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name).map(|i| i + 1)
    }

    /// Concatenation; names of `other` that clash get a `bar` suffix
    /// (repeated until unique).
    pub fn join(&self, other: &Alphabet) -> Alphabet {
        let mut names = self.names.clone();
        for n in &other.names {
            let mut candidate = n.clone();
            while names.contains(&candidate) {
                candidate.push_str("bar");
            }
            names.push(candidate);
        }
        Alphabet { names }
    }

    /// Appends a fresh name based on `base`.
    pub fn with_fresh(&self, base: &str) -> (Alphabet, usize) {
        let mut candidate = base.to_string();
        let mut k = 1;
        while self.names.contains(&candidate) {
            k += 1;
            candidate = format!("{base}{k}");
        }
        let mut names = self.names.clone();
        names.push(candidate);
        let idx = names.len();
        (Alphabet { names }, idx)
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            alphabet: self,
        };
        let w = p.word()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(w)
    }

    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let letters = w.letters();
        let mut parts = Vec::new();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i + 1;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign();
            let name = self
                .names
                .get(l.index() - 1)
                .cloned()
                .unwrap_or_else(|| format!("s{}", l.index()));
            if run == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{run}"));
            }
            i = j;
        }
        parts.join(" ")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word> {
        let mut acc = Word::empty();
        loop {
            match self.peek() {
                Some(c)
                    if c.is_ascii_alphabetic()
                        || c == b'_'
                        || c == b'('
                        || c == b'['
                        || c == b'1' =>
                {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.integer()?;
            // `ab^2` binds the exponent to the last letter only
            if let Some(split) = base.1 {
                let (head, last) = split;
                return Ok(head.mul(&last.pow(k)));
            }
            return Ok(base.0.pow(k));
        }
        Ok(base.0)
    }

    /// Returns the atom and, when it came from a run of juxtaposed names,
    /// the split into everything-but-last and last letter.
    #[allow(clippy::type_complexity)]
    fn atom(&mut self) -> Result<(Word, Option<(Word, Word)>)> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok((w, None))
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b']')?;
                Ok((Word::commutator(&u, &v), None))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok((Word::empty(), None))
            }
            Some(_) => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let letters = self.split_identifier(ident, start)?;
                let last = *letters.last().unwrap();
                let head = Word::reduce(letters[..letters.len() - 1].iter().copied());
                let all = head.mul(&Word::letter(last));
                Ok((all, Some((head, Word::letter(last)))))
            }
            None => Err(self.error("expected a word")),
        }
    }

    fn split_identifier(&self, ident: &str, start: usize) -> Result<Vec<Letter>> {
        if let Some(i) = self.alphabet.index_of(ident) {
            return Ok(vec![Letter::gen(i)]);
        }
        let mut out = Vec::new();
        let mut rest = ident;
        let mut offset = start;
        while !rest.is_empty() {
            let best = self
                .alphabet
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match best {
                Some((i, n)) => {
                    out.push(Letter::gen(i + 1));
                    rest = &rest[n.len()..];
                    offset += n.len();
                }
                None => {
                    return Err(Error::parse(
                        1,
                        offset + 1,
                        format!("unknown generator in `{ident}`"),
                    ))
                }
            }
        }
        Ok(out)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && (self.src[self.pos] == b'-' || self.src[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(1, start + 1, "expected an integer exponent"))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }
}
