//! The `.gg` spec-file language.
//!
//! ```text
//! # comment
//! group F2 = free(a,b)
//! group A = abelian(rows=[[5]])
//! group D = amalgam(F2, F2; [a,b] = [a,b])
//! group E = hnn(F2; [a,b] -> [a,b])
//! group Q = quotient(F2; relators=["[a,b]"])
//! marking M = (Z; "s", "s^3")
//! hom h = (G -> F; a: "x", b: "")
//! sentence s = forall x y : ([x,y]=1)
//! gog Y {
//!   vertex u = free(a,b)
//!   vertex v = abelian(x,y)
//!   edge u -> v : a^2 = x
//! }
//! ```

use std::collections::HashMap;

use marked_groups::construct;
use marked_groups::detect::UniversalSentence;
use marked_groups::homo::{make_hom, Hom, HomMode};
use marked_groups::oracle::{AbelianData, EdgeSpec, GraphOfGroupsSpec, Oracle};
use marked_groups::surface::{surface_group, SurfaceSpec};
use marked_groups::{Alphabet, Error, MarkedGroup, Result, Word};

/// Relation length up to which DSL homomorphisms are checked when the
/// source has no known presentation.
const HOM_CHECK_LEN: usize = 4;

#[derive(Clone, Debug)]
pub enum Item {
    Group(MarkedGroup),
    Hom(Box<Hom>),
    Sentence(UniversalSentence),
}

#[derive(Clone, Debug, Default)]
pub struct SpecFile {
    items: HashMap<String, Item>,
    order: Vec<String>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile> {
        let mut spec = SpecFile::default();
        for stmt in statements(text)? {
            spec.statement(&stmt)?;
        }
        Ok(spec)
    }

    pub fn group(&self, name: &str) -> Result<MarkedGroup> {
        match self.items.get(name) {
            Some(Item::Group(g)) => Ok(g.clone()),
            Some(_) => Err(Error::Invalid(format!("`{name}` is not a group"))),
            None => builtin(name).ok_or_else(|| Error::Invalid(format!("unknown name `{name}`"))),
        }
    }

    pub fn hom(&self, name: &str) -> Result<Hom> {
        match self.items.get(name) {
            Some(Item::Hom(h)) => Ok((**h).clone()),
            _ => Err(Error::Invalid(format!("no homomorphism named `{name}`"))),
        }
    }

    pub fn sentence(&self, name: &str) -> Result<UniversalSentence> {
        match self.items.get(name) {
            Some(Item::Sentence(s)) => Ok(s.clone()),
            _ => Err(Error::Invalid(format!("no sentence named `{name}`"))),
        }
    }

    /// The most recently defined group.
    pub fn last_group(&self) -> Option<&str> {
        self.order
            .iter()
            .rev()
            .find(|n| matches!(self.items[*n], Item::Group(_)))
            .map(String::as_str)
    }

    /// Evaluates a group expression against the definitions so far.
    pub fn eval_group(&self, text: &str) -> Result<MarkedGroup> {
        let mut c = Cursor::new(text, 1, 1);
        let g = self.group_expr(&mut c)?;
        c.end()?;
        Ok(g)
    }

    fn define(&mut self, name: &str, c: &Cursor, item: Item) -> Result<()> {
        if self.items.contains_key(name) {
            return Err(c.error(format!("`{name}` is defined twice")));
        }
        self.items.insert(name.to_string(), item);
        self.order.push(name.to_string());
        Ok(())
    }

    fn statement(&mut self, stmt: &Statement) -> Result<()> {
        let mut c = Cursor::new(&stmt.text, stmt.line, 1);
        let kw = c.ident()?;
        let name = c.ident()?;
        match kw.as_str() {
            "group" => {
                c.expect('=')?;
                let g = self.group_expr(&mut c)?.with_name(name.clone());
                c.end()?;
                self.define(&name, &c, Item::Group(g))
            }
            "marking" => {
                c.expect('=')?;
                c.expect('(')?;
                let g = self.group_expr(&mut c)?;
                c.expect(';')?;
                let words = c
                    .top_list(')')?
                    .into_iter()
                    .map(|(at, s)| parse_word_at(&g.names().clone(), &s, &at))
                    .collect::<Result<Vec<_>>>()?;
                c.expect(')')?;
                c.end()?;
                let m = g.remark_subgroup(&words)?.with_name(name.clone());
                self.define(&name, &c, Item::Group(m))
            }
            "hom" => {
                c.expect('=')?;
                c.expect('(')?;
                let src = self.group_expr(&mut c)?;
                c.expect_str("->")?;
                let dst = self.group_expr(&mut c)?;
                c.expect(';')?;
                let mut images: Vec<Option<Word>> = vec![None; src.arity()];
                for (at, entry) in c.top_list(')')? {
                    let (letter, img) = entry
                        .split_once(':')
                        .ok_or_else(|| at.error("expected `letter: \"image\"`"))?;
                    let idx = src.names().index_of(letter.trim()).ok_or_else(|| {
                        at.error(format!(
                            "`{}` is not a generator of the source",
                            letter.trim()
                        ))
                    })?;
                    images[idx - 1] = Some(parse_word_at(dst.names(), img, &at)?);
                }
                c.expect(')')?;
                c.end()?;
                let images = images
                    .into_iter()
                    .enumerate()
                    .map(|(i, w)| {
                        w.ok_or_else(|| {
                            c.error(format!("no image for `{}`", src.names().name(i + 1)))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mode = if src.presentation().is_some() {
                    HomMode::Presentation
                } else {
                    HomMode::CheckedUpTo(HOM_CHECK_LEN)
                };
                let h = make_hom(&src, &dst, images, mode)?;
                self.define(&name, &c, Item::Hom(Box::new(h)))
            }
            "sentence" => {
                c.expect('=')?;
                let s = UniversalSentence::parse(c.rest()).map_err(|e| relocate(e, stmt.line))?;
                self.define(&name, &c, Item::Sentence(s))
            }
            "gog" => {
                let g = self.gog_block(&mut c)?.with_name(name.clone());
                self.define(&name, &c, Item::Group(g))
            }
            other => {
                Err(Cursor::new(&stmt.text, stmt.line, 1)
                    .error(format!("unknown statement `{other}`")))
            }
        }
    }

    fn gog_block(&self, c: &mut Cursor) -> Result<MarkedGroup> {
        c.expect('{')?;
        let mut vertex_names: Vec<String> = Vec::new();
        let mut vertices: Vec<MarkedGroup> = Vec::new();
        let mut edges: Vec<EdgeSpec> = Vec::new();
        loop {
            c.skip_ws();
            if c.eat('}') {
                break;
            }
            let kw = c.ident()?;
            match kw.as_str() {
                "vertex" => {
                    let v = c.ident()?;
                    c.expect('=')?;
                    let g = self.group_expr(c)?;
                    if vertex_names.contains(&v) {
                        return Err(c.error(format!("vertex `{v}` is defined twice")));
                    }
                    vertex_names.push(v);
                    vertices.push(g);
                }
                "edge" => {
                    let vertex = |c: &mut Cursor| -> Result<usize> {
                        let at = c.clone();
                        let v = c.ident()?;
                        vertex_names
                            .iter()
                            .position(|x| *x == v)
                            .ok_or_else(|| at.error(format!("unknown vertex `{v}`")))
                    };
                    let from = vertex(c)?;
                    c.expect_str("->")?;
                    let to = vertex(c)?;
                    let mut from_images = Vec::new();
                    let mut to_images = Vec::new();
                    if c.eat(':') {
                        let line_end = c.src[c.pos..].find('\n').map_or(c.src.len(), |i| c.pos + i);
                        let mut sub = c.sub(line_end);
                        for (at, pair) in sub.top_list('\n')? {
                            let (u, v) = pair
                                .split_once('=')
                                .ok_or_else(|| at.error("expected `u = v`"))?;
                            from_images.push(vertices[from].to_ambient(&parse_word_at(
                                vertices[from].names(),
                                u,
                                &at,
                            )?));
                            to_images.push(vertices[to].to_ambient(&parse_word_at(
                                vertices[to].names(),
                                v,
                                &at,
                            )?));
                        }
                        c.pos = line_end;
                    }
                    edges.push(EdgeSpec {
                        from,
                        to,
                        from_images,
                        to_images,
                    });
                }
                other => {
                    return Err(c.error(format!("expected `vertex` or `edge`, found `{other}`")))
                }
            }
        }
        c.end()?;
        if vertices.is_empty() {
            return Err(c.error("graph of groups without vertices"));
        }
        let spec = GraphOfGroupsSpec {
            vertices: vertices.iter().map(construct::vertex_of).collect(),
            edges,
        };
        let oracle = Oracle::graph(spec)?;
        let g = oracle.graph_oracle().expect("graph oracle");
        let mut names = vertices
            .iter()
            .skip(1)
            .fold(vertices[0].ambient_names().clone(), |acc, v| {
                acc.join(v.ambient_names())
            });
        for e in 0..g.spec().edges.len() {
            if g.stable_letter(e).is_some() {
                names = names.with_fresh("t").0;
            }
        }
        MarkedGroup::standard(oracle, names)
    }

    fn group_expr(&self, c: &mut Cursor) -> Result<MarkedGroup> {
        c.skip_ws();
        let at = c.clone();
        let head = c.ident()?;
        c.skip_ws();
        if !c.peek_is('(') {
            return self
                .group(&head)
                .map_err(|_| at.error(format!("unknown group `{head}`")));
        }
        c.expect('(')?;
        let g = match head.as_str() {
            "free" => {
                let args = c.top_list(')')?;
                match args.as_slice() {
                    [(_, n)] if n.trim().parse::<usize>().is_ok() => {
                        MarkedGroup::free(n.trim().parse().unwrap())
                    }
                    _ => {
                        let names = Alphabet::new(args.iter().map(|(_, s)| s.trim().to_string()))?;
                        MarkedGroup::standard(Oracle::free(names.len()), names)?
                    }
                }
            }
            "abelian" => self.abelian_args(c)?,
            "cyclic" => MarkedGroup::cyclic(c.int()?),
            "integers" => {
                let ks = c
                    .top_list(')')?
                    .iter()
                    .map(|(at, s)| {
                        s.trim()
                            .parse::<i64>()
                            .map_err(|_| at.error("expected an integer"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                MarkedGroup::integers_marked(&ks)
            }
            "surface" => {
                let key = c.ident()?;
                c.expect('=')?;
                let n = c.int()? as usize;
                let spec = match key.as_str() {
                    "orientable" | "g" => SurfaceSpec::orientable(n),
                    "nonorientable" | "k" => SurfaceSpec::non_orientable(n),
                    _ => return Err(at.error("expected `orientable=g` or `nonorientable=k`")),
                };
                surface_group(spec)?
            }
            "free_product" | "direct_product" => {
                let a = self.group_expr(c)?;
                c.expect(',')?;
                let b = self.group_expr(c)?;
                if head == "free_product" {
                    construct::free_product(&a, &b)?
                } else {
                    construct::direct_product(&a, &b)?
                }
            }
            "amalgam" => {
                let a = self.group_expr(c)?;
                c.expect(',')?;
                let b = self.group_expr(c)?;
                c.expect(';')?;
                let (u, v) = self.pairs(c, &a, &b, "=")?;
                construct::amalgam(&a, &b, &u, &v)?
            }
            "hnn" => {
                let a = self.group_expr(c)?;
                c.expect(';')?;
                let (u, v) = self.pairs(c, &a, &a, "->")?;
                construct::hnn(&a, &u, &v)?
            }
            "quotient" => {
                let a = self.group_expr(c)?;
                c.expect(';')?;
                c.expect_key("relators")?;
                let rels = c
                    .string_list()?
                    .iter()
                    .map(|(at, s)| parse_word_at(a.names(), s, at))
                    .collect::<Result<Vec<_>>>()?;
                construct::quotient(&a, &rels)?
            }
            "extend" => {
                let a = self.group_expr(c)?;
                c.expect(';')?;
                let mut args = c.top_list(')')?.into_iter();
                let (zat, z) = args
                    .next()
                    .ok_or_else(|| c.error("expected the element to centralize"))?;
                let z = parse_word_at(a.names(), &z, &zat)?;
                let p = match args.next() {
                    Some((pat, p)) => p
                        .trim()
                        .strip_prefix("p=")
                        .or_else(|| p.trim().strip_prefix("p ="))
                        .and_then(|x| x.trim().parse().ok())
                        .ok_or_else(|| pat.error("expected `p=<count>`"))?,
                    None => 1,
                };
                construct::extend_centralizer(&a, &z, p)?
            }
            "double" => {
                let a = self.group_expr(c)?;
                c.expect(';')?;
                let (uat, u) = c
                    .top_list(')')?
                    .into_iter()
                    .next()
                    .ok_or_else(|| c.error("expected a word"))?;
                construct::double(&a, &parse_word_at(a.names(), &u, &uat)?)?
            }
            _ => return Err(at.error(format!("unknown constructor `{head}`"))),
        };
        c.expect(')')?;
        Ok(g)
    }

    fn abelian_args(&self, c: &mut Cursor) -> Result<MarkedGroup> {
        let mut names: Option<Vec<String>> = None;
        let mut rank: Option<usize> = None;
        let mut rows: Vec<Vec<i64>> = Vec::new();
        loop {
            c.skip_ws();
            if c.peek_is(')') {
                break;
            }
            let at = c.clone();
            let word = c.ident()?;
            c.skip_ws();
            if c.eat('=') {
                match word.as_str() {
                    "rows" => rows = c.int_matrix()?,
                    "rank" => rank = Some(c.int()? as usize),
                    _ => return Err(at.error(format!("unknown key `{word}`"))),
                }
            } else {
                names.get_or_insert_with(Vec::new).push(word);
            }
            c.skip_ws();
            if !c.eat(',') && !c.eat(';') {
                break;
            }
        }
        let n = names
            .as_ref()
            .map(Vec::len)
            .or(rank)
            .or_else(|| rows.first().map(Vec::len))
            .ok_or_else(|| c.error("abelian group needs names, `rank=` or `rows=`"))?;
        let data = AbelianData::new(n, rows)?;
        let alphabet = match names {
            Some(ns) => Alphabet::new(ns)?,
            None => Alphabet::standard(n),
        };
        let mut g = MarkedGroup::standard(Oracle::abelian(data), alphabet)?;
        g.name = "abelian".into();
        Ok(g)
    }

    /// `u1 <sep> v1, u2 <sep> v2, ...` up to the closing parenthesis.
    fn pairs(
        &self,
        c: &mut Cursor,
        a: &MarkedGroup,
        b: &MarkedGroup,
        sep: &str,
    ) -> Result<(Vec<Word>, Vec<Word>)> {
        let mut us = Vec::new();
        let mut vs = Vec::new();
        for (at, pair) in c.top_list(')')? {
            let (u, v) = pair
                .split_once(sep)
                .ok_or_else(|| at.error(format!("expected `u {sep} v`")))?;
            us.push(parse_word_at(a.names(), u, &at)?);
            vs.push(parse_word_at(b.names(), v, &at)?);
        }
        Ok((us, vs))
    }
}

fn builtin(name: &str) -> Option<MarkedGroup> {
    if name == "Z" {
        return Some(MarkedGroup::free_abelian(1));
    }
    let (head, n) = name.split_at(1);
    let n: usize = n.parse().ok()?;
    match head {
        "F" => Some(MarkedGroup::free(n)),
        "Z" => Some(MarkedGroup::free_abelian(n)),
        _ => None,
    }
}

/// Parses an optionally quoted word.
fn parse_word_at(names: &Alphabet, text: &str, at: &Cursor) -> Result<Word> {
    let t = text.trim();
    let t = t
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(t);
    if t.trim().is_empty() {
        return Ok(Word::empty());
    }
    names
        .parse(t)
        .map_err(|e| at.error(format!("in word `{t}`: {e}")))
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse {
            column, message, ..
        } => Error::parse(line, column, message),
        other => other,
    }
}

struct Statement {
    line: usize,
    text: String,
}

/// Splits into statements; a statement continues over lines while brackets
/// are open.
fn statements(text: &str) -> Result<Vec<Statement>> {
    let mut out: Vec<Statement> = Vec::new();
    let mut cur: Option<Statement> = None;
    let mut depth: i64 = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if cur.is_none() && line.trim().is_empty() {
            continue;
        }
        let s = cur.get_or_insert_with(|| Statement {
            line: i + 1,
            text: String::new(),
        });
        if !s.text.is_empty() {
            s.text.push('\n');
        }
        s.text.push_str(line);
        let mut in_str = false;
        for ch in line.chars() {
            match ch {
                '"' => in_str = !in_str,
                '(' | '[' | '{' if !in_str => depth += 1,
                ')' | ']' | '}' if !in_str => depth -= 1,
                _ => {}
            }
        }
        if depth < 0 {
            return Err(Error::parse(i + 1, 1, "unbalanced closing bracket"));
        }
        if depth == 0 {
            out.push(cur.take().unwrap());
        }
    }
    if let Some(s) = cur {
        return Err(Error::parse(s.line, 1, "unclosed bracket"));
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

#[derive(Clone)]
struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, col: usize) -> Cursor<'a> {
        Cursor {
            src,
            pos: 0,
            line,
            col,
        }
    }

    fn sub(&self, end: usize) -> Cursor<'a> {
        Cursor {
            src: &self.src[..end],
            ..self.clone()
        }
    }

    fn location(&self) -> (usize, usize) {
        let before = &self.src[..self.pos];
        let newlines = before.matches('\n').count();
        let col = match before.rfind('\n') {
            Some(i) => before[i + 1..].chars().count() + 1,
            None => before.chars().count() + self.col,
        };
        (self.line + newlines, col)
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.location();
        Error::parse(l, c, msg)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while let Some(ch) = self.rest().chars().next() {
            if !ch.is_whitespace() {
                break;
            }
            self.pos += ch.len_utf8();
        }
    }

    fn peek_is(&self, ch: char) -> bool {
        self.rest().starts_with(ch)
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.peek_is(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{ch}`")))
        }
    }

    fn expect_str(&mut self, s: &str) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn expect_key(&mut self, key: &str) -> Result<()> {
        self.skip_ws();
        let at = self.clone();
        let k = self.ident()?;
        if k != key {
            return Err(at.error(format!("expected `{key}=`")));
        }
        self.expect('=')
    }

    fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(())
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|ch: char| !(ch.is_alphanumeric() || ch == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        let s = self.rest()[..len].to_string();
        self.pos += len;
        Ok(s)
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let r = self.rest();
        let len = r
            .char_indices()
            .find(|&(i, ch)| !(ch.is_ascii_digit() || (i == 0 && ch == '-')))
            .map_or(r.len(), |(i, _)| i);
        let v = r[..len]
            .parse()
            .map_err(|_| self.error("expected an integer"))?;
        self.pos += len;
        Ok(v)
    }

    fn int_matrix(&mut self) -> Result<Vec<Vec<i64>>> {
        self.expect('[')?;
        let mut rows = Vec::new();
        while !self.eat(']') {
            self.expect('[')?;
            let mut row = Vec::new();
            while !self.eat(']') {
                row.push(self.int()?);
                self.eat(',');
            }
            rows.push(row);
            self.eat(',');
        }
        Ok(rows)
    }

    fn string_list(&mut self) -> Result<Vec<(Cursor<'a>, String)>> {
        self.expect('[')?;
        let mut out = Vec::new();
        while !self.eat(']') {
            self.expect('"')?;
            let at = self.clone();
            let end = self
                .rest()
                .find('"')
                .ok_or_else(|| self.error("unterminated string"))?;
            out.push((at, self.rest()[..end].to_string()));
            self.pos += end + 1;
            self.eat(',');
        }
        Ok(out)
    }

    /// Raw top-level comma-separated items up to (not including) `close`
    /// at bracket depth zero.
    fn top_list(&mut self, close: char) -> Result<Vec<(Cursor<'a>, String)>> {
        let mut out = Vec::new();
        let mut depth = 0i64;
        let mut in_str = false;
        self.skip_ws();
        let mut start = self.pos;
        let src = self.src;
        let mut end = None;
        for (off, ch) in src[self.pos..].char_indices() {
            let i = self.pos + off;
            match ch {
                '"' => in_str = !in_str,
                _ if in_str => {}
                c if c == close && depth == 0 => {
                    end = Some(i);
                    break;
                }
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => depth -= 1,
                ',' if depth == 0 => {
                    let mut at = self.clone();
                    at.pos = start;
                    out.push((at, src[start..i].to_string()));
                    start = i + 1;
                }
                _ => {}
            }
        }
        let end = match end {
            Some(e) => e,
            None if close == '\n' => src.len(),
            None => return Err(self.error(format!("expected `{close}`"))),
        };
        if !src[start..end].trim().is_empty() || !out.is_empty() {
            let mut at = self.clone();
            at.pos = start;
            out.push((at, src[start..end].to_string()));
        }
        self.pos = end;
        Ok(out)
    }
}

/// A group given inline on the command line: `free 2`, `abelian 1 mod 5`,
/// `integers 1 3`, `surface 2`, `surface nonorientable 3`, a name from
/// `env`, or any group expression.
pub fn inline_group(text: &str, env: &SpecFile) -> Result<MarkedGroup> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    let num = |s: &str| -> Result<i64> {
        s.parse()
            .map_err(|_| Error::parse(1, 1, format!("expected an integer, found `{s}`")))
    };
    match parts.as_slice() {
        ["free", n] => Ok(MarkedGroup::free(num(n)? as usize)),
        ["abelian", n] => Ok(MarkedGroup::free_abelian(num(n)? as usize)),
        ["abelian", n, "mod", moduli @ ..] => {
            let n = num(n)? as usize;
            let ms = moduli.iter().map(|m| num(m)).collect::<Result<Vec<_>>>()?;
            if ms.len() != n {
                return Err(Error::Arity {
                    expected: n,
                    found: ms.len(),
                });
            }
            let mut g = MarkedGroup::abelian(AbelianData::from_moduli(&ms));
            g.name = text.to_string();
            Ok(g)
        }
        ["integers", ks @ ..] if !ks.is_empty() => {
            let ks = ks.iter().map(|k| num(k)).collect::<Result<Vec<_>>>()?;
            Ok(MarkedGroup::integers_marked(&ks))
        }
        ["surface", g] => surface_group(SurfaceSpec::orientable(num(g)? as usize)),
        ["surface", "nonorientable", k] => {
            surface_group(SurfaceSpec::non_orientable(num(k)? as usize))
        }
        _ => env.eval_group(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use marked_groups::oracle::OracleKind;

    const SAMPLE: &str = r#"
# the grammar in one file
group F2 = free(a,b)
group A = abelian(rows=[[5]])
group D = amalgam(F2, F2; [a,b] = [a,b])
group E = hnn(F2; [a,b] -> [a,b])
group Q = quotient(F2; relators=["[a,b]"])
marking M = (Z; "s", "s^3")
hom h = (D -> F2; a: "a", b: "b", abar: "a", bbar: "b")
hom k = (F2 -> Z; a: "s", b: "")
sentence s = forall x y : ([x,y]=1)
gog Y {
  vertex u = free(a,b)
  vertex v = abelian(x,y)
  edge u -> v : a^2 = x
}
"#;

    #[test]
    fn sample_file() {
        let f = SpecFile::parse(SAMPLE).unwrap();
        let a = f.group("A").unwrap();
        assert!(a.relation_test(&Word::gen(1).pow(5)));
        let d = f.group("D").unwrap();
        assert_eq!(d.arity(), 4);
        assert_eq!(d.names().names(), ["a", "b", "abar", "bbar"]);
        let e = f.group("E").unwrap();
        assert_eq!(e.names().name(3), "t");
        let q = f.group("Q").unwrap();
        assert_eq!(q.oracle().kind(), OracleKind::Abelian);
        let m = f.group("M").unwrap();
        assert!(m.relation_test(&Word::from_raw(&[1, 1, 1, -2])));
        let k = f.hom("k").unwrap();
        assert_eq!(k.images[1], Word::empty());
        assert_eq!(f.sentence("s").unwrap().arity(), 2);
        let y = f.group("Y").unwrap();
        assert_eq!(y.names().names(), ["a", "b", "x", "y"]);
        assert!(y.relation_test(&Word::from_raw(&[1, 1, -3])));
        assert_eq!(f.last_group(), Some("Y"));
    }

    #[test]
    fn errors_have_positions() {
        let e =
            SpecFile::parse("group F2 = free(a,b)\ngroup G = amalgam(F2, H; a = a)\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 2,
                    column: 23,
                    ..
                }
            ),
            "{e}"
        );
        let e = SpecFile::parse("group F2 = free(a,b)\ngroup Q = quotient(F2; relators=[\"a c\"])")
            .unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = SpecFile::parse("group G = free(a,b\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        assert!(SpecFile::parse("hom h = (F2 -> Z; a: \"s\")").is_err());
    }

    #[test]
    fn inline() {
        let env = SpecFile::default();
        let g = inline_group("abelian 1 mod 5", &env).unwrap();
        assert!(g.relation_test(&Word::gen(1).pow(5)));
        assert_eq!(inline_group("free 2", &env).unwrap().arity(), 2);
        assert_eq!(inline_group("integers 1 3", &env).unwrap().arity(), 2);
        assert_eq!(
            inline_group("free_product(free(a), free(b))", &env)
                .unwrap()
                .arity(),
            2
        );
    }
}
