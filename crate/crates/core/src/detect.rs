//! Finite-radius detectors for group properties and a falsifier for
//! universal sentences.

use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::lattice::{rank, Matrix};
use crate::marked::MarkedGroup;
use crate::word::{self, left_normed_commutator, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum Verdict<W> {
    Violated(W),
    NoWitnessWithin(usize),
}

impl<W> Verdict<W> {
    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Violated(w) => Some(w),
            Verdict::NoWitnessWithin(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Abelian,
    /// Nilpotent of class at most `k`.
    Nilpotent(usize),
    /// Torsion of exponent at most `E`.
    Torsion(u32),
    CommutativeTransitive,
    Csa,
    /// Generated by at most `k` elements; `max_len` bounds the words that
    /// express the generators.
    RankAtMost {
        k: usize,
        max_len: usize,
    },
}

impl Property {
    pub fn parse(s: &str) -> Result<Property> {
        let (head, arg) = match s.split_once(['(', ':', '=']) {
            Some((h, a)) => (h.trim(), Some(a.trim_end_matches(')').trim())),
            None => (s.trim(), None),
        };
        let num = |a: Option<&str>| -> Result<usize> {
            a.and_then(|x| x.split(',').next())
                .and_then(|x| x.trim().parse().ok())
                .ok_or_else(|| Error::Invalid(format!("property `{s}` needs a numeric argument")))
        };
        Ok(match head {
            "abelian" => Property::Abelian,
            "nilpotent" => Property::Nilpotent(num(arg)?),
            "torsion" => Property::Torsion(num(arg)? as u32),
            "ct" | "commutative_transitive" => Property::CommutativeTransitive,
            "csa" => Property::Csa,
            "rank" | "rank_at_most" => {
                let k = num(arg)?;
                let max_len = arg
                    .and_then(|a| a.split(',').nth(1))
                    .and_then(|x| x.trim().parse().ok())
                    .unwrap_or(3);
                Property::RankAtMost { k, max_len }
            }
            _ => return Err(Error::Invalid(format!("unknown property `{s}`"))),
        })
    }
}

/// A tuple of elements found by a detector. For torsion, `exponent` is the
/// order witnessed; for rank, `expressions[i]` writes generator `i` in the
/// tuple (a certificate that the property holds).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub elements: Vec<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub expressions: Vec<Word>,
}

impl Witness {
    fn of(elements: Vec<Word>) -> Witness {
        Witness {
            elements,
            exponent: None,
            expressions: Vec::new(),
        }
    }
}

pub fn detect(m: &MarkedGroup, property: Property, r: usize) -> Result<Verdict<Witness>> {
    if r == 0 {
        return Err(Error::Precondition("detectors need R >= 1".into()));
    }
    match property {
        Property::Abelian => Ok(detect_nilpotent(m, 1, r)),
        Property::Nilpotent(k) => Ok(detect_nilpotent(m, k, r)),
        Property::Torsion(e) => detect_torsion(m, e, r),
        Property::CommutativeTransitive => {
            let verts = nontrivial_ball(m, r)?;
            Ok(ct_search(m, &verts, r))
        }
        Property::Csa => {
            let verts = nontrivial_ball(m, r)?;
            let pair = csa_pair_search(m, &verts);
            if let Some(w) = pair {
                return Ok(Verdict::Violated(Witness::of(w)));
            }
            Ok(ct_search(m, &verts, r))
        }
        Property::RankAtMost { k, max_len } => rank_search(m, k, max_len, r),
    }
}

/// Re-checks a violation witness against the defining (in)equalities.
pub fn verify_witness(m: &MarkedGroup, property: Property, w: &Witness) -> bool {
    let t = |x: &Word| m.relation_test(x);
    let e = &w.elements;
    match property {
        Property::Abelian | Property::Nilpotent(_) => {
            !e.is_empty() && !t(&left_normed_commutator(e))
        }
        Property::Torsion(max) => match (e.first(), w.exponent) {
            (Some(g), Some(k)) => k >= 2 && k <= max && !t(g) && t(&g.pow(k as i64)),
            _ => false,
        },
        Property::CommutativeTransitive | Property::Csa if e.len() == 3 => {
            e.iter().all(|x| !t(x))
                && t(&Word::commutator(&e[0], &e[1]))
                && t(&Word::commutator(&e[1], &e[2]))
                && !t(&Word::commutator(&e[0], &e[2]))
        }
        Property::Csa if e.len() == 2 => {
            let (g, h) = (&e[0], &e[1]);
            t(&Word::commutator(h, &h.conjugate_by(g))) && !t(&Word::commutator(g, h))
        }
        Property::RankAtMost { k, .. } => {
            e.len() <= k
                && w.expressions.len() == m.arity()
                && w.expressions
                    .iter()
                    .enumerate()
                    .all(|(i, x)| m.equal(&x.substitute(e), &Word::gen(i + 1)))
        }
        _ => false,
    }
}

fn detect_nilpotent(m: &MarkedGroup, k: usize, r: usize) -> Verdict<Witness> {
    let n = m.arity();
    let letters: Vec<Word> = (0..2 * n)
        .map(|d| Word::letter(word::Letter::from_rank(d)))
        .collect();
    // left-normed commutators of weight k+1 in the generators and inverses,
    // in lexicographic order of the entries
    let mut idx = vec![0usize; k + 1];
    loop {
        let entries: Vec<Word> = idx.iter().map(|&i| letters[i].clone()).collect();
        if !m.relation_test(&left_normed_commutator(&entries)) {
            return Verdict::Violated(Witness::of(entries));
        }
        let mut pos = k + 1;
        loop {
            if pos == 0 {
                return Verdict::NoWitnessWithin(r);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < letters.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn detect_torsion(m: &MarkedGroup, max_exp: u32, r: usize) -> Result<Verdict<Witness>> {
    let verts = nontrivial_ball(m, r)?;
    let hit = verts.par_iter().find_map_first(|g| {
        (2..=max_exp)
            .find(|&e| m.relation_test(&g.pow(e as i64)))
            .map(|e| (g.clone(), e))
    });
    Ok(match hit {
        Some((g, e)) => Verdict::Violated(Witness {
            elements: vec![g],
            exponent: Some(e),
            expressions: Vec::new(),
        }),
        None => Verdict::NoWitnessWithin(r),
    })
}

fn nontrivial_ball(m: &MarkedGroup, r: usize) -> Result<Vec<Word>> {
    let mut v = m.ball_vertices(r)?;
    v.remove(0);
    Ok(v)
}

/// Bit matrix of commutation among `verts`.
struct Commutation {
    words: usize,
    bits: Vec<u64>,
}

impl Commutation {
    fn build(m: &MarkedGroup, verts: &[Word]) -> Commutation {
        let n = verts.len();
        let words = n.div_ceil(64);
        let rows: Vec<Vec<u64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0u64; words];
                for j in 0..n {
                    if i == j || m.relation_test(&Word::commutator(&verts[i], &verts[j])) {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                row
            })
            .collect();
        Commutation {
            words,
            bits: rows.concat(),
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.row(i)[j / 64] >> (j % 64) & 1 == 1
    }
}

/// Lexicographically least `(a, b, c)` with `[a,b] = [b,c] = 1 != [a,c]`.
fn ct_search(m: &MarkedGroup, verts: &[Word], r: usize) -> Verdict<Witness> {
    let c = Commutation::build(m, verts);
    let n = verts.len();
    let hit = (0..n).into_par_iter().find_map_first(|a| {
        let ra = c.row(a);
        for b in 0..n {
            if !c.get(a, b) {
                continue;
            }
            let rb = c.row(b);
            for (k, (x, y)) in rb.iter().zip(ra).enumerate() {
                let diff = x & !y;
                if diff != 0 {
                    let cidx = k * 64 + diff.trailing_zeros() as usize;
                    return Some((a, b, cidx));
                }
            }
        }
        None
    });
    match hit {
        Some((a, b, cc)) => Verdict::Violated(Witness::of(vec![
            verts[a].clone(),
            verts[b].clone(),
            verts[cc].clone(),
        ])),
        None => Verdict::NoWitnessWithin(r),
    }
}

/// Lexicographically least `(g, h)` with `[h, g h g^-1] = 1 != [g, h]`.
fn csa_pair_search(m: &MarkedGroup, verts: &[Word]) -> Option<Vec<Word>> {
    verts.par_iter().find_map_first(|g| {
        verts.iter().find_map(|h| {
            let ok = m.relation_test(&Word::commutator(h, &h.conjugate_by(g)))
                && !m.relation_test(&Word::commutator(g, h));
            ok.then(|| vec![g.clone(), h.clone()])
        })
    })
}

fn rank_search(m: &MarkedGroup, k: usize, max_len: usize, r: usize) -> Result<Verdict<Witness>> {
    let n = m.arity();
    if k >= n {
        let gens: Vec<Word> = (1..=n).map(Word::gen).collect();
        return Ok(Verdict::Violated(Witness {
            elements: gens.clone(),
            exponent: None,
            expressions: gens,
        }));
    }
    let verts = nontrivial_ball(m, r)?;
    let exprs = word::reduced_words_upto(k, max_len);
    // k-subsets in lexicographic order of indices
    let firsts: Vec<usize> = (0..verts.len()).collect();
    let hit = firsts.par_iter().find_map_first(|&first| {
        let mut idx = vec![first];
        rank_extend(m, &verts, &exprs, k, &mut idx)
    });
    Ok(match hit {
        Some((tuple, expressions)) => Verdict::Violated(Witness {
            elements: tuple,
            exponent: None,
            expressions,
        }),
        None => Verdict::NoWitnessWithin(r),
    })
}

#[allow(clippy::type_complexity)]
fn rank_extend(
    m: &MarkedGroup,
    verts: &[Word],
    exprs: &[Word],
    k: usize,
    idx: &mut Vec<usize>,
) -> Option<(Vec<Word>, Vec<Word>)> {
    if idx.len() == k {
        let tuple: Vec<Word> = idx.iter().map(|&i| verts[i].clone()).collect();
        let mut found = Vec::new();
        for g in 1..=m.arity() {
            let target = Word::gen(g);
            let e = exprs
                .iter()
                .find(|x| m.equal(&x.substitute(&tuple), &target))?;
            found.push(e.clone());
        }
        return Some((tuple, found));
    }
    let start = idx.last().unwrap() + 1;
    for i in start..verts.len() {
        idx.push(i);
        if let Some(h) = rank_extend(m, verts, exprs, k, idx) {
            return Some(h);
        }
        idx.pop();
    }
    None
}

/// First Betti number of `<n generators | relators>`.
pub fn betti(n: usize, relators: &[Word]) -> usize {
    if relators.is_empty() {
        return n;
    }
    let rows: Vec<Vec<i64>> = relators.iter().map(|r| r.exponent_sums(n)).collect();
    n - rank(&Matrix::from_rows(rows, n))
}

/// `forall x_1 ... x_p : S_1 | ... | S_q`, each system a conjunction of
/// equations `w = 1` and inequations `w != 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniversalSentence {
    pub variables: Vec<String>,
    pub systems: Vec<Vec<(Word, bool)>>,
}

impl UniversalSentence {
    pub fn arity(&self) -> usize {
        self.variables.len()
    }

    pub fn parse(text: &str) -> Result<UniversalSentence> {
        let text = text.trim();
        let rest = text
            .strip_prefix("forall")
            .ok_or_else(|| Error::parse(1, 1, "sentence must start with `forall`"))?;
        let colon = rest
            .find(':')
            .ok_or_else(|| Error::parse(1, text.len(), "expected `:` after the variables"))?;
        let variables: Vec<String> = rest[..colon]
            .split_whitespace()
            .map(str::to_string)
            .collect();
        if variables.is_empty() {
            return Err(Error::parse(1, 7, "no variables bound"));
        }
        let alphabet = Alphabet::new(variables.clone())?;
        let body_offset = text.len() - rest.len() + colon + 1;
        let body = &rest[colon + 1..];
        let mut systems = Vec::new();
        for (start, part) in split_top(body, '|') {
            let mut system = Vec::new();
            let (inner, shift) = strip_parens(part);
            for (s2, atom) in split_top(inner, '&') {
                let col = body_offset + start + shift + s2 + 1;
                system.push(parse_atom(&alphabet, atom, col)?);
            }
            systems.push(system);
        }
        Ok(UniversalSentence { variables, systems })
    }

    /// Whether the tuple satisfies the body.
    pub fn holds(&self, m: &MarkedGroup, tuple: &[Word]) -> bool {
        self.systems.iter().any(|sys| {
            sys.iter()
                .all(|(w, eq)| m.relation_test(&w.substitute(tuple)) == *eq)
        })
    }

    pub fn max_word_length(&self) -> usize {
        self.systems
            .iter()
            .flatten()
            .map(|(w, _)| w.len())
            .max()
            .unwrap_or(0)
    }
}

fn split_top(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// Removes one pair of enclosing parentheses, if they match each other.
fn strip_parens(s: &str) -> (&str, usize) {
    let lead = s.len() - s.trim_start().len();
    let t = s.trim();
    if !t.starts_with('(') || !t.ends_with(')') {
        return (s, 0);
    }
    let mut depth = 0;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i != t.len() - 1 {
                    return (s, 0);
                }
            }
            _ => {}
        }
    }
    (&t[1..t.len() - 1], lead + 1)
}

fn parse_atom(alphabet: &Alphabet, atom: &str, column: usize) -> Result<(Word, bool)> {
    let (lhs, rhs, eq) = if let Some((l, r)) = atom.split_once("!=") {
        (l, r, false)
    } else if let Some((l, r)) = atom.split_once('=') {
        (l, r, true)
    } else {
        return Err(Error::parse(1, column, "expected `=` or `!=`"));
    };
    let relocate = |e: Error| match e {
        Error::Parse {
            column: c, message, ..
        } => Error::parse(1, column + c - 1, message),
        e => e,
    };
    let l = alphabet.parse(lhs).map_err(relocate)?;
    let r = alphabet.parse(rhs).map_err(relocate)?;
    Ok((l.mul(&r.inverse()), eq))
}

/// Exhaustive search for a tuple of ball elements falsifying the sentence.
pub fn falsify_universal(
    m: &MarkedGroup,
    sentence: &UniversalSentence,
    r: usize,
) -> Result<Verdict<Vec<Word>>> {
    if r == 0 {
        return Err(Error::Precondition("falsifier needs R >= 1".into()));
    }
    let verts = m.ball_vertices(r)?;
    let p = sentence.arity();
    let hit = verts.par_iter().find_map_first(|first| {
        let mut tuple = vec![first.clone()];
        falsify_extend(m, sentence, &verts, p, &mut tuple)
    });
    Ok(match hit {
        Some(t) => Verdict::Violated(t),
        None => Verdict::NoWitnessWithin(r),
    })
}

fn falsify_extend(
    m: &MarkedGroup,
    s: &UniversalSentence,
    verts: &[Word],
    p: usize,
    tuple: &mut Vec<Word>,
) -> Option<Vec<Word>> {
    if tuple.len() == p {
        return (!s.holds(m, tuple)).then(|| tuple.clone());
    }
    for v in verts {
        tuple.push(v.clone());
        if let Some(t) = falsify_extend(m, s, verts, p, tuple) {
            return Some(t);
        }
        tuple.pop();
    }
    None
}
