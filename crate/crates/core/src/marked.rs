//! Marked groups: an ambient oracle with an ordered tuple of marking words.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::oracle::{AbelianData, ElementKey, Oracle};
use crate::word::{self, Letter, Word};

/// Default vertex cap for ball construction.
pub const DEFAULT_VERTEX_CAP: usize = 2_000_000;

/// Remembers how a group was assembled from a one-edge splitting (edge 0
/// of its graph oracle), so that Dehn twists can be written down.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    /// Marking letters `0..split` come from the first factor, the rest from
    /// the second.
    Amalgam { split: usize },
    /// Marking letter `stable` (0-based) is the stable letter.
    Hnn { stable: usize },
}

/// Provenance of a centralizer extension: the marking is the base marking
/// followed by `p` new letters commuting with `z` (a word over the base
/// marking).
#[derive(Clone, Debug)]
pub struct CentralizerExtension {
    pub base: Box<MarkedGroup>,
    pub z: Word,
    pub p: usize,
}

#[derive(Clone, Debug)]
pub struct MarkedGroup {
    oracle: Oracle,
    marking: Vec<Word>,
    local: Oracle,
    names: Alphabet,
    ambient_names: Alphabet,
    presentation: Option<Vec<Word>>,
    pub name: String,
    pub splitting: Option<Splitting>,
    pub extension: Option<CentralizerExtension>,
}

impl MarkedGroup {
    pub fn new(
        oracle: Oracle,
        marking: Vec<Word>,
        names: Alphabet,
        ambient_names: Alphabet,
    ) -> Result<MarkedGroup> {
        if names.len() != marking.len() {
            return Err(Error::Arity {
                expected: marking.len(),
                found: names.len(),
            });
        }
        if ambient_names.len() != oracle.alphabet_size() {
            return Err(Error::Arity {
                expected: oracle.alphabet_size(),
                found: ambient_names.len(),
            });
        }
        let identity = marking.len() == oracle.alphabet_size()
            && marking
                .iter()
                .enumerate()
                .all(|(i, w)| *w == Word::gen(i + 1));
        let local = if identity {
            oracle.clone()
        } else {
            Oracle::substitution(&oracle, marking.clone())?
        };
        let presentation = if identity { oracle.relators() } else { None };
        Ok(MarkedGroup {
            oracle,
            marking,
            local,
            names,
            ambient_names,
            presentation,
            name: String::new(),
            splitting: None,
            extension: None,
        })
    }

    /// The ambient group marked by its own generators.
    pub fn standard(oracle: Oracle, names: Alphabet) -> Result<MarkedGroup> {
        let marking = (1..=oracle.alphabet_size()).map(Word::gen).collect();
        MarkedGroup::new(oracle, marking, names.clone(), names)
    }

    pub fn free(n: usize) -> MarkedGroup {
        let mut m = MarkedGroup::standard(Oracle::free(n), Alphabet::letters(n)).unwrap();
        m.name = format!("F{n}");
        m
    }

    pub fn free_abelian(n: usize) -> MarkedGroup {
        let mut m =
            MarkedGroup::standard(Oracle::abelian(AbelianData::free(n)), Alphabet::standard(n))
                .unwrap();
        m.name = if n == 1 { "Z".into() } else { format!("Z^{n}") };
        m
    }

    pub fn abelian(data: AbelianData) -> MarkedGroup {
        let n = data.rank;
        MarkedGroup::standard(Oracle::abelian(data), Alphabet::standard(n)).unwrap()
    }

    /// `(Z/d, (1))`.
    pub fn cyclic(d: i64) -> MarkedGroup {
        let mut m = MarkedGroup::abelian(AbelianData::from_moduli(&[d]));
        m.name = format!("Z/{d}");
        m
    }

    /// `(Z, (k_1, ..., k_n))`.
    pub fn integers_marked(ks: &[i64]) -> MarkedGroup {
        let o = Oracle::abelian(AbelianData::free(1));
        let marking = ks.iter().map(|&k| Word::gen(1).pow(k)).collect();
        let mut m = MarkedGroup::new(
            o,
            marking,
            Alphabet::standard(ks.len()),
            Alphabet::standard(1),
        )
        .unwrap();
        m.name = format!(
            "(Z,({}))",
            ks.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
        );
        m
    }

    pub fn with_name(mut self, name: impl Into<String>) -> MarkedGroup {
        self.name = name.into();
        self
    }

    pub fn with_names(mut self, names: Alphabet) -> Result<MarkedGroup> {
        if names.len() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                found: names.len(),
            });
        }
        self.names = names;
        Ok(self)
    }

    /// Attaches known relators over the marking letters.
    pub fn with_presentation(mut self, relators: Vec<Word>) -> MarkedGroup {
        self.presentation = Some(relators);
        self
    }

    pub fn arity(&self) -> usize {
        self.marking.len()
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    /// The oracle of the marked group itself, over the marking letters.
    pub fn local_oracle(&self) -> &Oracle {
        &self.local
    }

    pub fn marking(&self) -> &[Word] {
        &self.marking
    }

    pub fn names(&self) -> &Alphabet {
        &self.names
    }

    pub fn ambient_names(&self) -> &Alphabet {
        &self.ambient_names
    }

    /// Relators over the marking letters, when a finite presentation is known.
    pub fn presentation(&self) -> Option<&[Word]> {
        self.presentation.as_deref()
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        let w = self.names.parse(text)?;
        Ok(w)
    }

    pub fn format(&self, w: &Word) -> String {
        self.names.format(w)
    }

    pub fn relation_test(&self, w: &Word) -> bool {
        self.local.decide(w)
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.local.equal(u, v)
    }

    pub fn to_ambient(&self, w: &Word) -> Word {
        w.substitute(&self.marking)
    }

    /// The marked group `(<T>, T)`.
    pub fn remark_subgroup(&self, t: &[Word]) -> Result<MarkedGroup> {
        for w in t {
            if w.max_index() > self.arity() {
                return Err(Error::Invalid(format!(
                    "{w} uses letters beyond the marking"
                )));
            }
        }
        let marking: Vec<Word> = t.iter().map(|w| w.substitute(&self.marking)).collect();
        let names = Alphabet::standard(t.len());
        let mut m = MarkedGroup::new(
            self.oracle.clone(),
            marking,
            names,
            self.ambient_names.clone(),
        )?;
        m.name = format!(
            "{}<{}>",
            self.name,
            t.iter()
                .map(|w| self.format(w))
                .collect::<Vec<_>>()
                .join(", ")
        );
        Ok(m)
    }

    pub fn relations_upto(&self, l: usize) -> RelationSet {
        let mut words = Vec::new();
        for len in 0..=l {
            let layer = word::reduced_words_of_length(self.arity(), len);
            words.par_extend(layer.into_par_iter().filter(|w| self.relation_test(w)));
        }
        RelationSet { bound: l, words }
    }

    pub fn ball(&self, r: usize) -> Result<Ball> {
        self.ball_with_cap(r, DEFAULT_VERTEX_CAP)
    }

    pub fn ball_with_cap(&self, r: usize, cap: usize) -> Result<Ball> {
        let index = BallIndex::build(self, r, cap)?;
        let n = self.arity();
        let edges: Vec<Vec<Option<usize>>> = index
            .vertices
            .par_iter()
            .map(|v| {
                (0..2 * n)
                    .map(|d| {
                        let w = v.mul(&Word::letter(Letter::from_rank(d)));
                        index.locate(self, &w)
                    })
                    .collect()
            })
            .collect();
        Ok(Ball {
            radius: r,
            arity: n,
            vertices: index.vertices,
            edges,
        })
    }

    /// Shortlex representatives of the radius-`r` ball, without edges.
    pub fn ball_vertices(&self, r: usize) -> Result<Vec<Word>> {
        Ok(BallIndex::build(self, r, DEFAULT_VERTEX_CAP)?.vertices)
    }

    pub fn centralizer_trace(&self, x: &Word, r: usize) -> Result<Vec<Word>> {
        if self.relation_test(x) {
            return Err(Error::Precondition(format!(
                "{} is trivial",
                self.format(x)
            )));
        }
        let verts = self.ball_vertices(r)?;
        Ok(verts
            .into_par_iter()
            .filter(|v| self.relation_test(&Word::commutator(v, x)))
            .collect())
    }
}

/// Canonical ball representatives with a lookup structure.
pub struct BallIndex {
    pub vertices: Vec<Word>,
    keys: HashMap<ElementKey, Vec<usize>>,
}

impl BallIndex {
    pub fn build(m: &MarkedGroup, r: usize, cap: usize) -> Result<BallIndex> {
        let o = m.local_oracle();
        let n = m.arity();
        let mut idx = BallIndex {
            vertices: vec![Word::empty()],
            keys: HashMap::new(),
        };
        idx.keys.insert(o.element_key(&Word::empty()), vec![0]);
        let mut layer_start = 0;
        for _ in 0..r {
            let layer_end = idx.vertices.len();
            let cands: Vec<Word> = idx.vertices[layer_start..layer_end]
                .iter()
                .flat_map(|v| {
                    (0..2 * n).filter_map(move |d| {
                        let l = Letter::from_rank(d);
                        if v.letters().last() == Some(&l.inverse()) {
                            None
                        } else {
                            Some(v.mul(&Word::letter(l)))
                        }
                    })
                })
                .collect();
            // phase 1: compare against the vertices of earlier layers
            let screened: Vec<(Word, ElementKey, bool)> = cands
                .into_par_iter()
                .map(|w| {
                    let key = o.element_key(&w);
                    let known = idx.matches(o, &key, &w, layer_end);
                    (w, key, known)
                })
                .collect();
            // phase 2: deduplicate within the new layer, in shortlex order
            for (w, key, known) in screened {
                if known {
                    continue;
                }
                let exists = match &key {
                    ElementKey::Exact(_) => idx.keys.contains_key(&key),
                    ElementKey::Bucket(_) => idx.keys.get(&key).is_some_and(|b| {
                        b.iter()
                            .filter(|&&i| i >= layer_end)
                            .any(|&i| o.equal(&w, &idx.vertices[i]))
                    }),
                };
                if exists {
                    continue;
                }
                if idx.vertices.len() >= cap {
                    return Err(Error::ResourceLimit {
                        what: format!("ball of radius {r}"),
                        limit: cap,
                    });
                }
                idx.keys.entry(key).or_default().push(idx.vertices.len());
                idx.vertices.push(w);
            }
            layer_start = layer_end;
            if layer_start == idx.vertices.len() {
                break;
            }
        }
        Ok(idx)
    }

    /// Whether `w` equals one of the first `limit` vertices.
    fn matches(&self, o: &Oracle, key: &ElementKey, w: &Word, limit: usize) -> bool {
        match self.keys.get(key) {
            None => false,
            Some(b) => match key {
                ElementKey::Exact(_) => b.iter().any(|&i| i < limit),
                ElementKey::Bucket(_) => b
                    .iter()
                    .filter(|&&i| i < limit)
                    .any(|&i| o.equal(w, &self.vertices[i])),
            },
        }
    }

    /// Index of the vertex equal to `w`, if any.
    pub fn locate(&self, m: &MarkedGroup, w: &Word) -> Option<usize> {
        let o = m.local_oracle();
        let key = o.element_key(w);
        let b = self.keys.get(&key)?;
        match key {
            ElementKey::Exact(_) => b.first().copied(),
            ElementKey::Bucket(_) => b.iter().copied().find(|&i| o.equal(w, &self.vertices[i])),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub radius: usize,
    pub arity: usize,
    /// Shortlex-minimal representatives, identity first.
    pub vertices: Vec<Word>,
    /// For each vertex, targets along `s1, s1^-1, s2, ...`.
    pub edges: Vec<Vec<Option<usize>>>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Versioned line-oriented text.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        writeln!(s, "ball v1").unwrap();
        writeln!(s, "radius {}", self.radius).unwrap();
        writeln!(s, "generators {}", self.arity).unwrap();
        writeln!(s, "vertices {}", self.vertices.len()).unwrap();
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(s, "{i} {v}").unwrap();
        }
        writeln!(s, "edges").unwrap();
        for (i, row) in self.edges.iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .map(|t| t.map_or("-".to_string(), |t| t.to_string()))
                .collect();
            writeln!(s, "{i}: {}", cells.join(" ")).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Ball> {
        let mut lines = text.lines().enumerate();
        let mut next = |what: &str| -> Result<(usize, &str)> {
            lines
                .next()
                .map(|(i, l)| (i + 1, l))
                .ok_or_else(|| Error::parse(0, 0, format!("missing {what}")))
        };
        let (ln, header) = next("header")?;
        if header != "ball v1" {
            return Err(Error::parse(ln, 1, "expected `ball v1`"));
        }
        let field = |(ln, l): (usize, &str), key: &str| -> Result<usize> {
            l.strip_prefix(key)
                .and_then(|r| r.trim().parse().ok())
                .ok_or_else(|| Error::parse(ln, 1, format!("expected `{key} <n>`")))
        };
        let radius = field(next("radius")?, "radius")?;
        let arity = field(next("generators")?, "generators")?;
        let count = field(next("vertices")?, "vertices")?;
        let names = Alphabet::standard(arity);
        let mut vertices = Vec::with_capacity(count);
        for _ in 0..count {
            let (ln, l) = next("vertex")?;
            let (_, w) = l
                .split_once(' ')
                .ok_or_else(|| Error::parse(ln, 1, "expected `<index> <word>`"))?;
            vertices.push(names.parse(w).map_err(|e| match e {
                Error::Parse {
                    column, message, ..
                } => Error::parse(ln, column, message),
                e => e,
            })?);
        }
        let (ln, l) = next("edges")?;
        if l != "edges" {
            return Err(Error::parse(ln, 1, "expected `edges`"));
        }
        let mut edges = Vec::with_capacity(count);
        for _ in 0..count {
            let (ln, l) = next("edge row")?;
            let (_, cells) = l
                .split_once(": ")
                .ok_or_else(|| Error::parse(ln, 1, "expected `<index>: <targets>`"))?;
            let row = cells
                .split(' ')
                .map(|c| {
                    if c == "-" {
                        Ok(None)
                    } else {
                        c.parse().map(Some)
                    }
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::parse(ln, 1, "bad edge target"))?;
            edges.push(row);
        }
        Ok(Ball {
            radius,
            arity,
            vertices,
            edges,
        })
    }

    /// Graphviz rendering; each Cayley edge appears once, along its
    /// positive generator.
    pub fn to_dot(&self, names: &Alphabet) -> String {
        let mut s = String::from("digraph ball {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(s, "  n{i} [label=\"{}\"];", names.format(v)).unwrap();
        }
        for (i, row) in self.edges.iter().enumerate() {
            for j in 0..self.arity {
                if let Some(t) = row[2 * j] {
                    writeln!(s, "  n{i} -> n{t} [label=\"{}\"];", j + 1).unwrap();
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// All relations of length at most `bound`, in shortlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    pub bound: usize,
    pub words: Vec<Word>,
}

impl RelationSet {
    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }
}

/// Checks every relator of a presentation on the candidate quotient.
pub fn verify_marked_quotient(relators: &[Word], h: &MarkedGroup) -> Result<bool> {
    for r in relators {
        if r.max_index() > h.arity() {
            return Err(Error::Arity {
                expected: h.arity(),
                found: r.max_index(),
            });
        }
    }
    Ok(relators.iter().all(|r| h.relation_test(r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_balls() {
        assert_eq!(MarkedGroup::free(2).ball(1).unwrap().len(), 5);
        let z = MarkedGroup::free_abelian(1).ball(2).unwrap();
        assert_eq!(z.len(), 5);
        assert_eq!(MarkedGroup::cyclic(5).ball(2).unwrap().len(), 5);
        assert_eq!(MarkedGroup::cyclic(4).ball(2).unwrap().len(), 4);
    }

    #[test]
    fn ball_edges_and_roundtrip() {
        let b = MarkedGroup::free_abelian(2).ball(2).unwrap();
        assert_eq!(b.len(), 13);
        let text = b.serialize();
        assert_eq!(Ball::parse(&text).unwrap(), b);
        // s1 s2 and s2 s1 are the same vertex
        let s1 = b.edges[0][0].unwrap();
        let s2 = b.edges[0][2].unwrap();
        assert_eq!(b.edges[s1][2], b.edges[s2][0]);
    }

    #[test]
    fn prefix_closed() {
        let b = MarkedGroup::cyclic(7).ball(4).unwrap();
        for v in &b.vertices {
            for k in 0..v.len() {
                let p = Word::reduce(v.letters()[..k].iter().copied());
                assert!(b.vertices.contains(&p));
            }
        }
    }

    #[test]
    fn relations_of_z2() {
        let rs = MarkedGroup::free_abelian(2).relations_upto(4);
        assert!(rs.contains(&Word::commutator(&Word::gen(1), &Word::gen(2))));
        assert!(rs.words.iter().all(|w| w.is_empty() || w.len() == 4));
    }

    #[test]
    fn quotient_check() {
        let c = Word::commutator(&Word::gen(1), &Word::gen(2));
        assert!(
            verify_marked_quotient(&[c.clone()], &MarkedGroup::integers_marked(&[1, 3])).unwrap()
        );
        assert!(!verify_marked_quotient(&[c], &MarkedGroup::free(2)).unwrap());
    }

    #[test]
    fn centralizer_in_free_group() {
        let tr = MarkedGroup::free(2)
            .centralizer_trace(&Word::gen(1), 3)
            .unwrap();
        assert_eq!(tr.len(), 7);
    }
}
