//! Word-problem oracles: membership tests for a normal subgroup of a free
//! group, one per supported ambient group.

mod dehn;
mod graph;

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Matrix, RowLattice};
use crate::word::Word;

pub use dehn::{small_cancellation_check, DehnOracle, SmallCancellation};
pub use graph::{EdgeSpec, GraphOfGroupsSpec, GraphOracle, Syllable, VertexGroup};

const MEMO_CAP: usize = 1 << 20;

/// A finitely generated abelian group `Z^rank / <relations>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianData {
    pub rank: usize,
    pub relations: Vec<Vec<i64>>,
}

impl AbelianData {
    pub fn new(rank: usize, relations: Vec<Vec<i64>>) -> Result<AbelianData> {
        for r in &relations {
            if r.len() != rank {
                return Err(Error::Arity {
                    expected: rank,
                    found: r.len(),
                });
            }
        }
        Ok(AbelianData { rank, relations })
    }

    pub fn free(rank: usize) -> AbelianData {
        AbelianData {
            rank,
            relations: Vec::new(),
        }
    }

    /// `Z/d1 + ... + Z/dk`; a zero modulus leaves a free summand.
    pub fn from_moduli(moduli: &[i64]) -> AbelianData {
        let rank = moduli.len();
        let relations = moduli
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| {
                let mut row = vec![0; rank];
                row[i] = d;
                row
            })
            .collect();
        AbelianData { rank, relations }
    }

    pub fn matrix(&self) -> Matrix<i64> {
        Matrix::from_rows(self.relations.clone(), self.rank)
    }

    pub fn lattice(&self) -> RowLattice<i64> {
        RowLattice::new(&self.matrix())
    }

    /// Rank of the free part and the nontrivial invariant factors.
    pub fn invariants(&self) -> (usize, Vec<i64>) {
        let s = crate::lattice::smith(&self.matrix());
        (self.rank - s.rank(), s.torsion())
    }

    pub fn is_trivial(&self) -> bool {
        let (r, t) = self.invariants();
        r == 0 && t.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    Free,
    Abelian,
    FiniteCyclic,
    Product,
    Substitution,
    GraphOfGroups,
    Dehn,
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OracleKind::Free => "free",
            OracleKind::Abelian => "abelian",
            OracleKind::FiniteCyclic => "finite_cyclic",
            OracleKind::Product => "product",
            OracleKind::Substitution => "substitution",
            OracleKind::GraphOfGroups => "graph_of_groups",
            OracleKind::Dehn => "dehn",
        };
        f.write_str(s)
    }
}

/// Hashable data attached to an element. Exact keys are complete invariants;
/// buckets only split the group into classes that must still be compared
/// with [`Oracle::decide`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementKey {
    Exact(Vec<i64>),
    Bucket(Vec<i64>),
}

pub(crate) enum Body {
    Free,
    Abelian {
        data: AbelianData,
        lattice: RowLattice<i64>,
    },
    Product(Oracle, Oracle),
    Substitution {
        base: Oracle,
        images: Vec<Word>,
    },
    Graph(GraphOracle),
    Dehn(DehnOracle),
}

struct Inner {
    size: usize,
    body: Body,
    memo: Option<DashMap<Word, bool>>,
}

/// Cheap to clone; clones share the memo table.
#[derive(Clone)]
pub struct Oracle {
    inner: Arc<Inner>,
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Oracle({}, {} letters)",
            self.kind(),
            self.alphabet_size()
        )
    }
}

impl Oracle {
    fn build(size: usize, body: Body, memoize: bool) -> Oracle {
        Oracle {
            inner: Arc::new(Inner {
                size,
                body,
                memo: memoize.then(DashMap::new),
            }),
        }
    }

    pub fn free(m: usize) -> Oracle {
        Oracle::build(m, Body::Free, false)
    }

    pub fn abelian(data: AbelianData) -> Oracle {
        let lattice = data.lattice();
        Oracle::build(data.rank, Body::Abelian { data, lattice }, false)
    }

    pub fn product(a: &Oracle, b: &Oracle) -> Oracle {
        Oracle::build(
            a.alphabet_size() + b.alphabet_size(),
            Body::Product(a.clone(), b.clone()),
            false,
        )
    }

    pub fn substitution(base: &Oracle, images: Vec<Word>) -> Result<Oracle> {
        for w in &images {
            if w.max_index() > base.alphabet_size() {
                return Err(Error::Invalid(format!(
                    "image {w} uses letters beyond the base alphabet of size {}",
                    base.alphabet_size()
                )));
            }
        }
        // collapse nested substitutions so decide stays one level deep
        if let Body::Substitution {
            base: inner,
            images: inner_images,
        } = &base.inner.body
        {
            let composed = images.iter().map(|w| w.substitute(inner_images)).collect();
            return Oracle::substitution(inner, composed);
        }
        Ok(Oracle::build(
            images.len(),
            Body::Substitution {
                base: base.clone(),
                images,
            },
            false,
        ))
    }

    pub fn graph(spec: GraphOfGroupsSpec) -> Result<Oracle> {
        let g = GraphOracle::new(spec)?;
        Ok(Oracle::build(g.alphabet_size(), Body::Graph(g), true))
    }

    pub fn dehn(relators: &[Word], lambda: f64) -> Result<Oracle> {
        let d = DehnOracle::new(relators, lambda)?;
        Ok(Oracle::build(d.alphabet_size(), Body::Dehn(d), true))
    }

    pub fn dehn_with_size(relators: &[Word], lambda: f64, size: usize) -> Result<Oracle> {
        let d = DehnOracle::with_size(relators, lambda, size)?;
        Ok(Oracle::build(size, Body::Dehn(d), true))
    }

    pub fn alphabet_size(&self) -> usize {
        self.inner.size
    }

    pub fn kind(&self) -> OracleKind {
        match &self.inner.body {
            Body::Free => OracleKind::Free,
            Body::Abelian { data, .. }
                if data.rank == 1 && data.relations.iter().any(|r| r[0] != 0) =>
            {
                OracleKind::FiniteCyclic
            }
            Body::Abelian { .. } => OracleKind::Abelian,
            Body::Product(..) => OracleKind::Product,
            Body::Substitution { .. } => OracleKind::Substitution,
            Body::Graph(_) => OracleKind::GraphOfGroups,
            Body::Dehn(_) => OracleKind::Dehn,
        }
    }

    pub fn abelian_data(&self) -> Option<&AbelianData> {
        match &self.inner.body {
            Body::Abelian { data, .. } => Some(data),
            _ => None,
        }
    }

    pub fn graph_oracle(&self) -> Option<&GraphOracle> {
        match &self.inner.body {
            Body::Graph(g) => Some(g),
            _ => None,
        }
    }

    pub fn dehn_oracle(&self) -> Option<&DehnOracle> {
        match &self.inner.body {
            Body::Dehn(d) => Some(d),
            _ => None,
        }
    }

    /// Is `w` the identity?
    pub fn decide(&self, w: &Word) -> bool {
        if w.is_empty() {
            return true;
        }
        let Some(memo) = &self.inner.memo else {
            return self.decide_uncached(w);
        };
        if let Some(v) = memo.get(w) {
            return *v;
        }
        let v = self.decide_uncached(w);
        if memo.len() < MEMO_CAP {
            memo.insert(w.clone(), v);
        }
        v
    }

    fn decide_uncached(&self, w: &Word) -> bool {
        match &self.inner.body {
            Body::Free => w.is_empty(),
            Body::Abelian { lattice, .. } => lattice.contains(&w.exponent_sums(self.inner.size)),
            Body::Product(a, b) => {
                let (x, y) = split_product(w, a.alphabet_size());
                a.decide(&x) && b.decide(&y)
            }
            Body::Substitution { base, images } => base.decide(&w.substitute(images)),
            Body::Graph(g) => g.decide(w),
            Body::Dehn(d) => d.decide(w),
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.decide(&u.mul(&v.inverse()))
    }

    /// Exact normal form when the oracle has one.
    pub fn exact_key(&self, w: &Word) -> Option<Vec<i64>> {
        match &self.inner.body {
            Body::Free => Some(w.raw().into_iter().map(i64::from).collect()),
            Body::Abelian { lattice, .. } => {
                Some(lattice.reduce(&w.exponent_sums(self.inner.size)))
            }
            Body::Product(a, b) => {
                let (x, y) = split_product(w, a.alphabet_size());
                let mut k = a.exact_key(&x)?;
                let kb = b.exact_key(&y)?;
                // length prefix keeps the concatenation unambiguous
                k.insert(0, k.len() as i64);
                k.extend(kb);
                Some(k)
            }
            Body::Substitution { base, images } => base.exact_key(&w.substitute(images)),
            Body::Graph(_) | Body::Dehn(_) => None,
        }
    }

    /// A homomorphism to an abelian group, in canonical coordinates.
    pub fn abelian_key(&self, w: &Word) -> Vec<i64> {
        match &self.inner.body {
            Body::Free => w.exponent_sums(self.inner.size),
            Body::Abelian { lattice, .. } => lattice.reduce(&w.exponent_sums(self.inner.size)),
            Body::Product(a, b) => {
                let (x, y) = split_product(w, a.alphabet_size());
                let mut k = a.abelian_key(&x);
                k.extend(b.abelian_key(&y));
                k
            }
            Body::Substitution { base, images } => base.abelian_key(&w.substitute(images)),
            Body::Graph(g) => g.abelian_key(w),
            Body::Dehn(d) => d.abelian_key(w),
        }
    }

    pub fn element_key(&self, w: &Word) -> ElementKey {
        match self.exact_key(w) {
            Some(k) => ElementKey::Exact(k),
            None => ElementKey::Bucket(self.abelian_key(w)),
        }
    }

    /// A finite presentation over the oracle's alphabet, when one is known.
    pub fn relators(&self) -> Option<Vec<Word>> {
        match &self.inner.body {
            Body::Free => Some(Vec::new()),
            Body::Abelian { data, .. } => Some(abelian_relators(data)),
            Body::Product(a, b) => {
                let mut rels = a.relators()?;
                let m = a.alphabet_size();
                rels.extend(b.relators()?.iter().map(|r| r.shift(m)));
                for i in 1..=m {
                    for j in 1..=b.alphabet_size() {
                        rels.push(Word::commutator(&Word::gen(i), &Word::gen(m + j)));
                    }
                }
                Some(rels)
            }
            Body::Substitution { base, images } => {
                // a substitution that is the identity marking of its base
                let identity = images.len() == base.alphabet_size()
                    && images
                        .iter()
                        .enumerate()
                        .all(|(i, w)| *w == Word::gen(i + 1));
                if identity {
                    base.relators()
                } else {
                    None
                }
            }
            Body::Graph(g) => g.relators(),
            Body::Dehn(d) => Some(d.relators().to_vec()),
        }
    }
}

fn split_product(w: &Word, m: usize) -> (Word, Word) {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for &l in w.letters() {
        if l.index() <= m {
            x.push(l);
        } else {
            y.push(crate::word::Letter::new(l.index() - m, l.is_inverse()));
        }
    }
    (Word::reduce(x), Word::reduce(y))
}

/// Commutators of all generator pairs plus one relator per matrix row.
pub fn abelian_relators(data: &AbelianData) -> Vec<Word> {
    let mut rels = Vec::new();
    for i in 1..=data.rank {
        for j in i + 1..=data.rank {
            rels.push(Word::commutator(&Word::gen(i), &Word::gen(j)));
        }
    }
    for row in &data.relations {
        let factors: Vec<(Word, i64)> = row
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Word::gen(i + 1), e))
            .collect();
        rels.push(crate::word::product(&factors));
    }
    rels
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(raw: &[i32]) -> Word {
        Word::from_raw(raw)
    }

    #[test]
    fn free_oracle() {
        let o = Oracle::free(2);
        assert!(!o.decide(&w(&[1, 2, -1, -2])));
        assert!(o.decide(&w(&[1, -1])));
        assert_eq!(o.kind(), OracleKind::Free);
    }

    #[test]
    fn abelian_oracle() {
        let z5 = Oracle::abelian(AbelianData::from_moduli(&[5]));
        assert!(z5.decide(&Word::gen(1).pow(5)));
        assert!(!z5.decide(&Word::gen(1).pow(3)));
        assert_eq!(z5.kind(), OracleKind::FiniteCyclic);
        let z2 = Oracle::abelian(AbelianData::free(2));
        assert!(z2.decide(&w(&[1, 2, -1, -2])));
        assert!(!z2.decide(&w(&[1, -2])));
        assert_eq!(z2.kind(), OracleKind::Abelian);
    }

    #[test]
    fn product_oracle() {
        let o = Oracle::product(&Oracle::free(2), &Oracle::abelian(AbelianData::free(1)));
        assert!(o.decide(&w(&[1, 3, -1, -3])));
        assert!(!o.decide(&w(&[1, 2, -1, -2])));
        assert!(!o.decide(&w(&[1, 3, -1, -3, 2])));
        assert_eq!(o.relators().unwrap().len(), 2);
    }

    #[test]
    fn substitution_oracle() {
        let f2 = Oracle::free(2);
        let o = Oracle::substitution(&f2, vec![w(&[1]), w(&[2]), w(&[1, 2, -1, -2])]).unwrap();
        assert!(o.decide(&w(&[-3, 1, 2, -1, -2])));
        let sq = Oracle::substitution(&f2, vec![w(&[1, 1]), w(&[2, 2])]).unwrap();
        assert!(!sq.decide(&w(&[1, 2, -1, -2])));
        let z = Oracle::abelian(AbelianData::free(1));
        for i in 1..6 {
            let o = Oracle::substitution(&z, vec![w(&[1]), Word::gen(1).pow(i)]).unwrap();
            assert!(o.decide(&Word::gen(2).mul(&Word::gen(1).pow(-i))));
        }
    }

    #[test]
    fn nested_substitution_collapses() {
        let f2 = Oracle::free(2);
        let a = Oracle::substitution(&f2, vec![w(&[1, 2]), w(&[2])]).unwrap();
        let b = Oracle::substitution(&a, vec![w(&[1, -2])]).unwrap();
        assert!(
            matches!(&b.inner.body, Body::Substitution { base, .. } if base.kind() == OracleKind::Free)
        );
        assert!(!b.decide(&w(&[1])));
    }

    #[test]
    fn keys() {
        let z2 = Oracle::abelian(AbelianData::from_moduli(&[0, 4]));
        assert_eq!(z2.exact_key(&w(&[2, 2, 2, 2, 2])), z2.exact_key(&w(&[2])));
        let p = Oracle::product(&Oracle::free(1), &Oracle::free(1));
        assert_ne!(p.exact_key(&w(&[1])), p.exact_key(&w(&[2])));
    }
}
