//! Free-group words over an indexed alphabet.
//!
//! A [`Word`] is always freely reduced. Generators are 1-based indices; names
//! only exist at the text layer (see [`crate::alphabet`]).

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A signed generator: `+i` is generator `i`, `-i` its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Letter {
        assert!(index >= 1, "generator indices start at 1");
        let i = index as i32;
        Letter(if inverse { -i } else { i })
    }

    pub fn gen(index: usize) -> Letter {
        Letter::new(index, false)
    }

    /// Raw signed value, `±index`.
    pub fn raw(self) -> i32 {
        self.0
    }

    pub fn from_raw(raw: i32) -> Letter {
        assert!(raw != 0, "letter 0 does not exist");
        Letter(raw)
    }

    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn sign(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Position in the enumeration order `s1, s1^-1, s2, s2^-1, ...` (0-based).
    pub fn rank(self) -> usize {
        2 * (self.index() - 1) + usize::from(self.is_inverse())
    }

    pub fn from_rank(rank: usize) -> Letter {
        Letter::new(rank / 2 + 1, rank % 2 == 1)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "s{}^-1", self.index())
        } else {
            write!(f, "s{}", self.index())
        }
    }
}

/// A freely reduced word. Ordered shortlex: shorter first, then
/// lexicographically with `s_i < s_i^-1 < s_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn gen(index: usize) -> Word {
        Word(vec![Letter::gen(index)])
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// Builds a word from signed integers (`-2` is `s2^-1`).
    pub fn from_raw(raw: &[i32]) -> Word {
        Word::reduce(raw.iter().map(|&r| Letter::from_raw(r)))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn raw(&self) -> Vec<i32> {
        self.0.iter().map(|l| l.raw()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used (0 for the empty word).
    pub fn max_index(&self) -> usize {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Word {
        if k == 0 || self.is_empty() {
            return Word::empty();
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let (core, conj) = base.cyclically_reduce();
        let mut letters = Vec::with_capacity(core.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&core.0);
        }
        conj.mul(&Word(letters)).mul(&conj.inverse())
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    /// `g self g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    /// Replaces generator `i` by `images[i-1]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for &l in &self.0 {
            let img = &images[l.index() - 1];
            if l.is_inverse() {
                for &m in img.0.iter().rev() {
                    push_reduced(&mut out, m.inverse());
                }
            } else {
                for &m in &img.0 {
                    push_reduced(&mut out, m);
                }
            }
        }
        Word(out)
    }

    /// Adds `offset` to every generator index.
    pub fn shift(&self, offset: usize) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| Letter::new(l.index() + offset, l.is_inverse()))
                .collect(),
        )
    }

    /// Exponent-sum vector over `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0i64; n];
        for l in &self.0 {
            v[l.index() - 1] += l.sign();
        }
        v
    }

    /// Returns `(core, conjugator)` with `self = conjugator * core * conjugator^-1`
    /// and `core` cyclically reduced.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        (Word(self.0[k..n - k].to_vec()), Word(self.0[..k].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != self.0[self.0.len() - 1].inverse()
    }

    /// The unique `(root, power)` with `self = root^power`, `power` maximal.
    pub fn primitive_root(&self) -> Result<(Word, u32)> {
        if self.is_empty() {
            return Err(Error::Precondition(
                "the trivial word has no primitive root".into(),
            ));
        }
        let (core, conj) = self.cyclically_reduce();
        let n = core.len();
        let period = (1..=n)
            .find(|&p| n % p == 0 && (p..n).all(|i| core.0[i] == core.0[i - p]))
            .unwrap_or(n);
        let root = Word(core.0[..period].to_vec()).conjugate_by(&conj);
        Ok((root, (n / period) as u32))
    }

    /// Cyclic rotation `self[k..] self[..k]` of the letter sequence.
    pub fn rotate(&self, k: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return Word::empty();
        }
        let k = k % n;
        let mut letters = self.0[k..].to_vec();
        letters.extend_from_slice(&self.0[..k]);
        Word::reduce(letters)
    }

    /// Whether `self` and `other` are conjugate in the free group.
    pub fn is_conjugate_in_free(&self, other: &Word) -> bool {
        conjugator_in_free(self, other).is_some()
    }

    /// Shortlex-least representative of the conjugacy class of `self` or of
    /// `self^-1`, with the sign telling which (`+1` for `self`).
    pub fn cyclic_class_rep(&self) -> (Word, i64) {
        let (core, _) = self.cyclically_reduce();
        let inv = core.inverse();
        let mut best = (core.clone(), 1);
        for k in 0..core.len() {
            let r = core.rotate(k);
            if r < best.0 {
                best = (r, 1);
            }
            let r = inv.rotate(k);
            if r < best.0 {
                best = (r, -1);
            }
        }
        best
    }
}

/// Some `a` with `a v a^-1 = u` in the free group, if `u` and `v` are conjugate.
pub fn conjugator_in_free(u: &Word, v: &Word) -> Option<Word> {
    let (cu, g) = u.cyclically_reduce();
    let (cv, h) = v.cyclically_reduce();
    if cu.len() != cv.len() {
        return None;
    }
    if cu.is_empty() {
        return Some(Word::empty());
    }
    let n = cv.len();
    // cu = x^-1 cv x where x = cv[..i]
    let i = (0..n).find(|&i| (0..n).all(|j| cu.0[j] == cv.0[(i + j) % n]))?;
    let x = Word(cv.0[..i].to_vec());
    Some(g.mul(&x.inverse()).mul(&h.inverse()))
}

/// Free product of words raised to exponents, in order.
pub fn product(factors: &[(Word, i64)]) -> Word {
    factors
        .iter()
        .fold(Word::empty(), |acc, (w, k)| acc.mul(&w.pow(*k)))
}

/// Left-normed commutator `[w1, w2, ..., wk]`.
pub fn left_normed_commutator(ws: &[Word]) -> Word {
    let mut it = ws.iter();
    let first = it.next().cloned().unwrap_or_default();
    it.fold(first, |acc, w| Word::commutator(&acc, w))
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{:?}", l)?;
        }
        Ok(())
    }
}

/// All reduced words of length exactly `len` over `n` generators, shortlex order.
pub fn reduced_words_of_length(n: usize, len: usize) -> Vec<Word> {
    let mut level = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(level.len() * (2 * n).saturating_sub(1).max(1));
        for w in &level {
            for r in 0..2 * n {
                let l = Letter::from_rank(r);
                if w.0.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut letters = w.0.clone();
                letters.push(l);
                next.push(Word(letters));
            }
        }
        level = next;
    }
    level
}

/// All reduced words of length at most `max_len`, shortlex order.
pub fn reduced_words_upto(n: usize, max_len: usize) -> Vec<Word> {
    (0..=max_len)
        .flat_map(|l| reduced_words_of_length(n, l))
        .collect()
}

/// Number of reduced words of length exactly `len` over `n` generators.
pub fn count_reduced_words(n: usize, len: usize) -> u128 {
    if len == 0 {
        return 1;
    }
    if n == 0 {
        return 0;
    }
    let n = n as u128;
    2 * n * (2 * n - 1).pow(len as u32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(raw: &[i32]) -> Word {
        Word::from_raw(raw)
    }

    #[test]
    fn reduce_examples() {
        assert!(w(&[1, -1]).is_empty());
        assert_eq!(w(&[1, 2, -2, 1]), w(&[1, 1]));
        assert_eq!(w(&[1, 2, -2, -1, 3]).raw(), vec![3]);
    }

    #[test]
    fn product_examples() {
        let a = Word::gen(1);
        let b = Word::gen(2);
        assert!(product(&[(a.clone(), 1), (a.clone(), -1)]).is_empty());
        assert_eq!(
            product(&[
                (a.clone(), 1),
                (b.clone(), 1),
                (a.clone(), -1),
                (b.clone(), -1)
            ]),
            Word::commutator(&a, &b)
        );
        assert_eq!(product(&[(w(&[1, 2]), 3)]).raw(), vec![1, 2, 1, 2, 1, 2]);
    }

    #[test]
    fn pow_of_non_cyclically_reduced() {
        let x = w(&[1, 2, -1]);
        assert_eq!(x.pow(3).raw(), vec![1, 2, 2, 2, -1]);
        assert_eq!(x.pow(-2).raw(), vec![1, -2, -2, -1]);
    }

    #[test]
    fn cyclic_reduction_examples() {
        let (core, conj) = w(&[1, 2, -1]).cyclically_reduce();
        assert_eq!(core.raw(), vec![2]);
        assert_eq!(conj.raw(), vec![1]);
        let c = Word::commutator(&Word::gen(1), &Word::gen(2));
        assert_eq!(c.cyclically_reduce(), (c.clone(), Word::empty()));
        assert_eq!(
            Word::empty().cyclically_reduce(),
            (Word::empty(), Word::empty())
        );
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(w(&[1, 2, 1, 2]).primitive_root().unwrap(), (w(&[1, 2]), 2));
        let c = Word::commutator(&Word::gen(1), &Word::gen(2));
        assert_eq!(c.primitive_root().unwrap(), (c.clone(), 1));
        assert_eq!(w(&[-1, -1, -1]).primitive_root().unwrap(), (w(&[-1]), 3));
        assert!(Word::empty().primitive_root().is_err());
        // conjugated power
        assert_eq!(
            w(&[2, 1, 1, -2]).primitive_root().unwrap(),
            (w(&[2, 1, -2]), 2)
        );
    }

    #[test]
    fn conjugacy_examples() {
        assert!(w(&[1, 2, -1]).is_conjugate_in_free(&w(&[2])));
        assert!(w(&[1, 2]).is_conjugate_in_free(&w(&[2, 1])));
        assert!(!w(&[1]).is_conjugate_in_free(&w(&[2])));
        let u = w(&[1, 2, 2, -1, -1, 3]);
        let v = w(&[3, 1, 2, 2, -1, -1]).conjugate_by(&w(&[2, -3]));
        let a = conjugator_in_free(&u, &v).unwrap();
        assert_eq!(v.conjugate_by(&a), u);
    }

    #[test]
    fn shortlex_order() {
        let a = Word::gen(1);
        let ai = a.inverse();
        let b = Word::gen(2);
        assert!(a < ai && ai < b);
        assert!(b < w(&[1, 1]));
        let words = reduced_words_upto(2, 3);
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(words.len(), 1 + 4 + 12 + 36);
    }

    #[test]
    fn class_rep_is_conjugation_invariant() {
        let x = w(&[1, 2, -1, 2, 2]);
        let y = x.conjugate_by(&w(&[2, 1]));
        assert_eq!(x.cyclic_class_rep(), y.cyclic_class_rep());
        let (r1, s1) = x.cyclic_class_rep();
        let (r2, s2) = x.inverse().cyclic_class_rep();
        assert_eq!(r1, r2);
        assert_eq!(s1, -s2);
    }
}
