//! Small cancellation groups and Dehn's algorithm.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Matrix, RowLattice};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallCancellation {
    pub holds: bool,
    pub max_piece: usize,
    /// Two symmetrized relators sharing the longest piece.
    pub piece_between: Option<(Word, Word)>,
    pub min_length: usize,
    pub lambda: f64,
}

/// All cyclic rotations of the relators and their inverses, deduplicated
/// and sorted.
pub fn symmetrize(relators: &[Word]) -> Vec<Word> {
    let mut out = Vec::new();
    for r in relators {
        for s in [r.clone(), r.inverse()] {
            for k in 0..s.len() {
                out.push(s.rotate(k));
            }
        }
    }
    out.sort_by(|a, b| {
        a.letters()
            .iter()
            .map(|l| l.raw())
            .cmp(b.letters().iter().map(|l| l.raw()))
    });
    out.dedup();
    out
}

/// Longest piece of the symmetrized closure and the C'(lambda) verdict.
pub fn small_cancellation_check(relators: &[Word], lambda: f64) -> Result<SmallCancellation> {
    if relators.is_empty() {
        return Err(Error::Precondition("no relators".into()));
    }
    for r in relators {
        if r.is_empty() || !r.is_cyclically_reduced() {
            return Err(Error::Precondition(format!(
                "relator {r} is not cyclically reduced"
            )));
        }
        let (_, p) = r.primitive_root()?;
        if p > 1 {
            return Err(Error::Precondition(format!(
                "relator {r} is a proper power (exponent {p})"
            )));
        }
    }
    let sym = symmetrize(relators);
    // in lexicographic order the longest common prefix of distinct words is
    // realised by neighbours
    let mut max_piece = 0;
    let mut between = None;
    for pair in sym.windows(2) {
        let lcp = pair[0]
            .letters()
            .iter()
            .zip(pair[1].letters())
            .take_while(|(a, b)| a == b)
            .count();
        if lcp > max_piece {
            max_piece = lcp;
            between = Some((pair[0].clone(), pair[1].clone()));
        }
    }
    let min_length = relators.iter().map(Word::len).min().unwrap();
    Ok(SmallCancellation {
        holds: (max_piece as f64) < lambda * min_length as f64,
        max_piece,
        piece_between: between,
        min_length,
        lambda,
    })
}

#[derive(Clone, Debug)]
pub struct DehnOracle {
    relators: Vec<Word>,
    size: usize,
    /// Keyed by the first `half + 1` letters of each symmetrized relator.
    index: HashMap<Vec<Letter>, Vec<Word>>,
    prefix_lengths: Vec<usize>,
    abelian: RowLattice<i64>,
    pub report: SmallCancellation,
}

impl DehnOracle {
    pub fn new(relators: &[Word], lambda: f64) -> Result<DehnOracle> {
        let size = relators.iter().map(Word::max_index).max().unwrap_or(0);
        DehnOracle::with_size(relators, lambda, size)
    }

    /// As `new`, over an alphabet of `size` letters (letters not occurring in
    /// any relator generate a free factor).
    pub fn with_size(relators: &[Word], lambda: f64, size: usize) -> Result<DehnOracle> {
        if relators.iter().any(|r| r.max_index() > size) {
            return Err(Error::Invalid(format!(
                "relators use letters beyond {size}"
            )));
        }
        if lambda > 1.0 / 6.0 + 1e-12 {
            return Err(Error::Precondition(format!(
                "Dehn's algorithm needs lambda <= 1/6, got {lambda}"
            )));
        }
        let report = small_cancellation_check(relators, lambda)?;
        if !report.holds {
            return Err(Error::Precondition(format!(
                "relators fail C'({lambda}): piece of length {} against minimum relator length {}",
                report.max_piece, report.min_length
            )));
        }
        let mut index: HashMap<Vec<Letter>, Vec<Word>> = HashMap::new();
        let mut prefix_lengths = Vec::new();
        for s in symmetrize(relators) {
            let h = s.len() / 2 + 1;
            if !prefix_lengths.contains(&h) {
                prefix_lengths.push(h);
            }
            index.entry(s.letters()[..h].to_vec()).or_default().push(s);
        }
        prefix_lengths.sort_unstable();
        let rows: Vec<Vec<i64>> = relators.iter().map(|r| r.exponent_sums(size)).collect();
        let abelian = RowLattice::new(&Matrix::from_rows(rows, size));
        Ok(DehnOracle {
            relators: relators.to_vec(),
            size,
            index,
            prefix_lengths,
            abelian,
            report,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.size
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Repeatedly replaces more than half of a relator by the inverse of the
    /// rest; returns the word that admits no further move.
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        let mut cur = w.clone();
        'outer: loop {
            let letters = cur.letters();
            for i in 0..letters.len() {
                for &h in &self.prefix_lengths {
                    if i + h > letters.len() {
                        break;
                    }
                    let Some(cands) = self.index.get(&letters[i..i + h]) else {
                        continue;
                    };
                    for s in cands {
                        let sl = s.letters();
                        let mut l = h;
                        while l < sl.len() && i + l < letters.len() && letters[i + l] == sl[l] {
                            l += 1;
                        }
                        // prefix of length l equals the inverse of the suffix
                        let suffix = Word::reduce(sl[l..].iter().copied()).inverse();
                        let mut next: Vec<Letter> = letters[..i].to_vec();
                        next.extend(suffix.letters());
                        next.extend(&letters[i + l..]);
                        cur = Word::reduce(next);
                        continue 'outer;
                    }
                }
            }
            return cur;
        }
    }

    pub fn decide(&self, w: &Word) -> bool {
        if !self.abelian.contains(&w.exponent_sums(self.size)) {
            return false;
        }
        self.dehn_reduce(w).is_empty()
    }

    pub fn abelian_key(&self, w: &Word) -> Vec<i64> {
        self.abelian.reduce(&w.exponent_sums(self.size))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn genus2() -> Word {
        let c1 = Word::commutator(&Word::gen(1), &Word::gen(2));
        let c2 = Word::commutator(&Word::gen(3), &Word::gen(4));
        c1.mul(&c2)
    }

    #[test]
    fn genus_two_pieces() {
        let rep = small_cancellation_check(&[genus2()], 1.0 / 6.0).unwrap();
        assert_eq!(rep.max_piece, 1);
        assert!(rep.holds);
    }

    #[test]
    fn proper_power_rejected() {
        let r = Word::from_raw(&[1, 2, 1, 2]);
        assert!(matches!(
            small_cancellation_check(&[r], 0.1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn klein_relator_fails() {
        let r = Word::from_raw(&[1, 2, 1, -2]);
        let rep = small_cancellation_check(&[r], 1.0 / 6.0).unwrap();
        assert!(!rep.holds);
        assert!(rep.max_piece >= 1);
    }

    #[test]
    fn dehn_decides_surface_words() {
        let d = DehnOracle::new(&[genus2()], 1.0 / 6.0).unwrap();
        assert!(d.decide(&genus2()));
        assert!(d.decide(&genus2().inverse().conjugate_by(&Word::from_raw(&[1, 3]))));
        assert!(!d.decide(&Word::gen(1)));
        assert!(!d.decide(&Word::commutator(&Word::gen(1), &Word::gen(2))));
        // a rotation of the relator
        assert!(d.decide(&genus2().rotate(3)));
    }

    #[test]
    fn non_orientable() {
        let r = Word::from_raw(&[1, 1, 2, 2, 3, 3, 4, 4]);
        let d = DehnOracle::new(&[r.clone()], 1.0 / 6.0).unwrap();
        assert!(d.decide(&r));
        assert!(!d.decide(&Word::commutator(&Word::gen(1), &Word::gen(2))));
        let short = Word::from_raw(&[1, 1, 2, 2, 3, 3]);
        assert!(DehnOracle::new(&[short], 1.0 / 6.0).is_err());
    }
}
