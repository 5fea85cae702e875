//! Morphisms between marked groups, Dehn twists, discriminating maps.

use rayon::prelude::*;
use serde::Serialize;

use crate::detect::Verdict;
use crate::error::{Error, Result};
use crate::marked::{MarkedGroup, Splitting};
use crate::oracle::OracleKind;
use crate::sl2::SL2Rep;
use crate::word::{self, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", content = "value", rename_all = "snake_case")]
pub enum Validity {
    /// Every listed relator of the source maps to the identity.
    ExactRelatorsKilled(Vec<Word>),
    /// Every relation of the source of length at most `L` maps to the identity.
    CheckedUpTo(usize),
}

#[derive(Clone, Debug)]
pub enum HomMode {
    Relators(Vec<Word>),
    /// Use the source's known presentation.
    Presentation,
    CheckedUpTo(usize),
}

#[derive(Clone, Debug)]
pub struct Hom {
    pub source: MarkedGroup,
    pub target: MarkedGroup,
    pub images: Vec<Word>,
    pub validity: Validity,
}

pub fn make_hom(
    source: &MarkedGroup,
    target: &MarkedGroup,
    images: Vec<Word>,
    mode: HomMode,
) -> Result<Hom> {
    if images.len() != source.arity() {
        return Err(Error::Arity {
            expected: source.arity(),
            found: images.len(),
        });
    }
    if let Some(w) = images.iter().find(|w| w.max_index() > target.arity()) {
        return Err(Error::Invalid(format!(
            "image {} uses letters beyond the target's {} generators",
            w,
            target.arity()
        )));
    }
    let killed = |r: &Word| -> Result<()> {
        let img = r.substitute(&images);
        if target.relation_test(&img) {
            Ok(())
        } else {
            Err(Error::RelatorNotKilled {
                relator: source.format(r),
                image: target.format(&img),
            })
        }
    };
    let validity = match mode {
        HomMode::Presentation => {
            let rels = source
                .presentation()
                .ok_or_else(|| {
                    Error::Precondition(format!("{} has no known presentation", source.name))
                })?
                .to_vec();
            rels.iter().try_for_each(killed)?;
            Validity::ExactRelatorsKilled(rels)
        }
        HomMode::Relators(rels) => {
            if let Some(r) = rels.iter().find(|r| !source.relation_test(r)) {
                return Err(Error::NotARelation(source.format(r)));
            }
            rels.iter().try_for_each(killed)?;
            Validity::ExactRelatorsKilled(rels)
        }
        HomMode::CheckedUpTo(l) => {
            source.relations_upto(l).words.iter().try_for_each(killed)?;
            Validity::CheckedUpTo(l)
        }
    };
    Ok(Hom {
        source: source.clone(),
        target: target.clone(),
        images,
        validity,
    })
}

impl Hom {
    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    pub fn identity(m: &MarkedGroup) -> Hom {
        Hom {
            source: m.clone(),
            target: m.clone(),
            images: (1..=m.arity()).map(Word::gen).collect(),
            validity: Validity::ExactRelatorsKilled(
                m.presentation().map(<[Word]>::to_vec).unwrap_or_default(),
            ),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Hom) -> Result<Hom> {
        if self.target.arity() != next.source.arity() {
            return Err(Error::Arity {
                expected: self.target.arity(),
                found: next.source.arity(),
            });
        }
        let validity = match (&self.validity, &next.validity) {
            (Validity::ExactRelatorsKilled(r), Validity::ExactRelatorsKilled(_)) => {
                Validity::ExactRelatorsKilled(r.clone())
            }
            (Validity::CheckedUpTo(l), _) => Validity::CheckedUpTo(*l),
            (Validity::ExactRelatorsKilled(_), Validity::CheckedUpTo(l)) => {
                Validity::CheckedUpTo(*l)
            }
        };
        Ok(Hom {
            source: self.source.clone(),
            target: next.target.clone(),
            images: self.images.iter().map(|w| next.apply(w)).collect(),
            validity,
        })
    }

    pub fn format_images(&self) -> Vec<String> {
        self.images.iter().map(|w| self.target.format(w)).collect()
    }
}

/// First source-ball element (in shortlex order) with trivial image.
pub fn injectivity_radius(h: &Hom, r: usize) -> Result<Verdict<Word>> {
    let verts = h.source.ball_vertices(r)?;
    let hit = verts
        .par_iter()
        .skip(1)
        .find_first(|v| h.target.relation_test(&h.apply(v)));
    Ok(match hit {
        Some(w) => Verdict::Violated(w.clone()),
        None => Verdict::NoWitnessWithin(r),
    })
}

/// The largest radius on which the map is known to be injective.
pub fn injective_radius_value(v: &Verdict<Word>) -> usize {
    match v {
        Verdict::Violated(w) => w.len() - 1,
        Verdict::NoWitnessWithin(r) => *r,
    }
}

/// Twist along `c` (a word over the marking) in the edge group of the
/// splitting that built `m`, to the power `k`.
pub fn dehn_twist(m: &MarkedGroup, c: &Word, k: i64) -> Result<Hom> {
    let g = m
        .oracle()
        .graph_oracle()
        .ok_or_else(|| Error::Precondition(format!("{} was not built as a splitting", m.name)))?;
    let splitting = m
        .splitting
        .ok_or_else(|| Error::Precondition(format!("{} carries no splitting", m.name)))?;
    let ck = c.pow(k);
    let n = m.arity();
    let amb = m.to_ambient(c);
    let mut images: Vec<Word> = (1..=n).map(Word::gen).collect();
    let outside = || Error::Precondition(format!("{} is not in the edge group", m.format(c)));
    if let Some(ext) = &m.extension {
        // t_i -> t_i c^k; c must commute with the new letters
        let base = ext.base.arity();
        g.edge_coords(0, true, &amb).ok_or_else(outside)?;
        for img in images.iter_mut().skip(base) {
            *img = img.mul(&ck);
        }
    } else {
        match splitting {
            Splitting::Amalgam { split } => {
                g.edge_coords(0, true, &amb).ok_or_else(outside)?;
                for img in images.iter_mut().skip(split) {
                    *img = img.conjugate_by(&ck);
                }
            }
            Splitting::Hnn { stable } => {
                g.edge_coords(0, false, &amb).ok_or_else(outside)?;
                images[stable] = images[stable].mul(&ck);
            }
        }
    }
    let mode = if m.presentation().is_some() {
        HomMode::Presentation
    } else {
        HomMode::CheckedUpTo(4)
    };
    make_hom(m, m, images, mode)
}

#[derive(Clone, Debug, Serialize)]
pub struct BaumslagReport {
    pub verdict: Verdict<Vec<u32>>,
    /// Smallest `K0 <= K` such that no exponent tuple in `[K0, K+W]` vanishes.
    pub min_safe_k: Option<u32>,
}

/// Checks `c^k0 a1 c^k1 ... aq c^kq != 1` in a free group for all exponents
/// in `[K, K+W]`.
pub fn baumslag_window_check(a: &[Word], c: &Word, k: u32, w: u32) -> Result<BaumslagReport> {
    for (i, ai) in a.iter().enumerate() {
        if Word::commutator(c, ai).is_empty() {
            return Err(Error::Precondition(format!("c commutes with a{}", i + 1)));
        }
    }
    let vanishes = |ks: &[u32]| {
        let mut acc = c.pow(ks[0] as i64);
        for (ai, &kj) in a.iter().zip(&ks[1..]) {
            acc = acc.mul(ai).mul(&c.pow(kj as i64));
        }
        acc.is_empty()
    };
    let first_zero = |lo: u32, hi: u32| -> Option<Vec<u32>> {
        let span = (hi - lo + 1) as u64;
        let total = span.pow(a.len() as u32 + 1);
        (0..total).into_par_iter().find_map_first(|mut idx| {
            let mut ks = vec![0u32; a.len() + 1];
            for slot in ks.iter_mut().rev() {
                *slot = lo + (idx % span) as u32;
                idx /= span;
            }
            vanishes(&ks).then_some(ks)
        })
    };
    let verdict = match first_zero(k, k + w) {
        Some(ks) => Verdict::Violated(ks),
        None => Verdict::NoWitnessWithin(w as usize),
    };
    let mut min_safe_k = None;
    for k0 in (0..=k).rev() {
        if first_zero(k0, k + w).is_some() {
            break;
        }
        min_safe_k = Some(k0);
    }
    Ok(BaumslagReport {
        verdict,
        min_safe_k,
    })
}

/// The retraction of a centralizer extension onto its base sending the new
/// letters to powers of `z`.
pub fn ec_discriminator(m: &MarkedGroup, ks: &[i64]) -> Result<Hom> {
    let ext = m
        .extension
        .as_ref()
        .ok_or_else(|| Error::Precondition(format!("{} is not a centralizer extension", m.name)))?;
    if ks.len() != ext.p {
        return Err(Error::Arity {
            expected: ext.p,
            found: ks.len(),
        });
    }
    let base = &*ext.base;
    let mut images: Vec<Word> = (1..=base.arity()).map(Word::gen).collect();
    images.extend(ks.iter().map(|&k| ext.z.pow(k)));
    let mode = if m.presentation().is_some() {
        HomMode::Presentation
    } else {
        HomMode::CheckedUpTo(4)
    };
    make_hom(m, base, images, mode)
}

/// Searches homomorphisms to `target` with every generator image of length
/// at most `l`, mapping the witnesses to nontrivial, pairwise distinct
/// elements. `None` is inconclusive.
pub fn search_discriminating(
    m: &MarkedGroup,
    witnesses: &[Word],
    target: &MarkedGroup,
    l: usize,
    mode: HomMode,
) -> Result<Option<Hom>> {
    if let Some(w) = witnesses.iter().find(|w| m.relation_test(w)) {
        return Err(Error::Precondition(format!(
            "witness {} is trivial",
            m.format(w)
        )));
    }
    let rels: Vec<Word> = match &mode {
        HomMode::Presentation => m
            .presentation()
            .ok_or_else(|| Error::Precondition(format!("{} has no known presentation", m.name)))?
            .to_vec(),
        HomMode::Relators(r) => r.clone(),
        HomMode::CheckedUpTo(len) => m.relations_upto(*len).words,
    };
    let n = m.arity();
    let k = target.arity();
    let cands = word::reduced_words_upto(k, l);
    // abelianization pruning is sound when the target is standardly marked
    // free or free abelian
    let standard = target
        .marking()
        .iter()
        .enumerate()
        .all(|(i, w)| *w == Word::gen(i + 1));
    let abel = standard
        && match target.oracle().kind() {
            OracleKind::Free => true,
            OracleKind::Abelian => target
                .oracle()
                .abelian_data()
                .is_some_and(|d| d.relations.is_empty()),
            _ => false,
        };
    let ab: Vec<Vec<i64>> = cands.iter().map(|w| w.exponent_sums(k)).collect();
    // relators become checkable once their largest letter is assigned
    let mut due: Vec<Vec<&Word>> = vec![Vec::new(); n + 1];
    for r in &rels {
        due[r.max_index()].push(r);
    }
    let check = |choice: &[usize], depth: usize| -> bool {
        due[depth].iter().all(|r| {
            if abel {
                let mut sum = vec![0i64; k];
                for (g, e) in r.exponent_sums(depth).iter().enumerate() {
                    for (s, x) in sum.iter_mut().zip(&ab[choice[g]]) {
                        *s += e * x;
                    }
                }
                if sum.iter().any(|&x| x != 0) {
                    return false;
                }
            }
            let imgs: Vec<Word> = choice.iter().map(|&i| cands[i].clone()).collect();
            target.relation_test(&r.substitute(&imgs))
        })
    };
    let finish = |choice: &[usize]| -> bool {
        let imgs: Vec<Word> = choice.iter().map(|&i| cands[i].clone()).collect();
        let vals: Vec<Word> = witnesses.iter().map(|w| w.substitute(&imgs)).collect();
        vals.iter()
            .enumerate()
            .all(|(i, x)| !target.relation_test(x) && vals[..i].iter().all(|y| !target.equal(x, y)))
    };
    fn dfs(
        choice: &mut Vec<usize>,
        n: usize,
        ncand: usize,
        check: &(dyn Fn(&[usize], usize) -> bool + Sync),
        finish: &(dyn Fn(&[usize]) -> bool + Sync),
    ) -> bool {
        if choice.len() == n {
            return finish(choice);
        }
        for i in 0..ncand {
            choice.push(i);
            if check(choice, choice.len()) && dfs(choice, n, ncand, check, finish) {
                return true;
            }
            choice.pop();
        }
        false
    }
    if n == 0 {
        return Ok(None);
    }
    let found = (0..cands.len()).into_par_iter().find_map_first(|i| {
        let mut choice = vec![i];
        if !check(&choice, 1) {
            return None;
        }
        dfs(&mut choice, n, cands.len(), &check, &finish).then_some(choice)
    });
    match found {
        None => Ok(None),
        Some(choice) => {
            let imgs = choice.iter().map(|&i| cands[i].clone()).collect();
            let hom = make_hom(m, target, imgs, mode)?;
            Ok(Some(hom))
        }
    }
}

/// Relators of the source map to the identity matrix and the witnesses do not.
/// The target must be free with `rep` realizing its letters.
pub fn sl2_certify(h: &Hom, rep: &SL2Rep, witnesses: &[Word]) -> Result<bool> {
    if h.target.oracle().kind() != OracleKind::Free || rep.rank() != h.target.arity() {
        return Err(Error::Precondition(format!(
            "the target must be a standardly marked free group of rank {}",
            rep.rank()
        )));
    }
    let rels = match &h.validity {
        Validity::ExactRelatorsKilled(r) => r.clone(),
        Validity::CheckedUpTo(_) => h
            .source
            .presentation()
            .ok_or_else(|| {
                Error::Precondition("certificates need a finitely presented source".into())
            })?
            .to_vec(),
    };
    let rels_ok = rels.par_iter().all(|r| rep.eval(&h.apply(r)).is_identity());
    let wits_ok = witnesses
        .par_iter()
        .all(|w| !rep.eval(&h.apply(w)).is_identity());
    Ok(rels_ok && wits_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;

    fn comm(a: usize, b: usize) -> Word {
        Word::commutator(&Word::gen(a), &Word::gen(b))
    }

    fn genus2() -> MarkedGroup {
        construct::double(&MarkedGroup::free(2), &comm(1, 2)).unwrap()
    }

    fn retraction(g: &MarkedGroup) -> Hom {
        let f2 = MarkedGroup::free(2);
        let imgs = vec![Word::gen(1), Word::gen(2), Word::gen(1), Word::gen(2)];
        make_hom(g, &f2, imgs, HomMode::Presentation).unwrap()
    }

    #[test]
    fn validation() {
        let z2 = MarkedGroup::free_abelian(2);
        let z = MarkedGroup::free_abelian(1);
        let h = make_hom(
            &z2,
            &z,
            vec![Word::gen(1), Word::gen(1).pow(3)],
            HomMode::Presentation,
        )
        .unwrap();
        assert!(matches!(h.validity, Validity::ExactRelatorsKilled(_)));
        let f2 = MarkedGroup::free(2);
        let e = make_hom(
            &f2,
            &z2,
            vec![Word::gen(1), Word::gen(2)],
            HomMode::Relators(vec![comm(1, 2)]),
        );
        assert!(matches!(e, Err(Error::NotARelation(_))));
        let e = make_hom(
            &z2,
            &f2,
            vec![Word::gen(1), Word::gen(2)],
            HomMode::Presentation,
        );
        assert!(matches!(e, Err(Error::RelatorNotKilled { .. })));
    }

    #[test]
    fn injectivity() {
        let g = genus2();
        let v = injectivity_radius(&retraction(&g), 2).unwrap();
        assert_eq!(v, Verdict::Violated(Word::from_raw(&[1, -3])));
        let f2 = MarkedGroup::free(2);
        let ab = make_hom(
            &f2,
            &MarkedGroup::free_abelian(2),
            vec![Word::gen(1), Word::gen(2)],
            HomMode::Presentation,
        )
        .unwrap();
        assert_eq!(
            injectivity_radius(&ab, 4).unwrap(),
            Verdict::Violated(comm(1, 2))
        );
        assert_eq!(
            injectivity_radius(&Hom::identity(&f2), 3).unwrap(),
            Verdict::NoWitnessWithin(3)
        );
    }

    #[test]
    fn twists() {
        let g = genus2();
        let t = dehn_twist(&g, &comm(1, 2), 1).unwrap();
        assert_eq!(t.images[2], Word::gen(3).conjugate_by(&comm(1, 2)));
        let back = dehn_twist(&g, &comm(1, 2), -1).unwrap();
        let id = t.then(&back).unwrap();
        for v in g.ball_vertices(3).unwrap() {
            assert!(g.equal(&id.apply(&v), &v));
        }
        assert!(dehn_twist(&g, &Word::gen(1), 1).is_err());
        let ext = construct::extend_centralizer(&MarkedGroup::free(2), &comm(1, 2), 1).unwrap();
        let t = dehn_twist(&ext, &comm(1, 2), 2).unwrap();
        assert_eq!(t.images[2], Word::gen(3).mul(&comm(1, 2).pow(2)));
    }

    #[test]
    fn baumslag() {
        let a = Word::gen(1);
        let b = Word::gen(2);
        let r = baumslag_window_check(&[b.clone()], &a, 1, 3).unwrap();
        assert_eq!(r.verdict, Verdict::NoWitnessWithin(3));
        let r = baumslag_window_check(&[a.pow(-3).mul(&b)], &a, 1, 5).unwrap();
        assert!(!r.verdict.is_violated());
        assert!(baumslag_window_check(&[a.inverse()], &a, 1, 3).is_err());
        // a^-1 b a b^-1 with c = b: c^k0 a^-1 b a b^-1 c^k1 ... cancels only at k = 0
        let x = a.inverse().mul(&b).mul(&a);
        let r = baumslag_window_check(&[x.clone(), x.inverse()], &b, 2, 2).unwrap();
        assert_eq!(r.verdict, Verdict::NoWitnessWithin(2));
        assert_eq!(r.min_safe_k, Some(1));
    }

    #[test]
    fn ec_retraction() {
        let f2 = MarkedGroup::free(2);
        let ext = construct::extend_centralizer(&f2, &comm(1, 2), 1).unwrap();
        let h = ec_discriminator(&ext, &[0]).unwrap();
        assert!(h.apply(&Word::gen(3)).is_empty());
        let h = ec_discriminator(&ext, &[3]).unwrap();
        assert_eq!(
            injectivity_radius(&h, 2).unwrap(),
            Verdict::NoWitnessWithin(2)
        );
    }

    #[test]
    fn discriminating_search() {
        let z2 = MarkedGroup::free_abelian(2);
        let wit = [Word::gen(1), Word::gen(2), Word::from_raw(&[1, -2])];
        let h = search_discriminating(
            &z2,
            &wit,
            &MarkedGroup::free_abelian(1),
            3,
            HomMode::Presentation,
        )
        .unwrap()
        .unwrap();
        // shortlex-first assignment: images 1, -1, 2
        assert_eq!(h.images, vec![Word::gen(1), Word::gen(1).inverse()]);
        let f2z = construct::direct_product(&MarkedGroup::free(2), &MarkedGroup::free(1)).unwrap();
        let wit = [comm(1, 2), Word::gen(3)];
        let r = search_discriminating(&f2z, &wit, &MarkedGroup::free(2), 2, HomMode::Presentation)
            .unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn certificates() {
        let g = genus2();
        let tw = dehn_twist(&g, &comm(1, 2), 1)
            .unwrap()
            .then(&retraction(&g))
            .unwrap();
        let wit = [Word::gen(1), comm(1, 2), Word::from_raw(&[1, -3])];
        assert!(sl2_certify(&tw, &SL2Rep::sanov(), &wit).unwrap());
        assert!(!sl2_certify(&retraction(&g), &SL2Rep::sanov(), &wit).unwrap());
    }
}
