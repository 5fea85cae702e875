//! Combinators building new marked groups, each with a word-problem oracle.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::marked::{CentralizerExtension, MarkedGroup, Splitting};
use crate::oracle::{
    small_cancellation_check, AbelianData, EdgeSpec, GraphOfGroupsSpec, Oracle, OracleKind,
    VertexGroup,
};
use crate::word::Word;

/// The vertex group standing for the ambient group of `m`.
pub fn vertex_of(m: &MarkedGroup) -> VertexGroup {
    let o = m.oracle();
    match o.kind() {
        OracleKind::Free => VertexGroup::Free(o.alphabet_size()),
        OracleKind::Abelian | OracleKind::FiniteCyclic => {
            VertexGroup::Abelian(o.abelian_data().unwrap().clone())
        }
        _ => VertexGroup::Oracle(o.clone()),
    }
}

fn join_names(a: &Alphabet, b: &Alphabet) -> Alphabet {
    a.join(b)
}

fn two_vertex(m1: &MarkedGroup, m2: &MarkedGroup, u: &[Word], v: &[Word]) -> Result<MarkedGroup> {
    if u.len() != v.len() {
        return Err(Error::Arity {
            expected: u.len(),
            found: v.len(),
        });
    }
    let spec = GraphOfGroupsSpec {
        vertices: vec![vertex_of(m1), vertex_of(m2)],
        edges: vec![EdgeSpec {
            from: 0,
            to: 1,
            from_images: u.iter().map(|w| m1.to_ambient(w)).collect(),
            to_images: v.iter().map(|w| m2.to_ambient(w)).collect(),
        }],
    };
    let oracle = Oracle::graph(spec)?;
    let shift = m1.oracle().alphabet_size();
    let mut marking = m1.marking().to_vec();
    marking.extend(m2.marking().iter().map(|w| w.shift(shift)));
    let names = join_names(m1.names(), m2.names());
    let ambient = join_names(m1.ambient_names(), m2.ambient_names());
    let mut m = MarkedGroup::new(oracle, marking, names, ambient)?;
    m.splitting = Some(Splitting::Amalgam { split: m1.arity() });
    if m.presentation().is_none() {
        if let (Some(r1), Some(r2)) = (m1.presentation(), m2.presentation()) {
            let n1 = m1.arity();
            let mut rels = r1.to_vec();
            rels.extend(r2.iter().map(|r| r.shift(n1)));
            rels.extend(u.iter().zip(v).map(|(a, b)| a.mul(&b.shift(n1).inverse())));
            m = m.with_presentation(rels);
        }
    }
    Ok(m)
}

pub fn free_product(m1: &MarkedGroup, m2: &MarkedGroup) -> Result<MarkedGroup> {
    let m = two_vertex(m1, m2, &[], &[])?;
    Ok(m.with_name(format!("{} * {}", m1.name, m2.name)))
}

pub fn direct_product(m1: &MarkedGroup, m2: &MarkedGroup) -> Result<MarkedGroup> {
    let oracle = Oracle::product(m1.oracle(), m2.oracle());
    let shift = m1.oracle().alphabet_size();
    let mut marking = m1.marking().to_vec();
    marking.extend(m2.marking().iter().map(|w| w.shift(shift)));
    let names = join_names(m1.names(), m2.names());
    let ambient = join_names(m1.ambient_names(), m2.ambient_names());
    Ok(MarkedGroup::new(oracle, marking, names, ambient)?
        .with_name(format!("{} x {}", m1.name, m2.name)))
}

/// `G1 *_{u_i = v_i} G2`; `u` and `v` are marking words of the two factors.
pub fn amalgam(m1: &MarkedGroup, m2: &MarkedGroup, u: &[Word], v: &[Word]) -> Result<MarkedGroup> {
    let m = two_vertex(m1, m2, u, v)?;
    Ok(m.with_name(format!("{} *_C {}", m1.name, m2.name)))
}

/// HNN extension with `t u_i t^-1 = v_i`; `t` is appended to the marking.
pub fn hnn(m: &MarkedGroup, u: &[Word], v: &[Word]) -> Result<MarkedGroup> {
    if u.len() != v.len() {
        return Err(Error::Arity {
            expected: u.len(),
            found: v.len(),
        });
    }
    let spec = GraphOfGroupsSpec {
        vertices: vec![vertex_of(m)],
        edges: vec![EdgeSpec {
            from: 0,
            to: 0,
            from_images: v.iter().map(|w| m.to_ambient(w)).collect(),
            to_images: u.iter().map(|w| m.to_ambient(w)).collect(),
        }],
    };
    let oracle = Oracle::graph(spec)?;
    let t = oracle.alphabet_size();
    let mut marking = m.marking().to_vec();
    marking.push(Word::gen(t));
    let (names, _) = m.names().with_fresh("t");
    let (ambient, _) = m.ambient_names().with_fresh("t");
    let mut out = MarkedGroup::new(oracle, marking, names, ambient)?;
    out.splitting = Some(Splitting::Hnn { stable: m.arity() });
    if let (None, Some(base)) = (out.presentation(), m.presentation()) {
        let t = Word::gen(m.arity() + 1);
        let mut rels = base.to_vec();
        rels.extend(
            u.iter()
                .zip(v)
                .map(|(a, b)| a.conjugate_by(&t).mul(&b.inverse())),
        );
        out = out.with_presentation(rels);
    }
    Ok(out.with_name(format!("HNN({})", m.name)))
}

/// `G *_{Z(z)} (Z(z) x Z^p)`, marked by `S` followed by the `p` new letters.
pub fn extend_centralizer(m: &MarkedGroup, z: &Word, p: usize) -> Result<MarkedGroup> {
    if m.relation_test(z) {
        return Err(Error::Precondition(
            "cannot extend the centralizer of the identity".into(),
        ));
    }
    let amb = m.to_ambient(z);
    let (vertex, edge_from, rank_c) = match m.oracle().kind() {
        OracleKind::Free => {
            let (root, _) = amb.primitive_root()?;
            (VertexGroup::Free(m.oracle().alphabet_size()), vec![root], 1)
        }
        OracleKind::Abelian => {
            let k = m.oracle().alphabet_size();
            let data = m.oracle().abelian_data().unwrap().clone();
            if !data.relations.is_empty() && data.invariants().0 != k {
                return Err(Error::Unsupported(
                    "centralizer extension of an abelian group with torsion or relations".into(),
                ));
            }
            (
                VertexGroup::Abelian(data),
                (1..=k).map(Word::gen).collect(),
                k,
            )
        }
        other => {
            return Err(Error::Unsupported(format!(
                "centralizers in {other} ambient groups are outside the supported fragment"
            )))
        }
    };
    let spec = GraphOfGroupsSpec {
        vertices: vec![vertex, VertexGroup::Abelian(AbelianData::free(rank_c + p))],
        edges: vec![EdgeSpec {
            from: 0,
            to: 1,
            from_images: edge_from,
            to_images: (1..=rank_c).map(Word::gen).collect(),
        }],
    };
    let oracle = Oracle::graph(spec)?;
    let shift = m.oracle().alphabet_size();
    let mut marking = m.marking().to_vec();
    let mut names = m.names().clone();
    let mut ambient = m.ambient_names().clone();
    for i in 0..rank_c {
        ambient = ambient.with_fresh(&format!("c{}", i + 1)).0;
    }
    for i in 0..p {
        marking.push(Word::gen(shift + rank_c + i + 1));
        let base = if p == 1 {
            "t".to_string()
        } else {
            format!("t{}", i + 1)
        };
        names = names.with_fresh(&base).0;
        ambient = ambient.with_fresh(&base).0;
    }
    let mut out = MarkedGroup::new(oracle, marking, names, ambient)?;
    out.splitting = Some(Splitting::Amalgam { split: m.arity() });
    if let Some(base) = m.presentation() {
        // the centralizer over the marking letters: the root of z in the free
        // case, everything in the abelian case
        let n = m.arity();
        let central: Vec<Word> = if m.oracle().kind() == OracleKind::Free {
            let identity = m
                .marking()
                .iter()
                .enumerate()
                .all(|(i, w)| *w == Word::gen(i + 1));
            if identity {
                vec![z.primitive_root()?.0]
            } else {
                Vec::new()
            }
        } else {
            (1..=n).map(Word::gen).collect()
        };
        if !central.is_empty() {
            let mut rels = base.to_vec();
            for i in 1..=p {
                let t = Word::gen(n + i);
                rels.extend(central.iter().map(|c| Word::commutator(&t, c)));
                rels.extend((i + 1..=p).map(|j| Word::commutator(&t, &Word::gen(n + j))));
            }
            out = out.with_presentation(rels);
        }
    }
    out.extension = Some(CentralizerExtension {
        base: Box::new(m.clone()),
        z: z.clone(),
        p,
    });
    Ok(out.with_name(format!("{} ext {}", m.name, m.format(z))))
}

/// `G *_{u = ū} Ḡ`, marked by `S` followed by the barred copy.
pub fn double(m: &MarkedGroup, u: &Word) -> Result<MarkedGroup> {
    if m.relation_test(u) {
        return Err(Error::Precondition("double along the identity".into()));
    }
    if m.oracle().kind() == OracleKind::Free {
        let (root, k) = m.to_ambient(u).primitive_root()?;
        if k > 1 {
            return Err(Error::Precondition(format!(
                "{} is a proper power: {} = ({})^{k}",
                m.format(u),
                m.format(u),
                m.ambient_names().format(&root)
            )));
        }
    }
    let bar = m.clone();
    let out = two_vertex(m, &bar, std::slice::from_ref(u), std::slice::from_ref(u))?;
    Ok(out.with_name(format!("D({}, {})", m.name, m.format(u))))
}

/// The quotient of a presented group by extra relators (over its marking
/// letters). Supported outcomes: abelian (every commutator of generators
/// among the relators), cyclic (one generator), or C'(1/6).
pub fn quotient(m: &MarkedGroup, extra: &[Word]) -> Result<MarkedGroup> {
    let base = m.presentation().ok_or_else(|| {
        Error::Unsupported(format!("{} has no known finite presentation", m.name))
    })?;
    let n = m.arity();
    let mut rels: Vec<Word> = base.to_vec();
    rels.extend(extra.iter().cloned());
    for r in &rels {
        if r.max_index() > n {
            return Err(Error::Invalid(format!(
                "relator {r} uses letters beyond the marking"
            )));
        }
    }
    let oracle = presentation_oracle(n, &rels)?;
    let out = MarkedGroup::standard(oracle, m.names().clone())?
        .with_presentation(rels)
        .with_name(format!("{}/<<..>>", m.name));
    Ok(out)
}

/// Picks a supported oracle for `<n | rels>`.
pub fn presentation_oracle(n: usize, rels: &[Word]) -> Result<Oracle> {
    let rows = |rels: &[Word]| rels.iter().map(|r| r.exponent_sums(n)).collect::<Vec<_>>();
    let class = |w: &Word| w.cyclic_class_rep().0;
    let have: Vec<Word> = rels.iter().filter(|r| !r.is_empty()).map(class).collect();
    let abelian = (1..=n).all(|i| {
        (i + 1..=n).all(|j| have.contains(&class(&Word::commutator(&Word::gen(i), &Word::gen(j)))))
    });
    if abelian {
        return Ok(Oracle::abelian(AbelianData::new(n, rows(rels))?));
    }
    let cores: Vec<Word> = rels
        .iter()
        .map(|r| r.cyclically_reduce().0)
        .filter(|r| !r.is_empty())
        .collect();
    if cores.is_empty() {
        return Ok(Oracle::free(n));
    }
    let sc = small_cancellation_check(&cores, 1.0 / 6.0);
    match sc {
        Ok(rep) if rep.holds => {
            return Oracle::dehn_with_size(&cores, 1.0 / 6.0, n);
        }
        Ok(rep) => Err(Error::Unsupported(format!(
            "no supported oracle: the relators are not abelian and fail C'(1/6) (max piece {}, shortest relator {})",
            rep.max_piece, rep.min_length
        ))),
        Err(e) => Err(Error::Unsupported(format!("no supported oracle: {e}"))),
    }
}
