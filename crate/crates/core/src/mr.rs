//! Factorization diagrams for abelian and surface groups.

use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::homo::{make_hom, Hom, HomMode};
use crate::lattice::{gcd_all, left_kernel, smith, solve_rows, Matrix};
use crate::marked::MarkedGroup;
use crate::oracle::{AbelianData, OracleKind};
use crate::surface::{self, SurfaceSpec};
use crate::word::{self, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// An epimorphism to a quotient.
    Down,
    /// A monomorphism from a free factor; no builder emits these.
    Up,
}

#[derive(Clone, Debug)]
pub struct DiagramEdge {
    pub from: usize,
    pub to: usize,
    pub hom: Hom,
    pub direction: Direction,
    /// Kernel normal generators (over the source marking).
    pub kernel: Vec<Word>,
    /// The images generate the target, checked by a rank or letter certificate.
    pub surjective: bool,
}

#[derive(Clone, Debug)]
pub enum DiagramKind {
    Abelian,
    Surface(SurfaceSpec),
}

#[derive(Clone, Debug)]
pub struct Diagram {
    pub kind: DiagramKind,
    pub vertices: Vec<MarkedGroup>,
    pub edges: Vec<DiagramEdge>,
}

impl Diagram {
    pub fn root(&self) -> &MarkedGroup {
        &self.vertices[0]
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.from == v)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.children(v).is_empty())
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph mr {\n  node [shape=box];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"{}\"];\n", v.name));
        }
        for e in &self.edges {
            let style = match e.direction {
                Direction::Down => "solid",
                Direction::Up => "dashed",
            };
            out.push_str(&format!("  v{} -> v{} [style={style}];\n", e.from, e.to));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<_> = self
            .vertices
            .iter()
            .map(|v| serde_json::json!({ "name": v.name, "generators": v.names().names() }))
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "from": e.from,
                    "to": e.to,
                    "direction": e.direction,
                    "images": e.hom.format_images(),
                    "kernel": e.kernel.iter().map(|k| e.hom.source.format(k)).collect::<Vec<_>>(),
                    "surjective": e.surjective,
                })
            })
            .collect();
        serde_json::json!({ "vertices": vertices, "edges": edges })
    }
}

fn named(m: MarkedGroup, name: &str) -> MarkedGroup {
    m.with_name(name)
}

fn free_abelian_named(r: usize, base: &str) -> MarkedGroup {
    let names = if r == 1 {
        Alphabet::new([base.to_string()]).unwrap()
    } else {
        Alphabet::new((1..=r).map(|i| format!("{base}{i}"))).unwrap()
    };
    MarkedGroup::free_abelian(r).with_names(names).unwrap()
}

fn exponent_word(v: &[i64]) -> Word {
    let factors: Vec<(Word, i64)> = v
        .iter()
        .enumerate()
        .map(|(i, &e)| (Word::gen(i + 1), e))
        .collect();
    word::product(&factors)
}

/// `Z^r` with `r` the rank of the image matrix, and all invariant factors one.
fn abelian_surjective(images: &[Vec<i64>], r: usize) -> bool {
    let s = smith(&Matrix::from_rows(images.to_vec(), r));
    s.rank() == r && s.diagonal.iter().take(r).all(|d| *d == 1)
}

/// Projection of `Z^n / <relations>` onto its torsion-free quotient, as the
/// exponent vectors of the generator images.
fn torsion_free_projection(data: &AbelianData) -> (usize, Vec<Vec<i64>>) {
    let n = data.rank;
    let s = smith(&data.matrix());
    let k = s.rank();
    let images = (0..n).map(|j| s.q.row(j)[k..].to_vec()).collect();
    (n - k, images)
}

fn edge_between(
    source: &MarkedGroup,
    target: &MarkedGroup,
    images: Vec<Vec<i64>>,
    from: usize,
    to: usize,
) -> Result<DiagramEdge> {
    let r = target.arity();
    let surjective = abelian_surjective(&images, r);
    let kernel = left_kernel(&Matrix::from_rows(images.clone(), r))
        .iter()
        .map(|v| exponent_word(v))
        .filter(|w| !source.relation_test(w))
        .collect();
    let words = images.iter().map(|v| exponent_word(v)).collect();
    Ok(DiagramEdge {
        from,
        to,
        hom: make_hom(source, target, words, HomMode::Presentation)?,
        direction: Direction::Down,
        kernel,
        surjective,
    })
}

/// `G -> G/torsion -> Z`, or `G -> {1}` for finite `G`.
pub fn abelian_mr(data: &AbelianData) -> Result<Diagram> {
    let g = MarkedGroup::abelian(data.clone()).with_name(describe_abelian(data));
    let (r, images) = torsion_free_projection(data);
    let mut d = Diagram {
        kind: DiagramKind::Abelian,
        vertices: vec![g.clone()],
        edges: Vec::new(),
    };
    if r == 0 {
        let one = named(MarkedGroup::free_abelian(0), "1");
        d.edges.push(DiagramEdge {
            from: 0,
            to: 1,
            hom: make_hom(
                &g,
                &one,
                vec![Word::empty(); data.rank],
                HomMode::Presentation,
            )?,
            direction: Direction::Down,
            kernel: (1..=data.rank).map(Word::gen).collect(),
            surjective: true,
        });
        d.vertices.push(one);
        return Ok(d);
    }
    let l = named(free_abelian_named(r, "t"), &format!("Z^{r}"));
    d.edges.push(edge_between(&g, &l, images, 0, 1)?);
    d.vertices.push(l.clone());
    if r >= 2 {
        let z = named(free_abelian_named(1, "z"), "Z");
        let proj = (0..r).map(|i| vec![i64::from(i == 0)]).collect();
        d.edges.push(edge_between(&l, &z, proj, 1, 2)?);
        d.vertices.push(z);
    }
    Ok(d)
}

pub fn describe_abelian(data: &AbelianData) -> String {
    let (r, torsion) = data.invariants();
    let mut parts = Vec::new();
    if r > 0 {
        parts.push(if r == 1 {
            "Z".to_string()
        } else {
            format!("Z^{r}")
        });
    }
    parts.extend(torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("+")
    }
}

/// The minimal max-norm of the images of a morphism `Z^p -> Z` over changes
/// of basis, which is the gcd of the image vector.
pub fn abelian_shortest_length(v: &[i64]) -> Result<i64> {
    if v.iter().all(|&x| x == 0) {
        return Err(Error::Precondition("the zero map has no length".into()));
    }
    Ok(gcd_all(v))
}

pub fn surface_mr(spec: SurfaceSpec) -> Result<Diagram> {
    let g = surface::surface_group(spec)?;
    let mut d = Diagram {
        kind: DiagramKind::Surface(spec),
        vertices: vec![g.clone()],
        edges: Vec::new(),
    };
    if spec.euler_characteristic() >= -1 {
        let n = g.arity();
        let data = AbelianData::new(n, vec![spec.relator().exponent_sums(n)])?;
        let (r, images) = torsion_free_projection(&data);
        let l = named(free_abelian_named(r, "t"), &format!("Z^{r}"));
        d.edges.push(edge_between(&g, &l, images, 0, 1)?);
        d.vertices.push(l);
        return Ok(d);
    }
    d.edges.push(DiagramEdge {
        from: 0,
        to: 1,
        hom: Hom::identity(&g),
        direction: Direction::Down,
        kernel: Vec::new(),
        surjective: true,
    });
    d.vertices.push(g.clone());
    for p in surface::pinchings(spec)? {
        let to = d.vertices.len();
        let target = p.hom.target.clone().with_name(format!("F{}", p.rank));
        let surjective = (1..=p.rank).all(|i| p.hom.images.contains(&Word::gen(i)));
        let mut hom = p.hom;
        hom.target = target.clone();
        d.edges.push(DiagramEdge {
            from: 1,
            to,
            hom,
            direction: Direction::Down,
            kernel: p.kernel,
            surjective,
        });
        d.vertices.push(target);
    }
    Ok(d)
}

#[derive(Clone, Debug)]
pub enum Factorization {
    /// Vertex path from the root to a leaf, and the induced map on the leaf.
    Path { vertices: Vec<usize>, through: Hom },
    /// A kernel element (over the root marking) whose image survives.
    Failure { surviving: Word },
}

impl Factorization {
    pub fn is_path(&self) -> bool {
        matches!(self, Factorization::Path { .. })
    }
}

/// Writes each image as a power of one element when the target is free or
/// free abelian; `None` when they do not generate a cyclic subgroup.
fn cyclic_exponents(target: &MarkedGroup, images: &[Word]) -> Result<Option<(Word, Vec<i64>)>> {
    let standard = target
        .marking()
        .iter()
        .enumerate()
        .all(|(i, w)| *w == Word::gen(i + 1));
    match target.oracle().kind() {
        OracleKind::Free if standard => {
            let Some(first) = images.iter().find(|w| !w.is_empty()) else {
                return Ok(Some((Word::empty(), vec![0; images.len()])));
            };
            let (core, conj) = first.cyclically_reduce();
            let (root, _) = core.primitive_root()?;
            let base = root.conjugate_by(&conj);
            let mut exps = Vec::new();
            for w in images {
                let (c2, j2) = w.cyclically_reduce();
                if w.is_empty() {
                    exps.push(0);
                    continue;
                }
                let (r2, k2) = c2.primitive_root()?;
                let b2 = r2.conjugate_by(&j2);
                if b2 == base {
                    exps.push(k2 as i64);
                } else if b2 == base.inverse() {
                    exps.push(-(k2 as i64));
                } else {
                    return Ok(None);
                }
            }
            Ok(Some((base, exps)))
        }
        OracleKind::Abelian
            if standard
                && target
                    .oracle()
                    .abelian_data()
                    .is_some_and(|d| d.relations.is_empty()) =>
        {
            let m = target.arity();
            let vecs: Vec<Vec<i64>> = images.iter().map(|w| w.exponent_sums(m)).collect();
            let Some(first) = vecs.iter().find(|v| v.iter().any(|&x| x != 0)) else {
                return Ok(Some((Word::empty(), vec![0; images.len()])));
            };
            let g = gcd_all(first);
            let prim: Vec<i64> = first.iter().map(|x| x / g).collect();
            let i0 = prim.iter().position(|&x| x != 0).unwrap();
            let mut exps = Vec::new();
            for v in &vecs {
                let k = v[i0] / prim[i0];
                if v.iter().zip(&prim).any(|(a, b)| *a != k * b) {
                    return Ok(None);
                }
                exps.push(k);
            }
            Ok(Some((exponent_word(&prim), exps)))
        }
        _ => Err(Error::Unsupported(
            "factorization needs a free or free abelian target".into(),
        )),
    }
}

/// Does `h` (from the diagram's root) factor through a root-to-leaf path?
pub fn factor_through(h: &Hom, d: &Diagram) -> Result<Factorization> {
    if h.source.arity() != d.root().arity() {
        return Err(Error::Arity {
            expected: d.root().arity(),
            found: h.source.arity(),
        });
    }
    match d.kind {
        DiagramKind::Abelian => factor_abelian(h, d),
        DiagramKind::Surface(_) => factor_surface(h, d),
    }
}

fn factor_abelian(h: &Hom, d: &Diagram) -> Result<Factorization> {
    let e0 = &d.edges[0];
    if let Some(k) = e0
        .kernel
        .iter()
        .find(|k| !h.target.relation_test(&h.apply(k)))
    {
        return Ok(Factorization::Failure {
            surviving: k.clone(),
        });
    }
    let l = &d.vertices[1];
    let r = l.arity();
    if r == 0 {
        let through = make_hom(l, &h.target, Vec::new(), HomMode::Presentation)?;
        return Ok(Factorization::Path {
            vertices: vec![0, 1],
            through,
        });
    }
    // images of a section L -> G
    let rows: Vec<Vec<i64>> = e0.hom.images.iter().map(|w| w.exponent_sums(r)).collect();
    let mat = Matrix::from_rows(rows, r);
    let mut hl = Vec::new();
    let mut section = Vec::new();
    for i in 0..r {
        let e: Vec<i64> = (0..r).map(|j| i64::from(i == j)).collect();
        let x = solve_rows(&mat, &e)
            .ok_or_else(|| Error::Invalid("diagram edge is not surjective".into()))?;
        let w = exponent_word(&x);
        hl.push(h.apply(&w));
        section.push(w);
    }
    if r == 1 {
        let through = make_hom(l, &h.target, hl, HomMode::Presentation)?;
        return Ok(Factorization::Path {
            vertices: vec![0, 1],
            through,
        });
    }
    // L -> Z up to automorphisms of L: the image must be cyclic
    match cyclic_exponents(&h.target, &hl)? {
        Some((base, exps)) => {
            let z = &d.vertices[2];
            let g = gcd_all(&exps);
            let through = if g == 0 {
                make_hom(z, &h.target, vec![Word::empty()], HomMode::Presentation)?
            } else {
                make_hom(z, &h.target, vec![base.pow(g)], HomMode::Presentation)?
            };
            Ok(Factorization::Path {
                vertices: vec![0, 1, 2],
                through,
            })
        }
        None => {
            // some commutator-free kernel element of every projection survives
            let j = (1..r)
                .find(|&j| !h.target.relation_test(&hl[j]))
                .unwrap_or(1);
            Ok(Factorization::Failure {
                surviving: section[j].clone(),
            })
        }
    }
}

fn factor_surface(h: &Hom, d: &Diagram) -> Result<Factorization> {
    let leaves: Vec<&DiagramEdge> = d.edges.iter().filter(|e| e.from == 1).collect();
    if leaves.is_empty() {
        // abelianization leaf: the kernel is generated by commutators
        let e0 = &d.edges[0];
        let n = h.source.arity();
        let mut kernel: Vec<Word> = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                kernel.push(Word::commutator(&Word::gen(i), &Word::gen(j)));
            }
        }
        kernel.extend(e0.kernel.iter().cloned());
        if let Some(k) = kernel.iter().find(|k| !h.target.relation_test(&h.apply(k))) {
            return Ok(Factorization::Failure {
                surviving: k.clone(),
            });
        }
        let r = d.vertices[1].arity();
        let rows: Vec<Vec<i64>> = e0.hom.images.iter().map(|w| w.exponent_sums(r)).collect();
        let mat = Matrix::from_rows(rows, r);
        let images = (0..r)
            .map(|i| {
                let e: Vec<i64> = (0..r).map(|j| i64::from(i == j)).collect();
                solve_rows(&mat, &e).map(|x| h.apply(&exponent_word(&x)))
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Invalid("diagram edge is not surjective".into()))?;
        let through = make_hom(&d.vertices[1], &h.target, images, HomMode::Presentation)?;
        return Ok(Factorization::Path {
            vertices: vec![0, 1],
            through,
        });
    }
    let results: Vec<Result<std::result::Result<Hom, Word>>> = leaves
        .par_iter()
        .map(|e| {
            let p = surface::Pinching {
                hom: e.hom.clone(),
                kernel: e.kernel.clone(),
                rank: e.hom.target.arity(),
            };
            surface::factor_through_pinching(h, &p)
        })
        .collect();
    let mut first_failure = None;
    for (e, r) in leaves.iter().zip(results) {
        match r? {
            Ok(through) => {
                return Ok(Factorization::Path {
                    vertices: vec![0, 1, e.to],
                    through,
                })
            }
            Err(w) => {
                first_failure.get_or_insert(w);
            }
        }
    }
    Ok(Factorization::Failure {
        surviving: first_failure.unwrap(),
    })
}

/// Tries `h ∘ σ` for each automorphism `σ` of the root, in order.
pub fn factor_through_modular(
    h: &Hom,
    d: &Diagram,
    autos: &[Hom],
) -> Result<Option<(usize, Factorization)>> {
    for (i, sigma) in autos.iter().enumerate() {
        let f = factor_through(&sigma.then(h)?, d)?;
        if f.is_path() {
            return Ok(Some((i, f)));
        }
    }
    Ok(None)
}

/// The identity, the twists along `[a1,b1]` (both directions) and the swap
/// `a_i <-> b_i` of an orientable surface group, and products of up to
/// `depth` of them.
pub fn surface_automorphisms(spec: SurfaceSpec, depth: usize) -> Result<Vec<Hom>> {
    if !spec.orientable || spec.genus < 2 {
        return Err(Error::Unsupported(
            "modular samples are built for orientable genus >= 2".into(),
        ));
    }
    let g = surface::surface_group(spec)?;
    let n = g.arity();
    let c = Word::commutator(&Word::gen(1), &Word::gen(2));
    let twist = |k: i64| {
        let ck = c.pow(k);
        (1..=n)
            .map(|i| {
                if i > 2 {
                    Word::gen(i).conjugate_by(&ck)
                } else {
                    Word::gen(i)
                }
            })
            .collect::<Vec<_>>()
    };
    let swap: Vec<Word> = (1..=n)
        .map(|i| Word::gen(if i % 2 == 1 { i + 1 } else { i - 1 }))
        .collect();
    let gens: Vec<Hom> = [twist(1), twist(-1), swap]
        .into_iter()
        .map(|imgs| make_hom(&g, &g, imgs, HomMode::Presentation))
        .collect::<Result<_>>()?;
    let mut out = vec![Hom::identity(&g)];
    let mut frontier = vec![Hom::identity(&g)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for f in &frontier {
            for s in &gens {
                next.push(s.then(f)?);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_chain() {
        let d = abelian_mr(&AbelianData::from_moduli(&[0, 0, 4])).unwrap();
        assert_eq!(d.vertices.len(), 3);
        assert!(d.edges.iter().all(|e| e.surjective));
        assert_eq!(d.vertices[1].arity(), 2);
        assert_eq!(d.edges[0].kernel.len(), 1);
        let d = abelian_mr(&AbelianData::from_moduli(&[6])).unwrap();
        assert_eq!(d.vertices.len(), 2);
        assert_eq!(d.vertices[1].arity(), 0);
        let d = abelian_mr(&AbelianData::free(1)).unwrap();
        assert_eq!(d.vertices.len(), 2);
        assert!(d.edges[0].kernel.is_empty());
    }

    #[test]
    fn shortest_length() {
        assert_eq!(abelian_shortest_length(&[6, 10, 15]).unwrap(), 1);
        assert_eq!(abelian_shortest_length(&[4, 6]).unwrap(), 2);
        assert_eq!(abelian_shortest_length(&[0, 0, -7]).unwrap(), 7);
        assert!(abelian_shortest_length(&[0, 0]).is_err());
        // unimodular 2x2 matrices with entries at most 5 do no better on (4, 6)
        let mut best = i64::MAX;
        for a in -5i64..=5 {
            for b in -5i64..=5 {
                for c in -5i64..=5 {
                    for d in -5i64..=5 {
                        if (a * d - b * c).abs() == 1 {
                            let x = a * 4 + b * 6;
                            let y = c * 4 + d * 6;
                            best = best.min(x.abs().max(y.abs()));
                        }
                    }
                }
            }
        }
        assert_eq!(best, 2);
    }

    #[test]
    fn surface_diagrams() {
        let d = surface_mr(SurfaceSpec::orientable(2)).unwrap();
        assert_eq!(d.leaves().len(), 1);
        let d = surface_mr(SurfaceSpec::non_orientable_chi(-2).unwrap()).unwrap();
        assert_eq!(d.leaves().len(), 2);
        let d = surface_mr(SurfaceSpec::non_orientable_chi(-1).unwrap()).unwrap();
        assert_eq!(d.leaves().len(), 1);
        assert_eq!(d.vertices[1].arity(), 2);
    }

    #[test]
    fn abelian_factoring() {
        let d = abelian_mr(&AbelianData::free(2)).unwrap();
        let z2 = d.root().clone();
        let h = make_hom(
            &z2,
            &MarkedGroup::free_abelian(1),
            vec![Word::gen(1).pow(2), Word::gen(1).pow(4)],
            HomMode::Presentation,
        )
        .unwrap();
        let f = factor_through(&h, &d).unwrap();
        let Factorization::Path { vertices, through } = f else {
            panic!()
        };
        assert_eq!(vertices, vec![0, 1, 2]);
        assert_eq!(through.images, vec![Word::gen(1).pow(2)]);
        let id = Hom::identity(&z2);
        assert!(!factor_through(&id, &d).unwrap().is_path());
    }

    #[test]
    fn surface_factoring() {
        let spec = SurfaceSpec::orientable(2);
        let d = surface_mr(spec).unwrap();
        let p = surface::standard_pinching_hom(spec).unwrap();
        assert!(factor_through(&p.hom, &d).unwrap().is_path());
        // a_i -> 1, b_i -> x_i factors only after the swap
        let g = d.root().clone();
        let imgs = vec![Word::empty(), Word::gen(1), Word::empty(), Word::gen(2)];
        let h = make_hom(&g, &MarkedGroup::free(2), imgs, HomMode::Presentation).unwrap();
        match factor_through(&h, &d).unwrap() {
            Factorization::Failure { surviving } => assert_eq!(surviving, Word::gen(2)),
            _ => panic!(),
        }
        let autos = surface_automorphisms(spec, 1).unwrap();
        let (i, _) = factor_through_modular(&h, &d, &autos).unwrap().unwrap();
        assert_eq!(i, 3);
    }
}
