//! Graphs of groups with abelian edge groups, decided by path reduction
//! (amalgam normal forms and Britton's lemma in one procedure).
//!
//! The ambient alphabet lists each vertex's generators in vertex order, then
//! one stable letter per edge outside a BFS spanning tree rooted at vertex 0.
//! An edge `e: from -> to` with basis images `u_i` at `from` and `v_i` at
//! `to` imposes `u_i = v_i` on tree edges and `t_e v_i t_e^-1 = u_i` otherwise.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::lattice::{Matrix, RowLattice, RowSolver};
use crate::word::{Letter, Word};

use super::{abelian_relators, AbelianData, Oracle};

#[derive(Clone, Debug)]
pub enum VertexGroup {
    Free(usize),
    Abelian(AbelianData),
    /// Any oracle; only trivial edge groups may attach to it.
    Oracle(Oracle),
}

impl VertexGroup {
    pub fn rank(&self) -> usize {
        match self {
            VertexGroup::Free(n) => *n,
            VertexGroup::Abelian(d) => d.rank,
            VertexGroup::Oracle(o) => o.alphabet_size(),
        }
    }

    /// Triviality; `lattice` must be the relation lattice of an abelian vertex.
    fn is_trivial(&self, w: &Word, lattice: Option<&RowLattice<i64>>) -> bool {
        match self {
            VertexGroup::Free(_) => w.is_empty(),
            VertexGroup::Abelian(d) => lattice.unwrap().contains(&w.exponent_sums(d.rank)),
            VertexGroup::Oracle(o) => o.decide(w),
        }
    }

    pub fn relators(&self) -> Option<Vec<Word>> {
        match self {
            VertexGroup::Free(_) => Some(Vec::new()),
            VertexGroup::Abelian(d) => Some(abelian_relators(d)),
            VertexGroup::Oracle(o) => o.relators(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EdgeSpec {
    pub from: usize,
    pub to: usize,
    /// Images of the edge-group basis in the `from` vertex (local letters).
    pub from_images: Vec<Word>,
    /// Images of the same basis in the `to` vertex.
    pub to_images: Vec<Word>,
}

impl EdgeSpec {
    pub fn rank(&self) -> usize {
        self.from_images.len()
    }
}

#[derive(Clone, Debug)]
pub struct GraphOfGroupsSpec {
    pub vertices: Vec<VertexGroup>,
    pub edges: Vec<EdgeSpec>,
}

/// How an edge group sits in one vertex group.
#[derive(Clone, Debug)]
enum Embedding {
    Trivial,
    /// Free vertex, cyclic edge generated by `root^power`.
    Cyclic {
        root: Word,
        power: i64,
    },
    /// Abelian vertex; `stacked` is the basis image matrix over the relations.
    Lattice {
        rank: usize,
        ambient: usize,
        solver: RowSolver<i64>,
    },
}

impl Embedding {
    /// Edge-group coordinates of `g`, if `g` lies in the image.
    fn coords(
        &self,
        g: &Word,
        vertex: &VertexGroup,
        lattice: Option<&RowLattice<i64>>,
    ) -> Option<Vec<i64>> {
        match self {
            Embedding::Trivial => vertex.is_trivial(g, lattice).then(Vec::new),
            Embedding::Cyclic { root, power } => {
                if g.is_empty() {
                    return Some(vec![0]);
                }
                let (r, q) = g.primitive_root().ok()?;
                let q = q as i64;
                let signed = if &r == root {
                    q
                } else if r == root.inverse() {
                    -q
                } else {
                    return None;
                };
                (signed % power == 0).then(|| vec![signed / power])
            }
            Embedding::Lattice {
                rank,
                ambient,
                solver,
            } => {
                let c = solver.solve(&g.exponent_sums(*ambient))?;
                Some(c[..*rank].to_vec())
            }
        }
    }
}

fn image_of(images: &[Word], c: &[i64]) -> Word {
    let factors: Vec<(Word, i64)> = images.iter().cloned().zip(c.iter().copied()).collect();
    crate::word::product(&factors)
}

/// One syllable of a word split along the graph: a vertex element or a
/// stable letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Syllable {
    Vertex(usize, Word),
    Stable(usize, i64),
}

#[derive(Clone, Debug)]
pub struct GraphOracle {
    spec: GraphOfGroupsSpec,
    offsets: Vec<usize>,
    /// Global letter index of each edge's stable letter; `None` on tree edges.
    stable: Vec<Option<usize>>,
    size: usize,
    /// Parent edge of each vertex in the spanning tree (None at the root).
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    from_embed: Vec<Embedding>,
    to_embed: Vec<Embedding>,
    lattices: Vec<Option<RowLattice<i64>>>,
    abelian: RowLattice<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Step {
    edge: usize,
    /// true when walking from `from` to `to`
    forward: bool,
}

impl GraphOracle {
    pub fn new(spec: GraphOfGroupsSpec) -> Result<GraphOracle> {
        let nv = spec.vertices.len();
        if nv == 0 {
            return Err(Error::Invalid("graph of groups without vertices".into()));
        }
        let mut offsets = Vec::with_capacity(nv);
        let mut acc = 0;
        for v in &spec.vertices {
            offsets.push(acc);
            acc += v.rank();
        }
        for (i, e) in spec.edges.iter().enumerate() {
            if e.from >= nv || e.to >= nv {
                return Err(Error::Invalid(format!(
                    "edge {i} references a missing vertex"
                )));
            }
            if e.from_images.len() != e.to_images.len() {
                return Err(Error::Invalid(format!(
                    "edge {i}: {} images at the origin but {} at the terminus",
                    e.from_images.len(),
                    e.to_images.len()
                )));
            }
        }
        // spanning tree by BFS from vertex 0
        let mut parent = vec![None; nv];
        let mut depth = vec![usize::MAX; nv];
        let mut tree = vec![false; spec.edges.len()];
        depth[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for (i, e) in spec.edges.iter().enumerate() {
                let other = if e.from == v {
                    e.to
                } else if e.to == v {
                    e.from
                } else {
                    continue;
                };
                if depth[other] == usize::MAX {
                    depth[other] = depth[v] + 1;
                    parent[other] = Some(i);
                    tree[i] = true;
                    queue.push_back(other);
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return Err(Error::Invalid("graph of groups is not connected".into()));
        }
        let mut stable = Vec::with_capacity(spec.edges.len());
        for t in &tree {
            if *t {
                stable.push(None);
            } else {
                acc += 1;
                stable.push(Some(acc));
            }
        }
        let size = acc;
        let mut from_embed = Vec::new();
        let mut to_embed = Vec::new();
        for (i, e) in spec.edges.iter().enumerate() {
            from_embed.push(embedding(i, &spec.vertices[e.from], &e.from_images)?);
            to_embed.push(embedding(i, &spec.vertices[e.to], &e.to_images)?);
        }
        let abelian = abelianization(&spec, &offsets, size);
        let lattices = spec
            .vertices
            .iter()
            .map(|v| match v {
                VertexGroup::Abelian(d) => Some(d.lattice()),
                _ => None,
            })
            .collect();
        Ok(GraphOracle {
            lattices,
            spec,
            offsets,
            stable,
            size,
            parent,
            depth,
            from_embed,
            to_embed,
            abelian,
        })
    }

    pub fn spec(&self) -> &GraphOfGroupsSpec {
        &self.spec
    }

    pub fn alphabet_size(&self) -> usize {
        self.size
    }

    /// Global index of the first letter of vertex `v`, minus one.
    pub fn vertex_offset(&self, v: usize) -> usize {
        self.offsets[v]
    }

    pub fn stable_letter(&self, edge: usize) -> Option<usize> {
        self.stable[edge]
    }

    pub fn is_tree_edge(&self, edge: usize) -> bool {
        self.stable[edge].is_none()
    }

    /// Embeds a local word of vertex `v` into the ambient alphabet.
    pub fn vertex_word(&self, v: usize, w: &Word) -> Word {
        w.shift(self.offsets[v])
    }

    /// Edge-group coordinates of a global word lying in a vertex group, as
    /// seen from the given end of `edge`.
    pub fn edge_coords(&self, edge: usize, at_from: bool, w: &Word) -> Option<Vec<i64>> {
        let e = &self.spec.edges[edge];
        let v = if at_from { e.from } else { e.to };
        let local = self.localize(v, w)?;
        let emb = if at_from {
            &self.from_embed[edge]
        } else {
            &self.to_embed[edge]
        };
        emb.coords(&local, &self.spec.vertices[v], self.lattices[v].as_ref())
    }

    /// The local word of vertex `v`, if every letter of `w` belongs to it.
    pub fn localize(&self, v: usize, w: &Word) -> Option<Word> {
        let lo = self.offsets[v];
        let hi = lo + self.spec.vertices[v].rank();
        let mut out = Vec::with_capacity(w.len());
        for &l in w.letters() {
            if l.index() <= lo || l.index() > hi {
                return None;
            }
            out.push(Letter::new(l.index() - lo, l.is_inverse()));
        }
        Some(Word::reduce(out))
    }

    fn vertex_of_letter(&self, idx: usize) -> Option<usize> {
        (0..self.spec.vertices.len()).find(|&v| {
            idx > self.offsets[v] && idx <= self.offsets[v] + self.spec.vertices[v].rank()
        })
    }

    fn edge_of_stable(&self, idx: usize) -> Option<usize> {
        self.stable.iter().position(|s| *s == Some(idx))
    }

    pub fn syllables(&self, w: &Word) -> Vec<Syllable> {
        let mut out: Vec<Syllable> = Vec::new();
        for &l in w.letters() {
            if let Some(v) = self.vertex_of_letter(l.index()) {
                let local = Word::letter(Letter::new(l.index() - self.offsets[v], l.is_inverse()));
                match out.last_mut() {
                    Some(Syllable::Vertex(u, g)) if *u == v => *g = g.mul(&local),
                    _ => out.push(Syllable::Vertex(v, local)),
                }
            } else {
                let e = self
                    .edge_of_stable(l.index())
                    .expect("letter outside alphabet");
                out.push(Syllable::Stable(e, l.sign()));
            }
        }
        out
    }

    /// Tree path from `a` to `b` as edge traversals.
    fn tree_path(&self, a: usize, b: usize) -> Vec<Step> {
        let mut up = Vec::new();
        let mut down = Vec::new();
        let (mut x, mut y) = (a, b);
        while x != y {
            if self.depth[x] >= self.depth[y] {
                let e = self.parent[x].unwrap();
                let edge = &self.spec.edges[e];
                // walking from x toward its parent
                let forward = edge.from == x;
                let next = if edge.from == x { edge.to } else { edge.from };
                up.push(Step { edge: e, forward });
                x = next;
            } else {
                let e = self.parent[y].unwrap();
                let edge = &self.spec.edges[e];
                // walking from the parent down to y
                let forward = edge.to == y;
                let prev = if edge.from == y { edge.to } else { edge.from };
                down.push(Step { edge: e, forward });
                y = prev;
            }
        }
        down.reverse();
        up.extend(down);
        up
    }

    fn step_target(&self, s: Step) -> usize {
        let e = &self.spec.edges[s.edge];
        if s.forward {
            e.to
        } else {
            e.from
        }
    }

    pub fn decide(&self, w: &Word) -> bool {
        if !self.abelian.contains(&w.exponent_sums(self.size)) {
            return false;
        }
        // stack of (traversal, element at its target vertex); the bottom
        // element lives at vertex 0
        let mut base = Word::empty();
        let mut stack: Vec<(Step, Word)> = Vec::new();
        let mut here = 0usize;
        for syl in self.syllables(w) {
            match syl {
                Syllable::Vertex(v, g) => {
                    for s in self.tree_path(here, v) {
                        self.push_step(&mut base, &mut stack, s);
                    }
                    here = v;
                    match stack.last_mut() {
                        Some((_, top)) => *top = top.mul(&g),
                        None => base = base.mul(&g),
                    }
                }
                Syllable::Stable(e, sign) => {
                    let edge = &self.spec.edges[e];
                    let forward = sign > 0;
                    let start = if forward { edge.from } else { edge.to };
                    for s in self.tree_path(here, start) {
                        self.push_step(&mut base, &mut stack, s);
                    }
                    let s = Step { edge: e, forward };
                    self.push_step(&mut base, &mut stack, s);
                    here = self.step_target(s);
                }
            }
        }
        for s in self.tree_path(here, 0) {
            self.push_step(&mut base, &mut stack, s);
        }
        stack.is_empty() && self.spec.vertices[0].is_trivial(&base, self.lattices[0].as_ref())
    }

    fn push_step(&self, base: &mut Word, stack: &mut Vec<(Step, Word)>, s: Step) {
        if let Some((top, g)) = stack.last() {
            if top.edge == s.edge && top.forward != s.forward {
                // top walked into the vertex holding g; s walks back out
                let e = &self.spec.edges[s.edge];
                let (emb, vtx, images) = if top.forward {
                    (&self.to_embed[s.edge], e.to, &e.from_images)
                } else {
                    (&self.from_embed[s.edge], e.from, &e.to_images)
                };
                if let Some(c) =
                    emb.coords(g, &self.spec.vertices[vtx], self.lattices[vtx].as_ref())
                {
                    let moved = image_of(images, &c);
                    stack.pop();
                    match stack.last_mut() {
                        Some((_, prev)) => *prev = prev.mul(&moved),
                        None => *base = base.mul(&moved),
                    }
                    return;
                }
            }
        }
        stack.push((s, Word::empty()));
    }

    pub fn abelian_key(&self, w: &Word) -> Vec<i64> {
        self.abelian.reduce(&w.exponent_sums(self.size))
    }

    pub fn relators(&self) -> Option<Vec<Word>> {
        let mut rels = Vec::new();
        for (v, g) in self.spec.vertices.iter().enumerate() {
            rels.extend(g.relators()?.iter().map(|r| self.vertex_word(v, r)));
        }
        for (i, e) in self.spec.edges.iter().enumerate() {
            for (u, v) in e.from_images.iter().zip(&e.to_images) {
                let u = self.vertex_word(e.from, u);
                let v = self.vertex_word(e.to, v);
                let lhs = match self.stable[i] {
                    Some(t) => v.conjugate_by(&Word::gen(t)),
                    None => v,
                };
                rels.push(lhs.mul(&u.inverse()));
            }
        }
        Some(rels)
    }
}

fn embedding(edge: usize, vertex: &VertexGroup, images: &[Word]) -> Result<Embedding> {
    let k = images.len();
    for w in images {
        if w.max_index() > vertex.rank() {
            return Err(Error::Invalid(format!(
                "edge {edge}: image {w} uses letters outside its vertex group"
            )));
        }
    }
    if k == 0 {
        return Ok(Embedding::Trivial);
    }
    match vertex {
        VertexGroup::Free(_) => {
            if k > 1 {
                return Err(Error::Unsupported(format!(
                    "edge {edge}: free vertex groups only accept cyclic edge groups, got rank {k}"
                )));
            }
            if images[0].is_empty() {
                return Err(Error::Invalid(format!(
                    "edge {edge}: edge map is not injective"
                )));
            }
            let (root, power) = images[0].primitive_root()?;
            Ok(Embedding::Cyclic {
                root,
                power: power as i64,
            })
        }
        VertexGroup::Abelian(d) => {
            let u = Matrix::from_rows(
                images.iter().map(|w| w.exponent_sums(d.rank)).collect(),
                d.rank,
            );
            let lam = d.matrix();
            let stacked = u.stack(&lam);
            if crate::lattice::rank(&stacked) != k + crate::lattice::rank(&lam) {
                return Err(Error::Invalid(format!(
                    "edge {edge}: edge map is not injective"
                )));
            }
            Ok(Embedding::Lattice {
                rank: k,
                ambient: d.rank,
                solver: RowSolver::new(&stacked),
            })
        }
        VertexGroup::Oracle(_) => Err(Error::Unsupported(format!(
            "edge {edge}: nontrivial edge group into a vertex without a membership procedure"
        ))),
    }
}

/// Lattice of relations of the abelianization; coordinates of oracle
/// vertices are killed, which keeps the map a valid invariant.
fn abelianization(spec: &GraphOfGroupsSpec, offsets: &[usize], size: usize) -> RowLattice<i64> {
    let mut rows = Vec::new();
    for (v, g) in spec.vertices.iter().enumerate() {
        match g {
            VertexGroup::Free(_) => {}
            VertexGroup::Abelian(d) => {
                for r in &d.relations {
                    let mut row = vec![0; size];
                    row[offsets[v]..offsets[v] + d.rank].copy_from_slice(r);
                    rows.push(row);
                }
            }
            VertexGroup::Oracle(o) => {
                for i in 0..o.alphabet_size() {
                    let mut row = vec![0; size];
                    row[offsets[v] + i] = 1;
                    rows.push(row);
                }
            }
        }
    }
    for e in &spec.edges {
        for (u, w) in e.from_images.iter().zip(&e.to_images) {
            let a = u.shift(offsets[e.from]).exponent_sums(size);
            let b = w.shift(offsets[e.to]).exponent_sums(size);
            rows.push(a.iter().zip(&b).map(|(x, y)| x - y).collect());
        }
    }
    RowLattice::new(&Matrix::from_rows(rows, size))
}
