//! Stack-triangulations and stack-quadrangulations.
//!
//! A [`StackMap`] is grown from its boundary (the triangle `Θ` or the root
//! square) by inserting vertices into finite faces. Faces are kept in an
//! arena indexed by the face tree; the embedding is kept as a rotation
//! system (neighbors of each vertex in counter-clockwise order).
//!
//! Vertex ids: boundary vertices come first (`0..3` or `0..4`, the root
//! vertex is `0` and the root edge is `(0, 1)`), then internal vertices in
//! insertion order.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{Arity, IncreasingTree, OrderedTree, NONE};
use crate::word::Word;

pub mod bijection;
pub mod drawing;
mod json;

pub use crate::counting::count_histories;
pub use bijection::{tree_from_graph, tree_from_map};
pub use drawing::{canonical_drawing, count_crossings, to_svg};
pub use json::{MapJson, VertexJson};

pub type VertexId = u32;
pub type FaceId = u32;
pub type History = Vec<Word>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "tri")]
    Triangulation,
    #[serde(rename = "quad")]
    Quadrangulation,
}

impl Family {
    pub fn arity(self) -> Arity {
        match self {
            Family::Triangulation => Arity::Ternary,
            Family::Quadrangulation => Arity::Binary,
        }
    }

    /// Number of boundary vertices, which is also the face size.
    pub fn face_len(self) -> usize {
        match self {
            Family::Triangulation => 3,
            Family::Quadrangulation => 4,
        }
    }

    /// Edges added by one insertion.
    pub fn new_edges(self) -> usize {
        match self {
            Family::Triangulation => 3,
            Family::Quadrangulation => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Triangulation => "tri",
            Family::Quadrangulation => "quad",
        }
    }

    fn attached(self) -> &'static [usize] {
        match self {
            Family::Triangulation => &[0, 1, 2],
            Family::Quadrangulation => &[1, 3],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tri" | "triangulation" => Ok(Family::Triangulation),
            "quad" | "quadrangulation" => Ok(Family::Quadrangulation),
            other => Err(format!("unknown family {other:?} (expected tri or quad)")),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("face {0} is not a leaf of the face tree")]
    NotALeaf(Word),
    #[error("no face {0}")]
    NoSuchFace(Word),
    #[error("a {0}-ary tree does not encode a {1} map")]
    ArityMismatch(usize, Family),
    #[error("not a stack map: {0}")]
    NotAStackMap(String),
    #[error("vertex {0} out of range")]
    BadVertex(VertexId),
}

#[derive(Clone, Debug)]
struct Face {
    parent: FaceId,
    letter: u8,
    verts: [VertexId; 4],
    first_child: FaceId,
    apex: VertexId,
    ccw: bool,
}

#[derive(Clone, Debug)]
pub struct StackMap {
    family: Family,
    faces: Vec<Face>,
    birth_face: Vec<FaceId>,
    rot: Vec<Vec<VertexId>>,
    leaves: Vec<FaceId>,
    leaf_slot: Vec<u32>,
    n_edges: usize,
}

impl StackMap {
    /// The boundary alone: `Θ` for triangulations, the root square for
    /// quadrangulations (face tuple `(B, C, D, A)` with `A = 0`).
    pub fn initial(family: Family) -> Self {
        let (verts, rot) = match family {
            Family::Triangulation => ([0, 1, 2, NONE], vec![vec![1, 2], vec![2, 0], vec![0, 1]]),
            Family::Quadrangulation => (
                [1, 2, 3, 0],
                vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]],
            ),
        };
        let nb = family.face_len();
        StackMap {
            family,
            faces: vec![Face {
                parent: NONE,
                letter: 0,
                verts,
                first_child: NONE,
                apex: NONE,
                ccw: true,
            }],
            birth_face: vec![NONE; nb],
            rot,
            leaves: vec![0],
            leaf_slot: vec![0],
            n_edges: nb,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n_vertices(&self) -> usize {
        self.rot.len()
    }

    pub fn n_internal(&self) -> usize {
        self.rot.len() - self.family.face_len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    /// Number of finite faces.
    pub fn n_faces(&self) -> usize {
        self.leaves.len()
    }

    pub fn root_vertex(&self) -> VertexId {
        0
    }

    pub fn root_edge(&self) -> (VertexId, VertexId) {
        (0, 1)
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        (v as usize) < self.family.face_len()
    }

    /// Neighbors of `v` in counter-clockwise order.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.rot[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rot[v as usize].len()
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut e = Vec::with_capacity(self.n_edges);
        for (v, ns) in self.rot.iter().enumerate() {
            for &u in ns {
                if (v as u32) < u {
                    e.push((v as u32, u));
                }
            }
        }
        e.sort_unstable();
        e
    }

    pub fn face_id(&self, word: &Word) -> Option<FaceId> {
        let mut f = 0;
        for &l in word.letters() {
            let first = self.faces[f as usize].first_child;
            if first == NONE || l == 0 || l as usize > self.family.arity().degree() {
                return None;
            }
            f = first + (l - 1) as u32;
        }
        Some(f)
    }

    pub fn face_word(&self, f: FaceId) -> Word {
        let mut letters = Vec::new();
        let mut cur = f;
        while cur != 0 {
            let face = &self.faces[cur as usize];
            letters.push(face.letter);
            cur = face.parent;
        }
        letters.reverse();
        Word::from_letters(letters)
    }

    pub fn face_vertices(&self, f: FaceId) -> &[VertexId] {
        &self.faces[f as usize].verts[..self.family.face_len()]
    }

    pub fn face_is_ccw(&self, f: FaceId) -> bool {
        self.faces[f as usize].ccw
    }

    pub fn is_leaf_face(&self, f: FaceId) -> bool {
        self.faces[f as usize].first_child == NONE
    }

    /// The vertex inserted into face `f`, if any.
    pub fn face_apex(&self, f: FaceId) -> Option<VertexId> {
        let a = self.faces[f as usize].apex;
        (a != NONE).then_some(a)
    }

    /// Finite faces in lexicographic order of their words.
    pub fn leaf_faces_lex(&self) -> Vec<FaceId> {
        self.faces_preorder()
            .into_iter()
            .filter(|&f| self.is_leaf_face(f))
            .collect()
    }

    fn faces_preorder(&self) -> Vec<FaceId> {
        let d = self.family.arity().degree() as u32;
        let mut out = Vec::with_capacity(self.faces.len());
        let mut stack = vec![0];
        while let Some(f) = stack.pop() {
            out.push(f);
            let first = self.faces[f as usize].first_child;
            if first != NONE {
                for k in (0..d).rev() {
                    stack.push(first + k);
                }
            }
        }
        out
    }

    pub fn birth_face(&self, v: VertexId) -> Option<FaceId> {
        let f = self.birth_face[v as usize];
        (f != NONE).then_some(f)
    }

    /// Word of the face in which `v` was inserted (`None` on the boundary).
    pub fn vertex_word(&self, v: VertexId) -> Option<Word> {
        self.birth_face(v).map(|f| self.face_word(f))
    }

    pub fn vertex_of_word(&self, word: &Word) -> Option<VertexId> {
        self.face_id(word).and_then(|f| self.face_apex(f))
    }

    /// Internal vertices sorted by the lexicographic order of their words.
    pub fn internal_vertices_lex(&self) -> Vec<VertexId> {
        self.faces_preorder()
            .into_iter()
            .filter_map(|f| self.face_apex(f))
            .collect()
    }

    /// Face words in insertion order.
    pub fn history(&self) -> History {
        (self.family.face_len()..self.n_vertices())
            .map(|v| self.vertex_word(v as u32).expect("internal vertex"))
            .collect()
    }

    /// The face tree: internal nodes are the faces that received a vertex.
    pub fn tree(&self) -> OrderedTree {
        let flags = self
            .faces_preorder()
            .into_iter()
            .map(|f| !self.is_leaf_face(f))
            .collect();
        OrderedTree::from_preorder(self.family.arity(), flags).expect("face arena is a full tree")
    }

    /// The face tree labeled by insertion rank.
    pub fn increasing_tree(&self) -> IncreasingTree {
        let nb = self.family.face_len() as u32;
        let labels = self
            .faces_preorder()
            .into_iter()
            .map(|f| self.face_apex(f).map_or(0, |v| v - nb + 1))
            .collect();
        IncreasingTree::new(self.tree(), labels).expect("insertion order is increasing")
    }

    /// Returns a copy with a vertex inserted in face `face`.
    pub fn grow(&self, face: &Word) -> Result<StackMap, MapError> {
        let mut m = self.clone();
        m.grow_word(face)?;
        Ok(m)
    }

    pub fn grow_word(&mut self, face: &Word) -> Result<VertexId, MapError> {
        let f = self
            .face_id(face)
            .ok_or_else(|| MapError::NoSuchFace(face.clone()))?;
        self.grow_face(f)
    }

    pub fn grow_face(&mut self, f: FaceId) -> Result<VertexId, MapError> {
        if !self.is_leaf_face(f) {
            return Err(MapError::NotALeaf(self.face_word(f)));
        }
        let face = self.faces[f as usize].clone();
        let len = self.family.face_len();
        let verts = &face.verts[..len];
        let x = self.rot.len() as VertexId;
        let attached = self.family.attached();
        for &i in attached {
            let v = verts[i];
            let after = if face.ccw {
                verts[(i + 1) % len]
            } else {
                verts[(i + len - 1) % len]
            };
            let rot = &mut self.rot[v as usize];
            let pos = rot
                .iter()
                .position(|&y| y == after)
                .expect("face corners are adjacent");
            rot.insert(pos + 1, x);
        }
        let mut xr: Vec<VertexId> = attached.iter().map(|&i| verts[i]).collect();
        if !face.ccw {
            xr.reverse();
        }
        self.rot.push(xr);
        self.birth_face.push(f);
        self.n_edges += attached.len();

        let first = self.faces.len() as FaceId;
        let child = |letter: u8, verts: [VertexId; 4], ccw: bool| Face {
            parent: f,
            letter,
            verts,
            first_child: NONE,
            apex: NONE,
            ccw,
        };
        match self.family {
            Family::Triangulation => {
                for i in 0..3 {
                    let mut cv = face.verts;
                    cv[i] = x;
                    self.faces.push(child(i as u8 + 1, cv, face.ccw));
                }
            }
            Family::Quadrangulation => {
                let [p1, p2, p3, p4] = face.verts;
                self.faces.push(child(1, [p2, x, p4, p1], face.ccw));
                self.faces.push(child(2, [p2, x, p4, p3], !face.ccw));
            }
        }
        let fc = &mut self.faces[f as usize];
        fc.first_child = first;
        fc.apex = x;

        let slot = self.leaf_slot[f as usize] as usize;
        self.leaves.swap_remove(slot);
        if let Some(&moved) = self.leaves.get(slot) {
            self.leaf_slot[moved as usize] = slot as u32;
        }
        self.leaf_slot[f as usize] = NONE;
        for c in first..self.faces.len() as FaceId {
            self.leaf_slot.push(self.leaves.len() as u32);
            self.leaves.push(c);
        }
        Ok(x)
    }

    /// Inserts a vertex in a uniformly chosen finite face.
    pub fn grow_uniform<R: Rng + ?Sized>(&mut self, rng: &mut R) -> VertexId {
        let f = self.leaves[rng.random_range(0..self.leaves.len())];
        self.grow_face(f).expect("leaf list holds leaves")
    }
}

/// Replays the internal nodes of `t` in lexicographic order.
pub fn map_from_tree(t: &OrderedTree, family: Family) -> Result<StackMap, MapError> {
    if t.arity() != family.arity() {
        return Err(MapError::ArityMismatch(t.arity().degree(), family));
    }
    let mut m = StackMap::initial(family);
    let mut face_of = vec![NONE; t.len()];
    face_of[0] = 0;
    for id in t.internal_ids() {
        let f = face_of[id as usize];
        m.grow_face(f)?;
        let first = m.faces[f as usize].first_child;
        for (k, &c) in t.children(id).iter().enumerate() {
            face_of[c as usize] = first + k as u32;
        }
    }
    Ok(m)
}

pub fn map_from_history(family: Family, history: &[Word]) -> Result<StackMap, MapError> {
    let mut m = StackMap::initial(family);
    for w in history {
        m.grow_word(w)?;
    }
    Ok(m)
}

/// Growth law: `n` insertions, each in a uniformly chosen finite face.
pub fn sample_growth_map<R: Rng + ?Sized>(family: Family, n: usize, rng: &mut R) -> StackMap {
    let mut m = StackMap::initial(family);
    for _ in 0..n {
        m.grow_uniform(rng);
    }
    m
}

/// Uniform law on maps with `n` internal vertices.
pub fn sample_uniform_map<R: Rng + ?Sized>(family: Family, n: usize, rng: &mut R) -> StackMap {
    let t = crate::tree::sample_uniform_tree(family.arity(), n, rng);
    map_from_tree(&t, family).expect("arity matches family")
}

/// Breadth-first distances from `src`; `u32::MAX` marks unreachable vertices.
pub fn bfs(m: &StackMap, src: VertexId) -> Vec<u32> {
    let mut dist = vec![u32::MAX; m.n_vertices()];
    let mut queue = std::collections::VecDeque::new();
    dist[src as usize] = 0;
    queue.push_back(src);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize];
        for &u in m.neighbors(v) {
            if dist[u as usize] == u32::MAX {
                dist[u as usize] = dv + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

pub fn bfs_distance(m: &StackMap, u: VertexId, v: VertexId) -> Result<u32, MapError> {
    for x in [u, v] {
        if x as usize >= m.n_vertices() {
            return Err(MapError::BadVertex(x));
        }
    }
    Ok(bfs(m, u)[v as usize])
}

pub fn degree(m: &StackMap, u: VertexId) -> Result<usize, MapError> {
    if u as usize >= m.n_vertices() {
        return Err(MapError::BadVertex(u));
    }
    Ok(m.degree(u))
}

/// Reading of the quadrangulation degree formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum QuadDegreeRule {
    /// `2 + #` internal descendants `u·w′` with
    /// `w′ ∈ {1,2} ∪ {1,2}{1,2}1({1,2}2)*`, the words for which the apex of
    /// `u` lies on the active diagonal of face `u·w′`.
    #[default]
    Automaton,
    /// `2 + #{|w′| ≥ 2, w′ ∈ {12,21}*}` as printed.
    Literal,
}

/// Degree of the vertex inserted in face `u`, read off the tree.
pub fn degree_via_tree(t: &OrderedTree, u: &Word, family: Family) -> Result<usize, MapError> {
    degree_via_tree_with(t, u, family, QuadDegreeRule::default())
}

pub fn degree_via_tree_with(
    t: &OrderedTree,
    u: &Word,
    family: Family,
    rule: QuadDegreeRule,
) -> Result<usize, MapError> {
    if t.arity() != family.arity() {
        return Err(MapError::ArityMismatch(t.arity().degree(), family));
    }
    let id = t
        .find(u)
        .filter(|&id| t.is_internal(id))
        .ok_or_else(|| MapError::NoSuchFace(u.clone()))?;
    let count = match family {
        Family::Triangulation => {
            let mut count = 0;
            for (k, &c) in t.children(id).iter().enumerate() {
                let avoid = k as u8 + 1;
                let mut stack = vec![c];
                while let Some(v) = stack.pop() {
                    if !t.is_internal(v) {
                        continue;
                    }
                    count += 1;
                    for (j, &g) in t.children(v).iter().enumerate() {
                        if j as u8 + 1 != avoid {
                            stack.push(g);
                        }
                    }
                }
            }
            3 + count
        }
        Family::Quadrangulation => {
            // (node, automaton state); states index the apex position in the
            // descendant face tuple, 4 = literal-rule states
            let mut count = 0;
            match rule {
                QuadDegreeRule::Automaton => {
                    let mut stack: Vec<(u32, u8)> =
                        t.children(id).iter().map(|&c| (c, 1)).collect();
                    while let Some((v, pos)) = stack.pop() {
                        if !t.is_internal(v) {
                            continue;
                        }
                        if pos == 1 || pos == 3 {
                            count += 1;
                        }
                        let kids = t.children(v);
                        let next = |letter: u8| -> Option<u8> {
                            match (pos, letter) {
                                (1, _) => Some(0),
                                (0, 1) => Some(3),
                                (3, _) => Some(2),
                                (2, 2) => Some(3),
                                _ => None,
                            }
                        };
                        for (j, &g) in kids.iter().enumerate() {
                            if let Some(p) = next(j as u8 + 1) {
                                stack.push((g, p));
                            }
                        }
                    }
                }
                QuadDegreeRule::Literal => {
                    // state: 0 = even length inside {12,21}*, 1/2 = odd with
                    // pending letter 1/2
                    let mut stack: Vec<(u32, u8, usize)> = vec![(id, 0, 0)];
                    while let Some((v, st, len)) = stack.pop() {
                        if !t.is_internal(v) {
                            continue;
                        }
                        if len >= 2 && st == 0 {
                            count += 1;
                        }
                        for (j, &g) in t.children(v).iter().enumerate() {
                            let l = j as u8 + 1;
                            let next = match st {
                                0 => Some(l),
                                s if s != l => Some(0),
                                _ => None,
                            };
                            if let Some(n) = next {
                                stack.push((g, n, len + 1));
                            }
                        }
                    }
                }
            }
            2 + count
        }
    };
    Ok(count)
}

/// Calls `f` with every increasing ordering of the internal nodes of `t`.
pub fn for_each_history<F: FnMut(&[Word])>(t: &OrderedTree, mut f: F) {
    fn rec<F: FnMut(&[Word])>(
        t: &OrderedTree,
        avail: &mut Vec<u32>,
        hist: &mut Vec<Word>,
        f: &mut F,
    ) {
        if avail.is_empty() {
            f(hist);
            return;
        }
        for i in 0..avail.len() {
            let v = avail.swap_remove(i);
            let added: Vec<u32> = t
                .children(v)
                .iter()
                .copied()
                .filter(|&c| t.is_internal(c))
                .collect();
            avail.extend(&added);
            hist.push(t.word(v));
            rec(t, avail, hist, f);
            hist.pop();
            avail.truncate(avail.len() - added.len());
            avail.push(v);
            let last = avail.len() - 1;
            avail.swap(i, last);
        }
    }
    let mut avail = if t.is_internal(0) { vec![0] } else { vec![] };
    rec(t, &mut avail, &mut Vec::new(), &mut f);
}

/// Calls `f` with every map reachable by `k` insertions together with its
/// history; each of the `N_k` histories is visited once.
pub fn for_each_growth_history<F: FnMut(&StackMap, &[Word])>(family: Family, k: usize, mut f: F) {
    fn rec<F: FnMut(&StackMap, &[Word])>(m: &StackMap, k: usize, hist: &mut Vec<Word>, f: &mut F) {
        if k == 0 {
            f(m, hist);
            return;
        }
        let mut leaves = m.leaves.clone();
        leaves.sort_unstable();
        for leaf in leaves {
            let mut next = m.clone();
            next.grow_face(leaf).expect("leaf");
            hist.push(m.face_word(leaf));
            rec(&next, k - 1, hist, f);
            hist.pop();
        }
    }
    rec(&StackMap::initial(family), k, &mut Vec::new(), &mut f);
}
