//! Balls around the root, the local distance, and finite pieces of the
//! local limit.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use thiserror::Error;

use crate::passage::{
    quad_root_distance, quad_type, tri_root_distance, tri_type, QuadFaceType, TriFaceType,
};
use crate::stackmap::{map_from_history, Family, MapError, StackMap};
use crate::tree::{Arity, OrderedTree, TreeError};
use crate::word::Word;

#[derive(Debug, Error, PartialEq)]
pub enum LocalError {
    #[error("cannot compare a {0} with a {1}")]
    KindMismatch(String, String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Rooted objects whose balls can be compared.
pub trait RootedBalls {
    fn kind(&self) -> String;
    /// Canonical code of the ball of radius `r` around the root; equal codes
    /// mean isomorphic rooted balls.
    fn ball_code(&self, r: u32) -> Vec<u32>;
    /// Smallest radius whose ball is the whole object.
    fn radius(&self) -> u32;
}

const SEP: u32 = u32::MAX;

impl RootedBalls for StackMap {
    fn kind(&self) -> String {
        format!("{} map", self.family().name())
    }

    /// Breadth-first relabeling from the root edge. Each vertex lists its
    /// neighbors inside the ball in rotation order, starting from the edge
    /// it was discovered through.
    fn ball_code(&self, r: u32) -> Vec<u32> {
        let (root, first) = self.root_edge();
        let n = self.n_vertices();
        let mut dist = vec![u32::MAX; n];
        let mut label = vec![u32::MAX; n];
        let mut from = vec![first; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        dist[root as usize] = 0;
        label[root as usize] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            if dist[v as usize] == r {
                continue;
            }
            let nb = self.neighbors(v);
            let start = nb.iter().position(|&u| u == from[v as usize]).unwrap_or(0);
            for i in 0..nb.len() {
                let u = nb[(start + i) % nb.len()];
                if dist[u as usize] == u32::MAX {
                    dist[u as usize] = dist[v as usize] + 1;
                    label[u as usize] = (order.len() + queue.len()) as u32;
                    from[u as usize] = v;
                    queue.push_back(u);
                }
            }
        }
        let mut code = Vec::new();
        for &v in &order {
            let nb = self.neighbors(v);
            let start = nb.iter().position(|&u| u == from[v as usize]).unwrap_or(0);
            for i in 0..nb.len() {
                let u = nb[(start + i) % nb.len()];
                if dist[u as usize] <= r {
                    code.push(label[u as usize]);
                }
            }
            code.push(SEP);
        }
        code
    }

    fn radius(&self) -> u32 {
        crate::statistics::radius(self)
    }
}

impl RootedBalls for OrderedTree {
    fn kind(&self) -> String {
        format!("{}-ary tree", self.arity().degree())
    }

    /// Preorder internal flags of the nodes at depth `< r`; nodes at depth
    /// `r` are the ball's frontier.
    fn ball_code(&self, r: u32) -> Vec<u32> {
        let mut code = Vec::new();
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            let open = self.is_internal(id) && self.depth(id) < r;
            code.push(open as u32);
            if open {
                stack.extend(self.children(id).iter().rev());
            }
        }
        code
    }

    fn radius(&self) -> u32 {
        self.node_ids().map(|id| self.depth(id)).max().unwrap_or(0)
    }
}

/// `1/(1+k)` with `k` the largest radius at which the balls agree, or 0 if
/// they agree at every radius.
pub fn local_distance<T: RootedBalls>(a: &T, b: &T) -> Result<f64, LocalError> {
    if a.kind() != b.kind() {
        return Err(LocalError::KindMismatch(a.kind(), b.kind()));
    }
    let last = a.radius().max(b.radius()) + 1;
    for r in 0..=last {
        if a.ball_code(r) != b.ball_code(r) {
            return Ok(if r == 0 { 1.0 } else { 1.0 / r as f64 });
        }
    }
    Ok(0.0)
}

/// Root distance of the vertex inserted in face `u`.
pub fn node_distance(arity: Arity, u: &Word) -> u32 {
    match arity {
        Arity::Ternary => tri_root_distance(u),
        Arity::Binary => quad_root_distance(u),
    }
}

/// Lower bound on the root distance of every vertex inserted inside face
/// `u`; nondecreasing along prefixes.
pub fn face_floor(arity: Arity, u: &Word) -> u32 {
    1 + match arity {
        Arity::Ternary => TriFaceType::min(&tri_type(u)),
        Arity::Binary => QuadFaceType::min(&quad_type(u)),
    }
}

/// `{u ∈ t : Γ(u) ≤ r}`; root distance of the inserted vertex for binary
/// trees.
pub fn gamma_ball(t: &OrderedTree, r: u32) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut stack = vec![t.root()];
    while let Some(id) = stack.pop() {
        let u = t.word(id);
        if face_floor(t.arity(), &u) > r {
            continue;
        }
        if node_distance(t.arity(), &u) <= r {
            out.insert(u);
        }
        stack.extend_from_slice(t.children(id));
    }
    out
}

/// Finite piece of the local-limit tree that determines its Γ-ball of
/// radius `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpineTree {
    pub tree: OrderedTree,
    /// Spine prefix up to the first face that cannot meet the ball.
    pub spine: Word,
    pub radius: u32,
}

/// Spine with i.i.d. uniform letters and critical GW trees grafted on its
/// siblings. Only nodes whose face can still hold a vertex at distance
/// `≤ r` are explored; the others are kept as leaves.
pub fn sample_spine_tree<R: Rng + ?Sized>(
    arity: Arity,
    r: u32,
    rng: &mut R,
    cap: usize,
) -> Result<SpineTree, TreeError> {
    let d = arity.degree() as u8;
    let mut internal: Vec<Word> = Vec::new();
    let mut spine = Word::root();
    let mut grafts: Vec<Word> = Vec::new();
    while face_floor(arity, &spine) <= r {
        internal.push(spine.clone());
        let next: u8 = rng.random_range(1..=d);
        for l in 1..=d {
            if l != next {
                grafts.push(spine.child(l));
            }
        }
        spine.push(next);
    }
    // critical offspring law: all children with probability 1/d
    let mut stack = grafts;
    while let Some(u) = stack.pop() {
        if face_floor(arity, &u) > r {
            continue;
        }
        if rng.random_range(0..d) == 0 {
            for l in (1..=d).rev() {
                stack.push(u.child(l));
            }
            internal.push(u);
            if internal.len() * d as usize + 1 > cap {
                return Err(TreeError::CapExceeded { cap });
            }
        }
    }
    let tree = OrderedTree::from_internal_words(arity, &internal)?;
    Ok(SpineTree {
        tree,
        spine,
        radius: r,
    })
}

/// Map of the tree whose internal nodes are the internal nodes of `t` in
/// the ball of radius `r`, closed under prefixes. Vertices are inserted by
/// increasing entry radius, then in lexicographic order, so the map for
/// `r` is a sub-history of the map for `r + 1`.
pub fn infinite_map_ball(t: &OrderedTree, r: u32) -> Result<StackMap, LocalError> {
    let arity = t.arity();
    let family = match arity {
        Arity::Ternary => Family::Triangulation,
        Arity::Binary => Family::Quadrangulation,
    };
    let mut keyed: Vec<(u32, Word)> = Vec::new();
    let mut stack = vec![(t.root(), 0u32)];
    while let Some((id, above)) = stack.pop() {
        if !t.is_internal(id) {
            continue;
        }
        let u = t.word(id);
        if face_floor(arity, &u) > r {
            continue;
        }
        let entry = above.max(node_distance(arity, &u));
        if entry <= r {
            keyed.push((entry, u));
        }
        for &c in t.children(id) {
            stack.push((c, entry));
        }
    }
    keyed.sort();
    let history: Vec<Word> = keyed.into_iter().map(|(_, u)| u).collect();
    Ok(map_from_history(family, &history)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::passage::gamma;
    use crate::rng::stream;
    use crate::tree::{sample_uniform_tree, DEFAULT_GW_CAP};
    use crate::word::w;

    fn full_depth_two() -> OrderedTree {
        let words = ["", "1", "2", "3"].map(w);
        OrderedTree::from_internal_words(Arity::Ternary, &words).unwrap()
    }

    #[test]
    fn local_distance_fixtures() {
        let theta = StackMap::initial(Family::Triangulation);
        let m1 = theta.grow(&w("")).unwrap();
        assert_eq!(local_distance(&theta, &theta).unwrap(), 0.0);
        assert_eq!(local_distance(&theta, &m1).unwrap(), 1.0);
        let m2 = m1.grow(&w("1")).unwrap();
        assert_eq!(local_distance(&m1, &m2).unwrap(), 0.5);
        let q = StackMap::initial(Family::Quadrangulation);
        assert!(matches!(
            local_distance(&theta, &q),
            Err(LocalError::KindMismatch(..))
        ));
    }

    #[test]
    fn ball_code_ignores_history() {
        let a = map_from_history(Family::Triangulation, &[w(""), w("1"), w("2"), w("13")]).unwrap();
        let b = map_from_history(Family::Triangulation, &[w(""), w("2"), w("1"), w("13")]).unwrap();
        for r in 0..4 {
            assert_eq!(a.ball_code(r), b.ball_code(r));
        }
        assert_eq!(local_distance(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn ultrametric_on_fixtures() {
        let mut rng = stream(2);
        let base = crate::stackmap::sample_growth_map(Family::Triangulation, 6, &mut rng);
        let mut maps = vec![base.clone()];
        for _ in 0..5 {
            let mut m = base.clone();
            for _ in 0..3 {
                m.grow_uniform(&mut rng);
            }
            maps.push(m);
        }
        for a in &maps {
            for b in &maps {
                for c in &maps {
                    let (ab, bc, ac) = (
                        local_distance(a, b).unwrap(),
                        local_distance(b, c).unwrap(),
                        local_distance(a, c).unwrap(),
                    );
                    assert!(ac <= ab.max(bc));
                }
            }
        }
    }

    #[test]
    fn tree_local_distance() {
        let a = full_depth_two();
        let b = OrderedTree::from_internal_words(Arity::Ternary, &[w(""), w("1")]).unwrap();
        assert_eq!(local_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(local_distance(&a, &b).unwrap(), 0.5);
    }

    #[test]
    fn gamma_ball_examples() {
        let t = full_depth_two();
        assert!(gamma_ball(&t, 0).is_empty());
        let want: BTreeSet<Word> = ["", "2", "3", "22", "23", "32", "33"]
            .into_iter()
            .map(w)
            .collect();
        assert_eq!(gamma_ball(&t, 1), want);
        for r in 0..4 {
            assert!(gamma_ball(&t, r).is_subset(&gamma_ball(&t, r + 1)));
        }
        let big = sample_uniform_tree(Arity::Ternary, 400, &mut stream(3));
        for r in 0..6 {
            let all: BTreeSet<Word> = big.words().into_iter().filter(|u| gamma(u) <= r).collect();
            assert_eq!(gamma_ball(&big, r), all);
        }
    }

    #[test]
    fn face_floor_is_monotone_and_bounds_descendants() {
        let t = sample_uniform_tree(Arity::Binary, 300, &mut stream(4));
        for u in t.words() {
            if let Some(p) = u.parent() {
                assert!(face_floor(Arity::Binary, &p) <= face_floor(Arity::Binary, &u));
            }
            for v in t.words().iter().filter(|v| u.is_prefix_of(v)) {
                assert!(node_distance(Arity::Binary, v) >= face_floor(Arity::Binary, &u));
            }
        }
    }

    #[test]
    fn spine_tree_is_finite_and_deterministic() {
        for arity in [Arity::Ternary, Arity::Binary] {
            for r in 1..=4 {
                let a = sample_spine_tree(arity, r, &mut stream(r as u64), DEFAULT_GW_CAP).unwrap();
                let b = sample_spine_tree(arity, r, &mut stream(r as u64), DEFAULT_GW_CAP).unwrap();
                assert_eq!(a, b);
                assert!(a.tree.contains(&a.spine));
                assert!(face_floor(arity, &a.spine) > r);
                assert!(!gamma_ball(&a.tree, r).is_empty());
            }
        }
    }

    #[test]
    fn infinite_ball_nests_and_exhausts() {
        let t = sample_uniform_tree(Arity::Ternary, 60, &mut stream(6));
        let full = crate::stackmap::map_from_tree(&t, Family::Triangulation).unwrap();
        let mut prev: Option<StackMap> = None;
        for r in 1..40 {
            let m = infinite_map_ball(&t, r).unwrap();
            if let Some(p) = &prev {
                for v in 0..p.n_vertices() as u32 {
                    assert_eq!(p.vertex_word(v), m.vertex_word(v));
                }
                let edges = m.edges();
                for e in p.edges() {
                    assert!(edges.binary_search(&e).is_ok());
                }
            }
            prev = Some(m);
        }
        let last = prev.unwrap();
        assert_eq!(last.tree(), full.tree());
        assert_eq!(last.edges().len(), full.edges().len());
    }

    #[test]
    fn infinite_ball_stabilizes() {
        let a = OrderedTree::from_internal_words(Arity::Ternary, &[w(""), w("2"), w("1"), w("11")])
            .unwrap();
        let b = OrderedTree::from_internal_words(
            Arity::Ternary,
            &[w(""), w("2"), w("1"), w("12"), w("13")],
        )
        .unwrap();
        assert_eq!(gamma_ball(&a, 1), gamma_ball(&b, 1));
        let (ma, mb) = (
            infinite_map_ball(&a, 1).unwrap(),
            infinite_map_ball(&b, 1).unwrap(),
        );
        assert_eq!(ma.edges(), mb.edges());
        assert_eq!(ma.history(), mb.history());
    }
}
