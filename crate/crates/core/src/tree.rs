//! Full plane trees (binary and ternary), enumeration and samplers.
//!
//! A tree is stored in lexicographic (preorder) order with an explicit child
//! array per node; word views are produced on demand. Because the storage
//! order is canonical, two trees are equal exactly when their preorder
//! internal/leaf sequences agree.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::word::Word;

pub type NodeId = u32;
pub const NONE: NodeId = u32::MAX;

/// Largest internal-node count accepted by [`enumerate_trees`].
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 8;
/// Node cap for unconditioned Galton-Watson trees.
pub const DEFAULT_GW_CAP: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("arity must be 2 or 3, got {0}")]
    InvalidArity(u8),
    #[error("malformed tree encoding: {0}")]
    Malformed(String),
    #[error("node set is not a full {0}-ary tree")]
    NotAFullTree(u8),
    #[error("exhaustive enumeration limited to {bound} internal nodes, asked for {n}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("Galton-Watson tree exceeded {cap} nodes")]
    CapExceeded { cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arity {
    Binary,
    Ternary,
}

impl Arity {
    pub fn degree(self) -> usize {
        match self {
            Arity::Binary => 2,
            Arity::Ternary => 3,
        }
    }

    pub fn letters(self) -> std::ops::RangeInclusive<u8> {
        1..=self.degree() as u8
    }

    pub fn from_degree(d: u8) -> Result<Self, TreeError> {
        match d {
            2 => Ok(Arity::Binary),
            3 => Ok(Arity::Ternary),
            other => Err(TreeError::InvalidArity(other)),
        }
    }
}

impl Serialize for Arity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.degree() as u8)
    }
}

impl<'de> Deserialize<'de> for Arity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Arity::from_degree(u8::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A finite full plane tree: every node has 0 or `arity` children.
#[derive(Clone)]
pub struct OrderedTree {
    arity: Arity,
    internal: Vec<bool>,
    parent: Vec<NodeId>,
    letter: Vec<u8>,
    depth: Vec<u32>,
    child: Vec<[NodeId; 3]>,
}

impl PartialEq for OrderedTree {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.internal == other.internal
    }
}

impl Eq for OrderedTree {}

impl Hash for OrderedTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.internal.hash(state);
    }
}

impl fmt::Debug for OrderedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OrderedTree({}, {})",
            self.arity.degree(),
            self.to_paren()
        )
    }
}

impl OrderedTree {
    /// The tree reduced to its root leaf.
    pub fn leaf(arity: Arity) -> Self {
        Self::from_preorder_unchecked(arity, vec![false])
    }

    /// Builds a tree from its preorder internal/leaf flags (the Łukasiewicz
    /// code, with an internal node standing for a step of `arity - 1`).
    pub fn from_preorder(arity: Arity, flags: Vec<bool>) -> Result<Self, TreeError> {
        let d = arity.degree() as i64;
        let mut pending = 1i64;
        for (i, &f) in flags.iter().enumerate() {
            if pending == 0 {
                return Err(TreeError::Malformed(format!(
                    "trailing nodes after position {i}"
                )));
            }
            pending += if f { d - 1 } else { -1 };
        }
        if pending != 0 || flags.is_empty() {
            return Err(TreeError::Malformed("unbalanced preorder code".into()));
        }
        Ok(Self::from_preorder_unchecked(arity, flags))
    }

    fn from_preorder_unchecked(arity: Arity, flags: Vec<bool>) -> Self {
        let n = flags.len();
        let d = arity.degree() as u8;
        let mut parent = vec![NONE; n];
        let mut letter = vec![0u8; n];
        let mut depth = vec![0u32; n];
        let mut child = vec![[NONE; 3]; n];
        let mut stack: Vec<(NodeId, u8)> = Vec::new();
        for (i, &is_internal) in flags.iter().enumerate() {
            let id = i as NodeId;
            if i > 0 {
                let top = stack.last_mut().expect("validated preorder code");
                let (p, l) = *top;
                parent[i] = p;
                letter[i] = l;
                depth[i] = depth[p as usize] + 1;
                child[p as usize][(l - 1) as usize] = id;
                if l == d {
                    stack.pop();
                } else {
                    top.1 = l + 1;
                }
            }
            if is_internal {
                stack.push((id, 1));
            }
        }
        OrderedTree {
            arity,
            internal: flags,
            parent,
            letter,
            depth,
            child,
        }
    }

    /// Tree whose internal-node set is `internal` (leaves are added to make
    /// it full). The empty set gives the single-leaf tree.
    pub fn from_internal_words<'a, I>(arity: Arity, internal: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let set: BTreeSet<&Word> = internal.into_iter().collect();
        let d = arity.degree() as u8;
        for u in &set {
            if !u.is_over(d) {
                return Err(TreeError::NotAFullTree(d));
            }
            if let Some(p) = u.parent() {
                if !set.contains(&p) {
                    return Err(TreeError::NotAFullTree(d));
                }
            }
        }
        let mut flags = Vec::with_capacity(set.len() * (d as usize) + 1);
        let mut stack = vec![Word::root()];
        while let Some(u) = stack.pop() {
            let is_internal = set.contains(&u);
            flags.push(is_internal);
            if is_internal {
                for l in (1..=d).rev() {
                    stack.push(u.child(l));
                }
            }
        }
        Ok(Self::from_preorder_unchecked(arity, flags))
    }

    /// Tree from its full node set; fails unless [`is_valid_tree`] holds.
    pub fn from_words(arity: Arity, nodes: &BTreeSet<Word>) -> Result<Self, TreeError> {
        if !is_valid_tree(nodes, arity.degree() as u8) {
            return Err(TreeError::NotAFullTree(arity.degree() as u8));
        }
        let internal: Vec<&Word> = nodes
            .iter()
            .filter(|u| nodes.contains(&u.child(1)))
            .collect();
        Self::from_internal_words(arity, internal)
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.internal.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n_internal(&self) -> usize {
        self.internal.iter().filter(|&&b| b).count()
    }

    pub fn n_leaves(&self) -> usize {
        self.len() - self.n_internal()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn is_internal(&self, id: NodeId) -> bool {
        self.internal[id as usize]
    }

    pub fn preorder_flags(&self) -> &[bool] {
        &self.internal
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        let p = self.parent[id as usize];
        (p != NONE).then_some(p)
    }

    pub fn letter(&self, id: NodeId) -> u8 {
        self.letter[id as usize]
    }

    pub fn depth(&self, id: NodeId) -> u32 {
        self.depth[id as usize]
    }

    /// Children of `id` in letter order (empty for a leaf).
    pub fn children(&self, id: NodeId) -> &[NodeId] {
        if self.internal[id as usize] {
            &self.child[id as usize][..self.arity.degree()]
        } else {
            &[]
        }
    }

    pub fn child(&self, id: NodeId, letter: u8) -> Option<NodeId> {
        self.children(id)
            .get((letter as usize).wrapping_sub(1))
            .copied()
    }

    pub fn word(&self, id: NodeId) -> Word {
        let mut letters = Vec::with_capacity(self.depth[id as usize] as usize);
        let mut cur = id;
        while cur != 0 {
            letters.push(self.letter[cur as usize]);
            cur = self.parent[cur as usize];
        }
        letters.reverse();
        Word::from_letters(letters)
    }

    pub fn find(&self, word: &Word) -> Option<NodeId> {
        let mut cur = 0;
        for &l in word.letters() {
            cur = self.child(cur, l)?;
        }
        Some(cur)
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.find(word).is_some()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        0..self.len() as NodeId
    }

    /// Internal nodes in lexicographic order.
    pub fn internal_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|&i| self.internal[i as usize])
    }

    pub fn leaf_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|&i| !self.internal[i as usize])
    }

    pub fn words(&self) -> Vec<Word> {
        self.node_ids().map(|i| self.word(i)).collect()
    }

    pub fn word_set(&self) -> BTreeSet<Word> {
        self.words().into_iter().collect()
    }

    /// Number of nodes in the fringe subtree of each node.
    pub fn subtree_sizes(&self) -> Vec<u32> {
        let mut size = vec![1u32; self.len()];
        for i in (1..self.len()).rev() {
            let p = self.parent[i] as usize;
            size[p] += size[i];
        }
        size
    }

    /// Number of internal nodes in the fringe subtree of each node.
    pub fn internal_subtree_sizes(&self) -> Vec<u32> {
        let mut size: Vec<u32> = self.internal.iter().map(|&b| b as u32).collect();
        for i in (1..self.len()).rev() {
            let p = self.parent[i] as usize;
            size[p] += size[i];
        }
        size
    }

    /// Balanced-parenthesis form: a node is `(` followed by its children
    /// and `)`; letters are implicit in child position.
    pub fn to_paren(&self) -> String {
        let mut out = String::with_capacity(2 * self.len());
        let mut open: Vec<usize> = Vec::new();
        for &is_internal in &self.internal {
            out.push('(');
            if is_internal {
                open.push(self.arity.degree());
            } else {
                out.push(')');
                while let Some(left) = open.last_mut() {
                    *left -= 1;
                    if *left == 0 {
                        open.pop();
                        out.push(')');
                    } else {
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn from_paren(arity: Arity, s: &str) -> Result<Self, TreeError> {
        let bytes = s.trim().as_bytes();
        let d = arity.degree();
        let mut flags = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        let mut closed_root = false;
        for (i, &b) in bytes.iter().enumerate() {
            if closed_root {
                return Err(TreeError::Malformed(format!("text after root at byte {i}")));
            }
            match b {
                b'(' => {
                    if let Some(c) = counts.last_mut() {
                        *c += 1;
                    } else if !flags.is_empty() {
                        return Err(TreeError::Malformed("second root".into()));
                    }
                    flags.push(bytes.get(i + 1) == Some(&b'('));
                    counts.push(0);
                }
                b')' => {
                    let c = counts.pop().ok_or_else(|| {
                        TreeError::Malformed(format!("unmatched ')' at byte {i}"))
                    })?;
                    if c != 0 && c != d {
                        return Err(TreeError::NotAFullTree(d as u8));
                    }
                    closed_root = counts.is_empty();
                }
                other => {
                    return Err(TreeError::Malformed(format!(
                        "unexpected character {:?}",
                        other as char
                    )))
                }
            }
        }
        if !closed_root {
            return Err(TreeError::Malformed("unterminated tree".into()));
        }
        Self::from_preorder(arity, flags)
    }
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    arity: Arity,
    internal: Vec<Word>,
}

impl Serialize for OrderedTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TreeJson {
            arity: self.arity,
            internal: internal_nodes_lex(self),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrderedTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = TreeJson::deserialize(d)?;
        OrderedTree::from_internal_words(j.arity, &j.internal).map_err(serde::de::Error::custom)
    }
}

/// Checks the four defining properties of a full `arity`-ary plane tree:
/// root present, prefix closure, left-sibling closure, and 0 or `arity`
/// children everywhere.
pub fn is_valid_tree(nodes: &BTreeSet<Word>, arity: u8) -> bool {
    if !nodes.contains(&Word::root()) {
        return false;
    }
    for u in nodes {
        if !u.is_over(arity) {
            return false;
        }
        if let Some(p) = u.parent() {
            if !nodes.contains(&p) {
                return false;
            }
            let last = u.last().unwrap_or(1);
            if (1..last).any(|j| !nodes.contains(&p.child(j))) {
                return false;
            }
        }
        let kids = (1..=arity).filter(|&l| nodes.contains(&u.child(l))).count();
        if kids != 0 && kids != arity as usize {
            return false;
        }
    }
    true
}

/// Internal nodes sorted lexicographically; position `r` is the `r`-th
/// internal node `w(r)`.
pub fn internal_nodes_lex(t: &OrderedTree) -> Vec<Word> {
    t.internal_ids().map(|i| t.word(i)).collect()
}

/// Depths of the internal nodes taken in lexicographic order.
pub fn height_process(t: &OrderedTree) -> Vec<u32> {
    t.internal_ids().map(|i| t.depth(i)).collect()
}

/// All full trees with `n_internal` internal nodes, each exactly once.
pub fn enumerate_trees(arity: Arity, n_internal: usize) -> Result<Vec<OrderedTree>, TreeError> {
    enumerate_trees_bounded(arity, n_internal, DEFAULT_EXHAUSTIVE_BOUND)
}

pub fn enumerate_trees_bounded(
    arity: Arity,
    n_internal: usize,
    bound: usize,
) -> Result<Vec<OrderedTree>, TreeError> {
    if n_internal > bound {
        return Err(TreeError::BoundExceeded {
            n: n_internal,
            bound,
        });
    }
    let d = arity.degree() as i64;
    let n_leaves = (d as usize - 1) * n_internal + 1;
    let mut out = Vec::new();
    let mut flags = Vec::with_capacity(n_internal + n_leaves);
    fn rec(
        arity: Arity,
        d: i64,
        pending: i64,
        internal_left: usize,
        leaves_left: usize,
        flags: &mut Vec<bool>,
        out: &mut Vec<OrderedTree>,
    ) {
        if internal_left == 0 && leaves_left == 0 {
            out.push(OrderedTree::from_preorder_unchecked(arity, flags.clone()));
            return;
        }
        if internal_left > 0 {
            flags.push(true);
            rec(
                arity,
                d,
                pending + d - 1,
                internal_left - 1,
                leaves_left,
                flags,
                out,
            );
            flags.pop();
        }
        // a leaf may close the code only when nothing else remains
        if leaves_left > 0 && (pending > 1 || (internal_left == 0 && leaves_left == 1)) {
            flags.push(false);
            rec(
                arity,
                d,
                pending - 1,
                internal_left,
                leaves_left - 1,
                flags,
                out,
            );
            flags.pop();
        }
    }
    rec(arity, d, 1, n_internal, n_leaves, &mut flags, &mut out);
    Ok(out)
}

/// Exactly uniform full tree with `n_internal` internal nodes.
///
/// The multiset of Łukasiewicz steps is shuffled and rotated to start just
/// after the first minimum of its partial sums (cycle lemma).
pub fn sample_uniform_tree<R: Rng + ?Sized>(
    arity: Arity,
    n_internal: usize,
    rng: &mut R,
) -> OrderedTree {
    let d = arity.degree() as i64;
    let n_leaves = (d as usize - 1) * n_internal + 1;
    let mut steps: Vec<i8> = Vec::with_capacity(n_internal + n_leaves);
    steps.extend(std::iter::repeat_n((d - 1) as i8, n_internal));
    steps.extend(std::iter::repeat_n(-1i8, n_leaves));
    steps.shuffle(rng);
    let mut sum = 0i64;
    let mut min = i64::MAX;
    let mut argmin = 0;
    for (k, &s) in steps.iter().enumerate() {
        sum += s as i64;
        if sum < min {
            min = sum;
            argmin = k;
        }
    }
    let start = (argmin + 1) % steps.len();
    let flags: Vec<bool> = steps[start..]
        .iter()
        .chain(steps[..start].iter())
        .map(|&s| s > 0)
        .collect();
    OrderedTree::from_preorder_unchecked(arity, flags)
}

/// Critical Galton-Watson tree (offspring 0 or `arity`, mean one), grown in
/// preorder; fails once more than `cap` nodes have been generated.
pub fn sample_gw_tree<R: Rng + ?Sized>(
    arity: Arity,
    rng: &mut R,
    cap: usize,
) -> Result<OrderedTree, TreeError> {
    let d = arity.degree() as i64;
    let p = 1.0 / d as f64;
    let mut flags = Vec::new();
    let mut pending = 1i64;
    while pending > 0 {
        if flags.len() >= cap {
            return Err(TreeError::CapExceeded { cap });
        }
        let internal = rng.random_bool(p);
        flags.push(internal);
        pending += if internal { d - 1 } else { -1 };
    }
    Ok(OrderedTree::from_preorder_unchecked(arity, flags))
}

/// A tree whose internal nodes carry their insertion ranks `1..=n`,
/// increasing along every branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncreasingTree {
    tree: OrderedTree,
    labels: Vec<u32>,
}

impl IncreasingTree {
    /// Validates that `labels` (indexed by node id, 0 on leaves) is an
    /// increasing bijection onto `1..=n_internal`.
    pub fn new(tree: OrderedTree, labels: Vec<u32>) -> Result<Self, TreeError> {
        let n = tree.n_internal() as u32;
        if labels.len() != tree.len() {
            return Err(TreeError::Malformed("label vector length".into()));
        }
        let mut seen = vec![false; n as usize + 1];
        for id in tree.node_ids() {
            let l = labels[id as usize];
            if tree.is_internal(id) {
                if l == 0 || l > n || seen[l as usize] {
                    return Err(TreeError::Malformed(format!("bad label {l}")));
                }
                seen[l as usize] = true;
                if let Some(p) = tree.parent(id) {
                    if labels[p as usize] >= l {
                        return Err(TreeError::Malformed("labels not increasing".into()));
                    }
                }
            } else if l != 0 {
                return Err(TreeError::Malformed("leaf carries a label".into()));
            }
        }
        Ok(IncreasingTree { tree, labels })
    }

    pub fn tree(&self) -> &OrderedTree {
        &self.tree
    }

    pub fn into_tree(self) -> OrderedTree {
        self.tree
    }

    pub fn label(&self, id: NodeId) -> u32 {
        self.labels[id as usize]
    }

    /// Internal nodes in label order.
    pub fn history(&self) -> Vec<Word> {
        let mut v: Vec<(u32, Word)> = self
            .tree
            .internal_ids()
            .map(|i| (self.labels[i as usize], self.tree.word(i)))
            .collect();
        v.sort();
        v.into_iter().map(|(_, w)| w).collect()
    }
}

/// Arena tree grown by turning leaves into internal nodes.
#[derive(Clone, Debug)]
pub struct GrowingTree {
    arity: Arity,
    parent: Vec<NodeId>,
    letter: Vec<u8>,
    depth: Vec<u32>,
    child: Vec<[NodeId; 3]>,
    label: Vec<u32>,
    leaves: Vec<NodeId>,
    n_internal: u32,
}

impl GrowingTree {
    pub fn new(arity: Arity) -> Self {
        GrowingTree {
            arity,
            parent: vec![NONE],
            letter: vec![0],
            depth: vec![0],
            child: vec![[NONE; 3]],
            label: vec![0],
            leaves: vec![0],
            n_internal: 0,
        }
    }

    pub fn n_internal(&self) -> usize {
        self.n_internal as usize
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves.len()
    }

    pub fn depth(&self, id: NodeId) -> u32 {
        self.depth[id as usize]
    }

    /// Splits the leaf stored at position `slot` of the leaf list and returns
    /// its node id.
    pub fn grow_slot(&mut self, slot: usize) -> NodeId {
        let id = self.leaves.swap_remove(slot);
        self.n_internal += 1;
        self.label[id as usize] = self.n_internal;
        let d = self.arity.degree();
        for l in 1..=d {
            let c = self.parent.len() as NodeId;
            self.parent.push(id);
            self.letter.push(l as u8);
            self.depth.push(self.depth[id as usize] + 1);
            self.child.push([NONE; 3]);
            self.label.push(0);
            self.child[id as usize][l - 1] = c;
            self.leaves.push(c);
        }
        id
    }

    pub fn grow_uniform<R: Rng + ?Sized>(&mut self, rng: &mut R) -> NodeId {
        let slot = rng.random_range(0..self.leaves.len());
        self.grow_slot(slot)
    }

    /// Internal node ids in insertion order.
    pub fn internal_in_order(&self) -> Vec<NodeId> {
        let mut v = vec![NONE; self.n_internal as usize];
        for (id, &l) in self.label.iter().enumerate() {
            if l > 0 {
                v[(l - 1) as usize] = id as NodeId;
            }
        }
        v
    }

    pub fn into_increasing_tree(self) -> IncreasingTree {
        let mut flags = Vec::with_capacity(self.parent.len());
        let mut labels = Vec::with_capacity(self.parent.len());
        let d = self.arity.degree();
        let mut stack = vec![0 as NodeId];
        while let Some(id) = stack.pop() {
            let l = self.label[id as usize];
            flags.push(l > 0);
            labels.push(l);
            if l > 0 {
                for k in (0..d).rev() {
                    stack.push(self.child[id as usize][k]);
                }
            }
        }
        IncreasingTree {
            tree: OrderedTree::from_preorder_unchecked(self.arity, flags),
            labels,
        }
    }
}

/// Increasing tree with `size` internal nodes: starting from one leaf,
/// `size` times a uniformly chosen leaf becomes an internal node.
pub fn sample_increasing_tree<R: Rng + ?Sized>(
    arity: Arity,
    size: usize,
    rng: &mut R,
) -> IncreasingTree {
    let mut g = GrowingTree::new(arity);
    for _ in 0..size {
        g.grow_uniform(rng);
    }
    g.into_increasing_tree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::word::w;
    use std::collections::HashMap;

    fn set(words: &[&str]) -> BTreeSet<Word> {
        words.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn validity_examples() {
        assert!(is_valid_tree(&set(&[""]), 3));
        assert!(is_valid_tree(&set(&["", "1", "2", "3"]), 3));
        assert!(!is_valid_tree(&set(&["", "1", "2"]), 3));
        assert!(!is_valid_tree(&set(&["1"]), 3));
        assert!(!is_valid_tree(&set(&["", "2", "3"]), 3));
        assert!(!is_valid_tree(&set(&["", "1", "2", "3", "4"]), 3));
        assert!(is_valid_tree(&set(&["", "1", "2"]), 2));
    }

    #[test]
    fn lex_internal_nodes_and_height_process() {
        let t = OrderedTree::from_internal_words(Arity::Ternary, &[w("")]).unwrap();
        assert_eq!(internal_nodes_lex(&t), vec![w("")]);
        assert_eq!(height_process(&t), vec![0]);
        let t = OrderedTree::from_internal_words(Arity::Ternary, &[w("2"), w("")]).unwrap();
        assert_eq!(internal_nodes_lex(&t), vec![w(""), w("2")]);
        let t =
            OrderedTree::from_internal_words(Arity::Ternary, &[w("13"), w(""), w("1")]).unwrap();
        assert_eq!(internal_nodes_lex(&t), vec![w(""), w("1"), w("13")]);
        let t = OrderedTree::from_internal_words(Arity::Ternary, &[w(""), w("1"), w("2")]).unwrap();
        assert_eq!(height_process(&t), vec![0, 1, 1]);
        let t =
            OrderedTree::from_internal_words(Arity::Ternary, &[w(""), w("3"), w("31")]).unwrap();
        assert_eq!(height_process(&t), vec![0, 1, 2]);
    }

    #[test]
    fn non_prefix_closed_internal_set_rejected() {
        assert!(OrderedTree::from_internal_words(Arity::Ternary, &[w(""), w("12")]).is_err());
        assert!(OrderedTree::from_internal_words(Arity::Binary, &[w(""), w("3")]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trees(Arity::Ternary, 0).unwrap().len(), 1);
        let two = enumerate_trees(Arity::Ternary, 2).unwrap();
        assert_eq!(two.len(), 3);
        let mut sets: Vec<Vec<Word>> = two.iter().map(internal_nodes_lex).collect();
        sets.sort();
        assert_eq!(
            sets,
            vec![
                vec![w(""), w("1")],
                vec![w(""), w("2")],
                vec![w(""), w("3")]
            ]
        );
        assert_eq!(enumerate_trees(Arity::Binary, 3).unwrap().len(), 5);
        assert_eq!(
            enumerate_trees(Arity::Ternary, 9),
            Err(TreeError::BoundExceeded { n: 9, bound: 8 })
        );
    }

    #[test]
    fn enumerated_trees_are_valid_and_distinct() {
        for arity in [Arity::Binary, Arity::Ternary] {
            for n in 0..=5 {
                let all = enumerate_trees(arity, n).unwrap();
                let distinct: BTreeSet<String> = all.iter().map(|t| t.to_paren()).collect();
                assert_eq!(distinct.len(), all.len());
                for t in &all {
                    assert!(is_valid_tree(&t.word_set(), arity.degree() as u8));
                    assert_eq!(t.n_internal(), n);
                    assert_eq!(t.n_leaves(), (arity.degree() - 1) * n + 1);
                }
            }
        }
    }

    #[test]
    fn paren_and_json_forms() {
        let t = OrderedTree::from_internal_words(Arity::Ternary, &[w(""), w("2")]).unwrap();
        assert_eq!(t.to_paren(), "(()(()()())())");
        assert_eq!(
            OrderedTree::from_paren(Arity::Ternary, &t.to_paren()).unwrap(),
            t
        );
        assert_eq!(OrderedTree::leaf(Arity::Binary).to_paren(), "()");
        assert!(OrderedTree::from_paren(Arity::Ternary, "(()())").is_err());
        assert!(OrderedTree::from_paren(Arity::Ternary, "(()()())()").is_err());
        let js = serde_json::to_string(&t).unwrap();
        assert_eq!(js, r#"{"arity":3,"internal":["","2"]}"#);
        let back: OrderedTree = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn word_lookup_round_trip() {
        let mut rng = stream(3);
        let t = sample_uniform_tree(Arity::Ternary, 40, &mut rng);
        for id in t.node_ids() {
            assert_eq!(t.find(&t.word(id)), Some(id));
        }
        assert_eq!(
            OrderedTree::from_words(Arity::Ternary, &t.word_set()).unwrap(),
            t
        );
    }

    #[test]
    fn uniform_sampler_single_outcome() {
        let mut rng = stream(1);
        for _ in 0..20 {
            let t = sample_uniform_tree(Arity::Ternary, 1, &mut rng);
            assert_eq!(t.word_set(), set(&["", "1", "2", "3"]));
        }
    }

    #[test]
    fn uniform_sampler_hits_each_small_tree_evenly() {
        // 3 ternary trees of size 2 and 5 binary trees of size 3; a 3-sigma
        // binomial window around the uniform frequency
        for (arity, n, k) in [(Arity::Ternary, 2, 3usize), (Arity::Binary, 3, 5)] {
            let reps = 30_000usize;
            let mut rng = stream(99);
            let mut counts: HashMap<OrderedTree, usize> = HashMap::new();
            for _ in 0..reps {
                *counts
                    .entry(sample_uniform_tree(arity, n, &mut rng))
                    .or_default() += 1;
            }
            assert_eq!(counts.len(), k);
            let p = 1.0 / k as f64;
            let sigma = (reps as f64 * p * (1.0 - p)).sqrt();
            for (_, c) in counts {
                assert!((c as f64 - reps as f64 * p).abs() < 3.0 * sigma);
            }
        }
    }

    #[test]
    fn increasing_tree_small_cases() {
        let mut rng = stream(5);
        let t = sample_increasing_tree(Arity::Ternary, 1, &mut rng);
        assert_eq!(internal_nodes_lex(t.tree()), vec![w("")]);
        assert_eq!(t.label(0), 1);
        let reps = 30_000usize;
        let mut counts: HashMap<Word, usize> = HashMap::new();
        for _ in 0..reps {
            let t = sample_increasing_tree(Arity::Ternary, 2, &mut rng);
            let h = t.history();
            assert_eq!(h[0], Word::root());
            *counts.entry(h[1].clone()).or_default() += 1;
        }
        let sigma = (reps as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for l in ["1", "2", "3"] {
            let c = counts[&w(l)] as f64;
            assert!((c - reps as f64 / 3.0).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn increasing_labels_are_validated() {
        let t = OrderedTree::from_internal_words(Arity::Binary, &[w(""), w("1")]).unwrap();
        // preorder: "", "1", "11", "12", "2"
        assert!(IncreasingTree::new(t.clone(), vec![1, 2, 0, 0, 0]).is_ok());
        assert!(IncreasingTree::new(t.clone(), vec![2, 1, 0, 0, 0]).is_err());
        assert!(IncreasingTree::new(t, vec![1, 2, 0, 0, 3]).is_err());
    }

    #[test]
    fn gw_single_leaf_probability() {
        for (arity, p) in [(Arity::Ternary, 2.0 / 3.0), (Arity::Binary, 0.5)] {
            let reps = 40_000usize;
            let mut rng = stream(17);
            let mut leaves = 0usize;
            for _ in 0..reps {
                match sample_gw_tree(arity, &mut rng, 10_000) {
                    Ok(t) if t.len() == 1 => leaves += 1,
                    _ => {}
                }
            }
            let sigma = (reps as f64 * p * (1.0 - p)).sqrt();
            assert!((leaves as f64 - reps as f64 * p).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn gw_cap_is_enforced() {
        let mut rng = stream(0);
        let mut hit = false;
        for _ in 0..2000 {
            if let Err(e) = sample_gw_tree(Arity::Ternary, &mut rng, 4) {
                assert_eq!(e, TreeError::CapExceeded { cap: 4 });
                hit = true;
            }
        }
        assert!(hit);
    }
}
