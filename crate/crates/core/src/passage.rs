//! Passage functions on tree words and the face-type automata.
//!
//! For a triangulation, the node `u` of the ternary tree stands for the
//! vertex inserted in face `u`; its distance to the root vertex is `Γ(u)`.
//! For a quadrangulation the same role is played by the type automaton
//! (`quad_root_distance`); the block statistic `Γ′` is kept separately as
//! [`gamma_prime_literal`] for comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::word::{lca, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PassageError {
    #[error(
        "{0} and {1} are prefix-related; the pair passage function needs distinct first letters"
    )]
    PrefixRelated(Word, Word),
    #[error("invalid face type {0:?}")]
    InvalidType(Vec<u32>),
}

/// Distances of a triangle's corners to the root vertex.
///
/// Stored as the minimum plus 0/1 offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriFaceType {
    base: u32,
    off: [u8; 3],
}

impl TriFaceType {
    pub const INITIAL: TriFaceType = TriFaceType {
        base: 0,
        off: [0, 1, 1],
    };

    pub fn new(i: u32, j: u32, k: u32) -> Result<Self, PassageError> {
        let base = i.min(j).min(k);
        let off = [i - base, j - base, k - base];
        if off.iter().any(|&o| o > 1) {
            return Err(PassageError::InvalidType(vec![i, j, k]));
        }
        Ok(TriFaceType {
            base,
            off: off.map(|o| o as u8),
        })
    }

    pub fn values(&self) -> [u32; 3] {
        self.off.map(|o| self.base + o as u32)
    }

    pub fn min(&self) -> u32 {
        self.base
    }

    /// Offsets above the minimum (the automaton state).
    pub fn class(&self) -> [u8; 3] {
        self.off
    }

    /// Type of child face `letter`: corner `letter` becomes the new vertex,
    /// at distance `1 + min`.
    pub fn child(&self, letter: u8) -> Self {
        assert!(
            (1..=3).contains(&letter),
            "ternary letter expected, got {letter}"
        );
        let mut off = self.off;
        off[(letter - 1) as usize] = 1;
        if off == [1, 1, 1] {
            TriFaceType {
                base: self.base + 1,
                off: [0, 0, 0],
            }
        } else {
            TriFaceType {
                base: self.base,
                off,
            }
        }
    }

    /// Distance to the root vertex of the vertex inserted in this face.
    pub fn apex_distance(&self) -> u32 {
        self.base + 1
    }
}

impl fmt::Display for TriFaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k] = self.values();
        write!(f, "({i},{j},{k})")
    }
}

impl Serialize for TriFaceType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.values().serialize(s)
    }
}

/// Distances of a quadrangle's corners to the root vertex, in tuple order.
/// The active diagonal joins positions 2 and 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadFaceType {
    base: u32,
    off: [u8; 4],
}

impl QuadFaceType {
    pub const INITIAL: QuadFaceType = QuadFaceType {
        base: 0,
        off: [1, 2, 1, 0],
    };

    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Result<Self, PassageError> {
        let v = [a, b, c, d];
        let base = *v.iter().min().expect("four values");
        let parity_ok = a % 2 == c % 2 && b % 2 == d % 2 && a % 2 != b % 2;
        let off = v.map(|x| x - base);
        if !parity_ok || off.iter().any(|&o| o > 2) {
            return Err(PassageError::InvalidType(v.to_vec()));
        }
        Ok(QuadFaceType {
            base,
            off: off.map(|o| o as u8),
        })
    }

    pub fn values(&self) -> [u32; 4] {
        self.off.map(|o| self.base + o as u32)
    }

    pub fn min(&self) -> u32 {
        self.base
    }

    pub fn class(&self) -> [u8; 4] {
        self.off
    }

    /// `(b, 1+b∧d, d, a)` for letter 1 and `(b, 1+b∧d, d, c)` for letter 2.
    pub fn child(&self, letter: u8) -> Self {
        let [a, b, c, d] = self.off;
        let x = 1 + b.min(d);
        let last = match letter {
            1 => a,
            2 => c,
            other => panic!("binary letter expected, got {other}"),
        };
        let off = [b, x, d, last];
        let m = *off.iter().min().expect("four values");
        QuadFaceType {
            base: self.base + m as u32,
            off: off.map(|o| o - m),
        }
    }

    pub fn apex_distance(&self) -> u32 {
        self.base + 1 + self.off[1].min(self.off[3]) as u32
    }
}

impl fmt::Display for QuadFaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.values();
        write!(f, "({a},{b},{c},{d})")
    }
}

impl Serialize for QuadFaceType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.values().serialize(s)
    }
}

/// Block boundaries `[τ1 = 0, τ2, ...]` of a ternary word, 1-based.
pub fn tau_decomposition(word: &Word) -> Vec<usize> {
    tau_of_letters(word.letters().iter().copied())
}

pub fn tau_of_letters<I: IntoIterator<Item = u8>>(letters: I) -> Vec<usize> {
    let mut taus = vec![0];
    let mut seen = 0u8;
    let mut started = false;
    for (i, l) in letters.into_iter().enumerate() {
        if !started {
            if l == 1 {
                started = true;
                taus.push(i + 1);
            }
            continue;
        }
        seen |= 1 << (l - 1);
        if seen == 0b111 {
            taus.push(i + 1);
            seen = 0;
        }
    }
    taus
}

/// Streaming passage-function counter.
#[derive(Clone, Copy, Debug, Default)]
pub struct GammaCounter {
    count: u64,
    seen: u8,
    started: bool,
}

impl GammaCounter {
    pub fn new() -> Self {
        GammaCounter {
            count: 1,
            seen: 0,
            started: false,
        }
    }

    pub fn push(&mut self, letter: u8) {
        if !self.started {
            if letter == 1 {
                self.started = true;
                self.count += 1;
            }
            return;
        }
        self.seen |= 1 << (letter - 1);
        if self.seen == 0b111 {
            self.count += 1;
            self.seen = 0;
        }
    }

    pub fn value(&self) -> u64 {
        self.count
    }
}

pub fn gamma(word: &Word) -> u32 {
    gamma_of_letters(word.letters().iter().copied()) as u32
}

pub fn gamma_of_letters<I: IntoIterator<Item = u8>>(letters: I) -> u64 {
    let mut g = GammaCounter::new();
    for l in letters {
        g.push(l);
    }
    g.value()
}

fn split_pair<'a>(u: &'a Word, v: &'a Word) -> Result<(&'a [u8], &'a [u8]), PassageError> {
    if u.is_prefix_of(v) || v.is_prefix_of(u) {
        return Err(PassageError::PrefixRelated(u.clone(), v.clone()));
    }
    let w = lca(u, v);
    Ok((
        u.strip_prefix(&w).expect("lca is a prefix"),
        v.strip_prefix(&w).expect("lca is a prefix"),
    ))
}

/// `Γ(a) + Γ(b)` for the suffixes `a`, `b` of `u`, `v` past `u ∧ v`.
pub fn gamma_pair(u: &Word, v: &Word) -> Result<u32, PassageError> {
    let (a, b) = split_pair(u, v)?;
    Ok((gamma_of_letters(a.iter().copied()) + gamma_of_letters(b.iter().copied())) as u32)
}

pub fn tri_type(word: &Word) -> TriFaceType {
    word.letters()
        .iter()
        .fold(TriFaceType::INITIAL, |t, &l| t.child(l))
}

pub fn tri_root_distance(word: &Word) -> u32 {
    tri_type(word).apex_distance()
}

pub fn quad_type(word: &Word) -> QuadFaceType {
    word.letters()
        .iter()
        .fold(QuadFaceType::INITIAL, |t, &l| t.child(l))
}

pub fn quad_root_distance(word: &Word) -> u32 {
    quad_type(word).apex_distance()
}

pub fn quad_root_distance_of_letters<I: IntoIterator<Item = u8>>(letters: I) -> u64 {
    let t = letters
        .into_iter()
        .fold(QuadFaceType::INITIAL, |t, l| t.child(l));
    t.apex_distance() as u64
}

/// Streaming parser for blocks of `{12,21}*·{11,22}·{1,2}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LiteralBlocks {
    blocks: u64,
    pending: Option<u8>,
    need_final: bool,
}

impl LiteralBlocks {
    pub fn push(&mut self, letter: u8) {
        if self.need_final {
            self.need_final = false;
            self.blocks += 1;
            return;
        }
        match self.pending.take() {
            None => self.pending = Some(letter),
            Some(first) if first == letter => self.need_final = true,
            Some(_) => {}
        }
    }

    pub fn complete_blocks(&self) -> u64 {
        self.blocks
    }

    /// 0 when the unfinished remainder has even length and does not end in
    /// 11 or 22, else 1.
    pub fn correction(&self) -> u64 {
        (self.pending.is_some() || self.need_final) as u64
    }

    pub fn value(&self) -> u64 {
        1 + self.blocks + self.correction()
    }
}

pub fn gamma_prime_literal(word: &Word) -> u32 {
    gamma_prime_literal_of_letters(word.letters().iter().copied()) as u32
}

pub fn gamma_prime_literal_of_letters<I: IntoIterator<Item = u8>>(letters: I) -> u64 {
    let mut p = LiteralBlocks::default();
    for l in letters {
        p.push(l);
    }
    p.value()
}

/// Which word statistic stands for quadrangulation root distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum QuadDistance {
    #[default]
    Automaton,
    Literal,
}

pub fn quad_distance(word: &Word, mode: QuadDistance) -> u32 {
    match mode {
        QuadDistance::Automaton => quad_root_distance(word),
        QuadDistance::Literal => gamma_prime_literal(word),
    }
}

pub fn gamma_prime_pair(u: &Word, v: &Word, mode: QuadDistance) -> Result<u32, PassageError> {
    let (a, b) = split_pair(u, v)?;
    Ok(quad_distance(&Word::from(a), mode) + quad_distance(&Word::from(b), mode))
}

/// Almost-sure growth rate of the root distance along i.i.d. uniform
/// letters, computed exactly from the stationary law of the type classes.
pub fn tri_distance_rate() -> BigRational {
    chain_rate(
        TriFaceType::INITIAL,
        3,
        |t, l| t.child(l),
        |t| t.class().to_vec(),
        |t| t.min(),
    )
}

pub fn quad_distance_rate() -> BigRational {
    chain_rate(
        QuadFaceType::INITIAL,
        2,
        |t, l| t.child(l),
        |t| t.class().to_vec(),
        |t| t.min(),
    )
}

fn chain_rate<T: Copy>(
    init: T,
    d: u8,
    step: impl Fn(&T, u8) -> T,
    class: impl Fn(&T) -> Vec<u8>,
    base: impl Fn(&T) -> u32,
) -> BigRational {
    // representatives with base reset to the initial level
    let mut reps: BTreeMap<Vec<u8>, T> = BTreeMap::new();
    let mut trans: BTreeMap<Vec<u8>, Vec<(Vec<u8>, u32)>> = BTreeMap::new();
    let mut todo = vec![init];
    reps.insert(class(&init), init);
    while let Some(t) = todo.pop() {
        let c = class(&t);
        if trans.contains_key(&c) {
            continue;
        }
        let mut out = Vec::new();
        for l in 1..=d {
            let s = step(&t, l);
            let sc = class(&s);
            out.push((sc.clone(), base(&s) - base(&t)));
            if let std::collections::btree_map::Entry::Vacant(e) = reps.entry(sc) {
                e.insert(s);
                todo.push(s);
            }
        }
        trans.insert(c, out);
    }
    let reach = |start: &Vec<u8>| -> BTreeSet<Vec<u8>> {
        let mut seen = BTreeSet::from([start.clone()]);
        let mut stack = vec![start.clone()];
        while let Some(c) = stack.pop() {
            for (n, _) in &trans[&c] {
                if seen.insert(n.clone()) {
                    stack.push(n.clone());
                }
            }
        }
        seen
    };
    let closed = trans
        .keys()
        .map(reach)
        .min_by_key(|s| s.len())
        .expect("nonempty chain");
    let states: Vec<Vec<u8>> = closed.into_iter().collect();
    let idx: BTreeMap<&Vec<u8>, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let n = states.len();
    let p = BigRational::new(BigInt::one(), BigInt::from(d));
    // rows: equations (P^T - I) pi = 0, last row replaced by sum(pi) = 1
    let mut m = vec![vec![BigRational::zero(); n + 1]; n];
    for (i, s) in states.iter().enumerate() {
        for (t, _) in &trans[s] {
            let j = idx[t];
            m[j][i] += p.clone();
        }
        m[i][i] -= BigRational::one();
    }
    for v in m[n - 1].iter_mut() {
        *v = BigRational::one();
    }
    let pi = solve(m);
    let mut rate = BigRational::zero();
    for (i, s) in states.iter().enumerate() {
        for (_, inc) in &trans[s] {
            rate += pi[i].clone() * p.clone() * BigRational::from_integer(BigInt::from(*inc));
        }
    }
    rate
}

/// Gauss-Jordan elimination on an augmented `n × (n+1)` system.
fn solve(mut m: Vec<Vec<BigRational>>) -> Vec<BigRational> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("nonsingular stationary system");
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= inv.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(pivot_row) {
                    *v -= f.clone() * pv;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn all_words(d: u8, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::root()];
        let mut frontier = vec![Word::root()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for u in &frontier {
                for l in 1..=d {
                    next.push(u.child(l));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_decomposition(&w("22123122131")), vec![0, 3, 6, 10]);
        assert_eq!(tau_decomposition(&w("")), vec![0]);
        assert_eq!(tau_decomposition(&w("222")), vec![0]);
        assert_eq!(gamma(&w("22123122131")), 4);
        assert_eq!(gamma(&w("")), 1);
        assert_eq!(gamma(&w("1")), 2);
        assert_eq!(gamma(&w("2")), 1);
    }

    #[test]
    fn pair_examples() {
        assert_eq!(gamma_pair(&w("1"), &w("2")), Ok(3));
        assert_eq!(gamma_pair(&w("21"), &w("23")), Ok(3));
        assert!(matches!(
            gamma_pair(&w("2"), &w("21")),
            Err(PassageError::PrefixRelated(_, _))
        ));
        assert!(gamma_pair(&w("2"), &w("2")).is_err());
    }

    #[test]
    fn type_examples() {
        assert_eq!(tri_type(&w("")).values(), [0, 1, 1]);
        assert_eq!(tri_type(&w("1")).values(), [1, 1, 1]);
        assert_eq!(tri_type(&w("22")).values(), [0, 1, 1]);
        assert_eq!(tri_root_distance(&w("")), 1);
        assert_eq!(tri_root_distance(&w("1")), 2);
        assert_eq!(tri_root_distance(&w("23")), 1);
        assert_eq!(quad_type(&w("")).values(), [1, 2, 1, 0]);
        assert_eq!(quad_type(&w("1")).values(), [2, 1, 0, 1]);
        assert_eq!(quad_type(&w("11")).values(), [1, 2, 1, 2]);
        assert_eq!(quad_root_distance(&w("")), 1);
        assert_eq!(quad_root_distance(&w("12")), 1);
        assert_eq!(quad_root_distance(&w("11")), 3);
    }

    #[test]
    fn literal_examples() {
        assert_eq!(gamma_prime_literal(&w("122121112")), 2);
        assert_eq!(gamma_prime_literal(&w("")), 1);
        assert_eq!(gamma_prime_literal(&w("1")), 2);
        assert_eq!(gamma_prime_literal(&w("11")), 2);
        assert_eq!(gamma_prime_literal(&w("12")), 1);
        let mut b = LiteralBlocks::default();
        for &l in w("122121112").letters() {
            b.push(l);
        }
        assert_eq!((b.complete_blocks(), b.correction()), (1, 0));
    }

    #[test]
    fn gamma_equals_type_distance_exhaustively() {
        for u in all_words(3, 10) {
            assert_eq!(gamma(&u), tri_root_distance(&u), "word {u}");
        }
    }

    #[test]
    fn tri_types_stay_valid() {
        for u in all_words(3, 8) {
            let [i, j, k] = tri_type(&u).values();
            assert!(TriFaceType::new(i, j, k).is_ok());
        }
    }

    #[test]
    fn quad_types_keep_parity() {
        for u in all_words(2, 16) {
            let [a, b, c, d] = quad_type(&u).values();
            assert!(QuadFaceType::new(a, b, c, d).is_ok(), "word {u}");
        }
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(TriFaceType::new(0, 2, 1).is_err());
        assert!(QuadFaceType::new(0, 0, 1, 1).is_err());
    }

    #[test]
    fn literal_and_automaton_comparison() {
        assert_eq!(quad_root_distance(&w("11")), 3);
        assert_eq!(gamma_prime_literal(&w("11")), 2);
        let pair = |u: &str, v: &str, m| gamma_prime_pair(&w(u), &w(v), m).unwrap();
        // the two readings happen to agree on (11, 22) and split on (11, 21)
        assert_eq!(pair("11", "22", QuadDistance::Automaton), 4);
        assert_eq!(pair("11", "22", QuadDistance::Literal), 4);
        assert_eq!(pair("11", "21", QuadDistance::Automaton), 6);
        assert_eq!(pair("11", "21", QuadDistance::Literal), 3);
    }

    #[test]
    fn exact_rates() {
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(tri_distance_rate(), r(2, 11));
        assert_eq!(quad_distance_rate(), r(1, 5));
    }
}
