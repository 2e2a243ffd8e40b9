//! Finite words over `{1, ..., d}` addressing nodes of plane trees.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A node address. The empty word is the root.
///
/// The derived ordering is the lexicographic order on words, in which a
/// prefix precedes its extensions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid letter {0:?} in word")]
    InvalidLetter(char),
}

impl Word {
    pub fn root() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<u8>>) -> Self {
        Word(letters.into())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, letter: u8) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(letter);
        Word(v)
    }

    pub fn push(&mut self, letter: u8) {
        self.0.push(letter);
    }

    pub fn parent(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// The part of `self` after `prefix`, if `prefix` is a prefix of `self`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<&[u8]> {
        self.0.strip_prefix(prefix.0.as_slice())
    }

    pub fn concat(&self, suffix: &[u8]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(suffix);
        Word(v)
    }

    /// True when every letter lies in `1..=arity`.
    pub fn is_over(&self, arity: u8) -> bool {
        self.0.iter().all(|&l| (1..=arity).contains(&l))
    }

    /// Digit string; the root is the empty string.
    pub fn to_digits(&self) -> String {
        self.0.iter().map(|&l| char::from(b'0' + l)).collect()
    }
}

/// Longest common prefix `u ∧ v`.
pub fn lca(u: &Word, v: &Word) -> Word {
    let n =
        u.0.iter()
            .zip(v.0.iter())
            .take_while(|(a, b)| a == b)
            .count();
    Word(u.0[..n].to_vec())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("∅")
        } else {
            f.write_str(&self.to_digits())
        }
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "∅" {
            return Ok(Word::root());
        }
        s.chars()
            .map(|c| match c.to_digit(10) {
                Some(d @ 1..=9) => Ok(d as u8),
                _ => Err(WordError::InvalidLetter(c)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_digits())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used heavily in tests: `w("213")`.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lca_examples() {
        assert_eq!(lca(&w("121"), &w("13")), w("1"));
        assert_eq!(lca(&w("121"), &w("121")), w("121"));
        assert_eq!(lca(&w("2"), &w("31")), Word::root());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(w("").to_string(), "∅");
        assert_eq!(w("∅"), Word::root());
        assert_eq!(w("2131").letters(), &[2, 1, 3, 1]);
        assert!("12a".parse::<Word>().is_err());
        assert!("102".parse::<Word>().is_err());
    }

    #[test]
    fn lexicographic_order() {
        let mut v = vec![w("13"), w("2"), w(""), w("1")];
        v.sort();
        assert_eq!(v, vec![w(""), w("1"), w("13"), w("2")]);
    }
}
