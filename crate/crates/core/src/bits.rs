//! Fixed-width bit-strings. Index 0 is the leftmost, most significant bit.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(width: usize) -> Self {
        BitString(vec![false; width])
    }

    /// Big-endian decode: the leftmost bit of the string is the top bit of `index`.
    pub fn from_index(index: usize, width: usize) -> Self {
        let bits = (0..width).map(|i| index >> (width - 1 - i) & 1 == 1).collect();
        BitString(bits)
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| acc << 1 | usize::from(b))
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// All bit-strings of the given width in lexicographic (= numeric) order.
    pub fn all(width: usize) -> Vec<BitString> {
        (0..1usize << width).map(|i| BitString::from_index(i, width)).collect()
    }

    /// The sub-string at the given positions, in the order listed.
    pub fn select(&self, positions: &[usize]) -> BitString {
        BitString(positions.iter().map(|&p| self.0[p]).collect())
    }

    /// Assemble a width-`width` string from two position/value groups.
    pub fn combine(width: usize, a_positions: &[usize], a: &BitString, b_positions: &[usize], b: &BitString) -> Self {
        let mut bits = vec![false; width];
        for (i, &p) in a_positions.iter().enumerate() {
            bits[p] = a.bit(i);
        }
        for (i, &p) in b_positions.iter().enumerate() {
            bits[p] = b.bit(i);
        }
        BitString(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({})", self)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidBitString(s.to_string()));
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidBitString(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}
