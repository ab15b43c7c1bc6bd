use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

/// Open/closed state of every switchable branch; `true` means closed.
///
/// Index `i` refers to the i-th switchable branch in network-file order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwitchVector(Vec<bool>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid switch character {found:?} at position {position}; expected '0' or '1'")]
pub struct ParseSwitchVectorError {
    pub position: usize,
    pub found: char,
}

impl SwitchVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn all_open(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn all_closed(n: usize) -> Self {
        Self(vec![true; n])
    }

    /// Uniform draw over `{0,1}^n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self((0..n).map(|_| rng.gen::<bool>()).collect())
    }

    /// Configuration number `index` in little-endian bit order (bit i of
    /// `index` sets switch i). Used for exhaustive enumeration.
    pub fn from_index(n: usize, index: u64) -> Self {
        Self((0..n).map(|i| (index >> i) & 1 == 1).collect())
    }

    /// Inverse of [`SwitchVector::from_index`].
    pub fn to_index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn is_closed(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut bits = self.0.clone();
        bits[i] = !bits[i];
        Self(bits)
    }

    pub fn hamming(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Integer coordinates, as used by poll arithmetic.
    pub fn to_coords(&self) -> Vec<i32> {
        self.0.iter().map(|&b| i32::from(b)).collect()
    }

    /// Back from integer coordinates; `None` if any entry leaves `{0,1}`.
    pub fn from_coords(coords: &[i32]) -> Option<Self> {
        coords
            .iter()
            .map(|&c| match c {
                0 => Some(false),
                1 => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }
}

impl fmt::Display for SwitchVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for SwitchVector {
    type Err = ParseSwitchVectorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(ParseSwitchVectorError { position, found }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl From<Vec<bool>> for SwitchVector {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}
