use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Occurrence counts `n_1..n_m` of the `m` amplitudes in a length-`n` block.
///
/// Amplitude `i` (0-based here) stands for the `(i+1)`-th symbol of the alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Composition {
    counts: Vec<usize>,
}

impl Composition {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyComposition);
        }
        Ok(Composition { counts })
    }

    /// Realized composition of a sequence over an `m`-letter alphabet.
    pub fn of_sequence(symbols: &[usize], m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyComposition);
        }
        let mut counts = vec![0; m];
        for &s in symbols {
            *counts
                .get_mut(s)
                .ok_or(Error::SymbolOutOfRange { symbol: s, m })? += 1;
        }
        Ok(Composition { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn m(&self) -> usize {
        self.counts.len()
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Empirical entropy in bits of the type `n_i / n`.
    pub fn entropy(&self) -> f64 {
        let n = self.n() as f64;
        self.counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.log2()
            })
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
