//! Packed truth tables.
//!
//! Bit `i` of a table over `n` variables is the function value on the input
//! whose variable `j` (1-based) equals bit `j - 1` of `i`, so variable 1 is
//! the least-significant bit of the index.

use std::fmt;

use crate::error::{guard, Error, Result};

/// Largest arity for which a truth table may be materialized (2^24 bits).
pub const MAX_TRUTH_TABLE_VARS: usize = 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    num_vars: usize,
    words: Vec<u64>,
}

pub(crate) fn words_for(num_vars: usize) -> usize {
    (1usize << num_vars).div_ceil(64)
}

/// Mask of the valid bits in the last word of a table over `num_vars` variables.
pub(crate) fn tail_mask(num_vars: usize) -> u64 {
    if num_vars >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << num_vars)) - 1
    }
}

impl TruthTable {
    pub fn zeros(num_vars: usize) -> Result<Self> {
        guard("truth-table variables", num_vars, MAX_TRUTH_TABLE_VARS)?;
        Ok(TruthTable {
            num_vars,
            words: vec![0; words_for(num_vars)],
        })
    }

    pub fn from_fn(num_vars: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut tt = Self::zeros(num_vars)?;
        for i in 0..tt.len() {
            if f(i) {
                tt.set(i, true);
            }
        }
        Ok(tt)
    }

    pub(crate) fn from_words(num_vars: usize, mut words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(num_vars));
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(num_vars);
        }
        TruthTable { num_vars, words }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Number of entries, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.num_vars
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, index: usize) -> bool {
        (self.words[index / 64] >> (index % 64)) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        let bit = 1u64 << (index % 64);
        if value {
            self.words[index / 64] |= bit;
        } else {
            self.words[index / 64] &= !bit;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_constant(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            c if c == self.len() as u64 => Some(true),
            _ => None,
        }
    }

    pub fn complement(&self) -> TruthTable {
        TruthTable::from_words(self.num_vars, self.words.iter().map(|w| !w).collect())
    }

    /// Number of indices where `self` and `other` agree.
    pub fn agreement(&self, other: &TruthTable) -> Result<u64> {
        if self.num_vars != other.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                got: other.num_vars,
            });
        }
        let mask = tail_mask(self.num_vars);
        let last = self.words.len() - 1;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .enumerate()
            .map(|(i, (a, b))| {
                let m = if i == last { mask } else { u64::MAX };
                u64::from((!(a ^ b) & m).count_ones())
            })
            .sum())
    }

    /// Lowercase hex; the first (most-significant) bit of the string is entry 0.
    /// The final nibble is zero-padded when `2^n` is not a multiple of four.
    pub fn to_hex(&self) -> String {
        let len = self.len();
        let nibbles = len.div_ceil(4);
        let mut out = String::with_capacity(nibbles);
        for q in 0..nibbles {
            let mut v = 0u32;
            for j in 0..4 {
                let i = 4 * q + j;
                v <<= 1;
                if i < len && self.get(i) {
                    v |= 1;
                }
            }
            out.push(char::from_digit(v, 16).expect("nibble"));
        }
        out
    }

    pub fn from_hex(num_vars: usize, hex: &str) -> Result<Self> {
        let mut tt = Self::zeros(num_vars)?;
        let hex: String = hex.chars().filter(|c| !c.is_whitespace()).collect();
        let hex = hex.strip_prefix("0x").unwrap_or(&hex);
        let nibbles = tt.len().div_ceil(4);
        if hex.len() != nibbles {
            return Err(Error::invalid(format!(
                "truth table over {num_vars} variables needs {nibbles} hex digits, got {}",
                hex.len()
            )));
        }
        for (q, c) in hex.chars().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::invalid(format!("invalid hex digit {c:?}")))?;
            for j in 0..4 {
                let i = 4 * q + j;
                let bit = (v >> (3 - j)) & 1 == 1;
                if i < tt.len() {
                    tt.set(i, bit);
                } else if bit {
                    return Err(Error::invalid("nonzero padding bits in truth table"));
                }
            }
        }
        Ok(tt)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({}; {})", self.num_vars, self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_layout_puts_entry_zero_first() {
        let tt = TruthTable::from_fn(2, |i| i == 1 || i == 2).unwrap();
        assert_eq!(tt.to_hex(), "6");
        let tt = TruthTable::from_fn(1, |i| i == 0).unwrap();
        assert_eq!(tt.to_hex(), "8");
        let tt = TruthTable::from_fn(3, |i| i == 0 || i == 7).unwrap();
        assert_eq!(tt.to_hex(), "81");
    }

    #[test]
    fn hex_round_trip() {
        for n in 0..9 {
            let tt = TruthTable::from_fn(n, |i| (i * 2654435761) % 7 < 3).unwrap();
            assert_eq!(TruthTable::from_hex(n, &tt.to_hex()).unwrap(), tt);
        }
    }

    #[test]
    fn rejects_bad_hex() {
        assert!(TruthTable::from_hex(2, "g").is_err());
        assert!(TruthTable::from_hex(2, "66").is_err());
        // n = 1 has two entries; the low two bits of the nibble are padding
        assert!(TruthTable::from_hex(1, "1").is_err());
    }

    #[test]
    fn guard_on_arity() {
        let err = TruthTable::zeros(25).unwrap_err();
        assert!(err.is_guard());
    }

    #[test]
    fn agreement_and_complement() {
        let a = TruthTable::from_fn(3, |i| i % 3 == 0).unwrap();
        assert_eq!(a.agreement(&a).unwrap(), 8);
        assert_eq!(a.agreement(&a.complement()).unwrap(), 0);
        assert_eq!(a.complement().count_ones(), 8 - a.count_ones());
    }
}
