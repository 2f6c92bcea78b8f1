//! Arithmetic in GF(2^m) for `1 ≤ m ≤ 16`.
//!
//! Elements are the low `m` bits of a `u32` in polynomial basis; the bit
//! `i` is the coefficient of `X^i`. Each degree uses the fixed reduction
//! polynomial from [`IRREDUCIBLE`] so results are reproducible bit for bit.

use crate::error::{Error, Result};

pub const MAX_FIELD_LOG: u32 = 16;

/// Reduction polynomials, including the leading term, indexed by `m`.
pub const IRREDUCIBLE: [u32; 17] = [
    0, 0x3, // x + 1
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x83,    // x^7 + x + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    m: u32,
    poly: u32,
}

impl Field {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_FIELD_LOG {
            return Err(Error::invalid(format!("field degree m = {m} must lie in 1..={MAX_FIELD_LOG}")));
        }
        Ok(Field {
            m,
            poly: IRREDUCIBLE[m as usize],
        })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    pub fn mask(&self) -> u32 {
        ((1u64 << self.m) - 1) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    /// Shift-and-add multiplication with reduction after every shift.
    pub fn mul(&self, mut a: u32, mut b: u32) -> u32 {
        let top = 1u32 << self.m;
        let mut acc = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.poly;
            }
        }
        acc
    }

    /// Horner evaluation of `Σ coeffs[i]·x^i`.
    pub fn eval_poly(&self, coeffs: &[u32], x: u32) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }
}
