//! Nečiporuk-style wire lower bounds from subfunction counts.
//!
//! Fix a block `S` of variables and a circuit `C` for `f`. Under any
//! assignment to the variables outside `S`, the restricted circuit is
//! either constant or keeps exactly the wires labelled inside `S`. So if
//! `ℓ_S` wires are labelled in `S`, every non-constant subfunction of `f` on
//! `S` is computed by some circuit with exactly `ℓ_S` wires over `|S|`
//! variables, and there are at most `N(ℓ_S, |S|)` of those. Summing the
//! smallest admissible `ℓ_S` over a partition bounds the total wire count.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{guard, Error, Result};
use crate::restrict::Restriction;
use crate::sat::BlockPartition;
use crate::truth_table::TruthTable;

pub const MAX_CENSUS_VARS: usize = 20;
pub const MAX_CENSUS_BLOCK: usize = 16;

/// Distinct sub-truth-tables of `f` on `block` over all outside assignments.
pub fn subfunctions(f: &TruthTable, block: &[usize]) -> Result<HashSet<TruthTable>> {
    let n = f.num_vars();
    guard("census variables", n, MAX_CENSUS_VARS)?;
    guard("census block size", block.len(), MAX_CENSUS_BLOCK)?;
    let mut inside = vec![false; n];
    for &v in block {
        if v == 0 || v > n || std::mem::replace(&mut inside[v - 1], true) {
            return Err(Error::invalid(format!("bad block variable {v}")));
        }
    }
    let outside: Vec<usize> = (0..n).filter(|&i| !inside[i]).collect();
    (0..(1usize << outside.len()))
        .into_par_iter()
        .map(|o| {
            let mut assignment = vec![None; n];
            for (j, &i) in outside.iter().enumerate() {
                assignment[i] = Some((o >> j) & 1 == 1);
            }
            Restriction::new(assignment).slice(f)
        })
        .try_fold(HashSet::new, |mut set, t| {
            set.insert(t?);
            Ok(set)
        })
        .try_reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            Ok(a)
        })
}

pub fn subfunction_count(f: &TruthTable, block: &[usize]) -> Result<usize> {
    Ok(subfunctions(f, block)?.len())
}

/// `N(ℓ, k) = (2k)^ℓ · Σ_{t=0}^{L} (ℓ(ℓ-1))^t · ℓ` with `L = ℓ(ℓ-1)/2`.
///
/// Counts labellings, useful-gate sequences and output choices, so it bounds
/// the number of functions of `k` variables computed with exactly `ℓ` wires.
/// `N(0, k) = 0`.
pub fn circuits_count_upper(l: usize, k: usize) -> BigUint {
    if l == 0 {
        return BigUint::zero();
    }
    let pairs = BigUint::from(l * (l - 1));
    let max_gates = l * (l - 1) / 2;
    let mut sequences = BigUint::zero();
    let mut term = BigUint::one();
    for _ in 0..=max_gates {
        sequences += &term;
        term *= &pairs;
    }
    BigUint::from(2 * k).pow(l as u32) * sequences * BigUint::from(l)
}

pub fn log2_circuits_count_upper(l: usize, k: usize) -> f64 {
    let n = circuits_count_upper(l, k);
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    // keep the top 53 bits so the conversion is exact enough
    let bits = n.bits();
    let shift = bits.saturating_sub(53);
    (&n >> shift).to_f64().expect("fits in f64").log2() + shift as f64
}

/// Smallest `ℓ` with `N(ℓ, k) ≥ m`.
pub fn invert_count(m: usize, k: usize) -> usize {
    let m = BigUint::from(m);
    (0..).find(|&l| circuits_count_upper(l, k) >= m).expect("N grows without bound")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCensus {
    pub block: Vec<usize>,
    /// Distinct subfunctions, constants included.
    pub subfunctions: usize,
    pub non_constant: usize,
    /// Wires that must carry labels from this block.
    pub wire_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubfunctionCensus {
    pub partition: BlockPartition,
    pub blocks: Vec<BlockCensus>,
}

impl SubfunctionCensus {
    pub fn compute(f: &TruthTable, partition: &BlockPartition) -> Result<Self> {
        if partition.num_vars() != f.num_vars() {
            return Err(Error::Dimension {
                expected: f.num_vars(),
                got: partition.num_vars(),
            });
        }
        let blocks = partition
            .blocks()
            .iter()
            .map(|block| {
                let subs = subfunctions(f, block)?;
                let non_constant = subs.iter().filter(|t| t.is_constant().is_none()).count();
                Ok(BlockCensus {
                    block: block.clone(),
                    subfunctions: subs.len(),
                    non_constant,
                    wire_bound: invert_count(non_constant, block.len()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubfunctionCensus {
            partition: partition.clone(),
            blocks,
        })
    }

    pub fn counts(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.subfunctions).collect()
    }

    pub fn total_bound(&self) -> usize {
        self.blocks.iter().map(|b| b.wire_bound).sum()
    }
}

/// Lower bound on the wire count of any comparator circuit computing `f`.
pub fn necip_wire_bound(f: &TruthTable, partition: &BlockPartition) -> Result<usize> {
    Ok(SubfunctionCensus::compute(f, partition)?.total_bound())
}
