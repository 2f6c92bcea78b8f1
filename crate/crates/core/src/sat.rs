//! Counting satisfying assignments.
//!
//! [`count_sat_memo`] partitions the variables into blocks, picks the block
//! `S` whose variables label the fewest wires, and enumerates every
//! assignment to the variables outside `S`. Each restriction leaves a
//! circuit on exactly the wires labelled by `S`, always with the same
//! labelling, so a single [`MemoTree`] over that labelling answers every
//! restricted instance.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::circuit::{ComparatorCircuit, Literal};
use crate::error::{guard, Error, Result};
use crate::memo::{MemoTree, Mode, WireContext, MAX_CONTEXT_VARS};
use crate::restrict::{apply_restriction, RestrictedResult, Restriction};
use crate::truth_table::MAX_TRUTH_TABLE_VARS;

/// Largest arity accepted by the memoized counter (counts fit in `u64`).
pub const MAX_MEMO_SAT_VARS: usize = 63;
/// Default cap on block wires for which a memo tree is built.
pub const DEFAULT_MEMO_WIRE_LIMIT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionStyle {
    /// Contiguous runs of variables, sizes differing by at most one.
    Consecutive,
    /// `S_i` = the `i`-th variable of each of `k` consecutive chunks.
    Interleaved,
    Custom,
}

impl fmt::Display for PartitionStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionStyle::Consecutive => "consecutive",
            PartitionStyle::Interleaved => "interleaved",
            PartitionStyle::Custom => "custom",
        })
    }
}

impl FromStr for PartitionStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "consecutive" => Ok(PartitionStyle::Consecutive),
            "interleaved" => Ok(PartitionStyle::Interleaved),
            other => Err(Error::invalid(format!("unknown partition style {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    style: PartitionStyle,
    num_vars: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    /// `⌊n/k⌋` consecutive blocks of near-equal size.
    pub fn consecutive(num_vars: usize, k: usize) -> Result<Self> {
        if k == 0 || k > num_vars {
            return Err(Error::invalid(format!("block size k = {k} must lie in 1..={num_vars}")));
        }
        let m = num_vars / k;
        let (base, extra) = (num_vars / m, num_vars % m);
        let mut blocks = Vec::with_capacity(m);
        let mut next = 1;
        for i in 0..m {
            let size = base + usize::from(i < extra);
            blocks.push((next..next + size).collect());
            next += size;
        }
        Ok(BlockPartition {
            style: PartitionStyle::Consecutive,
            num_vars,
            blocks,
        })
    }

    /// `n/k` blocks of size `k`; requires `k | n`.
    pub fn interleaved(num_vars: usize, k: usize) -> Result<Self> {
        if k == 0 || !num_vars.is_multiple_of(k) {
            return Err(Error::invalid(format!("interleaved blocks need k | n (n = {num_vars}, k = {k})")));
        }
        let chunk = num_vars / k;
        let blocks = (1..=chunk)
            .map(|i| (0..k).map(|j| j * chunk + i).collect())
            .collect();
        Ok(BlockPartition {
            style: PartitionStyle::Interleaved,
            num_vars,
            blocks,
        })
    }

    pub fn new(style: PartitionStyle, num_vars: usize, k: usize) -> Result<Self> {
        match style {
            PartitionStyle::Consecutive => Self::consecutive(num_vars, k),
            PartitionStyle::Interleaved => Self::interleaved(num_vars, k),
            PartitionStyle::Custom => Err(Error::invalid("custom partitions are built with from_blocks")),
        }
    }

    /// Any partition of `1..=n` into nonempty blocks; each block keeps the given order.
    pub fn from_blocks(num_vars: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; num_vars + 1];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::invalid("empty block in partition"));
            }
            for &v in block {
                if v == 0 || v > num_vars {
                    return Err(Error::invalid(format!("variable {v} outside 1..={num_vars}")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::invalid(format!("variable {v} appears in two blocks")));
                }
            }
        }
        if let Some(v) = (1..=num_vars).find(|&v| !seen[v]) {
            return Err(Error::invalid(format!("variable {v} is not covered by any block")));
        }
        Ok(BlockPartition {
            style: PartitionStyle::Custom,
            num_vars,
            blocks,
        })
    }

    /// Parses `"1-2,3,4-6"` (1-based inclusive ranges).
    pub fn parse_ranges(num_vars: usize, spec: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (lo, hi) = match part.split_once('-') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (part, part),
            };
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad block bound {s:?} in {part:?}")))
            };
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(Error::invalid(format!("empty range {part:?}")));
            }
            blocks.push((lo..=hi).collect());
        }
        Self::from_blocks(num_vars, blocks)
    }

    pub fn style(&self) -> PartitionStyle {
        self.style
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Wires labelled by variables of each block.
    pub fn block_wire_counts(&self, circuit: &ComparatorCircuit) -> Vec<usize> {
        let mut block_of = vec![0; self.num_vars + 1];
        for (i, block) in self.blocks.iter().enumerate() {
            for &v in block {
                block_of[v] = i;
            }
        }
        let mut counts = vec![0; self.blocks.len()];
        for lit in circuit.wires() {
            counts[block_of[lit.var]] += 1;
        }
        counts
    }
}

pub fn count_sat_brute(circuit: &ComparatorCircuit) -> Result<u64> {
    guard("brute-force #SAT variables", circuit.num_vars(), MAX_TRUTH_TABLE_VARS)?;
    Ok(circuit.truth_table()?.count_ones())
}

/// Index of the block labelling the fewest wires (lowest index on ties).
pub fn choose_block(circuit: &ComparatorCircuit, partition: &BlockPartition) -> Result<usize> {
    if partition.num_vars() != circuit.num_vars() {
        return Err(Error::Dimension {
            expected: circuit.num_vars(),
            got: partition.num_vars(),
        });
    }
    let counts = partition.block_wire_counts(circuit);
    let (best, _) = counts
        .iter()
        .enumerate()
        .min_by_key(|&(i, &w)| (w, i))
        .ok_or_else(|| Error::invalid("empty partition"))?;
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SatOptions {
    pub k: usize,
    pub style: PartitionStyle,
    /// Blocks with more wires than this fall back to brute force per restriction.
    pub memo_wire_limit: usize,
}

impl SatOptions {
    pub fn new(k: usize) -> Self {
        SatOptions {
            k,
            style: PartitionStyle::Consecutive,
            memo_wire_limit: DEFAULT_MEMO_WIRE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatReport {
    pub count: u64,
    pub num_vars: usize,
    pub num_wires: usize,
    pub num_gates: usize,
    /// 0-based index of the chosen block.
    pub chosen_block: usize,
    pub block_size: usize,
    pub block_wires: usize,
    pub restrictions_enumerated: u64,
    pub used_memo: bool,
    pub tree_nodes: u64,
    pub tree_lookups: u64,
    pub elapsed: Duration,
}

impl SatReport {
    /// CSV header for [`Self::csv_row`]; timing is left out so rows are reproducible.
    pub fn csv_header() -> &'static str {
        "count,num_vars,num_wires,num_gates,chosen_block,block_size,block_wires,restrictions,used_memo,tree_nodes,tree_lookups"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.count,
            self.num_vars,
            self.num_wires,
            self.num_gates,
            self.chosen_block + 1,
            self.block_size,
            self.block_wires,
            self.restrictions_enumerated,
            self.used_memo,
            self.tree_nodes,
            self.tree_lookups
        )
    }
}

enum Counter {
    Constant,
    Memo(MemoTree),
    Brute,
}

/// Exact #SAT by block restriction and memoized lookup.
///
/// The enumeration runs on the current rayon pool; the sum is exact, so the
/// result does not depend on the number of workers.
pub fn count_sat_memo(circuit: &ComparatorCircuit, options: SatOptions) -> Result<SatReport> {
    let start = Instant::now();
    let n = circuit.num_vars();
    guard("memoized #SAT variables", n, MAX_MEMO_SAT_VARS)?;
    let partition = BlockPartition::new(options.style, n, options.k)?;
    let chosen = choose_block(circuit, &partition)?;
    let block = &partition.blocks()[chosen];
    let block_wires = partition.block_wire_counts(circuit)[chosen];

    let mut in_block = vec![false; n + 1];
    for &v in block {
        in_block[v] = true;
    }
    let outside: Vec<usize> = (1..=n).filter(|&v| !in_block[v]).collect();
    let mut sorted_block = block.clone();
    sorted_block.sort_unstable();
    let mut rank = vec![0; n + 1];
    for (r, &v) in sorted_block.iter().enumerate() {
        rank[v] = r + 1;
    }

    let counter = if block_wires == 0 {
        Counter::Constant
    } else if block_wires <= options.memo_wire_limit && block.len() <= MAX_CONTEXT_VARS {
        let labels: Vec<Literal> = circuit
            .wires()
            .iter()
            .filter(|l| in_block[l.var])
            .map(|l| Literal {
                var: rank[l.var],
                negated: l.negated,
            })
            .collect();
        Counter::Memo(MemoTree::build(WireContext::new(block.len(), labels)?, Mode::Lazy)?)
    } else {
        guard("block variables for brute force", block.len(), MAX_TRUTH_TABLE_VARS)?;
        Counter::Brute
    };

    let block_size = block.len();
    let free_total = 1u64 << block_size;
    let num_restrictions = 1u64 << outside.len();
    let count_one = |idx: u64| -> Result<u64> {
        let mut assignment = vec![None; n];
        for (j, &v) in outside.iter().enumerate() {
            assignment[v - 1] = Some((idx >> j) & 1 == 1);
        }
        let restricted = apply_restriction(circuit, &Restriction::new(assignment))?;
        match (restricted, &counter) {
            (RestrictedResult::Constant(true), _) => Ok(free_total),
            (RestrictedResult::Constant(false), _) => Ok(0),
            (RestrictedResult::Circuit { circuit, .. }, Counter::Memo(tree)) => Ok(tree.lookup(&circuit)?.count),
            (RestrictedResult::Circuit { circuit, .. }, Counter::Brute) => count_sat_brute(&circuit),
            (RestrictedResult::Circuit { .. }, Counter::Constant) => {
                unreachable!("no block wires survive, so every restriction is constant")
            }
        }
    };
    let count = (0..num_restrictions)
        .into_par_iter()
        .map(count_one)
        .try_reduce(|| 0u64, |a, b| Ok(a + b))?;

    let (used_memo, tree_nodes, tree_lookups) = match &counter {
        Counter::Memo(tree) => (true, tree.materialized_nodes(), tree.lookups()),
        _ => (false, 0, 0),
    };
    Ok(SatReport {
        count,
        num_vars: n,
        num_wires: circuit.num_wires(),
        num_gates: circuit.num_gates(),
        chosen_block: chosen,
        block_size,
        block_wires,
        restrictions_enumerated: num_restrictions,
        used_memo,
        tree_nodes,
        tree_lookups,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, Gate};

    #[test]
    fn brute_examples() {
        assert_eq!(count_sat_brute(&ComparatorCircuit::parity_witness()).unwrap(), 2);
        assert_eq!(count_sat_brute(&ComparatorCircuit::constant(1, false).unwrap()).unwrap(), 0);
        let lit = ComparatorCircuit::new(3, vec![Literal::pos(1)], vec![], 1).unwrap();
        assert_eq!(count_sat_brute(&lit).unwrap(), 4);
    }

    #[test]
    fn consecutive_blocks() {
        let p = BlockPartition::consecutive(10, 3).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 2, 3, 4], vec![5, 6, 7], vec![8, 9, 10]]);
        let p = BlockPartition::consecutive(5, 3).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 2, 3, 4, 5]]);
        assert!(BlockPartition::consecutive(4, 0).is_err());
        assert!(BlockPartition::consecutive(4, 5).is_err());
    }

    #[test]
    fn interleaved_blocks() {
        let p = BlockPartition::interleaved(6, 3).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 3, 5], vec![2, 4, 6]]);
        assert!(BlockPartition::interleaved(6, 4).is_err());
    }

    #[test]
    fn range_parsing() {
        let p = BlockPartition::parse_ranges(5, "1-2, 3,4-5").unwrap();
        assert_eq!(p.blocks(), &[vec![1, 2], vec![3], vec![4, 5]]);
        assert!(BlockPartition::parse_ranges(5, "1-2,2-5").is_err());
        assert!(BlockPartition::parse_ranges(5, "1-4").is_err());
        assert!(BlockPartition::parse_ranges(5, "3-1,4-5").is_err());
    }

    #[test]
    fn choose_block_prefers_empty_lowest() {
        // all wires use x3, x4 (block 2 of the consecutive 2-partition of 6)
        let c = ComparatorCircuit::new(
            6,
            vec![Literal::pos(3), Literal::neg(4), Literal::pos(4)],
            vec![Gate::new(1, 2)],
            1,
        )
        .unwrap();
        let p = BlockPartition::consecutive(6, 2).unwrap();
        assert_eq!(choose_block(&c, &p).unwrap(), 0);
        let uniform = ComparatorCircuit::new(4, (1..=4).map(Literal::pos).collect(), vec![], 1).unwrap();
        assert_eq!(choose_block(&uniform, &BlockPartition::consecutive(4, 2).unwrap()).unwrap(), 0);
    }

    #[test]
    fn memo_matches_brute_small() {
        for seed in 0..40 {
            let c = random_circuit(7, 6, 20, seed).unwrap();
            let brute = count_sat_brute(&c).unwrap();
            for k in 1..=7 {
                let r = count_sat_memo(&c, SatOptions::new(k)).unwrap();
                assert_eq!(r.count, brute, "seed {seed} k {k}");
                assert_eq!(r.restrictions_enumerated, 1 << (7 - r.block_size));
            }
        }
    }

    #[test]
    fn constant_zero_for_every_k() {
        let c = ComparatorCircuit::constant(5, false).unwrap();
        for k in 1..=5 {
            assert_eq!(count_sat_memo(&c, SatOptions::new(k)).unwrap().count, 0);
        }
    }

    #[test]
    fn empty_block_uses_constant_path() {
        let c = ComparatorCircuit::new(
            6,
            vec![Literal::pos(5), Literal::neg(6), Literal::pos(4)],
            vec![Gate::new(1, 2), Gate::new(3, 1)],
            2,
        )
        .unwrap();
        let r = count_sat_memo(&c, SatOptions::new(2)).unwrap();
        assert_eq!(r.block_wires, 0);
        assert!(!r.used_memo);
        assert_eq!(r.count, count_sat_brute(&c).unwrap());
    }

    #[test]
    fn brute_fallback_when_block_is_crowded() {
        let c = random_circuit(3, 8, 20, 5).unwrap();
        let r = count_sat_memo(&c, SatOptions::new(3)).unwrap();
        assert!(!r.used_memo);
        assert_eq!(r.count, count_sat_brute(&c).unwrap());
    }

    #[test]
    fn interleaved_style_is_exact() {
        for seed in 0..20 {
            let c = random_circuit(8, 6, 25, seed).unwrap();
            let opts = SatOptions {
                style: PartitionStyle::Interleaved,
                ..SatOptions::new(4)
            };
            assert_eq!(count_sat_memo(&c, opts).unwrap().count, count_sat_brute(&c).unwrap());
        }
    }
}
