mod common;

use compcirc::analysis::{circuits_count_upper, necip_wire_bound, subfunction_count};
use compcirc::random_circuit;
use compcirc::sat::BlockPartition;
use num_bigint::BigUint;
use proptest::prelude::*;

use common::{functions_with_wires, min_wires, naive_subfunction_count, table_from_mask};

fn partitions(n: usize) -> Vec<BlockPartition> {
    let mut out = vec![BlockPartition::from_blocks(n, vec![(1..=n).collect()]).unwrap()];
    for k in 1..n {
        out.push(BlockPartition::consecutive(n, k).unwrap());
        if n.is_multiple_of(k) {
            out.push(BlockPartition::interleaved(n, k).unwrap());
        }
    }
    out
}

#[test]
fn counting_function_dominates_enumeration() {
    for k in 1..=2 {
        for l in 1..=3 {
            let found = functions_with_wires(k, l).len();
            assert!(BigUint::from(found) <= circuits_count_upper(l, k), "l={l} k={k}: {found}");
        }
    }
    assert!(functions_with_wires(1, 2).len() <= 24);
}

#[test]
fn bound_never_exceeds_wires_exhaustive_small() {
    for n in 1..=4 {
        for (mask, l) in min_wires(n, 4) {
            let f = table_from_mask(mask, n);
            for p in partitions(n) {
                let b = necip_wire_bound(&f, &p).unwrap();
                assert!(b <= l, "n={n} f={mask:#x} blocks {:?}: bound {b} > {l}", p.blocks());
            }
        }
    }
}

#[test]
fn bound_never_exceeds_wires_random() {
    for seed in 0..200u64 {
        let n = 1 + seed as usize % 8;
        let l = 1 + seed as usize % 5;
        let c = random_circuit(n, l, if l == 1 { 0 } else { 3 * l }, seed).unwrap();
        let f = c.truth_table().unwrap();
        for p in partitions(n) {
            assert!(necip_wire_bound(&f, &p).unwrap() <= l, "seed {seed}");
        }
    }
}

proptest! {
    #[test]
    fn census_matches_naive_dedup(bits in any::<u64>(), n in 1usize..=6, pick in any::<u8>()) {
        let f = compcirc::TruthTable::from_fn(n, |i| bits >> i & 1 == 1).unwrap();
        let block: Vec<usize> = (1..=n).filter(|v| pick >> (v - 1) & 1 == 1).collect();
        let mut reversed = block.clone();
        reversed.reverse();
        let m = subfunction_count(&f, &block).unwrap();
        prop_assert_eq!(m, naive_subfunction_count(&f, &block));
        prop_assert_eq!(m, subfunction_count(&f, &reversed).unwrap());
        let cap = (1usize << (n - block.len())).min(if block.len() >= 6 { usize::MAX } else { 1 << (1 << block.len()) });
        prop_assert!(1 <= m && m <= cap);
    }
}
