mod common;

use compcirc::memo::{MemoTree, Mode, WireContext};
use compcirc::sat::{count_sat_brute, count_sat_memo, PartitionStyle, SatOptions};
use compcirc::simplify::{simplify_full, useful_gate_bound};
use compcirc::{random_circuit, ComparatorCircuit, Gate, Literal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{scalar_table, table_bits};

fn scalar_count(c: &ComparatorCircuit) -> u64 {
    scalar_table(c).into_iter().filter(|&b| b).count() as u64
}

#[test]
fn memo_count_equals_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for seed in 0..200 {
        let n = rng.gen_range(1..=12);
        let wires = rng.gen_range(1..=8);
        let gates = if wires == 1 { 0 } else { rng.gen_range(0..=30) };
        let c = random_circuit(n, wires, gates, seed).unwrap();
        let want = scalar_count(&c);
        assert_eq!(count_sat_brute(&c).unwrap(), want);
        for k in [2, 3, 4] {
            for style in [PartitionStyle::Consecutive, PartitionStyle::Interleaved] {
                if style == PartitionStyle::Interleaved && n % k != 0 {
                    continue;
                }
                let mut opts = SatOptions::new(k);
                opts.style = style;
                match count_sat_memo(&c, opts) {
                    Ok(r) => assert_eq!(r.count, want, "seed {seed} k {k} {style}"),
                    // fewer variables than blocks
                    Err(e) => assert!(n < k, "seed {seed} k {k}: {e}"),
                }
            }
        }
    }
}

#[test]
fn simplification_keeps_function_and_meets_gate_bound() {
    for seed in 0..100 {
        let l = 1 + seed as usize % 6;
        let c = random_circuit(5, l, if l == 1 { 0 } else { 30 }, seed).unwrap();
        let s = simplify_full(&c).unwrap();
        assert_eq!(table_bits(&s.truth_table().unwrap()), scalar_table(&c), "seed {seed}");
        assert!(s.num_gates() <= useful_gate_bound(l), "seed {seed}: {} gates on {l} wires", s.num_gates());
        assert_eq!(s.wires(), c.wires());
    }
    assert_eq!(useful_gate_bound(6), 15);
}

#[test]
fn memo_trees_are_shallow_and_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for l in 1..=4usize {
        for _ in 0..3 {
            let k = rng.gen_range(1..=4);
            let labels: Vec<Literal> = (0..l)
                .map(|_| Literal {
                    var: rng.gen_range(1..=k),
                    negated: rng.gen(),
                })
                .collect();
            let ctx = WireContext::new(k, labels.clone()).unwrap();
            let eager = MemoTree::build(ctx.clone(), Mode::Eager).unwrap();
            let lazy = MemoTree::build(ctx.clone(), Mode::Lazy).unwrap();
            assert!(eager.stats().depth <= l * (l - 1) / 2 + 2);
            for _ in 0..500 {
                let gates: Vec<Gate> = if l == 1 {
                    Vec::new()
                } else {
                    (0..rng.gen_range(0..25))
                        .map(|_| {
                            let a = rng.gen_range(1..=l);
                            let b = (a + rng.gen_range(0..l - 1)) % l + 1;
                            Gate::new(a, b)
                        })
                        .collect()
                };
                let c = ComparatorCircuit::new(k, labels.clone(), gates, rng.gen_range(1..=l)).unwrap();
                let want = scalar_count(&c);
                assert_eq!(eager.lookup(&c).unwrap().count, want);
                assert_eq!(lazy.lookup(&c).unwrap().count, want);
            }
            let materialized = eager.materialized_nodes();
            assert_eq!(eager.stats().total_nodes(), materialized, "eager trees grow no further");
            assert!(lazy.stats().depth <= l * (l - 1) / 2 + 2);
            assert!(lazy.materialized_nodes() <= materialized);
        }
    }
}
