//! Slow, independently written oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use compcirc::{ComparatorCircuit, Literal, TruthTable};

/// Gate-by-gate evaluation on plain booleans.
pub fn scalar_eval(c: &ComparatorCircuit, x: &[bool]) -> bool {
    let mut w: Vec<bool> = c.wires().iter().map(|l| x[l.var - 1] != l.negated).collect();
    for g in c.gates() {
        let (a, b) = (w[g.and_wire - 1], w[g.or_wire - 1]);
        w[g.and_wire - 1] = a && b;
        w[g.or_wire - 1] = a || b;
    }
    w[c.output() - 1]
}

pub fn bits(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|j| index >> j & 1 == 1).collect()
}

pub fn scalar_table(c: &ComparatorCircuit) -> Vec<bool> {
    let n = c.num_vars();
    (0..1usize << n).map(|i| scalar_eval(c, &bits(i, n))).collect()
}

pub fn table_bits(t: &TruthTable) -> Vec<bool> {
    (0..t.len()).map(|i| t.get(i)).collect()
}

/// Literal truth table on `n ≤ 5` variables packed into a `u32`.
fn literal_mask(l: Literal, n: usize) -> u32 {
    let mut m = 0u32;
    for i in 0..1usize << n {
        if (i >> (l.var - 1) & 1 == 1) != l.negated {
            m |= 1 << i;
        }
    }
    m
}

/// Every function computed by some wire of some circuit with exactly `l`
/// wires on `n ≤ 5` variables, found by closing the wire-state tuples of
/// each label multiset under all gates.
pub fn functions_with_wires(n: usize, l: usize) -> HashSet<u32> {
    assert!(n <= 5 && l >= 1);
    let literals: Vec<u32> = (1..=n)
        .flat_map(|v| [literal_mask(Literal::pos(v), n), literal_mask(Literal::neg(v), n)])
        .collect();
    let mut out = HashSet::new();
    let mut labels = vec![0usize; l];
    loop {
        let start: Vec<u32> = labels.iter().map(|&i| literals[i]).collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(state) = queue.pop_front() {
            out.extend(state.iter().copied());
            for a in 0..l {
                for b in 0..l {
                    if a == b {
                        continue;
                    }
                    let mut next = state.clone();
                    next[a] = state[a] & state[b];
                    next[b] = state[a] | state[b];
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        // next nondecreasing label tuple
        let mut i = l;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if labels[i] + 1 < literals.len() {
                labels[i] += 1;
                for j in i + 1..l {
                    labels[j] = labels[i];
                }
                break;
            }
        }
    }
}

/// Smallest wire count (up to `max_wires`) computing each reachable function.
pub fn min_wires(n: usize, max_wires: usize) -> HashMap<u32, usize> {
    let mut best = HashMap::new();
    for l in 1..=max_wires {
        for f in functions_with_wires(n, l) {
            best.entry(f).or_insert(l);
        }
    }
    best
}

pub fn table_from_mask(mask: u32, n: usize) -> TruthTable {
    TruthTable::from_fn(n, |i| mask >> i & 1 == 1).unwrap()
}

/// Distinct subfunctions on `block`, via string keys built bit by bit.
pub fn naive_subfunction_count(f: &TruthTable, block: &[usize]) -> usize {
    let n = f.num_vars();
    let outside: Vec<usize> = (1..=n).filter(|v| !block.contains(v)).collect();
    let mut seen = HashSet::new();
    for o in 0..1usize << outside.len() {
        let mut key = String::new();
        for j in 0..1usize << block.len() {
            let mut idx = 0usize;
            for (t, &v) in outside.iter().enumerate() {
                idx |= (o >> t & 1) << (v - 1);
            }
            for (t, &v) in block.iter().enumerate() {
                idx |= (j >> t & 1) << (v - 1);
            }
            key.push(if f.get(idx) { '1' } else { '0' });
        }
        seen.insert(key);
    }
    seen.len()
}

/// `|Pr_z[C(G(z))] - Pr_x[C(x)]|` as a reduced `(numerator, denominator)`,
/// counted with the scalar evaluator.
pub fn fooling_recount(c: &ComparatorCircuit, seed_len: usize, g: impl Fn(u64) -> Vec<bool>) -> (u64, u64) {
    let n = c.num_vars();
    let ones_x = (0..1usize << n).filter(|&i| scalar_eval(c, &bits(i, n))).count() as u64;
    let ones_z = (0..1u64 << seed_len).filter(|&z| scalar_eval(c, &g(z))).count() as u64;
    let num = (ones_z << n).abs_diff(ones_x << seed_len);
    let den = 1u64 << (n + seed_len);
    let g = gcd(num, den);
    (num / g, den / g)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
