mod common;

use compcirc::simplify::simplify_full;
use compcirc::{random_circuit, ComparatorCircuit, Gate, Literal};
use proptest::prelude::*;

use common::{scalar_table, table_bits};

fn arb_circuit() -> impl Strategy<Value = ComparatorCircuit> {
    (1usize..=9, 1usize..=8).prop_flat_map(|(n, l)| {
        let lit = (1..=n, any::<bool>()).prop_map(|(var, negated)| Literal { var, negated });
        let gate = (1..=l, 1..l).prop_map(move |(a, d)| Gate::new(a, (a - 1 + d) % l + 1));
        let gates = if l == 1 {
            Just(Vec::new()).boxed()
        } else {
            prop::collection::vec(gate, 0..30).boxed()
        };
        (prop::collection::vec(lit, l), gates, 1..=l)
            .prop_map(move |(wires, gates, out)| ComparatorCircuit::new(n, wires, gates, out).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn text_round_trip(c in arb_circuit()) {
        let text = c.to_text();
        let back = ComparatorCircuit::parse(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn packed_table_matches_scalar_evaluation(c in arb_circuit()) {
        prop_assert_eq!(table_bits(&c.truth_table().unwrap()), scalar_table(&c));
    }
}

#[test]
fn random_circuits_round_trip() {
    for seed in 0..1000 {
        let wires = 1 + (seed % 7) as usize;
        let gates = if wires == 1 { 0 } else { (seed % 31) as usize };
        let c = random_circuit(1 + (seed % 10) as usize, wires, gates, seed).unwrap();
        assert_eq!(ComparatorCircuit::parse(&c.to_text()).unwrap(), c, "seed {seed}");
    }
}

#[test]
fn random_circuit_examples() {
    let c = random_circuit(2, 1, 0, 7).unwrap();
    assert_eq!((c.num_wires(), c.num_gates()), (1, 0));
    assert_eq!(c, random_circuit(2, 1, 0, 7).unwrap());
    let c = random_circuit(8, 6, 20, 1).unwrap();
    assert_eq!(c.truth_table().unwrap().len(), 256);
    assert_eq!(table_bits(&c.truth_table().unwrap()), scalar_table(&c));
}

#[test]
fn shipped_parity_witnesses() {
    for (text, gates) in [
        (include_str!("../circuits/parity2.cc"), 3),
        (include_str!("../circuits/parity2_padded.cc"), 4),
    ] {
        let c = ComparatorCircuit::parse(text).unwrap();
        assert_eq!((c.num_vars(), c.num_wires(), c.num_gates()), (2, 4, gates));
        assert_eq!(scalar_table(&c), vec![false, true, true, false]);
        let s = simplify_full(&c).unwrap();
        assert!(s.num_gates() <= 6);
        assert_eq!(scalar_table(&s), vec![false, true, true, false]);
    }
    assert_eq!(
        ComparatorCircuit::parse(include_str!("../circuits/parity2.cc")).unwrap(),
        ComparatorCircuit::parity_witness()
    );
    assert_eq!(
        ComparatorCircuit::parse(include_str!("../circuits/parity2_padded.cc")).unwrap(),
        ComparatorCircuit::parity_witness_padded()
    );
}
