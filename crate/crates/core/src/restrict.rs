//! Restrictions and their application to comparator circuits.
//!
//! Fixing a variable turns every wire it labels into a constant. A gate with
//! a constant operand either passes its inputs through (`a ≡ 0` or `b ≡ 1`)
//! or swaps them (`a ≡ 1` or `b ≡ 0`); the first kind is dropped, the second
//! is dropped after exchanging the two wires in every later gate and in the
//! output designation. Afterwards no gate touches a constant wire, so all of
//! them can be deleted.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{ComparatorCircuit, Gate, Literal};
use crate::error::{Error, Result};
use crate::truth_table::TruthTable;

/// A partial assignment: `None` marks a free (`*`) coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Restriction {
    assignment: Vec<Option<bool>>,
}

impl Restriction {
    pub fn new(assignment: Vec<Option<bool>>) -> Self {
        Restriction { assignment }
    }

    pub fn free(num_vars: usize) -> Self {
        Restriction {
            assignment: vec![None; num_vars],
        }
    }

    pub fn total(values: &[bool]) -> Self {
        Restriction {
            assignment: values.iter().map(|&b| Some(b)).collect(),
        }
    }

    /// Builds `ρ` from a selection `σ` (true = free) and values `β` for the
    /// fixed coordinates. Entries of `β` at free coordinates are ignored.
    pub fn from_selection(selection: &[bool], values: &[bool]) -> Result<Self> {
        if selection.len() != values.len() {
            return Err(Error::Dimension {
                expected: selection.len(),
                got: values.len(),
            });
        }
        Ok(Restriction {
            assignment: selection
                .iter()
                .zip(values)
                .map(|(&free, &v)| if free { None } else { Some(v) })
                .collect(),
        })
    }

    /// Parses `"x1=0,x3=1"`; unmentioned variables stay free.
    pub fn parse_fixings(num_vars: usize, spec: &str) -> Result<Self> {
        let mut assignment = vec![None; num_vars];
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (lhs, rhs) = item
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("fixing {item:?} must look like x<i>=<0|1>")))?;
            let lit: Literal = lhs.trim().parse().map_err(Error::Validation)?;
            if lit.negated {
                return Err(Error::invalid(format!("cannot fix a negated literal in {item:?}")));
            }
            if lit.var > num_vars {
                return Err(Error::invalid(format!("variable x{} exceeds vars {num_vars}", lit.var)));
            }
            let value = match rhs.trim() {
                "0" => false,
                "1" => true,
                other => return Err(Error::invalid(format!("value {other:?} must be 0 or 1"))),
            };
            if assignment[lit.var - 1].replace(value).is_some() {
                return Err(Error::invalid(format!("x{} fixed twice", lit.var)));
            }
        }
        Ok(Restriction { assignment })
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[Option<bool>] {
        &self.assignment
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        self.assignment[var - 1]
    }

    /// The selection `σ`: true at free coordinates.
    pub fn selection(&self) -> Vec<bool> {
        self.assignment.iter().map(Option::is_none).collect()
    }

    /// Free variables in increasing order (1-based).
    pub fn free_vars(&self) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_none())
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn num_free(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_none()).count()
    }

    /// Fills the free coordinates with `z`, in variable order.
    pub fn merge(&self, z: &[bool]) -> Result<Vec<bool>> {
        let free = self.num_free();
        if z.len() != free {
            return Err(Error::Dimension {
                expected: free,
                got: z.len(),
            });
        }
        let mut z = z.iter();
        Ok(self
            .assignment
            .iter()
            .map(|a| match a {
                Some(v) => *v,
                None => *z.next().expect("length checked"),
            })
            .collect())
    }

    /// The slice of `f` selected by this restriction, over the free variables
    /// renumbered in order.
    pub fn slice(&self, f: &TruthTable) -> Result<TruthTable> {
        if f.num_vars() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got: f.num_vars(),
            });
        }
        let free = self.free_vars();
        let base: usize = self
            .assignment
            .iter()
            .enumerate()
            .filter(|(_, a)| **a == Some(true))
            .map(|(i, _)| 1usize << i)
            .sum();
        TruthTable::from_fn(free.len(), |z| {
            let idx = free
                .iter()
                .enumerate()
                .filter(|(j, _)| (z >> j) & 1 == 1)
                .fold(base, |acc, (_, &v)| acc | (1 << (v - 1)));
            f.get(idx)
        })
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.assignment {
            let c = match a {
                None => '*',
                Some(false) => '0',
                Some(true) => '1',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Restriction {
    type Err = Error;

    /// Parses the `{0,1,*}` string form, e.g. `"*0*"`.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '*' => Ok(None),
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                other => Err(Error::invalid(format!("restriction symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Restriction::new)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RestrictedResult {
    Constant(bool),
    Circuit {
        /// Circuit over the free variables, renumbered `1..=m` in order.
        circuit: ComparatorCircuit,
        /// `wire_map[i]` is the original (1-based) wire of new wire `i + 1`.
        wire_map: Vec<usize>,
    },
}

impl RestrictedResult {
    pub fn num_wires(&self) -> usize {
        match self {
            RestrictedResult::Constant(_) => 0,
            RestrictedResult::Circuit { circuit, .. } => circuit.num_wires(),
        }
    }

    pub fn num_gates(&self) -> usize {
        match self {
            RestrictedResult::Constant(_) => 0,
            RestrictedResult::Circuit { circuit, .. } => circuit.num_gates(),
        }
    }

    /// Truth table over `num_free` variables.
    pub fn truth_table(&self, num_free: usize) -> Result<TruthTable> {
        match self {
            RestrictedResult::Constant(b) => TruthTable::from_fn(num_free, |_| *b),
            RestrictedResult::Circuit { circuit, .. } => circuit.truth_table(),
        }
    }

    /// The result as a circuit over `num_free` variables; constants become a
    /// two-wire `x1 ∧ ¬x1` / `x1 ∨ ¬x1` gadget.
    pub fn into_circuit(self, num_free: usize) -> Result<ComparatorCircuit> {
        match self {
            RestrictedResult::Constant(b) => ComparatorCircuit::constant(num_free, b),
            RestrictedResult::Circuit { circuit, .. } => Ok(circuit),
        }
    }
}

/// Tracks which physical wire each original wire reference currently
/// denotes, so exchanging two wires in all later gates is O(1).
struct WirePermutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl WirePermutation {
    fn identity(n: usize) -> Self {
        WirePermutation {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    fn get(&self, w: usize) -> usize {
        self.forward[w]
    }

    /// Exchanges the physical wires `a` and `b` for every later reference.
    fn exchange(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.inverse[a], self.inverse[b]);
        self.forward[ra] = b;
        self.forward[rb] = a;
        self.inverse.swap(a, b);
    }
}

pub fn apply_restriction(circuit: &ComparatorCircuit, rho: &Restriction) -> Result<RestrictedResult> {
    if rho.len() != circuit.num_vars() {
        return Err(Error::Dimension {
            expected: circuit.num_vars(),
            got: rho.len(),
        });
    }
    let wires = circuit.wires();
    let mut constant: Vec<Option<bool>> = wires
        .iter()
        .map(|lit| rho.get(lit.var).map(|v| v ^ lit.negated))
        .collect();
    let mut perm = WirePermutation::identity(wires.len());
    let mut kept = Vec::with_capacity(circuit.num_gates());

    for g in circuit.gates() {
        let a = perm.get(g.and_wire - 1);
        let b = perm.get(g.or_wire - 1);
        match (constant[a], constant[b]) {
            (Some(u), Some(w)) => {
                constant[a] = Some(u & w);
                constant[b] = Some(u | w);
            }
            (Some(false), None) | (None, Some(true)) => {}
            (Some(true), None) | (None, Some(false)) => perm.exchange(a, b),
            (None, None) => kept.push((a, b)),
        }
    }
    let out = perm.get(circuit.output() - 1);
    if let Some(v) = constant[out] {
        return Ok(RestrictedResult::Constant(v));
    }

    let free_vars = rho.free_vars();
    let mut var_rank = vec![0usize; circuit.num_vars() + 1];
    for (r, &v) in free_vars.iter().enumerate() {
        var_rank[v] = r + 1;
    }
    let mut new_index = vec![0usize; wires.len()];
    let mut new_wires = Vec::new();
    let mut wire_map = Vec::new();
    for (i, lit) in wires.iter().enumerate() {
        let live = rho.get(lit.var).is_none();
        // swaps move values between wires, never constant markers
        assert_eq!(live, constant[i].is_none(), "constant marker on a live wire");
        if live {
            new_wires.push(Literal {
                var: var_rank[lit.var],
                negated: lit.negated,
            });
            wire_map.push(i + 1);
            new_index[i] = new_wires.len();
        }
    }
    let gates = kept
        .into_iter()
        .map(|(a, b)| Gate::new(new_index[a], new_index[b]))
        .collect();
    let circuit = ComparatorCircuit::from_parts(free_vars.len(), new_wires, gates, new_index[out]);
    Ok(RestrictedResult::Circuit { circuit, wire_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::random_circuit;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn merge_fills_free_positions() {
        let rho: Restriction = "*0*".parse().unwrap();
        assert_eq!(rho.merge(&[true, true]).unwrap(), [true, false, true]);
        let free = Restriction::free(3);
        assert_eq!(free.merge(&[true, false, true]).unwrap(), [true, false, true]);
        let total = Restriction::total(&[false, true]);
        assert_eq!(total.merge(&[]).unwrap(), [false, true]);
        assert!(rho.merge(&[true]).is_err());
    }

    #[test]
    fn parse_fixings() {
        let rho = Restriction::parse_fixings(4, "x1=0, x3=1").unwrap();
        assert_eq!(rho.to_string(), "0*1*");
        assert!(Restriction::parse_fixings(2, "x3=0").is_err());
        assert!(Restriction::parse_fixings(2, "x1=2").is_err());
        assert!(Restriction::parse_fixings(2, "x1=0,x1=1").is_err());
        assert!(Restriction::parse_fixings(2, "~x1=0").is_err());
        assert_eq!(Restriction::parse_fixings(2, "").unwrap(), Restriction::free(2));
    }

    #[test]
    fn selection_view_agrees() {
        let rho = Restriction::from_selection(&[true, false, false], &[true, true, false]).unwrap();
        assert_eq!(rho.to_string(), "*10");
        assert_eq!(rho.selection(), [true, false, false]);
    }

    #[test]
    fn free_restriction_is_identity() {
        for seed in 0..20 {
            let c = random_circuit(5, 6, 15, seed).unwrap();
            match apply_restriction(&c, &Restriction::free(5)).unwrap() {
                RestrictedResult::Circuit { circuit, wire_map } => {
                    assert_eq!(circuit, c);
                    assert_eq!(wire_map, (1..=6).collect::<Vec<_>>());
                }
                RestrictedResult::Constant(_) => panic!("free restriction folded to a constant"),
            }
        }
    }

    #[test]
    fn total_restriction_is_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..50 {
            let c = random_circuit(6, 5, 12, seed).unwrap();
            let beta: Vec<bool> = (0..6).map(|_| rng.gen()).collect();
            let r = apply_restriction(&c, &Restriction::total(&beta)).unwrap();
            assert_eq!(r, RestrictedResult::Constant(c.evaluate(&beta).unwrap()));
        }
    }

    #[test]
    fn length_mismatch() {
        let c = ComparatorCircuit::parity_witness();
        assert!(apply_restriction(&c, &Restriction::free(3)).is_err());
    }

    #[test]
    fn parity_restricted_to_one_variable() {
        let c = ComparatorCircuit::parity_witness();
        for v in [false, true] {
            let rho = Restriction::new(vec![Some(v), None]);
            let r = apply_restriction(&c, &rho).unwrap();
            assert_eq!(r.num_wires(), 2);
            let tt = r.truth_table(1).unwrap();
            assert_eq!((tt.get(0), tt.get(1)), (v, !v));
        }
    }

    #[test]
    fn slice_matches_merge() {
        let f = random_circuit(5, 5, 10, 9).unwrap().truth_table().unwrap();
        let rho: Restriction = "1*0**".parse().unwrap();
        let s = rho.slice(&f).unwrap();
        for z in 0..8 {
            let zb: Vec<bool> = (0..3).map(|j| (z >> j) & 1 == 1).collect();
            let full = rho.merge(&zb).unwrap();
            assert_eq!(s.get(z), f.get(crate::circuit::input_to_index(&full)));
        }
    }
}
