//! Useless-gate detection and removal.
//!
//! A gate is useless when, over all inputs, its in-values never show one of
//! the two "unsorted" pairs. If `(1,0)` never occurs the gate acts as the
//! identity (TYPE-1) and is simply deleted. If `(0,1)` never occurs it acts
//! as a swap (TYPE-2) and is deleted after exchanging its two wires in every
//! later gate and in the output designation. Repeating this until every gate
//! is useful leaves at most `ℓ(ℓ-1)/2` gates on `ℓ` wires.

use crate::circuit::{ComparatorCircuit, Gate, WireTable};
use crate::error::{guard, Error, Result};

/// Largest arity for which uselessness is decided exhaustively.
pub const MAX_SIMPLIFY_VARS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateProfile {
    /// In-values `(0,1)` occur on some input.
    pub seen_01: bool,
    /// In-values `(1,0)` occur on some input.
    pub seen_10: bool,
}

impl GateProfile {
    pub fn merge(self, other: GateProfile) -> GateProfile {
        GateProfile {
            seen_01: self.seen_01 | other.seen_01,
            seen_10: self.seen_10 | other.seen_10,
        }
    }

    /// Ties (only `(0,0)`/`(1,1)` seen) resolve to TYPE-1 so removal needs no rewiring.
    pub fn classify(self) -> GateClass {
        match (self.seen_01, self.seen_10) {
            (true, true) => GateClass::Useful,
            (_, false) => GateClass::Useless(UselessType::Type1),
            (false, true) => GateClass::Useless(UselessType::Type2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UselessType {
    /// Outputs equal inputs.
    Type1,
    /// Outputs are the inputs swapped.
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateClass {
    Useful,
    Useless(UselessType),
}

pub fn gate_profile(circuit: &ComparatorCircuit, gate_index: usize) -> Result<GateProfile> {
    guard("simplify variables", circuit.num_vars(), MAX_SIMPLIFY_VARS)?;
    let gates = circuit.gates();
    if gate_index >= gates.len() {
        return Err(Error::invalid(format!(
            "gate index {gate_index} out of range for {} gates",
            gates.len()
        )));
    }
    let mut table = WireTable::new(circuit.num_vars(), circuit.wires());
    for g in &gates[..gate_index] {
        table.apply(*g);
    }
    let g = gates[gate_index];
    let (seen_01, seen_10) = table.pair_profile(g.and_wire, g.or_wire);
    Ok(GateProfile { seen_01, seen_10 })
}

/// Classifies gate `gate_index` (0-based position in the gate list).
pub fn classify_gate(circuit: &ComparatorCircuit, gate_index: usize) -> Result<GateClass> {
    gate_profile(circuit, gate_index).map(GateProfile::classify)
}

/// Deletes gate `gate_index`, rewiring later gates and the output for TYPE-2.
///
/// The caller is responsible for `kind` being correct; removing a useful gate
/// changes the computed function.
pub fn remove_gate(circuit: &ComparatorCircuit, gate_index: usize, kind: UselessType) -> Result<ComparatorCircuit> {
    if gate_index >= circuit.num_gates() {
        return Err(Error::invalid(format!(
            "gate index {gate_index} out of range for {} gates",
            circuit.num_gates()
        )));
    }
    let (num_vars, wires, mut gates, mut output) = circuit.clone().into_parts();
    remove_gate_in_place(&mut gates, &mut output, gate_index, kind);
    Ok(ComparatorCircuit::from_parts(num_vars, wires, gates, output))
}

pub(crate) fn remove_gate_in_place(gates: &mut Vec<Gate>, output: &mut usize, index: usize, kind: UselessType) {
    let removed = gates.remove(index);
    if kind == UselessType::Type2 {
        let (a, b) = (removed.and_wire, removed.or_wire);
        for g in &mut gates[index..] {
            *g = g.swap_wires(a, b);
        }
        if *output == a {
            *output = b;
        } else if *output == b {
            *output = a;
        }
    }
}

/// Removes the leftmost useless gate until every gate is useful.
///
/// Removing gate `i` leaves the prefix before `i` untouched, so a single
/// left-to-right sweep that re-examines position `i` after each removal
/// finds exactly the gates repeated leftmost-first removal would.
pub fn simplify_full(circuit: &ComparatorCircuit) -> Result<ComparatorCircuit> {
    Ok(simplify_with_stats(circuit)?.0)
}

/// Like [`simplify_full`] but also returns the number of removals.
pub fn simplify_with_stats(circuit: &ComparatorCircuit) -> Result<(ComparatorCircuit, usize)> {
    guard("simplify variables", circuit.num_vars(), MAX_SIMPLIFY_VARS)?;
    let (num_vars, wires, mut gates, mut output) = circuit.clone().into_parts();
    let mut table = WireTable::new(num_vars, &wires);
    let mut removed = 0;
    let mut i = 0;
    while i < gates.len() {
        let g = gates[i];
        let (seen_01, seen_10) = table.pair_profile(g.and_wire, g.or_wire);
        match (GateProfile { seen_01, seen_10 }).classify() {
            GateClass::Useful => {
                table.apply(g);
                i += 1;
            }
            GateClass::Useless(kind) => {
                remove_gate_in_place(&mut gates, &mut output, i, kind);
                removed += 1;
            }
        }
    }
    Ok((ComparatorCircuit::from_parts(num_vars, wires, gates, output), removed))
}

/// The gate bound `ℓ(ℓ-1)/2` for circuits whose gates are all useful.
pub fn useful_gate_bound(num_wires: usize) -> usize {
    num_wires * num_wires.saturating_sub(1) / 2
}
