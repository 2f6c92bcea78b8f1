//! The comparator-circuit representation.
//!
//! A circuit is a list of wires, each initialised from a literal, an ordered
//! list of gates and a designated output wire. A gate `(a, b)` stores
//! `a ∧ b` on wire `a` and `a ∨ b` on wire `b`. Wire and variable indices are
//! 1-based throughout the public API.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{guard, Error, Result};
use crate::truth_table::{tail_mask, words_for, TruthTable, MAX_TRUTH_TABLE_VARS};

/// Format tag written on the first line of every serialized circuit.
pub const FORMAT_TAG: &str = "ccv1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn value(self, input: &[bool]) -> bool {
        input[self.var - 1] ^ self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

impl FromStr for Literal {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (negated, rest) = match s.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let digits = rest
            .strip_prefix('x')
            .ok_or_else(|| format!("literal {s:?} must look like x<i> or ~x<i>"))?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("literal {s:?} has no variable index"));
        }
        let var = digits
            .parse::<usize>()
            .map_err(|e| format!("literal {s:?}: {e}"))?;
        if var == 0 {
            return Err(format!("literal {s:?}: variables are numbered from 1"));
        }
        Ok(Literal { var, negated })
    }
}

/// A comparator gate over two distinct wires (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gate {
    /// Receives the conjunction.
    pub and_wire: usize,
    /// Receives the disjunction.
    pub or_wire: usize,
}

impl Gate {
    pub fn new(and_wire: usize, or_wire: usize) -> Self {
        Gate { and_wire, or_wire }
    }

    /// The gate with its two wires exchanged wherever they equal `a` or `b`.
    pub(crate) fn swap_wires(self, a: usize, b: usize) -> Gate {
        let sw = |w: usize| {
            if w == a {
                b
            } else if w == b {
                a
            } else {
                w
            }
        };
        Gate::new(sw(self.and_wire), sw(self.or_wire))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComparatorCircuit {
    num_vars: usize,
    wires: Vec<Literal>,
    gates: Vec<Gate>,
    output: usize,
}

impl ComparatorCircuit {
    pub fn new(num_vars: usize, wires: Vec<Literal>, gates: Vec<Gate>, output: usize) -> Result<Self> {
        if wires.is_empty() {
            return Err(Error::invalid("a circuit needs at least one wire"));
        }
        for (i, lit) in wires.iter().enumerate() {
            if lit.var == 0 || lit.var > num_vars {
                return Err(Error::invalid(format!(
                    "wire {} is labelled {lit}, outside x1..x{num_vars}",
                    i + 1
                )));
            }
        }
        let l = wires.len();
        for (i, g) in gates.iter().enumerate() {
            check_gate(*g, l).map_err(|m| Error::invalid(format!("gate {}: {m}", i + 1)))?;
        }
        if output == 0 || output > l {
            return Err(Error::invalid(format!("output wire {output} is outside 1..{l}")));
        }
        Ok(ComparatorCircuit {
            num_vars,
            wires,
            gates,
            output,
        })
    }

    /// Caller guarantees validity; used after transformations that preserve it.
    pub(crate) fn from_parts(num_vars: usize, wires: Vec<Literal>, gates: Vec<Gate>, output: usize) -> Self {
        debug_assert!(Self::new(num_vars, wires.clone(), gates.clone(), output).is_ok());
        ComparatorCircuit {
            num_vars,
            wires,
            gates,
            output,
        }
    }

    /// Two-wire circuit computing the constant `value` (`x1 ∧ ¬x1` or `x1 ∨ ¬x1`).
    pub fn constant(num_vars: usize, value: bool) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::invalid("a constant circuit needs at least one variable"));
        }
        let output = if value { 2 } else { 1 };
        Self::new(
            num_vars,
            vec![Literal::pos(1), Literal::neg(1)],
            vec![Gate::new(1, 2)],
            output,
        )
    }

    /// Two-variable parity on four wires: `[x1, x2, ~x1, ~x2]` with gates
    /// `(1,2) (3,4) (2,4)`; wire 2 ends up holding `(x1 ∨ x2) ∧ (¬x1 ∨ ¬x2)`.
    pub fn parity_witness() -> Self {
        Self::from_parts(
            2,
            vec![Literal::pos(1), Literal::pos(2), Literal::neg(1), Literal::neg(2)],
            vec![Gate::new(1, 2), Gate::new(3, 4), Gate::new(2, 4)],
            2,
        )
    }

    /// [`Self::parity_witness`] with a fourth gate `(1,3)` that never touches the output.
    pub fn parity_witness_padded() -> Self {
        let mut c = Self::parity_witness();
        c.gates.push(Gate::new(1, 3));
        c
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn wires(&self) -> &[Literal] {
        &self.wires
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn num_wires(&self) -> usize {
        self.wires.len()
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    /// Wires touched by at least one gate.
    pub fn non_trivial_wires(&self) -> usize {
        let mut touched = vec![false; self.wires.len()];
        for g in &self.gates {
            touched[g.and_wire - 1] = true;
            touched[g.or_wire - 1] = true;
        }
        touched.into_iter().filter(|&t| t).count()
    }

    /// Number of wires labelled by each variable (index 0 is variable 1).
    pub fn wires_per_variable(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_vars];
        for lit in &self.wires {
            counts[lit.var - 1] += 1;
        }
        counts
    }

    pub fn evaluate(&self, input: &[bool]) -> Result<bool> {
        if input.len() != self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                got: input.len(),
            });
        }
        let mut values: Vec<bool> = self.wires.iter().map(|l| l.value(input)).collect();
        for g in &self.gates {
            let (a, b) = (g.and_wire - 1, g.or_wire - 1);
            let (u, w) = (values[a], values[b]);
            values[a] = u & w;
            values[b] = u | w;
        }
        Ok(values[self.output - 1])
    }

    /// Evaluates on the input encoded by `index` (variable 1 = bit 0).
    pub fn evaluate_index(&self, index: usize) -> bool {
        let input = index_to_input(index, self.num_vars);
        self.evaluate(&input).expect("input length matches")
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        guard("truth-table variables", self.num_vars, MAX_TRUTH_TABLE_VARS)?;
        let nwords = words_for(self.num_vars);
        let mut scratch = vec![0u64; self.wires.len()];
        let mut out = Vec::with_capacity(nwords);
        for w in 0..nwords {
            for (slot, lit) in scratch.iter_mut().zip(&self.wires) {
                *slot = literal_word(*lit, w);
            }
            for g in &self.gates {
                apply_gate_word(&mut scratch, *g);
            }
            out.push(scratch[self.output - 1]);
        }
        Ok(TruthTable::from_words(self.num_vars, out))
    }

    /// Canonical `ccv1` text.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_ccv1(text)
    }

    pub(crate) fn into_parts(self) -> (usize, Vec<Literal>, Vec<Gate>, usize) {
        (self.num_vars, self.wires, self.gates, self.output)
    }
}

fn check_gate(g: Gate, num_wires: usize) -> std::result::Result<(), String> {
    if g.and_wire == 0 || g.and_wire > num_wires || g.or_wire == 0 || g.or_wire > num_wires {
        return Err(format!(
            "wire index out of range in ({}, {}); circuit has {num_wires} wires",
            g.and_wire, g.or_wire
        ));
    }
    if g.and_wire == g.or_wire {
        return Err(format!("gate connects wire {} to itself", g.and_wire));
    }
    Ok(())
}

pub fn index_to_input(index: usize, num_vars: usize) -> Vec<bool> {
    (0..num_vars).map(|j| (index >> j) & 1 == 1).collect()
}

pub fn input_to_index(input: &[bool]) -> usize {
    input
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | (usize::from(b) << j))
}

const LOW_VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Values of variable `var` (1-based) on the 64 inputs `64·word .. 64·word+63`.
pub(crate) fn variable_word(var: usize, word: usize) -> u64 {
    let j = var - 1;
    if j < 6 {
        LOW_VAR_MASKS[j]
    } else if (word >> (j - 6)) & 1 == 1 {
        u64::MAX
    } else {
        0
    }
}

pub(crate) fn literal_word(lit: Literal, word: usize) -> u64 {
    let v = variable_word(lit.var, word);
    if lit.negated {
        !v
    } else {
        v
    }
}

#[inline]
pub(crate) fn apply_gate_word(values: &mut [u64], g: Gate) {
    let (a, b) = (g.and_wire - 1, g.or_wire - 1);
    let (u, w) = (values[a], values[b]);
    values[a] = u & w;
    values[b] = u | w;
}

/// Per-wire values over every input of `num_vars` variables, one packed row
/// per wire. Bits beyond `2^n` in the last word are garbage and must be
/// masked by readers.
#[derive(Debug, Clone)]
pub(crate) struct WireTable {
    pub(crate) num_vars: usize,
    pub(crate) rows: Vec<Vec<u64>>,
}

impl WireTable {
    pub(crate) fn new(num_vars: usize, labels: &[Literal]) -> Self {
        let nwords = words_for(num_vars);
        let rows = labels
            .iter()
            .map(|&lit| (0..nwords).map(|w| literal_word(lit, w)).collect())
            .collect();
        WireTable { num_vars, rows }
    }

    pub(crate) fn apply(&mut self, g: Gate) {
        let (a, b) = (g.and_wire - 1, g.or_wire - 1);
        let (lo, hi) = (a.min(b), a.max(b));
        let (left, right) = self.rows.split_at_mut(hi);
        let (ra, rb) = if a < b {
            (&mut left[lo], &mut right[0])
        } else {
            (&mut right[0], &mut left[lo])
        };
        for (u, w) in ra.iter_mut().zip(rb.iter_mut()) {
            let (x, y) = (*u, *w);
            *u = x & y;
            *w = x | y;
        }
    }

    /// Whether the pairs (0,1) and (1,0) occur as in-values `(wire a, wire b)`.
    pub(crate) fn pair_profile(&self, a: usize, b: usize) -> (bool, bool) {
        let mask = tail_mask(self.num_vars);
        let last = self.rows[0].len() - 1;
        let (mut seen_01, mut seen_10) = (false, false);
        for (i, (&u, &w)) in self.rows[a - 1].iter().zip(&self.rows[b - 1]).enumerate() {
            let m = if i == last { mask } else { u64::MAX };
            seen_01 |= (!u & w & m) != 0;
            seen_10 |= (u & !w & m) != 0;
            if seen_01 && seen_10 {
                break;
            }
        }
        (seen_01, seen_10)
    }

    pub(crate) fn count_ones(&self, wire: usize) -> u64 {
        let mask = tail_mask(self.num_vars);
        let row = &self.rows[wire - 1];
        let last = row.len() - 1;
        row.iter()
            .enumerate()
            .map(|(i, &w)| u64::from((if i == last { w & mask } else { w }).count_ones()))
            .sum()
    }
}

/// Circuit with labels uniform over the `2n` literals, gates uniform over
/// ordered pairs of distinct wires and a uniform output wire.
pub fn random_circuit(num_vars: usize, num_wires: usize, num_gates: usize, seed: u64) -> Result<ComparatorCircuit> {
    if num_vars == 0 {
        return Err(Error::invalid("random circuits need at least one variable"));
    }
    if num_wires == 0 {
        return Err(Error::invalid("random circuits need at least one wire"));
    }
    if num_gates > 0 && num_wires < 2 {
        return Err(Error::invalid("gates need at least two wires"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wires = (0..num_wires)
        .map(|_| Literal {
            var: rng.gen_range(1..=num_vars),
            negated: rng.gen_bool(0.5),
        })
        .collect();
    let gates = (0..num_gates)
        .map(|_| {
            let a = rng.gen_range(1..=num_wires);
            let mut b = rng.gen_range(1..num_wires);
            if b >= a {
                b += 1;
            }
            Gate::new(a, b)
        })
        .collect();
    let output = rng.gen_range(1..=num_wires);
    ComparatorCircuit::new(num_vars, wires, gates, output)
}

impl fmt::Display for ComparatorCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{FORMAT_TAG}")?;
        writeln!(f, "vars {}", self.num_vars)?;
        write!(f, "wires")?;
        for lit in &self.wires {
            write!(f, " {lit}")?;
        }
        writeln!(f)?;
        for g in &self.gates {
            writeln!(f, "gate {} {}", g.and_wire, g.or_wire)?;
        }
        writeln!(f, "output {}", self.output)
    }
}

impl FromStr for ComparatorCircuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ccv1(s)
    }
}

fn parse_index(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("{what} {tok:?} is not a nonnegative integer")))
}

fn parse_ccv1(text: &str) -> Result<ComparatorCircuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let last_line = text.lines().count().max(1);

    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, format!("empty input, expected {FORMAT_TAG:?}")))?;
    if header != FORMAT_TAG {
        return Err(Error::parse(ln, format!("expected header {FORMAT_TAG:?}, found {header:?}")));
    }

    let (ln, vars_line) = lines
        .next()
        .ok_or_else(|| Error::parse(last_line, "missing `vars` line"))?;
    let mut toks = vars_line.split_whitespace();
    if toks.next() != Some("vars") {
        return Err(Error::parse(ln, format!("expected `vars <n>`, found {vars_line:?}")));
    }
    let num_vars = parse_index(ln, toks.next(), "variable count")?;
    if let Some(extra) = toks.next() {
        return Err(Error::parse(ln, format!("unexpected token {extra:?}")));
    }

    let (ln, wires_line) = lines
        .next()
        .ok_or_else(|| Error::parse(last_line, "missing `wires` line"))?;
    let mut toks = wires_line.split_whitespace();
    if toks.next() != Some("wires") {
        return Err(Error::parse(ln, format!("expected `wires <lit>...`, found {wires_line:?}")));
    }
    let mut wires = Vec::new();
    for tok in toks {
        let lit: Literal = tok.parse().map_err(|m| Error::parse(ln, m))?;
        if lit.var > num_vars {
            return Err(Error::parse(ln, format!("literal {lit} exceeds vars {num_vars}")));
        }
        wires.push(lit);
    }
    if wires.is_empty() {
        return Err(Error::parse(ln, "a circuit needs at least one wire"));
    }

    let mut gates = Vec::new();
    let mut output = None;
    for (ln, line) in lines {
        if output.is_some() {
            return Err(Error::parse(ln, format!("content after `output` line: {line:?}")));
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("gate") => {
                let a = parse_index(ln, toks.next(), "wire index")?;
                let b = parse_index(ln, toks.next(), "wire index")?;
                if let Some(extra) = toks.next() {
                    return Err(Error::parse(ln, format!("unexpected token {extra:?}")));
                }
                let g = Gate::new(a, b);
                check_gate(g, wires.len()).map_err(|m| Error::parse(ln, m))?;
                gates.push(g);
            }
            Some("output") => {
                let w = parse_index(ln, toks.next(), "output wire")?;
                if let Some(extra) = toks.next() {
                    return Err(Error::parse(ln, format!("unexpected token {extra:?}")));
                }
                if w == 0 || w > wires.len() {
                    return Err(Error::parse(
                        ln,
                        format!("output wire {w} is outside 1..{}", wires.len()),
                    ));
                }
                output = Some(w);
            }
            _ => {
                return Err(Error::parse(ln, format!("expected `gate` or `output`, found {line:?}")));
            }
        }
    }
    let output = output.ok_or_else(|| Error::parse(last_line, "missing `output` line"))?;
    ComparatorCircuit::new(num_vars, wires, gates, output)
}
