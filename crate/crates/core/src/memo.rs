//! Memoization tree over useful-gate prefixes for a fixed wire labelling.
//!
//! Every internal node stands for a gate sequence in which each gate is
//! useful with respect to the gates before it. Its children are indexed by
//! the next gate `(a, b)` and by the choice of output wire:
//!
//! * a useful next gate leads to another internal node,
//! * a useless next gate is a leaf recording its type,
//! * an output choice is a leaf storing the satisfying-assignment count of
//!   the prefix circuit read at that wire.
//!
//! Since all-useful circuits on `ℓ` wires have at most `ℓ(ℓ-1)/2` gates,
//! internal nodes sit at depth at most `ℓ(ℓ-1)/2` and leaves one below.
//!
//! Looking up a circuit walks its gates from the root. At a useless leaf the
//! gate is deleted (rewiring later gates for TYPE-2) and the walk continues
//! from the same node with the next gate of the updated list. When the
//! gates run out the output leaf gives the count, and the gates walked form
//! an equivalent all-useful circuit.
//!
//! Children live in `OnceLock` slots, so a lazy tree can be shared by many
//! threads: each slot is computed once and every other reader sees the
//! cached value.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use crate::circuit::{ComparatorCircuit, Gate, Literal, WireTable};
use crate::error::{guard, Error, Result};
use crate::simplify::{remove_gate_in_place, GateProfile, UselessType};

/// Largest number of variables in a memo-tree context.
pub const MAX_CONTEXT_VARS: usize = 20;
/// Largest wire count for eager (fully materialized) trees.
pub const MAX_EAGER_WIRES: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WireContext {
    num_vars: usize,
    labels: Vec<Literal>,
}

impl WireContext {
    pub fn new(num_vars: usize, labels: Vec<Literal>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::invalid("a wire context needs at least one wire"));
        }
        if let Some(l) = labels.iter().find(|l| l.var == 0 || l.var > num_vars) {
            return Err(Error::invalid(format!("label {l} outside x1..x{num_vars}")));
        }
        guard("memo-tree variables", num_vars, MAX_CONTEXT_VARS)?;
        Ok(WireContext { num_vars, labels })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn labels(&self) -> &[Literal] {
        &self.labels
    }

    pub fn num_wires(&self) -> usize {
        self.labels.len()
    }

    /// Depth bound for any path: `ℓ(ℓ-1)/2 + 2`.
    pub fn depth_bound(&self) -> usize {
        crate::simplify::useful_gate_bound(self.num_wires()) + 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Eager,
    Lazy,
}

#[derive(Debug)]
enum Child {
    Internal(Box<Node>),
    Useless(UselessType),
    Output(u64),
}

#[derive(Debug)]
struct Node {
    depth: usize,
    path: Vec<Gate>,
    /// `ℓ²` slots: `(a-1)·ℓ + (b-1)` for gate `(a, b)`, and the diagonal
    /// `(w-1)·ℓ + (w-1)` for output wire `w`.
    slots: Box<[OnceLock<Child>]>,
}

impl Node {
    fn new(depth: usize, path: Vec<Gate>, num_wires: usize) -> Self {
        Node {
            depth,
            path,
            slots: (0..num_wires * num_wires).map(|_| OnceLock::new()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TreeStats {
    pub internal_nodes: u64,
    pub useless_leaves: u64,
    pub output_leaves: u64,
    /// Deepest materialized node (the root has depth 0).
    pub depth: usize,
}

impl TreeStats {
    pub fn total_nodes(&self) -> u64 {
        self.internal_nodes + self.useless_leaves + self.output_leaves
    }

    pub fn csv_header() -> &'static str {
        "internal_nodes,useless_leaves,output_leaves,total_nodes,depth"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.internal_nodes,
            self.useless_leaves,
            self.output_leaves,
            self.total_nodes(),
            self.depth
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lookup {
    pub count: u64,
    /// Equivalent circuit with only useful gates.
    pub simplified: ComparatorCircuit,
    /// Tree slots visited, including the final output leaf.
    pub steps: usize,
}

#[derive(Debug)]
pub struct MemoTree {
    context: WireContext,
    mode: Mode,
    root: Node,
    materialized: AtomicU64,
    lookups: AtomicU64,
    steps: AtomicU64,
}

impl MemoTree {
    pub fn build(context: WireContext, mode: Mode) -> Result<Self> {
        if mode == Mode::Eager {
            guard("eager memo-tree wires", context.num_wires(), MAX_EAGER_WIRES)?;
        }
        let root = Node::new(0, Vec::new(), context.num_wires());
        let tree = MemoTree {
            context,
            mode,
            root,
            materialized: AtomicU64::new(1),
            lookups: AtomicU64::new(0),
            steps: AtomicU64::new(0),
        };
        if mode == Mode::Eager {
            tree.expand(&tree.root);
        }
        Ok(tree)
    }

    pub fn context(&self) -> &WireContext {
        &self.context
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Nodes materialized so far, counting the root.
    pub fn materialized_nodes(&self) -> u64 {
        self.materialized.load(Ordering::Relaxed)
    }

    pub fn lookups(&self) -> u64 {
        self.lookups.load(Ordering::Relaxed)
    }

    pub fn total_steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    fn expand(&self, node: &Node) {
        let l = self.context.num_wires();
        for a in 1..=l {
            for b in 1..=l {
                let key = if a == b { Key::Output(a) } else { Key::Gate(Gate::new(a, b)) };
                if let Child::Internal(child) = self.child(node, key) {
                    self.expand(child);
                }
            }
        }
    }

    fn wire_table(&self, path: &[Gate]) -> WireTable {
        let mut table = WireTable::new(self.context.num_vars, &self.context.labels);
        for g in path {
            table.apply(*g);
        }
        table
    }

    fn child<'a>(&'a self, node: &'a Node, key: Key) -> &'a Child {
        let l = self.context.num_wires();
        let slot = match key {
            Key::Gate(g) => (g.and_wire - 1) * l + (g.or_wire - 1),
            Key::Output(w) => (w - 1) * l + (w - 1),
        };
        node.slots[slot].get_or_init(|| {
            self.materialized.fetch_add(1, Ordering::Relaxed);
            let table = self.wire_table(&node.path);
            match key {
                Key::Output(w) => Child::Output(table.count_ones(w)),
                Key::Gate(g) => {
                    let (seen_01, seen_10) = table.pair_profile(g.and_wire, g.or_wire);
                    match (GateProfile { seen_01, seen_10 }).classify() {
                        crate::simplify::GateClass::Useful => {
                            let mut path = node.path.clone();
                            path.push(g);
                            Child::Internal(Box::new(Node::new(node.depth + 1, path, l)))
                        }
                        crate::simplify::GateClass::Useless(kind) => Child::Useless(kind),
                    }
                }
            }
        })
    }

    /// Satisfying-assignment count and an all-useful equivalent of `circuit`,
    /// whose wires must carry exactly this tree's labels.
    pub fn lookup(&self, circuit: &ComparatorCircuit) -> Result<Lookup> {
        if circuit.num_vars() != self.context.num_vars || circuit.wires() != self.context.labels.as_slice() {
            return Err(Error::invalid("circuit labelling does not match the memo-tree context"));
        }
        let mut gates = circuit.gates().to_vec();
        let mut output = circuit.output();
        let mut node = &self.root;
        let mut steps = 0;
        let count = loop {
            steps += 1;
            if node.depth == gates.len() {
                match self.child(node, Key::Output(output)) {
                    Child::Output(c) => break *c,
                    _ => unreachable!("output slots hold output leaves"),
                }
            }
            match self.child(node, Key::Gate(gates[node.depth])) {
                Child::Internal(next) => node = next,
                Child::Useless(kind) => remove_gate_in_place(&mut gates, &mut output, node.depth, *kind),
                Child::Output(_) => unreachable!("gate slots never hold output leaves"),
            }
        };
        self.lookups.fetch_add(1, Ordering::Relaxed);
        self.steps.fetch_add(steps as u64, Ordering::Relaxed);
        let simplified = ComparatorCircuit::from_parts(
            self.context.num_vars,
            self.context.labels.clone(),
            gates,
            output,
        );
        Ok(Lookup {
            count,
            simplified,
            steps,
        })
    }

    /// Statistics over the materialized part of the tree.
    pub fn stats(&self) -> TreeStats {
        let mut stats = TreeStats::default();
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            stats.internal_nodes += 1;
            stats.depth = stats.depth.max(node.depth);
            for slot in node.slots.iter() {
                match slot.get() {
                    Some(Child::Internal(child)) => stack.push(child),
                    Some(Child::Useless(_)) => {
                        stats.useless_leaves += 1;
                        stats.depth = stats.depth.max(node.depth + 1);
                    }
                    Some(Child::Output(_)) => {
                        stats.output_leaves += 1;
                        stats.depth = stats.depth.max(node.depth + 1);
                    }
                    None => {}
                }
            }
        }
        stats
    }
}

#[derive(Debug, Clone, Copy)]
enum Key {
    Gate(Gate),
    Output(usize),
}
