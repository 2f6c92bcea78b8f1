pub mod analysis;
pub mod circuit;
pub mod error;
pub mod gf;
pub mod hard_fn;
pub mod memo;
pub mod restrict;
pub mod sat;
pub mod shrinkage;
pub mod simplify;
pub mod truth_table;

pub use circuit::{random_circuit, ComparatorCircuit, Gate, Literal};
pub use error::{Error, Result};
pub use restrict::{apply_restriction, RestrictedResult, Restriction};
pub use truth_table::TruthTable;
