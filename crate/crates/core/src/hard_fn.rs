//! The generalized Andreev function and its code.
//!
//! `A_k(x, y) = Enc(x)[α(y)]`, where `Enc` maps `n` message bits to a
//! codeword of length `2^k` and `α(y) ∈ {0,1}^k` collects the parities of
//! `k` blocks of `y`.
//!
//! `Enc` is Reed–Solomon over GF(2^m), `m = k/2`, concatenated with the
//! Hadamard code: the message is cut into `⌈n/m⌉` field coefficients of a
//! polynomial `P_x`, and position `z = (z1, z2)` of the codeword is the inner
//! product `⟨P_x(z1), z2⟩` over GF(2). Positions are integers in `0..2^k`
//! with `z1` in the low `m` bits and `z2` in the high `m` bits. A selector
//! `α = (α_1, …, α_k)` addresses position `Σ α_j·2^(j-1)`.

use num_rational::Ratio;

use crate::circuit::ComparatorCircuit;
use crate::error::{guard, Error, Result};
use crate::gf::Field;
use crate::sat::BlockPartition;
use crate::truth_table::{TruthTable, MAX_TRUTH_TABLE_VARS};

/// Limits for the all-pairs distance computation.
pub const MAX_DISTANCE_MESSAGE_BITS: usize = 10;
pub const MAX_DISTANCE_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    n: usize,
    k: usize,
    field: Field,
}

impl CodeParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("message length n must be positive"));
        }
        if k < 2 || !k.is_multiple_of(2) {
            return Err(Error::invalid(format!("codeword exponent k = {k} must be even and at least 2")));
        }
        let field = Field::new((k / 2) as u32)?;
        Ok(CodeParams { n, k, field })
    }

    pub fn message_bits(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `m = k/2`.
    pub fn field_log(&self) -> usize {
        self.k / 2
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of polynomial coefficients, `⌈n/m⌉`.
    pub fn rs_degree(&self) -> usize {
        self.n.div_ceil(self.field_log())
    }

    pub fn codeword_len(&self) -> usize {
        1 << self.k
    }

    /// Whether `2^m ≥ ⌈n/m⌉`, the regime where distinct messages have
    /// codewords at relative distance at least `1/2 - ⌈n/m⌉/2^m`.
    pub fn in_distance_regime(&self) -> bool {
        self.rs_degree() as u64 <= self.field.order()
    }

    /// `1/2 - ⌈n/m⌉/2^m`.
    pub fn distance_bound(&self) -> f64 {
        0.5 - self.rs_degree() as f64 / self.field.order() as f64
    }

    /// Shape of the list-decoding radius, `1/2 - n/2^(k/2)` (constants omitted).
    pub fn zeta_shape(&self) -> f64 {
        0.5 - self.n as f64 / self.field.order() as f64
    }

    /// Shape of the list size, `2^(k/2)/n` (constants omitted).
    pub fn list_size_shape(&self) -> f64 {
        self.field.order() as f64 / self.n as f64
    }

    /// Field coefficients of `P_x`; bit `i·m + j` of `x` is bit `j` of coefficient `i`.
    pub fn coefficients(&self, x: &[bool]) -> Result<Vec<u32>> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        let m = self.field_log();
        Ok(x.chunks(m)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (j, &b)| acc | (u32::from(b) << j))
            })
            .collect())
    }

    fn bit_from_coefficients(&self, coeffs: &[u32], position: usize) -> bool {
        let m = self.field_log();
        let z1 = (position as u32) & self.field.mask();
        let z2 = (position >> m) as u32;
        (self.field.eval_poly(coeffs, z1) & z2).count_ones() % 2 == 1
    }

    /// Bit `position` of `Enc(x)`.
    pub fn enc_bit(&self, x: &[bool], position: usize) -> Result<bool> {
        if position >= self.codeword_len() {
            return Err(Error::invalid(format!(
                "position {position} outside a codeword of length {}",
                self.codeword_len()
            )));
        }
        let coeffs = self.coefficients(x)?;
        Ok(self.bit_from_coefficients(&coeffs, position))
    }

    /// The whole codeword as a table over `k` index bits.
    pub fn codeword(&self, x: &[bool]) -> Result<TruthTable> {
        guard("codeword index bits", self.k, MAX_TRUTH_TABLE_VARS)?;
        let coeffs = self.coefficients(x)?;
        TruthTable::from_fn(self.k, |z| self.bit_from_coefficients(&coeffs, z))
    }
}

/// Parities of the `k` consecutive blocks of `y`; requires `k | |y|`.
pub fn alpha(y: &[bool], k: usize) -> Result<Vec<bool>> {
    if k == 0 || !y.len().is_multiple_of(k) {
        return Err(Error::invalid(format!("k = {k} must divide the selector length {}", y.len())));
    }
    let size = y.len() / k;
    Ok(y.chunks(size).map(|b| b.iter().fold(false, |acc, &v| acc ^ v)).collect())
}

/// `B_j` = the `j`-th variable of every part, for a partition into parts of equal size `k`.
pub fn selector_sets(partition: &BlockPartition) -> Result<Vec<Vec<usize>>> {
    let k = partition
        .blocks()
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::invalid("empty partition"))?;
    if partition.blocks().iter().any(|b| b.len() != k) {
        return Err(Error::invalid("selector partitions need parts of equal size"));
    }
    Ok((0..k)
        .map(|j| partition.blocks().iter().map(|part| part[j]).collect())
        .collect())
}

/// Parities of `y` over the sets `B_1, …, B_k` of [`selector_sets`].
pub fn alpha_partitioned(y: &[bool], partition: &BlockPartition) -> Result<Vec<bool>> {
    if y.len() != partition.num_vars() {
        return Err(Error::Dimension {
            expected: partition.num_vars(),
            got: y.len(),
        });
    }
    Ok(selector_sets(partition)?
        .iter()
        .map(|set| set.iter().fold(false, |acc, &v| acc ^ y[v - 1]))
        .collect())
}

/// Codeword position addressed by a selector, `Σ α_j·2^(j-1)`.
pub fn selector_position(alpha: &[bool]) -> usize {
    crate::circuit::input_to_index(alpha)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Selector {
    Consecutive,
    Partitioned(Vec<Vec<usize>>),
}

/// `A_k` (consecutive selector blocks) or `A_{S,k}` (selector sets from a partition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Andreev {
    params: CodeParams,
    selector: Selector,
}

impl Andreev {
    /// `A_k` on `2n` inputs; needs `k | n`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if !n.is_multiple_of(k.max(1)) {
            return Err(Error::invalid(format!("k = {k} must divide n = {n}")));
        }
        Ok(Andreev {
            params: CodeParams::new(n, k)?,
            selector: Selector::Consecutive,
        })
    }

    /// `A_{S,k}` for a partition of the `n` selector variables into parts of size `k`.
    pub fn with_partition(partition: &BlockPartition) -> Result<Self> {
        let sets = selector_sets(partition)?;
        Ok(Andreev {
            params: CodeParams::new(partition.num_vars(), sets.len())?,
            selector: Selector::Partitioned(sets),
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn selector(&self, y: &[bool]) -> Result<Vec<bool>> {
        if y.len() != self.params.n {
            return Err(Error::Dimension {
                expected: self.params.n,
                got: y.len(),
            });
        }
        match &self.selector {
            Selector::Consecutive => alpha(y, self.params.k),
            Selector::Partitioned(sets) => Ok(sets
                .iter()
                .map(|set| set.iter().fold(false, |acc, &v| acc ^ y[v - 1]))
                .collect()),
        }
    }

    pub fn eval(&self, x: &[bool], y: &[bool]) -> Result<bool> {
        let a = self.selector(y)?;
        self.params.enc_bit(x, selector_position(&a))
    }

    /// Table over `2n` variables: `x_i` is variable `i`, `y_i` is variable `n + i`.
    pub fn truth_table(&self) -> Result<TruthTable> {
        let n = self.params.n;
        guard("Andreev truth-table variables", 2 * n, MAX_TRUTH_TABLE_VARS)?;
        let positions = self.selector_positions()?;
        let mut tt = TruthTable::zeros(2 * n)?;
        for xi in 0..(1usize << n) {
            let x = crate::circuit::index_to_input(xi, n);
            let word = self.params.codeword(&x)?;
            for (yi, &pos) in positions.iter().enumerate() {
                if word.get(pos) {
                    tt.set(xi | (yi << n), true);
                }
            }
        }
        Ok(tt)
    }

    /// Table of `y ↦ A(x, y)` for a fixed message `x`.
    pub fn fixed_message_table(&self, x: &[bool]) -> Result<TruthTable> {
        let word = self.params.codeword(x)?;
        let positions = self.selector_positions()?;
        TruthTable::from_fn(self.params.n, |yi| word.get(positions[yi]))
    }

    fn selector_positions(&self) -> Result<Vec<usize>> {
        let n = self.params.n;
        guard("selector variables", n, MAX_TRUTH_TABLE_VARS)?;
        (0..(1usize << n))
            .map(|yi| {
                self.selector(&crate::circuit::index_to_input(yi, n))
                    .map(|a| selector_position(&a))
            })
            .collect()
    }
}

/// Exact fraction of inputs on which `circuit` agrees with `f`.
pub fn correlation(circuit: &ComparatorCircuit, f: &TruthTable) -> Result<Ratio<u64>> {
    if circuit.num_vars() != f.num_vars() {
        return Err(Error::Dimension {
            expected: f.num_vars(),
            got: circuit.num_vars(),
        });
    }
    let agree = circuit.truth_table()?.agreement(f)?;
    Ok(Ratio::new(agree, f.len() as u64))
}

/// Minimum relative Hamming distance over all pairs of distinct messages.
pub fn code_min_distance(params: &CodeParams) -> Result<Ratio<u64>> {
    guard("message bits for all-pairs distance", params.n, MAX_DISTANCE_MESSAGE_BITS)?;
    guard("codeword exponent for all-pairs distance", params.k, MAX_DISTANCE_K)?;
    let words: Vec<TruthTable> = (0..(1usize << params.n))
        .map(|xi| params.codeword(&crate::circuit::index_to_input(xi, params.n)))
        .collect::<Result<_>>()?;
    let len = params.codeword_len() as u64;
    let mut best = u64::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let d = len - a.agreement(b)?;
            best = best.min(d);
        }
    }
    if best == u64::MAX {
        return Err(Error::invalid("need at least two messages"));
    }
    Ok(Ratio::new(best, len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits(v: &[u8]) -> Vec<bool> {
        v.iter().map(|&b| b == 1).collect()
    }

    #[test]
    fn params_validation() {
        assert!(CodeParams::new(8, 3).is_err());
        assert!(CodeParams::new(8, 0).is_err());
        assert!(CodeParams::new(0, 4).is_err());
        let p = CodeParams::new(8, 8).unwrap();
        assert_eq!(p.field_log(), 4);
        assert_eq!(p.rs_degree(), 2);
        assert!(p.in_distance_regime());
        assert!(!CodeParams::new(6, 2).unwrap().in_distance_regime());
    }

    #[test]
    fn zero_message_and_zero_inner_index() {
        let p = CodeParams::new(8, 8).unwrap();
        let zero = vec![false; 8];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for z in 0..256 {
            assert!(!p.enc_bit(&zero, z).unwrap());
        }
        for _ in 0..50 {
            let x: Vec<bool> = (0..8).map(|_| rng.gen()).collect();
            for z1 in 0..16 {
                // z2 = 0 occupies the high half of the position
                assert!(!p.enc_bit(&x, z1).unwrap());
            }
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&[false; 6], 3).unwrap(), [false; 3]);
        assert_eq!(alpha(&bits(&[1, 0, 0, 0, 0, 0]), 3).unwrap(), bits(&[1, 0, 0]));
        assert_eq!(alpha(&bits(&[1, 0, 1, 1]), 2).unwrap(), bits(&[1, 0]));
        assert!(alpha(&[false; 5], 2).is_err());
    }

    #[test]
    fn alpha_partitioned_examples() {
        let p = BlockPartition::from_blocks(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(selector_sets(&p).unwrap(), vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(alpha_partitioned(&bits(&[1, 1, 0, 1]), &p).unwrap(), bits(&[1, 0]));
        assert_eq!(alpha_partitioned(&[false; 4], &p).unwrap(), [false; 2]);
        let uneven = BlockPartition::from_blocks(3, vec![vec![1, 2], vec![3]]).unwrap();
        assert!(alpha_partitioned(&[false; 3], &uneven).is_err());
    }

    #[test]
    fn consecutive_parts_give_interleaved_selector() {
        // parts {1,2,3},{4,5,6} ⇒ B_j = {j, j+3}
        let parts = BlockPartition::consecutive(6, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let y: Vec<bool> = (0..6).map(|_| rng.gen()).collect();
            let want: Vec<bool> = (0..3).map(|j| y[j] ^ y[j + 3]).collect();
            assert_eq!(alpha_partitioned(&y, &parts).unwrap(), want);
        }
    }

    #[test]
    fn zero_message_gives_zero_function() {
        let a = Andreev::new(4, 2).unwrap();
        for yi in 0..16 {
            let y = crate::circuit::index_to_input(yi, 4);
            assert!(!a.eval(&[false; 4], &y).unwrap());
        }
    }

    #[test]
    fn truth_table_matches_pointwise_evaluation() {
        let a = Andreev::new(6, 2).unwrap();
        let tt = a.truth_table().unwrap();
        for idx in 0..(1 << 12) {
            let x = crate::circuit::index_to_input(idx & 63, 6);
            let y = crate::circuit::index_to_input(idx >> 6, 6);
            assert_eq!(tt.get(idx), a.eval(&x, &y).unwrap());
        }
        let x = bits(&[1, 0, 1, 1, 0, 1]);
        let fixed = a.fixed_message_table(&x).unwrap();
        for yi in 0..64 {
            assert_eq!(fixed.get(yi), tt.get(0b101101 | (yi << 6)));
        }
    }

    #[test]
    fn flipping_within_a_block_follows_its_parity() {
        let a = Andreev::new(6, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let x: Vec<bool> = (0..6).map(|_| rng.gen()).collect();
            let y: Vec<bool> = (0..6).map(|_| rng.gen()).collect();
            let base = a.eval(&x, &y).unwrap();
            // flipping two variables of block 1 keeps its parity
            let mut y2 = y.clone();
            y2[0] ^= true;
            y2[2] ^= true;
            assert_eq!(a.eval(&x, &y2).unwrap(), base);
            // one flip moves the selector to the neighbouring codeword position
            let mut y1 = y.clone();
            y1[1] ^= true;
            let mut al = alpha(&y, 2).unwrap();
            al[0] ^= true;
            assert_eq!(a.eval(&x, &y1).unwrap(), a.params().enc_bit(&x, selector_position(&al)).unwrap());
        }
    }

    #[test]
    fn correlation_extremes() {
        let c = ComparatorCircuit::parity_witness();
        let f = c.truth_table().unwrap();
        assert_eq!(correlation(&c, &f).unwrap(), Ratio::from_integer(1));
        assert_eq!(correlation(&c, &f.complement()).unwrap(), Ratio::from_integer(0));
        assert!(correlation(&c, &TruthTable::zeros(3).unwrap()).is_err());
    }

    #[test]
    fn single_coefficient_distance_is_one_half() {
        let p = CodeParams::new(4, 8).unwrap();
        assert_eq!(p.rs_degree(), 1);
        assert_eq!(code_min_distance(&p).unwrap(), Ratio::new(1, 2));
    }

    #[test]
    fn distance_guards() {
        assert!(code_min_distance(&CodeParams::new(11, 8).unwrap()).unwrap_err().is_guard());
        assert!(code_min_distance(&CodeParams::new(4, 12).unwrap()).unwrap_err().is_guard());
    }
}
