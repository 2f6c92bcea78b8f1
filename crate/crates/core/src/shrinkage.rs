//! Random and k-wise independent restrictions, shrinkage measurement,
//! case-split recombination and an exact fooling tester.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{ComparatorCircuit, Gate, Literal};
use crate::error::{guard, Error, Result};
use crate::gf::Field;
use crate::restrict::{apply_restriction, RestrictedResult, Restriction};
use crate::simplify::simplify_full;
use crate::truth_table::MAX_TRUTH_TABLE_VARS;

/// Largest arity for shrinkage trials (each trial simplifies its result).
pub const MAX_SHRINKAGE_VARS: usize = 16;
/// Largest case-split set for [`combine_over_cube`].
pub const MAX_CUBE_VARS: usize = 10;
/// Largest seed length and arity for [`fool_test`].
pub const MAX_FOOL_BITS: usize = 24;

/// Characteristic vector of the free coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection(pub Vec<bool>);

impl Selection {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn num_selected(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn with_values(&self, values: &[bool]) -> Result<Restriction> {
        Restriction::from_selection(&self.0, values)
    }
}

/// Each coordinate free independently with probability `p`.
pub fn sample_selection_random(n: usize, p: f64, seed: u64) -> Result<Selection> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_iid(n, p, &mut rng)
}

fn sample_iid(n: usize, p: f64, rng: &mut impl Rng) -> Result<Selection> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(Selection((0..n).map(|_| rng.gen_bool(p)).collect()))
}

/// `k`-wise independent selection with `Pr[σ(i) = 1] = 2^-t`.
///
/// A seed of `k·m` bits holds the coefficients of a polynomial `P` of degree
/// below `k` over GF(2^m). Variable `i` is assigned the field element `i-1`
/// and is free iff the top `t` bits of `P(i-1)` are zero. Values of a random
/// polynomial at `k` distinct points are independent and uniform, which
/// gives exact `k`-wise independence and exact marginals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KWiseSelectionSampler {
    n: usize,
    independence: usize,
    field: Field,
    bias_bits: u32,
}

impl KWiseSelectionSampler {
    pub fn new(n: usize, independence: usize, field_log: u32, bias_bits: u32) -> Result<Self> {
        if independence == 0 {
            return Err(Error::invalid("independence must be at least 1"));
        }
        let field = Field::new(field_log)?;
        if bias_bits > field_log {
            return Err(Error::invalid(format!("bias exponent t = {bias_bits} exceeds m = {field_log}")));
        }
        if n as u64 > field.order() {
            return Err(Error::invalid(format!("n = {n} exceeds the {} field points", field.order())));
        }
        Ok(KWiseSelectionSampler {
            n,
            independence,
            field,
            bias_bits,
        })
    }

    /// Sampler for `p` rounded to the nearest power of 1/2, on the smallest
    /// field holding `n` points and `t` bias bits.
    pub fn for_probability(n: usize, p: f64, independence: usize) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid(format!("k-wise selections need p in (0, 1], got {p}")));
        }
        let t = (-p.log2()).round().max(0.0) as u32;
        let point_bits = usize::BITS - n.saturating_sub(1).leading_zeros();
        let m = point_bits.max(t).max(1);
        Self::new(n, independence, m, t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn independence(&self) -> usize {
        self.independence
    }

    pub fn field_log(&self) -> u32 {
        self.field.degree()
    }

    pub fn bias_bits(&self) -> u32 {
        self.bias_bits
    }

    /// `Pr[σ(i) = 1] = 2^-t`.
    pub fn probability(&self) -> f64 {
        0.5f64.powi(self.bias_bits as i32)
    }

    pub fn seed_len(&self) -> usize {
        self.independence * self.field.degree() as usize
    }

    fn coefficients(&self, seed: &[bool]) -> Result<Vec<u32>> {
        if seed.len() != self.seed_len() {
            return Err(Error::Dimension {
                expected: self.seed_len(),
                got: seed.len(),
            });
        }
        Ok(seed
            .chunks(self.field.degree() as usize)
            .map(|c| c.iter().enumerate().fold(0u32, |acc, (j, &b)| acc | (u32::from(b) << j)))
            .collect())
    }

    pub fn sample(&self, seed: &[bool]) -> Result<Selection> {
        let coeffs = self.coefficients(seed)?;
        let shift = self.field.degree() - self.bias_bits;
        Ok(Selection(
            (0..self.n)
                .map(|i| self.field.eval_poly(&coeffs, i as u32) >> shift == 0)
                .collect(),
        ))
    }

    /// Seed given as the low `seed_len` bits of an integer.
    pub fn sample_index(&self, seed: u128) -> Result<Selection> {
        let bits: Vec<bool> = (0..self.seed_len()).map(|j| (seed >> j) & 1 == 1).collect();
        self.sample(&bits)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionSource {
    Random { p: f64 },
    KWise(KWiseSelectionSampler),
}

impl SelectionSource {
    pub fn probability(&self) -> f64 {
        match self {
            SelectionSource::Random { p } => *p,
            SelectionSource::KWise(s) => s.probability(),
        }
    }

    fn draw(&self, n: usize, rng: &mut impl Rng) -> Result<Selection> {
        match self {
            SelectionSource::Random { p } => sample_iid(n, *p, rng),
            SelectionSource::KWise(s) => {
                if s.n() != n {
                    return Err(Error::Dimension { expected: n, got: s.n() });
                }
                let seed: Vec<bool> = (0..s.seed_len()).map(|_| rng.gen()).collect();
                s.sample(&seed)
            }
        }
    }
}

/// Threshold `2^(3·√(c·log ℓ))·p·ℓ` on the surviving wire count.
pub fn shrinkage_threshold(num_wires: usize, p: f64, c: f64) -> f64 {
    let l = num_wires as f64;
    2f64.powf(3.0 * (c * l.log2()).sqrt()) * p * l
}

/// `√(c / log ℓ)`; taken as 1 when `ℓ ≤ 1`.
pub fn heavy_alpha(num_wires: usize, c: f64) -> f64 {
    let log_l = (num_wires as f64).log2();
    if log_l <= 0.0 {
        1.0
    } else {
        (c / log_l).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub survived_wires: usize,
    pub simplified_gates: usize,
    pub exceeded_threshold: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkageReport {
    pub p: f64,
    pub c: f64,
    pub num_wires: usize,
    pub threshold: f64,
    pub records: Vec<TrialRecord>,
    pub alpha: f64,
    /// Variables (1-based) labelling at least `p^(1-α)·ℓ` wires.
    pub heavy_set: Vec<usize>,
    /// `(1/p)^(1-α)`.
    pub heavy_bound: f64,
}

impl ShrinkageReport {
    pub fn trials(&self) -> usize {
        self.records.len()
    }

    pub fn tail_frequency(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        let hits = self.records.iter().filter(|r| r.exceeded_threshold).count();
        hits as f64 / self.records.len() as f64
    }

    pub fn mean_survived(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().map(|r| r.survived_wires as f64).sum::<f64>() / self.records.len() as f64
    }

    pub fn heavy_within_bound(&self) -> bool {
        self.heavy_set.len() as f64 <= self.heavy_bound
    }

    pub fn csv_header() -> &'static str {
        "trial,seed,survived_wires,simplified_gates,exceeded_threshold"
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(Self::csv_header());
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.trial,
                r.seed,
                r.survived_wires,
                r.simplified_gates,
                u8::from(r.exceeded_threshold)
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkageConfig {
    pub trials: u64,
    pub c: f64,
    /// Trial `i` uses a ChaCha8 stream seeded with `seed + i` (wrapping).
    pub seed: u64,
}

/// Runs independent restriction trials on the current rayon pool.
///
/// Each trial draws `σ` from `source` and a uniform `β`, restricts, and
/// records the surviving wires and the gate count after full simplification.
pub fn shrinkage_trial(circuit: &ComparatorCircuit, source: &SelectionSource, config: ShrinkageConfig) -> Result<ShrinkageReport> {
    let n = circuit.num_vars();
    guard("shrinkage variables", n, MAX_SHRINKAGE_VARS)?;
    let p = source.probability();
    let l = circuit.num_wires();
    let threshold = shrinkage_threshold(l, p, config.c);
    let per_var = circuit.wires_per_variable();

    let records = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = config.seed.wrapping_add(trial);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sigma = source.draw(n, &mut rng)?;
            let beta: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            let rho = sigma.with_values(&beta)?;
            let restricted = apply_restriction(circuit, &rho)?;
            // wires labelled by free variables; a constant output discards them all
            let survived: usize = (0..n).filter(|&i| sigma.0[i]).map(|i| per_var[i]).sum();
            if let RestrictedResult::Circuit { .. } = restricted {
                assert_eq!(restricted.num_wires(), survived, "restriction kept a fixed wire");
            }
            let simplified_gates = match restricted {
                RestrictedResult::Constant(_) => 0,
                RestrictedResult::Circuit { circuit, .. } => simplify_full(&circuit)?.num_gates(),
            };
            Ok(TrialRecord {
                trial,
                seed,
                survived_wires: survived,
                simplified_gates,
                exceeded_threshold: survived as f64 > threshold,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let alpha = heavy_alpha(l, config.c);
    let heavy_cut = p.powf(1.0 - alpha) * l as f64;
    let heavy_set = per_var
        .iter()
        .enumerate()
        .filter(|(_, &w)| w as f64 >= heavy_cut)
        .map(|(i, _)| i + 1)
        .collect();
    Ok(ShrinkageReport {
        p,
        c: config.c,
        num_wires: l,
        threshold,
        records,
        alpha,
        heavy_set,
        heavy_bound: (1.0 / p).powf(1.0 - alpha),
    })
}

/// Restricts `circuit` by every assignment to `cube_vars`, returning the
/// pieces in the index order of [`combine_over_cube`].
pub fn split_on(circuit: &ComparatorCircuit, cube_vars: &[usize]) -> Result<Vec<ComparatorCircuit>> {
    guard("case-split variables", cube_vars.len(), MAX_CUBE_VARS)?;
    let n = circuit.num_vars();
    let free = n - cube_vars.len();
    (0..(1usize << cube_vars.len()))
        .map(|h| {
            let mut assignment = vec![None; n];
            for (j, &v) in cube_vars.iter().enumerate() {
                assignment[v - 1] = Some((h >> j) & 1 == 1);
            }
            apply_restriction(circuit, &Restriction::new(assignment))?.into_circuit(free)
        })
        .collect()
}

/// Builds `⋁_h (1_h ∧ f_h)` from one subcircuit per assignment `h` to `cube_vars`.
///
/// `subcircuits[h]` covers the assignment with `cube_vars[j] = bit j of h`
/// and is a circuit over the remaining variables, renumbered in order. Each
/// term adds `|H|` indicator wires; the first term's indicator chain doubles
/// as the accumulator, so the result has `Σ_h (ℓ_h + |H|)` wires.
pub fn combine_over_cube(num_vars: usize, cube_vars: &[usize], subcircuits: &[ComparatorCircuit]) -> Result<ComparatorCircuit> {
    let h_len = cube_vars.len();
    guard("case-split variables", h_len, MAX_CUBE_VARS)?;
    let mut in_cube = vec![false; num_vars + 1];
    for &v in cube_vars {
        if v == 0 || v > num_vars || std::mem::replace(&mut in_cube[v], true) {
            return Err(Error::invalid(format!("bad case-split variable {v}")));
        }
    }
    if subcircuits.len() != 1 << h_len {
        return Err(Error::Dimension {
            expected: 1 << h_len,
            got: subcircuits.len(),
        });
    }
    let free: Vec<usize> = (1..=num_vars).filter(|&v| !in_cube[v]).collect();
    if let Some(bad) = subcircuits.iter().find(|c| c.num_vars() != free.len()) {
        return Err(Error::Dimension {
            expected: free.len(),
            got: bad.num_vars(),
        });
    }

    let mut wires: Vec<Literal> = Vec::new();
    let mut gates: Vec<Gate> = Vec::new();
    let mut acc = None;
    for (h, sub) in subcircuits.iter().enumerate() {
        let offset = wires.len();
        wires.extend(sub.wires().iter().map(|l| Literal {
            var: free[l.var - 1],
            negated: l.negated,
        }));
        gates.extend(
            sub.gates()
                .iter()
                .map(|g| Gate::new(g.and_wire + offset, g.or_wire + offset)),
        );
        let sub_out = sub.output() + offset;
        let term = if h_len == 0 {
            sub_out
        } else {
            let first = wires.len() + 1;
            for (j, &v) in cube_vars.iter().enumerate() {
                let bit = (h >> j) & 1 == 1;
                wires.push(Literal { var: v, negated: !bit });
            }
            for w in first + 1..first + h_len {
                gates.push(Gate::new(first, w));
            }
            gates.push(Gate::new(first, sub_out));
            first
        };
        match acc {
            None => acc = Some(term),
            Some(a) => gates.push(Gate::new(term, a)),
        }
    }
    ComparatorCircuit::new(num_vars, wires, gates, acc.expect("at least one term"))
}

/// Exact `|Pr_z[C(G(z)) = 1] - Pr_x[C(x) = 1]|` over all `2^r` seeds and `2^n` inputs.
pub fn fool_test<G>(circuit: &ComparatorCircuit, seed_len: usize, generator: G) -> Result<Ratio<u64>>
where
    G: Fn(u64) -> Vec<bool> + Sync,
{
    let n = circuit.num_vars();
    guard("generator seed length", seed_len, MAX_FOOL_BITS)?;
    guard("fooling-test variables", n, MAX_FOOL_BITS.min(MAX_TRUTH_TABLE_VARS))?;
    let tt = circuit.truth_table()?;
    let uniform_hits = tt.count_ones();
    let seed_hits: u64 = (0..(1u64 << seed_len))
        .into_par_iter()
        .map(|z| {
            let out = generator(z);
            if out.len() != n {
                return Err(Error::Dimension { expected: n, got: out.len() });
            }
            Ok(u64::from(tt.get(crate::circuit::input_to_index(&out))))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let lhs = seed_hits << n;
    let rhs = uniform_hits << seed_len;
    Ok(Ratio::new(lhs.abs_diff(rhs), 1u64 << (n + seed_len)))
}

/// `G(z) = z` on `n` bits.
pub fn identity_generator(n: usize) -> impl Fn(u64) -> Vec<bool> + Sync {
    move |z| crate::circuit::index_to_input(z as usize, n)
}

/// Outputs the selection of a `t = 1` sampler: `k`-wise independent uniform bits.
pub fn kwise_generator(sampler: KWiseSelectionSampler) -> impl Fn(u64) -> Vec<bool> + Sync {
    move |z| sampler.sample_index(u128::from(z)).expect("seed fits").0
}
