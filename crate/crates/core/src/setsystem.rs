//! The set system attached to a standard form `[I | A]`.
//!
//! The ground set is `V = B x (GF(q) \ {0})`, ordered basis-major and then
//! by field code, so ground element `i * (q - 1) + (a - 1)` is the pair
//! `(basis_order[i], a)`. Each non-basis element `e` contributes the set
//! `F_e = {(b, a) : A[b][e] = a != 0}`, stored as a bitset over `V`.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{FieldElem, FieldSpec};
use crate::gfmatrix::StandardForm;

/// Default cap on the number of subsets examined by exact shatter computation.
pub const SHATTER_BUDGET: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetSystemError {
    #[error("family has {0} sets; at least 2 are needed")]
    InsufficientFamily(usize),
    #[error("exact shatter needs {subsets} subsets, over the budget of {budget}")]
    BudgetExceeded { subsets: u128, budget: u128 },
    #[error("ground index {index} out of range for a ground set of size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("separation threshold must be at least 1")]
    ZeroDelta,
    #[error("standard form does not match the set system")]
    ShapeMismatch,
}

/// A fixed-size bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> BitSet {
        BitSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> BitSet {
        let mut s = BitSet::new(len);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub fn full(len: usize) -> BitSet {
        BitSet::from_indices(len, 0..len)
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn symmetric_difference_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }
}

/// How [`SetSystem::shatter`] evaluates the shatter function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShatterMode {
    /// Every `m`-subset, within a budget.
    Exact { budget: u128 },
    /// A lower bound from seeded random `m`-subsets.
    Sampled { trials: usize, seed: u64 },
}

impl Default for ShatterMode {
    fn default() -> Self {
        ShatterMode::Exact {
            budget: SHATTER_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShatterValue {
    pub m: usize,
    pub value: usize,
    /// False when `value` is only a lower bound.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub min_pair: (String, String),
    pub sym_diff: usize,
    /// Rows where the two columns differ.
    pub hamming: usize,
    /// The largest `d` for which the family is `d`-separated.
    pub delta_separated_at: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub traces: usize,
    pub distinct_restricted_cols: usize,
    pub parallel_classes: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PackingMeasurement {
    pub delta: usize,
    pub packing: Vec<String>,
    pub size: usize,
    /// `size * delta / |V|`.
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct SetSystem {
    field: FieldSpec,
    basis: Vec<String>,
    ground: Vec<(String, FieldElem)>,
    labels: Vec<String>,
    sets: Vec<BitSet>,
}

impl SetSystem {
    pub fn build(sf: &StandardForm) -> SetSystem {
        let q = sf.field.order() as usize;
        let ground: Vec<(String, FieldElem)> = sf
            .basis_order
            .iter()
            .flat_map(|b| sf.field.nonzero_elements().map(move |a| (b.clone(), a)))
            .collect();
        let sets = (0..sf.nonbasis_order.len())
            .map(|e| {
                let members = (0..sf.basis_order.len()).filter_map(|b| {
                    let a = sf.entry(b, e);
                    (!a.is_zero()).then(|| b * (q - 1) + a.code() as usize - 1)
                });
                BitSet::from_indices(ground.len(), members)
            })
            .collect();
        SetSystem {
            field: sf.field.clone(),
            basis: sf.basis_order.clone(),
            ground,
            labels: sf.nonbasis_order.clone(),
            sets,
        }
    }

    pub fn ground(&self) -> &[(String, FieldElem)] {
        &self.ground
    }

    pub fn ground_len(&self) -> usize {
        self.ground.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    /// Non-basis labels, one per set, in family order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn family_len(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, i: usize) -> &BitSet {
        &self.sets[i]
    }

    fn block(&self) -> usize {
        self.field.order() as usize - 1
    }

    pub fn ground_index(&self, basis_row: usize, value: FieldElem) -> usize {
        basis_row * self.block() + value.code() as usize - 1
    }

    pub fn members(&self, i: usize) -> Vec<(String, FieldElem)> {
        self.sets[i].iter().map(|g| self.ground[g].clone()).collect()
    }

    pub fn subset(&self, idx: impl IntoIterator<Item = usize>) -> Result<BitSet, SetSystemError> {
        let size = self.ground.len();
        let idx: Vec<usize> = idx.into_iter().collect();
        if let Some(&index) = idx.iter().find(|&&i| i >= size) {
            return Err(SetSystemError::OutOfRange { index, size });
        }
        Ok(BitSet::from_indices(size, idx))
    }

    /// Number of distinct traces `F_e ∩ w`.
    pub fn trace_count(&self, w: &BitSet) -> usize {
        self.sets
            .iter()
            .map(|s| s.intersection(w))
            .collect::<HashSet<_>>()
            .len()
    }

    /// `π(m)`: the most distinct traces on any `m` ground elements.
    pub fn shatter(&self, m: usize, mode: ShatterMode) -> Result<ShatterValue, SetSystemError> {
        let n = self.ground.len();
        if m > n {
            return Err(SetSystemError::OutOfRange { index: m, size: n });
        }
        match mode {
            ShatterMode::Exact { budget } => {
                let subsets = binomial(n, m);
                if subsets > budget {
                    return Err(SetSystemError::BudgetExceeded { subsets, budget });
                }
                let mut best = 0;
                let mut combo: Vec<usize> = (0..m).collect();
                loop {
                    best = best.max(self.trace_count(&BitSet::from_indices(n, combo.iter().copied())));
                    if !next_combination(&mut combo, n) {
                        break;
                    }
                }
                Ok(ShatterValue {
                    m,
                    value: best,
                    exact: true,
                })
            }
            ShatterMode::Sampled { trials, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let best = (0..trials)
                    .map(|_| {
                        let w = index::sample(&mut rng, n, m);
                        self.trace_count(&BitSet::from_indices(n, w.iter()))
                    })
                    .max()
                    .unwrap_or(0);
                Ok(ShatterValue {
                    m,
                    value: best,
                    exact: false,
                })
            }
        }
    }

    pub fn sym_diff(&self, i: usize, j: usize) -> usize {
        self.sets[i].symmetric_difference_count(&self.sets[j])
    }

    /// Number of basis rows on which the columns of `i` and `j` differ.
    pub fn hamming(&self, i: usize, j: usize) -> usize {
        let block = self.block();
        (0..self.basis.len())
            .filter(|&b| {
                (b * block..(b + 1) * block)
                    .any(|g| self.sets[i].contains(g) != self.sets[j].contains(g))
            })
            .count()
    }

    /// Basis rows where the columns of `i` and `j` differ, as row indices.
    pub fn differing_rows(&self, i: usize, j: usize) -> Vec<usize> {
        let block = self.block();
        (0..self.basis.len())
            .filter(|&b| {
                (b * block..(b + 1) * block)
                    .any(|g| self.sets[i].contains(g) != self.sets[j].contains(g))
            })
            .collect()
    }

    /// The closest pair by symmetric difference; ties go to the pair whose
    /// labels `(smaller, larger)` compare least.
    pub fn closest_pair(&self) -> Result<(usize, usize), SetSystemError> {
        let n = self.sets.len();
        if n < 2 {
            return Err(SetSystemError::InsufficientFamily(n));
        }
        let key = |i: usize, j: usize| {
            let (a, b) = (&self.labels[i], &self.labels[j]);
            (self.sym_diff(i, j), a.min(b).clone(), a.max(b).clone())
        };
        let pair = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .min_by_key(|&(i, j)| key(i, j))
            .expect("at least one pair");
        Ok(pair)
    }

    pub fn separation(&self) -> Result<SeparationReport, SetSystemError> {
        let (i, j) = self.closest_pair()?;
        let (a, b) = (&self.labels[i], &self.labels[j]);
        let sym_diff = self.sym_diff(i, j);
        Ok(SeparationReport {
            min_pair: (a.min(b).clone(), a.max(b).clone()),
            sym_diff,
            hamming: self.hamming(i, j),
            delta_separated_at: sym_diff,
        })
    }

    /// Family indices of a greedy maximal `delta`-separated subfamily,
    /// scanning in family order.
    pub fn greedy_packing_indices(&self, delta: usize) -> Result<Vec<usize>, SetSystemError> {
        if delta == 0 {
            return Err(SetSystemError::ZeroDelta);
        }
        let mut kept: Vec<usize> = Vec::new();
        for i in 0..self.sets.len() {
            if kept.iter().all(|&k| self.sym_diff(i, k) >= delta) {
                kept.push(i);
            }
        }
        Ok(kept)
    }

    pub fn greedy_delta_packing(&self, delta: usize) -> Result<Vec<String>, SetSystemError> {
        Ok(self
            .greedy_packing_indices(delta)?
            .into_iter()
            .map(|i| self.labels[i].clone())
            .collect())
    }

    pub fn packing_measurement(&self, delta: usize) -> Result<PackingMeasurement, SetSystemError> {
        let packing = self.greedy_delta_packing(delta)?;
        let size = packing.len();
        let ratio = if self.ground.is_empty() {
            0.0
        } else {
            (size * delta) as f64 / self.ground.len() as f64
        };
        Ok(PackingMeasurement {
            delta,
            packing,
            size,
            ratio,
        })
    }

    /// Every pair among `idx` has symmetric difference at least `delta`.
    pub fn is_delta_separated(&self, idx: &[usize], delta: usize) -> bool {
        idx.iter()
            .enumerate()
            .all(|(p, &i)| idx[p + 1..].iter().all(|&j| self.sym_diff(i, j) >= delta))
    }

    /// Projection of `w` onto basis rows.
    pub fn projection(&self, w: &BitSet) -> Vec<usize> {
        let block = self.block();
        let mut rows: Vec<usize> = w.iter().map(|g| g / block).collect();
        rows.dedup();
        rows
    }

    /// Evaluates `traces <= distinct restricted columns <= (q-1) * classes + 1`
    /// where columns of `A` are cut to the rows in the projection of `w` and
    /// `classes` counts nonzero projective classes among them.
    pub fn claim_chain_check(&self, sf: &StandardForm, w: &BitSet) -> Result<ChainCheck, SetSystemError> {
        if sf.nonbasis_order != self.labels || sf.basis_order != self.basis || w.capacity() != self.ground.len() {
            return Err(SetSystemError::ShapeMismatch);
        }
        let rows = self.projection(w);
        let f = &sf.field;
        let restricted: HashSet<Vec<FieldElem>> = (0..self.labels.len())
            .map(|e| rows.iter().map(|&b| sf.entry(b, e)).collect())
            .collect();
        let classes: HashSet<Vec<FieldElem>> = restricted
            .iter()
            .filter_map(|col| {
                let lead = col.iter().find(|x| !x.is_zero())?;
                let inv = f.inv(*lead).expect("nonzero");
                Some(col.iter().map(|&x| f.mul(x, inv)).collect())
            })
            .collect();
        let traces = self.trace_count(w);
        let distinct = restricted.len();
        let q1 = f.order() as usize - 1;
        Ok(ChainCheck {
            traces,
            distinct_restricted_cols: distinct,
            parallel_classes: classes.len(),
            ok: traces <= distinct && distinct <= q1 * classes.len() + 1,
        })
    }

    /// One line per set: `label: b:a b:a ...`.
    pub fn to_adjacency_text(&self) -> String {
        let mut out = String::new();
        for (i, label) in self.labels.iter().enumerate() {
            let _ = write!(out, "{label}:");
            for (b, a) in self.members(i) {
                let _ = write!(out, " {b}:{a}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Advances a sorted combination of `0..n`; false after the last one.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
