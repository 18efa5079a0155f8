//! Matroids represented by matrices over GF(q).
//!
//! Everything is driven by one rank oracle: the rank of a set of columns,
//! computed by incremental elimination over a [`ColumnPack`]. Searches that
//! enumerate subsets use column index order as the canonical order; greedy
//! procedures that must pick one element among several break ties by label.

mod iso;
mod minor;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::{FieldElem, FieldSpec};
use crate::gfmatrix::{standard_form, ColumnPack, GFMatrix, MatrixError, StandardForm};
use crate::setsystem::binomial;

pub use iso::{CircuitProfile, ISO_LIMIT};
pub use minor::{MinorWitness, MINOR_HOST_LIMIT, MINOR_TARGET_LIMIT};

/// Default cap on the number of subsets of one size tried by the exact
/// girth search.
pub const GIRTH_BUDGET: u128 = 50_000_000;

/// Default size limit for enumerating all bases.
pub const BASIS_ENUMERATION_LIMIT: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("{found} labels given for {expected} columns")]
    LabelCount { expected: usize, found: usize },
    #[error("{what}: {size} elements exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("{what}: {subsets} subsets exceed the budget of {budget}")]
    OverBudget {
        what: &'static str,
        subsets: u128,
        budget: u128,
    },
    #[error("set is independent and contains no circuit")]
    NoCircuit,
    #[error("label {0:?} is both deleted and contracted")]
    DeleteContractOverlap(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A minimal dependent set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Circuit {
    elements: BTreeSet<String>,
}

impl Circuit {
    pub fn new<I, S>(elements: I) -> Circuit
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Circuit {
            elements: elements.into_iter().map(Into::into).collect(),
        }
    }

    pub fn elements(&self) -> &BTreeSet<String> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.elements.contains(label)
    }

    /// Dependent, and every proper subset independent.
    pub fn is_valid_in(&self, m: &RepMatroid) -> bool {
        m.is_circuit(&self.elements).unwrap_or(false)
    }
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.elements.serialize(s)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        write!(f, "{{{}}}", v.join(", "))
    }
}

/// Result of a girth computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Girth {
    Finite(usize),
    /// The matroid has no circuits.
    Infinite,
    /// No circuit of size at most the cutoff exists.
    Exceeds(usize),
}

impl Girth {
    pub fn value(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "infinity"),
            Girth::Exceeds(c) => write!(f, ">{c}"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u64(*g as u64),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Why a matroid fails to be cosimple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CosimpleViolation {
    Coloop { element: String },
    SeriesPair { first: String, second: String },
}

impl fmt::Display for CosimpleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosimpleViolation::Coloop { element } => write!(f, "{element} is a coloop"),
            CosimpleViolation::SeriesPair { first, second } => {
                write!(f, "{first} and {second} are in series")
            }
        }
    }
}

/// A labelled column matroid.
#[derive(Clone)]
pub struct RepMatroid {
    matrix: GFMatrix,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    pack: ColumnPack,
    rank: usize,
}

impl PartialEq for RepMatroid {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && self.labels == other.labels
    }
}

impl fmt::Debug for RepMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RepMatroid")
            .field("labels", &self.labels)
            .field("rank", &self.rank)
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl RepMatroid {
    pub fn new(matrix: GFMatrix, labels: Vec<String>) -> Result<RepMatroid, MatroidError> {
        if labels.len() != matrix.cols() {
            return Err(MatroidError::LabelCount {
                expected: matrix.cols(),
                found: labels.len(),
            });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(MatroidError::DuplicateLabel(l.clone()));
            }
        }
        let pack = ColumnPack::new(&matrix);
        let rank = pack.rank_of(0..matrix.cols());
        Ok(RepMatroid {
            matrix,
            labels,
            index,
            pack,
            rank,
        })
    }

    /// Labels default to `c0, c1, ...`.
    pub fn from_matrix(matrix: GFMatrix) -> RepMatroid {
        let labels = (0..matrix.cols()).map(|i| format!("c{i}")).collect();
        RepMatroid::new(matrix, labels).expect("generated labels are distinct")
    }

    pub fn field(&self) -> &FieldSpec {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &GFMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn index_of(&self, label: &str) -> Result<usize, MatroidError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| MatroidError::UnknownLabel(label.to_string()))
    }

    /// Sorted, deduplicated column indices of a label set.
    pub fn indices<I, S>(&self, set: I) -> Result<Vec<usize>, MatroidError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = set
            .into_iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn labels_of(&self, idx: &[usize]) -> BTreeSet<String> {
        idx.iter().map(|&i| self.labels[i].clone()).collect()
    }

    pub(crate) fn pack(&self) -> &ColumnPack {
        &self.pack
    }

    pub fn rank_of_indices(&self, idx: &[usize]) -> usize {
        self.pack.rank_of(idx.iter().copied())
    }

    pub fn subset_rank<I, S>(&self, set: I) -> Result<usize, MatroidError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let idx = self.indices(set)?;
        Ok(self.rank_of_indices(&idx))
    }

    pub fn is_independent<I, S>(&self, set: I) -> Result<bool, MatroidError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let idx = self.indices(set)?;
        Ok(self.rank_of_indices(&idx) == idx.len())
    }

    pub fn is_circuit<I, S>(&self, set: I) -> Result<bool, MatroidError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let idx = self.indices(set)?;
        Ok(self.is_circuit_indices(&idx))
    }

    pub(crate) fn is_circuit_indices(&self, idx: &[usize]) -> bool {
        if idx.is_empty() || self.rank_of_indices(idx) == idx.len() {
            return false;
        }
        (0..idx.len()).all(|skip| {
            let rest: Vec<usize> = (0..idx.len()).filter(|&i| i != skip).map(|i| idx[i]).collect();
            self.rank_of_indices(&rest) == rest.len()
        })
    }

    /// The first maximal independent set in column order.
    pub fn greedy_basis(&self) -> Vec<usize> {
        self.greedy_basis_in(0..self.len())
    }

    fn greedy_basis_in(&self, order: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut e = self.pack.echelon();
        let mut basis: Vec<usize> = order.into_iter().filter(|&c| e.push(c)).collect();
        basis.sort_unstable();
        basis
    }

    pub fn standard_form<I, S>(&self, basis: I) -> Result<StandardForm, MatroidError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let basis: Vec<String> = basis.into_iter().map(|s| s.as_ref().to_string()).collect();
        for b in &basis {
            self.index_of(b)?;
        }
        Ok(standard_form(&self.matrix, &self.labels, &basis)?)
    }

    /// Exact girth with the default search budget.
    pub fn girth(&self, cutoff: Option<usize>) -> Result<Girth, MatroidError> {
        self.girth_with_budget(cutoff, GIRTH_BUDGET)
    }

    /// Exact girth by subset enumeration in increasing cardinality. Each
    /// cardinality level extends independent prefixes one column at a time,
    /// so a dependent prefix is never extended. Without a cutoff, matroids
    /// Before each cardinality `k`, the search is refused if `C(n, k)`
    /// exceeds `budget`.
    pub fn girth_with_budget(&self, cutoff: Option<usize>, budget: u128) -> Result<Girth, MatroidError> {
        Ok(match self.shortest_circuit_indices(cutoff, budget)? {
            Some(c) => Girth::Finite(c.len()),
            None if self.rank == self.len() => Girth::Infinite,
            None => Girth::Exceeds(cutoff.unwrap_or(0)),
        })
    }

    /// A smallest circuit (first in canonical order among the smallest).
    pub fn shortest_circuit(&self, cutoff: Option<usize>) -> Result<Option<Circuit>, MatroidError> {
        Ok(self
            .shortest_circuit_indices(cutoff, GIRTH_BUDGET)?
            .map(|idx| Circuit::new(idx.iter().map(|&i| self.labels[i].clone()))))
    }

    fn shortest_circuit_indices(
        &self,
        cutoff: Option<usize>,
        budget: u128,
    ) -> Result<Option<Vec<usize>>, MatroidError> {
        let n = self.len();
        if self.rank == n {
            return Ok(None);
        }
        // any rank + 1 elements are dependent
        let top = cutoff.map_or(self.rank + 1, |c| c.min(self.rank + 1));
        let mut stack = Vec::with_capacity(top);
        for size in 1..=top {
            let subsets = binomial(n, size);
            if subsets > budget {
                return Err(MatroidError::OverBudget {
                    what: "exact girth search",
                    subsets,
                    budget,
                });
            }
            let mut e = self.pack.echelon();
            if dependent_of_size(&mut e, n, 0, size, &mut stack) {
                return Ok(Some(stack));
            }
        }
        Ok(None)
    }

    /// The dual matroid, represented by `[-A^T | I]` from a standard form
    /// `[I | A]`, with every element keeping its label and position.
    pub fn dual(&self) -> RepMatroid {
        let n = self.len();
        let basis = self.greedy_basis();
        let basis_labels: Vec<&str> = basis.iter().map(|&i| self.labels[i].as_str()).collect();
        let sf = standard_form(&self.matrix, &self.labels, &basis_labels)
            .expect("greedy basis is a basis");
        let f = self.field();
        let mut d = GFMatrix::zeros(f, n - self.rank, n);
        let basis_pos: Vec<usize> = basis.clone();
        let nonbasis_pos: Vec<usize> = (0..n).filter(|i| !basis.contains(i)).collect();
        for (j, &e) in nonbasis_pos.iter().enumerate() {
            d.set(j, e, FieldElem::ONE);
            for (i, &b) in basis_pos.iter().enumerate() {
                d.set(j, b, f.neg(sf.a.get(i, j)));
            }
        }
        RepMatroid::new(d, self.labels.clone()).expect("labels unchanged")
    }

    /// `M / contract \ delete`. A dependent contract set is split: a maximal
    /// independent part (chosen greedily in label order) is contracted and
    /// the remainder, which consists of loops after that contraction, is
    /// deleted. The result is row-reduced with zero rows removed.
    pub fn minor<D, C, S, T>(&self, delete: D, contract: C) -> Result<RepMatroid, MatroidError>
    where
        D: IntoIterator<Item = S>,
        C: IntoIterator<Item = T>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let del = self.indices(delete)?;
        let con = self.indices(contract)?;
        if let Some(&x) = del.iter().find(|x| con.contains(x)) {
            return Err(MatroidError::DeleteContractOverlap(self.labels[x].clone()));
        }
        let mut by_label = con.clone();
        by_label.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let independent = self.greedy_basis_in(by_label);
        Ok(self.minor_indices(&del, &con, &independent))
    }

    /// Minor by index sets; `independent` must be an independent subset of
    /// `contract` spanning it.
    pub(crate) fn minor_indices(&self, delete: &[usize], contract: &[usize], independent: &[usize]) -> RepMatroid {
        let contracted = self
            .matrix
            .contract_columns(independent)
            .expect("contract set is independent");
        // column positions in `contracted` skip the contracted columns
        let mut pos = Vec::with_capacity(self.len());
        let mut next = 0;
        for i in 0..self.len() {
            if independent.contains(&i) {
                pos.push(usize::MAX);
            } else {
                pos.push(next);
                next += 1;
            }
        }
        let keep: Vec<usize> = (0..self.len())
            .filter(|i| !delete.contains(i) && !contract.contains(i))
            .collect();
        let cols: Vec<usize> = keep.iter().map(|&i| pos[i]).collect();
        let m = contracted.select_columns(&cols).row_reduced();
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        RepMatroid::new(m, labels).expect("labels are a subset")
    }

    pub fn delete<I, S>(&self, set: I) -> Result<RepMatroid, MatroidError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.minor(set, std::iter::empty::<&str>())
    }

    pub fn contract<I, S>(&self, set: I) -> Result<RepMatroid, MatroidError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.minor(std::iter::empty::<&str>(), set)
    }

    /// Columns equal up to a nonzero scalar share a key: the column scaled so
    /// its first nonzero entry is 1. Zero columns have no key.
    fn projective_key(&self, c: usize) -> Option<Vec<FieldElem>> {
        let col = self.matrix.column(c);
        let lead = col.iter().find(|x| !x.is_zero())?;
        let f = self.field();
        let inv = f.inv(*lead).expect("nonzero");
        Some(col.into_iter().map(|x| f.mul(x, inv)).collect())
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.matrix.is_zero_column(c)).collect()
    }

    pub fn coloops(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| {
                let rest: Vec<usize> = (0..self.len()).filter(|&i| i != c).collect();
                self.rank_of_indices(&rest) < self.rank
            })
            .collect()
    }

    /// Parallel classes of non-loop elements, each sorted by label, listed
    /// in order of their least label.
    pub fn parallel_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: BTreeMap<Vec<FieldElem>, Vec<usize>> = BTreeMap::new();
        for c in 0..self.len() {
            if let Some(k) = self.projective_key(c) {
                classes.entry(k).or_default().push(c);
            }
        }
        let mut out: Vec<Vec<usize>> = classes
            .into_values()
            .map(|mut v| {
                v.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
                v
            })
            .collect();
        out.sort_by(|a, b| self.labels[a[0]].cmp(&self.labels[b[0]]));
        out
    }

    /// Removes loops and keeps the least label of each parallel class;
    /// survivors stay in their original column order.
    pub fn simplify(&self) -> RepMatroid {
        let mut keep: Vec<usize> = self.parallel_classes().iter().map(|c| c[0]).collect();
        keep.sort_unstable();
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        RepMatroid::new(self.matrix.select_columns(&keep), labels).expect("labels are a subset")
    }

    pub fn is_simple(&self) -> bool {
        self.loops().is_empty() && self.parallel_classes().iter().all(|c| c.len() == 1)
    }

    /// The first obstruction to cosimplicity: a coloop (least label first),
    /// otherwise a series pair (the two least labels of the first series
    /// class).
    pub fn cosimplicity_violation(&self) -> Option<CosimpleViolation> {
        let mut coloops: Vec<&String> = self.coloops().into_iter().map(|c| &self.labels[c]).collect();
        coloops.sort();
        if let Some(c) = coloops.first() {
            return Some(CosimpleViolation::Coloop {
                element: (*c).clone(),
            });
        }
        let dual = self.dual();
        dual.parallel_classes()
            .into_iter()
            .find(|c| c.len() > 1)
            .map(|c| CosimpleViolation::SeriesPair {
                first: dual.labels[c[0]].clone(),
                second: dual.labels[c[1]].clone(),
            })
    }

    /// No coloops and no series pairs.
    pub fn is_cosimple(&self) -> bool {
        self.cosimplicity_violation().is_none()
    }

    /// Shrinks a dependent set to a circuit by dropping elements, in label
    /// order, whenever the rest stays dependent.
    pub fn circuit_of_dependent<I, S>(&self, set: I) -> Result<Circuit, MatroidError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let idx = self.indices(set)?;
        let c = self.circuit_within(&idx)?;
        Ok(Circuit::new(c.iter().map(|&i| self.labels[i].clone())))
    }

    pub(crate) fn circuit_within(&self, idx: &[usize]) -> Result<Vec<usize>, MatroidError> {
        if self.rank_of_indices(idx) == idx.len() {
            return Err(MatroidError::NoCircuit);
        }
        let mut order = idx.to_vec();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let mut current: Vec<usize> = idx.to_vec();
        for x in order {
            let rest: Vec<usize> = current.iter().copied().filter(|&i| i != x).collect();
            if self.rank_of_indices(&rest) < rest.len() {
                current = rest;
            }
        }
        Ok(current)
    }

    /// The unique circuit in `basis + e`, for `e` outside the basis.
    pub fn fundamental_circuit(&self, basis: &[usize], e: usize) -> Result<Vec<usize>, MatroidError> {
        let mut set = basis.to_vec();
        set.push(e);
        set.sort_unstable();
        self.circuit_within(&set)
    }

    /// All bases as sorted index lists, in lexicographic order, found by a
    /// breadth-first search of the basis exchange graph from the greedy
    /// basis.
    pub fn all_bases(&self, limit: usize) -> Result<Vec<Vec<usize>>, MatroidError> {
        let n = self.len();
        if n > limit || n > 64 {
            return Err(MatroidError::TooLarge {
                what: "basis enumeration",
                size: n,
                limit: limit.min(64),
            });
        }
        let to_mask = |b: &[usize]| b.iter().fold(0u64, |m, &i| m | 1 << i);
        let start = to_mask(&self.greedy_basis());
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(b) = queue.pop_front() {
            for out in (0..n).filter(|&i| b >> i & 1 == 1) {
                for inn in (0..n).filter(|&i| b >> i & 1 == 0) {
                    let cand = (b & !(1 << out)) | 1 << inn;
                    if seen.contains(&cand) {
                        continue;
                    }
                    let idx: Vec<usize> = (0..n).filter(|&i| cand >> i & 1 == 1).collect();
                    if self.rank_of_indices(&idx) == self.rank {
                        seen.insert(cand);
                        queue.push_back(cand);
                    }
                }
            }
        }
        let mut bases: Vec<Vec<usize>> = seen
            .into_iter()
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
            .collect();
        bases.sort();
        Ok(bases)
    }

    /// Up to `count` distinct bases from seeded random greedy orders, sorted.
    pub fn sample_bases(&self, count: usize, seed: u64) -> Vec<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..self.len()).collect();
        let mut out = BTreeSet::new();
        for _ in 0..count {
            order.shuffle(&mut rng);
            out.insert(self.greedy_basis_in(order.iter().copied()));
        }
        out.into_iter().collect()
    }

    /// Circuit data for isomorphism testing; refuses more than [`ISO_LIMIT`]
    /// elements.
    pub fn circuit_profile(&self) -> Result<CircuitProfile, MatroidError> {
        CircuitProfile::new(self)
    }

    /// True iff some label bijection preserves the rank function.
    pub fn is_isomorphic(&self, other: &RepMatroid) -> Result<bool, MatroidError> {
        if self.len() != other.len() || self.rank != other.rank {
            return Ok(false);
        }
        let a = self.circuit_profile()?;
        let b = other.circuit_profile()?;
        Ok(iso::find_isomorphism(&a, &b).is_some())
    }

    /// Searches for a minor isomorphic to `target`; see [`MinorWitness`].
    pub fn has_minor(&self, target: &RepMatroid) -> Result<Option<MinorWitness>, MatroidError> {
        minor::find_minor(self, target)
    }
}

/// Depth-first search for a dependent set of exactly `size` columns among
/// `start..n`, extending only independent prefixes.
fn dependent_of_size(
    e: &mut crate::gfmatrix::Echelon<'_>,
    n: usize,
    start: usize,
    size: usize,
    stack: &mut Vec<usize>,
) -> bool {
    let remaining = size - stack.len();
    for c in start..=n.saturating_sub(remaining) {
        if c >= n {
            break;
        }
        let before = e.rank();
        stack.push(c);
        let independent = e.push(c);
        if !independent {
            if remaining == 1 {
                return true;
            }
        } else if remaining > 1 && dependent_of_size(e, n, c + 1, size, stack) {
            return true;
        }
        e.truncate(before);
        stack.pop();
    }
    false
}
