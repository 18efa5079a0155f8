//! Short-circuit extraction relative to a basis, the girth/minor dichotomy
//! harness, and density measurement against the extremal families.
//!
//! For a basis `B` with standard form `[I | A]`, two non-basis columns whose
//! sets `F_e`, `F_e'` are close differ on few rows `B'`; then `e - e'` lies in
//! the span of `B'`, so `B' + e + e'` is dependent and contains a circuit
//! with at most two elements outside `B`. Fundamental circuits (one element
//! outside `B`) are also considered and the smallest candidate wins.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::generators::clique;
use crate::matroid::{
    Circuit, CosimpleViolation, Girth, MatroidError, MinorWitness, RepMatroid,
    BASIS_ENUMERATION_LIMIT, MINOR_HOST_LIMIT, MINOR_TARGET_LIMIT,
};
use crate::setsystem::{SetSystem, SetSystemError};

/// Bases drawn when `all` is requested on a matroid too large to enumerate.
pub const FALLBACK_SAMPLE: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("the given set is not a basis")]
    NotABasis,
    #[error("matroid has no circuits")]
    NoCircuit,
    #[error("matroid is not cosimple: {0}")]
    NotCosimple(CosimpleViolation),
    #[error("density is undefined for a rank-0 matroid")]
    UndefinedRatio,
    #[error("clique size t = {0} must be at least 2")]
    InvalidT(usize),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    SetSystem(#[from] SetSystemError),
}

/// Where the returned short circuit came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitSource {
    /// Two identical non-basis columns.
    ParallelPair,
    /// The closest pair of sets `F_e`, `F_e'`.
    ClosePair,
    /// A fundamental circuit `B + e`.
    Fundamental,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortCircuitStats {
    pub basis: Vec<String>,
    pub source: CircuitSource,
    /// Closest pair of sets by symmetric difference.
    pub min_pair: Option<(String, String)>,
    pub min_sym_diff: Option<usize>,
    /// Fewest basis rows on which two non-basis columns differ.
    pub min_pair_hamming: Option<usize>,
    /// Size of the circuit found among those rows and the two columns.
    pub pair_circuit_size: Option<usize>,
    pub min_fundamental_size: usize,
    pub nonbasis_in_circuit: usize,
}

/// Finds a short circuit with at most two elements outside `basis`.
pub fn find_short_circuit<I, S>(m: &RepMatroid, basis: I) -> Result<(Circuit, ShortCircuitStats), PipelineError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let idx = m.indices(basis)?;
    short_circuit_for_basis(m, &idx)
}

fn short_circuit_for_basis(
    m: &RepMatroid,
    basis: &[usize],
) -> Result<(Circuit, ShortCircuitStats), PipelineError> {
    if basis.len() != m.rank() || m.rank_of_indices(basis) != basis.len() {
        return Err(PipelineError::NotABasis);
    }
    if basis.len() == m.len() {
        return Err(PipelineError::NoCircuit);
    }
    let basis_labels: Vec<&str> = basis.iter().map(|&i| m.label(i)).collect();
    let sf = m.standard_form(&basis_labels)?;
    let system = SetSystem::build(&sf);
    let index_of = |label: &str| m.index_of(label).expect("label from this matroid");

    let mut candidates: Vec<(Vec<usize>, CircuitSource)> = Vec::new();
    let mut pair_info = None;
    if system.family_len() >= 2 {
        let (i, j) = system.closest_pair()?;
        let (a, b) = (&sf.nonbasis_order[i], &sf.nonbasis_order[j]);
        let sym_diff = system.sym_diff(i, j);
        // the pair closest in rows; ties by symmetric difference, then labels
        let (hi, hj) = (0..system.family_len())
            .flat_map(|x| (x + 1..system.family_len()).map(move |y| (x, y)))
            .min_by_key(|&(x, y)| (system.hamming(x, y), system.sym_diff(x, y), x, y))
            .expect("at least one pair");
        let hamming = system.hamming(hi, hj);
        let mut pair_sizes = Vec::new();
        for (x, y) in [(i, j), (hi, hj)] {
            let mut set: Vec<usize> = system
                .differing_rows(x, y)
                .into_iter()
                .map(|r| index_of(&sf.basis_order[r]))
                .collect();
            set.push(index_of(&sf.nonbasis_order[x]));
            set.push(index_of(&sf.nonbasis_order[y]));
            set.sort_unstable();
            let circuit = m.circuit_within(&set)?;
            let source = if system.sym_diff(x, y) == 0 {
                CircuitSource::ParallelPair
            } else {
                CircuitSource::ClosePair
            };
            pair_sizes.push(circuit.len());
            candidates.push((circuit, source));
        }
        pair_info = Some(((a.min(b).clone(), a.max(b).clone()), sym_diff, hamming, pair_sizes[1]));
    }
    // non-basis columns equal up to a nonzero scalar
    for class in m.parallel_classes() {
        let outside: Vec<usize> = class.iter().copied().filter(|i| !basis.contains(i)).collect();
        if outside.len() >= 2 {
            let mut pair = vec![outside[0], outside[1]];
            pair.sort_unstable();
            candidates.push((pair, CircuitSource::ParallelPair));
        }
    }
    for (e, label) in sf.nonbasis_order.iter().enumerate() {
        let mut set: Vec<usize> = (0..sf.basis_order.len())
            .filter(|&r| !sf.entry(r, e).is_zero())
            .map(|r| index_of(&sf.basis_order[r]))
            .collect();
        set.push(index_of(label));
        set.sort_unstable();
        candidates.push((set, CircuitSource::Fundamental));
    }
    let min_fundamental_size = candidates
        .iter()
        .filter(|(_, s)| *s == CircuitSource::Fundamental)
        .map(|(c, _)| c.len())
        .min()
        .expect("at least one non-basis element");

    let label_key = |c: &[usize]| {
        let mut l: Vec<&str> = c.iter().map(|&i| m.label(i)).collect();
        l.sort_unstable();
        l.join("\u{0}")
    };
    let (best, source) = candidates
        .into_iter()
        .min_by(|(a, sa), (b, sb)| {
            (a.len(), sa, label_key(a)).cmp(&(b.len(), sb, label_key(b)))
        })
        .expect("candidates nonempty");
    let nonbasis_in_circuit = best.iter().filter(|i| !basis.contains(i)).count();
    let circuit = Circuit::new(best.iter().map(|&i| m.label(i).to_string()));
    let stats = ShortCircuitStats {
        basis: basis.iter().map(|&i| m.label(i).to_string()).collect(),
        source,
        min_pair: pair_info.as_ref().map(|p| p.0.clone()),
        min_sym_diff: pair_info.as_ref().map(|p| p.1),
        min_pair_hamming: pair_info.as_ref().map(|p| p.2),
        pair_circuit_size: pair_info.as_ref().map(|p| p.3),
        min_fundamental_size,
        nonbasis_in_circuit,
    };
    Ok((circuit, stats))
}

/// Which bases [`verify_dichotomy`] examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisMode {
    /// Every basis when the ground set has at most
    /// [`BASIS_ENUMERATION_LIMIT`] elements, otherwise a seeded sample of
    /// [`FALLBACK_SAMPLE`].
    All,
    Sample(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinorStatus {
    Found,
    Absent,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorFinding {
    pub target: String,
    pub status: MinorStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MinorWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Density {
    pub elements: usize,
    pub rank: usize,
    pub ratio: f64,
    /// `(q^rank - 1) / (q - 1)`, the size of the projective geometry.
    pub projective_bound: u64,
    pub projective_ratio: f64,
    /// `(rank + 1) / 2`, the density of `M(K_(rank+1))`.
    pub graphic_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub instance: String,
    /// The basis whose best short circuit is recorded.
    pub basis: Vec<String>,
    pub basis_mode: String,
    pub bases_examined: usize,
    pub cosimple: bool,
    pub girth: Girth,
    pub circuit: Circuit,
    pub circuit_size: usize,
    pub nonbasis_count: usize,
    pub min_sym_diff: Option<usize>,
    pub min_pair_hamming: Option<usize>,
    pub minors: Vec<MinorFinding>,
    pub density: Density,
}

/// Runs short-circuit extraction over the chosen bases and records the
/// largest per-basis minimum, then searches for `M(K_t)` and `M(K_t)*`
/// minors where the sizes allow.
pub fn verify_dichotomy(
    m: &RepMatroid,
    instance: &str,
    t: usize,
    mode: BasisMode,
    seed: u64,
) -> Result<DichotomyReport, PipelineError> {
    if t < 2 {
        return Err(PipelineError::InvalidT(t));
    }
    if let Some(v) = m.cosimplicity_violation() {
        return Err(PipelineError::NotCosimple(v));
    }
    let (bases, basis_mode) = match mode {
        BasisMode::All if m.len() <= BASIS_ENUMERATION_LIMIT => {
            (m.all_bases(BASIS_ENUMERATION_LIMIT)?, "all".to_string())
        }
        BasisMode::All => (
            m.sample_bases(FALLBACK_SAMPLE, seed),
            format!("sample:{FALLBACK_SAMPLE} seed={seed} (ground set too large to enumerate)"),
        ),
        BasisMode::Sample(n) => (m.sample_bases(n, seed), format!("sample:{n} seed={seed}")),
    };
    let results: Vec<(Circuit, ShortCircuitStats)> = bases
        .par_iter()
        .map(|b| short_circuit_for_basis(m, b))
        .collect::<Result<_, _>>()?;
    // first basis in canonical order attaining the maximum
    let (circuit, stats) = results
        .iter()
        .rev()
        .max_by_key(|(c, _)| c.len())
        .cloned()
        .ok_or(PipelineError::NoCircuit)?;
    let girth = m.girth(Some(circuit.len()))?;

    let mut minors = Vec::new();
    for dual in [false, true] {
        let target = clique(t, m.field(), dual).map_err(|_| PipelineError::InvalidT(t))?;
        let name = if dual { format!("M(K{t})*") } else { format!("M(K{t})") };
        let finding = if m.len() > MINOR_HOST_LIMIT || target.len() > MINOR_TARGET_LIMIT {
            MinorFinding {
                target: name,
                status: MinorStatus::Skipped,
                witness: None,
            }
        } else {
            let witness = m.has_minor(&target)?;
            MinorFinding {
                target: name,
                status: if witness.is_some() {
                    MinorStatus::Found
                } else {
                    MinorStatus::Absent
                },
                witness,
            }
        };
        minors.push(finding);
    }

    Ok(DichotomyReport {
        instance: instance.to_string(),
        basis: stats.basis.clone(),
        basis_mode,
        bases_examined: bases.len(),
        cosimple: true,
        girth,
        circuit_size: circuit.len(),
        circuit,
        nonbasis_count: stats.nonbasis_in_circuit,
        min_sym_diff: stats.min_sym_diff,
        min_pair_hamming: stats.min_pair_hamming,
        minors,
        density: density_ratio(m)?,
    })
}

/// Elements of the simplification per unit of rank.
pub fn density_ratio(m: &RepMatroid) -> Result<Density, PipelineError> {
    let rank = m.rank();
    if rank == 0 {
        return Err(PipelineError::UndefinedRatio);
    }
    let elements = m.simplify().len();
    let q = m.field().order() as u64;
    let projective_bound = (0..rank).fold(0u64, |acc, _| acc.saturating_mul(q).saturating_add(1));
    Ok(Density {
        elements,
        rank,
        ratio: elements as f64 / rank as f64,
        projective_bound,
        projective_ratio: projective_bound as f64 / rank as f64,
        graphic_ratio: (rank + 1) as f64 / 2.0,
    })
}
