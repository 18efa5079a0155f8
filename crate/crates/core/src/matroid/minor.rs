//! Exhaustive minor containment for desk-scale matroids.
//!
//! Every minor `N` of `M` can be written `M / C \ D` with `C` independent
//! and `D` coindependent in `M / C`; then `|C| = r(M) - r(N)` and
//! `|D| = |E(M)| - |E(N)| - |C|`. The search walks independent contract
//! sets in lexicographic index order and, for each, delete sets in the same
//! order, so the first witness found is canonical. Contract sets are
//! examined in parallel, and `find_map_first` keeps the result equal to the
//! sequential one.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::iso::{find_isomorphism, CircuitProfile};
use super::{MatroidError, RepMatroid};

/// Largest host matroid for [`RepMatroid::has_minor`].
pub const MINOR_HOST_LIMIT: usize = 16;
/// Largest target matroid for [`RepMatroid::has_minor`].
pub const MINOR_TARGET_LIMIT: usize = 10;

/// Labels to delete and contract so that the minor is isomorphic to the target.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MinorWitness {
    pub delete: BTreeSet<String>,
    pub contract: BTreeSet<String>,
}

pub(crate) fn find_minor(
    host: &RepMatroid,
    target: &RepMatroid,
) -> Result<Option<MinorWitness>, MatroidError> {
    if host.len() > MINOR_HOST_LIMIT {
        return Err(MatroidError::TooLarge {
            what: "minor search host",
            size: host.len(),
            limit: MINOR_HOST_LIMIT,
        });
    }
    if target.len() > MINOR_TARGET_LIMIT {
        return Err(MatroidError::TooLarge {
            what: "minor search target",
            size: target.len(),
            limit: MINOR_TARGET_LIMIT,
        });
    }
    if target.rank() > host.rank() {
        return Ok(None);
    }
    let contract_size = host.rank() - target.rank();
    let Some(delete_size) = host
        .len()
        .checked_sub(target.len())
        .and_then(|d| d.checked_sub(contract_size))
    else {
        return Ok(None);
    };
    let wanted = CircuitProfile::new(target)?;

    let contract_sets: Vec<Vec<usize>> = (0..host.len())
        .combinations(contract_size)
        .filter(|c| host.rank_of_indices(c) == c.len())
        .collect();

    let found = contract_sets.par_iter().find_map_first(|contract| {
        let rest: Vec<usize> = (0..host.len()).filter(|i| !contract.contains(i)).collect();
        let contracted = host.minor_indices(&[], contract, contract);
        rest.iter()
            .copied()
            .combinations(delete_size)
            .find_map(|delete| {
                // positions within `contracted`, which lists `rest` in order
                let keep: Vec<usize> = (0..rest.len())
                    .filter(|&p| !delete.contains(&rest[p]))
                    .collect();
                let minor_matrix = contracted.matrix().select_columns(&keep);
                let labels = keep.iter().map(|&p| contracted.label(p).to_string()).collect();
                let candidate = RepMatroid::new(minor_matrix, labels).expect("labels are a subset");
                if candidate.rank() != wanted.rank() {
                    return None;
                }
                let profile = CircuitProfile::new(&candidate).ok()?;
                find_isomorphism(&profile, &wanted).map(|_| MinorWitness {
                    delete: host.labels_of(&delete),
                    contract: host.labels_of(contract),
                })
            })
    });
    Ok(found)
}
