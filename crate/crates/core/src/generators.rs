//! Named and random matroids: graphic and cographic matroids, cliques,
//! uniform matroids, projective geometries and seeded random matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{FieldElem, FieldError, FieldSpec};
use crate::gfmatrix::GFMatrix;
use crate::matroid::RepMatroid;

/// Redraws allowed before [`random_matroid`] gives up.
pub const RANDOM_RETRIES: usize = 100;

/// Largest `q^r` accepted by [`projective_geometry`].
pub const PROJECTIVE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("edge ({0}, {1}) has an endpoint outside the vertex range")]
    VertexOutOfRange(usize, usize),
    #[error("unknown graph {0:?}")]
    UnknownGraph(String),
    #[error("unknown generator id {0:?}")]
    UnknownGenerator(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("U({rank},{size}) has no Vandermonde representation over GF({q})")]
    FieldTooSmall { rank: usize, size: usize, q: u32 },
    #[error("{0} exceeds the size guard")]
    TooLarge(String),
    #[error("no rank-{rank} matrix found after {RANDOM_RETRIES} draws")]
    RetriesExhausted { rank: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An undirected multigraph; loops and parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Graph, GenError> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(GenError::VertexOutOfRange(u, v));
        }
        Ok(Graph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn complete(t: usize) -> Graph {
        let edges = (0..t)
            .flat_map(|u| (u + 1..t).map(move |v| (u, v)))
            .collect();
        Graph { n: t, edges }
    }

    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.n;
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components
    }

    /// `u-v` with `u <= v`; repeated edges get a `#k` suffix.
    pub fn edge_labels(&self) -> Vec<String> {
        let mut seen = std::collections::HashMap::new();
        self.edges
            .iter()
            .map(|&(u, v)| {
                let base = format!("{}-{}", u.min(v), u.max(v));
                let count = seen.entry(base.clone()).or_insert(0);
                *count += 1;
                if *count == 1 {
                    base
                } else {
                    format!("{base}#{count}")
                }
            })
            .collect()
    }
}

/// The signed incidence matrix: edge `(u, v)` with `u < v` has `+1` in row
/// `u` and `-1` in row `v`; loops are zero columns.
pub fn graphic(g: &Graph, f: &FieldSpec) -> RepMatroid {
    let mut m = GFMatrix::zeros(f, g.n, g.edges.len());
    let minus_one = f.neg(FieldElem::ONE);
    for (c, &(u, v)) in g.edges.iter().enumerate() {
        if u != v {
            m.set(u.min(v), c, FieldElem::ONE);
            m.set(u.max(v), c, minus_one);
        }
    }
    RepMatroid::new(m, g.edge_labels()).expect("edge labels are distinct")
}

/// `M(K_t)`, or its dual when `dualize` is set.
pub fn clique(t: usize, f: &FieldSpec, dualize: bool) -> Result<RepMatroid, GenError> {
    if t < 2 {
        return Err(GenError::InvalidParameter(format!("clique size {t} < 2")));
    }
    let m = graphic(&Graph::complete(t), f);
    Ok(if dualize { m.dual() } else { m })
}

/// `U(rank, size)`: Vandermonde columns `(1, x, ..., x^(rank-1))` over
/// distinct scalars, plus `(0, ..., 0, 1)` when all `q` scalars are used.
/// `rank == size` gives the identity.
pub fn uniform(rank: usize, size: usize, f: &FieldSpec) -> Result<RepMatroid, GenError> {
    if rank > size {
        return Err(GenError::InvalidParameter(format!("rank {rank} exceeds size {size}")));
    }
    let labels = (0..size).map(|i| format!("u{i}")).collect();
    if rank == size {
        return Ok(RepMatroid::new(GFMatrix::identity(f, size), labels).expect("distinct"));
    }
    let q = f.order() as usize;
    if rank >= 2 && size > q + 1 {
        return Err(GenError::FieldTooSmall {
            rank,
            size,
            q: f.order(),
        });
    }
    let mut m = GFMatrix::zeros(f, rank, size);
    for c in 0..size {
        if c < q || rank < 2 {
            let x = f.elem((c % q) as u32).expect("below q");
            let mut power = FieldElem::ONE;
            for r in 0..rank {
                m.set(r, c, power);
                power = f.mul(power, x);
            }
        } else {
            m.set(rank - 1, c, FieldElem::ONE);
        }
    }
    Ok(RepMatroid::new(m, labels).expect("distinct"))
}

/// All points of PG(r-1, q): one column per nonzero vector whose first
/// nonzero coordinate is 1, listed in lexicographic order.
pub fn projective_geometry(r: usize, f: &FieldSpec) -> Result<RepMatroid, GenError> {
    if r == 0 {
        return Err(GenError::InvalidParameter("projective rank must be at least 1".into()));
    }
    let q = f.order() as u64;
    let total = q
        .checked_pow(r as u32)
        .filter(|&t| t <= PROJECTIVE_LIMIT)
        .ok_or_else(|| GenError::TooLarge(format!("PG({}, {q})", r - 1)))?;
    let mut columns = Vec::new();
    for code in 1..total {
        // coordinate 0 is the most significant digit
        let mut digits = vec![FieldElem::ZERO; r];
        let mut rest = code;
        for d in (0..r).rev() {
            digits[d] = f.elem((rest % q) as u32).expect("below q");
            rest /= q;
        }
        if digits.iter().find(|x| !x.is_zero()) == Some(&FieldElem::ONE) {
            columns.push(digits);
        }
    }
    let labels = (0..columns.len()).map(|i| format!("p{i}")).collect();
    let m = GFMatrix::from_columns(f, r, &columns).expect("columns have length r");
    Ok(RepMatroid::new(m, labels).expect("distinct"))
}

/// A named graph with reference invariants.
#[derive(Clone, Debug)]
pub struct NamedGraph {
    pub graph: Graph,
    pub girth: usize,
    pub edge_connectivity: usize,
}

pub const GRAPH_NAMES: &[&str] = &["k3", "k4", "k5", "petersen", "heawood", "mcgee", "cube"];

fn lcf(n: usize, jumps: &[isize]) -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for i in 0..n {
        let j = (i as isize + jumps[i % jumps.len()]).rem_euclid(n as isize) as usize;
        if i < j {
            edges.push((i, j));
        }
    }
    let edges = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    Graph { n, edges }
}

pub fn named_graph(id: &str) -> Result<NamedGraph, GenError> {
    let (graph, girth, edge_connectivity) = match id {
        "k3" => (Graph::complete(3), 3, 2),
        "k4" => (Graph::complete(4), 3, 3),
        "k5" => (Graph::complete(5), 3, 4),
        "petersen" => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            let edges = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
            (Graph { n: 10, edges }, 5, 3)
        }
        "heawood" => (lcf(14, &[5, -5]), 6, 3),
        "mcgee" => (lcf(24, &[12, 7, -7]), 7, 3),
        "cube" => {
            let mut edges = Vec::new();
            for v in 0..8usize {
                for bit in 0..3 {
                    let w = v ^ (1 << bit);
                    if v < w {
                        edges.push((v, w));
                    }
                }
            }
            (Graph { n: 8, edges }, 4, 3)
        }
        other => return Err(GenError::UnknownGraph(other.to_string())),
    };
    Ok(NamedGraph {
        graph,
        girth,
        edge_connectivity,
    })
}

/// A uniformly random `rank x elements` matrix of full row rank, redrawn
/// until the rank is right. Deterministic per seed.
pub fn random_matroid(
    rank: usize,
    elements: usize,
    f: &FieldSpec,
    seed: u64,
) -> Result<RepMatroid, GenError> {
    if rank > elements {
        return Err(GenError::InvalidParameter(format!("rank {rank} exceeds {elements} elements")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RETRIES {
        let codes: Vec<u32> = (0..rank * elements).map(|_| rng.gen_range(0..f.order())).collect();
        let m = GFMatrix::from_codes(f, rank, elements, &codes).expect("codes below q");
        if m.rank() == rank {
            return Ok(RepMatroid::from_matrix(m));
        }
    }
    Err(GenError::RetriesExhausted { rank })
}

/// Resolves a generator id such as `mk4`, `mk5_dual`, `pg_2_2`,
/// `u_2_4@gf5`, `petersen@gf2` or `random_3_7@gf3`. The field defaults to
/// `default_field` when the id carries no `@gf<q>` suffix; `seed` feeds the
/// random generator.
pub fn from_id(id: &str, default_field: &FieldSpec, seed: u64) -> Result<RepMatroid, GenError> {
    let unknown = || GenError::UnknownGenerator(id.to_string());
    let (body, field) = match id.split_once('@') {
        Some((body, fq)) => {
            let q: u32 = fq.strip_prefix("gf").and_then(|s| s.parse().ok()).ok_or_else(unknown)?;
            let f = if q == default_field.order() {
                default_field.clone()
            } else {
                FieldSpec::of_order(q)?
            };
            (body, f)
        }
        None => (id, default_field.clone()),
    };
    let (base, dualize) = match body.strip_suffix("_dual") {
        Some(b) => (b, true),
        None => (body, false),
    };
    let nums = |rest: &str| -> Result<Vec<usize>, GenError> {
        rest.split('_')
            .map(|t| t.parse::<usize>().map_err(|_| unknown()))
            .collect()
    };
    let m = if let Some(t) = base.strip_prefix("mk") {
        clique(t.parse().map_err(|_| unknown())?, &field, false)?
    } else if let Some(rest) = base.strip_prefix("pg_") {
        match nums(rest)?.as_slice() {
            [dim, q] => {
                let f = if id.contains('@') {
                    if field.order() as usize != *q {
                        return Err(GenError::InvalidParameter(format!(
                            "{id}: field suffix disagrees with PG order {q}"
                        )));
                    }
                    field.clone()
                } else {
                    FieldSpec::of_order(*q as u32)?
                };
                projective_geometry(dim + 1, &f)?
            }
            _ => return Err(unknown()),
        }
    } else if let Some(rest) = base.strip_prefix("u_") {
        match nums(rest)?.as_slice() {
            [t, n] => uniform(*t, *n, &field)?,
            _ => return Err(unknown()),
        }
    } else if let Some(rest) = base.strip_prefix("random_") {
        match nums(rest)?.as_slice() {
            [r, n] => random_matroid(*r, *n, &field, seed)?,
            _ => return Err(unknown()),
        }
    } else if GRAPH_NAMES.contains(&base) {
        graphic(&named_graph(base)?.graph, &field)
    } else {
        return Err(unknown());
    };
    Ok(if dualize { m.dual() } else { m })
}
