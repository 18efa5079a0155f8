//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's elimination or matroid code.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use gfmatroid::generators::Graph;
use gfmatroid::{FieldElem, FieldSpec, GFMatrix, RepMatroid};

/// Moduli restated from standard Conway tables, constant term first.
pub const MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
];

/// Element codes as base-p digit vectors, constant term first.
pub fn digits(code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut rest = code;
    (0..k)
        .map(|_| {
            let d = rest % p;
            rest /= p;
            d
        })
        .collect()
}

pub fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

pub fn poly_add(a: u32, b: u32, p: u32, k: u32) -> u32 {
    let s: Vec<u32> = digits(a, p, k)
        .iter()
        .zip(digits(b, p, k))
        .map(|(x, y)| (x + y) % p)
        .collect();
    undigits(&s, p)
}

/// Schoolbook product followed by long division by the monic modulus.
pub fn poly_mul(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let k = (modulus.len() - 1) as u32;
    let (da, db) = (digits(a, p, k), digits(b, p, k));
    let mut prod = vec![0u32; 2 * k as usize];
    for (i, x) in da.iter().enumerate() {
        for (j, y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (k as usize..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for (i, m) in modulus.iter().enumerate() {
            let at = deg - k as usize + i;
            prod[at] = (prod[at] + p * p - c * m % p) % p;
        }
    }
    undigits(&prod[..k as usize], p)
}

/// Rank as `log_q` of the size of the span, built one column at a time.
pub fn span_rank(f: &FieldSpec, columns: &[Vec<FieldElem>]) -> usize {
    let Some(first) = columns.first() else {
        return 0;
    };
    let mut span: HashSet<Vec<FieldElem>> = HashSet::from([vec![FieldElem::ZERO; first.len()]]);
    for v in columns {
        if span.contains(v) {
            continue;
        }
        let mut next = HashSet::new();
        for s in &span {
            for c in f.elements() {
                next.insert(s.iter().zip(v).map(|(&x, &y)| f.add(x, f.mul(c, y))).collect());
            }
        }
        span = next;
    }
    let (mut size, mut rank) = (1usize, 0);
    while size < span.len() {
        size *= f.order() as usize;
        rank += 1;
    }
    assert_eq!(size, span.len(), "span size is a power of q");
    rank
}

pub fn columns_of(m: &GFMatrix, idx: &[usize]) -> Vec<Vec<FieldElem>> {
    idx.iter().map(|&c| m.column(c)).collect()
}

pub fn oracle_rank(m: &RepMatroid, idx: &[usize]) -> usize {
    span_rank(m.field(), &columns_of(m.matrix(), idx))
}

pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// Dependent with every one-smaller subset independent.
pub fn oracle_is_circuit(m: &RepMatroid, idx: &[usize]) -> bool {
    if oracle_rank(m, idx) == idx.len() {
        return false;
    }
    (0..idx.len()).all(|skip| {
        let rest: Vec<usize> = idx.iter().enumerate().filter(|(p, _)| *p != skip).map(|(_, &i)| i).collect();
        oracle_rank(m, &rest) == rest.len()
    })
}

/// Smallest circuit size by enumerating all subsets; `None` when free.
pub fn oracle_girth(m: &RepMatroid) -> Option<usize> {
    subsets(m.len())
        .filter(|s| oracle_rank(m, s) < s.len())
        .map(|s| s.len())
        .min()
}

/// Graph girth by breadth-first search from every vertex; loops count 1
/// and parallel edges count 2.
pub fn graph_girth(g: &Graph) -> Option<usize> {
    let edges = g.edges();
    if edges.iter().any(|(u, v)| u == v) {
        return Some(1);
    }
    let mut seen = HashSet::new();
    for &(u, v) in edges {
        if !seen.insert((u.min(v), u.max(v))) {
            return Some(2);
        }
    }
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut via = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in &adj[x] {
                if e == via[x] {
                    continue;
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    via[y] = e;
                    queue.push_back(y);
                } else {
                    let len = dist[x] + dist[y] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Size of a spanning forest, by union-find.
pub fn forest_size(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut count = 0;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            count += 1;
        }
    }
    count
}

/// Global minimum edge cut of a connected graph via unit-capacity
/// augmenting paths from vertex 0 to every other vertex.
pub fn edge_connectivity(g: &Graph) -> usize {
    let n = g.vertex_count();
    (1..n).map(|t| max_flow(n, g.edges(), 0, t)).min().unwrap_or(0)
}

fn max_flow(n: usize, edges: &[(usize, usize)], s: usize, t: usize) -> usize {
    let mut cap = vec![vec![0i32; n]; n];
    for &(u, v) in edges {
        if u != v {
            cap[u][v] += 1;
            cap[v][u] += 1;
        }
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if cap[x][y] > 0 && prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut y = t;
        while y != s {
            let x = prev[y];
            cap[x][y] -= 1;
            cap[y][x] += 1;
            y = x;
        }
        flow += 1;
    }
}

/// Columns of `m` at `idx` are equal up to a nonzero scalar.
pub fn projectively_equal(f: &FieldSpec, a: &[FieldElem], b: &[FieldElem]) -> bool {
    f.nonzero_elements().any(|c| a.iter().zip(b).all(|(&x, &y)| x == f.mul(c, y)))
}

pub fn gf(q: u32) -> FieldSpec {
    FieldSpec::of_order(q).unwrap()
}
