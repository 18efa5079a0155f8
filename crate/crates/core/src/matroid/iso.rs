//! Circuit enumeration and isomorphism testing for small matroids.

use std::collections::HashSet;

use super::{MatroidError, RepMatroid};

/// Largest ground set accepted by [`CircuitProfile::new`].
pub const ISO_LIMIT: usize = 16;

/// Every circuit of a small matroid, as bitmasks over column indices,
/// together with isomorphism invariants derived from them.
#[derive(Clone, Debug)]
pub struct CircuitProfile {
    n: usize,
    rank: usize,
    circuits: Vec<u32>,
    /// `spectrum[s]` circuits of size `s`.
    spectrum: Vec<usize>,
    /// Per element: number of circuits of each size containing it.
    signature: Vec<Vec<usize>>,
}

impl CircuitProfile {
    pub fn new(m: &RepMatroid) -> Result<CircuitProfile, MatroidError> {
        let n = m.len();
        if n > ISO_LIMIT {
            return Err(MatroidError::TooLarge {
                what: "circuit enumeration",
                size: n,
                limit: ISO_LIMIT,
            });
        }
        let mut independent = vec![false; 1 << n];
        independent[0] = true;
        let mut e = m.pack().echelon();
        mark_independent(&mut e, n, 0, 0, &mut independent);

        let mut circuits = Vec::new();
        for mask in 1u32..(1 << n) {
            if independent[mask as usize] {
                continue;
            }
            let minimal = (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .all(|i| independent[(mask & !(1 << i)) as usize]);
            if minimal {
                circuits.push(mask);
            }
        }
        let mut spectrum = vec![0; n + 1];
        let mut signature = vec![vec![0; n + 1]; n];
        for &c in &circuits {
            let size = c.count_ones() as usize;
            spectrum[size] += 1;
            for (i, sig) in signature.iter_mut().enumerate() {
                if c >> i & 1 == 1 {
                    sig[size] += 1;
                }
            }
        }
        Ok(CircuitProfile {
            n,
            rank: m.rank(),
            circuits,
            spectrum,
            signature,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Circuit masks in increasing numeric order.
    pub fn circuits(&self) -> &[u32] {
        &self.circuits
    }

    /// Number of circuits of each size, indexed by size.
    pub fn spectrum(&self) -> &[usize] {
        &self.spectrum
    }

    fn sorted_signatures(&self) -> Vec<&Vec<usize>> {
        let mut s: Vec<&Vec<usize>> = self.signature.iter().collect();
        s.sort();
        s
    }

    /// Cheap necessary conditions for isomorphism.
    pub fn invariants_match(&self, other: &CircuitProfile) -> bool {
        self.n == other.n
            && self.rank == other.rank
            && self.spectrum == other.spectrum
            && self.sorted_signatures() == other.sorted_signatures()
    }
}

fn mark_independent(
    e: &mut crate::gfmatrix::Echelon<'_>,
    n: usize,
    start: usize,
    mask: u32,
    independent: &mut [bool],
) {
    for c in start..n {
        let before = e.rank();
        if e.push(c) {
            let next = mask | 1 << c;
            independent[next as usize] = true;
            mark_independent(e, n, c + 1, next, independent);
            e.truncate(before);
        }
    }
}

/// A bijection `a -> b` (by column index) mapping circuits onto circuits,
/// if one exists. With equal circuit counts, mapping every circuit of `a`
/// to a circuit of `b` already forces the circuit sets to correspond, so
/// the bijection is an isomorphism.
pub(crate) fn find_isomorphism(a: &CircuitProfile, b: &CircuitProfile) -> Option<Vec<usize>> {
    if !a.invariants_match(b) {
        return None;
    }
    let n = a.n;
    if n == 0 {
        return Some(Vec::new());
    }
    let order = search_order(a);
    let mut position = vec![0; n];
    for (d, &x) in order.iter().enumerate() {
        position[x] = d;
    }
    // circuits of `a` checked once their last element (in search order) is mapped
    let mut closing: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &c in &a.circuits {
        let last = (0..n)
            .filter(|&i| c >> i & 1 == 1)
            .map(|i| position[i])
            .max()
            .expect("circuits are nonempty");
        closing[last].push(c);
    }
    let targets: HashSet<u32> = b.circuits.iter().copied().collect();
    let mut map = vec![usize::MAX; n];
    let mut state = Search {
        a,
        b,
        order: &order,
        closing: &closing,
        targets: &targets,
    };
    state.extend(0, 0, &mut map).then_some(map)
}

/// Elements ordered so that circuits close as early as possible.
fn search_order(a: &CircuitProfile) -> Vec<usize> {
    let n = a.n;
    let mut chosen = 0u32;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..n)
            .filter(|&x| chosen >> x & 1 == 0)
            .max_by_key(|&x| {
                let with = chosen | 1 << x;
                let closed = a
                    .circuits
                    .iter()
                    .filter(|&&c| c >> x & 1 == 1 && c & !with == 0)
                    .count();
                let touching = a
                    .circuits
                    .iter()
                    .filter(|&&c| c >> x & 1 == 1 && c & chosen != 0)
                    .count();
                (closed, touching, std::cmp::Reverse(x))
            })
            .expect("unchosen element exists");
        chosen |= 1 << best;
        order.push(best);
    }
    order
}

struct Search<'a> {
    a: &'a CircuitProfile,
    b: &'a CircuitProfile,
    order: &'a [usize],
    closing: &'a [Vec<u32>],
    targets: &'a HashSet<u32>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize, used: u32, map: &mut [usize]) -> bool {
        if depth == self.a.n {
            return true;
        }
        let x = self.order[depth];
        for y in 0..self.b.n {
            if used >> y & 1 == 1 || self.a.signature[x] != self.b.signature[y] {
                continue;
            }
            map[x] = y;
            let consistent = self.closing[depth].iter().all(|&c| {
                let image = (0..self.a.n)
                    .filter(|&i| c >> i & 1 == 1)
                    .fold(0u32, |acc, i| acc | 1 << map[i]);
                self.targets.contains(&image)
            });
            if consistent && self.extend(depth + 1, used | 1 << y, map) {
                return true;
            }
            map[x] = usize::MAX;
        }
        false
    }
}
