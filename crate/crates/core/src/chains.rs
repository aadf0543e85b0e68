//! Generators for six particle systems driven by the same edge rates: the
//! single walker, the full interchange of n labeled particles, k-particle
//! exclusion, colored exclusion, the cycle process, and the matching process.
//!
//! Every process steps the same way: picking edge `{x, y}` applies the
//! transposition of `x` and `y` to the state's representation. A generator
//! therefore carries, besides its dense matrix, the per-edge step tables;
//! projections between processes are verified exactly through them instead of
//! through floating-point matrix products.

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::perm::{self, Permutation};
use crate::spectra::{self, Tolerances};

/// Default ceiling on `n` for the factorially large state spaces
/// (interchange and colored exclusion). 7 is accepted behind an explicit
/// override; nothing larger ever is.
pub const DEFAULT_MAX_PERMUTATION_N: usize = 6;

/// Which particle system a state space belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceKind {
    /// One walker; states are vertices.
    Walk,
    /// n labeled particles, one per vertex; states are permutations.
    Interchange,
    /// k indistinguishable particles; states are k-subsets of the vertices.
    Exclusion { k: usize },
    /// Particles in color classes of the given sizes; states are color words.
    Colored { counts: Vec<usize> },
    /// A cyclic arrangement; states are Hamiltonian cycles as edge sets.
    Cycle,
    /// A pairing of all vertices; states are perfect matchings.
    Matching,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Walk => write!(f, "walk"),
            SpaceKind::Interchange => write!(f, "interchange"),
            SpaceKind::Exclusion { k } => write!(f, "exclusion(k={k})"),
            SpaceKind::Colored { counts } => {
                let parts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                write!(f, "colored({})", parts.join(","))
            }
            SpaceKind::Cycle => write!(f, "cycle"),
            SpaceKind::Matching => write!(f, "matching"),
        }
    }
}

/// An enumerated state space: kind, vertex count, and display labels in
/// enumeration order. Labels use 1-based vertex ids, matching graph files.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub kind: SpaceKind,
    pub n: usize,
    pub labels: Vec<String>,
}

impl StateSpace {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// The edge-indexed step tables of a process: `steps[e][s]` is the state
/// reached from `s` when edge `e` fires. Applying an edge twice returns to
/// `s`, so the induced generator is symmetric.
#[derive(Debug, Clone)]
pub struct EdgeAction {
    pub dim: usize,
    /// `(u, v, rate)` with `u < v`, sorted, positive rates only.
    pub edges: Vec<(usize, usize, f64)>,
    pub steps: Vec<Vec<u32>>,
}

impl EdgeAction {
    /// Writes `(-Q) v` into `out` without materializing `Q`.
    pub fn apply_neg_generator(&self, v: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (e, &(_, _, c)) in self.edges.iter().enumerate() {
            let steps = &self.steps[e];
            for s in 0..self.dim {
                let t = steps[s] as usize;
                if t != s {
                    out[s] += c * (v[s] - v[t]);
                }
            }
        }
    }

    /// Row-sum bound on the spectral radius of `-Q`.
    pub fn norm_bound(&self) -> f64 {
        2.0 * self.edges.iter().map(|&(_, _, c)| c).sum::<f64>()
    }
}

/// A symmetric generator matrix over an enumerated state space, kept together
/// with the step tables it was assembled from.
#[derive(Debug, Clone)]
pub struct Generator {
    pub space: StateSpace,
    /// Off-diagonal `(s, t)` accumulates the rates of all edges stepping `s`
    /// to `t`; each diagonal is the negated sum of its row's off-diagonals.
    pub q: DMatrix<f64>,
    action: EdgeAction,
}

impl Generator {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn action(&self) -> &EdgeAction {
        &self.action
    }

    /// Smallest non-zero eigenvalue of `-Q`.
    pub fn gap(&self, tols: &Tolerances) -> Result<f64> {
        spectra::spectral_gap(&self.q, tols)
    }

    /// Text dump: `%`-prefixed header (kind, n, states with labels), then one
    /// `row col value` triple per non-zero entry, 1-based, row-major.
    pub fn export(&self) -> String {
        let mut out = String::new();
        out.push_str("%% generator dump\n");
        out.push_str(&format!("% kind: {}\n", self.space.kind));
        out.push_str(&format!("% n: {}\n", self.space.n));
        out.push_str(&format!("% states: {}\n", self.dim()));
        for (i, label) in self.space.labels.iter().enumerate() {
            out.push_str(&format!("% state {}: {}\n", i + 1, label));
        }
        for s in 0..self.dim() {
            for t in 0..self.dim() {
                let v = self.q[(s, t)];
                if v != 0.0 {
                    out.push_str(&format!("{} {} {}\n", s + 1, t + 1, v));
                }
            }
        }
        out
    }
}

fn assemble(kind: SpaceKind, n: usize, labels: Vec<String>, action: EdgeAction) -> Generator {
    let dim = action.dim;
    let mut q = DMatrix::zeros(dim, dim);
    // diagonal accumulates per edge, in edge order, so that generators on
    // bijective state spaces agree bit for bit
    for (e, &(_, _, c)) in action.edges.iter().enumerate() {
        for s in 0..dim {
            let t = action.steps[e][s] as usize;
            if t != s {
                q[(s, t)] += c;
                q[(s, s)] -= c;
            }
        }
    }
    Generator {
        space: StateSpace { kind, n, labels },
        q,
        action,
    }
}

fn step_tables<S, F>(states: &[S], edges: &[(usize, usize, f64)], step: F) -> Vec<Vec<u32>>
where
    F: Fn(&S, usize, usize) -> u32,
{
    edges
        .iter()
        .map(|&(x, y, _)| states.iter().map(|s| step(s, x, y)).collect())
        .collect()
}

// ── Walk ───────────────────────────────────────────────────────────────────

/// The single walker: states are the vertices, `-Q` is the graph Laplacian.
pub fn build_walk(g: &WeightedGraph) -> Result<Generator> {
    let n = g.n();
    let edges = g.edges();
    let states: Vec<usize> = (0..n).collect();
    let steps = step_tables(&states, &edges, |&s, x, y| {
        (if s == x {
            y
        } else if s == y {
            x
        } else {
            s
        }) as u32
    });
    let labels = (1..=n).map(|v| v.to_string()).collect();
    Ok(assemble(
        SpaceKind::Walk,
        n,
        labels,
        EdgeAction {
            dim: n,
            edges,
            steps,
        },
    ))
}

// ── Interchange ────────────────────────────────────────────────────────────

fn interchange_action_inner(g: &WeightedGraph, max_n: usize) -> Result<EdgeAction> {
    let n = g.n();
    let cap = max_n.min(perm::MAX_ENUM_N);
    if n > cap {
        return Err(Error::SizeLimit {
            what: "interchange state space",
            limit: cap,
            got: n,
        });
    }
    let states = perm::enumerate_all(n);
    let edges = g.edges();
    let steps = step_tables(&states, &edges, |p: &Permutation, x, y| {
        p.swap_images(x, y).lehmer_rank() as u32
    });
    Ok(EdgeAction {
        dim: states.len(),
        edges,
        steps,
    })
}

/// Step tables of the interchange process without the dense matrix; use this
/// with a matrix-free gap solver when n! is large.
pub fn interchange_action(g: &WeightedGraph, max_n: usize) -> Result<EdgeAction> {
    interchange_action_inner(g, max_n)
}

/// The interchange process: states are the n! assignments of labeled
/// particles to vertices (Lehmer order); edge `{x, y}` swaps the particles
/// sitting at `x` and `y`.
pub fn build_interchange(g: &WeightedGraph) -> Result<Generator> {
    build_interchange_with_max(g, DEFAULT_MAX_PERMUTATION_N)
}

/// [`build_interchange`] with an explicit ceiling (at most 7).
pub fn build_interchange_with_max(g: &WeightedGraph, max_n: usize) -> Result<Generator> {
    let action = interchange_action_inner(g, max_n)?;
    let labels = perm::enumerate_all(g.n())
        .iter()
        .map(|p| {
            let parts: Vec<String> = p.images().iter().map(|v| (v + 1).to_string()).collect();
            parts.join(" ")
        })
        .collect();
    Ok(assemble(SpaceKind::Interchange, g.n(), labels, action))
}

// ── Exclusion ──────────────────────────────────────────────────────────────

/// k-subsets of {0, .., n-1} as bitmasks, ascending numerically, which is
/// colexicographic order on the subsets.
fn exclusion_masks(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).collect()
}

/// The exclusion process: k indistinguishable particles, at most one per
/// vertex; edge `{x, y}` moves a particle across whenever exactly one
/// endpoint is occupied.
pub fn build_exclusion(g: &WeightedGraph, k: usize) -> Result<Generator> {
    let n = g.n();
    if n > 12 {
        return Err(Error::SizeLimit {
            what: "exclusion state space",
            limit: 12,
            got: n,
        });
    }
    if k == 0 || k >= n {
        return Err(Error::BadParticleCount { k, n });
    }
    let states = exclusion_masks(n, k);
    let edges = g.edges();
    let steps = step_tables(&states, &edges, |&m, x, y| {
        let occupied_x = (m >> x) & 1;
        let occupied_y = (m >> y) & 1;
        let moved = if occupied_x != occupied_y {
            m ^ ((1 << x) | (1 << y))
        } else {
            m
        };
        states.binary_search(&moved).expect("mask stays in the space") as u32
    });
    let labels = states
        .iter()
        .map(|&m| {
            let parts: Vec<String> = (0..n)
                .filter(|&v| (m >> v) & 1 == 1)
                .map(|v| (v + 1).to_string())
                .collect();
            parts.join(" ")
        })
        .collect();
    Ok(assemble(
        SpaceKind::Exclusion { k },
        n,
        labels,
        EdgeAction {
            dim: states.len(),
            edges,
            steps,
        },
    ))
}

// ── Colored exclusion ──────────────────────────────────────────────────────

fn colored_words(n: usize, counts: &[usize]) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut remaining = counts.to_vec();
    let mut word = Vec::with_capacity(n);
    fn rec(
        remaining: &mut [usize],
        word: &mut Vec<u8>,
        n: usize,
        out: &mut Vec<Vec<u8>>,
    ) {
        if word.len() == n {
            out.push(word.clone());
            return;
        }
        for color in 0..remaining.len() {
            if remaining[color] > 0 {
                remaining[color] -= 1;
                word.push(color as u8);
                rec(remaining, word, n, out);
                word.pop();
                remaining[color] += 1;
            }
        }
    }
    rec(&mut remaining, &mut word, n, &mut out);
    out
}

/// The colored exclusion process: every vertex holds one particle, particles
/// of equal color are indistinguishable. States are color words in
/// lexicographic order; edge `{x, y}` swaps the two colors when they differ.
pub fn build_colored(g: &WeightedGraph, counts: &[usize]) -> Result<Generator> {
    build_colored_with_max(g, counts, DEFAULT_MAX_PERMUTATION_N)
}

/// [`build_colored`] with an explicit ceiling on n (at most 7).
pub fn build_colored_with_max(
    g: &WeightedGraph,
    counts: &[usize],
    max_n: usize,
) -> Result<Generator> {
    let n = g.n();
    let cap = max_n.min(perm::MAX_ENUM_N);
    if n > cap {
        return Err(Error::SizeLimit {
            what: "colored exclusion state space",
            limit: cap,
            got: n,
        });
    }
    if counts.len() < 2 {
        return Err(Error::BadColorCounts("need at least two colors".into()));
    }
    if counts.contains(&0) {
        return Err(Error::BadColorCounts("every color needs a particle".into()));
    }
    if counts.iter().sum::<usize>() != n {
        return Err(Error::BadColorCounts(format!(
            "counts sum to {}, graph has {n} vertices",
            counts.iter().sum::<usize>()
        )));
    }
    let states = colored_words(n, counts);
    let rank: HashMap<Vec<u8>, u32> = states
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i as u32))
        .collect();
    let edges = g.edges();
    let steps = step_tables(&states, &edges, |w: &Vec<u8>, x, y| {
        if w[x] == w[y] {
            rank[w]
        } else {
            let mut moved = w.clone();
            moved.swap(x, y);
            rank[&moved]
        }
    });
    let labels = states
        .iter()
        .map(|w| {
            let parts: Vec<String> = w.iter().map(|c| (c + 1).to_string()).collect();
            parts.join(" ")
        })
        .collect();
    Ok(assemble(
        SpaceKind::Colored {
            counts: counts.to_vec(),
        },
        n,
        labels,
        EdgeAction {
            dim: states.len(),
            edges,
            steps,
        },
    ))
}

// ── Cycle ──────────────────────────────────────────────────────────────────

type EdgeSet = Vec<(u8, u8)>;

fn canonical_edge_set(mut edges: EdgeSet) -> EdgeSet {
    for e in edges.iter_mut() {
        if e.0 > e.1 {
            *e = (e.1, e.0);
        }
    }
    edges.sort_unstable();
    edges
}

/// All (n-1)!/2 Hamiltonian cycles on {0, .., n-1} as canonical (sorted) edge
/// sets, ordered lexicographically.
fn cycle_states(n: usize) -> Vec<EdgeSet> {
    let mut out = Vec::new();
    for p in perm::enumerate_all(n - 1) {
        // Tour 0 -> p(0)+1 -> .. -> p(n-2)+1 -> 0; fixing the direction by
        // comparing the first and last interior vertices kills the mirror.
        if p.apply(0) > p.apply(n - 2) {
            continue;
        }
        let tour: Vec<u8> = std::iter::once(0u8)
            .chain((0..n - 1).map(|i| (p.apply(i) + 1) as u8))
            .collect();
        let edges: EdgeSet = (0..n)
            .map(|i| (tour[i], tour[(i + 1) % n]))
            .collect();
        out.push(canonical_edge_set(edges));
    }
    out.sort_unstable();
    out
}

fn relabel_edge_set(edges: &EdgeSet, x: u8, y: u8) -> EdgeSet {
    let swap = |v: u8| {
        if v == x {
            y
        } else if v == y {
            x
        } else {
            v
        }
    };
    canonical_edge_set(edges.iter().map(|&(a, b)| (swap(a), swap(b))).collect())
}

/// The cycle process: states are the Hamiltonian cycles of the complete graph
/// on the vertex set; edge `{x, y}` exchanges the roles of `x` and `y` in the
/// cycle, which leaves a cycle through `{x, y}` itself unchanged.
pub fn build_cycle(g: &WeightedGraph) -> Result<Generator> {
    let n = g.n();
    if n < 4 {
        return Err(Error::TooSmall {
            what: "cycle process",
            min: 4,
            got: n,
        });
    }
    if n > 8 {
        return Err(Error::SizeLimit {
            what: "cycle state space",
            limit: 8,
            got: n,
        });
    }
    let states = cycle_states(n);
    let rank: HashMap<EdgeSet, u32> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as u32))
        .collect();
    let edges = g.edges();
    let steps = step_tables(&states, &edges, |s: &EdgeSet, x, y| {
        rank[&relabel_edge_set(s, x as u8, y as u8)]
    });
    let labels = states.iter().map(edge_set_label).collect();
    Ok(assemble(
        SpaceKind::Cycle,
        n,
        labels,
        EdgeAction {
            dim: states.len(),
            edges,
            steps,
        },
    ))
}

fn edge_set_label(s: &EdgeSet) -> String {
    let parts: Vec<String> = s
        .iter()
        .map(|&(a, b)| format!("{}-{}", a + 1, b + 1))
        .collect();
    parts.join(" ")
}

// ── Matching ───────────────────────────────────────────────────────────────

/// All perfect matchings of {0, .., n-1} (n even) as sorted pair lists. The
/// enumeration repeatedly pairs the smallest free vertex with every larger
/// free vertex in ascending order, so the resulting order is lexicographic
/// in the partner word.
fn matching_states(n: usize) -> Vec<EdgeSet> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    let free: Vec<u8> = (0..n as u8).collect();
    fn rec(free: &[u8], acc: &mut EdgeSet, out: &mut Vec<EdgeSet>) {
        if free.is_empty() {
            out.push(acc.clone());
            return;
        }
        let a = free[0];
        for i in 1..free.len() {
            let b = free[i];
            let rest: Vec<u8> = free[1..]
                .iter()
                .filter(|&&v| v != b)
                .copied()
                .collect();
            acc.push((a, b));
            rec(&rest, acc, out);
            acc.pop();
        }
    }
    rec(&free, &mut acc, &mut out);
    out
}

/// The matching process: states are the perfect matchings of the vertex set;
/// edge `{x, y}` rewires the partners of `x` and `y` (a no-op when `x` and
/// `y` are already matched to each other).
pub fn build_matching(g: &WeightedGraph) -> Result<Generator> {
    let n = g.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OddVertexCount { n });
    }
    if n < 4 {
        return Err(Error::TooSmall {
            what: "matching process",
            min: 4,
            got: n,
        });
    }
    if n > 10 {
        return Err(Error::SizeLimit {
            what: "matching state space",
            limit: 10,
            got: n,
        });
    }
    let states = matching_states(n);
    let rank: HashMap<EdgeSet, u32> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as u32))
        .collect();
    let edges = g.edges();
    let steps = step_tables(&states, &edges, |s: &EdgeSet, x, y| {
        rank[&relabel_edge_set(s, x as u8, y as u8)]
    });
    let labels = states.iter().map(edge_set_label).collect();
    Ok(assemble(
        SpaceKind::Matching,
        n,
        labels,
        EdgeAction {
            dim: states.len(),
            edges,
            steps,
        },
    ))
}

// ── Projections ────────────────────────────────────────────────────────────

/// A surjection of one state space onto another that the two generators
/// commute with.
#[derive(Debug, Clone)]
pub struct ContractionMap {
    /// Target index of every source state.
    pub map: Vec<u32>,
    pub source_dim: usize,
    pub target_dim: usize,
}

impl ContractionMap {
    /// The 0/1 lift matrix `P` with `P[s][t] = 1` iff `s` projects to `t`.
    pub fn lift_matrix(&self) -> DMatrix<f64> {
        let mut p = DMatrix::zeros(self.source_dim, self.target_dim);
        for (s, &t) in self.map.iter().enumerate() {
            p[(s, t as usize)] = 1.0;
        }
        p
    }

    /// How many source states sit over each target state.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.target_dim];
        for &t in &self.map {
            sizes[t as usize] += 1;
        }
        sizes
    }
}

fn positions_of_label(p: &Permutation) -> Permutation {
    p.inverse()
}

/// Builds the canonical projection from `source` onto `target`:
///
/// * interchange -> walk: follow the particle labeled 1;
/// * interchange -> exclusion(k): keep the set occupied by labels 1..k;
/// * interchange -> colored: color labels by consecutive blocks of the counts;
/// * colored -> exclusion(k): keep the first color (its count must be k);
/// * interchange -> cycle: thread the cycle through labels 1, 2, .., n, 1;
/// * interchange -> matching: pair label i with label i + n/2.
pub fn contraction(source: &Generator, target: &Generator) -> Result<ContractionMap> {
    let n = source.space.n;
    if n != target.space.n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: target.space.n,
        });
    }
    let incompatible = || Error::IncompatibleKinds {
        from: source.space.kind.to_string(),
        to: target.space.kind.to_string(),
    };
    let map: Vec<u32> = match (&source.space.kind, &target.space.kind) {
        (SpaceKind::Interchange, SpaceKind::Walk) => perm::enumerate_all(n)
            .iter()
            .map(|p| positions_of_label(p).apply(0) as u32)
            .collect(),
        (SpaceKind::Interchange, SpaceKind::Exclusion { k }) => {
            let masks = exclusion_masks(n, *k);
            perm::enumerate_all(n)
                .iter()
                .map(|p| {
                    let xi = positions_of_label(p);
                    let mask = (0..*k).fold(0u32, |m, label| m | (1 << xi.apply(label)));
                    masks.binary_search(&mask).expect("a k-set of positions") as u32
                })
                .collect()
        }
        (SpaceKind::Interchange, SpaceKind::Colored { counts }) => {
            let mut color_of_label = Vec::with_capacity(n);
            for (color, &size) in counts.iter().enumerate() {
                color_of_label.extend(std::iter::repeat_n(color as u8, size));
            }
            let states = colored_words(n, counts);
            let rank: HashMap<Vec<u8>, u32> = states
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), i as u32))
                .collect();
            perm::enumerate_all(n)
                .iter()
                .map(|p| {
                    let word: Vec<u8> =
                        (0..n).map(|x| color_of_label[p.apply(x)]).collect();
                    rank[&word]
                })
                .collect()
        }
        (SpaceKind::Colored { counts }, SpaceKind::Exclusion { k }) => {
            if counts[0] != *k {
                return Err(incompatible());
            }
            let masks = exclusion_masks(n, *k);
            colored_words(n, counts)
                .iter()
                .map(|w| {
                    let mask = w
                        .iter()
                        .enumerate()
                        .filter(|&(_, &c)| c == 0)
                        .fold(0u32, |m, (x, _)| m | (1 << x));
                    masks.binary_search(&mask).expect("a k-set of positions") as u32
                })
                .collect()
        }
        (SpaceKind::Interchange, SpaceKind::Cycle) => {
            let states = cycle_states(n);
            let rank: HashMap<EdgeSet, u32> = states
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i as u32))
                .collect();
            perm::enumerate_all(n)
                .iter()
                .map(|p| {
                    let xi = positions_of_label(p);
                    let edges: EdgeSet = (0..n)
                        .map(|i| (xi.apply(i) as u8, xi.apply((i + 1) % n) as u8))
                        .collect();
                    rank[&canonical_edge_set(edges)]
                })
                .collect()
        }
        (SpaceKind::Interchange, SpaceKind::Matching) => {
            let k = n / 2;
            if !n.is_multiple_of(2) {
                return Err(incompatible());
            }
            let states = matching_states(n);
            let rank: HashMap<EdgeSet, u32> = states
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i as u32))
                .collect();
            perm::enumerate_all(n)
                .iter()
                .map(|p| {
                    let xi = positions_of_label(p);
                    let pairs: EdgeSet = (0..k)
                        .map(|i| (xi.apply(i) as u8, xi.apply(i + k) as u8))
                        .collect();
                    rank[&canonical_edge_set(pairs)]
                })
                .collect()
        }
        _ => return Err(incompatible()),
    };
    if map.len() != source.dim() {
        return Err(Error::DimensionMismatch {
            expected: source.dim(),
            got: map.len(),
        });
    }
    let cmap = ContractionMap {
        map,
        source_dim: source.dim(),
        target_dim: target.dim(),
    };
    if cmap.fiber_sizes().contains(&0) {
        return Err(Error::Certification("projection is not surjective".into()));
    }
    Ok(cmap)
}

/// Largest entry of `Q1 P - P Q2` for the lift `P` of the projection.
///
/// Both sides weigh the same edge rates with 0/1 coefficients, so the
/// difference is accumulated rate by rate: whenever the projected source step
/// and the target step disagree, the edge's rate lands on the two offending
/// entries with opposite signs. A commuting projection returns exactly zero.
pub fn verify_intertwining(
    source: &Generator,
    target: &Generator,
    cmap: &ContractionMap,
) -> Result<f64> {
    if cmap.source_dim != source.dim() || cmap.target_dim != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: source.dim(),
            got: cmap.source_dim,
        });
    }
    let se = &source.action().edges;
    let te = &target.action().edges;
    if se.len() != te.len()
        || se
            .iter()
            .zip(te)
            .any(|(a, b)| a.0 != b.0 || a.1 != b.1 || a.2 != b.2)
    {
        return Err(Error::Certification(
            "generators were built over different edge lists".into(),
        ));
    }
    let mut worst = 0.0f64;
    let mut row: HashMap<u32, f64> = HashMap::new();
    for s in 0..source.dim() {
        row.clear();
        for (e, &(_, _, c)) in se.iter().enumerate() {
            let via_source = cmap.map[source.action().steps[e][s] as usize];
            let via_target = target.action().steps[e][cmap.map[s] as usize];
            if via_source != via_target {
                *row.entry(via_source).or_insert(0.0) += c;
                *row.entry(via_target).or_insert(0.0) -= c;
            }
        }
        for v in row.values() {
            worst = worst.max(v.abs());
        }
    }
    Ok(worst)
}

// ───────────────────────────────────────────────────────────────────────────
