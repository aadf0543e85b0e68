//! Weighted graphs on {0, .., n-1}: edge list parsing, electric network
//! reduction, and seeded random instances.
//!
//! Files use 1-based vertex ids; everything in memory is 0-based. A graph is
//! always symmetric, loop-free, non-negative, and connected through its
//! positive-weight edges.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Symmetric non-negative edge weights with a connected positive-weight
/// skeleton on at least two vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    w: DMatrix<f64>,
}

impl WeightedGraph {
    /// Builds a graph from 0-based `(u, v, weight)` triples.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewVertices { min: 2, got: n });
        }
        let mut w = DMatrix::zeros(n, n);
        for &(u, v, c) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(Error::DuplicateEdge { u, v });
            }
            if w[(u, v)] != 0.0 {
                return Err(Error::DuplicateEdge {
                    u: u.min(v),
                    v: u.max(v),
                });
            }
            // the finiteness test also catches NaN
            if c <= 0.0 || !c.is_finite() {
                return Err(Error::NonPositiveWeight { u, v, w: c });
            }
            w[(u, v)] = c;
            w[(v, u)] = c;
        }
        let g = WeightedGraph { n, w };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, x: usize, y: usize) -> f64 {
        self.w[(x, y)]
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.w
    }

    /// Positive-weight edges as `(u, v, weight)` with `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.w[(u, v)] > 0.0 {
                    out.push((u, v, self.w[(u, v)]));
                }
            }
        }
        out
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.edges().iter().map(|&(_, _, c)| c).sum()
    }

    /// Sum of the weights at `x`.
    pub fn strength(&self, x: usize) -> f64 {
        (0..self.n).map(|y| self.w[(x, y)]).sum()
    }

    /// The weighted Laplacian `D - W`: positive semidefinite with a simple
    /// zero eigenvalue on a connected graph.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = DMatrix::zeros(self.n, self.n);
        for x in 0..self.n {
            let mut row_sum = 0.0;
            for y in 0..self.n {
                if y != x {
                    l[(x, y)] = -self.w[(x, y)];
                    row_sum += self.w[(x, y)];
                }
            }
            l[(x, x)] = row_sum;
        }
        l
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for (y, seen_y) in seen.iter_mut().enumerate() {
                if !*seen_y && self.w[(x, y)] > 0.0 {
                    *seen_y = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Removes vertex `x` and reroutes its weight: the surviving pair `{y, z}`
    /// gains `w(x,y) w(x,z) / strength(x)` on top of its direct weight.
    /// Surviving vertices are renumbered to `0..n-1` preserving order.
    pub fn reduce_at(&self, x: usize) -> Result<ReducedGraph> {
        if x >= self.n {
            return Err(Error::VertexOutOfRange { v: x, n: self.n });
        }
        if self.n < 3 {
            return Err(Error::TooFewVertices {
                min: 3,
                got: self.n,
            });
        }
        let survivors: Vec<usize> = (0..self.n).filter(|&v| v != x).collect();
        let m = survivors.len();
        let s = self.strength(x);
        let mut star = DMatrix::zeros(m, m);
        let mut edges = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let (y, z) = (survivors[a], survivors[b]);
                let extra = self.w[(x, y)] * self.w[(x, z)] / s;
                star[(a, b)] = extra;
                star[(b, a)] = extra;
                let c = self.w[(y, z)] + extra;
                if c > 0.0 {
                    edges.push((a, b, c));
                }
            }
        }
        let graph = WeightedGraph::from_edges(m, &edges)?;
        Ok(ReducedGraph {
            graph,
            removed: x,
            vertex_map: survivors,
            star,
        })
    }

    /// Residual of the one-vertex energy split at `x`: the weighted Dirichlet
    /// sum of `f` over the star of `x` minus its rerouted form, which is the
    /// star-correction Dirichlet sum over the other vertices plus the squared
    /// flux through `x` divided by `strength(x)`. Zero for every `f` in exact
    /// arithmetic.
    pub fn energy_split_residual(&self, x: usize, f: &[f64]) -> Result<f64> {
        if x >= self.n {
            return Err(Error::VertexOutOfRange { v: x, n: self.n });
        }
        if f.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: f.len(),
            });
        }
        let s = self.strength(x);
        let mut lhs = 0.0;
        let mut flux = 0.0;
        for y in 0..self.n {
            let d = f[y] - f[x];
            lhs += self.w[(x, y)] * d * d;
            flux += self.w[(x, y)] * d;
        }
        let mut rhs = flux * flux / s;
        for y in 0..self.n {
            if y == x {
                continue;
            }
            for z in y + 1..self.n {
                if z == x {
                    continue;
                }
                let d = f[y] - f[z];
                rhs += self.w[(x, y)] * self.w[(x, z)] / s * d * d;
            }
        }
        Ok(lhs - rhs)
    }

    /// Edge list in file form: one `u v w` line per edge, 1-based ids sorted
    /// by `(u, v)`, weights in shortest round-trip decimal form.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v, c) in self.edges() {
            out.push_str(&format!("{} {} {}\n", u + 1, v + 1, c));
        }
        out
    }
}

/// Outcome of [`WeightedGraph::reduce_at`].
#[derive(Debug, Clone)]
pub struct ReducedGraph {
    /// The reduced network on `n - 1` vertices.
    pub graph: WeightedGraph,
    /// Removed vertex, in the original numbering.
    pub removed: usize,
    /// Original id of each surviving vertex, indexed by new id.
    pub vertex_map: Vec<usize>,
    /// The rerouted star weights alone (new numbering): entry `(a, b)` is the
    /// amount added to the direct weight of the surviving pair.
    pub star: DMatrix<f64>,
}

/// Parses an edge list: one `u v w` per line, 1-based vertex ids, `#` starts
/// a comment, blank lines are skipped. The vertex count is the largest id.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected `u v w`, got {line:?}"),
            });
        }
        let u: usize = tokens[0].parse().map_err(|e| Error::Parse {
            line: idx + 1,
            msg: format!("bad vertex id {:?}: {e}", tokens[0]),
        })?;
        let v: usize = tokens[1].parse().map_err(|e| Error::Parse {
            line: idx + 1,
            msg: format!("bad vertex id {:?}: {e}", tokens[1]),
        })?;
        let w: f64 = tokens[2].parse().map_err(|e| Error::Parse {
            line: idx + 1,
            msg: format!("bad weight {:?}: {e}", tokens[2]),
        })?;
        if u == 0 || v == 0 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: "vertex ids are 1-based".into(),
            });
        }
        n = n.max(u).max(v);
        edges.push((u - 1, v - 1, w));
    }
    WeightedGraph::from_edges(n, &edges)
}

/// Connected random graph: each pair is an edge with probability `density`,
/// weights uniform in (0, 1], resampled wholesale until connected. The same
/// `(n, density, seed)` always yields the same graph.
pub fn random_graph(n: usize, density: f64, seed: u64) -> WeightedGraph {
    assert!(n >= 2, "random graph needs n >= 2");
    assert!(
        density > 0.0 && density <= 1.0,
        "density must lie in (0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100_000 {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < density {
                    edges.push((u, v, 1.0 - rng.random::<f64>()));
                }
            }
        }
        match WeightedGraph::from_edges(n, &edges) {
            Ok(g) => return g,
            Err(Error::Disconnected) => continue,
            Err(e) => unreachable!("random edges are always valid: {e}"),
        }
    }
    panic!("no connected sample after 100000 draws (n = {n}, density = {density})");
}

/// The complete graph on `n` vertices with unit weights.
pub fn complete_graph(n: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, 1.0));
        }
    }
    WeightedGraph::from_edges(n, &edges).expect("complete graph is connected")
}

// ───────────────────────────────────────────────────────────────────────────
