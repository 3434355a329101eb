//! Undirected simple connected graphs, vertex weights, and elementary
//! metric utilities (BFS distances, intervals, medians of triples).

use std::collections::VecDeque;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Vertex = usize;
pub type EdgeId = usize;

/// Marker for "not reached" in distance arrays.
pub const UNREACHED: u32 = u32::MAX;

/// An immutable, undirected, simple, connected graph on `0..n`.
///
/// Edge ids are positions in the input edge list. Adjacency lists keep the
/// order in which edges were given, which fixes the tie-break of every
/// search in this crate.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    offsets: Vec<usize>,
    adj: Vec<(Vertex, EdgeId)>,
    lookup: FxHashMap<(u32, u32), u32>,
}

fn key(u: Vertex, v: Vertex) -> (u32, u32) {
    if u < v {
        (u as u32, v as u32)
    } else {
        (v as u32, u as u32)
    }
}

impl Graph {
    /// Builds and validates a graph. Rejects loops, parallel edges,
    /// out-of-range endpoints and disconnected inputs.
    pub fn from_edges(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let g = Self::build(n, edges)?;
        if !g.is_connected() {
            return Err(Error::invalid("graph is disconnected"));
        }
        Ok(g)
    }

    fn build(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph has no vertices"));
        }
        if n > u32::MAX as usize - 1 || edges.len() > u32::MAX as usize {
            return Err(Error::invalid("graph too large"));
        }
        let mut lookup = FxHashMap::default();
        lookup.reserve(edges.len());
        let mut degree = vec![0usize; n + 1];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge {id} ({u},{v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("edge {id} is a loop at {u}")));
            }
            if lookup.insert(key(u, v), id as u32).is_some() {
                return Err(Error::invalid(format!("duplicate edge {u}-{v}")));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![(0, 0); 2 * edges.len()];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[fill[u]] = (v, id);
            fill[u] += 1;
            adj[fill[v]] = (u, id);
            fill[v] += 1;
        }
        Ok(Graph {
            n,
            edges,
            offsets,
            adj,
            lookup,
        })
    }

    fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|&d| d != UNREACHED)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// `(neighbor, edge id)` pairs of `v` in input order.
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Start of `v`'s slot in a flat per-vertex buffer of total size `2m`
    /// laid out like the adjacency lists.
    pub(crate) fn adj_offset(&self, v: Vertex) -> usize {
        self.offsets[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.lookup.get(&key(u, v)).map(|&e| e as usize)
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_between(u, v).is_some()
    }

    /// Unweighted single-source distances.
    pub fn bfs_distances(&self, source: Vertex) -> Vec<u32> {
        assert!(source < self.n, "source {source} out of range");
        let mut dist = vec![UNREACHED; self.n];
        let mut queue = VecDeque::with_capacity(self.n);
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &(v, _) in self.neighbors(u) {
                if dist[v] == UNREACHED {
                    dist[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Vertices on shortest `(u, v)`-paths, sorted.
    pub fn interval(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let du = self.bfs_distances(u);
        let dv = self.bfs_distances(v);
        let target = du[v];
        (0..self.n).filter(|&x| du[x] + dv[x] == target).collect()
    }

    /// Median of a triple: the unique vertex of `I(x,y) ∩ I(y,z) ∩ I(z,x)`,
    /// or the size of the intersection when it is not a singleton.
    pub fn median_of_triple(&self, x: Vertex, y: Vertex, z: Vertex) -> TripleMedian {
        let dx = self.bfs_distances(x);
        let dy = self.bfs_distances(y);
        let dz = self.bfs_distances(z);
        let (xy, yz, zx) = (dx[y], dy[z], dz[x]);
        let common: Vec<Vertex> = (0..self.n)
            .filter(|&t| dx[t] + dy[t] == xy && dy[t] + dz[t] == yz && dz[t] + dx[t] == zx)
            .collect();
        match common.as_slice() {
            [m] => TripleMedian::Unique(*m),
            _ => TripleMedian::NotUnique(common.len()),
        }
    }

    /// Serializes in the text graph format accepted by [`load_graph`].
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 * (self.m() + 1));
        let _ = writeln!(out, "{} {}", self.n, self.m());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Outcome of [`Graph::median_of_triple`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleMedian {
    Unique(Vertex),
    /// The triple intersection is empty (0) or has several vertices.
    NotUnique(usize),
}

/// Non-negative exact vertex weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFn {
    weights: Vec<Rational>,
}

impl WeightFn {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(v) = weights.iter().position(Rational::is_negative) {
            return Err(Error::invalid(format!("negative weight at vertex {v}")));
        }
        Ok(WeightFn { weights })
    }

    pub fn uniform(n: usize) -> Self {
        WeightFn {
            weights: vec![Rational::one(); n],
        }
    }

    pub fn zeros(n: usize) -> Self {
        WeightFn {
            weights: vec![Rational::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, v: Vertex) -> &Rational {
        &self.weights[v]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.weights
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what}: {tok:?}")))
}

/// Parses the text graph format: a header `n m`, then `m` lines `u v`.
/// Blank lines and lines starting with `#` are ignored.
pub fn load_graph(text: &str) -> Result<Graph> {
    let mut lines = data_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty graph file"))?;
    let mut toks = header.split_whitespace();
    let n = parse_usize(hl, toks.next(), "vertex count")?;
    let m = parse_usize(hl, toks.next(), "edge count")?;
    if toks.next().is_some() {
        return Err(Error::parse(hl, "trailing tokens in header"));
    }
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let u = parse_usize(ln, toks.next(), "endpoint")?;
        let v = parse_usize(ln, toks.next(), "endpoint")?;
        if toks.next().is_some() {
            return Err(Error::parse(ln, "trailing tokens in edge line"));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(
            hl,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

/// Parses a weight file: lines `v p/q` or `v p`. Unlisted vertices weigh 0;
/// a vertex listed twice is an error.
pub fn load_weights(text: &str, n: usize) -> Result<WeightFn> {
    let mut weights = vec![Rational::zero(); n];
    let mut seen = vec![false; n];
    for (ln, line) in data_lines(text) {
        let mut toks = line.split_whitespace();
        let v = parse_usize(ln, toks.next(), "vertex")?;
        if v >= n {
            return Err(Error::parse(ln, format!("vertex {v} outside 0..{n}")));
        }
        let tok = toks
            .next()
            .ok_or_else(|| Error::parse(ln, "missing weight"))?;
        let w: Rational = tok.parse().map_err(|e| Error::parse(ln, format!("{e}")))?;
        if w.is_negative() {
            return Err(Error::parse(ln, "negative weight"));
        }
        if toks.next().is_some() {
            return Err(Error::parse(ln, "trailing tokens in weight line"));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::parse(ln, format!("vertex {v} listed twice")));
        }
        weights[v] = w;
    }
    WeightFn::new(weights)
}
