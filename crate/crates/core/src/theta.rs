//! Θ-classes (hyperplanes) of median graphs.
//!
//! Two algorithms are provided. [`theta_classes_bfs`] runs a plain BFS and
//! finds the square partner of every non-root edge by intersecting two
//! predecessor lists, which costs `O(dm)`. [`theta_classes_lexbfs`] runs a
//! LexBFS, whose parent map has the fellow-traveler property on median
//! graphs; the square partner of an edge is then read off the parents in
//! `O(1)`, giving `O(m)` overall.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex, UNREACHED};

pub type ClassId = usize;

const NO_VERTEX: usize = usize::MAX;

/// A BFS-type order from a basepoint together with its parent map and the
/// rank-ordered predecessor lists.
#[derive(Clone, Debug)]
pub struct SearchOrder {
    v0: Vertex,
    order: Vec<Vertex>,
    rank: Vec<u32>,
    dist: Vec<u32>,
    parent: Vec<Vertex>,
    parent_edge: Vec<EdgeId>,
    pred_start: Vec<usize>,
    pred_len: Vec<u32>,
    preds: Vec<(Vertex, EdgeId)>,
}

impl SearchOrder {
    pub fn basepoint(&self) -> Vertex {
        self.v0
    }

    /// Vertices by discovery rank.
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn rank(&self, v: Vertex) -> usize {
        self.rank[v] as usize
    }

    pub fn dist(&self, v: Vertex) -> u32 {
        self.dist[v]
    }

    pub fn distances(&self) -> &[u32] {
        &self.dist
    }

    /// The parent `f(v)`; `None` for the basepoint.
    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        (self.parent[v] != NO_VERTEX).then_some(self.parent[v])
    }

    pub fn parent_edge(&self, v: Vertex) -> Option<EdgeId> {
        (self.parent[v] != NO_VERTEX).then_some(self.parent_edge[v])
    }

    /// Predecessors of `v` (neighbors one step closer to the basepoint)
    /// with the connecting edge, ordered by rank.
    pub fn preds(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        let s = self.pred_start[v];
        &self.preds[s..s + self.pred_len[v] as usize]
    }

    /// `max |Λ(v)|`, the dimension of a median graph.
    pub fn max_preds(&self) -> usize {
        self.pred_len.iter().copied().max().unwrap_or(0) as usize
    }
}

fn search(g: &Graph, v0: Vertex, lex: bool) -> SearchOrder {
    assert!(v0 < g.n(), "basepoint {v0} out of range");
    let n = g.n();
    let mut queue = vec![0usize; n];
    let mut pos = vec![0u32; n];
    let mut dist = vec![UNREACHED; n];
    let mut parent = vec![NO_VERTEX; n];
    let mut parent_edge = vec![0usize; n];
    let mut pred_len = vec![0u32; n];
    let pred_start: Vec<usize> = (0..n).map(|v| g.adj_offset(v)).collect();
    let mut preds = vec![(0usize, 0usize); 2 * g.m()];
    // Position of the first child of `u` whose only predecessor is `u`.
    let mut first_single = vec![0u32; if lex { n } else { 0 }];

    dist[v0] = 0;
    queue[0] = v0;
    let (mut head, mut tail) = (0usize, 1usize);
    while head < tail {
        let u = queue[head];
        head += 1;
        if lex {
            first_single[u] = tail as u32;
        }
        let du = dist[u];
        for &(v, e) in g.neighbors(u) {
            if dist[v] == UNREACHED {
                dist[v] = du + 1;
                parent[v] = u;
                parent_edge[v] = e;
                queue[tail] = v;
                pos[v] = tail as u32;
                tail += 1;
                preds[pred_start[v]] = (u, e);
                pred_len[v] = 1;
            } else if dist[v] == du + 1 {
                preds[pred_start[v] + pred_len[v] as usize] = (u, e);
                pred_len[v] += 1;
                if lex && pred_len[v] == 2 {
                    // `v` leaves the single-predecessor block of its parent
                    // and joins the end of the two-predecessor prefix, which
                    // stays sorted by second predecessor.
                    let p = parent[v];
                    let slot = first_single[p] as usize;
                    let at = pos[v] as usize;
                    debug_assert!(slot <= at);
                    let w = queue[slot];
                    queue.swap(slot, at);
                    pos[v] = slot as u32;
                    pos[w] = at as u32;
                    first_single[p] += 1;
                }
            }
        }
    }
    debug_assert_eq!(tail, n, "graph must be connected");
    SearchOrder {
        v0,
        order: queue,
        rank: pos,
        dist,
        parent,
        parent_edge,
        pred_start,
        pred_len,
        preds,
    }
}

/// Breadth-first search from `v0`; neighbors are enqueued in adjacency order.
pub fn bfs_order(g: &Graph, v0: Vertex) -> SearchOrder {
    search(g, v0, false)
}

/// LexBFS from `v0` using only first and second predecessors, which is a
/// complete LexBFS on median graphs. Among vertices with the same parent,
/// those with a second predecessor come first, sorted by it; ties left by
/// that rule keep adjacency order.
pub fn lexbfs_order(g: &Graph, v0: Vertex) -> SearchOrder {
    search(g, v0, true)
}

/// True iff for every edge `uv` avoiding the basepoint the parents `f(u)`
/// and `f(v)` coincide, are adjacent, or one of them is the other endpoint.
pub fn check_fellow_traveler(g: &Graph, so: &SearchOrder) -> bool {
    let v0 = so.basepoint();
    g.edges().iter().all(|&(u, v)| {
        if u == v0 || v == v0 {
            return true;
        }
        let (fu, fv) = (so.parent[u], so.parent[v]);
        fu == fv || fu == v || fv == u || g.adjacent(fu, fv)
    })
}

/// Partition of the edge set into Θ-classes, oriented by a basepoint.
///
/// Class ids follow creation order, which sorts classes by the distance
/// from the basepoint to their far halfspace `H'`. Each class lists its
/// edges in insertion order; the first is the root edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaPartition {
    v0: Vertex,
    n: usize,
    class_of: Vec<ClassId>,
    classes: Vec<Vec<EdgeId>>,
    sides: Vec<(Vertex, Vertex)>,
    class_dist: Vec<u32>,
}

impl ThetaPartition {
    pub fn basepoint(&self) -> Vertex {
        self.v0
    }

    /// Vertex count of the graph this partition was computed for.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.class_of.len()
    }

    /// Number of classes `q`.
    pub fn q(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, e: EdgeId) -> ClassId {
        self.class_of[e]
    }

    pub fn class(&self, c: ClassId) -> &[EdgeId] {
        &self.classes[c]
    }

    pub fn classes(&self) -> &[Vec<EdgeId>] {
        &self.classes
    }

    /// Class ids sorted by distance from the basepoint to `H'`.
    pub fn class_order(&self) -> std::ops::Range<ClassId> {
        0..self.classes.len()
    }

    pub fn root(&self, c: ClassId) -> EdgeId {
        self.classes[c][0]
    }

    /// `d(v0, H')` for class `c`.
    pub fn class_dist(&self, c: ClassId) -> u32 {
        self.class_dist[c]
    }

    /// `(near, far)` endpoints of `e`; `near` lies on the basepoint side.
    pub fn sides(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.sides[e]
    }

    pub fn near(&self, e: EdgeId) -> Vertex {
        self.sides[e].0
    }

    pub fn far(&self, e: EdgeId) -> Vertex {
        self.sides[e].1
    }

    /// The partition as a canonical family of sorted edge sets, for
    /// comparisons that ignore class ids.
    pub fn canonical(&self) -> Vec<Vec<EdgeId>> {
        canonical_partition(self.classes.iter().cloned())
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.n != g.n() || self.class_of.len() != g.m() {
            return Err(Error::invalid(format!(
                "Θ-partition computed for a graph with {} vertices and {} edges, got {} and {}",
                self.n,
                self.class_of.len(),
                g.n(),
                g.m()
            )));
        }
        Ok(())
    }
}

/// Sorts each block and then the family of blocks.
pub fn canonical_partition<I: IntoIterator<Item = Vec<EdgeId>>>(blocks: I) -> Vec<Vec<EdgeId>> {
    let mut out: Vec<Vec<EdgeId>> = blocks
        .into_iter()
        .map(|mut b| {
            b.sort_unstable();
            b
        })
        .collect();
    out.sort_unstable();
    out
}

struct Builder {
    class_of: Vec<ClassId>,
    classes: Vec<Vec<EdgeId>>,
    sides: Vec<(Vertex, Vertex)>,
    class_dist: Vec<u32>,
}

impl Builder {
    fn new(g: &Graph) -> Self {
        Builder {
            class_of: vec![usize::MAX; g.m()],
            classes: Vec::new(),
            sides: vec![(0, 0); g.m()],
            class_dist: Vec::new(),
        }
    }

    fn open(&mut self, e: EdgeId, near: Vertex, far: Vertex, dist: u32) {
        self.sides[e] = (near, far);
        self.class_of[e] = self.classes.len();
        self.classes.push(vec![e]);
        self.class_dist.push(dist);
    }

    fn join(&mut self, e: EdgeId, near: Vertex, far: Vertex, partner: EdgeId) -> Result<()> {
        let c = self.class_of[partner];
        if c == usize::MAX {
            return Err(Error::NotMedian(format!(
                "square partner of edge {near}-{far} is not yet classified"
            )));
        }
        self.sides[e] = (near, far);
        self.class_of[e] = c;
        self.classes[c].push(e);
        Ok(())
    }

    /// Every Θ-class of a median graph is a perfect matching between its
    /// two boundaries; a vertex seen twice in one class exposes non-median
    /// input that the square rules alone let through.
    fn finish(self, g: &Graph, v0: Vertex) -> Result<ThetaPartition> {
        let mut stamp = vec![usize::MAX; g.n()];
        for (c, edges) in self.classes.iter().enumerate() {
            for &e in edges {
                let (u, v) = g.edge(e);
                for x in [u, v] {
                    if std::mem::replace(&mut stamp[x], c) == c {
                        return Err(Error::NotMedian(format!(
                            "vertex {x} is incident to two edges of one Θ-class"
                        )));
                    }
                }
            }
        }
        Ok(ThetaPartition {
            v0,
            n: g.n(),
            class_of: self.class_of,
            classes: self.classes,
            sides: self.sides,
            class_dist: self.class_dist,
        })
    }
}

fn check_bipartite_level(so: &SearchOrder, g: &Graph) -> Result<()> {
    for &(u, v) in g.edges() {
        if so.dist(u) == so.dist(v) {
            return Err(Error::NotMedian(format!(
                "edge {u}-{v} joins two vertices at the same distance from the basepoint"
            )));
        }
    }
    Ok(())
}

/// Θ-classes in `O(dm)` from a BFS: a non-root edge `uv` (with `u` a
/// predecessor of `v`) joins the class of `u'v'`, where `v'` is another
/// predecessor of `v` and `u'` the unique common predecessor of `u` and `v'`.
pub fn theta_classes_bfs(g: &Graph, v0: Vertex) -> Result<ThetaPartition> {
    let so = bfs_order(g, v0);
    check_bipartite_level(&so, g)?;
    let mut b = Builder::new(g);
    for &v in &so.order()[1..] {
        let preds = so.preds(v);
        for &(u, e) in preds {
            if preds.len() == 1 {
                b.open(e, u, v, so.dist(v));
                continue;
            }
            let &(v2, _) = preds
                .iter()
                .find(|&&(x, _)| x != u)
                .expect("at least two predecessors");
            let partner = unique_common_pred(&so, u, v2).ok_or_else(|| {
                Error::NotMedian(format!(
                    "vertices {u} and {v2} below {v} do not have a unique common predecessor"
                ))
            })?;
            b.join(e, u, v, partner)?;
        }
    }
    b.finish(g, v0)
}

/// Merges the rank-sorted lists `Λ(u)` and `Λ(v2)`; returns the edge
/// `u'v2` when the intersection is exactly `{u'}`.
fn unique_common_pred(so: &SearchOrder, u: Vertex, v2: Vertex) -> Option<EdgeId> {
    let (a, b) = (so.preds(u), so.preds(v2));
    let (mut i, mut j) = (0, 0);
    let mut found = None;
    while i < a.len() && j < b.len() {
        let (ra, rb) = (so.rank(a[i].0), so.rank(b[j].0));
        match ra.cmp(&rb) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if found.is_some() {
                    return None;
                }
                found = Some(b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    found
}

/// Θ-classes in `O(m)` from a LexBFS. For an edge `uv` with `u ∈ Λ(v)`:
/// a singleton `Λ(v)` opens a new class; if `u ≠ f(v)` the edge is opposite
/// to `f(u)f(v)`; otherwise it is opposite to `f(x)x` for any other
/// predecessor `x` of `v`.
pub fn theta_classes_lexbfs(g: &Graph, v0: Vertex) -> Result<ThetaPartition> {
    let so = lexbfs_order(g, v0);
    check_bipartite_level(&so, g)?;
    let mut b = Builder::new(g);
    for &v in &so.order()[1..] {
        let preds = so.preds(v);
        let fv = so.parent[v];
        for &(u, e) in preds {
            if preds.len() == 1 {
                b.open(e, u, v, so.dist(v));
            } else if u != fv {
                let fu = so.parent[u];
                let partner = g.edge_between(fu, fv).ok_or_else(|| {
                    Error::NotMedian(format!(
                        "parents {fu} and {fv} of adjacent vertices {u} and {v} are not adjacent"
                    ))
                })?;
                b.join(e, u, v, partner)?;
            } else {
                let &(x, _) = preds
                    .iter()
                    .find(|&&(x, _)| x != u)
                    .expect("at least two predecessors");
                b.join(e, u, v, so.parent_edge[x])?;
            }
        }
    }
    b.finish(g, v0)
}
