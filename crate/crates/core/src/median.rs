//! Weighted medians of median graphs by peripheral peeling.
//!
//! Peeling contracts the Θ-classes from the farthest to the closest one.
//! At the moment a class is contracted its far halfspace is peripheral,
//! so the weight of `H'` can be read off the far endpoints of the edges
//! that are still alive, and all later sums stay exact because the far
//! weights are folded into the near endpoints.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex, WeightFn};
use crate::rational::Rational;
use crate::theta::{ClassId, ThetaPartition};

/// Largest vertex count [`distance_matrix`] accepts unless told otherwise.
pub const DEFAULT_DISTANCE_CAP: usize = 32768;

/// Weights of the two halfspaces of every class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceWeights {
    near: Vec<Rational>,
    far: Vec<Rational>,
    total: Rational,
}

impl HalfspaceWeights {
    pub fn q(&self) -> usize {
        self.near.len()
    }

    /// `w(H'')`, the side containing the basepoint.
    pub fn near(&self, c: ClassId) -> &Rational {
        &self.near[c]
    }

    /// `w(H')`.
    pub fn far(&self, c: ClassId) -> &Rational {
        &self.far[c]
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn tag(&self, c: ClassId) -> ClassTag {
        match self.far[c].cmp(&self.near[c]) {
            std::cmp::Ordering::Greater => ClassTag::MajoritaryFar,
            std::cmp::Ordering::Less => ClassTag::MajoritaryNear,
            std::cmp::Ordering::Equal => ClassTag::Egalitarian,
        }
    }
}

/// Which halfspace of a class carries strictly more than half the weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassTag {
    /// `H'` (away from the basepoint) is majoritary.
    MajoritaryFar,
    /// `H''` (the basepoint side) is majoritary.
    MajoritaryNear,
    Egalitarian,
}

impl ClassTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::MajoritaryFar => "majoritary-far",
            ClassTag::MajoritaryNear => "majoritary-near",
            ClassTag::Egalitarian => "egalitarian",
        }
    }
}

impl std::fmt::Display for ClassTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The edges alive when each class is contracted, as `(far, near)` pairs.
#[derive(Clone, Debug)]
pub struct Peeling {
    offsets: Vec<usize>,
    pairs: Vec<(Vertex, Vertex)>,
}

impl Peeling {
    pub fn alive(&self, c: ClassId) -> &[(Vertex, Vertex)] {
        &self.pairs[self.offsets[c]..self.offsets[c + 1]]
    }
}

/// Runs the peeling without weights and records, per class, the edges
/// whose endpoints are both still uncontracted.
pub fn peripheral_peeling(g: &Graph, tp: &ThetaPartition) -> Result<Peeling> {
    tp.check_graph(g)?;
    let mut contracted = vec![false; g.n()];
    let mut per_class: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); tp.q()];
    for c in tp.class_order().rev() {
        for &e in tp.class(c) {
            let (near, far) = tp.sides(e);
            if !contracted[near] && !contracted[far] {
                per_class[c].push((far, near));
            }
        }
        for &(far, _) in &per_class[c] {
            contracted[far] = true;
        }
    }
    let mut offsets = Vec::with_capacity(tp.q() + 1);
    offsets.push(0);
    let mut pairs = Vec::new();
    for p in per_class {
        pairs.extend(p);
        offsets.push(pairs.len());
    }
    Ok(Peeling { offsets, pairs })
}

/// `w(H'')` and `w(H')` for every class in `O(m)` rational additions.
pub fn halfspace_weights(g: &Graph, w: &WeightFn, tp: &ThetaPartition) -> Result<HalfspaceWeights> {
    tp.check_graph(g)?;
    if w.len() != g.n() {
        return Err(Error::invalid(format!(
            "weight function has {} entries for {} vertices",
            w.len(),
            g.n()
        )));
    }
    Ok(weights_by_peeling(tp, w.as_slice().to_vec()))
}

pub(crate) fn weights_by_peeling(tp: &ThetaPartition, mut cur: Vec<Rational>) -> HalfspaceWeights {
    let total: Rational = cur.iter().sum();
    let mut contracted = vec![false; cur.len()];
    let mut near = vec![Rational::zero(); tp.q()];
    let mut far = vec![Rational::zero(); tp.q()];
    let mut alive = Vec::new();
    for c in tp.class_order().rev() {
        alive.clear();
        let mut far_sum = Rational::zero();
        for &e in tp.class(c) {
            let (u, v) = tp.sides(e);
            if !contracted[u] && !contracted[v] {
                far_sum += &cur[v];
                alive.push((u, v));
            }
        }
        for &(u, v) in &alive {
            let moved = std::mem::take(&mut cur[v]);
            cur[u] += &moved;
            contracted[v] = true;
        }
        near[c] = &total - &far_sum;
        far[c] = far_sum;
    }
    HalfspaceWeights { near, far, total }
}

/// The median set together with the class tags it was derived from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MedianResult {
    vertices: Vec<Vertex>,
    member: Vec<bool>,
    induced_edges: Vec<EdgeId>,
    classification: Vec<ClassTag>,
}

impl MedianResult {
    /// Sorted vertices of `Med_w(G)`.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.member[v]
    }

    pub fn induced_edges(&self) -> &[EdgeId] {
        &self.induced_edges
    }

    pub fn classification(&self) -> &[ClassTag] {
        &self.classification
    }
}

/// Med_w(G) as the sinks of the orientation that points every edge toward
/// the strictly heavier halfspace of its class. Egalitarian classes stay
/// undirected. With `w(V) = 0` every class is egalitarian and every vertex
/// is returned.
pub fn median_set(g: &Graph, tp: &ThetaPartition, hw: &HalfspaceWeights) -> Result<MedianResult> {
    tp.check_graph(g)?;
    if hw.q() != tp.q() {
        return Err(Error::invalid(format!(
            "halfspace weights cover {} classes, partition has {}",
            hw.q(),
            tp.q()
        )));
    }
    let classification: Vec<ClassTag> = (0..tp.q()).map(|c| hw.tag(c)).collect();
    let mut member = vec![true; g.n()];
    for e in 0..g.m() {
        let (near, far) = tp.sides(e);
        match classification[tp.class_of(e)] {
            ClassTag::MajoritaryFar => member[near] = false,
            ClassTag::MajoritaryNear => member[far] = false,
            ClassTag::Egalitarian => {}
        }
    }
    let vertices = (0..g.n()).filter(|&v| member[v]).collect();
    let induced_edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(_, &(u, v))| member[u] && member[v])
        .map(|(e, _)| e)
        .collect();
    Ok(MedianResult {
        vertices,
        member,
        induced_edges,
        classification,
    })
}

/// A pair `(u, v)` with `I(u, v) = Med_w(G)`.
///
/// One BFS from the smallest positive-weight vertex `v1`: `u` is the gate
/// of `v1` in the median set and `v` the median vertex farthest from `v1`
/// (smallest id on ties). Gatedness makes `v` also farthest from `u`.
pub fn diametral_pair(g: &Graph, w: &WeightFn, med: &MedianResult) -> Result<(Vertex, Vertex)> {
    let v1 = (0..w.len())
        .find(|&v| w.get(v).is_positive())
        .ok_or_else(|| Error::invalid("zero total weight"))?;
    if med.member.len() != g.n() || w.len() != g.n() {
        return Err(Error::invalid(
            "median set or weights sized for another graph",
        ));
    }
    let dist = g.bfs_distances(v1);
    let mut gate: Option<Vertex> = None;
    let mut far: Option<Vertex> = None;
    for &x in &med.vertices {
        if gate.is_none_or(|u| dist[x] < dist[u]) {
            gate = Some(x);
        }
        if far.is_none_or(|v| dist[x] > dist[v]) {
            far = Some(x);
        }
    }
    match (gate, far) {
        (Some(u), Some(v)) => Ok((u, v)),
        _ => Err(Error::Invariant("empty median set".into())),
    }
}

/// `Σ w(H') · w(H'')` over all classes, which is the sum of
/// `w(u) w(v) d(u, v)` over unordered vertex pairs.
pub fn wiener_index(hw: &HalfspaceWeights) -> Rational {
    hw.near.iter().zip(&hw.far).map(|(a, b)| a * b).sum()
}

/// Dense all-pairs distance table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> u32 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: Vertex) -> &[u32] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    fn set(&mut self, u: Vertex, v: Vertex, d: u32) {
        self.data[u * self.n + v] = d;
        self.data[v * self.n + u] = d;
    }
}

/// All distances in `O(n²)` by undoing the peeling.
///
/// Classes are re-inserted from the basepoint outward. When the far
/// boundary of class `i` comes back, each new vertex `u'` with near
/// neighbor `u''` is one step farther than `u''` from every vertex
/// already present, and two new vertices are as far apart as their near
/// neighbors.
pub fn distance_matrix(g: &Graph, tp: &ThetaPartition, cap: usize) -> Result<DistanceMatrix> {
    let n = g.n();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "distance matrix vertex count",
            size: n,
            cap,
        });
    }
    let peeling = peripheral_peeling(g, tp)?;
    let mut dm = DistanceMatrix {
        n,
        data: vec![u32::MAX; n * n],
    };
    let mut present = Vec::with_capacity(n);
    present.push(tp.basepoint());
    dm.set(tp.basepoint(), tp.basepoint(), 0);
    for c in tp.class_order() {
        let alive = peeling.alive(c);
        for &(far, near) in alive {
            for &x in &present {
                let d = dm.get(near, x) + 1;
                dm.set(far, x, d);
            }
        }
        for &(a, a_near) in alive {
            for &(b, b_near) in alive {
                let d = dm.get(a_near, b_near);
                dm.data[a * n + b] = d;
            }
        }
        present.extend(alive.iter().map(|&(far, _)| far));
    }
    if present.len() != n {
        return Err(Error::Invariant(format!(
            "peeling reached {} of {} vertices",
            present.len(),
            n
        )));
    }
    Ok(dm)
}
