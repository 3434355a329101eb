//! Exhaustive structural checks: median-graph recognition, all-pairs
//! distances, Θ by square closure, and LexBFS order validation.

use fixedbitset::FixedBitSet;
use median_core::graph::{EdgeId, Graph, Vertex};
use median_core::{Error, Result};

/// Default vertex cap for [`verify_median_graph`].
pub const DEFAULT_VERIFY_CAP: usize = 300;

/// All-pairs BFS distances in a dense table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Apsp {
    n: usize,
    data: Vec<u32>,
}

impl Apsp {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> u32 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: Vertex) -> &[u32] {
        &self.data[u * self.n..(u + 1) * self.n]
    }
}

pub fn apsp_bfs(g: &Graph) -> Apsp {
    let n = g.n();
    let mut data = Vec::with_capacity(n * n);
    for u in 0..n {
        data.extend(g.bfs_distances(u));
    }
    Apsp { n, data }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MedianCheck {
    Median,
    /// A triple whose three pairwise intervals meet in `count != 1` vertices.
    Witness {
        triple: (Vertex, Vertex, Vertex),
        count: usize,
    },
}

/// Checks every triple for a unique median with bitset intervals.
/// Memory grows as `n³/16` bits, hence the cap.
pub fn verify_median_graph(g: &Graph, cap: usize) -> Result<MedianCheck> {
    let n = g.n();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "median verification vertex count",
            size: n,
            cap,
        });
    }
    let d = apsp_bfs(g);
    // interval[x][y - x - 1] for x < y.
    let interval: Vec<Vec<FixedBitSet>> = (0..n)
        .map(|x| {
            (x + 1..n)
                .map(|y| {
                    let dxy = d.get(x, y);
                    let mut s = FixedBitSet::with_capacity(n);
                    for v in 0..n {
                        if d.get(x, v) + d.get(v, y) == dxy {
                            s.insert(v);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let iv = |a: usize, b: usize| &interval[a][b - a - 1];
    let mut meet = FixedBitSet::with_capacity(n);
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                meet.clone_from(iv(x, y));
                meet.intersect_with(iv(y, z));
                let count = meet.intersection_count(iv(x, z));
                if count != 1 {
                    return Ok(MedianCheck::Witness {
                        triple: (x, y, z),
                        count,
                    });
                }
            }
        }
    }
    Ok(MedianCheck::Median)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Θ as the transitive closure of "opposite in a 4-cycle", by union-find
/// over every square. Returns the canonical partition: sorted classes in
/// sorted order.
pub fn brute_theta(g: &Graph) -> Vec<Vec<EdgeId>> {
    let mut parent: Vec<usize> = (0..g.m()).collect();
    let mut unite = |a: EdgeId, b: EdgeId| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for u in 0..g.n() {
        let nb = g.neighbors(u);
        for (i, &(a, ua)) in nb.iter().enumerate() {
            for &(b, ub) in &nb[i + 1..] {
                // Squares u-a-x-b: ua is opposite bx and ub is opposite ax.
                for &(x, ax) in g.neighbors(a) {
                    if x == u {
                        continue;
                    }
                    if let Some(bx) = g.edge_between(b, x) {
                        unite(ua, bx);
                        unite(ub, ax);
                    }
                }
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<EdgeId>> = Default::default();
    for e in 0..g.m() {
        let r = find(&mut parent, e);
        blocks.entry(r).or_default().push(e);
    }
    let mut out: Vec<Vec<EdgeId>> = blocks.into_values().collect();
    out.sort_unstable();
    out
}

/// Whether `order` is a LexBFS order: for positions `a < b < c` with
/// `ac ∈ E` and `ab ∉ E` some `d < a` has `db ∈ E` and `dc ∉ E`.
pub fn is_lexbfs_order(g: &Graph, order: &[Vertex]) -> bool {
    let n = g.n();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    let adj = |i: usize, j: usize| g.adjacent(order[i], order[j]);
    for a in 0..n {
        for c in a + 2..n {
            if !adj(a, c) {
                continue;
            }
            for b in a + 1..c {
                if !adj(a, b) && !(0..a).any(|d| adj(d, b) && !adj(d, c)) {
                    return false;
                }
            }
        }
    }
    true
}
