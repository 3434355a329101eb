//! Median graph generators. Random kinds are deterministic in their seed.

use median_core::graph::Graph;
use median_core::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Vertex cap for generated graphs unless a caller asks for more.
pub const DEFAULT_GEN_CAP: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Path on `n` vertices.
    Path(usize),
    Hypercube(usize),
    Grid(usize, usize),
    /// Cartesian product of paths with the given vertex counts.
    ProductOfPaths(Vec<usize>),
    RandomTree {
        n: usize,
        seed: u64,
    },
    RandomMedian {
        dim: usize,
        seeds: usize,
        seed: u64,
    },
}

pub fn generate(kind: &GeneratorKind, cap: usize) -> Result<Graph> {
    let check = |size: usize| {
        if size > cap {
            Err(Error::CapExceeded {
                what: "generated vertex count",
                size,
                cap,
            })
        } else {
            Ok(())
        }
    };
    let positive = |ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "generator parameters must be positive: {kind:?}"
            )))
        }
    };
    match kind {
        GeneratorKind::Path(n) => {
            positive(*n > 0)?;
            check(*n)?;
            Ok(path(*n))
        }
        GeneratorKind::Hypercube(d) => {
            check(
                1usize
                    .checked_shl(*d as u32)
                    .filter(|_| *d < 40)
                    .unwrap_or(usize::MAX),
            )?;
            Ok(hypercube(*d))
        }
        GeneratorKind::Grid(r, c) => {
            positive(*r > 0 && *c > 0)?;
            check(r.saturating_mul(*c))?;
            Ok(grid(*r, *c))
        }
        GeneratorKind::ProductOfPaths(lens) => {
            positive(!lens.is_empty() && lens.iter().all(|&l| l > 0))?;
            check(lens.iter().fold(1usize, |a, &l| a.saturating_mul(l)))?;
            Ok(product_of_paths(lens))
        }
        GeneratorKind::RandomTree { n, seed } => {
            positive(*n > 0)?;
            check(*n)?;
            Ok(random_tree(*n, *seed))
        }
        GeneratorKind::RandomMedian { dim, seeds, seed } => {
            positive(*dim > 0 && *seeds > 0)?;
            if *dim > 24 {
                return Err(Error::CapExceeded {
                    what: "random-median dimension",
                    size: *dim,
                    cap: 24,
                });
            }
            check(1 << dim)?;
            Ok(random_median(*dim, *seeds, *seed).graph)
        }
    }
}

pub fn path(n: usize) -> Graph {
    product_of_paths(&[n])
}

/// Vertex ids are the bit vectors of `Q_d`.
pub fn hypercube(d: usize) -> Graph {
    product_of_paths(&vec![2; d])
}

/// Vertex `(r, c)` has id `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    product_of_paths(&[cols, rows])
}

/// Mixed-radix ids with the first factor varying fastest.
pub fn product_of_paths(lens: &[usize]) -> Graph {
    let n: usize = lens.iter().product();
    let mut edges = Vec::new();
    for v in 0..n {
        let mut stride = 1;
        for &len in lens {
            if (v / stride) % len + 1 < len {
                edges.push((v, v + stride));
            }
            stride *= len;
        }
    }
    Graph::from_edges(n, edges).expect("products of paths are connected")
}

/// Uniform random recursive tree with shuffled labels.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut rng);
    let edges = (1..n)
        .map(|i| (label[rng.gen_range(0..i)], label[i]))
        .collect();
    Graph::from_edges(n, edges).expect("trees are connected")
}

/// A median-stable subset of a hypercube and the graph it induces.
#[derive(Clone, Debug)]
pub struct RandomMedian {
    pub graph: Graph,
    /// Bit vector of every vertex over the kept coordinates.
    pub labels: Vec<u64>,
    pub dim: usize,
}

/// The smallest median-stable set of `Q_dim` containing `seeds` random
/// points, restricted to coordinates that are neither constant nor equal
/// (up to complement) to an earlier one.
///
/// A point belongs to the closure iff every pair of its coordinates shows
/// a pattern some seed shows on that pair: the closure is the solution set
/// of all 2-clauses the seeds satisfy. Dropping constant and duplicated
/// coordinates leaves a connected induced subgraph, which is median.
pub fn random_median(dim: usize, seeds: usize, seed: u64) -> RandomMedian {
    assert!((1..=24).contains(&dim) && seeds > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<u64> = (0..seeds).map(|_| rng.gen_range(0..1u64 << dim)).collect();
    let column = |i: usize| -> u64 {
        raw.iter()
            .enumerate()
            .fold(0, |acc, (s, &p)| acc | ((p >> i) & 1) << s)
    };
    let full = if seeds == 64 {
        u64::MAX
    } else {
        (1u64 << seeds) - 1
    };
    let mut kept: Vec<u64> = Vec::new();
    let mut coords = Vec::new();
    for i in 0..dim {
        let col = column(i);
        if col == 0 || col == full || kept.iter().any(|&c| c == col || c == col ^ full) {
            continue;
        }
        kept.push(col);
        coords.push(i);
    }
    let d = coords.len();
    let project = |p: u64| -> u64 {
        coords
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &i)| acc | ((p >> i) & 1) << j)
    };
    let pts: Vec<u64> = raw.iter().map(|&p| project(p)).collect();
    // seen[i * d + j] has bit (2 a + b) set when some seed has x_i = a, x_j = b.
    let mut seen = vec![0u8; d * d];
    for &p in &pts {
        for i in 0..d {
            for j in 0..d {
                let pat = 2 * ((p >> i) & 1) + ((p >> j) & 1);
                seen[i * d + j] |= 1 << pat;
            }
        }
    }
    let labels: Vec<u64> = (0..1u64 << d)
        .filter(|&p| {
            (0..d).all(|i| {
                (0..i).all(|j| {
                    let pat = 2 * ((p >> i) & 1) + ((p >> j) & 1);
                    seen[i * d + j] & (1 << pat) != 0
                })
            })
        })
        .collect();
    let index: std::collections::HashMap<u64, usize> =
        labels.iter().enumerate().map(|(v, &p)| (p, v)).collect();
    let mut edges = Vec::new();
    for (v, &p) in labels.iter().enumerate() {
        for b in 0..d {
            if p & (1 << b) == 0 {
                if let Some(&u) = index.get(&(p | 1 << b)) {
                    edges.push((v, u));
                }
            }
        }
    }
    let graph = Graph::from_edges(labels.len(), edges)
        .expect("closure without constant or duplicated coordinates is connected");
    RandomMedian {
        graph,
        labels,
        dim: d,
    }
}

/// Coordinatewise majority of three bit vectors.
pub fn majority(a: u64, b: u64, c: u64) -> u64 {
    (a & b) | (b & c) | (a & c)
}
