//! Random event structures and exhaustive checks on their domains.

use std::collections::{BTreeSet, HashMap};

use median_core::events::{
    domain_of_es, es_of_pointed_graph, Configuration, ConflictMode, EventStructure, TwoSatFormula,
};
use median_core::graph::{Graph, Vertex};
use median_core::theta::{theta_classes_bfs, ThetaPartition};
use median_core::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// An event structure on `k` events: order pairs `a < b` for `a < b` ids
/// with probability `p_order`, then conflicts between pairs with no common
/// upper bound with probability `p_conflict`.
pub fn random_es(k: usize, p_order: f64, p_conflict: f64, seed: u64) -> EventStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut le = Vec::new();
    for b in 0..k {
        for a in 0..b {
            if rng.gen_bool(p_order) {
                le.push((a, b));
            }
        }
    }
    let order = EventStructure::new(k, &le, &[], ConflictMode::Complete)
        .expect("edges go from smaller to larger ids");
    let ups: Vec<BTreeSet<usize>> = (0..k)
        .map(|a| (0..k).filter(|&b| order.leq(a, b)).collect())
        .collect();
    let mut cf = Vec::new();
    for b in 0..k {
        for a in 0..b {
            if ups[a].is_disjoint(&ups[b]) && rng.gen_bool(p_conflict) {
                cf.push((a, b));
            }
        }
    }
    EventStructure::new(k, &le, &cf, ConflictMode::Complete)
        .expect("conflicting events have no common upper bound")
}

/// All satisfying assignments as sorted lists of true variables (0-based).
pub fn solutions(f: &TwoSatFormula) -> Vec<Configuration> {
    assert!(
        f.vars <= 24,
        "exhaustive enumeration of {} variables",
        f.vars
    );
    let mut assignment = vec![false; f.vars];
    let mut out = Vec::new();
    for mask in 0u32..1 << f.vars {
        for (i, a) in assignment.iter_mut().enumerate() {
            *a = mask >> i & 1 == 1;
        }
        if f.satisfied_by(&assignment) {
            out.push((0..f.vars).filter(|&i| assignment[i]).collect());
        }
    }
    out.sort();
    out
}

fn hamming(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// Weighted sum of Hamming distances from `c` to the given configurations.
pub fn configuration_cost(
    c: &[usize],
    configs: &[(median_core::Rational, Configuration)],
) -> median_core::Rational {
    configs
        .iter()
        .map(|(w, x)| w * &median_core::Rational::from_int(hamming(c, x) as i64))
        .sum()
}

/// Minimum cost over the whole domain and every configuration attaining it.
pub fn brute_configuration_medians(
    domain: &[Configuration],
    configs: &[(median_core::Rational, Configuration)],
) -> (median_core::Rational, Vec<Configuration>) {
    let costs: Vec<_> = domain
        .iter()
        .map(|c| configuration_cost(c, configs))
        .collect();
    let best = costs
        .iter()
        .min()
        .cloned()
        .expect("domains contain the empty configuration");
    let argmin = domain
        .iter()
        .zip(&costs)
        .filter(|(_, f)| **f == best)
        .map(|(c, _)| c.clone())
        .collect();
    (best, argmin)
}

/// Classes separating each vertex from the basepoint.
fn signatures(g: &Graph, tp: &ThetaPartition) -> Vec<Configuration> {
    let mut sig: Vec<Option<Configuration>> = vec![None; g.n()];
    sig[tp.basepoint()] = Some(Vec::new());
    let mut queue = std::collections::VecDeque::from([tp.basepoint()]);
    while let Some(u) = queue.pop_front() {
        for &(v, e) in g.neighbors(u) {
            if sig[v].is_none() {
                let mut s = sig[u].clone().expect("visited");
                s.push(tp.class_of(e));
                s.sort_unstable();
                sig[v] = Some(s);
                queue.push_back(v);
            }
        }
    }
    sig.into_iter().map(|s| s.expect("connected")).collect()
}

/// Whether the domain of the event structure of `(g, v0)` is isomorphic to
/// `g` by the map sending each vertex to the classes separating it from
/// `v0`; the basepoint goes to the empty configuration.
pub fn graph_round_trip(g: &Graph, v0: Vertex, cap: usize) -> Result<bool> {
    let tp = theta_classes_bfs(g, v0)?;
    let es = es_of_pointed_graph(g, &tp)?;
    let (d, configs) = domain_of_es(&es, cap)?;
    if d.n() != g.n() || d.m() != g.m() {
        return Ok(false);
    }
    let sig = signatures(g, &tp);
    let index: HashMap<&Configuration, Vertex> =
        configs.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let image: Option<Vec<Vertex>> = sig.iter().map(|s| index.get(s).copied()).collect();
    let Some(image) = image else {
        return Ok(false);
    };
    Ok(image[v0] == 0
        && g.edges()
            .iter()
            .all(|&(u, v)| d.adjacent(image[u], image[v])))
}

/// Whether the event structure read back from the domain of `es` (pointed
/// at the empty configuration) is `es` itself, with each class labelled by
/// the event its edges add.
pub fn es_round_trip(es: &EventStructure, cap: usize) -> Result<bool> {
    let (d, configs) = domain_of_es(es, cap)?;
    let tp = theta_classes_bfs(&d, 0)?;
    let back = es_of_pointed_graph(&d, &tp)?;
    if back.k() != es.k() {
        return Ok(false);
    }
    let mut label = vec![usize::MAX; tp.q()];
    for (e, &(u, v)) in d.edges().iter().enumerate() {
        let (small, big) = if configs[u].len() < configs[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        let added: Vec<usize> = configs[big]
            .iter()
            .copied()
            .filter(|x| !configs[small].contains(x))
            .collect();
        let c = tp.class_of(e);
        if added.len() != 1 || (label[c] != usize::MAX && label[c] != added[0]) {
            return Ok(false);
        }
        label[c] = added[0];
    }
    let k = es.k();
    Ok((0..k).all(|a| {
        (0..k).all(|b| {
            back.leq(a, b) == es.leq(label[a], label[b])
                && back.conflict(a, b) == es.conflict(label[a], label[b])
        })
    }))
}
