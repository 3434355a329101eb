//! Reference computations of `F_w`, medians and Wiener sums from
//! all-pairs distances.

use median_core::graph::{Graph, Vertex, WeightFn};
use median_core::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::verify::{apsp_bfs, Apsp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteMedian {
    /// `F_w(x)` for every vertex.
    pub f: Vec<Rational>,
    /// Sorted vertices attaining the minimum.
    pub argmin: Vec<Vertex>,
}

/// Weights over a common denominator: `w(v) = num[v] / den`.
struct Scaled {
    den: BigInt,
    num: Vec<BigInt>,
    small: Option<Vec<u64>>,
}

fn scale(w: &WeightFn) -> Scaled {
    let den = w
        .as_slice()
        .iter()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let num: Vec<BigInt> = w
        .as_slice()
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    let small = num.iter().map(|x| x.to_u64()).collect();
    Scaled { den, num, small }
}

fn ratio(num: BigInt, den: &BigInt) -> Rational {
    Rational::from(BigRational::new(num, den.clone()))
}

pub fn brute_median(g: &Graph, w: &WeightFn) -> BruteMedian {
    brute_median_with(&apsp_bfs(g), w)
}

/// `F_w` by summing `w(v) d(x, v)` over the support of `w`, in exact
/// integers over the common denominator of the weights.
pub fn brute_median_with(d: &Apsp, w: &WeightFn) -> BruteMedian {
    let n = d.n();
    let s = scale(w);
    let support: Vec<Vertex> = (0..n).filter(|&v| !s.num[v].is_zero()).collect();
    let f_num: Vec<BigInt> = match &s.small {
        Some(small) if small.iter().all(|&x| x < 1 << 40) => (0..n)
            .map(|x| {
                let row = d.row(x);
                let sum: u128 = support
                    .iter()
                    .map(|&v| small[v] as u128 * row[v] as u128)
                    .sum();
                BigInt::from(sum)
            })
            .collect(),
        _ => (0..n)
            .map(|x| {
                let row = d.row(x);
                support
                    .iter()
                    .map(|&v| &s.num[v] * BigInt::from(row[v]))
                    .sum()
            })
            .collect(),
    };
    let best = f_num.iter().min().cloned().unwrap_or_default();
    let argmin = (0..n).filter(|&x| f_num[x] == best).collect();
    let f = f_num.into_iter().map(|x| ratio(x, &s.den)).collect();
    BruteMedian { f, argmin }
}

/// `Σ w(u) w(v) d(u, v)` over unordered pairs.
pub fn brute_wiener_with(d: &Apsp, w: &WeightFn) -> Rational {
    let n = d.n();
    let s = scale(w);
    let support: Vec<Vertex> = (0..n).filter(|&v| !s.num[v].is_zero()).collect();
    let total: BigInt = match &s.small {
        Some(small) if small.iter().all(|&x| x < 1 << 28) => {
            let mut acc: u128 = 0;
            for (i, &u) in support.iter().enumerate() {
                let row = d.row(u);
                for &v in &support[i + 1..] {
                    acc += (small[u] * small[v]) as u128 * row[v] as u128;
                }
            }
            BigInt::from(acc)
        }
        _ => {
            let mut acc = BigInt::zero();
            for (i, &u) in support.iter().enumerate() {
                for &v in &support[i + 1..] {
                    acc += &s.num[u] * &s.num[v] * BigInt::from(d.get(u, v));
                }
            }
            acc
        }
    };
    ratio(total, &(&s.den * &s.den))
}

pub fn brute_wiener(g: &Graph, w: &WeightFn) -> Rational {
    brute_wiener_with(&apsp_bfs(g), w)
}

/// Intersection of all halfspaces `W(u, v) = {x : d(x, u) < d(x, v)}`,
/// over ordered edges `uv`, that carry strictly more than half the weight.
/// On median graphs this is the median set; elsewhere it can differ.
pub fn majority_rule_intersection(g: &Graph, w: &WeightFn) -> Vec<Vertex> {
    let d = apsp_bfs(g);
    let total = w.total();
    let half = total.halve();
    let mut inside = vec![true; g.n()];
    for &(a, b) in g.edges() {
        for (u, v) in [(a, b), (b, a)] {
            let side: Vec<Vertex> = (0..g.n()).filter(|&x| d.get(x, u) < d.get(x, v)).collect();
            let weight: Rational = side.iter().map(|&x| w.get(x)).sum();
            if weight > half {
                let mut mask = vec![false; g.n()];
                for x in side {
                    mask[x] = true;
                }
                for x in 0..g.n() {
                    inside[x] &= mask[x];
                }
            }
        }
    }
    (0..g.n()).filter(|&x| inside[x]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn wf(ws: &[&str]) -> WeightFn {
        WeightFn::new(ws.iter().map(|s| r(s)).collect()).unwrap()
    }

    #[test]
    fn star_and_edge() {
        let star = Graph::from_edges(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let b = brute_median(&star, &WeightFn::uniform(4));
        assert_eq!(b.argmin, vec![0]);
        assert_eq!(b.f, vec![r("3"), r("5"), r("5"), r("5")]);

        let b = brute_median(&path(2), &WeightFn::uniform(2));
        assert_eq!(b.argmin, vec![0, 1]);
        assert_eq!(b.f, vec![r("1"), r("1")]);

        let b = brute_median(&grid(2, 3), &WeightFn::zeros(6));
        assert_eq!(b.argmin.len(), 6);
        assert!(b.f.iter().all(Rational::is_zero));
    }

    #[test]
    fn fractions_and_wiener() {
        let b = brute_median(&path(3), &wf(&["1/3", "1/2", "1/5"]));
        assert_eq!(b.f, vec![r("9/10"), r("8/15"), r("7/6")]);
        assert_eq!(brute_wiener(&path(3), &WeightFn::uniform(3)), r("4"));
        assert_eq!(brute_wiener(&hypercube(2), &WeightFn::uniform(4)), r("8"));
        assert_eq!(brute_wiener(&path(2), &wf(&["1/2", "1/3"])), r("1/6"));
    }

    #[test]
    fn majority_rule_on_median_graph() {
        let g = grid(3, 3);
        let w = wf(&["1", "0", "2", "0", "1", "0", "0", "0", "1"]);
        assert_eq!(
            majority_rule_intersection(&g, &w),
            brute_median(&g, &w).argmin
        );
    }
}
