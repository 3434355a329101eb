//! Distances and medians in the cube complex by explicit enumeration.
//!
//! A point is a base vertex with `(class, ε)` coordinates, `ε` measured
//! from the base. Its position along class `i` is `χ_i`: the coordinate
//! seen from the basepoint side when `i` spans its cube, and otherwise 0 or
//! 1 depending on the side of its base. The `ℓ1` distance is the sum over
//! classes of `|χ_i(x) − χ_i(y)|`.

use fixedbitset::FixedBitSet;
use median_core::complex::Terminal;
use median_core::graph::{Graph, Vertex};
use median_core::theta::{ClassId, ThetaPartition};
use median_core::{Error, Rational, Result};

/// Class signatures of all vertices, found by deleting each class and
/// searching from the basepoint.
pub struct Signatures {
    q: usize,
    /// `far[v]` holds the classes separating `v` from the basepoint.
    far: Vec<FixedBitSet>,
    /// `nbr[v]` maps each class incident to `v` to the neighbor across it.
    nbr: Vec<Vec<(ClassId, Vertex)>>,
}

impl Signatures {
    pub fn new(g: &Graph, tp: &ThetaPartition) -> Self {
        let q = tp.q();
        let mut far: Vec<FixedBitSet> = (0..g.n()).map(|_| FixedBitSet::with_capacity(q)).collect();
        let mut seen = vec![false; g.n()];
        for c in 0..q {
            seen.iter_mut().for_each(|s| *s = false);
            seen[tp.basepoint()] = true;
            let mut stack = vec![tp.basepoint()];
            while let Some(u) = stack.pop() {
                for &(v, e) in g.neighbors(u) {
                    if !seen[v] && tp.class_of(e) != c {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            for v in (0..g.n()).filter(|&v| !seen[v]) {
                far[v].insert(c);
            }
        }
        let nbr = (0..g.n())
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .map(|&(u, e)| (tp.class_of(e), u))
                    .collect()
            })
            .collect();
        Signatures { q, far, nbr }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_far(&self, v: Vertex, c: ClassId) -> bool {
        self.far[v].contains(c)
    }

    pub fn across(&self, v: Vertex, c: ClassId) -> Option<Vertex> {
        self.nbr[v].iter().find(|&&(k, _)| k == c).map(|&(_, u)| u)
    }

    /// Whether the classes `a` and `b` at `v` span a square.
    pub fn crossing_at(&self, v: Vertex, a: ClassId, b: ClassId) -> bool {
        let (Some(x), Some(y)) = (self.across(v, a), self.across(v, b)) else {
            return false;
        };
        self.across(x, b)
            .is_some_and(|z| z != v && self.across(z, a) == Some(y))
    }

    /// `χ` of a point, one value per class.
    pub fn position(&self, base: Vertex, coords: &[(ClassId, Rational)]) -> Result<Vec<Rational>> {
        let mut chi: Vec<Rational> = (0..self.q)
            .map(|c| {
                if self.is_far(base, c) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        for (i, (c, eps)) in coords.iter().enumerate() {
            if *c >= self.q || !eps.is_open_unit() || self.across(base, *c).is_none() {
                return Err(Error::Invalid(format!(
                    "coordinate ({c}, {eps}) does not describe a point at vertex {base}"
                )));
            }
            if coords[..i]
                .iter()
                .any(|(c2, _)| !self.crossing_at(base, *c2, *c))
            {
                return Err(Error::Invalid(format!(
                    "classes at vertex {base} do not span a cube"
                )));
            }
            chi[*c] = if self.is_far(base, *c) {
                eps.complement()
            } else {
                eps.clone()
            };
        }
        Ok(chi)
    }
}

pub fn l1(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn positions(sig: &Signatures, terminals: &[Terminal]) -> Result<Vec<(Vec<Rational>, Rational)>> {
    terminals
        .iter()
        .map(|t| Ok((sig.position(t.base, &t.coords)?, t.weight.clone())))
        .collect()
}

/// `F(x) = Σ_p w(p) d1(x, p)`.
pub fn brute_geometric_f(
    sig: &Signatures,
    terminals: &[Terminal],
    base: Vertex,
    coords: &[(ClassId, Rational)],
) -> Result<Rational> {
    let x = sig.position(base, coords)?;
    Ok(positions(sig, terminals)?
        .iter()
        .map(|(p, w)| w * &l1(&x, p))
        .sum())
}

/// Optimum of `F` over the candidate points and the positions attaining it.
#[derive(Clone, Debug)]
pub struct GeometricOptimum {
    pub value: Rational,
    /// Distinct `χ` vectors of all minimizing candidates, sorted.
    pub minimizers: Vec<Vec<Rational>>,
    pub candidates: usize,
}

/// Enumerates every vertex `v`, every set of pairwise crossing classes at
/// `v`, and every choice of coordinates from the terminal coordinates of
/// those classes; the optimum of `F` is attained among these points.
pub fn brute_geometric_median(
    g: &Graph,
    tp: &ThetaPartition,
    terminals: &[Terminal],
    cap: usize,
) -> Result<GeometricOptimum> {
    let sig = Signatures::new(g, tp);
    let pts = positions(&sig, terminals)?;
    // Interior coordinates per class, measured from the basepoint side.
    let mut values: Vec<Vec<Rational>> = vec![Vec::new(); tp.q()];
    for (p, _) in &pts {
        for (c, x) in p.iter().enumerate() {
            if x.is_open_unit() {
                values[c].push(x.clone());
            }
        }
    }
    for v in &mut values {
        v.sort();
        v.dedup();
    }
    let mut best: Option<Rational> = None;
    let mut minimizers: Vec<Vec<Rational>> = Vec::new();
    let mut count = 0usize;
    for v in 0..g.n() {
        let classes: Vec<ClassId> = {
            let mut cs: Vec<ClassId> = sig.nbr[v]
                .iter()
                .map(|&(c, _)| c)
                .filter(|&c| !values[c].is_empty())
                .collect();
            cs.sort_unstable();
            cs
        };
        let mut chosen: Vec<ClassId> = Vec::new();
        let mut visit = |chosen: &[ClassId], count: &mut usize| -> Result<()> {
            // Every combination of values for the chosen classes.
            let mut idx = vec![0usize; chosen.len()];
            loop {
                *count += 1;
                if *count > cap {
                    return Err(Error::CapExceeded {
                        what: "geometric candidate count",
                        size: *count,
                        cap,
                    });
                }
                let mut x: Vec<Rational> = (0..sig.q)
                    .map(|c| {
                        if sig.is_far(v, c) {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                for (j, &c) in chosen.iter().enumerate() {
                    x[c] = values[c][idx[j]].clone();
                }
                let f: Rational = pts.iter().map(|(p, w)| w * &l1(&x, p)).sum();
                match &best {
                    Some(b) if f > *b => {}
                    Some(b) if f == *b => minimizers.push(x),
                    _ => {
                        best = Some(f);
                        minimizers.clear();
                        minimizers.push(x);
                    }
                }
                let mut j = 0;
                while j < idx.len() {
                    idx[j] += 1;
                    if idx[j] < values[chosen[j]].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == idx.len() {
                    return Ok(());
                }
            }
        };
        subsets(&sig, v, &classes, 0, &mut chosen, &mut |ch| {
            visit(ch, &mut count)
        })?;
    }
    minimizers.sort();
    minimizers.dedup();
    Ok(GeometricOptimum {
        value: best.expect("graphs have a vertex"),
        minimizers,
        candidates: count,
    })
}

/// Calls `f` on every subset of `classes[i..]` extending `chosen` whose
/// members pairwise cross at `v`.
fn subsets(
    sig: &Signatures,
    v: Vertex,
    classes: &[ClassId],
    i: usize,
    chosen: &mut Vec<ClassId>,
    f: &mut dyn FnMut(&[ClassId]) -> Result<()>,
) -> Result<()> {
    if i == classes.len() {
        return f(chosen);
    }
    subsets(sig, v, classes, i + 1, chosen, f)?;
    let c = classes[i];
    if chosen.iter().all(|&c2| sig.crossing_at(v, c2, c)) {
        chosen.push(c);
        subsets(sig, v, classes, i + 1, chosen, f)?;
        chosen.pop();
    }
    Ok(())
}

/// `Σ w(p) w(p') d1(p, p')` over unordered terminal pairs.
pub fn brute_geometric_wiener(
    g: &Graph,
    tp: &ThetaPartition,
    terminals: &[Terminal],
) -> Result<Rational> {
    let sig = Signatures::new(g, tp);
    let pts = positions(&sig, terminals)?;
    let mut sum = Rational::zero();
    for (i, (p, w)) in pts.iter().enumerate() {
        for (p2, w2) in &pts[i + 1..] {
            sum += &(&(w * w2) * &l1(p, p2));
        }
    }
    Ok(sum)
}
