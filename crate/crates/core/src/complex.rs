//! Medians of weighted points in the `ℓ1` cube complex of a median graph.
//!
//! A point is encoded by a vertex of its smallest cube and one coordinate
//! in `(0, 1)` per class spanning that cube. Coordinates are always
//! measured from the basepoint side of their class once terminals are
//! rebased, so a point can be compared with any other point class by class.
//!
//! The median is computed one class at a time: each class reduces to a
//! weighted median of points on `[0, 1]`, the median interval orients
//! the edges of the graph, and the sinks of that orientation map onto the
//! vertices of the median skeleton.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex};
use crate::median::weights_by_peeling;
use crate::rational::Rational;
use crate::theta::{ClassId, ThetaPartition};

/// A weighted point of the cube complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Terminal {
    pub base: Vertex,
    /// `(class, ε)` pairs sorted by class, every `ε` strictly inside `(0, 1)`.
    pub coords: Vec<(ClassId, Rational)>,
    pub weight: Rational,
}

impl Terminal {
    pub fn vertex(base: Vertex, weight: Rational) -> Self {
        Terminal {
            base,
            coords: Vec::new(),
            weight,
        }
    }
}

/// `(vertex, class) → edge` lookup; a vertex has at most one edge per class.
pub struct ClassAdjacency<'a> {
    tp: &'a ThetaPartition,
    g: &'a Graph,
    map: FxHashMap<(u32, u32), u32>,
}

impl<'a> ClassAdjacency<'a> {
    pub fn new(g: &'a Graph, tp: &'a ThetaPartition) -> Result<Self> {
        tp.check_graph(g)?;
        let mut map = FxHashMap::default();
        map.reserve(2 * g.m());
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let c = tp.class_of(e) as u32;
            map.insert((u as u32, c), e as u32);
            map.insert((v as u32, c), e as u32);
        }
        Ok(ClassAdjacency { tp, g, map })
    }

    pub fn edge(&self, v: Vertex, c: ClassId) -> Option<EdgeId> {
        self.map.get(&(v as u32, c as u32)).map(|&e| e as usize)
    }

    /// The neighbor of `v` across class `c`.
    pub fn across(&self, v: Vertex, c: ClassId) -> Option<Vertex> {
        self.edge(v, c).map(|e| {
            let (a, b) = self.g.edge(e);
            if a == v {
                b
            } else {
                a
            }
        })
    }

    /// Whether `v` lies on the far side of class `c`; `None` if `c` is not
    /// incident to `v`.
    pub fn is_far(&self, v: Vertex, c: ClassId) -> Option<bool> {
        self.edge(v, c).map(|e| self.tp.far(e) == v)
    }

    /// Whether the `c1` and `c2` edges at `v` span a square.
    pub fn crossing_at(&self, v: Vertex, c1: ClassId, c2: ClassId) -> bool {
        let step = || {
            let a = self.across(v, c1)?;
            let b = self.across(v, c2)?;
            let x = self.across(a, c2)?;
            Some(self.across(x, c1)? == b)
        };
        step().unwrap_or(false)
    }
}

/// Drops coordinates equal to 0 or 1 so that the encoding names the
/// smallest cube: a 1 moves the base across its class.
pub fn normalize_terminal(adj: &ClassAdjacency<'_>, t: Terminal) -> Result<Terminal> {
    let mut base = t.base;
    let mut coords = Vec::with_capacity(t.coords.len());
    for (c, eps) in t.coords {
        if eps.is_zero() {
            continue;
        }
        if eps == Rational::one() {
            base = adj.across(base, c).ok_or_else(|| {
                Error::invalid(format!("class {c} is not incident to vertex {base}"))
            })?;
            continue;
        }
        coords.push((c, eps));
    }
    Ok(Terminal {
        base,
        coords,
        weight: t.weight,
    })
}

/// Parses lines `v k i1 p1 … ik pk w` and normalizes 0/1 coordinates.
pub fn parse_terminals(text: &str, g: &Graph, tp: &ThetaPartition) -> Result<Vec<Terminal>> {
    let adj = ClassAdjacency::new(g, tp)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |j: usize, what: &str| -> Result<usize> {
            let tok = toks
                .get(j)
                .ok_or_else(|| Error::parse(lineno, format!("missing {what}")))?;
            tok.parse()
                .map_err(|_| Error::parse(lineno, format!("bad {what}: {tok:?}")))
        };
        let rat = |j: usize, what: &str| -> Result<Rational> {
            let tok = toks
                .get(j)
                .ok_or_else(|| Error::parse(lineno, format!("missing {what}")))?;
            tok.parse()
                .map_err(|_| Error::parse(lineno, format!("bad {what}: {tok:?}")))
        };
        let base = num(0, "vertex")?;
        if base >= g.n() {
            return Err(Error::parse(lineno, format!("vertex {base} out of range")));
        }
        let k = num(1, "coordinate count")?;
        if toks.len() != 3 + 2 * k {
            return Err(Error::parse(
                lineno,
                format!("expected {} tokens, found {}", 3 + 2 * k, toks.len()),
            ));
        }
        let mut coords = Vec::with_capacity(k);
        for j in 0..k {
            let c = num(2 + 2 * j, "class id")?;
            if c >= tp.q() {
                return Err(Error::parse(lineno, format!("class {c} out of range")));
            }
            let eps = rat(3 + 2 * j, "coordinate")?;
            if eps.is_negative() || eps > Rational::one() {
                return Err(Error::parse(
                    lineno,
                    format!("coordinate {eps} outside [0,1]"),
                ));
            }
            coords.push((c, eps));
        }
        let weight = rat(2 + 2 * k, "weight")?;
        coords.sort_by_key(|&(c, _)| c);
        if coords.windows(2).any(|p| p[0].0 == p[1].0) {
            return Err(Error::parse(lineno, "repeated class id"));
        }
        let t = normalize_terminal(
            &adj,
            Terminal {
                base,
                coords,
                weight,
            },
        )
        .map_err(|e| Error::parse(lineno, e.to_string()))?;
        out.push(t);
    }
    Ok(out)
}

fn rebase_one(adj: &ClassAdjacency<'_>, t: &Terminal) -> Result<Terminal> {
    if !t.weight.is_positive() {
        return Err(Error::invalid(format!(
            "terminal weight {} is not positive",
            t.weight
        )));
    }
    for (i, (c, eps)) in t.coords.iter().enumerate() {
        if !eps.is_open_unit() {
            return Err(Error::invalid(format!(
                "coordinate {eps} of class {c} outside (0,1)"
            )));
        }
        if adj.edge(t.base, *c).is_none() {
            return Err(Error::invalid(format!(
                "class {c} is not incident to vertex {}",
                t.base
            )));
        }
        for (c2, _) in &t.coords[..i] {
            if c2 == c {
                return Err(Error::invalid(format!("class {c} repeated")));
            }
            if !adj.crossing_at(t.base, *c2, *c) {
                return Err(Error::invalid(format!(
                    "classes {c2} and {c} do not cross at vertex {}",
                    t.base
                )));
            }
        }
    }
    let mut base = t.base;
    let mut coords = Vec::with_capacity(t.coords.len());
    for (c, eps) in &t.coords {
        let e = adj.edge(base, *c).ok_or_else(|| {
            Error::Invariant(format!("cube of terminal at {} is not closed", t.base))
        })?;
        if adj.tp.far(e) == base {
            base = adj.tp.near(e);
            coords.push((*c, eps.complement()));
        } else {
            coords.push((*c, eps.clone()));
        }
    }
    coords.sort_by_key(|&(c, _)| c);
    Ok(Terminal {
        base,
        coords,
        weight: t.weight.clone(),
    })
}

/// Moves every base to the gate of the basepoint in its cube, flipping
/// `ε → 1 − ε` across each class it crosses. Idempotent.
pub fn rebase_terminals(
    g: &Graph,
    tp: &ThetaPartition,
    terminals: &[Terminal],
) -> Result<Vec<Terminal>> {
    let adj = ClassAdjacency::new(g, tp)?;
    terminals.iter().map(|t| rebase_one(&adj, t)).collect()
}

/// How the per-class weighted medians are selected.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Selection {
    /// Expected linear time, random pivots from a fixed seed.
    #[default]
    Randomized,
    /// Sort and scan.
    Sorted,
}

/// Median interval `[ρ'', ρ']` of one class, measured from the basepoint side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMedianInterval {
    pub lo: Rational,
    pub hi: Rational,
}

/// Per-class point masses on `[0, 1]`: 0 carries the terminals outside the
/// carrier on the basepoint side, 1 those on the far side, and every
/// terminal with a coordinate in the class sits at that coordinate.
struct ClassPoints {
    total: Rational,
    at_zero: Vec<Rational>,
    at_one: Vec<Rational>,
    inner: Vec<Vec<(Rational, Rational)>>,
}

fn class_points(g: &Graph, tp: &ThetaPartition, rebased: &[Terminal]) -> ClassPoints {
    let mut by_base = vec![Rational::zero(); g.n()];
    let mut inner: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); tp.q()];
    let mut carried = vec![Rational::zero(); tp.q()];
    for t in rebased {
        by_base[t.base] += &t.weight;
        for (c, eps) in &t.coords {
            inner[*c].push((eps.clone(), t.weight.clone()));
            carried[*c] += &t.weight;
        }
    }
    let hw = weights_by_peeling(tp, by_base);
    let at_zero = (0..tp.q()).map(|c| hw.near(c) - &carried[c]).collect();
    let at_one = (0..tp.q()).map(|c| hw.far(c).clone()).collect();
    ClassPoints {
        total: hw.total().clone(),
        at_zero,
        at_one,
        inner,
    }
}

/// The 1-D median interval of every class.
pub fn class_median_intervals(
    g: &Graph,
    tp: &ThetaPartition,
    terminals: &[Terminal],
    selection: Selection,
) -> Result<Vec<ClassMedianInterval>> {
    let rebased = rebase_terminals(g, tp, terminals)?;
    intervals_of(g, tp, &rebased, selection)
}

fn intervals_of(
    g: &Graph,
    tp: &ThetaPartition,
    rebased: &[Terminal],
    selection: Selection,
) -> Result<Vec<ClassMedianInterval>> {
    let pts = class_points(g, tp, rebased);
    if !pts.total.is_positive() {
        return Err(Error::invalid("zero total terminal weight"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_6469_616e);
    let ClassPoints {
        total,
        at_zero,
        at_one,
        inner,
    } = pts;
    let mut out = Vec::with_capacity(tp.q());
    for ((w0, w1), mut items) in at_zero.into_iter().zip(at_one).zip(inner) {
        items.push((Rational::zero(), w0));
        items.push((Rational::one(), w1));
        items.retain(|(_, w)| w.is_positive());
        let (lo, hi) = weighted_median_interval(items, &total, selection, &mut rng);
        out.push(ClassMedianInterval { lo, hi });
    }
    Ok(out)
}

/// Closed hull of the weighted medians of positive-weight points whose
/// weights sum to `total`: `lo` is the smallest point `t` with
/// `weight(≤ t) ≥ total/2`, and when that bound is met with equality `hi`
/// is the next point.
pub fn weighted_median_interval<R: Rng>(
    items: Vec<(Rational, Rational)>,
    total: &Rational,
    selection: Selection,
    rng: &mut R,
) -> (Rational, Rational) {
    assert!(!items.is_empty() && total.is_positive());
    let half = total.halve();
    match selection {
        Selection::Sorted => {
            let mut items = items;
            items.sort_by(|a, b| a.0.cmp(&b.0));
            let mut cum = Rational::zero();
            let mut i = 0;
            loop {
                let t = items[i].0.clone();
                while i < items.len() && items[i].0 == t {
                    cum += &items[i].1;
                    i += 1;
                }
                if cum > half {
                    return (t.clone(), t);
                }
                if cum == half {
                    return (t, items[i].0.clone());
                }
            }
        }
        Selection::Randomized => {
            let (lo, next) = select_lower(items, half, rng);
            let hi = next.unwrap_or_else(|| lo.clone());
            (lo, hi)
        }
    }
}

/// Weighted quickselect. Returns the lower median and, when the weight up
/// to it equals `half` exactly, the next point.
fn select_lower<R: Rng>(
    mut items: Vec<(Rational, Rational)>,
    mut half: Rational,
    rng: &mut R,
) -> (Rational, Option<Rational>) {
    // Smallest point dropped on the way down from above the current range.
    let mut above: Option<Rational> = None;
    loop {
        let pivot = items[rng.gen_range(0..items.len())].0.clone();
        let mut less = Vec::new();
        let mut greater = Vec::new();
        let mut w_less = Rational::zero();
        let mut w_equal = Rational::zero();
        for (v, w) in items.drain(..) {
            match v.cmp(&pivot) {
                std::cmp::Ordering::Less => {
                    w_less += &w;
                    less.push((v, w));
                }
                std::cmp::Ordering::Equal => w_equal += &w,
                std::cmp::Ordering::Greater => greater.push((v, w)),
            }
        }
        if w_less >= half {
            items = less;
            above = Some(pivot);
            continue;
        }
        let upto = &w_less + &w_equal;
        if upto > half {
            return (pivot, None);
        }
        if upto == half {
            let next = greater.into_iter().map(|(v, _)| v).min().or(above);
            return (
                pivot,
                Some(next.expect("weight above an exact half is positive")),
            );
        }
        half -= &upto;
        items = greater;
    }
}

/// One vertex of the median skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonVertex {
    /// Cube vertex the point is reported against.
    pub anchor: Vertex,
    /// Gate of the basepoint in the cube spanned by `coords`.
    pub base: Vertex,
    /// Coordinates measured from the basepoint side, sorted by class.
    pub coords: Vec<(ClassId, Rational)>,
    /// The smallest sink mapped to this vertex.
    pub sink: Vertex,
}

/// The 1-skeleton of the median set of the terminals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonM {
    pub vertices: Vec<SkeletonVertex>,
    /// Index pairs into `vertices`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub intervals: Vec<ClassMedianInterval>,
}

impl SkeletonM {
    /// Coordinates of vertex `i` measured from its anchor: classes the
    /// anchor lies across from the base get `1 − ε`.
    pub fn anchored_coords(&self, i: usize) -> Vec<(ClassId, Rational)> {
        self.vertices[i]
            .coords
            .iter()
            .map(|(c, x)| {
                if *x != self.intervals[*c].lo {
                    (*c, x.complement())
                } else {
                    (*c, x.clone())
                }
            })
            .collect()
    }
}

pub fn geometric_median(
    g: &Graph,
    tp: &ThetaPartition,
    terminals: &[Terminal],
) -> Result<SkeletonM> {
    geometric_median_with(g, tp, terminals, Selection::default())
}

/// Orients every edge toward a strictly majoritary side (interval `[0,0]`
/// or `[1,1]`), then maps each sink `v` to the point `g(v)` of the median
/// set closest to it: along the classes where the interval leaves `v`'s
/// side, `v` moves to the nearest interval endpoint.
pub fn geometric_median_with(
    g: &Graph,
    tp: &ThetaPartition,
    terminals: &[Terminal],
    selection: Selection,
) -> Result<SkeletonM> {
    if terminals.is_empty() {
        return Err(Error::invalid("empty terminal set"));
    }
    let adj = ClassAdjacency::new(g, tp)?;
    let rebased: Vec<Terminal> = terminals
        .iter()
        .map(|t| rebase_one(&adj, t))
        .collect::<Result<_>>()?;
    let intervals = intervals_of(g, tp, &rebased, selection)?;
    let one = Rational::one();

    let mut sink = vec![true; g.n()];
    for e in 0..g.m() {
        let iv = &intervals[tp.class_of(e)];
        let (near, far) = tp.sides(e);
        if iv.lo == one {
            sink[near] = false;
        } else if iv.hi.is_zero() {
            sink[far] = false;
        }
    }

    let mut index: FxHashMap<(Vertex, Vec<(ClassId, Rational)>), usize> = FxHashMap::default();
    let mut vertices: Vec<SkeletonVertex> = Vec::new();
    let mut image = vec![usize::MAX; g.n()];
    let mut half_edges: Vec<(ClassId, Vertex, bool)> = Vec::new();
    for v in (0..g.n()).filter(|&v| sink[v]) {
        half_edges.clear();
        for &(_, e) in g.neighbors(v) {
            let c = tp.class_of(e);
            let iv = &intervals[c];
            if tp.near(e) == v {
                if iv.lo.is_positive() {
                    half_edges.push((c, tp.far(e), false));
                }
            } else if iv.hi < one {
                half_edges.push((c, tp.near(e), true));
            }
        }
        for (i, &(c, _, _)) in half_edges.iter().enumerate() {
            for &(c2, _, _) in &half_edges[..i] {
                if !adj.crossing_at(v, c, c2) {
                    return Err(Error::Invariant(format!(
                        "half-edge classes {c2} and {c} at sink {v} do not span a square"
                    )));
                }
            }
        }
        half_edges.sort_unstable_by_key(|&(c, _, _)| c);
        let mut base = v;
        let mut coords = Vec::with_capacity(half_edges.len());
        for &(c, _, from_far) in &half_edges {
            let iv = &intervals[c];
            if from_far {
                base = adj.across(base, c).expect("cube at a sink is closed");
                coords.push((c, iv.hi.clone()));
            } else {
                coords.push((c, iv.lo.clone()));
            }
        }
        let key = (base, coords);
        let id = match index.get(&key) {
            Some(&id) => id,
            None => {
                let mut anchor = base;
                for (c, x) in &key.1 {
                    if *x != intervals[*c].lo {
                        anchor = adj.across(anchor, *c).expect("cube at a sink is closed");
                    }
                }
                let id = vertices.len();
                vertices.push(SkeletonVertex {
                    anchor,
                    base,
                    coords: key.1.clone(),
                    sink: v,
                });
                index.insert(key, id);
                id
            }
        };
        image[v] = id;
    }

    let mut edge_set = FxHashSet::default();
    for &(u, v) in g.edges() {
        if sink[u] && sink[v] && image[u] != image[v] {
            let (a, b) = (image[u].min(image[v]), image[u].max(image[v]));
            edge_set.insert((a, b));
        }
    }
    let mut edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    edges.sort_unstable();
    Ok(SkeletonM {
        vertices,
        edges,
        intervals,
    })
}

/// `Σ w(p) w(p') d1(p, p')` over unordered terminal pairs, class by class:
/// each gap between consecutive coordinates is crossed by every pair with
/// one point below and one above it.
pub fn geometric_wiener(
    g: &Graph,
    tp: &ThetaPartition,
    terminals: &[Terminal],
) -> Result<Rational> {
    let rebased = rebase_terminals(g, tp, terminals)?;
    let ClassPoints {
        total,
        at_zero,
        at_one,
        inner,
    } = class_points(g, tp, &rebased);
    let mut sum = Rational::zero();
    for ((w0, w1), mut items) in at_zero.into_iter().zip(at_one).zip(inner) {
        items.push((Rational::zero(), w0));
        items.push((Rational::one(), w1));
        items.sort_by(|a, b| a.0.cmp(&b.0));
        let mut below = Rational::zero();
        let mut i = 0;
        while i < items.len() {
            let x = items[i].0.clone();
            while i < items.len() && items[i].0 == x {
                below += &items[i].1;
                i += 1;
            }
            if i < items.len() {
                let gap = &items[i].0 - &x;
                sum += &(&gap * &(&below * &(&total - &below)));
            }
        }
    }
    Ok(sum)
}
