//! Finite event structures, their domains and 2-SAT encodings.
//!
//! Events are numbered `0..k`. The causal order is kept both as its
//! reflexive-transitive closure (`causes(e)`, the events below `e`) and as
//! the cover relation, and the conflict relation is stored closed under
//! inheritance.

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::rational::Rational;
use crate::theta::ThetaPartition;

/// Sorted list of event ids.
pub type Configuration = Vec<usize>;

/// What to do with conflicts implied by inheritance but absent from input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConflictMode {
    #[default]
    Complete,
    Reject,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventStructure {
    k: usize,
    /// `down[e]` = events `≤ e`, including `e`.
    down: Vec<FixedBitSet>,
    /// `up[e]` = events `≥ e`, including `e`.
    up: Vec<FixedBitSet>,
    conflict: Vec<FixedBitSet>,
    cover: Vec<(usize, usize)>,
}

impl EventStructure {
    /// Builds and validates an event structure from order pairs `a ≤ b`
    /// (any generating set, usually the cover relation) and conflict pairs.
    pub fn new(
        k: usize,
        le: &[(usize, usize)],
        cf: &[(usize, usize)],
        mode: ConflictMode,
    ) -> Result<Self> {
        for &(a, b) in le.iter().chain(cf) {
            if a >= k || b >= k {
                return Err(Error::invalid(format!(
                    "event pair {a} {b} out of range 0..{k}"
                )));
            }
        }
        if let Some(&(a, _)) = cf.iter().find(|(a, b)| a == b) {
            return Err(Error::invalid(format!(
                "event {a} is in conflict with itself"
            )));
        }
        let mut succ = vec![Vec::new(); k];
        let mut indeg = vec![0usize; k];
        for &(a, b) in le {
            if a != b {
                succ[a].push(b);
                indeg[b] += 1;
            }
        }
        let mut topo: Vec<usize> = (0..k).filter(|&e| indeg[e] == 0).collect();
        let mut i = 0;
        while i < topo.len() {
            let a = topo[i];
            i += 1;
            for &b in &succ[a] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    topo.push(b);
                }
            }
        }
        if topo.len() < k {
            let stuck: Vec<usize> = (0..k).filter(|&e| indeg[e] > 0).take(2).collect();
            return Err(Error::invalid(format!(
                "causal order is not antisymmetric: events {stuck:?} lie on a cycle"
            )));
        }
        let mut down: Vec<FixedBitSet> = (0..k).map(|_| FixedBitSet::with_capacity(k)).collect();
        for &a in &topo {
            down[a].insert(a);
            for &b in &succ[a] {
                let da = down[a].clone();
                down[b].union_with(&da);
            }
        }
        let mut given: Vec<FixedBitSet> = (0..k).map(|_| FixedBitSet::with_capacity(k)).collect();
        for &(a, b) in cf {
            given[a].insert(b);
            given[b].insert(a);
        }
        let es = Self::from_closure(k, down, |down, up| {
            // e # e'' iff some a ≤ e and b ≤ e'' have a generating conflict.
            let mut conflict = Vec::with_capacity(k);
            for below in down {
                let mut reach = FixedBitSet::with_capacity(k);
                for a in below.ones() {
                    reach.union_with(&given[a]);
                }
                let mut full = FixedBitSet::with_capacity(k);
                for b in reach.ones() {
                    full.union_with(&up[b]);
                }
                conflict.push(full);
            }
            conflict
        });
        for e in 0..k {
            if es.conflict[e].contains(e) {
                return Err(Error::invalid(format!(
                    "event {e} inherits a conflict with itself"
                )));
            }
        }
        if mode == ConflictMode::Reject {
            for (e, listed) in given.iter().enumerate() {
                if let Some(f) = es.conflict[e].difference(listed).next() {
                    return Err(Error::invalid(format!(
                        "conflict {e} # {f} is implied by inheritance but not listed"
                    )));
                }
            }
        }
        Ok(es)
    }

    fn from_closure(
        k: usize,
        down: Vec<FixedBitSet>,
        conflict_of: impl FnOnce(&[FixedBitSet], &[FixedBitSet]) -> Vec<FixedBitSet>,
    ) -> Self {
        let mut up: Vec<FixedBitSet> = (0..k).map(|_| FixedBitSet::with_capacity(k)).collect();
        for (b, d) in down.iter().enumerate() {
            for a in d.ones() {
                up[a].insert(b);
            }
        }
        let conflict = conflict_of(&down, &up);
        let mut cover = Vec::new();
        for b in 0..k {
            // Strict causes of b that are not strict causes of another one.
            let mut strict = down[b].clone();
            strict.set(b, false);
            let mut implied = FixedBitSet::with_capacity(k);
            for c in strict.ones() {
                let mut below_c = down[c].clone();
                below_c.set(c, false);
                implied.union_with(&below_c);
            }
            cover.extend(strict.difference(&implied).map(|a| (a, b)));
        }
        cover.sort_unstable();
        EventStructure {
            k,
            down,
            up,
            conflict,
            cover,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn conflict(&self, a: usize, b: usize) -> bool {
        self.conflict[a].contains(b)
    }

    pub fn concurrent(&self, a: usize, b: usize) -> bool {
        a != b && !self.leq(a, b) && !self.leq(b, a) && !self.conflict(a, b)
    }

    /// Events `≤ e`, including `e`.
    pub fn causes(&self, e: usize) -> &FixedBitSet {
        &self.down[e]
    }

    /// Cover pairs `a ⋖ b` of the causal order, sorted.
    pub fn cover_pairs(&self) -> &[(usize, usize)] {
        &self.cover
    }

    /// All `a < b` (strictly), sorted.
    pub fn strict_order_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.k {
            for b in self.up[a].ones().filter(|&b| b != a) {
                out.push((a, b));
            }
        }
        out
    }

    /// All conflict pairs `a # b` with `a < b`, sorted.
    pub fn conflict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.k {
            for b in self.conflict[a].ones().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    /// Conflict-free and downward-closed.
    pub fn is_configuration(&self, events: &[usize]) -> bool {
        let mut set = FixedBitSet::with_capacity(self.k);
        for &e in events {
            if e >= self.k {
                return false;
            }
            set.insert(e);
        }
        self.is_configuration_set(&set)
    }

    fn is_configuration_set(&self, set: &FixedBitSet) -> bool {
        set.ones()
            .all(|e| self.down[e].is_subset(set) && self.conflict[e].is_disjoint(set))
    }

    /// `k` line, then cover pairs as `le a b` and every conflict `a < b`
    /// as `cf a b`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.k);
        for &(a, b) in &self.cover {
            s.push_str(&format!("le {a} {b}\n"));
        }
        for (a, b) in self.conflict_pairs() {
            s.push_str(&format!("cf {a} {b}\n"));
        }
        s
    }
}

/// Checks the axioms and returns the validated structure.
pub fn validate_es(
    k: usize,
    le: &[(usize, usize)],
    cf: &[(usize, usize)],
    mode: ConflictMode,
) -> Result<EventStructure> {
    EventStructure::new(k, le, cf, mode)
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#') && !l.starts_with('c'))
            .then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what}: {tok:?}")))
}

/// Parses `k` followed by `le a b` and `cf a b` lines.
pub fn parse_es(text: &str, mode: ConflictMode) -> Result<EventStructure> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (l0, head) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let k: usize = head
        .parse()
        .map_err(|_| Error::parse(l0, format!("bad event count: {head:?}")))?;
    let (mut le, mut cf) = (Vec::new(), Vec::new());
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::parse(line, "expected `le a b` or `cf a b`"));
        }
        let a: usize = num(line, toks.get(1), "event")?;
        let b: usize = num(line, toks.get(2), "event")?;
        if a >= k || b >= k {
            return Err(Error::parse(line, format!("event out of range 0..{k}")));
        }
        match toks[0] {
            "le" => le.push((a, b)),
            "cf" => cf.push((a, b)),
            other => return Err(Error::parse(line, format!("unknown relation {other:?}"))),
        }
    }
    EventStructure::new(k, &le, &cf, mode)
}

/// Parses `w e1 e2 …` lines; an empty configuration is a lone weight.
pub fn parse_configurations(text: &str) -> Result<Vec<(Rational, Configuration)>> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let line = i + 1;
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        let w: Rational = num(line, toks.first(), "weight")?;
        if w.is_negative() {
            return Err(Error::parse(line, "negative weight"));
        }
        let mut c: Configuration = toks[1..]
            .iter()
            .map(|t| num(line, Some(t), "event"))
            .collect::<Result<_>>()?;
        c.sort_unstable();
        c.dedup();
        out.push((w, c));
    }
    Ok(out)
}

/// All configurations and the Hasse diagram of their inclusion order.
/// Vertex 0 is the empty configuration.
pub fn domain_of_es(es: &EventStructure, cap: usize) -> Result<(Graph, Vec<Configuration>)> {
    let k = es.k;
    // A linear extension keeps every cause ahead of its effects.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&e| es.down[e].count_ones(..));
    let mut configs: Vec<FixedBitSet> = Vec::new();
    let mut cur = FixedBitSet::with_capacity(k);
    enumerate(es, &order, 0, &mut cur, &mut configs, cap)?;

    let index: FxHashMap<FixedBitSet, usize> = configs
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut edges = Vec::new();
    for (i, c) in configs.iter().enumerate() {
        let mut bigger = c.clone();
        for e in (0..k).filter(|&e| !c.contains(e)) {
            bigger.insert(e);
            if let Some(&j) = index.get(&bigger) {
                edges.push((i, j));
            }
            bigger.set(e, false);
        }
    }
    let g = Graph::from_edges(configs.len(), edges)?;
    let lists = configs.iter().map(|c| c.ones().collect()).collect();
    Ok((g, lists))
}

fn enumerate(
    es: &EventStructure,
    order: &[usize],
    i: usize,
    cur: &mut FixedBitSet,
    out: &mut Vec<FixedBitSet>,
    cap: usize,
) -> Result<()> {
    if i == order.len() {
        if out.len() >= cap {
            return Err(Error::CapExceeded {
                what: "domain size",
                size: cap + 1,
                cap,
            });
        }
        out.push(cur.clone());
        return Ok(());
    }
    enumerate(es, order, i + 1, cur, out, cap)?;
    let e = order[i];
    let mut strict = es.down[e].clone();
    strict.set(e, false);
    if strict.is_subset(cur) && es.conflict[e].is_disjoint(cur) {
        cur.insert(e);
        enumerate(es, order, i + 1, cur, out, cap)?;
        cur.set(e, false);
    }
    Ok(())
}

/// The event structure of a pointed median graph: one event per Θ-class,
/// `a ≤ b` when class `a` separates class `b` from the basepoint, conflict
/// when the far halfspaces are disjoint.
pub fn es_of_pointed_graph(g: &Graph, tp: &ThetaPartition) -> Result<EventStructure> {
    tp.check_graph(g)?;
    let q = tp.q();
    let n = g.n();
    // Classes separating each vertex from the basepoint, built along a BFS tree.
    let mut sig: Vec<Option<FixedBitSet>> = vec![None; n];
    let mut compat: Vec<FixedBitSet> = (0..q).map(|_| FixedBitSet::with_capacity(q)).collect();
    let v0 = tp.basepoint();
    sig[v0] = Some(FixedBitSet::with_capacity(q));
    let mut queue = std::collections::VecDeque::from([v0]);
    while let Some(u) = queue.pop_front() {
        for &(v, e) in g.neighbors(u) {
            if sig[v].is_some() || tp.far(e) != v {
                continue;
            }
            let c = tp.class_of(e);
            let parent = sig[u].as_ref().expect("parent visited");
            // Every class already crossed meets class `c` on the far side.
            compat[c].union_with(parent);
            let mut s = parent.clone();
            s.insert(c);
            sig[v] = Some(s);
            queue.push_back(v);
        }
    }
    let sig: Vec<FixedBitSet> = sig
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::Invariant("vertex not reached from the basepoint".into())))
        .collect::<Result<_>>()?;
    let down: Vec<FixedBitSet> = (0..q).map(|c| sig[tp.far(tp.root(c))].clone()).collect();
    for a in 0..q {
        for b in compat[a].clone().ones() {
            compat[b].insert(a);
        }
    }
    Ok(EventStructure::from_closure(q, down, |_, _| {
        compat
            .into_iter()
            .enumerate()
            .map(|(a, mut c)| {
                c.insert(a);
                c.toggle_range(..);
                c
            })
            .collect()
    }))
}

fn check_configs(
    es: &EventStructure,
    configs: &[(Rational, Configuration)],
) -> Result<Vec<Rational>> {
    let mut inside = vec![Rational::zero(); es.k];
    for (i, (w, c)) in configs.iter().enumerate() {
        if w.is_negative() {
            return Err(Error::invalid(format!(
                "configuration {i} has negative weight"
            )));
        }
        if !es.is_configuration(c) {
            return Err(Error::invalid(format!(
                "configuration {i} {c:?} is not downward-closed and conflict-free"
            )));
        }
        for &e in c {
            inside[e] += w;
        }
    }
    Ok(inside)
}

/// Events carried by strictly more than half of the weight.
pub fn median_configuration(
    es: &EventStructure,
    configs: &[(Rational, Configuration)],
) -> Result<Configuration> {
    let inside = check_configs(es, configs)?;
    let total: Rational = configs.iter().map(|(w, _)| w).sum();
    let half = total.halve();
    Ok((0..es.k).filter(|&e| inside[e] > half).collect())
}

/// Two median configurations at distance equal to the number of
/// egalitarian events, so that every median lies between them.
///
/// Egalitarian events linked by cover pairs form blocks; conflicts between
/// blocks form a bipartite graph whose two sides are added to the strict
/// majority. In each component the block holding the smallest event goes
/// to the first configuration.
pub fn diametral_configurations(
    es: &EventStructure,
    configs: &[(Rational, Configuration)],
) -> Result<(Configuration, Configuration)> {
    let inside = check_configs(es, configs)?;
    let total: Rational = configs.iter().map(|(w, _)| w).sum();
    if !total.is_positive() {
        return Err(Error::invalid("zero total weight"));
    }
    let half = total.halve();
    let k = es.k;
    let egal: Vec<bool> = (0..k).map(|e| inside[e] == half).collect();

    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in &es.cover {
        if egal[a] && egal[b] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let block: Vec<usize> = (0..k).map(|e| find(&mut parent, e)).collect();
    // Union by smaller id keeps every root at the smallest event of its block.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for a in (0..k).filter(|&a| egal[a]) {
        for b in es.conflict[a].ones().filter(|&b| b > a && egal[b]) {
            let (ra, rb) = (block[a], block[b]);
            if ra == rb {
                return Err(Error::Invariant(format!(
                    "egalitarian events {a} and {b} conflict inside one block"
                )));
            }
            adj[ra].push(rb);
            adj[rb].push(ra);
        }
    }
    let mut color: Vec<Option<bool>> = vec![None; k];
    for root in (0..k).filter(|&e| egal[e] && block[e] == e) {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(true);
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            let cx = color[x].expect("colored before push");
            for &y in &adj[x] {
                match color[y] {
                    None => {
                        color[y] = Some(!cx);
                        stack.push(y);
                    }
                    Some(cy) if cy == cx => {
                        return Err(Error::Invariant(
                            "conflict graph of egalitarian blocks is not bipartite".into(),
                        ))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for e in 0..k {
        if inside[e] > half {
            a.push(e);
            b.push(e);
        } else if egal[e] {
            if color[block[e]] == Some(true) {
                a.push(e);
            } else {
                b.push(e);
            }
        }
    }
    Ok((a, b))
}

/// A 2-CNF formula over variables `1..=vars`; a literal is `±var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSatFormula {
    pub vars: usize,
    pub clauses: Vec<(i64, i64)>,
}

impl TwoSatFormula {
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        let lit = |l: i64| assignment[(l.unsigned_abs() - 1) as usize] == (l > 0);
        self.clauses.iter().all(|&(a, b)| lit(a) || lit(b))
    }

    /// DIMACS text.
    pub fn to_text(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for (a, b) in &self.clauses {
            s.push_str(&format!("{a} {b} 0\n"));
        }
        s
    }
}

/// Parses DIMACS-style input restricted to two-literal clauses.
pub fn parse_twosat(text: &str) -> Result<TwoSatFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (line, toks) in data_lines(text) {
        if toks[0] == "p" {
            if header.is_some() || toks.len() != 4 || toks[1] != "cnf" {
                return Err(Error::parse(
                    line,
                    "expected a single `p cnf vars clauses` header",
                ));
            }
            header = Some((
                num(line, toks.get(2), "variable count")?,
                num(line, toks.get(3), "clause count")?,
            ));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| Error::parse(line, "clause before header"))?;
        let mut lits: Vec<i64> = toks
            .iter()
            .map(|t| num(line, Some(t), "literal"))
            .collect::<Result<_>>()?;
        if lits.last() == Some(&0) {
            lits.pop();
        }
        if lits.len() != 2 || lits.contains(&0) {
            return Err(Error::parse(line, "clauses must have exactly two literals"));
        }
        if lits.iter().any(|l| l.unsigned_abs() as usize > vars) {
            return Err(Error::parse(
                line,
                format!("literal out of range 1..={vars}"),
            ));
        }
        clauses.push((lits[0], lits[1]));
    }
    let (vars, m) = header.ok_or_else(|| Error::parse(1, "missing `p cnf` header"))?;
    if m != clauses.len() {
        return Err(Error::parse(
            1,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    Ok(TwoSatFormula { vars, clauses })
}

/// `(x_a ∨ ¬x_b)` for every strict `a < b` and `(¬x_a ∨ ¬x_b)` for every
/// conflict; the solutions are the characteristic vectors of configurations.
pub fn es_to_2sat(es: &EventStructure) -> TwoSatFormula {
    let v = |e: usize| e as i64 + 1;
    let mut clauses: Vec<(i64, i64)> = es
        .strict_order_pairs()
        .into_iter()
        .map(|(a, b)| (v(a), -v(b)))
        .collect();
    clauses.extend(es.conflict_pairs().into_iter().map(|(a, b)| (-v(a), -v(b))));
    TwoSatFormula {
        vars: es.k,
        clauses,
    }
}

/// Reads `(x_a ∨ ¬x_b)` as `a ≤ b` and `(¬x_a ∨ ¬x_b)` as `a # b`, then
/// closes both relations. Formulas with a clause of two positive literals,
/// a clause repeating a variable, or equivalent variables are rejected.
pub fn twosat_to_es(f: &TwoSatFormula) -> Result<EventStructure> {
    let (mut le, mut cf) = (Vec::new(), Vec::new());
    for &(a, b) in &f.clauses {
        if a == 0
            || b == 0
            || a.unsigned_abs() as usize > f.vars
            || b.unsigned_abs() as usize > f.vars
        {
            return Err(Error::invalid(format!(
                "literal out of range in clause ({a} ∨ {b})"
            )));
        }
        if a.unsigned_abs() == b.unsigned_abs() {
            return Err(Error::invalid(format!(
                "clause ({a} ∨ {b}) repeats a variable"
            )));
        }
        let e = |l: i64| (l.unsigned_abs() - 1) as usize;
        match (a > 0, b > 0) {
            (true, true) => {
                return Err(Error::invalid(format!(
                    "clause ({a} ∨ {b}) has two positive literals"
                )))
            }
            (true, false) => le.push((e(a), e(b))),
            (false, true) => le.push((e(b), e(a))),
            (false, false) => cf.push((e(a), e(b))),
        }
    }
    EventStructure::new(f.vars, &le, &cf, ConflictMode::Complete)
        .map_err(|err| Error::invalid(format!("formula does not define an event structure: {err}")))
}

/// A configuration minimizing the total Hamming distance to every
/// configuration of the domain; ties go to the lexicographically least.
pub fn compact_median_bruteforce(es: &EventStructure, cap: usize) -> Result<Configuration> {
    let (_, configs) = domain_of_es(es, cap)?;
    let total = configs.len() as u64;
    let mut count = vec![0u64; es.k];
    for c in &configs {
        for &e in c {
            count[e] += 1;
        }
    }
    let outside: u64 = count.iter().sum();
    let mut best: Option<(u64, &Configuration)> = None;
    for c in &configs {
        // Start from F(∅) and switch each chosen event to the other side.
        let f = c
            .iter()
            .fold(outside, |acc, &e| acc - count[e] + (total - count[e]));
        let better = match best {
            None => true,
            Some((bf, bc)) => f < bf || (f == bf && c < bc),
        };
        if better {
            best = Some((f, c));
        }
    }
    Ok(best
        .expect("the empty configuration always exists")
        .1
        .clone())
}

/// Vertex of the domain holding a given configuration.
pub fn configuration_vertex(configs: &[Configuration], c: &[usize]) -> Option<Vertex> {
    configs.iter().position(|x| x.as_slice() == c)
}
