//! Acceptance suite. Runs every criterion in sequence, prints one line per
//! criterion, and fails at the end if any criterion failed.
//!
//! Run alone with `cargo test -p median-oracle --test acceptance -- --nocapture`.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use median_core::complex::{geometric_median, geometric_wiener, Terminal};
use median_core::events::{
    diametral_configurations, domain_of_es, es_to_2sat, median_configuration, twosat_to_es,
    Configuration, TwoSatFormula,
};
use median_core::graph::{Graph, Vertex, WeightFn};
use median_core::median::{
    diametral_pair, distance_matrix, halfspace_weights, median_set, wiener_index,
    DEFAULT_DISTANCE_CAP,
};
use median_core::theta::{
    check_fellow_traveler, lexbfs_order, theta_classes_bfs, theta_classes_lexbfs, ThetaPartition,
};
use median_core::Rational;
use median_oracle::es::{
    brute_configuration_medians, configuration_cost, es_round_trip, graph_round_trip, random_es,
    solutions,
};
use median_oracle::gen::{grid, hypercube, product_of_paths, random_median, random_tree};
use median_oracle::geometric::{
    brute_geometric_f, brute_geometric_median, brute_geometric_wiener, Signatures,
};
use median_oracle::{
    apsp_bfs, brute_median_with, brute_theta, brute_wiener_with, majority_rule_intersection,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock budget for criterion 1.
const THETA_SUITE_BUDGET: Duration = Duration::from_secs(60);
/// Largest allowed growth of wall time per doubling of the edge count.
const DOUBLING_FACTOR: f64 = 3.0;
/// Budget for the largest linearity instance.
const LARGEST_BUDGET: Duration = Duration::from_secs(10);
const WEIGHTS_PER_INSTANCE: usize = 100;
const APSP_LIMIT: usize = 500;
const DOMAIN_CAP: usize = 100_000;
const CANDIDATE_CAP: usize = 2_000_000;

struct Instance {
    name: String,
    g: Graph,
    v0: Vertex,
}

fn suite() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    let mut push = |name: String, g: Graph, rng: &mut ChaCha8Rng| {
        let v0 = rng.gen_range(0..g.n());
        out.push(Instance { name, g, v0 });
    };
    for d in 1..=6 {
        push(format!("hypercube({d})"), hypercube(d), &mut rng);
    }
    for r in [1, 2, 3, 5, 8, 13, 21, 30] {
        for c in [2, 4, 9, 16, 30] {
            push(format!("grid({r}x{c})"), grid(r, c), &mut rng);
        }
    }
    for i in 0..30 {
        let d = 2 + i % 3;
        let lens: Vec<usize> = (0..d).map(|_| rng.gen_range(2..=7)).collect();
        push(
            format!("product({lens:?})"),
            product_of_paths(&lens),
            &mut rng,
        );
    }
    for i in 0..40u64 {
        let n = rng.gen_range(2..=1000);
        push(format!("tree(n={n},seed={i})"), random_tree(n, i), &mut rng);
    }
    for i in 0..100u64 {
        let dim = rng.gen_range(3..=10);
        let seeds = rng.gen_range(3..=9);
        let rm = random_median(dim, seeds, 1000 + i);
        push(
            format!("random-median(d={dim},seeds={seeds},seed={})", 1000 + i),
            rm.graph,
            &mut rng,
        );
    }
    out
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- 1

fn criterion_theta(suite: &[Instance]) -> Outcome {
    let start = Instant::now();
    for inst in suite {
        let brute = brute_theta(&inst.g);
        for v0 in [0, inst.v0] {
            let lex =
                theta_classes_lexbfs(&inst.g, v0).map_err(|e| format!("{}: {e}", inst.name))?;
            let bfs = theta_classes_bfs(&inst.g, v0).map_err(|e| format!("{}: {e}", inst.name))?;
            ensure(lex.canonical() == brute, || {
                format!("{} v0={v0}: LexBFS classes differ", inst.name)
            })?;
            ensure(bfs.canonical() == brute, || {
                format!("{} v0={v0}: BFS classes differ", inst.name)
            })?;
        }
    }
    let t = start.elapsed();
    ensure(t < THETA_SUITE_BUDGET, || format!("suite took {t:.1?}"))?;
    ensure(suite.len() >= 200, || {
        format!("only {} instances", suite.len())
    })?;
    Ok(format!(
        "{} instances x 2 basepoints, 0 mismatches, {t:.1?}",
        suite.len()
    ))
}

// ---------------------------------------------------------------- 2

fn criterion_fellow_traveler(suite: &[Instance]) -> Outcome {
    for inst in suite {
        let so = lexbfs_order(&inst.g, inst.v0);
        ensure(check_fellow_traveler(&inst.g, &so), || {
            format!("{} v0={}", inst.name, inst.v0)
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut runs = 0;
    for i in 0..1000u64 {
        let rm = random_median(rng.gen_range(2..=10), rng.gen_range(2..=9), 50_000 + i);
        for _ in 0..10 {
            let v0 = rng.gen_range(0..rm.graph.n());
            let so = lexbfs_order(&rm.graph, v0);
            ensure(check_fellow_traveler(&rm.graph, &so), || {
                format!("random-median seed {} v0={v0}", 50_000 + i)
            })?;
            runs += 1;
        }
    }
    Ok(format!(
        "{} suite instances + {runs} random-median runs, 0 failures",
        suite.len()
    ))
}

// ---------------------------------------------------------------- 3

fn median_pipeline(g: &Graph, w: &WeightFn) -> Duration {
    let start = Instant::now();
    let tp = theta_classes_lexbfs(g, 0).expect("grids are median");
    let hw = halfspace_weights(g, w, &tp).expect("consistent inputs");
    let med = median_set(g, &tp, &hw).expect("consistent inputs");
    let t = start.elapsed();
    assert!(!med.vertices().is_empty());
    t
}

fn criterion_linearity() -> Outcome {
    let sides = [317usize, 448, 633, 895];
    let mut times = Vec::new();
    let mut report = Vec::new();
    for &k in &sides {
        let g = grid(k, k);
        let w = WeightFn::uniform(g.n());
        let best = (0..3)
            .map(|_| median_pipeline(&g, &w))
            .min()
            .expect("three runs");
        report.push(format!("m={} {:.0?}", g.m(), best));
        times.push(best);
    }
    let detail = report.join(", ");
    for pair in times.windows(2) {
        let ratio = pair[1].as_secs_f64() / pair[0].as_secs_f64().max(1e-9);
        ensure(ratio <= DOUBLING_FACTOR, || {
            format!("doubling ratio {ratio:.2} > {DOUBLING_FACTOR}: {detail}")
        })?;
    }
    let last = *times.last().expect("four sizes");
    ensure(last < LARGEST_BUDGET, || {
        format!("largest instance {last:.1?}: {detail}")
    })?;
    Ok(detail)
}

// ---------------------------------------------------------------- 4

fn criterion_class_count() -> Outcome {
    let mut checked = 0;
    for d in 1..=4usize {
        for len in 1..=10usize {
            let g = product_of_paths(&vec![len + 1; d]);
            let tp = theta_classes_lexbfs(&g, 0).map_err(|e| e.to_string())?;
            // d · (n^(1/d) − 1), with the root taken exactly.
            let root = (1..=g.n())
                .find(|r| r.pow(d as u32) >= g.n())
                .expect("n ≥ 1");
            ensure(root.pow(d as u32) == g.n(), || {
                format!("n={} is not a {d}-th power", g.n())
            })?;
            ensure(tp.q() == d * len && tp.q() == d * (root - 1), || {
                format!("d={d} L={len}: q={} expected {}", tp.q(), d * len)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} products, q = d*L in all"))
}

// ---------------------------------------------------------------- 5, 6, 7

/// Side of each vertex with respect to class `c`: true on the far side.
fn far_side(g: &Graph, tp: &ThetaPartition, c: usize) -> Vec<bool> {
    let mut far = vec![true; g.n()];
    far[tp.basepoint()] = false;
    let mut stack = vec![tp.basepoint()];
    while let Some(u) = stack.pop() {
        for &(v, e) in g.neighbors(u) {
            if far[v] && tp.class_of(e) != c {
                far[v] = false;
                stack.push(v);
            }
        }
    }
    far
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(0..=12), rng.gen_range(1..=6))
}

/// Weight functions of several shapes; index `i` picks the shape.
fn weight_function(g: &Graph, tp: &ThetaPartition, i: usize, rng: &mut ChaCha8Rng) -> WeightFn {
    let n = g.n();
    let w: Vec<Rational> = match i {
        0 => vec![Rational::zero(); n],
        1 => vec![Rational::one(); n],
        // Mostly zero: sparse support.
        2..=13 => (0..n)
            .map(|_| {
                if rng.gen_bool(0.75) {
                    Rational::zero()
                } else {
                    random_rational(rng)
                }
            })
            .collect(),
        // Balanced across a random class.
        14..=27 if tp.q() > 0 => {
            let c = rng.gen_range(0..tp.q());
            let far = far_side(g, tp, c);
            let mut w: Vec<Rational> = (0..n).map(|_| random_rational(rng)).collect();
            let (mut a, mut b) = (Rational::zero(), Rational::zero());
            for v in 0..n {
                if far[v] {
                    a += &w[v];
                } else {
                    b += &w[v];
                }
            }
            let lighter_side = a < b;
            let fix = (&a - &b).abs();
            let pool: Vec<Vertex> = (0..n).filter(|&v| far[v] == lighter_side).collect();
            let v = *pool.choose(rng).expect("both halfspaces are nonempty");
            w[v] += &fix;
            w
        }
        // Single heavy vertex or two points.
        28..=33 => {
            let mut w = vec![Rational::zero(); n];
            for _ in 0..1 + i % 2 {
                w[rng.gen_range(0..n)] += &Rational::one();
            }
            w
        }
        _ => (0..n).map(|_| random_rational(rng)).collect(),
    };
    WeightFn::new(w).expect("non-negative")
}

struct MedianStats {
    functions: usize,
    egalitarian: usize,
    with_zeros: usize,
    pairs: usize,
    wiener: usize,
    matrices: usize,
}

fn criteria_median(suite: &[Instance]) -> (Outcome, Outcome, Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut s = MedianStats {
        functions: 0,
        egalitarian: 0,
        with_zeros: 0,
        pairs: 0,
        wiener: 0,
        matrices: 0,
    };
    let mut fail5: Option<String> = None;
    let mut fail6: Option<String> = None;
    let mut fail7: Option<String> = None;
    for inst in suite {
        let g = &inst.g;
        let tp = theta_classes_lexbfs(g, inst.v0).expect("suite graphs are median");
        let d = apsp_bfs(g);
        if g.n() <= APSP_LIMIT && fail7.is_none() {
            let dm = distance_matrix(g, &tp, DEFAULT_DISTANCE_CAP).expect("within cap");
            if (0..g.n()).any(|u| dm.row(u) != d.row(u)) {
                fail7 = Some(format!("{}: distance matrix differs from BFS", inst.name));
            }
            s.matrices += 1;
        }
        for i in 0..WEIGHTS_PER_INSTANCE {
            let w = weight_function(g, &tp, i, &mut rng);
            let hw = halfspace_weights(g, &w, &tp).expect("consistent inputs");
            let med = median_set(g, &tp, &hw).expect("consistent inputs");
            let brute = brute_median_with(&d, &w);
            s.functions += 1;
            if med
                .classification()
                .contains(&median_core::median::ClassTag::Egalitarian)
                && w.total().is_positive()
            {
                s.egalitarian += 1;
            }
            if w.as_slice().iter().any(Rational::is_zero) {
                s.with_zeros += 1;
            }
            if med.vertices() != brute.argmin.as_slice() && fail5.is_none() {
                fail5 = Some(format!(
                    "{} weights #{i}: fast {:?} brute {:?}",
                    inst.name,
                    med.vertices(),
                    brute.argmin
                ));
            }
            if w.total().is_positive() {
                let (u, v) = diametral_pair(g, &w, &med).expect("positive weight");
                if g.interval(u, v) != med.vertices() && fail6.is_none() {
                    fail6 = Some(format!(
                        "{} weights #{i}: I({u},{v}) differs from the median set",
                        inst.name
                    ));
                }
                s.pairs += 1;
            }
            if i < 4 {
                if wiener_index(&hw) != brute_wiener_with(&d, &w) && fail7.is_none() {
                    fail7 = Some(format!("{} weights #{i}: Wiener index differs", inst.name));
                }
                s.wiener += 1;
            }
        }
    }
    let c5 = match fail5 {
        Some(f) => Err(f),
        None if s.egalitarian < 10 * suite.len() || s.with_zeros < 10 * suite.len() => Err(format!(
            "too few engineered functions: {} egalitarian, {} with zeros",
            s.egalitarian, s.with_zeros
        )),
        None => Ok(format!(
            "{} weight functions on {} instances ({} with an egalitarian class, {} with zero-weight vertices), 0 mismatches",
            s.functions,
            suite.len(),
            s.egalitarian,
            s.with_zeros
        )),
    };
    let c6 = fail6.map_or_else(
        || {
            Ok(format!(
                "{} diametral pairs, all intervals equal the median set",
                s.pairs
            ))
        },
        Err,
    );
    let c7 = fail7.map_or_else(
        || {
            Ok(format!(
                "{} Wiener indices and {} distance matrices (n <= {APSP_LIMIT}) exact",
                s.wiener, s.matrices
            ))
        },
        Err,
    );
    (c5, c6, c7)
}

// ---------------------------------------------------------------- 8, 9

fn desk_graphs(rng: &mut ChaCha8Rng) -> Vec<Graph> {
    let mut out = vec![
        hypercube(1),
        hypercube(2),
        hypercube(3),
        hypercube(4),
        grid(2, 3),
        grid(3, 3),
        grid(4, 5),
        product_of_paths(&[2, 3, 3]),
        product_of_paths(&[2, 2, 4]),
    ];
    for i in 0..30u64 {
        out.push(random_tree(rng.gen_range(2..=30), 300 + i));
    }
    let mut seed = 900u64;
    while out.len() < 120 {
        seed += 1;
        let rm = random_median(rng.gen_range(3..=8), rng.gen_range(3..=7), seed);
        if rm.graph.n() <= 50 {
            out.push(rm.graph);
        }
    }
    out
}

fn random_terminals(
    g: &Graph,
    tp: &ThetaPartition,
    rng: &mut ChaCha8Rng,
    vertex_only: bool,
) -> Vec<Terminal> {
    const COORDS: [(i64, i64); 6] = [(1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 5)];
    let sig = Signatures::new(g, tp);
    let count = rng.gen_range(1..=8);
    (0..count)
        .map(|_| {
            let base = rng.gen_range(0..g.n());
            let weight = Rational::from_int(rng.gen_range(1..=3));
            let mut coords: Vec<(usize, Rational)> = Vec::new();
            if !vertex_only {
                let mut classes: Vec<usize> = g
                    .neighbors(base)
                    .iter()
                    .map(|&(_, e)| tp.class_of(e))
                    .collect();
                classes.shuffle(rng);
                let dim = rng.gen_range(0..=3);
                for c in classes {
                    if coords.len() == dim {
                        break;
                    }
                    if coords.iter().all(|&(c2, _)| sig.crossing_at(base, c2, c)) {
                        let (p, q) = COORDS[rng.gen_range(0..COORDS.len())];
                        coords.push((c, Rational::new(p, q)));
                    }
                }
                coords.sort_by_key(|&(c, _)| c);
            }
            Terminal {
                base,
                coords,
                weight,
            }
        })
        .collect()
}

fn criteria_geometric() -> (Outcome, Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let graphs = desk_graphs(&mut rng);
    let mut instances = 0;
    let mut vertex_only_runs = 0;
    let mut fail8: Option<String> = None;
    let mut fail9: Option<String> = None;
    for (gi, g) in graphs.iter().enumerate() {
        let v0 = rng.gen_range(0..g.n());
        let tp = theta_classes_lexbfs(g, v0).expect("median");
        let sig = Signatures::new(g, &tp);
        for round in 0..2 {
            let vertex_only = round == 1;
            let ts = random_terminals(g, &tp, &mut rng, vertex_only);
            instances += 1;
            let m = geometric_median(g, &tp, &ts).expect("valid terminals");
            let opt = brute_geometric_median(g, &tp, &ts, CANDIDATE_CAP).expect("within cap");
            let label = format!("graph #{gi} (n={}, v0={v0}) terminals {ts:?}", g.n());
            if fail8.is_none() {
                if m.vertices.len() > g.n() || m.edges.len() > g.m() {
                    fail8 = Some(format!("{label}: skeleton too large"));
                }
                for x in &m.vertices {
                    let f = brute_geometric_f(&sig, &ts, x.base, &x.coords)
                        .expect("skeleton vertices are points");
                    let chi = sig.position(x.base, &x.coords).expect("valid point");
                    if f != opt.value || opt.minimizers.binary_search(&chi).is_err() {
                        fail8 = Some(format!(
                            "{label}: skeleton vertex {x:?} has F={f}, optimum {}",
                            opt.value
                        ));
                        break;
                    }
                }
                if vertex_only {
                    let mut w = vec![Rational::zero(); g.n()];
                    for t in &ts {
                        w[t.base] += &t.weight;
                    }
                    let w = WeightFn::new(w).expect("positive");
                    let hw = halfspace_weights(g, &w, &tp).expect("consistent");
                    let med = median_set(g, &tp, &hw).expect("consistent");
                    let mut got: Vec<Vertex> = m.vertices.iter().map(|x| x.anchor).collect();
                    got.sort_unstable();
                    if got != med.vertices() || m.vertices.iter().any(|x| !x.coords.is_empty()) {
                        fail8 = Some(format!(
                            "{label}: vertex terminals give {got:?}, median set {:?}",
                            med.vertices()
                        ));
                    }
                    vertex_only_runs += 1;
                }
            }
            if fail9.is_none() {
                let fast = geometric_wiener(g, &tp, &ts).expect("valid terminals");
                let slow = brute_geometric_wiener(g, &tp, &ts).expect("valid terminals");
                if fast != slow {
                    fail9 = Some(format!("{label}: {fast} vs {slow}"));
                }
            }
        }
    }
    let c8 = fail8.map_or_else(
        || {
            Ok(format!(
                "{instances} instances on {} graphs ({vertex_only_runs} vertex-only), all skeleton vertices optimal",
                graphs.len()
            ))
        },
        Err,
    );
    let c9 = fail9.map_or_else(|| Ok(format!("{instances} instances, exact equality")), Err);
    (c8, c9)
}

// ---------------------------------------------------------------- 10

fn egalitarian_count(k: usize, configs: &[(Rational, Configuration)]) -> usize {
    let total: Rational = configs.iter().map(|(w, _)| w).sum();
    (0..k)
        .filter(|&e| {
            let inside: Rational = configs
                .iter()
                .filter(|(_, c)| c.contains(&e))
                .map(|(w, _)| w)
                .sum();
            &inside + &inside == total
        })
        .count()
}

/// Whether some variable is constant or two variables are equal on every
/// solution.
fn degenerate(vars: usize, sols: &[Configuration]) -> bool {
    let value = |s: &Configuration, v: usize| s.contains(&v);
    let constant = (0..vars).any(|v| sols.iter().all(|s| value(s, v) == value(&sols[0], v)));
    let equal = (0..vars).any(|a| (0..a).any(|b| sols.iter().all(|s| value(s, a) == value(s, b))));
    constant || equal
}

fn random_formula(rng: &mut ChaCha8Rng) -> TwoSatFormula {
    let vars = rng.gen_range(2..=20);
    // Only 3·C(vars, 2) distinct clauses exist.
    let m = rng.gen_range(1..=(2 * vars).min(3 * vars * (vars - 1) / 2));
    let mut clauses = BTreeSet::new();
    while clauses.len() < m {
        let a = rng.gen_range(1..=vars as i64);
        let b = rng.gen_range(1..=vars as i64);
        if a == b {
            continue;
        }
        let clause = if rng.gen_bool(0.7) {
            (a, -b)
        } else {
            (-a.min(b), -a.max(b))
        };
        clauses.insert(clause);
    }
    TwoSatFormula {
        vars,
        clauses: clauses.into_iter().collect(),
    }
}

fn criterion_events(suite: &[Instance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut structures = 0;
    for i in 0..600u64 {
        let k = rng.gen_range(1..=12);
        let es = random_es(
            k,
            rng.gen_range(0.0..0.5),
            rng.gen_range(0.0..0.6),
            7000 + i,
        );
        let (dg, domain) = domain_of_es(&es, DOMAIN_CAP).map_err(|e| e.to_string())?;
        let tag = format!("es seed {} (k={k}, domain {})", 7000 + i, domain.len());
        for round in 0..3 {
            let count = rng.gen_range(1..=6);
            let configs: Vec<(Rational, Configuration)> = (0..count)
                .map(|_| {
                    let w = if round == 0 {
                        Rational::one()
                    } else {
                        Rational::from_int(rng.gen_range(0..=3))
                    };
                    (w, domain[rng.gen_range(0..domain.len())].clone())
                })
                .collect();
            let total: Rational = configs.iter().map(|(w, _)| w).sum();
            let (best, argmin) = brute_configuration_medians(&domain, &configs);
            let c = median_configuration(&es, &configs).map_err(|e| format!("{tag}: {e}"))?;
            ensure(argmin.contains(&c), || {
                format!("{tag}: median {c:?} not optimal ({best})")
            })?;
            if !total.is_positive() {
                continue;
            }
            let (a, b) =
                diametral_configurations(&es, &configs).map_err(|e| format!("{tag}: {e}"))?;
            ensure(
                configuration_cost(&a, &configs) == best
                    && configuration_cost(&b, &configs) == best,
                || format!("{tag}: diametral pair {a:?} {b:?} not optimal"),
            )?;
            let dist = a.iter().filter(|e| !b.contains(e)).count()
                + b.iter().filter(|e| !a.contains(e)).count();
            ensure(dist == egalitarian_count(k, &configs), || {
                format!("{tag}: distance {dist}")
            })?;
            let index: HashMap<&Configuration, Vertex> =
                domain.iter().enumerate().map(|(i, c)| (c, i)).collect();
            let between: Vec<Configuration> = dg
                .interval(index[&a], index[&b])
                .into_iter()
                .map(|v| domain[v].clone())
                .collect();
            let mut between = between;
            between.sort();
            let mut argmin = argmin;
            argmin.sort();
            ensure(between == argmin, || {
                format!("{tag}: interval of the pair is not the median set")
            })?;
        }
        let f = es_to_2sat(&es);
        let mut sorted = domain.clone();
        sorted.sort();
        ensure(solutions(&f) == sorted, || {
            format!("{tag}: formula solutions differ from the domain")
        })?;
        let back = twosat_to_es(&f).map_err(|e| format!("{tag}: {e}"))?;
        let (_, mut back_domain) = domain_of_es(&back, DOMAIN_CAP).map_err(|e| e.to_string())?;
        back_domain.sort();
        ensure(back_domain == sorted, || {
            format!("{tag}: round trip through 2-SAT changed the domain")
        })?;
        ensure(
            es_round_trip(&es, DOMAIN_CAP).map_err(|e| e.to_string())?,
            || format!("{tag}: domain does not give back the structure"),
        )?;
        structures += 1;
    }
    let mut formulas = 0;
    let mut accepted = 0;
    for _ in 0..300 {
        let f = random_formula(&mut rng);
        let sols = solutions(&f);
        match twosat_to_es(&f) {
            Ok(es) => {
                let (_, mut d) = domain_of_es(&es, 1 << 21).map_err(|e| e.to_string())?;
                d.sort();
                ensure(d == sols, || {
                    format!("formula {f:?}: domain differs from solutions")
                })?;
                accepted += 1;
            }
            Err(_) => ensure(degenerate(f.vars, &sols), || {
                format!("formula {f:?} rejected without cause")
            })?,
        }
        formulas += 1;
    }
    let mut graphs = 0;
    for inst in suite {
        ensure(
            graph_round_trip(&inst.g, inst.v0, DOMAIN_CAP).map_err(|e| e.to_string())?,
            || {
                format!(
                    "{}: domain of its event structure is not isomorphic",
                    inst.name
                )
            },
        )?;
        graphs += 1;
    }
    Ok(format!(
        "{structures} event structures (<= 12 events), {formulas} random formulas ({accepted} accepted), {graphs} graph round trips"
    ))
}

// ---------------------------------------------------------------- 11

fn criterion_negative_control() -> Outcome {
    let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6)).collect()).expect("cycle");
    let w6 = WeightFn::new(
        (0..6)
            .map(|v| Rational::from_int((v % 2 == 0) as i64))
            .collect(),
    )
    .expect("weights");
    let k23 =
        Graph::from_edges(5, vec![(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).expect("K23");
    let w23 = WeightFn::new(
        vec![0, 0, 1, 1, 1]
            .into_iter()
            .map(Rational::from_int)
            .collect(),
    )
    .expect("weights");
    let mut lines = Vec::new();
    for (name, g, w) in [("C6", &c6, &w6), ("K23", &k23, &w23)] {
        let rule = majority_rule_intersection(g, w);
        let brute = brute_median_with(&apsp_bfs(g), w).argmin;
        ensure(rule != brute, || {
            format!("{name}: majority rule agrees with the brute median")
        })?;
        lines.push(format!(
            "{name}: majority rule {rule:?} vs argmin {brute:?}"
        ));
    }
    Ok(lines.join("; "))
}

// ----------------------------------------------------------------

fn run(
    results: &mut Vec<(usize, &'static str, Outcome)>,
    id: usize,
    name: &'static str,
    f: impl FnOnce() -> Outcome,
) {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let (status, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    // Straight to the handle so the line shows even when output is captured.
    let _ = writeln!(
        std::io::stderr().lock(),
        "criterion {id:>2} [{name}]: {status} ({detail})"
    );
    results.push((id, name, outcome));
}

#[test]
fn acceptance() {
    let mut results = Vec::new();
    // Timing first, before the suite fills memory.
    run(&mut results, 3, "linearity", criterion_linearity);
    let suite = suite();
    run(&mut results, 1, "theta partitions", || {
        criterion_theta(&suite)
    });
    run(&mut results, 2, "fellow traveler", || {
        criterion_fellow_traveler(&suite)
    });
    run(
        &mut results,
        4,
        "class count of path products",
        criterion_class_count,
    );
    let (c5, c6, c7) = criteria_median(&suite);
    run(&mut results, 5, "median soundness", || c5);
    run(&mut results, 6, "interval form", || c6);
    run(&mut results, 7, "Wiener index and distances", || c7);
    let (c8, c9) = criteria_geometric();
    run(&mut results, 8, "geometric median", || c8);
    run(&mut results, 9, "geometric Wiener", || c9);
    run(&mut results, 10, "event structures", || {
        criterion_events(&suite)
    });
    run(
        &mut results,
        11,
        "negative control",
        criterion_negative_control,
    );
    let failed: Vec<usize> = results
        .iter()
        .filter(|r| r.2.is_err())
        .map(|r| r.0)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
