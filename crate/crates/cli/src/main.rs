use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use median_core::complex::{geometric_median, geometric_wiener, parse_terminals};
use median_core::events::{
    compact_median_bruteforce, diametral_configurations, domain_of_es, es_to_2sat,
    median_configuration, parse_configurations, parse_es, parse_twosat, twosat_to_es, ConflictMode,
    EventStructure,
};
use median_core::graph::{load_graph, load_weights, Graph};
use median_core::median::{
    diametral_pair, distance_matrix, halfspace_weights, median_set, wiener_index,
    DEFAULT_DISTANCE_CAP,
};
use median_core::theta::{theta_classes_bfs, theta_classes_lexbfs, ThetaPartition};
use median_core::Error;
use median_oracle::es::random_es;
use median_oracle::gen::DEFAULT_GEN_CAP;
use median_oracle::verify::DEFAULT_VERIFY_CAP;
use median_oracle::{generate, verify_median_graph, GeneratorKind, MedianCheck};

const DEFAULT_DOMAIN_CAP: usize = 1 << 20;

const FORMATS: &str = "\
FILE FORMATS
  graph      first line `n m`, then m lines `u v` (0-based). `#` starts a comment.
               3 2
               0 1
               1 2
  weights    lines `v p/q` or `v p`; unlisted vertices weigh 0.
               0 1
               2 3/2
  terminals  one line per point: `v k i1 p1/q1 ... ik pk/qk w`, the i_j being
             class ids as printed by `theta`, coordinates in (0,1), w the weight.
               0 0 1
               3 1 0 1/3 2
  events     first line `k`, then `le a b` (a covered by b) and `cf a b` lines.
               3
               le 0 1
               cf 1 2
  configs    one line per configuration: weight, then its events.
               1 0 1
               2
  2-SAT      `p cnf vars clauses`, then clauses `a b 0` with literals in 1..vars.
               p cnf 2 1
               -1 -2 0

EXAMPLES
  medgraph gen grid 3 3 > g.txt
  medgraph theta g.txt --v0 4
  medgraph median g.txt w.txt --pair
  medgraph gen es 6 --seed 2 | medgraph es2sat -

Exit codes: 1 parse or validation error, 2 cap exceeded, 3 non-median input.
A path of `-` reads standard input.";

#[derive(Parser, Debug)]
#[command(name = "medgraph", version, about = "Medians, Θ-classes and event structures of median graphs", after_help = FORMATS)]
struct Cli {
    /// Print the wall-clock time of each phase to stderr.
    #[arg(long, global = true)]
    time: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct ThetaOpts {
    /// Basepoint of the search.
    #[arg(long, default_value_t = 0)]
    v0: usize,
    /// Θ-class algorithm.
    #[arg(long, value_enum, default_value_t = Algo::Lexbfs)]
    algo: Algo,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Algo {
    Bfs,
    Lexbfs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Conflicts {
    /// Close the conflict relation under inheritance.
    Complete,
    /// Reject input whose conflict relation is not already closed.
    Reject,
}

impl From<Conflicts> for ConflictMode {
    fn from(c: Conflicts) -> Self {
        match c {
            Conflicts::Complete => ConflictMode::Complete,
            Conflicts::Reject => ConflictMode::Reject,
        }
    }
}

#[derive(Args, Debug)]
struct EsOpts {
    /// Event structure file.
    es: PathBuf,
    /// Treatment of conflicts not closed under inheritance.
    #[arg(long, value_enum, default_value_t = Conflicts::Complete)]
    conflicts: Conflicts,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Θ-classes, one line per class:
    /// `class <id> root <u>-<v> d0 <dist>: u1-v1 u2-v2 ...`, far endpoint second.
    Theta {
        graph: PathBuf,
        #[command(flatten)]
        opts: ThetaOpts,
    },
    /// Median set: sorted vertices on the first line, then
    /// `class <id> <majoritary-far|majoritary-near|egalitarian>` lines.
    Median {
        graph: PathBuf,
        weights: PathBuf,
        #[command(flatten)]
        opts: ThetaOpts,
        /// Also print a diametral pair `pair u v` whose interval is the median set.
        #[arg(long)]
        pair: bool,
    },
    /// Weighted Wiener index `Σ w(u) w(v) d(u,v)` over unordered pairs.
    Wiener {
        graph: PathBuf,
        weights: PathBuf,
        #[command(flatten)]
        opts: ThetaOpts,
    },
    /// Distance matrix: n lines of n space-separated integers.
    Distmatrix {
        graph: PathBuf,
        #[command(flatten)]
        opts: ThetaOpts,
        /// Largest accepted vertex count.
        #[arg(long, default_value_t = DEFAULT_DISTANCE_CAP)]
        cap: usize,
        /// Write the matrix here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Median set of weighted points in the cube complex. One line per
    /// vertex of its skeleton, `anchor | i1:ρ1 i2:ρ2 ...`, then `edges <count>`
    /// and one `a b` line per edge, a and b indexing the vertex lines.
    Gmedian {
        graph: PathBuf,
        terminals: PathBuf,
        #[command(flatten)]
        opts: ThetaOpts,
    },
    /// `Σ w(p) w(p') d1(p, p')` over unordered pairs of points.
    Gwiener {
        graph: PathBuf,
        terminals: PathBuf,
        #[command(flatten)]
        opts: ThetaOpts,
    },
    /// Median configuration of weighted configurations: its events on one line.
    Esmedian {
        #[command(flatten)]
        es: EsOpts,
        configs: PathBuf,
        /// Also print two optimal configurations `a: ...` and `b: ...` whose
        /// interval is the set of all medians.
        #[arg(long)]
        pair: bool,
    },
    /// Domain as a graph; vertex v is listed as a `# v: events` comment.
    Esdomain {
        #[command(flatten)]
        es: EsOpts,
        #[arg(long, default_value_t = DEFAULT_DOMAIN_CAP)]
        cap: usize,
    },
    /// 2-SAT formula whose solutions are the configurations.
    Es2sat {
        #[command(flatten)]
        es: EsOpts,
    },
    /// Event structure whose configurations are the solutions of a 2-SAT
    /// formula without all-positive clauses.
    Sat2es { formula: PathBuf },
    /// Median of all configurations, by enumeration of the domain.
    Escompact {
        #[command(flatten)]
        es: EsOpts,
        #[arg(long, default_value_t = DEFAULT_DOMAIN_CAP)]
        cap: usize,
    },
    /// Generate a median graph (or, for `es`, an event structure).
    ///
    /// Kinds: `path N`, `hypercube D`, `grid R C`, `product N1 N2 ...`
    /// (vertex counts), `tree N`, `random-median DIM SEEDS`,
    /// `es K [P_ORDER P_CONFLICT]`.
    Gen {
        kind: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_GEN_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every triple for a unique median. Prints `median`, or a triple
    /// with its median count and exits with 3.
    Verify {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VERIFY_CAP)]
        cap: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
    Usage(String),
    /// Output already printed; exit with this code.
    Exit(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Res<T> = Result<T, Failure>;

struct Timer {
    on: bool,
    last: Instant,
}

impl Timer {
    fn lap(&mut self, phase: &str) {
        if self.on {
            let now = Instant::now();
            eprintln!(
                "time {phase} {:.3} ms",
                (now - self.last).as_secs_f64() * 1e3
            );
            self.last = now;
        }
    }
}

fn read(path: &Path) -> Res<String> {
    if path.as_os_str() == "-" {
        return std::io::read_to_string(std::io::stdin())
            .map_err(|e| Failure::Io(format!("stdin: {e}")));
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Res<()> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn graph(path: &Path, t: &mut Timer) -> Res<Graph> {
    let g = load_graph(&read(path)?)?;
    t.lap("load");
    Ok(g)
}

fn theta(g: &Graph, opts: ThetaOpts, t: &mut Timer) -> Res<ThetaPartition> {
    if opts.v0 >= g.n() {
        return Err(Failure::Core(Error::Invalid(format!(
            "v0 {} out of range 0..{}",
            opts.v0,
            g.n()
        ))));
    }
    let tp = match opts.algo {
        Algo::Bfs => theta_classes_bfs(g, opts.v0)?,
        Algo::Lexbfs => theta_classes_lexbfs(g, opts.v0)?,
    };
    t.lap("theta");
    Ok(tp)
}

fn es(opts: &EsOpts, t: &mut Timer) -> Res<EventStructure> {
    let es = parse_es(&read(&opts.es)?, opts.conflicts.into())?;
    t.lap("load");
    Ok(es)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_params(kind: &str, params: &[String]) -> Res<Vec<usize>> {
    params
        .iter()
        .map(|p| {
            p.parse()
                .map_err(|_| Failure::Usage(format!("gen {kind}: bad parameter {p:?}")))
        })
        .collect()
}

fn gen(kind: &str, params: &[String], seed: u64, cap: usize) -> Res<String> {
    let arity = |want: usize| -> Res<Vec<usize>> {
        let v = parse_params(kind, params)?;
        if v.len() != want {
            return Err(Failure::Usage(format!(
                "gen {kind} takes {want} parameter(s)"
            )));
        }
        Ok(v)
    };
    let generator = match kind {
        "path" => GeneratorKind::Path(arity(1)?[0]),
        "hypercube" => GeneratorKind::Hypercube(arity(1)?[0]),
        "grid" => {
            let v = arity(2)?;
            GeneratorKind::Grid(v[0], v[1])
        }
        "product" => GeneratorKind::ProductOfPaths(parse_params(kind, params)?),
        "tree" => GeneratorKind::RandomTree {
            n: arity(1)?[0],
            seed,
        },
        "random-median" => {
            let v = arity(2)?;
            GeneratorKind::RandomMedian {
                dim: v[0],
                seeds: v[1],
                seed,
            }
        }
        "es" => {
            let (k, po, pc) = match params {
                [k] => (k, "0.3", "0.3"),
                [k, po, pc] => (k, po.as_str(), pc.as_str()),
                _ => return Err(Failure::Usage("gen es takes K [P_ORDER P_CONFLICT]".into())),
            };
            let k: usize = k
                .parse()
                .map_err(|_| Failure::Usage(format!("gen es: bad event count {k:?}")))?;
            let prob = |s: &str| -> Res<f64> {
                s.parse::<f64>()
                    .ok()
                    .filter(|p| (0.0..=1.0).contains(p))
                    .ok_or_else(|| Failure::Usage(format!("gen es: bad probability {s:?}")))
            };
            if k > cap {
                return Err(Failure::Core(Error::CapExceeded {
                    what: "event count",
                    size: k,
                    cap,
                }));
            }
            return Ok(random_es(k, prob(po)?, prob(pc)?, seed).to_text());
        }
        other => return Err(Failure::Usage(format!("unknown generator {other:?}"))),
    };
    Ok(generate(&generator, cap)?.to_text())
}

fn run(cli: Cli) -> Res<()> {
    let mut t = Timer {
        on: cli.time,
        last: Instant::now(),
    };
    match cli.command {
        Command::Theta { graph: path, opts } => {
            let g = graph(&path, &mut t)?;
            let tp = theta(&g, opts, &mut t)?;
            let mut s = String::new();
            for c in tp.class_order() {
                let (u, v) = tp.sides(tp.root(c));
                let _ = write!(s, "class {c} root {u}-{v} d0 {}:", tp.class_dist(c));
                for &e in tp.class(c) {
                    let (a, b) = tp.sides(e);
                    let _ = write!(s, " {a}-{b}");
                }
                s.push('\n');
            }
            emit(None, &s)?;
        }
        Command::Median {
            graph: path,
            weights,
            opts,
            pair,
        } => {
            let g = graph(&path, &mut t)?;
            let w = load_weights(&read(&weights)?, g.n())?;
            let tp = theta(&g, opts, &mut t)?;
            let hw = halfspace_weights(&g, &w, &tp)?;
            t.lap("weights");
            let med = median_set(&g, &tp, &hw)?;
            t.lap("median");
            let mut s = join(med.vertices()) + "\n";
            for (c, tag) in med.classification().iter().enumerate() {
                let _ = writeln!(s, "class {c} {tag}");
            }
            if pair {
                let (u, v) = diametral_pair(&g, &w, &med)?;
                t.lap("pair");
                let _ = writeln!(s, "pair {u} {v}");
            }
            emit(None, &s)?;
        }
        Command::Wiener {
            graph: path,
            weights,
            opts,
        } => {
            let g = graph(&path, &mut t)?;
            let w = load_weights(&read(&weights)?, g.n())?;
            let tp = theta(&g, opts, &mut t)?;
            let hw = halfspace_weights(&g, &w, &tp)?;
            let wi = wiener_index(&hw);
            t.lap("wiener");
            println!("{wi}");
        }
        Command::Distmatrix {
            graph: path,
            opts,
            cap,
            out,
        } => {
            let g = graph(&path, &mut t)?;
            let tp = theta(&g, opts, &mut t)?;
            let d = distance_matrix(&g, &tp, cap)?;
            t.lap("distances");
            let mut s = String::with_capacity(g.n() * g.n() * 3);
            for u in 0..d.n() {
                s.push_str(&join(d.row(u)));
                s.push('\n');
            }
            emit(out.as_deref(), &s)?;
        }
        Command::Gmedian {
            graph: path,
            terminals,
            opts,
        } => {
            let g = graph(&path, &mut t)?;
            let tp = theta(&g, opts, &mut t)?;
            let ts = parse_terminals(&read(&terminals)?, &g, &tp)?;
            let m = geometric_median(&g, &tp, &ts)?;
            t.lap("gmedian");
            let mut s = String::new();
            for (i, x) in m.vertices.iter().enumerate() {
                let coords = m.anchored_coords(i);
                let _ = write!(s, "{} |", x.anchor);
                for (c, r) in coords {
                    let _ = write!(s, " {c}:{r}");
                }
                s.push('\n');
            }
            let _ = writeln!(s, "edges {}", m.edges.len());
            for (a, b) in &m.edges {
                let _ = writeln!(s, "{a} {b}");
            }
            emit(None, &s)?;
        }
        Command::Gwiener {
            graph: path,
            terminals,
            opts,
        } => {
            let g = graph(&path, &mut t)?;
            let tp = theta(&g, opts, &mut t)?;
            let ts = parse_terminals(&read(&terminals)?, &g, &tp)?;
            let wi = geometric_wiener(&g, &tp, &ts)?;
            t.lap("gwiener");
            println!("{wi}");
        }
        Command::Esmedian {
            es: opts,
            configs,
            pair,
        } => {
            let es = es(&opts, &mut t)?;
            let cs = parse_configurations(&read(&configs)?)?;
            let c = median_configuration(&es, &cs)?;
            let mut s = join(&c) + "\n";
            if pair {
                let (a, b) = diametral_configurations(&es, &cs)?;
                let _ = writeln!(s, "a: {}", join(&a));
                let _ = writeln!(s, "b: {}", join(&b));
            }
            t.lap("median");
            emit(None, &s)?;
        }
        Command::Esdomain { es: opts, cap } => {
            let es = es(&opts, &mut t)?;
            let (d, configs) = domain_of_es(&es, cap)?;
            t.lap("domain");
            let mut s = d.to_text();
            for (v, c) in configs.iter().enumerate() {
                let _ = writeln!(s, "# {v}: {}", join(c));
            }
            emit(None, &s)?;
        }
        Command::Es2sat { es: opts } => {
            let es = es(&opts, &mut t)?;
            emit(None, &es_to_2sat(&es).to_text())?;
        }
        Command::Sat2es { formula } => {
            let f = parse_twosat(&read(&formula)?)?;
            t.lap("load");
            emit(None, &twosat_to_es(&f)?.to_text())?;
        }
        Command::Escompact { es: opts, cap } => {
            let es = es(&opts, &mut t)?;
            let c = compact_median_bruteforce(&es, cap)?;
            t.lap("compact");
            println!("{}", join(&c));
        }
        Command::Gen {
            kind,
            params,
            seed,
            cap,
            out,
        } => {
            let text = gen(&kind, &params, seed, cap)?;
            t.lap("gen");
            emit(out.as_deref(), &text)?;
        }
        Command::Verify { graph: path, cap } => {
            let g = graph(&path, &mut t)?;
            let check = verify_median_graph(&g, cap)?;
            t.lap("verify");
            match check {
                MedianCheck::Median => println!("median"),
                MedianCheck::Witness {
                    triple: (x, y, z),
                    count,
                } => {
                    println!("not median: triple {x} {y} {z} has {count} medians");
                    return Err(Failure::Exit(3));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("medgraph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(msg)) | Err(Failure::Usage(msg)) => {
            eprintln!("medgraph: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Exit(code)) => ExitCode::from(code),
    }
}
