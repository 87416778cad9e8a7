use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cfml::codec::{FileFormat, LabelSet};
use cfml::dist::{dist_decode, EncodeOptions};
use cfml::generators::GenSpec;
use cfml::hierarchy::inspect;
use cfml::recognize::{check_cube_free_median, DEFAULT_CHECK_BOUND};
use cfml::rout::{encode_labels, rout_decode};
use cfml::verify::{
    bench_queries, configure_threads, simulate_route, verify_distance_scheme, verify_routing_report, BenchStats,
};
use cfml::{Error, PortedGraph, VertexId};

/// Distance and routing labels for cube-free median graphs.
#[derive(Parser, Debug)]
#[command(name = "cfml", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Dist,
    Rout,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Binary,
}

impl From<Format> for FileFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => FileFormat::Text,
            Format::Binary => FileFormat::Binary,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph, e.g. `grid:8x8`, `tree:127:1`, `product:star:3,path:9`,
    /// `staircase:20x16:2` or `convex:3:7:grid:24x24`.
    Gen {
        spec: String,
        /// Replaces the seed of the outermost seeded family.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a graph is a cube-free median graph.
    Check {
        graph: PathBuf,
        /// Largest vertex count for the exhaustive median test.
        #[arg(long, default_value_t = DEFAULT_CHECK_BOUND)]
        bound: usize,
    },
    /// Compute labels for every vertex.
    Encode {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "dist")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Trust the input to be cube-free median and skip the exhaustive check.
        #[arg(long)]
        skip_check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance (dist labels) or port (rout labels) from U toward V.
    Query { labels: PathBuf, u: VertexId, v: VertexId },
    /// Walk from S to T by routing labels alone.
    Route {
        graph: PathBuf,
        labels: PathBuf,
        s: VertexId,
        t: VertexId,
    },
    /// Compare decoded answers with BFS.
    Verify { graph: PathBuf, labels: PathBuf },
    /// Time queries on random pairs.
    Bench {
        labels: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the decomposition level by level.
    Inspect {
        graph: PathBuf,
        #[arg(long)]
        skip_check: bool,
    },
}

enum Failure {
    Lib(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 4,
            Failure::Lib(e) if e.is_class_violation() => 3,
            Failure::Lib(Error::Parse { .. } | Error::Format(_) | Error::InvalidVertex(_) | Error::ForeignLabel) => 2,
            Failure::Lib(_) => 1,
        }
    }
}

fn read_graph(path: &Path) -> Result<PortedGraph, Failure> {
    Ok(PortedGraph::parse(&fs::read_to_string(path)?)?)
}

fn read_labels(path: &Path) -> Result<LabelSet, Failure> {
    Ok(LabelSet::load(&fs::read(path)?)?)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn with_seed(spec: GenSpec, new: u64) -> GenSpec {
    match spec {
        GenSpec::Tree { n, .. } => GenSpec::Tree { n, seed: new },
        GenSpec::Staircase { w, h, .. } => GenSpec::Staircase { w, h, seed: new },
        GenSpec::ConvexSub { base, rounds, .. } => GenSpec::ConvexSub {
            base,
            rounds,
            seed: new,
        },
        other => other,
    }
}

fn check_labels_fit(g: &PortedGraph, labels: &LabelSet) -> Result<(), Failure> {
    if labels.len() != g.vertex_count() {
        return Err(Error::Format(format!(
            "{} labels for a graph with {} vertices",
            labels.len(),
            g.vertex_count()
        ))
        .into());
    }
    Ok(())
}

fn print_bench(b: &BenchStats) {
    println!("queries={}", b.queries);
    println!("mean_ns={:.1}", b.mean_ns);
    println!("median_ns={:.1}", b.median_ns);
    println!("p99_ns={:.1}", b.p99_ns);
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { spec, seed, out } => {
            let mut spec: GenSpec = spec.parse()?;
            if let Some(seed) = seed {
                spec = with_seed(spec, seed);
            }
            let g = spec.build()?;
            emit(out.as_deref(), g.to_text(&[spec.to_string()]).as_bytes())
        }
        Command::Check { graph, bound } => {
            let g = read_graph(&graph)?;
            check_cube_free_median(&g, bound)?;
            println!("ok n={} m={}", g.vertex_count(), g.edge_count());
            Ok(())
        }
        Command::Encode {
            graph,
            kind,
            format,
            skip_check,
            out,
        } => {
            let g = read_graph(&graph)?;
            let opts = EncodeOptions {
                skip_check,
                ..Default::default()
            };
            let (dist, rout) = encode_labels(&g, &opts)?;
            let set = match kind {
                Kind::Dist => LabelSet::Dist(dist),
                Kind::Rout => LabelSet::Rout(rout),
            };
            emit(out.as_deref(), &set.save(format.into()))
        }
        Command::Query { labels, u, v } => {
            println!("{}", read_labels(&labels)?.query(u, v)?);
            Ok(())
        }
        Command::Route { graph, labels, s, t } => {
            let g = read_graph(&graph)?;
            let labels = read_labels(&labels)?;
            check_labels_fit(&g, &labels)?;
            let LabelSet::Rout(labels) = labels else {
                return Err(Error::Format("route needs routing labels".into()).into());
            };
            let walk = simulate_route(&g, &labels, s, t)?;
            let join = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            println!("source={s}");
            println!("target={t}");
            println!("hops={}", walk.hops());
            println!("path={}", join(&walk.visited));
            println!("ports={}", join(&walk.ports));
            Ok(())
        }
        Command::Verify { graph, labels } => {
            let g = read_graph(&graph)?;
            let labels = read_labels(&labels)?;
            check_labels_fit(&g, &labels)?;
            let name = graph.display().to_string();
            let report = match &labels {
                LabelSet::Dist(l) => verify_distance_scheme(&g, l, &name),
                LabelSet::Rout(l) => verify_routing_report(&g, l, &name),
            };
            print!("{}", report.to_kv());
            if report.ok() {
                Ok(())
            } else {
                Err(Failure::Verification(report.to_string()))
            }
        }
        Command::Bench { labels, pairs, seed } => {
            let labels = read_labels(&labels)?;
            if labels.is_empty() {
                return Err(Error::Format("empty label file".into()).into());
            }
            let stats = match &labels {
                LabelSet::Dist(l) => bench_queries(l, pairs, seed, |a, b| dist_decode(a, b).ok()),
                LabelSet::Rout(l) => bench_queries(l, pairs, seed, |a, b| rout_decode(a, b).ok()),
            };
            print_bench(&stats);
            Ok(())
        }
        Command::Inspect { graph, skip_check } => {
            let g = read_graph(&graph)?;
            if !skip_check {
                check_cube_free_median(&g, DEFAULT_CHECK_BOUND)?;
            }
            print!("{}", inspect(&g)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Verification(report) => eprintln!("{report}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
