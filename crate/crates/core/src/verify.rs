//! Brute-force oracles, exhaustive checks of both schemes, the label-only
//! routing simulator and the size and latency measurements.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::hint::black_box;
use std::time::Instant;

use rayon::prelude::*;

use crate::codec::{label_bits, LabelCodec};
use crate::dist::{classify_gates, dist_decode, DistLabel, PairClass, Side};
use crate::error::{Error, Result};
use crate::generators::XorShift64Star;
use crate::graph::{bfs_distances, PortId, PortedGraph, VertexId, UNREACHED};
use crate::hierarchy::{decompose, Attachment, FiberKind, Level};
use crate::rout::{rout_decode, RoutLabel};

/// Pairs above which verification samples instead of checking all pairs.
pub const EXHAUSTIVE_LIMIT: usize = 2048;
/// Sampled pair count above [`EXHAUSTIVE_LIMIT`].
pub const SAMPLED_PAIRS: usize = 1_000_000;

/// Caps the global thread pool at `CFML_THREADS` when set. Later calls and
/// calls after the pool started are ignored.
pub fn configure_threads() {
    if let Some(k) = std::env::var("CFML_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
}

/// All-pairs hop distances, one BFS per source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn get(&self, u: VertexId, v: VertexId) -> u32 {
        self.d[u as usize * self.n + v as usize]
    }

    pub fn row(&self, u: VertexId) -> &[u32] {
        &self.d[u as usize * self.n..(u as usize + 1) * self.n]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

pub fn oracle_all_pairs(g: &PortedGraph) -> DistanceMatrix {
    let n = g.vertex_count();
    let rows: Vec<Vec<u32>> = (0..n as VertexId)
        .into_par_iter()
        .map(|s| bfs_distances(g, s))
        .collect();
    DistanceMatrix { n, d: rows.concat() }
}

/// One wrong answer of a decoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub u: VertexId,
    pub v: VertexId,
    pub expected: u32,
    /// `None` when decoding failed.
    pub got: Option<u32>,
}

/// Outcome of a verification run.
#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub graph: String,
    pub n: usize,
    pub pairs: u64,
    pub exhaustive: bool,
    /// Total number of wrong answers; `mismatches` keeps the first few.
    pub mismatch_count: u64,
    pub mismatches: Vec<Mismatch>,
    pub routing_pairs: u64,
    pub routing_failures: u64,
    pub invariants: Vec<(String, bool)>,
    pub max_bits: usize,
    pub avg_bits: f64,
    pub depth: usize,
}

const KEEP_MISMATCHES: usize = 20;

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatch_count == 0 && self.routing_failures == 0 && self.invariants.iter().all(|(_, ok)| *ok)
    }

    /// Line-oriented `key=value` form.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph={}", self.graph);
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "pairs={}", self.pairs);
        let _ = writeln!(out, "exhaustive={}", self.exhaustive);
        let _ = writeln!(out, "mismatches={}", self.mismatch_count);
        let _ = writeln!(out, "routing_pairs={}", self.routing_pairs);
        let _ = writeln!(out, "routing_failures={}", self.routing_failures);
        for (name, ok) in &self.invariants {
            let _ = writeln!(out, "invariant.{name}={}", if *ok { "pass" } else { "fail" });
        }
        let _ = writeln!(out, "max_bits={}", self.max_bits);
        let _ = writeln!(out, "avg_bits={:.1}", self.avg_bits);
        let _ = writeln!(out, "depth={}", self.depth);
        let _ = writeln!(out, "status={}", if self.ok() { "ok" } else { "fail" });
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verification of {} (n = {})", self.graph, self.n)?;
        let mode = if self.exhaustive { "all pairs" } else { "sampled" };
        writeln!(
            f,
            "  distance: {} pairs ({mode}), {} wrong",
            self.pairs, self.mismatch_count
        )?;
        for m in &self.mismatches {
            match m.got {
                Some(d) => writeln!(f, "    d({}, {}) = {} but decoded {d}", m.u, m.v, m.expected)?,
                None => writeln!(f, "    d({}, {}) = {} but decoding failed", m.u, m.v, m.expected)?,
            }
        }
        if self.routing_pairs > 0 {
            writeln!(
                f,
                "  routing: {} pairs, {} failures",
                self.routing_pairs, self.routing_failures
            )?;
        }
        for (name, ok) in &self.invariants {
            writeln!(f, "  {name}: {}", if *ok { "pass" } else { "FAIL" })?;
        }
        writeln!(
            f,
            "  label bits: max {} avg {:.1}; levels {}",
            self.max_bits, self.avg_bits, self.depth
        )?;
        write!(f, "  result: {}", if self.ok() { "ok" } else { "FAILED" })
    }
}

/// Shape measurements common to both label kinds.
pub trait LabelShape {
    fn level_count(&self) -> usize;
    /// Largest number of entries of any tree label embedded in the label.
    fn max_tree_entries(&self) -> usize;
}

impl LabelShape for DistLabel {
    fn level_count(&self) -> usize {
        self.levels.len()
    }

    fn max_tree_entries(&self) -> usize {
        let slots = self.levels.iter().flat_map(|l| l.slots.iter().flatten());
        slots.map(|s| s.tree.entries.len()).max().unwrap_or(0)
    }
}

impl LabelShape for RoutLabel {
    fn level_count(&self) -> usize {
        self.levels.len()
    }

    fn max_tree_entries(&self) -> usize {
        let slots = self.levels.iter().flat_map(|l| l.slots.iter().flatten());
        slots
            .map(|s| s.dist_tree.entries.len().max(s.rout_tree.entries.len()))
            .max()
            .unwrap_or(0)
    }
}

/// `⌈log₂ n⌉` (0 for `n ≤ 1`).
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Size statistics over a label set.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelStats {
    pub max_bits: usize,
    pub avg_bits: f64,
    /// `histogram[k]` = number of labels with `k` levels.
    pub level_histogram: Vec<usize>,
    pub max_levels: usize,
    pub max_tree_entries: usize,
}

impl LabelStats {
    /// Levels at most `⌈log₂ n⌉` and tree labels at most `⌈log₂ n⌉ + 1` entries.
    pub fn within_structural_bounds(&self, n: usize) -> bool {
        self.max_levels <= ceil_log2(n) && self.max_tree_entries <= ceil_log2(n) + 1
    }
}

pub fn label_stats<L: LabelCodec + LabelShape + Sync>(labels: &[L]) -> LabelStats {
    let bits: Vec<usize> = labels.par_iter().map(label_bits).collect();
    let max_levels = labels.iter().map(L::level_count).max().unwrap_or(0);
    let mut level_histogram = vec![0; max_levels + 1];
    for l in labels {
        level_histogram[l.level_count()] += 1;
    }
    LabelStats {
        max_bits: bits.iter().copied().max().unwrap_or(0),
        avg_bits: bits.iter().sum::<usize>() as f64 / labels.len().max(1) as f64,
        level_histogram,
        max_levels,
        max_tree_entries: labels.iter().map(L::max_tree_entries).max().unwrap_or(0),
    }
}

/// Sources whose full BFS rows are checked: all vertices up to the
/// exhaustive limit, else enough random ones for [`SAMPLED_PAIRS`] pairs.
fn check_sources(n: usize, seed: u64) -> (Vec<VertexId>, bool) {
    if n <= EXHAUSTIVE_LIMIT {
        return ((0..n as VertexId).collect(), true);
    }
    let k = SAMPLED_PAIRS.div_ceil(n).min(n);
    let mut rng = XorShift64Star::new(seed);
    let mut picked = HashSet::new();
    while picked.len() < k {
        picked.insert(rng.below(n as u64) as VertexId);
    }
    let mut v: Vec<_> = picked.into_iter().collect();
    v.sort_unstable();
    (v, false)
}

/// Compares every decoded distance with BFS (sampled above
/// [`EXHAUSTIVE_LIMIT`] vertices).
pub fn verify_distance_scheme(g: &PortedGraph, labels: &[DistLabel], graph: &str) -> VerifyReport {
    let n = g.vertex_count();
    let (sources, exhaustive) = check_sources(n, 0x5eed);
    let wrong: Vec<(u64, Vec<Mismatch>)> = sources
        .par_iter()
        .map(|&u| {
            let d = bfs_distances(g, u);
            let mut count = 0;
            let mut kept = Vec::new();
            for v in 0..n as VertexId {
                let got = dist_decode(&labels[u as usize], &labels[v as usize]).ok();
                if got != Some(d[v as usize]) {
                    count += 1;
                    if kept.len() < KEEP_MISMATCHES {
                        kept.push(Mismatch {
                            u,
                            v,
                            expected: d[v as usize],
                            got,
                        });
                    }
                }
            }
            (count, kept)
        })
        .collect();
    let stats = label_stats(labels);
    let mut report = VerifyReport {
        graph: graph.to_string(),
        n,
        pairs: (sources.len() * n) as u64,
        exhaustive,
        invariants: vec![("structural_bounds".into(), stats.within_structural_bounds(n))],
        max_bits: stats.max_bits,
        avg_bits: stats.avg_bits,
        depth: stats.max_levels,
        ..Default::default()
    };
    for (count, kept) in wrong {
        report.mismatch_count += count;
        let room = KEEP_MISMATCHES - report.mismatches.len();
        report.mismatches.extend(kept.into_iter().take(room));
    }
    report
}

/// A walk produced by repeatedly applying the routing decoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTrace {
    pub source: VertexId,
    pub target: VertexId,
    /// Visited vertices, starting with `source`.
    pub visited: Vec<VertexId>,
    pub ports: Vec<PortId>,
}

impl WalkTrace {
    pub fn hops(&self) -> usize {
        self.ports.len()
    }

    pub fn reached(&self) -> bool {
        self.visited.last() == Some(&self.target)
    }
}

/// Follows decoded ports from `s` until the decoder answers 0. Fails on an
/// invalid port or after `n` hops.
pub fn simulate_route(g: &PortedGraph, labels: &[RoutLabel], s: VertexId, t: VertexId) -> Result<WalkTrace> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let mut trace = WalkTrace {
        source: s,
        target: t,
        visited: vec![s],
        ports: Vec::new(),
    };
    let mut at = s;
    loop {
        let port = rout_decode(&labels[at as usize], &labels[t as usize])?;
        if port == 0 {
            return Ok(trace);
        }
        let next = g
            .neighbor_at(at, port)
            .ok_or_else(|| Error::Format(format!("decoder returned port {port} at vertex {at}")))?;
        trace.ports.push(port);
        trace.visited.push(next);
        at = next;
        if trace.ports.len() > g.vertex_count() {
            return Err(Error::Format(format!("walk from {s} to {t} does not terminate")));
        }
    }
}

/// Checks routing toward every target: each vertex's decoded hop must
/// reduce the BFS distance by exactly 1 and the target must answer 0.
/// Walks follow these hops deterministically, so this covers every walk.
/// Returns `(pairs, failures)`.
pub fn verify_routing_scheme(g: &PortedGraph, labels: &[RoutLabel]) -> (u64, u64) {
    let n = g.vertex_count();
    let (targets, _) = check_sources(n, 0x707e);
    let failures: u64 = targets
        .par_iter()
        .map(|&t| {
            let dt = bfs_distances(g, t);
            let mut bad_hop = vec![false; n];
            for s in 0..n as VertexId {
                let ok = match rout_decode(&labels[s as usize], &labels[t as usize]) {
                    Ok(0) => s == t,
                    Ok(p) => g
                        .neighbor_at(s, p)
                        .is_some_and(|w| dt[w as usize] + 1 == dt[s as usize]),
                    Err(_) => false,
                };
                bad_hop[s as usize] = !ok;
            }
            // A walk fails if it would pass through any bad hop; hops only
            // lead closer, so propagate by increasing distance.
            let mut order: Vec<VertexId> = (0..n as VertexId).collect();
            order.sort_unstable_by_key(|&v| dt[v as usize]);
            let mut walk_bad = vec![false; n];
            for &s in &order {
                walk_bad[s as usize] = bad_hop[s as usize]
                    || (s != t && {
                        let p = rout_decode(&labels[s as usize], &labels[t as usize]).unwrap_or(0);
                        g.neighbor_at(s, p).is_some_and(|w| walk_bad[w as usize])
                    });
            }
            walk_bad.iter().filter(|&&b| b).count() as u64
        })
        .sum();
    ((targets.len() * n) as u64, failures)
}

/// Report for routing labels alone: hop checks plus label sizes.
pub fn verify_routing_report(g: &PortedGraph, labels: &[RoutLabel], graph: &str) -> VerifyReport {
    let n = g.vertex_count();
    let (routing_pairs, routing_failures) = verify_routing_scheme(g, labels);
    let stats = label_stats(labels);
    VerifyReport {
        graph: graph.to_string(),
        n,
        exhaustive: n <= EXHAUSTIVE_LIMIT,
        routing_pairs,
        routing_failures,
        invariants: vec![("structural_bounds".into(), stats.within_structural_bounds(n))],
        max_bits: stats.max_bits,
        avg_bits: stats.avg_bits,
        depth: stats.max_levels,
        ..Default::default()
    }
}

/// Query latency over a fixed random pair set, in nanoseconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchStats {
    pub queries: u64,
    pub mean_ns: f64,
    pub median_ns: f64,
    pub p99_ns: f64,
}

/// Times `decode` on `pair_count` random pairs on the calling thread. The
/// pair set is replayed five times in batches of 64 queries; each batch
/// gives one per-query sample, and a first untimed pass warms caches.
pub fn bench_queries<L, T>(labels: &[L], pair_count: usize, seed: u64, decode: impl Fn(&L, &L) -> T) -> BenchStats {
    const BATCH: usize = 64;
    const ROUNDS: usize = 5;
    let n = labels.len() as u64;
    let mut rng = XorShift64Star::new(seed);
    let pairs: Vec<(usize, usize)> = (0..pair_count.max(BATCH))
        .map(|_| (rng.below(n) as usize, rng.below(n) as usize))
        .collect();
    for &(u, v) in &pairs {
        black_box(decode(&labels[u], &labels[v]));
    }
    let mut samples = Vec::new();
    for _ in 0..ROUNDS {
        for chunk in pairs.chunks(BATCH) {
            let start = Instant::now();
            for &(u, v) in chunk {
                black_box(decode(black_box(&labels[u]), black_box(&labels[v])));
            }
            samples.push(start.elapsed().as_nanos() as f64 / chunk.len() as f64);
        }
    }
    samples.sort_by(f64::total_cmp);
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let at = |q: usize| samples[(samples.len() * q / 100).min(samples.len() - 1)];
    BenchStats {
        queries: (samples.len() * BATCH) as u64,
        mean_ns: mean,
        median_ns: at(50),
        p99_ns: at(99),
    }
}

/// Evaluation and failure counts of one structural check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckTally {
    pub name: String,
    pub evaluated: u64,
    pub failed: u64,
}

/// Results of the structural checks run on every decomposition level.
#[derive(Clone, Debug, Default)]
pub struct StructureReport {
    pub checks: Vec<CheckTally>,
}

impl StructureReport {
    fn check(&mut self, name: &str, ok: bool) {
        let i = match self.checks.iter().position(|t| t.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckTally {
                    name: name.to_string(),
                    ..Default::default()
                });
                self.checks.len() - 1
            }
        };
        self.checks[i].evaluated += 1;
        self.checks[i].failed += u64::from(!ok);
    }

    pub fn tally(&self, name: &str) -> Option<&CheckTally> {
        self.checks.iter().find(|t| t.name == name)
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|t| t.failed == 0)
    }
}

pub const FIBER_HALVING: &str = "fiber_halving";
pub const BOUNDARY_ISOMETRIC_TREE: &str = "boundary_isometric_tree";
pub const GATED_BRANCHES: &str = "gated_branches";
pub const QUASIGATED: &str = "quasigated";
pub const IMPRINTS_MATCH: &str = "imprints_match_oracle";
pub const GATES_MATCH: &str = "gates_match_oracle";
pub const TWINS: &str = "twins_are_cross_edges";
pub const CONE_PANELS: &str = "cone_has_two_panels";
pub const PANELS_APART: &str = "panels_not_adjacent";
pub const EDGE_BOUND: &str = "edge_bound";
pub const CENTROID_MINIMAL: &str = "centroid_minimizes_distance_sum";
pub const TRICHOTOMY: &str = "exactly_one_branch";
pub const SEPARATION_EQUIVALENCE: &str = "square_test_iff_centroid_between";
pub const CLASS_CONSISTENT: &str = "classification_matches_structure";

/// Brute-force structural checks on every level of the decomposition of
/// `g`, with distances taken from BFS in `g` itself.
pub fn check_structure(g: &PortedGraph) -> Result<StructureReport> {
    let mut report = StructureReport::default();
    report.check(EDGE_BOUND, crate::graph::edge_count_bound_check(g));
    let oracle = oracle_all_pairs(g);
    decompose(g, |level| {
        check_level(level, &oracle, &mut report);
        Ok(())
    })?;
    Ok(report)
}

fn check_level(level: &Level, oracle: &DistanceMatrix, report: &mut StructureReport) {
    let scope = &level.scope;
    let s = scope.len();
    let id = |v: u32| scope.id(v);
    let d = |a: u32, b: u32| oracle.get(id(a), id(b));
    let star = &level.star;
    let part = &level.partition;

    // The centroid minimizes the distance sum; ties go to the smallest id.
    let sums: Vec<(u64, VertexId)> = (0..s as u32)
        .map(|u| ((0..s as u32).map(|v| d(u, v) as u64).sum(), id(u)))
        .collect();
    report.check(CENTROID_MINIMAL, sums.iter().min() == Some(&sums[star.center as usize]));

    for (x, members) in part.members.iter().enumerate() {
        let x = x as u32;
        report.check(FIBER_HALVING, 2 * members.len() <= s);
        let kind = star.kind(x);
        if kind == FiberKind::Center {
            continue;
        }
        let root = star.members[x as usize];
        let boundary = &part.total_boundary[x as usize];
        let tree = level.boundary_trees[x as usize]
            .as_ref()
            .expect("non-center fibers have trees");
        // Isometric: tree distance equals graph distance.
        for (i, &a) in boundary.iter().enumerate() {
            let td = tree.bfs(i as u32);
            report.check(
                BOUNDARY_ISOMETRIC_TREE,
                boundary.iter().enumerate().all(|(j, &b)| td[j].0 == d(a, b)),
            );
        }
        // Gated branches: the tree path to the root is the interval to it.
        match level.tree_pos.get(root as usize).copied() {
            Some(rp) if rp != u32::MAX => {
                let from_root = tree.bfs(rp);
                for (i, &v) in boundary.iter().enumerate() {
                    let mut path = HashSet::new();
                    let mut at = i as u32;
                    loop {
                        path.insert(boundary[at as usize]);
                        if at == rp {
                            break;
                        }
                        at = from_root[at as usize].1;
                    }
                    let interval: HashSet<u32> =
                        (0..s as u32).filter(|&z| d(v, z) + d(z, root) == d(v, root)).collect();
                    report.check(GATED_BRANCHES, interval == path);
                }
            }
            _ => report.check(GATED_BRANCHES, false),
        }
        // Imprints by definition: w on the boundary whose interval to u
        // meets the boundary only in w.
        for &u in members {
            let imprints: Vec<u32> = boundary
                .iter()
                .copied()
                .filter(|&w| !boundary.iter().any(|&b| b != w && d(u, b) + d(b, w) == d(u, w)))
                .collect();
            report.check(QUASIGATED, (1..=2).contains(&imprints.len()));
            if let Attachment::Panel(pair) = level.attach[u as usize] {
                let mut got: Vec<u32> = pair.iter().map(|i| i.vertex).collect();
                got.sort_unstable();
                got.dedup();
                let mut want = imprints.clone();
                want.sort_unstable();
                let dists_ok = pair.iter().all(|i| i.dist == d(u, i.vertex));
                report.check(IMPRINTS_MATCH, got == want && dists_ok);
            }
        }
        match kind {
            FiberKind::Cone => {
                let neighbors: HashSet<u32> = part
                    .rel_boundary
                    .keys()
                    .filter(|(a, _)| *a == x)
                    .map(|&(_, y)| y)
                    .collect();
                let panels = star.cone_panels(x);
                let expected: HashSet<u32> = panels.into_iter().collect();
                report.check(
                    CONE_PANELS,
                    neighbors == expected && panels.iter().all(|&p| star.kind(p) == FiberKind::Panel),
                );
                for &u in members {
                    let Attachment::Cone(gates) = level.attach[u as usize] else {
                        report.check(GATES_MATCH, false);
                        continue;
                    };
                    for (gate, &panel) in gates.iter().zip(&panels) {
                        // The gate is the unique nearest panel vertex and
                        // lies between u and every panel vertex.
                        let pm = &part.members[panel as usize];
                        let best = pm.iter().map(|&p| d(u, p)).min().unwrap_or(UNREACHED);
                        let nearest: Vec<u32> = pm.iter().copied().filter(|&p| d(u, p) == best).collect();
                        let gated = pm.iter().all(|&p| d(u, gate.gate) + d(gate.gate, p) == d(u, p));
                        report.check(
                            GATES_MATCH,
                            nearest == [gate.gate] && gate.dist == best && gated && gate.panel == panel,
                        );
                        let twin_ok = part.neighbor_across(gate.gate, x) == Some(gate.twin)
                            && part.neighbor_across(gate.twin, panel) == Some(gate.gate)
                            && scope
                                .neighbors(gate.gate)
                                .iter()
                                .filter(|&&w| part.fib[w as usize] == x)
                                .count()
                                == 1;
                        report.check(TWINS, twin_ok);
                    }
                }
            }
            FiberKind::Panel => {
                let touches_panel = part
                    .rel_boundary
                    .keys()
                    .any(|&(a, y)| a == x && star.kind(y) == FiberKind::Panel);
                report.check(PANELS_APART, !touches_panel);
            }
            FiberKind::Center => {}
        }
    }

    // Square-intersection test for every pair of fibers: I(x,c) ∩ I(y,c) = {c}.
    let c = star.center;
    let k = star.members.len();
    let intervals: Vec<HashSet<u32>> = star
        .members
        .iter()
        .map(|&x| (0..s as u32).filter(|&z| d(x, z) + d(z, c) == d(x, c)).collect())
        .collect();
    let mut square_test = HashMap::new();
    for a in 0..k {
        for b in 0..k {
            let meet: Vec<_> = intervals[a].intersection(&intervals[b]).collect();
            square_test.insert((a as u32, b as u32), meet == [&c]);
        }
    }
    // The three branch conditions, each from structure alone: a panel next
    // to a cone, two cones sharing a panel, or the square test.
    let borders = |panel: u32, cone: u32| {
        star.kind(panel) == FiberKind::Panel
            && star.kind(cone) == FiberKind::Cone
            && star.cone_panels(cone).contains(&panel)
    };
    let share_panel = |a: u32, b: u32| {
        star.kind(a) == FiberKind::Cone
            && star.kind(b) == FiberKind::Cone
            && star.cone_panels(a).iter().any(|p| star.cone_panels(b).contains(p))
    };
    let fibers = k as u32;
    for fu in 0..fibers {
        for fv in (0..fibers).filter(|&fv| fv != fu) {
            let separated = square_test[&(fu, fv)];
            let one = borders(fu, fv) || borders(fv, fu);
            let two = share_panel(fu, fv);
            report.check(TRICHOTOMY, [separated, one, two].iter().filter(|&&b| b).count() == 1);
            let expected = if one {
                Some(if star.kind(fu) == FiberKind::Panel {
                    Side::U
                } else {
                    Side::V
                })
            } else {
                None
            };
            let class = classify_gates(star.labels[fu as usize], star.labels[fv as usize]);
            let consistent = match class {
                PairClass::Separated => separated && !one && !two,
                PairClass::OneNeighboring(side) => expected == Some(side),
                PairClass::TwoNeighboring => two,
                PairClass::Roommates => false,
            };
            report.check(CLASS_CONSISTENT, consistent);
        }
    }
    // Equivalence checked vertex by vertex: the square test on the
    // fibers holds exactly when the centroid lies between the vertices.
    for u in 0..s as u32 {
        for v in 0..s as u32 {
            let (fu, fv) = (part.fib[u as usize], part.fib[v as usize]);
            if fu != fv {
                let between = d(u, c) + d(c, v) == d(u, v);
                report.check(SEPARATION_EQUIVALENCE, square_test[&(fu, fv)] == between);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{dist_encode, EncodeOptions};
    use crate::generators::{gen_grid, gen_tree_product, path_tree, star_tree};
    use crate::rout::rout_encode;

    /// Independent oracle: Floyd–Warshall on the adjacency matrix.
    fn floyd_warshall(g: &PortedGraph) -> Vec<Vec<u32>> {
        let n = g.vertex_count();
        let inf = u32::MAX / 2;
        let mut d = vec![vec![inf; n]; n];
        for (u, row) in d.iter_mut().enumerate() {
            row[u] = 0;
            for &v in g.neighbors(u as VertexId) {
                row[v as usize] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        d
    }

    #[test]
    fn oracle_matches_floyd_warshall() {
        for g in [
            path_tree(5),
            gen_grid(5, 6),
            gen_tree_product(&star_tree(3), &path_tree(4)),
        ] {
            let m = oracle_all_pairs(&g);
            let fw = floyd_warshall(&g);
            for (u, row) in fw.iter().enumerate() {
                assert_eq!(m.row(u as VertexId), &row[..]);
            }
        }
        assert_eq!(oracle_all_pairs(&path_tree(5)).row(0), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn verify_catches_corruption() {
        let g = gen_grid(3, 3);
        let mut labels = dist_encode(&g, &EncodeOptions::default()).unwrap();
        let report = verify_distance_scheme(&g, &labels, "grid 3x3");
        assert!(report.ok(), "{report}");
        assert!(report.to_kv().contains("mismatches=0\n"));
        labels[0].levels[0].dist += 1;
        let report = verify_distance_scheme(&g, &labels, "grid 3x3");
        assert!(report.mismatch_count >= 1);
        assert!(!report.ok());
    }

    #[test]
    fn walks() {
        let g = path_tree(5);
        let labels = rout_encode(&g, &EncodeOptions::default()).unwrap();
        let w = simulate_route(&g, &labels, 0, 4).unwrap();
        assert_eq!(w.visited, vec![0, 1, 2, 3, 4]);
        let still = simulate_route(&g, &labels, 2, 2).unwrap();
        assert_eq!(still.hops(), 0);
        assert!(still.reached());
        let g = gen_tree_product(&star_tree(3), &path_tree(3));
        let labels = rout_encode(&g, &EncodeOptions::default()).unwrap();
        assert_eq!(verify_routing_scheme(&g, &labels), (144, 0));
    }

    #[test]
    fn routing_failures_are_counted() {
        let g = gen_grid(3, 3);
        let mut labels = rout_encode(&g, &EncodeOptions::default()).unwrap();
        labels[0].levels[0].port_to_centroid = 0;
        labels[0].levels[0].slots.as_mut().unwrap()[0].port = 0;
        labels[0].levels[0].slots.as_mut().unwrap()[1].port = 0;
        let (_, failures) = verify_routing_scheme(&g, &labels);
        assert!(failures > 0);
    }

    #[test]
    fn stats_and_bounds() {
        assert_eq!((ceil_log2(1), ceil_log2(2), ceil_log2(9), ceil_log2(64)), (0, 1, 4, 6));
        let single = dist_encode(&path_tree(1), &EncodeOptions::default()).unwrap();
        let st = label_stats(&single);
        assert_eq!(st.max_levels, 0);
        assert!(st.max_bits <= 48);
        let g = gen_grid(8, 8);
        let st = label_stats(&dist_encode(&g, &EncodeOptions::default()).unwrap());
        assert!(st.within_structural_bounds(64), "{st:?}");
        assert_eq!(st.level_histogram.iter().sum::<usize>(), 64);
    }

    #[test]
    fn structure_on_small_graphs() {
        for g in [
            path_tree(9),
            gen_grid(3, 3),
            gen_grid(6, 5),
            gen_tree_product(&star_tree(3), &path_tree(3)),
        ] {
            let report = check_structure(&g).unwrap();
            assert!(report.ok(), "{:?}", report.checks);
            assert!(report.tally(TRICHOTOMY).unwrap().evaluated > 0);
        }
        // Grids have cones at the top level, so every check runs.
        let report = check_structure(&gen_grid(5, 5)).unwrap();
        assert_eq!(report.checks.len(), 14);
        assert!(report.checks.iter().all(|t| t.evaluated > 0), "{:?}", report.checks);
    }

    #[test]
    fn bench_reports_numbers() {
        let labels = dist_encode(&gen_grid(4, 4), &EncodeOptions::default()).unwrap();
        let b = bench_queries(&labels, 100, 1, |a, b| dist_decode(a, b).unwrap());
        assert!(b.mean_ns > 0.0 && b.p99_ns >= 0.0 && b.queries > 0);
    }
}
