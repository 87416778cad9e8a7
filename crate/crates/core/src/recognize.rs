//! Desk-scale recognizers for median and cube-free median graphs.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, PortedGraph, VertexId};

/// Default vertex bound for the exhaustive triplet check.
pub const DEFAULT_CHECK_BOUND: usize = 1024;

/// True iff every vertex triplet has exactly one median.
///
/// Errors with [`Error::SizeGuard`] above `bound` vertices.
pub fn is_median_graph(g: &PortedGraph, bound: usize) -> Result<bool> {
    Ok(find_median_violation(g, bound)?.is_none())
}

/// Exhaustive triplet check; returns a triplet whose median count is not 1.
///
/// For every base `u` the vertices are renumbered in BFS order so that each
/// distance level is a contiguous bit range. `I(u,v)` is then a bitset built
/// from the predecessors of `v`, and the medians of `(u, v, w)` are exactly the
/// vertices of `I(u,v) ∩ I(u,w)` on level `(d(u,v) + d(u,w) - d(v,w)) / 2`.
/// Three vertices, in the order they were tested.
pub type Triplet = (VertexId, VertexId, VertexId);

pub fn find_median_violation(g: &PortedGraph, bound: usize) -> Result<Option<(Triplet, usize)>> {
    let n = g.vertex_count();
    if n > bound {
        return Err(Error::SizeGuard { n, bound });
    }
    if let Some((a, b)) = odd_edge(g) {
        // Any triplet containing an odd cycle's edge endpoints fails; report
        // the edge with a third vertex as witness.
        let w = (0..n as VertexId).find(|&x| x != a && x != b).unwrap_or(a);
        return Ok(Some(((a, b, w), 0)));
    }
    let dist: Vec<Vec<u32>> = (0..n as VertexId).map(|s| bfs_distances(g, s)).collect();
    let words = n.div_ceil(64);
    let mut order = Vec::with_capacity(n);
    let mut rank = vec![0u32; n];
    let mut level_start = Vec::new();
    let mut sets = vec![0u64; n * words];
    for u in 0..n {
        let du = &dist[u];
        order.clear();
        order.extend(0..n as VertexId);
        order.sort_by_key(|&v| (du[v as usize], v));
        level_start.clear();
        for (r, &v) in order.iter().enumerate() {
            rank[v as usize] = r as u32;
            let d = du[v as usize] as usize;
            while level_start.len() <= d {
                level_start.push(r);
            }
        }
        level_start.push(n);
        for &v in &order {
            let vi = v as usize;
            let r = rank[vi] as usize;
            let (before, rest) = sets.split_at_mut(r * words);
            let row = &mut rest[..words];
            row.fill(0);
            row[r / 64] |= 1 << (r % 64);
            for &p in g.neighbors(v) {
                if du[p as usize] + 1 == du[vi] {
                    let pr = rank[p as usize] as usize;
                    let prow = &before[pr * words..(pr + 1) * words];
                    for (a, b) in row.iter_mut().zip(prow) {
                        *a |= *b;
                    }
                }
            }
        }
        for v in (u + 1)..n {
            let rv = rank[v] as usize;
            for w in (v + 1)..n {
                let rw = rank[w] as usize;
                let k = (du[v] + du[w] - dist[v][w]) / 2;
                let lo = level_start[k as usize];
                let hi = level_start[k as usize + 1];
                let count = count_range(&sets[rv * words..], &sets[rw * words..], lo, hi);
                if count != 1 {
                    return Ok(Some(((u as VertexId, v as VertexId, w as VertexId), count)));
                }
            }
        }
    }
    Ok(None)
}

fn count_range(a: &[u64], b: &[u64], lo: usize, hi: usize) -> usize {
    let mut count = 0;
    let mut bit = lo;
    while bit < hi {
        let word = bit / 64;
        let start = bit % 64;
        let end = (hi - word * 64).min(64);
        let mut mask = if end == 64 { u64::MAX } else { (1u64 << end) - 1 };
        mask &= u64::MAX << start;
        count += (a[word] & b[word] & mask).count_ones() as usize;
        bit = word * 64 + 64;
    }
    count
}

/// An edge closing an odd cycle, if the graph is not bipartite.
fn odd_edge(g: &PortedGraph) -> Option<(VertexId, VertexId)> {
    let d = bfs_distances(g, 0);
    g.edges().find(|&(u, v)| d[u as usize] == d[v as usize])
}

pub fn is_bipartite(g: &PortedGraph) -> bool {
    odd_edge(g).is_none()
}

/// The quadrangle-condition characterization of median graphs: connected,
/// bipartite, every base satisfies the quadrangle condition, and no two
/// vertices at distance 2 share three neighbors (no `K_{2,3}`).
///
/// Independent of [`find_median_violation`]; used to cross-check it.
pub fn satisfies_quadrangle_characterization(g: &PortedGraph) -> bool {
    if !is_bipartite(g) {
        return false;
    }
    let n = g.vertex_count();
    // K_{2,3}: a vertex pair at distance two with three common neighbors.
    for a in 0..n as VertexId {
        let mut common: HashMap<VertexId, u32> = HashMap::new();
        for &m in g.neighbors(a) {
            for &b in g.neighbors(m) {
                if b != a {
                    *common.entry(b).or_default() += 1;
                }
            }
        }
        if common.values().any(|&c| c >= 3) {
            return false;
        }
    }
    for u in 0..n as VertexId {
        let du = bfs_distances(g, u);
        for z in 0..n as VertexId {
            let dz = du[z as usize];
            if dz < 2 {
                continue;
            }
            let lower: Vec<VertexId> = g
                .neighbors(z)
                .iter()
                .copied()
                .filter(|&x| du[x as usize] + 1 == dz)
                .collect();
            for (i, &v) in lower.iter().enumerate() {
                for &w in &lower[i + 1..] {
                    let found = g
                        .neighbors(v)
                        .iter()
                        .filter(|&&x| du[x as usize] + 2 == dz && g.is_adjacent(x, w))
                        .count();
                    if found != 1 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// True iff no vertex spans an isometric 3-cube with three of its neighbors.
///
/// For every vertex `v` and every triple of neighbors `a, b, c` that pairwise
/// close squares with `v`, looks for a common neighbor `x` of the three square
/// corners with `|I(v,x)| = 8`. Precondition: `g` is median.
pub fn is_cube_free(g: &PortedGraph) -> bool {
    find_cube(g).is_none()
}

/// A 3-cube `(v, x)` given by a vertex and its antipode, if one exists.
pub fn find_cube(g: &PortedGraph) -> Option<(VertexId, VertexId)> {
    for v in 0..g.vertex_count() as VertexId {
        // corner[(a, b)] = the fourth vertex of the square v-a-corner-b.
        let mut via: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for &a in g.neighbors(v) {
            for &y in g.neighbors(a) {
                if y != v {
                    via.entry(y).or_default().push(a);
                }
            }
        }
        let mut corner: HashMap<(VertexId, VertexId), VertexId> = HashMap::new();
        let mut square_nbrs: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for (&y, list) in &via {
            for (i, &a) in list.iter().enumerate() {
                for &b in &list[i + 1..] {
                    let key = (a.min(b), a.max(b));
                    if corner.insert(key, y).is_none() {
                        square_nbrs.entry(a).or_default().push(b);
                        square_nbrs.entry(b).or_default().push(a);
                    }
                }
            }
        }
        for (&a, na) in &square_nbrs {
            for &b in na.iter().filter(|&&b| b > a) {
                for &c in square_nbrs[&b].iter().filter(|&&c| c > b) {
                    if !na.contains(&c) {
                        continue;
                    }
                    let ab = corner[&(a, b)];
                    let bc = corner[&(b, c)];
                    let ac = corner[&(a, c)];
                    let antipode = g
                        .neighbors(ab)
                        .iter()
                        .copied()
                        .find(|&x| x != a && x != b && g.is_adjacent(x, bc) && g.is_adjacent(x, ac));
                    if let Some(x) = antipode {
                        if local_interval_size(g, v, x, 3) == 8 {
                            return Some((v, x));
                        }
                    }
                }
            }
        }
    }
    None
}

/// `|I(v,x)|` for `d(v,x) <= radius`, computed by two depth-limited searches.
fn local_interval_size(g: &PortedGraph, v: VertexId, x: VertexId, radius: u32) -> usize {
    let dv = limited_bfs(g, v, radius);
    let dx = limited_bfs(g, x, radius);
    let Some(&d) = dv.get(&x) else { return 0 };
    dv.iter()
        .filter(|(w, &a)| dx.get(w).is_some_and(|&b| a + b == d))
        .count()
}

fn limited_bfs(g: &PortedGraph, s: VertexId, radius: u32) -> HashMap<VertexId, u32> {
    let mut dist = HashMap::from([(s, 0)]);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == radius {
            continue;
        }
        for &w in g.neighbors(u) {
            dist.entry(w).or_insert_with(|| {
                queue.push_back(w);
                du + 1
            });
        }
    }
    dist
}

/// Runs the full class check: median, cube-free and `m <= 2n`.
pub fn check_cube_free_median(g: &PortedGraph, bound: usize) -> Result<()> {
    if let Some((triplet, count)) = find_median_violation(g, bound)? {
        return Err(Error::NotMedian { triplet, count });
    }
    if let Some((v, x)) = find_cube(g) {
        return Err(Error::NotCubeFreeMedian(format!("3-cube spanned by {v} and {x}")));
    }
    if !crate::graph::edge_count_bound_check(g) {
        return Err(Error::NotCubeFreeMedian("more than 2n edges".into()));
    }
    Ok(())
}
