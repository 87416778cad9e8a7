//! Ported graphs and the metric primitives every other module runs on.
//!
//! Vertices are dense integers `0..n`. The neighbors of a vertex are kept in
//! insertion order and the k-th neighbor is reached through port `k` (1-based);
//! port 0 is never assigned and means "stay".

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type PortId = u32;

/// Hop distances from one source, indexed by vertex.
pub type DistanceVector = Vec<u32>;

pub const UNREACHED: u32 = u32::MAX;

/// An undirected, simple, connected graph with port numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortedGraph {
    offsets: Vec<u32>,
    targets: Vec<VertexId>,
}

/// Sizes of the two halfspaces cut by an edge `uv`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfspacePair {
    pub edge: (VertexId, VertexId),
    /// `|W(u,v)|`: vertices strictly closer to `u`.
    pub size_uv: usize,
    /// `|W(v,u)|`: vertices strictly closer to `v`.
    pub size_vu: usize,
}

impl PortedGraph {
    /// Builds a graph from an edge list, assigning ports in edge order
    /// (see [`assign_ports`]).
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        assign_ports(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    /// Neighbors of `v`; the neighbor at index `k` sits behind port `k + 1`.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    /// Neighbors of `v` paired with their port numbers.
    pub fn ports(&self, v: VertexId) -> impl Iterator<Item = (VertexId, PortId)> + '_ {
        self.neighbors(v).iter().enumerate().map(|(i, &w)| (w, i as PortId + 1))
    }

    /// Port of `u` leading to its neighbor `v`.
    pub fn port(&self, u: VertexId, v: VertexId) -> Option<PortId> {
        self.neighbors(u).iter().position(|&w| w == v).map(|i| i as PortId + 1)
    }

    /// Neighbor of `u` behind `port`, if the port exists.
    pub fn neighbor_at(&self, u: VertexId, port: PortId) -> Option<VertexId> {
        if port == 0 {
            return None;
        }
        self.neighbors(u).get(port as usize - 1).copied()
    }

    pub fn is_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).contains(&v)
    }

    /// Edges `(u, v)` with `u < v`, in the order of `u`'s adjacency.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count() as VertexId)
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    /// Parses the graph text format: a header line `n m`, then `m` lines
    /// `u v`. Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m as usize);
        for (line, l) in lines {
            let (u, v) = parse_pair(line, l)?;
            edges.push((u, v));
        }
        if edges.len() != m as usize {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Self::from_edges(n as usize, &edges)
    }

    /// Serializes to the graph text format. `header` lines are written as
    /// comments first.
    pub fn to_text(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            let _ = writeln!(out, "# {h}");
        }
        let _ = writeln!(out, "{} {}", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges_in_port_order() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// An edge order that reproduces every vertex's port numbering when fed
    /// back through [`assign_ports`].
    pub fn edges_in_port_order(&self) -> Vec<(VertexId, VertexId)> {
        // Edge uv becomes ready once both endpoints have consumed all earlier
        // ports; greedily emit ready edges.
        let n = self.vertex_count();
        let mut next = vec![0usize; n];
        let mut out = Vec::with_capacity(self.edge_count());
        let mut queue: VecDeque<VertexId> = (0..n as VertexId).collect();
        let mut queued = vec![true; n];
        while let Some(u) = queue.pop_front() {
            queued[u as usize] = false;
            while let Some(&v) = self.neighbors(u).get(next[u as usize]) {
                let vi = v as usize;
                if self.neighbors(v).get(next[vi]) != Some(&u) {
                    break;
                }
                out.push((u, v));
                next[u as usize] += 1;
                next[vi] += 1;
                if !queued[vi] {
                    queued[vi] = true;
                    queue.push_back(v);
                }
            }
        }
        debug_assert_eq!(out.len(), self.edge_count(), "port order is not realizable");
        out
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(u32, u32)> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<u32> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad integer {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

/// Builds a [`PortedGraph`] whose ports follow the edge order: the k-th edge
/// mentioning `u` gets port `k` at `u`.
pub fn assign_ports(n: usize, edges: &[(VertexId, VertexId)]) -> Result<PortedGraph> {
    if n == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    if n > u32::MAX as usize / 2 {
        return Err(Error::InvalidGraph("too many vertices".into()));
    }
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut seen = HashSet::with_capacity(edges.len());
    for &(u, v) in edges {
        if u as usize >= n || v as usize >= n {
            return Err(Error::InvalidVertex(u.max(v)));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::InvalidGraph(format!("duplicate edge {u} {v}")));
        }
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(2 * edges.len());
    offsets.push(0);
    for list in &adj {
        targets.extend_from_slice(list);
        offsets.push(targets.len() as u32);
    }
    let g = PortedGraph { offsets, targets };
    if bfs_distances(&g, 0).contains(&UNREACHED) {
        return Err(Error::InvalidGraph("graph is disconnected".into()));
    }
    Ok(g)
}

/// Hop distances from `s`.
pub fn bfs_distances(g: &PortedGraph, s: VertexId) -> DistanceVector {
    let mut dist = vec![UNREACHED; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[s as usize] = 0;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &w in g.neighbors(u) {
            if dist[w as usize] == UNREACHED {
                dist[w as usize] = du + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// `I(u,v)`: all vertices on some shortest `u`-`v` path, ascending.
pub fn interval(g: &PortedGraph, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let du = bfs_distances(g, u);
    let dv = bfs_distances(g, v);
    Ok(interval_from(&du, &dv))
}

pub(crate) fn interval_from(du: &[u32], dv: &[u32]) -> Vec<VertexId> {
    let target = du.iter().zip(dv).find(|(_, &b)| b == 0).map(|(&a, _)| a);
    let d = target.expect("dv has a zero entry");
    (0..du.len())
        .filter(|&x| du[x] + dv[x] == d)
        .map(|x| x as VertexId)
        .collect()
}

/// The unique vertex of `I(u,v) ∩ I(v,w) ∩ I(w,u)`.
pub fn median_of_triplet(g: &PortedGraph, u: VertexId, v: VertexId, w: VertexId) -> Result<VertexId> {
    for x in [u, v, w] {
        g.check_vertex(x)?;
    }
    let du = bfs_distances(g, u);
    let dv = bfs_distances(g, v);
    let dw = bfs_distances(g, w);
    let (uv, vw, wu) = (du[v as usize], dv[w as usize], dw[u as usize]);
    let medians: Vec<VertexId> = (0..g.vertex_count())
        .filter(|&x| du[x] + dv[x] == uv && dv[x] + dw[x] == vw && dw[x] + du[x] == wu)
        .map(|x| x as VertexId)
        .collect();
    match medians.as_slice() {
        [m] => Ok(*m),
        _ => Err(Error::NotMedian {
            triplet: (u, v, w),
            count: medians.len(),
        }),
    }
}

/// Sizes of `W(u,v)` and `W(v,u)` for the edge `uv`.
pub fn halfspace_sizes(g: &PortedGraph, u: VertexId, v: VertexId) -> Result<HalfspacePair> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if !g.is_adjacent(u, v) {
        return Err(Error::NotEdge(u, v));
    }
    let du = bfs_distances(g, u);
    let dv = bfs_distances(g, v);
    let size_uv = du.iter().zip(&dv).filter(|(a, b)| a < b).count();
    let size_vu = du.iter().zip(&dv).filter(|(a, b)| b < a).count();
    Ok(HalfspacePair {
        edge: (u, v),
        size_uv,
        size_vu,
    })
}

/// Cube-free median graphs satisfy `m <= 2n`.
pub fn edge_count_bound_check(g: &PortedGraph) -> bool {
    g.edge_count() <= 2 * g.vertex_count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u32) -> PortedGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        PortedGraph::from_edges(n as usize, &edges).unwrap()
    }

    fn grid3() -> PortedGraph {
        crate::generators::gen_grid(3, 3)
    }

    #[test]
    fn bfs_on_path_and_grid() {
        assert_eq!(bfs_distances(&path(5), 0), vec![0, 1, 2, 3, 4]);
        let g = grid3();
        assert_eq!(bfs_distances(&g, 0)[8], 4);
    }

    #[test]
    fn intervals() {
        let p = path(5);
        assert_eq!(interval(&p, 0, 2).unwrap(), vec![0, 1, 2]);
        assert_eq!(interval(&p, 3, 3).unwrap(), vec![3]);
        // (0,0),(1,0),(0,1),(1,1) in row-major ids
        assert_eq!(interval(&grid3(), 0, 4).unwrap(), vec![0, 1, 3, 4]);
    }

    #[test]
    fn medians() {
        assert_eq!(median_of_triplet(&path(5), 0, 2, 4).unwrap(), 2);
        // (0,0), (2,0), (0,2)
        assert_eq!(median_of_triplet(&grid3(), 0, 2, 6).unwrap(), 0);
        let c6 = PortedGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert!(matches!(
            median_of_triplet(&c6, 0, 2, 4),
            Err(Error::NotMedian { count: 0, .. })
        ));
    }

    #[test]
    fn halfspaces() {
        let p = path(5);
        let h = halfspace_sizes(&p, 1, 2).unwrap();
        assert_eq!((h.size_uv, h.size_vu), (2, 3));
        let g = grid3();
        // (1,0)-(1,1): vertical edge in the middle column
        let h = halfspace_sizes(&g, 1, 4).unwrap();
        assert_eq!((h.size_uv, h.size_vu), (3, 6));
        assert!(matches!(halfspace_sizes(&p, 0, 2), Err(Error::NotEdge(0, 2))));
    }

    #[test]
    fn ports_follow_edge_order() {
        let g = PortedGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.port(1, 0), Some(1));
        assert_eq!(g.port(1, 2), Some(2));
        assert_eq!(g.neighbor_at(1, 2), Some(2));
        assert_eq!(g.neighbor_at(1, 0), None);
        let again = PortedGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(PortedGraph::from_edges(3, &[(0, 1)]).is_err());
        assert!(PortedGraph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(PortedGraph::from_edges(2, &[(0, 0)]).is_err());
        assert!(PortedGraph::from_edges(2, &[(0, 2)]).is_err());
        assert!(PortedGraph::from_edges(1, &[]).is_ok());
    }

    #[test]
    fn text_round_trip_preserves_ports() {
        let g = PortedGraph::from_edges(4, &[(2, 3), (0, 1), (1, 2), (3, 0)]).unwrap();
        let text = g.to_text(&["demo".into()]);
        assert!(text.starts_with("# demo\n4 4\n"));
        assert_eq!(PortedGraph::parse(&text).unwrap(), g);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            PortedGraph::parse("2 1\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PortedGraph::parse("3 3\n0 1\n1 2\n"),
            Err(Error::Parse { .. })
        ));
        assert!(PortedGraph::parse("# c\n\n2 1\n# mid\n0 1\n").is_ok());
    }

    #[test]
    fn edge_bound() {
        assert!(edge_count_bound_check(&grid3()));
        assert!(edge_count_bound_check(&path(7)));
    }
}
