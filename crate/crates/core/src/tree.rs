//! Centroid-decomposition labels for trees: distances, next-hop ports and
//! nearest-common-ancestor depth.
//!
//! A label lists, for every centroid-decomposition component containing the
//! vertex (outermost first), the component's separator and the vertex's
//! relation to it. Two labels agree on a prefix; the last shared separator
//! lies on the tree path between the two vertices.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{PortId, PortedGraph, VertexId};

/// A tree whose vertices carry global ids and whose edges carry host ports.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HostTree {
    ids: Vec<VertexId>,
    /// Local neighbor and the host port leading to it.
    adj: Vec<Vec<(u32, PortId)>>,
}

/// `(separator, dist)` entries, outermost separator first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TreeDistLabel {
    pub entries: Vec<(VertexId, u32)>,
    /// Depth of the vertex, present on labels that support [`ncad_decode`].
    pub depth: Option<u32>,
}

/// One entry of a tree routing label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TreeRoutEntry {
    pub sep: VertexId,
    /// First hop from the vertex toward `sep`; 0 at `sep` itself.
    pub port_to_sep: PortId,
    /// First hop from `sep` toward the vertex; 0 at `sep` itself.
    pub port_from_sep: PortId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TreeRoutLabel {
    pub entries: Vec<TreeRoutEntry>,
}

impl HostTree {
    /// Builds a tree from local edges `(a, b, port a→b, port b→a)`.
    /// Fails unless the edges form a spanning tree of `ids`.
    pub fn new(ids: Vec<VertexId>, edges: &[(u32, u32, PortId, PortId)]) -> Result<Self> {
        let n = ids.len();
        let not_tree = || Error::InvalidGraph("edges do not form a tree".into());
        if n == 0 || edges.len() + 1 != n {
            return Err(not_tree());
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b, pab, pba) in edges {
            if a as usize >= n || b as usize >= n || a == b {
                return Err(not_tree());
            }
            adj[a as usize].push((b, pab));
            adj[b as usize].push((a, pba));
        }
        let tree = Self { ids, adj };
        if tree.bfs(0).iter().any(|&(d, _)| d == u32::MAX) {
            return Err(not_tree());
        }
        Ok(tree)
    }

    /// The subgraph of `g` induced by `verts`, which must be a tree. Edges
    /// keep their host ports.
    pub fn induced(g: &PortedGraph, verts: &[VertexId]) -> Result<Self> {
        let local: HashMap<VertexId, u32> = verts.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let mut edges = Vec::new();
        for (i, &v) in verts.iter().enumerate() {
            for (w, p) in g.ports(v) {
                if let Some(&j) = local.get(&w) {
                    if (i as u32) < j {
                        let back = g.port(w, v).expect("undirected");
                        edges.push((i as u32, j, p, back));
                    }
                }
            }
        }
        Self::new(verts.to_vec(), &edges)
    }

    /// A tree given by parent pointers over `0..n` (ports left at 0).
    pub fn from_parents(parent: &[Option<VertexId>]) -> Result<Self> {
        let edges: Vec<_> = parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v as u32, 0, 0)))
            .collect();
        Self::new((0..parent.len() as VertexId).collect(), &edges)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn neighbors(&self, local: u32) -> &[(u32, PortId)] {
        &self.adj[local as usize]
    }

    /// Local index of a global id (linear scan).
    pub fn local_of(&self, id: VertexId) -> Option<u32> {
        self.ids.iter().position(|&v| v == id).map(|i| i as u32)
    }

    /// Distances and parents from `src` (local indices).
    pub fn bfs(&self, src: u32) -> Vec<(u32, u32)> {
        let mut out = vec![(u32::MAX, u32::MAX); self.len()];
        out[src as usize] = (0, src);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = out[u as usize].0;
            for &(w, _) in &self.adj[u as usize] {
                if out[w as usize].0 == u32::MAX {
                    out[w as usize] = (d + 1, u);
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// Runs the centroid decomposition and reports, for every vertex and
    /// every component containing it, `(vertex, separator, dist, port
    /// toward separator, port from separator)` in outermost-first order.
    fn decompose(&self, mut emit: impl FnMut(u32, VertexId, u32, PortId, PortId)) {
        let n = self.len();
        let mut removed = vec![false; n];
        let mut size = vec![0u32; n];
        let mut parent = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![0u32];
        // Per-vertex BFS scratch: distance, port toward the separator, first
        // port out of the separator.
        let mut info = vec![(0u32, 0 as PortId, 0 as PortId); n];
        while let Some(root) = stack.pop() {
            order.clear();
            parent[root as usize] = u32::MAX;
            order.push(root);
            let mut i = 0;
            while i < order.len() {
                let u = order[i];
                i += 1;
                for &(w, _) in &self.adj[u as usize] {
                    if !removed[w as usize] && w != parent[u as usize] {
                        parent[w as usize] = u;
                        order.push(w);
                    }
                }
            }
            for &u in order.iter().rev() {
                size[u as usize] = 1 + self.adj[u as usize]
                    .iter()
                    .filter(|&&(w, _)| !removed[w as usize] && parent[w as usize] == u)
                    .map(|&(w, _)| size[w as usize])
                    .sum::<u32>();
            }
            let total = order.len() as u32;
            let heavy_child = |u: u32| {
                self.adj[u as usize]
                    .iter()
                    .map(|&(w, _)| w)
                    .filter(|&w| !removed[w as usize] && parent[w as usize] == u)
                    .max_by_key(|&w| size[w as usize])
            };
            let mut c = root;
            while let Some(h) = heavy_child(c) {
                if 2 * size[h as usize] > total {
                    c = h;
                } else {
                    break;
                }
            }
            // A child holding exactly half is a second centroid.
            if let Some(h) = heavy_child(c) {
                if 2 * size[h as usize] == total && self.ids[h as usize] < self.ids[c as usize] {
                    c = h;
                }
            }
            let sep = self.ids[c as usize];
            info[c as usize] = (0, 0, 0);
            emit(c, sep, 0, 0, 0);
            let mut queue = VecDeque::from([c]);
            parent[c as usize] = u32::MAX;
            while let Some(u) = queue.pop_front() {
                let (d, _, first) = info[u as usize];
                for &(w, p) in &self.adj[u as usize] {
                    if removed[w as usize] || w == parent[u as usize] {
                        continue;
                    }
                    parent[w as usize] = u;
                    let back = self.port_between(w, u);
                    let first = if u == c { p } else { first };
                    info[w as usize] = (d + 1, back, first);
                    emit(w, sep, d + 1, back, first);
                    queue.push_back(w);
                }
            }
            removed[c as usize] = true;
            stack.extend(
                self.adj[c as usize]
                    .iter()
                    .map(|&(w, _)| w)
                    .filter(|&w| !removed[w as usize]),
            );
        }
    }

    fn port_between(&self, a: u32, b: u32) -> PortId {
        self.adj[a as usize]
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, p)| p)
            .expect("adjacent")
    }
}

/// Distance labels for every vertex of `tree`, indexed by local index.
pub fn tree_dist_encode(tree: &HostTree) -> Vec<TreeDistLabel> {
    let mut labels = vec![TreeDistLabel::default(); tree.len()];
    tree.decompose(|v, sep, d, _, _| labels[v as usize].entries.push((sep, d)));
    labels
}

/// Routing labels for every vertex of `tree`, indexed by local index.
pub fn tree_rout_encode(tree: &HostTree) -> Vec<TreeRoutLabel> {
    let mut labels = vec![TreeRoutLabel::default(); tree.len()];
    tree.decompose(|v, sep, _, to, from| {
        labels[v as usize].entries.push(TreeRoutEntry {
            sep,
            port_to_sep: to,
            port_from_sep: from,
        })
    });
    labels
}

/// Distance labels on the rooted tree given by `parent`, augmented with
/// depths so that [`ncad_decode`] applies.
pub fn ncad_encode(parent: &[Option<VertexId>]) -> Result<Vec<TreeDistLabel>> {
    let tree = HostTree::from_parents(parent)?;
    let mut labels = tree_dist_encode(&tree);
    let mut depth = vec![u32::MAX; parent.len()];
    for v in 0..parent.len() {
        // Walk up to the first vertex with a known depth.
        let mut chain = vec![v];
        let mut known = 0;
        while let Some(p) = parent[*chain.last().unwrap()] {
            if depth[p as usize] != u32::MAX {
                known = depth[p as usize] + 1;
                break;
            }
            chain.push(p as usize);
        }
        for &u in chain.iter().rev() {
            depth[u] = known;
            known += 1;
        }
    }
    for (label, d) in labels.iter_mut().zip(depth) {
        label.depth = Some(d);
    }
    Ok(labels)
}

/// Index of the last separator shared by two labels.
fn last_common<T>(a: &[T], b: &[T], sep: impl Fn(&T) -> VertexId) -> Result<usize> {
    (0..a.len().min(b.len()))
        .rev()
        .find(|&i| sep(&a[i]) == sep(&b[i]))
        .ok_or(Error::NoCommonSeparator)
}

pub fn tree_dist_decode(a: &TreeDistLabel, b: &TreeDistLabel) -> Result<u32> {
    let i = last_common(&a.entries, &b.entries, |e| e.0)?;
    Ok(a.entries[i].1 + b.entries[i].1)
}

/// Port of `a`'s vertex on the tree path toward `b`'s vertex; 0 if equal.
pub fn tree_rout_decode(a: &TreeRoutLabel, b: &TreeRoutLabel) -> Result<PortId> {
    let i = last_common(&a.entries, &b.entries, |e| e.sep)?;
    if i + 1 == a.entries.len() {
        // `a` is the separator itself.
        Ok(b.entries[i].port_from_sep)
    } else {
        Ok(a.entries[i].port_to_sep)
    }
}

/// Depth of the nearest common ancestor of two depth-augmented labels.
pub fn ncad_decode(a: &TreeDistLabel, b: &TreeDistLabel) -> Result<u32> {
    let (da, db) = match (a.depth, b.depth) {
        (Some(da), Some(db)) => (da, db),
        _ => return Err(Error::Format("tree label carries no depth".into())),
    };
    let d = tree_dist_decode(a, b)?;
    if d > da + db || (da + db - d) % 2 != 0 {
        return Err(Error::ForeignLabel);
    }
    Ok((da + db - d) / 2)
}
