//! One decomposition step (centroid, star, fibers, boundaries, gates,
//! imprints) and the recursion over fibers.
//!
//! Every step works on a [`Scope`]: the subgraph induced by a fiber of the
//! previous step, stored with local indices. Fibers are gated, so distances
//! inside a scope equal distances in the host graph.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{PortId, PortedGraph, VertexId};
use crate::star::StarLabel;
use crate::tree::HostTree;

const NONE: u32 = u32::MAX;

/// The subgraph induced by a vertex subset, in compressed adjacency form.
#[derive(Clone, Debug)]
pub struct Scope {
    verts: Vec<VertexId>,
    offsets: Vec<u32>,
    targets: Vec<u32>,
    /// Host port of each adjacency entry.
    ports: Vec<PortId>,
}

impl Scope {
    /// `local_of` is scratch space of length `n`, all `NONE`; it is restored
    /// before returning.
    fn build(g: &PortedGraph, verts: Vec<VertexId>, local_of: &mut [u32]) -> Self {
        for (i, &v) in verts.iter().enumerate() {
            local_of[v as usize] = i as u32;
        }
        let mut offsets = Vec::with_capacity(verts.len() + 1);
        let mut targets = Vec::new();
        let mut ports = Vec::new();
        offsets.push(0);
        for &v in &verts {
            for (w, p) in g.ports(v) {
                let lw = local_of[w as usize];
                if lw != NONE {
                    targets.push(lw);
                    ports.push(p);
                }
            }
            offsets.push(targets.len() as u32);
        }
        for &v in &verts {
            local_of[v as usize] = NONE;
        }
        Self {
            verts,
            offsets,
            targets,
            ports,
        }
    }

    /// The whole graph as a scope.
    pub fn whole(g: &PortedGraph) -> Self {
        let mut scratch = vec![NONE; g.vertex_count()];
        Self::build(g, (0..g.vertex_count() as VertexId).collect(), &mut scratch)
    }

    /// The subgraph induced by `verts`.
    pub fn induced(g: &PortedGraph, verts: &[VertexId]) -> Result<Self> {
        let mut scratch = vec![NONE; g.vertex_count()];
        for &v in verts {
            g.check_vertex(v)?;
            if scratch[v as usize] != NONE {
                return Err(Error::InvalidGraph(format!("vertex {v} listed twice")));
            }
            scratch[v as usize] = 0;
        }
        scratch.iter_mut().for_each(|x| *x = NONE);
        Ok(Self::build(g, verts.to_vec(), &mut scratch))
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    /// Global id of a local vertex.
    #[inline]
    pub fn id(&self, v: u32) -> VertexId {
        self.verts[v as usize]
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.verts
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    /// Neighbors of `v` with host ports.
    pub fn adj(&self, v: u32) -> impl Iterator<Item = (u32, PortId)> + '_ {
        let r = self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize;
        self.targets[r.clone()]
            .iter()
            .copied()
            .zip(self.ports[r].iter().copied())
    }

    /// Host port from `a` to its neighbor `b`.
    pub fn port(&self, a: u32, b: u32) -> PortId {
        self.adj(a)
            .find(|&(w, _)| w == b)
            .map(|(_, p)| p)
            .expect("vertices are adjacent")
    }

    /// BFS from `sources` over vertices accepted by `allowed`. Writes
    /// distance, parent and source for every reached vertex into the given
    /// arrays (which must hold `NONE` there) and returns the visit order.
    fn bfs(
        &self,
        sources: &[u32],
        allowed: impl Fn(u32) -> bool,
        dist: &mut [u32],
        parent: &mut [u32],
        root: &mut [u32],
    ) -> Vec<u32> {
        let mut order = Vec::new();
        for &s in sources {
            dist[s as usize] = 0;
            parent[s as usize] = s;
            root[s as usize] = s;
            order.push(s);
        }
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &w in self.neighbors(u) {
                if dist[w as usize] == NONE && allowed(w) {
                    dist[w as usize] = dist[u as usize] + 1;
                    parent[w as usize] = u;
                    root[w as usize] = root[u as usize];
                    order.push(w);
                }
            }
        }
        order
    }

    fn full_bfs(&self, s: u32) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
        let n = self.len();
        let (mut d, mut p, mut r) = (vec![NONE; n], vec![NONE; n], vec![NONE; n]);
        let order = self.bfs(&[s], |_| true, &mut d, &mut p, &mut r);
        (d, p, order)
    }
}

/// For each vertex `z`, the (at most two) neighbors of `c` on shortest
/// `c`–`z` paths, together with BFS distances from `c`.
fn neighbor_intervals(scope: &Scope, c: u32) -> Result<(Vec<u32>, Vec<[u32; 2]>)> {
    let (dist, _, order) = scope.full_bfs(c);
    let mut sets = vec![[NONE; 2]; scope.len()];
    for &z in &order[1..] {
        let dz = dist[z as usize];
        if dz == 1 {
            sets[z as usize] = [z, NONE];
            continue;
        }
        let mut acc = [NONE; 2];
        for &p in scope.neighbors(z) {
            if dist[p as usize] + 1 != dz {
                continue;
            }
            for y in sets[p as usize] {
                if y == NONE || acc.contains(&y) {
                    continue;
                }
                if acc[0] == NONE {
                    acc[0] = y;
                } else if acc[1] == NONE {
                    acc[1] = y;
                } else {
                    return Err(Error::NotCubeFreeMedian(format!(
                        "vertex {} has three neighbors on shortest paths to {}",
                        scope.id(c),
                        scope.id(z)
                    )));
                }
            }
        }
        sets[z as usize] = acc;
    }
    Ok((dist, sets))
}

/// `|W(y, c)|` for every neighbor `y` of `c`, as `(y, count)`.
fn neighbor_halfspaces(scope: &Scope, c: u32) -> Result<Vec<(u32, usize)>> {
    let (_, sets) = neighbor_intervals(scope, c)?;
    let mut count: HashMap<u32, usize> = scope.neighbors(c).iter().map(|&y| (y, 0)).collect();
    for set in &sets {
        for &y in set.iter().filter(|&&y| y != NONE) {
            *count.get_mut(&y).expect("neighbor of c") += 1;
        }
    }
    Ok(scope.neighbors(c).iter().map(|&y| (y, count[&y])).collect())
}

/// Local index of the vertex minimizing the sum of distances over the
/// scope, smallest global id among ties.
///
/// Starts at the midpoint of a double sweep and moves to a neighbor `y`
/// while `|W(y,c)| > s/2`; every step costs one BFS.
pub fn compute_centroid(scope: &Scope) -> Result<u32> {
    let s = scope.len();
    if s == 1 {
        return Ok(0);
    }
    let (_, _, order0) = scope.full_bfs(0);
    let a = *order0.last().expect("non-empty");
    let (da, pa, order_a) = scope.full_bfs(a);
    let b = *order_a.last().expect("non-empty");
    let mut c = b;
    for _ in 0..da[b as usize] / 2 {
        c = pa[c as usize];
    }
    loop {
        let best = neighbor_halfspaces(scope, c)?
            .into_iter()
            .filter(|&(_, k)| 2 * k > s)
            .max_by_key(|&(y, k)| (k, std::cmp::Reverse(scope.id(y))));
        match best {
            Some((y, _)) => c = y,
            None => break,
        }
    }
    // The minimizers form a connected plateau; collect it and take the
    // smallest id.
    let mut best = c;
    let mut seen = vec![c];
    let mut queue = VecDeque::from([c]);
    while let Some(u) = queue.pop_front() {
        if scope.id(u) < scope.id(best) {
            best = u;
        }
        for (y, k) in neighbor_halfspaces(scope, u)? {
            if 2 * k == s && !seen.contains(&y) {
                seen.push(y);
                queue.push_back(y);
            }
        }
    }
    Ok(best)
}

/// Kind of a fiber, by the distance of its root to the centroid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiberKind {
    Center,
    Panel,
    Cone,
}

impl FiberKind {
    pub fn name(self) -> &'static str {
        match self {
            FiberKind::Center => "center",
            FiberKind::Panel => "panel",
            FiberKind::Cone => "cone",
        }
    }
}

/// The star of the centroid: the centroid, its neighbors and the far
/// corners of squares through it.
#[derive(Clone, Debug)]
pub struct Star {
    pub center: u32,
    /// Center first, then neighbors in port order, then cone roots.
    pub members: Vec<u32>,
    pub labels: Vec<StarLabel>,
    /// Per cone root: `(root, y', c, y'')` with `label(y') < label(y'')`.
    pub squares: Vec<[u32; 4]>,
    /// Member index of each scope vertex that belongs to the star.
    index: HashMap<u32, u32>,
}

impl Star {
    pub fn member_index(&self, v: u32) -> Option<u32> {
        self.index.get(&v).copied()
    }

    pub fn kind(&self, member: u32) -> FiberKind {
        match self.labels[member as usize].len() {
            0 => FiberKind::Center,
            1 => FiberKind::Panel,
            _ => FiberKind::Cone,
        }
    }

    /// Member indices of the two panels next to a cone, 1st then 2nd.
    pub fn cone_panels(&self, cone: u32) -> [u32; 2] {
        let l = self.labels[cone as usize].slots();
        let panel = |p: u32| self.panel_member(p).expect("cone labels name panels");
        [panel(l[0]), panel(l[1])]
    }

    /// Member index of the panel with the given label value.
    pub fn panel_member(&self, value: u32) -> Option<u32> {
        self.labels
            .iter()
            .position(|l| *l == StarLabel::single(value))
            .map(|i| i as u32)
    }
}

/// Builds the star of `c` within `scope`.
pub fn build_star(scope: &Scope, c: u32) -> Result<Star> {
    let mut members = vec![c];
    let mut labels = vec![StarLabel::EMPTY];
    let mut index = HashMap::from([(c, 0u32)]);
    for (y, p) in scope.adj(c) {
        index.insert(y, members.len() as u32);
        members.push(y);
        labels.push(StarLabel::single(p));
    }
    // Far corners: vertices other than c adjacent to two neighbors of c.
    let mut hits: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut first_seen = Vec::new();
    for &y in scope.neighbors(c) {
        for &x in scope.neighbors(y) {
            if x != c && !index.contains_key(&x) {
                let e = hits.entry(x).or_default();
                if e.is_empty() {
                    first_seen.push(x);
                }
                e.push(y);
            }
        }
    }
    let mut squares = Vec::new();
    for x in first_seen {
        let ys = &hits[&x];
        match ys[..] {
            [_] => {}
            [y1, y2] => {
                let (l1, l2) = (labels[index[&y1] as usize], labels[index[&y2] as usize]);
                let label = l1.union(l2).expect("two singletons");
                let (a, b) = if l1 < l2 { (y1, y2) } else { (y2, y1) };
                index.insert(x, members.len() as u32);
                members.push(x);
                labels.push(label);
                squares.push([x, a, c, b]);
            }
            _ => {
                return Err(Error::NotCubeFreeMedian(format!(
                    "vertices {} and {} have {} common neighbors",
                    scope.id(c),
                    scope.id(x),
                    ys.len()
                )))
            }
        }
    }
    Ok(Star {
        center: c,
        members,
        labels,
        squares,
        index,
    })
}

/// Fibers of the star: membership, distances to the gate and boundaries.
#[derive(Clone, Debug)]
pub struct FiberPartition {
    /// Member index of the gate of each scope vertex.
    pub fib: Vec<u32>,
    pub dist_to_gate: Vec<u32>,
    /// Vertices of each fiber in BFS order from the star.
    pub members: Vec<Vec<u32>>,
    /// `(x, y)` → `∂_y F(x)`, the vertices of `F(x)` with a neighbor in `F(y)`.
    pub rel_boundary: BTreeMap<(u32, u32), Vec<u32>>,
    /// `(v, y)` → the unique neighbor of `v` in `F(y)`.
    pub across: HashMap<(u32, u32), u32>,
    /// `∂*F(x)` per fiber, the union of its relative boundaries.
    pub total_boundary: Vec<Vec<u32>>,
}

impl FiberPartition {
    pub fn neighbor_across(&self, v: u32, fiber: u32) -> Option<u32> {
        self.across.get(&(v, fiber)).copied()
    }
}

/// Assigns every scope vertex to its gate in the star by a BFS from all
/// star members, then extracts relative and total boundaries.
pub fn partition_fibers(scope: &Scope, star: &Star) -> Result<FiberPartition> {
    let n = scope.len();
    let (mut dist, mut parent, mut root) = (vec![NONE; n], vec![NONE; n], vec![NONE; n]);
    let order = scope.bfs(&star.members, |_| true, &mut dist, &mut parent, &mut root);
    if order.len() != n {
        return Err(Error::InvalidGraph("scope is disconnected".into()));
    }
    let fib: Vec<u32> = root
        .iter()
        .map(|&r| star.member_index(r).expect("roots are members"))
        .collect();
    for &u in &order {
        for &w in scope.neighbors(u) {
            if dist[w as usize] == dist[u as usize] + 1 && dist[u as usize] > 0 && fib[w as usize] != fib[u as usize] {
                return Err(Error::GateAmbiguous {
                    vertex: scope.id(w),
                    first: scope.id(star.members[fib[w as usize] as usize]),
                    second: scope.id(star.members[fib[u as usize] as usize]),
                });
            }
        }
    }
    let mut members = vec![Vec::new(); star.members.len()];
    for &u in &order {
        members[fib[u as usize] as usize].push(u);
    }
    let mut rel_boundary: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
    let mut across = HashMap::new();
    for u in 0..n as u32 {
        let x = fib[u as usize];
        for &w in scope.neighbors(u) {
            let y = fib[w as usize];
            if x == y {
                continue;
            }
            let (lx, ly) = (star.labels[x as usize], star.labels[y as usize]);
            if crate::star::star_dist(lx, ly) != 1 {
                return Err(Error::NotCubeFreeMedian(format!(
                    "fibers of non-adjacent star vertices {} and {} touch",
                    scope.id(star.members[x as usize]),
                    scope.id(star.members[y as usize])
                )));
            }
            if across.insert((u, y), w).is_some() {
                return Err(Error::NotCubeFreeMedian(format!(
                    "vertex {} has two neighbors in one neighboring fiber",
                    scope.id(u)
                )));
            }
            rel_boundary.entry((x, y)).or_default().push(u);
        }
    }
    let mut total_boundary = vec![Vec::new(); star.members.len()];
    let mut in_total = vec![false; n];
    for (&(x, _), verts) in &rel_boundary {
        for &v in verts {
            if !in_total[v as usize] {
                in_total[v as usize] = true;
                total_boundary[x as usize].push(v);
            }
        }
    }
    Ok(FiberPartition {
        fib,
        dist_to_gate: dist,
        members,
        rel_boundary,
        across,
        total_boundary,
    })
}

/// One imprint of a panel vertex on the total boundary of its panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Imprint {
    pub vertex: u32,
    pub dist: u32,
    /// Next vertex on a shortest path to `vertex` (the vertex itself at 0).
    pub hop: u32,
}

/// The gate of a cone vertex in one of the two neighboring panels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PanelGate {
    /// Member index of the panel.
    pub panel: u32,
    /// The gate `u⁺`, a vertex of `∂_x F(panel)`.
    pub gate: u32,
    pub dist: u32,
    /// Next vertex on a shortest path to `gate`.
    pub hop: u32,
    /// The unique neighbor of `gate` inside the cone.
    pub twin: u32,
}

/// Per-vertex data relating a vertex to the boundary of its fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attachment {
    Center,
    Panel([Imprint; 2]),
    /// Gates into the 1st and 2nd panel.
    Cone([PanelGate; 2]),
}

/// Distance to the centroid and first hops both ways.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CentroidLink {
    pub dist: u32,
    /// Next vertex toward the centroid (self at the centroid).
    pub toward: u32,
    /// First vertex after the centroid on the way back (self at the centroid).
    pub from: u32,
}

/// Everything computed for one recursive call.
#[derive(Clone, Debug)]
pub struct Level {
    pub depth: u32,
    pub scope: Scope,
    pub star: Star,
    pub partition: FiberPartition,
    /// `∂*F(x)` as a tree per member (`None` for the center); tree-local
    /// index `i` is `partition.total_boundary[x][i]`.
    pub boundary_trees: Vec<Option<HostTree>>,
    /// Tree-local index of each vertex in its own fiber's total boundary.
    pub tree_pos: Vec<u32>,
    pub attach: Vec<Attachment>,
    pub link: Vec<CentroidLink>,
}

impl Level {
    /// Runs one decomposition step on `scope` (at least two vertices).
    pub fn build(scope: Scope, depth: u32) -> Result<Self> {
        let c = compute_centroid(&scope)?;
        let star = build_star(&scope, c)?;
        let partition = partition_fibers(&scope, &star)?;
        let n = scope.len();

        let mut tree_pos = vec![NONE; n];
        let mut boundary_trees = vec![None; star.members.len()];
        for (x, verts) in partition.total_boundary.iter().enumerate() {
            if star.kind(x as u32) == FiberKind::Center {
                continue;
            }
            for (i, &v) in verts.iter().enumerate() {
                tree_pos[v as usize] = i as u32;
            }
            let mut edges = Vec::new();
            for (i, &v) in verts.iter().enumerate() {
                for (w, p) in scope.adj(v) {
                    let j = tree_pos[w as usize];
                    if j != NONE && partition.fib[w as usize] == x as u32 && (i as u32) < j {
                        edges.push((i as u32, j, p, scope.port(w, v)));
                    }
                }
            }
            let ids = verts.iter().map(|&v| scope.id(v)).collect();
            let tree = HostTree::new(ids, &edges).map_err(|_| Error::BoundaryNotTree {
                fiber: scope.id(star.members[x]),
            })?;
            boundary_trees[x] = Some(tree);
        }

        let mut level = Level {
            depth,
            link: centroid_links(&scope, c),
            attach: vec![Attachment::Center; n],
            scope,
            star,
            partition,
            boundary_trees,
            tree_pos,
        };
        level.attach_vertices()?;
        Ok(level)
    }

    pub fn centroid(&self) -> VertexId {
        self.scope.id(self.star.center)
    }

    /// Member index of the fiber containing a local vertex.
    pub fn fiber_of(&self, v: u32) -> u32 {
        self.partition.fib[v as usize]
    }

    pub fn kind_of(&self, v: u32) -> FiberKind {
        self.star.kind(self.fiber_of(v))
    }

    pub fn gate_label(&self, v: u32) -> StarLabel {
        self.star.labels[self.fiber_of(v) as usize]
    }

    /// Label value of a panel, its "panel id".
    pub fn panel_id(&self, panel: u32) -> u32 {
        self.star.labels[panel as usize]
            .first()
            .expect("panels have one-element labels")
    }

    fn attach_vertices(&mut self) -> Result<()> {
        let n = self.scope.len();
        let mut da = vec![NONE; n];
        let mut pa = vec![NONE; n];
        let mut ra = vec![NONE; n];
        let mut db = vec![NONE; n];
        let mut pb = vec![NONE; n];
        let mut rb = vec![NONE; n];
        for x in 0..self.star.members.len() as u32 {
            match self.star.kind(x) {
                FiberKind::Center => {}
                FiberKind::Panel => self.attach_panel(x, [&mut da, &mut pa, &mut ra], [&mut db, &mut pb, &mut rb])?,
                FiberKind::Cone => self.attach_cone(x, [&mut da, &mut pa, &mut ra], [&mut db, &mut pb, &mut rb]),
            }
        }
        Ok(())
    }

    fn attach_cone(&mut self, x: u32, a: [&mut Vec<u32>; 3], b: [&mut Vec<u32>; 3]) {
        let panels = self.star.cone_panels(x);
        let scope = &self.scope;
        let fib = &self.partition.fib;
        let [da, pa, ra] = a;
        let [db, pb, rb] = b;
        let rel = &self.partition.rel_boundary;
        scope.bfs(&rel[&(x, panels[0])], |w| fib[w as usize] == x, da, pa, ra);
        scope.bfs(&rel[&(x, panels[1])], |w| fib[w as usize] == x, db, pb, rb);
        let searches = [(panels[0], &*da, &*pa, &*ra), (panels[1], &*db, &*pb, &*rb)];
        for &u in &self.partition.members[x as usize] {
            let slot = |(panel, dist, parent, root): (u32, &Vec<u32>, &Vec<u32>, &Vec<u32>)| {
                let near = root[u as usize];
                let gate = self.partition.neighbor_across(near, panel).expect("boundary edge");
                let d = dist[u as usize];
                PanelGate {
                    panel,
                    gate,
                    dist: d + 1,
                    hop: if d == 0 { gate } else { parent[u as usize] },
                    twin: near,
                }
            };
            self.attach[u as usize] = Attachment::Cone([slot(searches[0]), slot(searches[1])]);
        }
    }

    fn attach_panel(&mut self, x: u32, a: [&mut Vec<u32>; 3], b: [&mut Vec<u32>; 3]) -> Result<()> {
        let scope = &self.scope;
        let fib = &self.partition.fib;
        let root_vertex = self.star.members[x as usize];
        let [d_root, pa, ra] = a;
        let [d_bound, f, imp1] = b;
        // First pass: distances to the panel root.
        let order = scope.bfs(&[root_vertex], |w| fib[w as usize] == x, d_root, pa, ra);
        // Second pass: nearest boundary vertex, its distance and the parent.
        let boundary = &self.partition.total_boundary[x as usize];
        scope.bfs(boundary, |w| fib[w as usize] == x, d_bound, f, imp1);

        let tree = self.boundary_trees[x as usize].as_ref().expect("panel tree");
        let root_pos = self.tree_pos[root_vertex as usize];
        if root_pos == NONE {
            return Err(Error::ImprintMismatch {
                vertex: scope.id(root_vertex),
                reason: "panel root is not on its total boundary".into(),
            });
        }
        let tree_parent: Vec<u32> = tree
            .bfs(root_pos)
            .into_iter()
            .map(|(_, p)| boundary[p as usize])
            .collect();

        let mismatch = |u: u32, reason: &str| Error::ImprintMismatch {
            vertex: scope.id(u),
            reason: reason.to_string(),
        };
        // Imprint pairs computed so far, indexed by scope vertex.
        let mut pair: HashMap<u32, [Imprint; 2]> = HashMap::with_capacity(order.len());
        for &u in &order {
            if self.tree_pos[u as usize] != NONE {
                let me = Imprint {
                    vertex: u,
                    dist: 0,
                    hop: u,
                };
                pair.insert(u, [me, me]);
                continue;
            }
            let du = d_root[u as usize];
            let preds: Vec<u32> = scope
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&p| fib[p as usize] == x && d_root[p as usize] + 1 == du)
                .collect();
            let v = f[u as usize];
            if !preds.contains(&v) || preds.len() > 2 {
                return Err(mismatch(u, "nearest-boundary parent is not a predecessor"));
            }
            let u1 = imp1[u as usize];
            let vp = pair[&v];
            if vp[0].vertex != u1 {
                return Err(mismatch(u, "parent has a different first imprint"));
            }
            let v2 = vp[1].vertex;
            let u2 = match preds.iter().find(|&&p| p != v) {
                None => v2,
                Some(&w) => {
                    let wp = pair[&w];
                    let (w1, w2) = (wp[0].vertex, wp[1].vertex);
                    let further = |a: u32, b: u32| -> Result<u32> {
                        let (da_, db_) = (d_root[a as usize], d_root[b as usize]);
                        match da_.cmp(&db_) {
                            _ if a == b => Ok(a),
                            std::cmp::Ordering::Greater => Ok(a),
                            std::cmp::Ordering::Less => Ok(b),
                            std::cmp::Ordering::Equal => Err(mismatch(u, "second imprint candidates are tied")),
                        }
                    };
                    if w1 == u1 {
                        further(v2, w2)?
                    } else if w2 == u1 {
                        further(v2, w1)?
                    } else {
                        let parent_of_u1 = tree_parent[self.tree_pos[u1 as usize] as usize];
                        let wj = if w1 == parent_of_u1 && w1 != u1 {
                            w2
                        } else if w2 == parent_of_u1 && w2 != u1 {
                            w1
                        } else {
                            return Err(mismatch(
                                u,
                                "no imprint of the second predecessor is next to the first imprint",
                            ));
                        };
                        if wj == v2 {
                            v2
                        } else {
                            further(v2, wj)?
                        }
                    }
                }
            };
            let first = Imprint {
                vertex: u1,
                dist: d_bound[u as usize],
                hop: v,
            };
            let second = if u2 == u1 {
                first
            } else {
                // Shortest paths to u2 leave through a predecessor having u2
                // as an imprint.
                let (dist, hop) = preds
                    .iter()
                    .filter_map(|&p| pair[&p].iter().find(|i| i.vertex == u2).map(|i| (i.dist + 1, p)))
                    .min()
                    .ok_or_else(|| mismatch(u, "second imprint is not inherited"))?;
                Imprint { vertex: u2, dist, hop }
            };
            pair.insert(u, [first, second]);
        }
        for (u, p) in pair {
            self.attach[u as usize] = Attachment::Panel(p);
        }
        Ok(())
    }

    /// Debug dump: one `fiber` line per fiber and one `boundary` line per
    /// relative boundary, all with global ids.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let id = |v: u32| self.scope.id(v);
        let member = |x: u32| id(self.star.members[x as usize]);
        let _ = writeln!(
            out,
            "level {} centroid {} size {}",
            self.depth,
            self.centroid(),
            self.scope.len()
        );
        for (x, verts) in self.partition.members.iter().enumerate() {
            let _ = writeln!(
                out,
                "fiber {} {} {}",
                member(x as u32),
                self.star.kind(x as u32).name(),
                verts.len()
            );
        }
        for (&(x, y), verts) in &self.partition.rel_boundary {
            let mut ids: Vec<_> = verts.iter().map(|&v| id(v)).collect();
            ids.sort_unstable();
            let list: Vec<String> = ids.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "boundary {} {} : {}", member(x), member(y), list.join(" "));
        }
        out
    }
}

fn centroid_links(scope: &Scope, c: u32) -> Vec<CentroidLink> {
    let (dist, parent, order) = scope.full_bfs(c);
    let mut link = vec![
        CentroidLink {
            dist: 0,
            toward: c,
            from: c,
        };
        scope.len()
    ];
    for &z in &order[1..] {
        let p = parent[z as usize];
        link[z as usize] = CentroidLink {
            dist: dist[z as usize],
            toward: p,
            from: if p == c { z } else { link[p as usize].from },
        };
    }
    link
}

/// The tree of recursive calls: every vertex is the centroid of exactly one
/// call (singletons being their own trivial call).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionTree {
    pub root: VertexId,
    pub parent: Vec<Option<VertexId>>,
    pub depth: Vec<u32>,
}

impl RecursionTree {
    pub fn max_depth(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }
}

/// Runs the full recursion on `g`, calling `visit` on every step with at
/// least two vertices, outermost first.
pub fn decompose(g: &PortedGraph, mut visit: impl FnMut(&Level) -> Result<()>) -> Result<RecursionTree> {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut depth = vec![0u32; n];
    let mut local_of = vec![NONE; n];
    let mut root = None;
    let mut queue = VecDeque::from([((0..n as VertexId).collect::<Vec<_>>(), 0u32, None)]);
    while let Some((verts, d, up)) = queue.pop_front() {
        if verts.len() == 1 {
            let v = verts[0];
            parent[v as usize] = up;
            depth[v as usize] = d;
            root.get_or_insert(v);
            continue;
        }
        let level = Level::build(Scope::build(g, verts, &mut local_of), d)?;
        let c = level.centroid();
        parent[c as usize] = up;
        depth[c as usize] = d;
        root.get_or_insert(c);
        visit(&level)?;
        for (x, members) in level.partition.members.iter().enumerate() {
            if level.star.kind(x as u32) != FiberKind::Center {
                let ids = members.iter().map(|&v| level.scope.id(v)).collect();
                queue.push_back((ids, d + 1, Some(c)));
            }
        }
    }
    Ok(RecursionTree {
        root: root.expect("graphs are non-empty"),
        parent,
        depth,
    })
}

/// The recursion tree alone.
pub fn build_recursion_tree(g: &PortedGraph) -> Result<RecursionTree> {
    decompose(g, |_| Ok(()))
}

/// Text dump of every decomposition step.
pub fn inspect(g: &PortedGraph) -> Result<String> {
    let mut out = String::new();
    decompose(g, |level| {
        out.push_str(&level.dump());
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_grid, gen_tree_product, path_tree, star_tree};
    use crate::graph::bfs_distances;

    fn brute_centroid(g: &PortedGraph) -> VertexId {
        (0..g.vertex_count() as VertexId)
            .min_by_key(|&v| (bfs_distances(g, v).iter().map(|&d| d as u64).sum::<u64>(), v))
            .unwrap()
    }

    fn level_of(g: &PortedGraph) -> Level {
        Level::build(Scope::whole(g), 0).unwrap()
    }

    #[test]
    fn centroids() {
        assert_eq!(compute_centroid(&Scope::whole(&path_tree(5))).unwrap(), 2);
        assert_eq!(compute_centroid(&Scope::whole(&path_tree(4))).unwrap(), 1);
        let g = gen_tree_product(&star_tree(3), &path_tree(3));
        assert_eq!(compute_centroid(&Scope::whole(&g)).unwrap(), brute_centroid(&g));
        for (w, h) in [(2, 2), (4, 4), (5, 3), (6, 1)] {
            let g = gen_grid(w, h);
            assert_eq!(
                compute_centroid(&Scope::whole(&g)).unwrap(),
                brute_centroid(&g),
                "{w}x{h}"
            );
        }
    }

    #[test]
    fn path_fibers() {
        let level = level_of(&path_tree(5));
        let star = &level.star;
        assert_eq!(star.members, vec![2, 1, 3]);
        assert!(star.squares.is_empty());
        let fiber = |v: u32| level.scope.id(star.members[level.fiber_of(v) as usize]);
        assert_eq!((0..5).map(fiber).collect::<Vec<_>>(), vec![1, 1, 2, 3, 3]);
        assert_eq!(star.labels[1], StarLabel::single(1));
        assert_eq!(star.labels[2], StarLabel::single(2));
    }

    #[test]
    fn grid_star() {
        let level = level_of(&gen_grid(3, 3));
        assert_eq!(level.centroid(), 4);
        assert_eq!(level.star.members.len(), 9);
        assert_eq!(level.star.squares.len(), 4);
        assert!(level.partition.members.iter().all(|m| m.len() == 1));
        let kinds: Vec<_> = (0..9).map(|v| level.kind_of(v)).collect();
        assert_eq!(kinds.iter().filter(|&&k| k == FiberKind::Panel).count(), 4);
        assert_eq!(kinds.iter().filter(|&&k| k == FiberKind::Cone).count(), 4);
        // Corner (0,0) = vertex 0 gates into panels (0,1)=3 and (1,0)=1.
        match level.attach[0] {
            Attachment::Cone(gates) => {
                let mut got: Vec<_> = gates.iter().map(|g| (g.gate, g.dist, g.twin)).collect();
                got.sort_unstable();
                assert_eq!(got, vec![(1, 1, 0), (3, 1, 0)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dump_format() {
        let text = inspect(&path_tree(5)).unwrap();
        assert!(text.contains("fiber 1 panel 2"));
        assert!(text.contains("boundary 1 2 : 1"));
    }

    #[test]
    fn recursion_tree_of_path() {
        let t = build_recursion_tree(&path_tree(5)).unwrap();
        assert_eq!(t.root, 2);
        // {v0, v1} has two minimizers and the smaller id wins.
        assert_eq!(t.parent, vec![Some(2), Some(0), None, Some(2), Some(3)]);
        assert_eq!(t.depth, vec![1, 2, 0, 1, 2]);
        let single = build_recursion_tree(&path_tree(1)).unwrap();
        assert_eq!((single.root, single.max_depth()), (0, 0));
    }

    #[test]
    fn rejects_three_common_neighbors() {
        let k23 = PortedGraph::from_edges(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        let err = decompose(&k23, |_| Ok(())).unwrap_err();
        assert!(err.is_class_violation(), "{err}");
    }
}
