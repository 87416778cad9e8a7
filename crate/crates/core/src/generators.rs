//! Seeded generators of cube-free median graphs.
//!
//! All randomness comes from [`XorShift64Star`], whose constants are fixed so
//! that corpora can be reproduced by other implementations:
//!
//! * seeding: `state = splitmix64(seed)`, replaced by `0x9E3779B97F4A7C15` if zero;
//!   `splitmix64(x)`: `z = x + 0x9E3779B97F4A7C15; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//!   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >> 31)` (wrapping arithmetic);
//! * step: `x ^= x >> 12; x ^= x << 25; x ^= x >> 27; out = x * 0x2545F4914F6CDD1D`;
//! * `below(k)` = `out % k`.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, PortedGraph, VertexId};

/// xorshift64* generator with splitmix64 seeding.
#[derive(Clone, Debug)]
pub struct XorShift64Star {
    state: u64,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let state = match splitmix64(seed) {
            0 => 0x9E37_79B9_7F4A_7C15,
            s => s,
        };
        Self { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform-ish integer in `0..k` (`k > 0`).
    pub fn below(&mut self, k: u64) -> u64 {
        self.next_u64() % k
    }
}

/// A reproducible generator invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenSpec {
    Tree {
        n: usize,
        seed: u64,
    },
    Grid {
        w: usize,
        h: usize,
    },
    TreeProduct {
        left: TreeSpec,
        right: TreeSpec,
    },
    ConvexSub {
        base: Box<GenSpec>,
        rounds: usize,
        seed: u64,
    },
    Staircase {
        w: usize,
        h: usize,
        seed: u64,
    },
}

/// Factor of a tree product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeSpec {
    Path(usize),
    /// `K_{1,k}`: a center with `k` leaves.
    Star(usize),
    Random {
        n: usize,
        seed: u64,
    },
}

impl TreeSpec {
    pub fn build(&self) -> PortedGraph {
        match *self {
            TreeSpec::Path(n) => path_tree(n),
            TreeSpec::Star(k) => star_tree(k),
            TreeSpec::Random { n, seed } => gen_tree(n, seed),
        }
    }
}

impl fmt::Display for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeSpec::Path(n) => write!(f, "path:{n}"),
            TreeSpec::Star(k) => write!(f, "star:{k}"),
            TreeSpec::Random { n, seed } => write!(f, "random:{n}:{seed}"),
        }
    }
}

impl std::str::FromStr for TreeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            msg: format!("bad tree spec {s:?} (want path:N, star:K or random:N:SEED)"),
        };
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u64> { parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(bad) };
        match parts[0] {
            "path" if parts.len() == 2 && num(1)? >= 1 => Ok(TreeSpec::Path(num(1)? as usize)),
            "star" if parts.len() == 2 => Ok(TreeSpec::Star(num(1)? as usize)),
            "random" if parts.len() == 3 && num(1)? >= 1 => Ok(TreeSpec::Random {
                n: num(1)? as usize,
                seed: num(2)?,
            }),
            _ => Err(bad()),
        }
    }
}

/// Canonical text form, accepted back by `FromStr`:
/// `tree:N:SEED`, `grid:WxH`, `product:TREE,TREE`, `staircase:WxH:SEED` or
/// `convex:ROUNDS:SEED:BASE`, where `TREE` is a [`TreeSpec`].
impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Tree { n, seed } => write!(f, "tree:{n}:{seed}"),
            GenSpec::Grid { w, h } => write!(f, "grid:{w}x{h}"),
            GenSpec::TreeProduct { left, right } => write!(f, "product:{left},{right}"),
            GenSpec::ConvexSub { base, rounds, seed } => write!(f, "convex:{rounds}:{seed}:{base}"),
            GenSpec::Staircase { w, h, seed } => write!(f, "staircase:{w}x{h}:{seed}"),
        }
    }
}

impl std::str::FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse {
            line: 0,
            msg: format!("bad generator spec {s:?}: {why}"),
        };
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad("expected a number"));
        let dims = |t: &str| -> Result<(usize, usize)> {
            let (w, h) = t.split_once('x').ok_or_else(|| bad("expected WxH"))?;
            Ok((num(w)? as usize, num(h)? as usize))
        };
        match kind {
            "tree" => {
                let (n, seed) = rest.split_once(':').ok_or_else(|| bad("expected tree:N:SEED"))?;
                Ok(GenSpec::Tree {
                    n: num(n)? as usize,
                    seed: num(seed)?,
                })
            }
            "grid" => {
                let (w, h) = dims(rest)?;
                Ok(GenSpec::Grid { w, h })
            }
            "product" => {
                let (l, r) = rest.split_once(',').ok_or_else(|| bad("expected product:TREE,TREE"))?;
                Ok(GenSpec::TreeProduct {
                    left: l.parse()?,
                    right: r.parse()?,
                })
            }
            "staircase" => {
                let (d, seed) = rest.split_once(':').ok_or_else(|| bad("expected staircase:WxH:SEED"))?;
                let (w, h) = dims(d)?;
                Ok(GenSpec::Staircase { w, h, seed: num(seed)? })
            }
            "convex" => {
                let mut parts = rest.splitn(3, ':');
                let (Some(rounds), Some(seed), Some(base)) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(bad("expected convex:ROUNDS:SEED:BASE"));
                };
                Ok(GenSpec::ConvexSub {
                    base: Box::new(base.parse()?),
                    rounds: num(rounds)? as usize,
                    seed: num(seed)?,
                })
            }
            _ => Err(bad("unknown family")),
        }
    }
}

impl GenSpec {
    pub fn build(&self) -> Result<PortedGraph> {
        match self {
            GenSpec::Tree { n, seed } => {
                if *n == 0 {
                    return Err(Error::InvalidGraph("tree needs n >= 1".into()));
                }
                Ok(gen_tree(*n, *seed))
            }
            GenSpec::Grid { w, h } => {
                if *w == 0 || *h == 0 {
                    return Err(Error::InvalidGraph("grid needs w, h >= 1".into()));
                }
                Ok(gen_grid(*w, *h))
            }
            GenSpec::TreeProduct { left, right } => Ok(gen_tree_product(&left.build(), &right.build())),
            GenSpec::ConvexSub { base, rounds, seed } => Ok(gen_convex_sub(&base.build()?, *seed, *rounds)),
            GenSpec::Staircase { w, h, seed } => {
                if *w == 0 || *h == 0 {
                    return Err(Error::InvalidGraph("staircase needs w, h >= 1".into()));
                }
                Ok(gen_staircase(*w, *h, *seed))
            }
        }
    }
}

/// Random attachment tree: vertex `i >= 1` hangs off a uniform earlier vertex.
pub fn gen_tree(n: usize, seed: u64) -> PortedGraph {
    assert!(n >= 1);
    let mut rng = XorShift64Star::new(seed);
    let edges: Vec<_> = (1..n as u64)
        .map(|i| (rng.below(i) as VertexId, i as VertexId))
        .collect();
    PortedGraph::from_edges(n, &edges).expect("trees are valid graphs")
}

pub fn path_tree(n: usize) -> PortedGraph {
    assert!(n >= 1);
    let edges: Vec<_> = (1..n as VertexId).map(|i| (i - 1, i)).collect();
    PortedGraph::from_edges(n, &edges).expect("paths are valid graphs")
}

/// `K_{1,k}` with center 0.
pub fn star_tree(k: usize) -> PortedGraph {
    let edges: Vec<_> = (1..=k as VertexId).map(|i| (0, i)).collect();
    PortedGraph::from_edges(k + 1, &edges).expect("stars are valid graphs")
}

/// `w × h` grid; vertex `(x, y)` has id `y * w + x`. For every vertex in id
/// order the edge to the right comes before the edge downwards.
pub fn gen_grid(w: usize, h: usize) -> PortedGraph {
    assert!(w >= 1 && h >= 1);
    let id = |x: usize, y: usize| (y * w + x) as VertexId;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    PortedGraph::from_edges(w * h, &edges).expect("grids are valid graphs")
}

/// Cartesian product; vertex `(a, b)` has id `a * |right| + b`. Edges of the
/// left factor come first (for each left edge, every copy), then the right.
pub fn gen_tree_product(left: &PortedGraph, right: &PortedGraph) -> PortedGraph {
    let (n1, n2) = (left.vertex_count(), right.vertex_count());
    let id = |a: VertexId, b: usize| a * n2 as VertexId + b as VertexId;
    let mut edges = Vec::new();
    for (a1, a2) in left.edges_in_port_order() {
        for b in 0..n2 {
            edges.push((id(a1, b), id(a2, b)));
        }
    }
    for a in 0..n1 as VertexId {
        for (b1, b2) in right.edges_in_port_order() {
            edges.push((id(a, b1 as usize), id(a, b2 as usize)));
        }
    }
    PortedGraph::from_edges(n1 * n2, &edges).expect("products are valid graphs")
}

/// Intersects `g` with `rounds` random halfspaces, all chosen on the side of a
/// random anchor vertex. The kept set is convex, hence connected and median;
/// vertices are renumbered in increasing original order.
pub fn gen_convex_sub(g: &PortedGraph, seed: u64, rounds: usize) -> PortedGraph {
    if rounds == 0 {
        return g.clone();
    }
    let n = g.vertex_count();
    let mut rng = XorShift64Star::new(seed);
    let edges: Vec<_> = g.edges_in_port_order();
    let anchor = rng.below(n as u64) as usize;
    let mut keep = vec![true; n];
    if !edges.is_empty() {
        for _ in 0..rounds {
            let (u, v) = edges[rng.below(edges.len() as u64) as usize];
            let du = bfs_distances(g, u);
            let dv = bfs_distances(g, v);
            let anchor_near_u = du[anchor] < dv[anchor];
            for z in 0..n {
                if (du[z] < dv[z]) != anchor_near_u {
                    keep[z] = false;
                }
            }
        }
    }
    induced(g, &keep)
}

/// A random Young-diagram shape inside a `w × h` grid: column `x` keeps rows
/// `0..height[x]` with non-increasing heights. The result is a squaregraph
/// and in general not a product.
pub fn gen_staircase(w: usize, h: usize, seed: u64) -> PortedGraph {
    let mut rng = XorShift64Star::new(seed);
    let mut heights = Vec::with_capacity(w);
    let mut top = h;
    for x in 0..w {
        if x > 0 {
            top = 1 + rng.below(top as u64) as usize;
        }
        heights.push(top);
    }
    let full = gen_grid(w, h);
    let keep: Vec<bool> = (0..w * h).map(|v| v / w < heights[v % w]).collect();
    induced(&full, &keep)
}

/// Induced subgraph on `keep`, renumbered by increasing id, edges in the
/// parent's port order.
pub fn induced(g: &PortedGraph, keep: &[bool]) -> PortedGraph {
    let mut new_id = vec![u32::MAX; g.vertex_count()];
    let mut next = 0;
    for (v, &k) in keep.iter().enumerate() {
        if k {
            new_id[v] = next;
            next += 1;
        }
    }
    let edges: Vec<_> = g
        .edges_in_port_order()
        .into_iter()
        .filter(|&(u, v)| keep[u as usize] && keep[v as usize])
        .map(|(u, v)| (new_id[u as usize], new_id[v as usize]))
        .collect();
    PortedGraph::from_edges(next as usize, &edges).expect("kept set is connected")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognize::{is_cube_free, is_median_graph};

    fn is_cfm(g: &PortedGraph) -> bool {
        is_median_graph(g, 1024).unwrap() && is_cube_free(g)
    }

    #[test]
    fn spec_text_round_trips() {
        for text in [
            "tree:15:1",
            "grid:4x3",
            "product:star:3,path:9",
            "product:random:5:2,star:4",
            "staircase:10x8:3",
            "convex:3:7:grid:24x24",
            "convex:1:2:convex:2:3:product:path:4,path:5",
        ] {
            let spec: GenSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            assert!(is_cfm(&spec.build().unwrap()), "{text}");
        }
        for bad in [
            "",
            "grid",
            "grid:4",
            "tree:x:1",
            "cube:2",
            "product:star:3",
            "convex:1:2",
        ] {
            assert!(bad.parse::<GenSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn rng_is_reproducible() {
        let mut a = XorShift64Star::new(42);
        let mut b = XorShift64Star::new(42);
        let xs: Vec<u64> = (0..5).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..5).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(XorShift64Star::new(1).next_u64(), XorShift64Star::new(2).next_u64());
        // Pinned first output so other implementations can check their port.
        assert_eq!(XorShift64Star::new(0).next_u64(), 0x7BBC_B40D_5506_82D0);
    }

    #[test]
    fn trees() {
        assert_eq!(gen_tree(1, 3).vertex_count(), 1);
        let t = gen_tree(5, 7);
        assert_eq!(t.edge_count(), 4);
        assert!(is_cfm(&t));
        for n in [2, 17, 64] {
            assert_eq!(gen_tree(n, n as u64).edge_count(), n - 1);
        }
    }

    #[test]
    fn grids() {
        let g = gen_grid(3, 3);
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
        assert_eq!(gen_grid(1, 6), path_tree(6));
        assert!(is_cfm(&gen_grid(8, 8)));
    }

    #[test]
    fn products() {
        let c4 = gen_tree_product(&path_tree(2), &path_tree(2));
        assert_eq!((c4.vertex_count(), c4.edge_count()), (4, 4));
        assert!(is_cfm(&gen_tree_product(&star_tree(3), &path_tree(3))));
        let pa_pb = gen_tree_product(&path_tree(3), &path_tree(4));
        assert_eq!(pa_pb.vertex_count(), 12);
        assert_eq!(pa_pb.edge_count(), gen_grid(4, 3).edge_count());
    }

    #[test]
    fn convex_subgraphs() {
        let g = gen_grid(4, 4);
        assert_eq!(gen_convex_sub(&g, 9, 0), g);
        let p5 = path_tree(5);
        for seed in 0..20 {
            let s = gen_convex_sub(&p5, seed, 1);
            assert!((1..=4).contains(&s.vertex_count()));
        }
        let sub = gen_convex_sub(&gen_grid(16, 16), 5, 10);
        assert!(is_cfm(&sub));
    }

    #[test]
    fn staircases() {
        for seed in 0..6 {
            let s = gen_staircase(9, 7, seed);
            assert!(is_cfm(&s), "seed {seed}");
        }
    }

    #[test]
    fn spec_round_trip() {
        let t: TreeSpec = "random:10:3".parse().unwrap();
        assert_eq!(t.to_string(), "random:10:3");
        assert!("path:0".parse::<TreeSpec>().is_err());
        assert!("blob:3".parse::<TreeSpec>().is_err());
        let spec = GenSpec::ConvexSub {
            base: Box::new(GenSpec::Grid { w: 6, h: 5 }),
            rounds: 3,
            seed: 11,
        };
        assert_eq!(spec.build().unwrap(), spec.build().unwrap());
    }
}
