#![allow(dead_code)]

use cfml::generators::{gen_convex_sub, gen_grid, gen_staircase, gen_tree, gen_tree_product, path_tree, star_tree};
use cfml::PortedGraph;

/// A named test graph.
pub struct Instance {
    pub name: String,
    pub graph: PortedGraph,
}

fn inst(name: impl Into<String>, graph: PortedGraph) -> Instance {
    Instance {
        name: name.into(),
        graph,
    }
}

/// The standard verification corpus plus staircase shapes, which are not
/// products (convex subgraphs of grids are again grids).
pub fn corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for (n, seed) in [(15, 1), (127, 2), (1023, 3)] {
        out.push(inst(format!("tree:{n}:{seed}"), gen_tree(n, seed)));
    }
    for w in 4..=32 {
        out.push(inst(format!("grid:{w}x{w}"), gen_grid(w, w)));
    }
    for (w, h) in [(4, 9), (7, 13), (16, 32)] {
        out.push(inst(format!("grid:{w}x{h}"), gen_grid(w, h)));
    }
    for a in [3, 5, 9] {
        for b in [3, 5, 9] {
            out.push(inst(
                format!("star{a}xstar{b}"),
                gen_tree_product(&star_tree(a), &star_tree(b)),
            ));
        }
    }
    out.push(inst("star3xpath9", gen_tree_product(&star_tree(3), &path_tree(9))));
    let base = gen_grid(24, 24);
    for seed in 1..=10 {
        out.push(inst(
            format!("convex(grid:24x24,{seed},3)"),
            gen_convex_sub(&base, seed, 3),
        ));
    }
    for (seed, (w, h)) in [(12, 12), (20, 16), (24, 24), (30, 20), (40, 40)]
        .into_iter()
        .enumerate()
    {
        let seed = seed as u64 + 1;
        out.push(inst(format!("staircase:{w}x{h}:{seed}"), gen_staircase(w, h, seed)));
    }
    out.push(inst(
        "random:12:7xrandom:20:8",
        gen_tree_product(&gen_tree(12, 7), &gen_tree(20, 8)),
    ));
    out
}
