use proptest::prelude::*;

use cfml::dist::{dist_decode, dist_encode, EncodeOptions};
use cfml::generators::{GenSpec, TreeSpec};
use cfml::graph::bfs_distances;
use cfml::recognize::check_cube_free_median;
use cfml::rout::{encode_labels, rout_decode};
use cfml::tree::{
    ncad_decode, ncad_encode, tree_dist_decode, tree_dist_encode, tree_rout_decode, tree_rout_encode, HostTree,
};
use cfml::verify::{check_structure, label_stats, verify_routing_scheme};
use cfml::{PortedGraph, VertexId};

fn tree_spec() -> impl Strategy<Value = TreeSpec> {
    prop_oneof![
        (1usize..8).prop_map(TreeSpec::Path),
        (1usize..6).prop_map(TreeSpec::Star),
        (1usize..10, any::<u64>()).prop_map(|(n, seed)| TreeSpec::Random { n, seed }),
    ]
}

fn base_spec() -> impl Strategy<Value = GenSpec> {
    prop_oneof![
        (1usize..60, any::<u64>()).prop_map(|(n, seed)| GenSpec::Tree { n, seed }),
        (1usize..9, 1usize..9).prop_map(|(w, h)| GenSpec::Grid { w, h }),
        (tree_spec(), tree_spec()).prop_map(|(left, right)| GenSpec::TreeProduct { left, right }),
        (1usize..12, 1usize..12, any::<u64>()).prop_map(|(w, h, seed)| GenSpec::Staircase { w, h, seed }),
    ]
}

fn gen_spec() -> impl Strategy<Value = GenSpec> {
    prop_oneof![
        3 => base_spec(),
        1 => (base_spec(), 0usize..4, any::<u64>()).prop_map(|(b, rounds, seed)| GenSpec::ConvexSub {
            base: Box::new(b),
            rounds,
            seed,
        }),
    ]
}

fn exact(g: &PortedGraph) -> Result<(), TestCaseError> {
    let labels = dist_encode(g, &EncodeOptions::default()).unwrap();
    for u in 0..g.vertex_count() as VertexId {
        let d = bfs_distances(g, u);
        for v in 0..g.vertex_count() as VertexId {
            prop_assert_eq!(
                dist_decode(&labels[u as usize], &labels[v as usize]).unwrap(),
                d[v as usize]
            );
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_graphs_are_in_class_and_reproducible(spec in gen_spec()) {
        let g = spec.build().unwrap();
        prop_assert!(check_cube_free_median(&g, 1024).is_ok(), "{}", spec);
        prop_assert_eq!(g, spec.build().unwrap());
        prop_assert_eq!(spec.to_string().parse::<GenSpec>().unwrap(), spec);
    }

    #[test]
    fn distance_labels_are_exact(spec in gen_spec()) {
        exact(&spec.build().unwrap())?;
    }

    #[test]
    fn every_hop_makes_progress(spec in gen_spec()) {
        let g = spec.build().unwrap();
        let (_, rout) = encode_labels(&g, &EncodeOptions::default()).unwrap();
        prop_assert_eq!(verify_routing_scheme(&g, &rout).1, 0, "{}", spec);
        for l in &rout {
            prop_assert_eq!(rout_decode(l, l).unwrap(), 0);
        }
    }

    #[test]
    fn decomposition_facts_hold(spec in gen_spec()) {
        let g = spec.build().unwrap();
        let report = check_structure(&g).unwrap();
        prop_assert!(report.ok(), "{} {:?}", spec, report.checks);
    }

    #[test]
    fn label_bounds_hold(spec in gen_spec()) {
        let g = spec.build().unwrap();
        let n = g.vertex_count();
        let (dist, rout) = encode_labels(&g, &EncodeOptions::default()).unwrap();
        prop_assert!(label_stats(&dist).within_structural_bounds(n));
        prop_assert!(label_stats(&rout).within_structural_bounds(n));
    }

    #[test]
    fn distance_is_symmetric(spec in gen_spec()) {
        let g = spec.build().unwrap();
        let labels = dist_encode(&g, &EncodeOptions::default()).unwrap();
        for a in &labels {
            for b in &labels {
                prop_assert_eq!(dist_decode(a, b).unwrap(), dist_decode(b, a).unwrap());
            }
        }
    }

    #[test]
    fn tree_labels_match_bfs(n in 1usize..80, seed in any::<u64>()) {
        let g = cfml::generators::gen_tree(n, seed);
        let ids: Vec<VertexId> = (0..n as VertexId).collect();
        let tree = HostTree::induced(&g, &ids).unwrap();
        let dl = tree_dist_encode(&tree);
        let rl = tree_rout_encode(&tree);
        for u in 0..n as u32 {
            let d = bfs_distances(&g, tree.ids()[u as usize]);
            for v in 0..n as u32 {
                let (a, b) = (tree.ids()[u as usize], tree.ids()[v as usize]);
                prop_assert_eq!(tree_dist_decode(&dl[u as usize], &dl[v as usize]).unwrap(), d[b as usize]);
                let port = tree_rout_decode(&rl[u as usize], &rl[v as usize]).unwrap();
                if a == b {
                    prop_assert_eq!(port, 0);
                } else {
                    let next = g.neighbor_at(a, port).unwrap();
                    prop_assert_eq!(bfs_distances(&g, next)[b as usize] + 1, d[b as usize]);
                }
            }
        }
    }

    #[test]
    fn ancestor_depth_matches_parent_walk(parents in prop::collection::vec(any::<prop::sample::Index>(), 0..60)) {
        // Vertex i+1 hangs below some earlier vertex; vertex 0 is the root.
        let mut parent: Vec<Option<VertexId>> = vec![None];
        for (i, ix) in parents.iter().enumerate() {
            parent.push(Some(ix.index(i + 1) as VertexId));
        }
        let labels = ncad_encode(&parent).unwrap();
        let depth = |mut v: VertexId| {
            let mut d = 0;
            while let Some(p) = parent[v as usize] {
                v = p;
                d += 1;
            }
            d
        };
        let ancestors = |mut v: VertexId| {
            let mut out = vec![v];
            while let Some(p) = parent[v as usize] {
                v = p;
                out.push(p);
            }
            out
        };
        for u in 0..parent.len() as VertexId {
            let au = ancestors(u);
            for v in 0..parent.len() as VertexId {
                let common = ancestors(v).into_iter().find(|a| au.contains(a)).unwrap();
                prop_assert_eq!(ncad_decode(&labels[u as usize], &labels[v as usize]).unwrap(), depth(common));
            }
        }
    }
}
