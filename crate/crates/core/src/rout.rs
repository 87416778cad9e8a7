//! Routing labels: from the labels of the current vertex and the target
//! alone, the port of a neighbor one step closer to the target.

use crate::dist::{classify_gates, precheck, separating_level, shared_panel, slot_for, EncodeOptions, PairClass, Side};
use crate::error::{Error, Result};
use crate::graph::{PortId, PortedGraph, VertexId};
use crate::hierarchy::{self, Attachment, FiberKind, Level};
use crate::star::StarLabel;
use crate::tree::{
    tree_dist_decode, tree_dist_encode, tree_rout_decode, tree_rout_encode, TreeDistLabel, TreeRoutLabel,
};

/// An imprint (panel vertices) or a gate into a panel (cone vertices).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RoutSlot {
    pub panel: u32,
    pub dist_tree: TreeDistLabel,
    pub rout_tree: TreeRoutLabel,
    /// First hop toward the imprint or gate; 0 when the vertex is on the
    /// boundary itself (panel vertices only).
    pub port: PortId,
    pub dist: u32,
    /// Cone vertices: port from the gate to its neighbor inside the cone.
    /// Always 0 for panel vertices.
    pub twin_port: PortId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RoutLevel {
    pub centroid: VertexId,
    pub port_to_centroid: PortId,
    pub port_from_centroid: PortId,
    pub gate: StarLabel,
    pub dist: u32,
    pub slots: Option<[RoutSlot; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RoutLabel {
    pub id: VertexId,
    pub ncad: TreeDistLabel,
    pub levels: Vec<RoutLevel>,
}

fn slots(r: &RoutLevel) -> Result<&[RoutSlot; 2]> {
    r.slots
        .as_ref()
        .ok_or_else(|| Error::Format("record has no slots".into()))
}

/// The centroid lies on a shortest path: move toward it, or away from it
/// when standing on it.
pub fn routing_separated(ru: &RoutLevel, rv: &RoutLevel, id_u: VertexId) -> PortId {
    if rv.centroid == id_u {
        rv.port_from_centroid
    } else {
        ru.port_to_centroid
    }
}

/// From a cone vertex toward its gate in `panel` (the target's panel, or
/// the panel shared with the target's cone).
pub fn routing_cone_to_panel(ru: &RoutLevel, panel: u32) -> Result<PortId> {
    Ok(slot_for(slots(ru)?, panel, |s| s.panel)?.port)
}

/// From a panel vertex toward a vertex of a neighboring cone.
pub fn routing_panel_to_cone(ru: &RoutLevel, rv: &RoutLevel) -> Result<PortId> {
    let pid = ru.gate.first().ok_or(Error::SlotMismatch { panel: 0 })?;
    let target = slot_for(slots(rv)?, pid, |s| s.panel)?;
    let own = slots(ru)?;
    if own[0].port == 0 {
        // On the boundary: step into the cone at the target's gate, else
        // walk the boundary tree toward it.
        let here = own[0].rout_tree.entries.last().map(|e| e.sep);
        let gate = target.rout_tree.entries.last().map(|e| e.sep);
        if here.is_some() && here == gate {
            return Ok(target.twin_port);
        }
        return tree_rout_decode(&own[0].rout_tree, &target.rout_tree);
    }
    let mut best = (u32::MAX, 0);
    for s in own {
        let total = s.dist + tree_dist_decode(&s.dist_tree, &target.dist_tree)?;
        if total < best.0 {
            best = (total, s.port);
        }
    }
    Ok(best.1)
}

/// Port of `lu`'s owner leading one step closer to `lv`'s owner; 0 if
/// they coincide.
pub fn rout_decode(lu: &RoutLabel, lv: &RoutLabel) -> Result<PortId> {
    if lu.id == lv.id {
        return Ok(0);
    }
    let k = separating_level(
        lu.id,
        &lu.ncad,
        |i| lu.levels.get(i).map(|r| r.centroid),
        &lv.ncad,
        |i| lv.levels.get(i).map(|r| r.centroid),
    )?;
    let (ru, rv) = (&lu.levels[k], &lv.levels[k]);
    match classify_gates(ru.gate, rv.gate) {
        PairClass::Separated => Ok(routing_separated(ru, rv, lu.id)),
        PairClass::OneNeighboring(Side::V) => {
            let pid = rv.gate.first().expect("panel gate");
            routing_cone_to_panel(ru, pid)
        }
        PairClass::TwoNeighboring => routing_cone_to_panel(ru, shared_panel(ru.gate, rv.gate)?),
        PairClass::OneNeighboring(Side::U) => routing_panel_to_cone(ru, rv),
        PairClass::Roommates => Err(Error::ForeignLabel),
    }
}

/// The routing records of all scope vertices at one level.
pub(crate) fn level_records(level: &Level) -> Vec<RoutLevel> {
    let scope = &level.scope;
    let trees: Vec<(Vec<TreeDistLabel>, Vec<TreeRoutLabel>)> = level
        .boundary_trees
        .iter()
        .enumerate()
        .map(|(x, t)| match (t, level.star.kind(x as u32)) {
            (Some(t), FiberKind::Panel) => (tree_dist_encode(t), tree_rout_encode(t)),
            _ => (Vec::new(), Vec::new()),
        })
        .collect();
    let tree_labels = |panel: u32, v: u32| {
        let pos = level.tree_pos[v as usize] as usize;
        let (d, r) = &trees[panel as usize];
        (d[pos].clone(), r[pos].clone())
    };
    let c = level.star.center;
    (0..scope.len() as u32)
        .map(|u| {
            let link = level.link[u as usize];
            let slots = match level.attach[u as usize] {
                Attachment::Center => None,
                Attachment::Panel(imprints) => {
                    let x = level.fiber_of(u);
                    Some(imprints.map(|i| {
                        let (dist_tree, rout_tree) = tree_labels(x, i.vertex);
                        RoutSlot {
                            panel: level.panel_id(x),
                            dist_tree,
                            rout_tree,
                            port: if i.dist == 0 { 0 } else { scope.port(u, i.hop) },
                            dist: i.dist,
                            twin_port: 0,
                        }
                    }))
                }
                Attachment::Cone(gates) => Some(gates.map(|g| {
                    let (dist_tree, rout_tree) = tree_labels(g.panel, g.gate);
                    RoutSlot {
                        panel: level.panel_id(g.panel),
                        dist_tree,
                        rout_tree,
                        port: scope.port(u, g.hop),
                        dist: g.dist,
                        twin_port: scope.port(g.gate, g.twin),
                    }
                })),
            };
            RoutLevel {
                centroid: level.centroid(),
                port_to_centroid: if u == c { 0 } else { scope.port(u, link.toward) },
                port_from_centroid: if u == c { 0 } else { scope.port(c, link.from) },
                gate: level.gate_label(u),
                dist: link.dist,
                slots,
            }
        })
        .collect()
}

/// Routing labels for every vertex of `g`, indexed by vertex id.
pub fn rout_encode(g: &PortedGraph, opts: &EncodeOptions) -> Result<Vec<RoutLabel>> {
    Ok(encode_both(g, opts, false, true)?.1)
}

/// Distance and routing labels from a single decomposition.
pub fn encode_labels(g: &PortedGraph, opts: &EncodeOptions) -> Result<(Vec<crate::dist::DistLabel>, Vec<RoutLabel>)> {
    encode_both(g, opts, true, true)
}

fn encode_both(
    g: &PortedGraph,
    opts: &EncodeOptions,
    want_dist: bool,
    want_rout: bool,
) -> Result<(Vec<crate::dist::DistLabel>, Vec<RoutLabel>)> {
    precheck(g, opts)?;
    let n = g.vertex_count();
    let mut dist_levels = vec![Vec::new(); if want_dist { n } else { 0 }];
    let mut rout_levels = vec![Vec::new(); if want_rout { n } else { 0 }];
    let tree = hierarchy::decompose(g, |level| {
        if want_dist {
            for (u, rec) in crate::dist::level_records(level).into_iter().enumerate() {
                dist_levels[level.scope.id(u as u32) as usize].push(rec);
            }
        }
        if want_rout {
            for (u, rec) in level_records(level).into_iter().enumerate() {
                rout_levels[level.scope.id(u as u32) as usize].push(rec);
            }
        }
        Ok(())
    })?;
    let ncad = crate::dist::attach_ncad(&tree)?;
    let dist = dist_levels
        .into_iter()
        .zip(ncad.iter().cloned())
        .enumerate()
        .map(|(v, (levels, ncad))| crate::dist::DistLabel {
            id: v as VertexId,
            ncad,
            levels,
        })
        .collect();
    let rout = rout_levels
        .into_iter()
        .zip(ncad)
        .enumerate()
        .map(|(v, (levels, ncad))| RoutLabel {
            id: v as VertexId,
            ncad,
            levels,
        })
        .collect();
    Ok((dist, rout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_grid, gen_tree_product, path_tree, star_tree};
    use crate::graph::bfs_distances;

    fn walks_ok(g: &PortedGraph) {
        let labels = rout_encode(g, &EncodeOptions::default()).unwrap();
        let n = g.vertex_count() as VertexId;
        for t in 0..n {
            let dt = bfs_distances(g, t);
            for s in 0..n {
                let mut at = s;
                while at != t {
                    let p = rout_decode(&labels[at as usize], &labels[t as usize]).unwrap();
                    let next = g
                        .neighbor_at(at, p)
                        .unwrap_or_else(|| panic!("bad port {p} at {at} toward {t}"));
                    assert_eq!(dt[next as usize] + 1, dt[at as usize], "hop {at}->{next} toward {t}");
                    at = next;
                }
                assert_eq!(rout_decode(&labels[t as usize], &labels[t as usize]).unwrap(), 0);
            }
        }
    }

    #[test]
    fn path_record() {
        let g = path_tree(5);
        let labels = rout_encode(&g, &EncodeOptions::default()).unwrap();
        assert!(labels[0].levels[0].port_to_centroid == g.port(0, 1).unwrap());
        assert_eq!(rout_decode(&labels[0], &labels[4]).unwrap(), g.port(0, 1).unwrap());
    }

    #[test]
    fn grid_twin_port() {
        let g = gen_grid(3, 3);
        let labels = rout_encode(&g, &EncodeOptions::default()).unwrap();
        let rec = &labels[0].levels[0];
        let panel_of_3 = labels[3].levels[0].gate.first().unwrap();
        let slot = rec
            .slots
            .as_ref()
            .unwrap()
            .iter()
            .find(|s| s.panel == panel_of_3)
            .unwrap();
        assert_eq!(slot.twin_port, g.port(3, 0).unwrap());
        assert_eq!(rout_decode(&labels[3], &labels[0]).unwrap(), g.port(3, 0).unwrap());
    }

    #[test]
    fn shortest_walks_on_small_graphs() {
        walks_ok(&path_tree(6));
        walks_ok(&gen_grid(3, 3));
        walks_ok(&gen_grid(7, 4));
        walks_ok(&gen_tree_product(&star_tree(3), &path_tree(3)));
        walks_ok(&gen_tree_product(&star_tree(3), &star_tree(5)));
    }

    #[test]
    fn both_encoders_agree() {
        let g = gen_grid(5, 4);
        let (d, r) = encode_labels(&g, &EncodeOptions::default()).unwrap();
        assert_eq!(d, crate::dist::dist_encode(&g, &EncodeOptions::default()).unwrap());
        assert_eq!(r, rout_encode(&g, &EncodeOptions::default()).unwrap());
    }
}
