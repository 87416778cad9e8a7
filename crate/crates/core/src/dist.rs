//! Distance labels for cube-free median graphs and their decoder.
//!
//! A label holds one record per decomposition level containing the vertex.
//! At the level where two vertices are separated (found through the
//! nearest-common-ancestor depth of the recursion tree) the records decide
//! between three cases: the centroid lies between them, one of them sits in
//! a panel next to the other's cone, or both sit in cones sharing a panel.

use crate::error::{Error, Result};
use crate::graph::{PortedGraph, VertexId};
use crate::hierarchy::{self, Attachment, Level, RecursionTree};
use crate::recognize::{check_cube_free_median, DEFAULT_CHECK_BOUND};
use crate::star::{star_dist, StarLabel};
use crate::tree::{ncad_decode, ncad_encode, tree_dist_decode, tree_dist_encode, TreeDistLabel};

/// A boundary-tree position with its distance: an imprint for panel
/// vertices, a gate into a neighboring panel for cone vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DistSlot {
    /// Label value of the panel whose total boundary holds `tree`.
    pub panel: u32,
    pub tree: TreeDistLabel,
    pub dist: u32,
}

/// The record of one vertex at one decomposition level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistLevel {
    pub centroid: VertexId,
    pub dist: u32,
    /// Star label of the vertex's gate in the star of the centroid.
    pub gate: StarLabel,
    /// Absent at the centroid; otherwise the 1st and 2nd slot.
    pub slots: Option<[DistSlot; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistLabel {
    pub id: VertexId,
    /// Depth-augmented label on the recursion tree.
    pub ncad: TreeDistLabel,
    /// Records outermost level first.
    pub levels: Vec<DistLevel>,
}

/// Which vertex of a pair lies in the panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    U,
    V,
}

/// Relative position of two vertices at the level that separates them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    /// Same fiber; never the case at the separating level.
    Roommates,
    /// The centroid lies on a shortest path.
    Separated,
    /// A panel next to a cone.
    OneNeighboring(Side),
    /// Two cones sharing a panel.
    TwoNeighboring,
}

/// Options for the encoders.
#[derive(Clone, Copy, Debug)]
pub struct EncodeOptions {
    /// Skip the exhaustive class check (the construction still rejects
    /// inputs whose structure it cannot handle).
    pub skip_check: bool,
    pub check_bound: usize,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        Self {
            skip_check: false,
            check_bound: DEFAULT_CHECK_BOUND,
        }
    }
}

pub(crate) fn precheck(g: &PortedGraph, opts: &EncodeOptions) -> Result<()> {
    if opts.skip_check {
        return Ok(());
    }
    check_cube_free_median(g, opts.check_bound)
}

/// Classifies a pair from the gate labels of its two records.
pub fn classify_gates(gu: StarLabel, gv: StarLabel) -> PairClass {
    let (d, du, dv) = (star_dist(gu, gv), gu.len(), gv.len());
    if d == 0 {
        PairClass::Roommates
    } else if du == 0 || dv == 0 {
        PairClass::Separated
    } else if d == 1 && du == 1 {
        PairClass::OneNeighboring(Side::U)
    } else if d == 1 && dv == 1 {
        PairClass::OneNeighboring(Side::V)
    } else if d == 2 && du == 2 && dv == 2 {
        PairClass::TwoNeighboring
    } else {
        PairClass::Separated
    }
}

pub fn classify_pair(ru: &DistLevel, rv: &DistLevel) -> PairClass {
    classify_gates(ru.gate, rv.gate)
}

pub fn distance_separated(ru: &DistLevel, rv: &DistLevel) -> u32 {
    ru.dist + rv.dist
}

fn slots(r: &DistLevel) -> Result<&[DistSlot; 2]> {
    r.slots
        .as_ref()
        .ok_or_else(|| Error::Format("record has no slots".into()))
}

/// The slot of a cone record naming `panel`.
pub(crate) fn slot_for<S>(slots: &[S; 2], panel: u32, id: impl Fn(&S) -> u32) -> Result<&S> {
    slots
        .iter()
        .find(|s| id(s) == panel)
        .ok_or(Error::SlotMismatch { panel })
}

/// The panel value shared by two cone gate labels.
pub(crate) fn shared_panel(a: StarLabel, b: StarLabel) -> Result<u32> {
    a.iter()
        .find(|&x| b.contains(x))
        .ok_or_else(|| Error::Format("cone labels share no panel".into()))
}

/// Distance between a panel vertex and a vertex of a neighboring cone:
/// the best imprint route to the cone vertex's gate in the panel.
pub fn distance_one_neighboring(panel: &DistLevel, cone: &DistLevel) -> Result<u32> {
    let pid = panel.gate.first().ok_or(Error::SlotMismatch { panel: 0 })?;
    let gate = slot_for(slots(cone)?, pid, |s| s.panel)?;
    let mut best = u32::MAX;
    for imprint in slots(panel)? {
        best = best.min(imprint.dist + tree_dist_decode(&imprint.tree, &gate.tree)?);
    }
    Ok(best + gate.dist)
}

/// Distance between two cone vertices whose cones share a panel: through
/// their gates in that panel.
pub fn distance_two_neighboring(ru: &DistLevel, rv: &DistLevel) -> Result<u32> {
    let pid = shared_panel(ru.gate, rv.gate)?;
    let a = slot_for(slots(ru)?, pid, |s| s.panel)?;
    let b = slot_for(slots(rv)?, pid, |s| s.panel)?;
    Ok(a.dist + tree_dist_decode(&a.tree, &b.tree)? + b.dist)
}

/// Index of the level separating the two label owners.
pub(crate) fn separating_level(
    id_u: VertexId,
    ncad_u: &TreeDistLabel,
    centroids_u: impl Fn(usize) -> Option<VertexId>,
    ncad_v: &TreeDistLabel,
    centroids_v: impl Fn(usize) -> Option<VertexId>,
) -> Result<usize> {
    let k = ncad_decode(ncad_u, ncad_v)? as usize;
    match (centroids_u(k), centroids_v(k)) {
        (Some(a), Some(b)) if a == b => {}
        _ => return Err(Error::ForeignLabel),
    }
    debug_assert_eq!(
        (0..=k)
            .rev()
            .find(|&i| centroids_u(i).is_some() && centroids_u(i) == centroids_v(i)),
        Some(k),
        "scan and ancestor depth disagree for {id_u}"
    );
    Ok(k)
}

/// Exact distance between the owners of two labels.
pub fn dist_decode(lu: &DistLabel, lv: &DistLabel) -> Result<u32> {
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
    match classify_pair(ru, rv) {
        PairClass::Separated => Ok(distance_separated(ru, rv)),
        PairClass::OneNeighboring(Side::U) => distance_one_neighboring(ru, rv),
        PairClass::OneNeighboring(Side::V) => distance_one_neighboring(rv, ru),
        PairClass::TwoNeighboring => distance_two_neighboring(ru, rv),
        PairClass::Roommates => Err(Error::ForeignLabel),
    }
}

/// Tree labels of every panel's total boundary at one level.
pub(crate) fn panel_tree_labels(level: &Level) -> Vec<Vec<TreeDistLabel>> {
    level
        .boundary_trees
        .iter()
        .enumerate()
        .map(|(x, t)| match (t, level.star.kind(x as u32)) {
            (Some(t), hierarchy::FiberKind::Panel) => tree_dist_encode(t),
            _ => Vec::new(),
        })
        .collect()
}

/// The records of all scope vertices at one level, by local index.
pub(crate) fn level_records(level: &Level) -> Vec<DistLevel> {
    let trees = panel_tree_labels(level);
    let tree_label = |panel: u32, v: u32| trees[panel as usize][level.tree_pos[v as usize] as usize].clone();
    (0..level.scope.len() as u32)
        .map(|u| {
            let slots = match level.attach[u as usize] {
                Attachment::Center => None,
                Attachment::Panel(imprints) => {
                    let x = level.fiber_of(u);
                    Some(imprints.map(|i| DistSlot {
                        panel: level.panel_id(x),
                        tree: tree_label(x, i.vertex),
                        dist: i.dist,
                    }))
                }
                Attachment::Cone(gates) => Some(gates.map(|g| DistSlot {
                    panel: level.panel_id(g.panel),
                    tree: tree_label(g.panel, g.gate),
                    dist: g.dist,
                })),
            };
            DistLevel {
                centroid: level.centroid(),
                dist: level.link[u as usize].dist,
                gate: level.gate_label(u),
                slots,
            }
        })
        .collect()
}

pub(crate) fn attach_ncad(tree: &RecursionTree) -> Result<Vec<TreeDistLabel>> {
    ncad_encode(&tree.parent)
}

/// Distance labels for every vertex of `g`, indexed by vertex id.
pub fn dist_encode(g: &PortedGraph, opts: &EncodeOptions) -> Result<Vec<DistLabel>> {
    precheck(g, opts)?;
    let n = g.vertex_count();
    let mut levels: Vec<Vec<DistLevel>> = vec![Vec::new(); n];
    let tree = hierarchy::decompose(g, |level| {
        for (u, rec) in level_records(level).into_iter().enumerate() {
            levels[level.scope.id(u as u32) as usize].push(rec);
        }
        Ok(())
    })?;
    let ncad = attach_ncad(&tree)?;
    Ok(levels
        .into_iter()
        .zip(ncad)
        .enumerate()
        .map(|(v, (levels, ncad))| DistLabel {
            id: v as VertexId,
            ncad,
            levels,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_grid, gen_tree_product, path_tree, star_tree};
    use crate::graph::bfs_distances;

    fn all_pairs_ok(g: &PortedGraph) {
        let labels = dist_encode(g, &EncodeOptions::default()).unwrap();
        for u in 0..g.vertex_count() as VertexId {
            let d = bfs_distances(g, u);
            for v in 0..g.vertex_count() as VertexId {
                assert_eq!(
                    dist_decode(&labels[u as usize], &labels[v as usize]).unwrap(),
                    d[v as usize],
                    "pair ({u}, {v})"
                );
            }
        }
    }

    #[test]
    fn single_vertex() {
        let labels = dist_encode(&path_tree(1), &EncodeOptions::default()).unwrap();
        assert!(labels[0].levels.is_empty());
        assert_eq!(dist_decode(&labels[0], &labels[0]).unwrap(), 0);
    }

    #[test]
    fn path_record() {
        let labels = dist_encode(&path_tree(5), &EncodeOptions::default()).unwrap();
        let r = &labels[0].levels[0];
        assert_eq!((r.centroid, r.dist, r.gate), (2, 2, StarLabel::single(1)));
        let slots = r.slots.as_ref().unwrap();
        for s in slots {
            assert_eq!(s.tree.entries.last().unwrap().0, 1);
            assert_eq!(s.dist, 1);
        }
        assert_eq!(dist_decode(&labels[0], &labels[4]).unwrap(), 4);
    }

    #[test]
    fn grid_levels() {
        let labels = dist_encode(&gen_grid(3, 3), &EncodeOptions::default()).unwrap();
        assert!(labels.iter().all(|l| l.levels.len() == 1));
        let r = |v: usize| &labels[v].levels[0];
        assert_eq!(classify_pair(r(3), r(0)), PairClass::OneNeighboring(Side::U));
        assert_eq!(distance_one_neighboring(r(3), r(0)).unwrap(), 1);
        assert_eq!(classify_pair(r(0), r(2)), PairClass::TwoNeighboring);
        assert_eq!(distance_two_neighboring(r(0), r(2)).unwrap(), 2);
        assert_eq!(classify_pair(r(0), r(8)), PairClass::Separated);
    }

    #[test]
    fn classification_examples() {
        let (a, ab, bc, cd) = (
            StarLabel::single(1),
            StarLabel::pair(1, 2),
            StarLabel::pair(2, 3),
            StarLabel::pair(3, 4),
        );
        assert_eq!(classify_gates(a, ab), PairClass::OneNeighboring(Side::U));
        assert_eq!(classify_gates(ab, bc), PairClass::TwoNeighboring);
        assert_eq!(classify_gates(ab, cd), PairClass::Separated);
        assert_eq!(classify_gates(StarLabel::EMPTY, a), PairClass::Separated);
    }

    #[test]
    fn exact_on_small_graphs() {
        all_pairs_ok(&path_tree(7));
        all_pairs_ok(&gen_grid(3, 3));
        all_pairs_ok(&gen_grid(6, 5));
        all_pairs_ok(&gen_tree_product(&star_tree(3), &path_tree(3)));
        all_pairs_ok(&gen_tree_product(&star_tree(3), &star_tree(5)));
    }
}
