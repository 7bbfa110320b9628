//! Tree-coforest decompositions, co-path systems, and the cycle / homology
//! signatures built from them.
//!
//! A decomposition partitions the edges into a spanning tree `T`, a dual
//! spanning coforest `C` (one component per boundary face, each anchored at
//! its boundary dual vertex), and `beta` leftover edges `L`. Each leftover
//! edge closes a unique simple co-cycle or boundary-to-boundary co-path in
//! `C`, and each interior face gets the co-path to its component's boundary
//! vertex; intersection parities against these co-paths are the signature
//! bits. Signatures identify cycles exactly and homology classes by their
//! `beta`-bit prefix.

use thiserror::Error;

use crate::embed::{EdgeId, EmbeddedGraph, FaceId};
use crate::gf2::{BitMatrix, BitVec};
use crate::shortest::{dijkstra, SpTree};

#[derive(Debug, Error, PartialEq)]
pub enum DecomposeError {
    #[error("tree-coforest decomposition needs at least one boundary face")]
    NoBoundary,
}

/// Partition of the edge set into spanning tree, dual spanning coforest,
/// and leftover edges.
#[derive(Clone, Debug)]
pub struct TreeCoforest {
    /// Shortest-path tree from vertex 0 under the deterministic tie-break;
    /// doubling as the greedy tree for the homology path system.
    pub tree: SpTree,
    pub tree_edges: Vec<EdgeId>,
    pub coforest_edges: Vec<EdgeId>,
    /// `e_1 ... e_beta`, ascending by id. Their order fixes signature bits.
    pub leftover_edges: Vec<EdgeId>,
    /// Per dual vertex (face): the coforest edge toward the component root
    /// and the next face on that path, or `None` at boundary roots.
    pub dual_parent: Vec<Option<(EdgeId, FaceId)>>,
    /// Per face, the boundary face anchoring its coforest component.
    pub dual_root: Vec<FaceId>,
}

impl TreeCoforest {
    pub fn beta(&self) -> usize {
        self.leftover_edges.len()
    }

    /// Edge set of the fundamental cycle of a leftover or other non-tree
    /// edge: the tree path between its endpoints plus the edge itself.
    pub fn fundamental_cycle(&self, g: &EmbeddedGraph, e: EdgeId) -> Vec<EdgeId> {
        let rec = g.edge(e);
        let mut on_path = vec![0u8; g.edge_count()];
        for &pe in &self.tree.path_edges(rec.u) {
            on_path[pe as usize] ^= 1;
        }
        for &pe in &self.tree.path_edges(rec.v) {
            on_path[pe as usize] ^= 1;
        }
        on_path[e as usize] ^= 1;
        (0..g.edge_count() as EdgeId).filter(|&i| on_path[i as usize] == 1).collect()
    }
}

/// Builds a tree-coforest decomposition. The spanning tree is the
/// shortest-path tree of vertex 0; the coforest grows breadth-first in the
/// dual from all boundary dual vertices at once, never joining two
/// boundary-rooted components, over edges not in the tree.
pub fn tree_coforest(g: &EmbeddedGraph) -> Result<TreeCoforest, DecomposeError> {
    let boundary = g.boundary_faces();
    if boundary.is_empty() {
        return Err(DecomposeError::NoBoundary);
    }
    let m = g.edge_count();
    let tree = dijkstra(g, 0);
    let mut in_tree = vec![false; m];
    for p in tree.parent.iter().flatten() {
        in_tree[p.0 as usize] = true;
    }

    let dual = g.dual();
    let n_faces = dual.vertex_count;
    let mut dual_adj: Vec<Vec<(EdgeId, FaceId)>> = vec![Vec::new(); n_faces];
    for e in 0..m as u32 {
        if in_tree[e as usize] {
            continue;
        }
        let (a, b) = dual.ends[e as usize];
        dual_adj[a].push((e, b));
        if a != b {
            dual_adj[b].push((e, a));
        }
    }

    let mut dual_parent: Vec<Option<(EdgeId, FaceId)>> = vec![None; n_faces];
    let mut dual_root: Vec<Option<FaceId>> = vec![None; n_faces];
    let mut in_coforest = vec![false; m];
    let mut queue = std::collections::VecDeque::new();
    for &b in &boundary {
        dual_root[b] = Some(b);
        queue.push_back(b);
    }
    while let Some(f) = queue.pop_front() {
        for &(e, to) in &dual_adj[f] {
            if dual_root[to].is_none() {
                dual_root[to] = dual_root[f];
                dual_parent[to] = Some((e, f));
                in_coforest[e as usize] = true;
                queue.push_back(to);
            }
        }
    }
    debug_assert!(
        dual_root.iter().all(Option::is_some),
        "the dual restricted to non-tree edges is connected to a boundary"
    );

    let tree_edges: Vec<EdgeId> = (0..m as u32).filter(|&e| in_tree[e as usize]).collect();
    let coforest_edges: Vec<EdgeId> = (0..m as u32).filter(|&e| in_coforest[e as usize]).collect();
    let leftover_edges: Vec<EdgeId> = (0..m as u32)
        .filter(|&e| !in_tree[e as usize] && !in_coforest[e as usize])
        .collect();
    debug_assert_eq!(leftover_edges.len(), g.stats().beta, "Euler forces |L| = beta");

    Ok(TreeCoforest {
        tree,
        tree_edges,
        coforest_edges,
        leftover_edges,
        dual_parent,
        dual_root: dual_root.into_iter().map(Option::unwrap).collect(),
    })
}

/// The ordered co-paths `p_1 ... p_{m-n+1}` with the face ordering frozen,
/// plus the per-edge signature matrix.
#[derive(Clone, Debug)]
pub struct CoPathSystem {
    pub beta: usize,
    /// Cycle-space dimension `m - n + 1`; the cycle signature length.
    pub dim: usize,
    /// Each co-path as a sorted edge-id set.
    pub copaths: Vec<Vec<EdgeId>>,
    /// Interior faces in trace-discovery order: `faces_ordered[k]` carries
    /// signature bit `beta + k`.
    pub faces_ordered: Vec<FaceId>,
    /// FaceId -> signature bit index (`>= beta`), `None` for boundary faces.
    pub face_bit: Vec<Option<usize>>,
    /// `m x dim`; row `e` is the cycle signature of edge `e`.
    pub edge_sigs: BitMatrix,
}

impl CoPathSystem {
    /// Cycle signature of an edge set: XOR of member edge signatures.
    pub fn cycle_signature<I: IntoIterator<Item = EdgeId>>(&self, edges: I) -> BitVec {
        let mut sig = BitVec::zeros(self.dim);
        for e in edges {
            sig.xor_assign(self.edge_sigs.row(e as usize));
        }
        sig
    }

    /// Homology signature: the length-`beta` prefix of the cycle signature.
    pub fn homology_signature<I: IntoIterator<Item = EdgeId>>(&self, edges: I) -> BitVec {
        self.cycle_signature(edges).prefix(self.beta)
    }

    pub fn edge_signature(&self, e: EdgeId) -> &BitVec {
        self.edge_sigs.row(e as usize)
    }

    pub fn edge_homology_signature(&self, e: EdgeId) -> BitVec {
        self.edge_sigs.row(e as usize).prefix(self.beta)
    }
}

/// Builds the co-path system of a decomposition.
pub fn copaths(g: &EmbeddedGraph, d: &TreeCoforest) -> CoPathSystem {
    let m = g.edge_count();
    let dim = g.cycle_space_dim();
    let beta = d.beta();
    let dual = g.dual();
    let mut copaths: Vec<Vec<EdgeId>> = Vec::with_capacity(dim);

    // Edge multiset XOR of the coforest path from face `f` to its root.
    let root_path = |f: FaceId| -> Vec<EdgeId> {
        let mut acc: Vec<EdgeId> = Vec::new();
        let mut cur = f;
        while let Some((e, up)) = d.dual_parent[cur] {
            acc.push(e);
            cur = up;
        }
        acc
    };

    for &e in &d.leftover_edges {
        let (fa, fb) = dual.ends[e as usize];
        let mut parity = vec![0u8; m];
        parity[e as usize] ^= 1;
        for pe in root_path(fa) {
            parity[pe as usize] ^= 1;
        }
        for pe in root_path(fb) {
            parity[pe as usize] ^= 1;
        }
        // Same component: the shared tail to the root cancels, leaving the
        // unique simple co-cycle through e. Different components: nothing
        // cancels and this is the boundary-to-boundary co-path through e.
        let path: Vec<EdgeId> = (0..m as u32).filter(|&i| parity[i as usize] == 1).collect();
        copaths.push(path);
    }

    let mut faces_ordered = Vec::new();
    let mut face_bit = vec![None; g.faces().len()];
    for f in 0..g.faces().len() {
        if g.face(f).is_boundary {
            continue;
        }
        face_bit[f] = Some(beta + faces_ordered.len());
        faces_ordered.push(f);
        let mut path = root_path(f);
        path.sort_unstable();
        // Coforest paths are simple: no duplicate edges to cancel.
        debug_assert!(path.windows(2).all(|w| w[0] != w[1]));
        copaths.push(path);
    }
    debug_assert_eq!(copaths.len(), dim, "co-path count must equal m - n + 1");

    let mut edge_sigs = BitMatrix::zeros(m, dim);
    for (i, path) in copaths.iter().enumerate() {
        for &e in path {
            edge_sigs.set(e as usize, i, true);
        }
    }

    CoPathSystem { beta, dim, copaths, faces_ordered, face_bit, edge_sigs }
}

/// Rebuilds the unique cycle with cycle signature `w`: the XOR of the
/// fundamental cycles of the leftover edges selected by the first `beta`
/// bits and the face boundaries selected by the rest.
pub fn reconstruct_cycle(
    w: &BitVec,
    g: &EmbeddedGraph,
    d: &TreeCoforest,
    cp: &CoPathSystem,
) -> Vec<EdgeId> {
    assert_eq!(w.len(), cp.dim, "signature length must be m - n + 1");
    let mut parity = vec![0u8; g.edge_count()];
    for i in 0..cp.beta {
        if w.get(i) {
            for e in d.fundamental_cycle(g, d.leftover_edges[i]) {
                parity[e as usize] ^= 1;
            }
        }
    }
    for (k, &f) in cp.faces_ordered.iter().enumerate() {
        if w.get(cp.beta + k) {
            for e in g.face(f).boundary_edges() {
                parity[e as usize] ^= 1;
            }
        }
    }
    (0..g.edge_count() as EdgeId).filter(|&e| parity[e as usize] == 1).collect()
}

/// Boundary of a face subset, as a sorted edge set.
pub fn boundary_of_faces(g: &EmbeddedGraph, faces: &[FaceId]) -> Vec<EdgeId> {
    let mut parity = vec![0u8; g.edge_count()];
    for &f in faces {
        for e in g.face(f).boundary_edges() {
            parity[e as usize] ^= 1;
        }
    }
    (0..g.edge_count() as EdgeId).filter(|&e| parity[e as usize] == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::gf2::RowSpace;

    fn punctured_torus() -> EmbeddedGraph {
        gen::torus1().unwrap().puncture(0)
    }

    #[test]
    fn theta_decomposition_counts() {
        let g = gen::theta().unwrap();
        let d = tree_coforest(&g).unwrap();
        assert_eq!(d.tree_edges.len(), 1);
        assert_eq!(d.coforest_edges.len(), 2);
        assert_eq!(d.leftover_edges.len(), 0);
    }

    #[test]
    fn punctured_torus_decomposition_counts() {
        let g = punctured_torus();
        let d = tree_coforest(&g).unwrap();
        assert_eq!(d.tree_edges.len(), 0);
        assert_eq!(d.coforest_edges.len(), 0);
        assert_eq!(d.leftover_edges, vec![0, 1]);
    }

    #[test]
    fn k4_decomposition_counts() {
        let g = gen::k4_sphere().unwrap();
        let d = tree_coforest(&g).unwrap();
        assert_eq!(d.tree_edges.len(), 3);
        assert_eq!(d.coforest_edges.len(), 3);
        assert_eq!(d.leftover_edges.len(), 0);
    }

    #[test]
    fn closed_surface_needs_puncturing() {
        let g = gen::torus1().unwrap();
        assert_eq!(tree_coforest(&g).unwrap_err(), DecomposeError::NoBoundary);
    }

    #[test]
    fn coforest_components_anchor_at_boundaries() {
        for g in [gen::theta().unwrap(), gen::annulus_theta().unwrap(), gen::k4_sphere().unwrap()] {
            let d = tree_coforest(&g).unwrap();
            for f in 0..g.faces().len() {
                let root = d.dual_root[f];
                assert!(g.face(root).is_boundary);
                if g.face(f).is_boundary {
                    assert_eq!(root, f, "boundary faces root their own component");
                }
            }
        }
    }

    #[test]
    fn torus_copaths_are_the_two_dual_loops() {
        let g = punctured_torus();
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        assert_eq!(cp.beta, 2);
        assert_eq!(cp.dim, 2);
        assert_eq!(cp.copaths, vec![vec![0], vec![1]]);
        assert!(cp.faces_ordered.is_empty());
    }

    #[test]
    fn k4_copaths_run_from_interior_faces_to_boundary() {
        let g = gen::k4_sphere().unwrap();
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        assert_eq!(cp.beta, 0);
        assert_eq!(cp.dim, 3);
        assert_eq!(cp.faces_ordered.len(), 3);
        for (k, &f) in cp.faces_ordered.iter().enumerate() {
            // Terminal crossing: the path's last edge leaves face f.
            let path = &cp.copaths[k];
            assert!(!path.is_empty());
            let touches = path.iter().any(|&e| {
                let (a, b) = g.faces_of_edge(e);
                a == f || b == f
            });
            assert!(touches, "co-path must start at its face");
        }
    }

    #[test]
    fn theta_copaths_reach_the_boundary_face() {
        let g = gen::theta().unwrap();
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        assert_eq!(cp.dim, 2);
        assert_eq!(cp.faces_ordered.len(), 2);
        for path in &cp.copaths {
            assert!(!path.is_empty());
        }
    }

    #[test]
    fn empty_edge_set_has_zero_signature() {
        let g = gen::k4_sphere().unwrap();
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        assert!(cp.cycle_signature([]).is_zero());
    }

    #[test]
    fn face_boundary_has_unit_cycle_signature() {
        let g = gen::k4_sphere().unwrap();
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        for (k, &f) in cp.faces_ordered.iter().enumerate() {
            let sig = cp.cycle_signature(g.face(f).boundary_edges());
            let expect = BitVec::unit(cp.dim, cp.beta + k);
            assert_eq!(sig, expect, "face boundary must flip exactly its own bit");
        }
    }

    #[test]
    fn signature_is_additive_under_symmetric_difference() {
        let g = gen::torus_grid(3).unwrap().puncture(8);
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        // Two face boundaries and their XOR.
        let a = g.face(0).boundary_edges();
        let b = g.face(3).boundary_edges();
        let mut parity = vec![0u8; g.edge_count()];
        for &e in a.iter().chain(&b) {
            parity[e as usize] ^= 1;
        }
        let ab: Vec<EdgeId> = (0..g.edge_count() as u32).filter(|&e| parity[e as usize] == 1).collect();
        assert_eq!(
            cp.cycle_signature(ab),
            cp.cycle_signature(a).xor(&cp.cycle_signature(b))
        );
    }

    #[test]
    fn torus_loop_homology_signatures() {
        let g = punctured_torus();
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        let hx = cp.homology_signature([0u32]);
        let hy = cp.homology_signature([1u32]);
        assert!(!hx.is_zero() && !hy.is_zero());
        assert_ne!(hx, hy);
        assert_eq!(cp.homology_signature([0u32, 1]), hx.xor(&hy));
    }

    #[test]
    fn projective_loop_homology_signature_is_one() {
        let g = gen::projective_loop().unwrap().puncture(0);
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        assert_eq!(cp.beta, 1);
        assert_eq!(cp.homology_signature([0u32]).to_bit_string(), "1");
    }

    #[test]
    fn fundamental_cycles_have_independent_homology_signatures() {
        for g in [
            punctured_torus(),
            gen::double_torus().unwrap().puncture(0),
            gen::klein_bottle().unwrap().puncture(0),
            gen::annulus_theta().unwrap(),
        ] {
            let d = tree_coforest(&g).unwrap();
            let cp = copaths(&g, &d);
            let mut space = RowSpace::new(cp.beta);
            for &e in &d.leftover_edges {
                let zeta = d.fundamental_cycle(&g, e);
                assert!(space.insert(&cp.homology_signature(zeta)));
            }
            assert_eq!(space.rank(), cp.beta, "the zeta cycles form a homology basis");
        }
    }

    #[test]
    fn reconstruct_round_trips_unit_vectors() {
        let g = gen::k4_sphere().unwrap();
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        assert!(reconstruct_cycle(&BitVec::zeros(3), &g, &d, &cp).is_empty());
        for (k, &f) in cp.faces_ordered.iter().enumerate() {
            let w = BitVec::unit(cp.dim, cp.beta + k);
            assert_eq!(reconstruct_cycle(&w, &g, &d, &cp), g.face(f).boundary_edges());
        }
    }

    #[test]
    fn reconstruct_round_trips_random_signatures() {
        let g = gen::k4_sphere().unwrap();
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        for mask in 0u32..8 {
            let mut w = BitVec::zeros(cp.dim);
            for i in 0..cp.dim {
                if mask >> i & 1 == 1 {
                    w.set(i, true);
                }
            }
            let cycle = reconstruct_cycle(&w, &g, &d, &cp);
            assert_eq!(cp.cycle_signature(cycle), w);
        }
    }
}
