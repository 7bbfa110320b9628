//! Minimum cycle basis for graphs embedded on orientable surfaces.
//!
//! Candidates are the Horton cycles of every shortest-path tree, thinned to
//! the distinct isometric cycles and partitioned by homology class. Within
//! one class isometric cycles never cross, so each class is represented by
//! a region tree: nodes carry the faces of the regions the class cuts the
//! surface into, edges carry the cycles. Selecting the minimum-weight cycle
//! with odd product against a support vector is then a single rootward walk
//! per class, flipping a parity bit face by face. The support vectors are
//! maintained by the block recursion in [`crate::support`].
//!
//! Boundary normalization: the pipeline works with exactly one boundary
//! face (the role of `f_infinity`); extra boundaries are refilled and a
//! closed surface is punctured at its highest-indexed face. Neither changes
//! the cycle space.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::decompose::{copaths, tree_coforest, CoPathSystem, DecomposeError};
use crate::embed::{EdgeId, EmbeddedGraph, FaceId, Vertex};
use crate::gf2::{BitMatrix, BitVec};
use crate::shortest::{all_pairs_shortest, AllPairsShortest, PathKey};
use crate::sparsify::{sparsify, SparsifyOutcome};
use crate::support::{Recursion, SupportEngine, SupportError};

#[derive(Debug, Error)]
pub enum McbError {
    #[error("minimum cycle basis requires an orientable embedding")]
    NonOrientable,
    #[error("isometric cycles of one homology class cross; shortest paths are not unique")]
    CrossingCycles,
    #[error("no cycle has odd product with a nonzero support vector")]
    NoOddCycle,
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Support(#[from] SupportError),
}

/// A Horton cycle: two shortest root paths plus a closing edge.
#[derive(Clone, Debug)]
pub struct HortonCycle {
    pub root: Vertex,
    pub nontree_edge: EdgeId,
    /// Realized edge set, sorted.
    pub edges: Vec<EdgeId>,
    pub key: PathKey,
}

/// Generates the simple Horton cycles of every shortest-path tree.
/// Degenerate candidates whose two root paths overlap are dropped.
pub fn horton_candidates(g: &EmbeddedGraph, apsp: &AllPairsShortest) -> Vec<HortonCycle> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut out = Vec::new();
    for root in 0..n {
        let tree = &apsp.trees[root];
        let mut in_tree = vec![false; m];
        for p in tree.parent.iter().flatten() {
            in_tree[p.0 as usize] = true;
        }
        for e in 0..m as u32 {
            if in_tree[e as usize] {
                continue;
            }
            let rec = g.edge(e);
            if rec.is_loop() {
                if rec.u == root {
                    out.push(HortonCycle {
                        root,
                        nontree_edge: e,
                        edges: vec![e],
                        key: PathKey::single(e, rec.weight),
                    });
                }
                continue;
            }
            let pu = tree.path_vertices(rec.u);
            let pv = tree.path_vertices(rec.v);
            if pu.iter().filter(|x| pv.contains(x)).count() != 1 {
                continue; // paths share more than the root
            }
            let mut edges = tree.path_edges(rec.u);
            edges.extend(tree.path_edges(rec.v));
            edges.push(e);
            edges.sort_unstable();
            let key = PathKey::of_edge_set(&edges, |x| g.weight(x));
            out.push(HortonCycle { root, nontree_edge: e, edges, key });
        }
    }
    out
}

/// An isometric cycle with its realized geometry.
#[derive(Clone, Debug)]
pub struct IsoCycle {
    pub edges: Vec<EdgeId>,
    pub key: PathKey,
    /// Vertices in cyclic walk order (a single entry for a loop).
    pub vertices: Vec<Vertex>,
    /// Edges in the same cyclic order, `walk_edges[i]` joining
    /// `vertices[i]` and `vertices[i+1]`.
    pub walk_edges: Vec<EdgeId>,
    pub hsig: BitVec,
}

#[derive(Clone, Debug)]
pub struct IsoClass {
    pub hsig: BitVec,
    /// Sorted by key, ascending.
    pub cycles: Vec<IsoCycle>,
}

#[derive(Clone, Debug)]
pub struct IsometricCycleSet {
    pub classes: Vec<IsoClass>,
}

impl IsometricCycleSet {
    pub fn total_cycles(&self) -> usize {
        self.classes.iter().map(|c| c.cycles.len()).sum()
    }
}

/// Reconstructs the cyclic vertex/edge walk of a simple cycle edge set.
fn cycle_walk(g: &EmbeddedGraph, edges: &[EdgeId]) -> (Vec<Vertex>, Vec<EdgeId>) {
    if edges.len() == 1 && g.edge(edges[0]).is_loop() {
        return (vec![g.edge(edges[0]).u], vec![edges[0]]);
    }
    let start = edges.iter().map(|&e| g.edge(e).u.min(g.edge(e).v)).min().unwrap();
    let mut verts = vec![start];
    let mut walk = Vec::new();
    let mut cur = start;
    let mut prev: Option<EdgeId> = None;
    loop {
        let e = edges
            .iter()
            .copied()
            .find(|&e| Some(e) != prev && (g.edge(e).u == cur || g.edge(e).v == cur))
            .expect("edge set is a simple cycle");
        walk.push(e);
        cur = g.edge(e).other(cur);
        if cur == start {
            break;
        }
        verts.push(cur);
        prev = Some(e);
    }
    (verts, walk)
}

/// Deduplicates Horton candidates, keeps the isometric ones, and groups
/// them by homology class. The class of a candidate comes from root-path
/// homology signatures, a prefix-XOR down each shortest-path tree.
pub fn isometric_cycles(
    g: &EmbeddedGraph,
    cands: &[HortonCycle],
    apsp: &AllPairsShortest,
    cp: &CoPathSystem,
) -> IsometricCycleSet {
    // Per-root, per-vertex homology signatures of tree paths, built lazily.
    let mut root_sigs: HashMap<Vertex, Vec<BitVec>> = HashMap::new();
    let mut sig_of = |root: Vertex, v: Vertex| -> BitVec {
        root_sigs
            .entry(root)
            .or_insert_with(|| {
                let tree = &apsp.trees[root];
                let mut order: Vec<Vertex> = (0..g.vertex_count()).collect();
                order.sort_by_key(|&x| tree.key(x).hops);
                let mut sigs = vec![BitVec::zeros(cp.beta); g.vertex_count()];
                for &x in &order {
                    if let Some((e, from)) = tree.parent[x] {
                        let mut s = sigs[from].clone();
                        s.xor_assign(&cp.edge_homology_signature(e));
                        sigs[x] = s;
                    }
                }
                sigs
            })[v]
            .clone()
    };

    let mut seen: HashMap<Vec<EdgeId>, ()> = HashMap::new();
    let mut by_class: HashMap<BitVec, Vec<IsoCycle>> = HashMap::new();
    for cand in cands {
        if seen.insert(cand.edges.clone(), ()).is_some() {
            continue;
        }
        let (vertices, walk_edges) = cycle_walk(g, &cand.edges);
        if !is_isometric(g, apsp, &vertices, &walk_edges) {
            continue;
        }
        let rec = g.edge(cand.nontree_edge);
        let mut hsig = sig_of(cand.root, rec.u);
        hsig.xor_assign(&sig_of(cand.root, rec.v));
        hsig.xor_assign(&cp.edge_homology_signature(cand.nontree_edge));
        debug_assert_eq!(hsig, cp.homology_signature(cand.edges.iter().copied()));
        by_class.entry(hsig.clone()).or_default().push(IsoCycle {
            edges: cand.edges.clone(),
            key: cand.key.clone(),
            vertices,
            walk_edges,
            hsig,
        });
    }

    let mut classes: Vec<IsoClass> = by_class
        .into_iter()
        .map(|(hsig, mut cycles)| {
            cycles.sort_by(|a, b| a.key.cmp(&b.key));
            IsoClass { hsig, cycles }
        })
        .collect();
    classes.sort_by(|a, b| a.hsig.to_bit_string().cmp(&b.hsig.to_bit_string()));
    IsometricCycleSet { classes }
}

/// Direct distance check: every pair of cycle vertices must be joined by
/// an arc realizing the unique shortest path between them.
fn is_isometric(
    g: &EmbeddedGraph,
    apsp: &AllPairsShortest,
    vertices: &[Vertex],
    walk_edges: &[EdgeId],
) -> bool {
    let len = vertices.len();
    if len <= 1 {
        return true;
    }
    // Prefix sums over the walk for O(1) weight/hop comparisons.
    let mut pw = vec![0.0f64; len + 1];
    for i in 0..len {
        pw[i + 1] = pw[i] + g.weight(walk_edges[i]);
    }
    let total_w = pw[len];
    for i in 0..len {
        for j in i + 1..len {
            let arc1_w = pw[j] - pw[i];
            let arc1_hops = (j - i) as u32;
            let arc2_w = total_w - arc1_w;
            let arc2_hops = len as u32 - arc1_hops;
            let target = apsp.key(vertices[i], vertices[j]);
            let arc_key = |range_w: f64, hops: u32, edges: &mut dyn Iterator<Item = EdgeId>| {
                let mut ids: Vec<EdgeId> = edges.collect();
                ids.sort_unstable();
                let _ = hops;
                PathKey::of_edge_set(&ids, |e| g.weight(e)).cmp(target) == std::cmp::Ordering::Equal
                    && range_w == target.weight()
            };
            // Cheap screens first; build full keys only on (weight, hops) ties.
            let d = target.weight();
            let c1 = arc1_w > d
                || (arc1_w == d
                    && (arc1_hops > target.hops
                        || (arc1_hops == target.hops
                            && !arc_key(arc1_w, arc1_hops, &mut walk_edges[i..j].iter().copied()))));
            let c2 = arc2_w > d
                || (arc2_w == d
                    && (arc2_hops > target.hops
                        || (arc2_hops == target.hops
                            && !arc_key(
                                arc2_w,
                                arc2_hops,
                                &mut walk_edges[j..].iter().chain(walk_edges[..i].iter()).copied(),
                            ))));
            if c1 && c2 {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct RegionNode {
    /// Signature bit indices of the faces in this region (`f_infinity`
    /// carries no bit and lives conceptually at the root).
    pub face_bits: Vec<usize>,
    pub parent_edge: Option<usize>,
    pub child_edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct RegionEdge {
    /// Index into the class cycle list.
    pub cycle: usize,
    pub upper: usize,
    pub lower: usize,
}

/// Nesting tree of one homology class of isometric cycles.
#[derive(Clone, Debug)]
pub struct RegionTree {
    pub hsig: BitVec,
    pub cycles: Vec<IsoCycle>,
    /// Class representative for a non-trivial class, with its full cycle
    /// signature precomputed; `None` for the trivial class.
    pub rep: Option<(usize, BitVec)>,
    pub nodes: Vec<RegionNode>,
    pub edges: Vec<RegionEdge>,
}

/// Dual reachability from `f_infinity` with the cycle's edges removed:
/// the unreached side is the face set the cycle bounds.
fn enclosed_faces(g: &EmbeddedGraph, f_inf: FaceId, edges: &[EdgeId]) -> Option<Vec<FaceId>> {
    let mut blocked = vec![false; g.edge_count()];
    for &e in edges {
        blocked[e as usize] = true;
    }
    let dual = g.dual();
    let mut seen = vec![false; dual.vertex_count];
    seen[f_inf] = true;
    let mut queue = std::collections::VecDeque::from([f_inf]);
    while let Some(f) = queue.pop_front() {
        for e in 0..g.edge_count() as u32 {
            if blocked[e as usize] {
                continue;
            }
            let (a, b) = dual.ends[e as usize];
            for (x, y) in [(a, b), (b, a)] {
                if x == f && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let inside: Vec<FaceId> = (0..dual.vertex_count).filter(|&f| !seen[f]).collect();
    if inside.is_empty() {
        None // does not separate
    } else {
        Some(inside)
    }
}

/// Parity labeling of the dual against an edge-set `diff`: faces with label
/// 1 form the subset bounded by `diff` (which must be null-homologous).
fn flipped_faces(g: &EmbeddedGraph, f_inf: FaceId, diff: &[EdgeId]) -> Option<Vec<FaceId>> {
    let mut in_diff = vec![false; g.edge_count()];
    for &e in diff {
        in_diff[e as usize] = true;
    }
    let dual = g.dual();
    let mut label: Vec<Option<bool>> = vec![None; dual.vertex_count];
    label[f_inf] = Some(false);
    let mut queue = std::collections::VecDeque::from([f_inf]);
    while let Some(f) = queue.pop_front() {
        let lf = label[f].unwrap();
        for e in 0..g.edge_count() as u32 {
            let (a, b) = dual.ends[e as usize];
            if a == b {
                if in_diff[e as usize] {
                    return None; // crossing parity inconsistent
                }
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                if x != f {
                    continue;
                }
                let ly = lf ^ in_diff[e as usize];
                match label[y] {
                    None => {
                        label[y] = Some(ly);
                        queue.push_back(y);
                    }
                    Some(existing) if existing != ly => return None,
                    _ => {}
                }
            }
        }
    }
    Some(
        (0..dual.vertex_count)
            .filter(|&f| label[f] == Some(true))
            .collect(),
    )
}

/// Builds the per-class region trees. `f_inf` is the designated boundary
/// face of the (normalized) graph.
pub fn build_region_trees(
    set: &IsometricCycleSet,
    g: &EmbeddedGraph,
    cp: &CoPathSystem,
    f_inf: FaceId,
) -> Result<Vec<RegionTree>, McbError> {
    let all_faces: Vec<FaceId> = (0..g.faces().len()).collect();
    let mut trees = Vec::new();
    for class in &set.classes {
        let trivial = class.hsig.is_zero();
        let tree = if trivial {
            build_trivial_tree(g, cp, f_inf, class, &all_faces)?
        } else {
            build_nontrivial_tree(g, cp, f_inf, class, &all_faces)?
        };
        trees.push(tree);
    }
    Ok(trees)
}

fn face_bits_of(cp: &CoPathSystem, faces: impl IntoIterator<Item = FaceId>) -> Vec<usize> {
    let mut bits: Vec<usize> = faces.into_iter().filter_map(|f| cp.face_bit[f]).collect();
    bits.sort_unstable();
    bits
}

fn build_trivial_tree(
    g: &EmbeddedGraph,
    cp: &CoPathSystem,
    f_inf: FaceId,
    class: &IsoClass,
    all_faces: &[FaceId],
) -> Result<RegionTree, McbError> {
    let k = class.cycles.len();
    // Enclosed face sets, one per cycle; they form a laminar family.
    let mut enclosed: Vec<Vec<FaceId>> = Vec::with_capacity(k);
    for c in &class.cycles {
        let inside = enclosed_faces(g, f_inf, &c.edges).ok_or(McbError::CrossingCycles)?;
        enclosed.push(inside);
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| enclosed[b].len().cmp(&enclosed[a].len()).then(a.cmp(&b)));

    let contains = |sup: &[FaceId], sub: &[FaceId]| sub.iter().all(|f| sup.binary_search(f).is_ok());
    let disjoint =
        |a: &[FaceId], b: &[FaceId]| !a.iter().any(|f| b.binary_search(f).is_ok());

    // parent[i] = index (in `order` processing) of the tightest enclosing set.
    let mut nodes = vec![RegionNode { face_bits: Vec::new(), parent_edge: None, child_edges: Vec::new() }];
    let mut edges: Vec<RegionEdge> = Vec::new();
    let mut node_of_cycle = vec![usize::MAX; k];
    let mut remaining: Vec<Vec<FaceId>> = vec![Vec::new()]; // per node: faces not yet claimed by children
    remaining[0] = all_faces.to_vec();
    let mut placed: Vec<usize> = Vec::new(); // cycle indices in processing order
    for &ci in &order {
        // The tightest previously placed superset is the parent region.
        let mut parent_node = 0;
        let mut best: Option<usize> = None;
        for &pj in &placed {
            if contains(&enclosed[pj], &enclosed[ci]) {
                if best.is_none_or(|b| enclosed[pj].len() < enclosed[b].len()) {
                    best = Some(pj);
                }
            } else if !disjoint(&enclosed[pj], &enclosed[ci]) {
                return Err(McbError::CrossingCycles);
            }
        }
        if let Some(b) = best {
            parent_node = node_of_cycle[b];
        }
        let node_id = nodes.len();
        let edge_id = edges.len();
        nodes.push(RegionNode {
            face_bits: Vec::new(),
            parent_edge: Some(edge_id),
            child_edges: Vec::new(),
        });
        nodes[parent_node].child_edges.push(edge_id);
        edges.push(RegionEdge { cycle: ci, upper: parent_node, lower: node_id });
        node_of_cycle[ci] = node_id;
        // Claim faces from the parent's remaining pool.
        let claimed: Vec<FaceId> = remaining[parent_node]
            .iter()
            .copied()
            .filter(|f| enclosed[ci].binary_search(f).is_ok())
            .collect();
        remaining[parent_node].retain(|f| enclosed[ci].binary_search(f).is_err());
        remaining.push(claimed);
        placed.push(ci);
    }
    for (node, rem) in nodes.iter_mut().zip(&remaining) {
        node.face_bits = face_bits_of(cp, rem.iter().copied());
    }
    Ok(RegionTree {
        hsig: class.hsig.clone(),
        cycles: class.cycles.clone(),
        rep: None,
        nodes,
        edges,
    })
}

fn build_nontrivial_tree(
    g: &EmbeddedGraph,
    cp: &CoPathSystem,
    f_inf: FaceId,
    class: &IsoClass,
    all_faces: &[FaceId],
) -> Result<RegionTree, McbError> {
    let k = class.cycles.len();
    let pivot = 0; // minimum-key cycle anchors the face-flip sets
    let mut flipped: Vec<Vec<FaceId>> = Vec::with_capacity(k);
    for c in &class.cycles {
        let mut diff = vec![0u8; g.edge_count()];
        for &e in class.cycles[pivot].edges.iter().chain(&c.edges) {
            diff[e as usize] ^= 1;
        }
        let diff: Vec<EdgeId> =
            (0..g.edge_count() as u32).filter(|&e| diff[e as usize] == 1).collect();
        flipped.push(flipped_faces(g, f_inf, &diff).ok_or(McbError::CrossingCycles)?);
    }

    // The nonempty flip sets split into two disjoint chains around the
    // pivot; descending size order reveals them.
    let mut order: Vec<usize> = (0..k).filter(|&i| i != pivot).collect();
    order.sort_by(|&a, &b| flipped[b].len().cmp(&flipped[a].len()).then(a.cmp(&b)));
    let contains = |sup: &[FaceId], sub: &[FaceId]| sub.iter().all(|f| sup.binary_search(f).is_ok());
    let mut chain1: Vec<usize> = Vec::new();
    let mut chain2: Vec<usize> = Vec::new();
    for &ci in &order {
        if chain1.is_empty() || contains(&flipped[*chain1.last().unwrap()], &flipped[ci]) {
            chain1.push(ci);
        } else if chain2.is_empty() || contains(&flipped[*chain2.last().unwrap()], &flipped[ci]) {
            chain2.push(ci);
        } else {
            return Err(McbError::CrossingCycles);
        }
    }
    if let (Some(&t1), Some(&t2)) = (chain1.first(), chain2.first()) {
        if flipped[t1].iter().any(|f| flipped[t2].binary_search(f).is_ok()) {
            return Err(McbError::CrossingCycles);
        }
    }

    // Path order root..leaf: chain2 descending, pivot, chain1 ascending;
    // the path's far end (largest chain1 set, or the pivot) becomes the
    // class representative and is removed from the tree.
    let mut path: Vec<usize> = chain2.clone();
    path.push(pivot);
    path.extend(chain1.iter().rev());
    let rep_cycle = *path.last().unwrap();
    let rep_flip = flipped[rep_cycle].clone();
    let t = path.iter().position(|&c| c == pivot).unwrap();

    // Faces strictly below the path edge of cycle path[j].
    let below = |j: usize| -> Vec<FaceId> {
        let cj = path[j];
        let mut faces: Vec<FaceId> = if j <= t {
            let mut v = flipped[cj].clone();
            for &f in &rep_flip {
                if v.binary_search(&f).is_err() {
                    v.push(f);
                }
            }
            v
        } else {
            rep_flip
                .iter()
                .copied()
                .filter(|f| flipped[cj].binary_search(f).is_err())
                .collect()
        };
        faces.sort_unstable();
        faces
    };

    // Nodes N_0 (root) .. N_{k-1}; edge j joins N_j to N_{j+1} and carries
    // cycle path[j]. N_0 holds everything above B_0, N_{j+1} the difference
    // B_j minus B_{j+1}, and the leaf all of B_{k-2}.
    let below_sets: Vec<Vec<FaceId>> = (0..path.len() - 1).map(below).collect();
    for w in below_sets.windows(2) {
        debug_assert!(
            w[1].iter().all(|f| w[0].binary_search(f).is_ok()) && w[1].len() < w[0].len(),
            "below-sets must strictly nest along the path"
        );
    }
    let mut nodes = vec![RegionNode { face_bits: Vec::new(), parent_edge: None, child_edges: Vec::new() }];
    let mut edges: Vec<RegionEdge> = Vec::new();
    if path.len() == 1 {
        nodes[0].face_bits = face_bits_of(cp, all_faces.iter().copied());
    } else {
        nodes[0].face_bits = face_bits_of(
            cp,
            all_faces.iter().copied().filter(|f| below_sets[0].binary_search(f).is_err()),
        );
        for (j, b) in below_sets.iter().enumerate() {
            let faces: Vec<FaceId> = match below_sets.get(j + 1) {
                Some(next) => {
                    b.iter().copied().filter(|f| next.binary_search(f).is_err()).collect()
                }
                None => b.clone(),
            };
            let node_id = nodes.len();
            let edge_id = edges.len();
            nodes[node_id - 1].child_edges.push(edge_id);
            nodes.push(RegionNode {
                face_bits: face_bits_of(cp, faces),
                parent_edge: Some(edge_id),
                child_edges: Vec::new(),
            });
            edges.push(RegionEdge { cycle: path[j], upper: node_id - 1, lower: node_id });
        }
    }
    let rep_sig = cp.cycle_signature(class.cycles[rep_cycle].edges.iter().copied());
    Ok(RegionTree {
        hsig: class.hsig.clone(),
        cycles: class.cycles.clone(),
        rep: Some((rep_cycle, rep_sig)),
        nodes,
        edges,
    })
}

/// The cycle chosen for a support vector, with its full cycle signature.
#[derive(Clone, Debug)]
pub struct SelectedCycle {
    pub edges: Vec<EdgeId>,
    pub key: PathKey,
    pub signature: BitVec,
}

/// Walks every region tree rootward, computing `<S, [cycle]>` per tree edge
/// from per-region face parities, and returns the minimum-weight odd cycle.
pub fn select_min_cycle(
    s: &BitVec,
    trees: &[RegionTree],
    cp: &CoPathSystem,
) -> Result<SelectedCycle, McbError> {
    // Best candidate as (tree index, cycle index) to keep borrows local.
    let mut best: Option<(usize, usize)> = None;
    let mut consider = |ti: usize, ci: usize, odd: bool| {
        if !odd {
            return;
        }
        let better = match best {
            None => true,
            Some((bt, bc)) => trees[ti].cycles[ci].key < trees[bt].cycles[bc].key,
        };
        if better {
            best = Some((ti, ci));
        }
    };
    for (ti, tree) in trees.iter().enumerate() {
        // Region parity of S: XOR of S bits over each node's faces.
        let node_parity: Vec<bool> = tree
            .nodes
            .iter()
            .map(|n| n.face_bits.iter().fold(false, |acc, &b| acc ^ s.get(b)))
            .collect();
        let base = tree.rep.as_ref().map(|(ri, sig)| {
            let odd = s.dot(sig);
            consider(ti, *ri, odd);
            odd
        });
        // Bottom-up pass: z(edge) = base-or-children XOR region parity.
        let mut edge_z = vec![false; tree.edges.len()];
        // Process edges deepest-first: children have larger node ids by
        // construction in both builders.
        for ei in (0..tree.edges.len()).rev() {
            let lower = tree.edges[ei].lower;
            let mut z = node_parity[lower];
            if tree.nodes[lower].child_edges.is_empty() {
                if let Some(b) = base {
                    z ^= b;
                }
            } else {
                for &ce in &tree.nodes[lower].child_edges {
                    z ^= edge_z[ce];
                }
            }
            edge_z[ei] = z;
            consider(ti, tree.edges[ei].cycle, z);
        }
    }
    match best {
        None => Err(McbError::NoOddCycle),
        Some((bt, bc)) => {
            let c = &trees[bt].cycles[bc];
            Ok(SelectedCycle {
                edges: c.edges.clone(),
                key: c.key.clone(),
                signature: cp.cycle_signature(c.edges.iter().copied()),
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct BasisCycle {
    /// Edge ids in the input graph, sorted.
    pub edges: Vec<EdgeId>,
    pub weight: f64,
    /// Cycle signature in the normalized graph's co-path system.
    pub signature: BitVec,
}

#[derive(Debug)]
pub struct CycleBasis {
    pub cycles: Vec<BasisCycle>,
    pub total_weight: f64,
    /// Cycle-space dimension of the input graph.
    pub dim: usize,
    pub timings: Vec<(&'static str, Duration)>,
    /// Face punctured (or boundaries refilled) during normalization.
    pub normalization: Vec<String>,
}

/// Normalizes to exactly one boundary face: refills extras, punctures the
/// highest-indexed face when closed. Returns the graph and notes.
pub fn normalize_single_boundary(g: &EmbeddedGraph) -> (EmbeddedGraph, Vec<String>) {
    let mut notes = Vec::new();
    let boundary = g.boundary_faces();
    let mut g = g.clone();
    if boundary.is_empty() {
        let f = g.faces().len() - 1;
        g = g.puncture(f);
        notes.push(format!("punctured face {f}"));
    } else {
        for &f in boundary.iter().skip(1) {
            g = g.refill(f);
            notes.push(format!("refilled boundary face {f}"));
        }
    }
    (g, notes)
}

/// Minimum cycle basis of an orientable embedded graph.
pub fn minimum_cycle_basis(g: &EmbeddedGraph) -> Result<CycleBasis, McbError> {
    if !g.stats().orientable {
        return Err(McbError::NonOrientable);
    }
    let mut timings = Vec::new();
    let t0 = Instant::now();
    let (gn, normalization) = normalize_single_boundary(g);
    timings.push(("normalize", t0.elapsed()));

    let t0 = Instant::now();
    let outcome: SparsifyOutcome = sparsify(&gn);
    timings.push(("sparsify", t0.elapsed()));

    let mut cycles: Vec<Vec<EdgeId>> = outcome.forced_mcb.clone();

    if let Some(res) = &outcome.residual {
        let rg = &res.graph;
        if rg.cycle_space_dim() > 0 {
            let t0 = Instant::now();
            let d = tree_coforest(rg)?;
            let cp = copaths(rg, &d);
            timings.push(("decompose", t0.elapsed()));

            let t0 = Instant::now();
            let apsp = all_pairs_shortest(rg);
            timings.push(("shortest_paths", t0.elapsed()));

            let t0 = Instant::now();
            let cands = horton_candidates(rg, &apsp);
            timings.push(("horton", t0.elapsed()));

            let t0 = Instant::now();
            let set = isometric_cycles(rg, &cands, &apsp, &cp);
            debug_assert!(set
                .classes
                .iter()
                .all(|c| c.cycles.len() <= rg.stats().faces));
            timings.push(("isometric", t0.elapsed()));

            let t0 = Instant::now();
            let f_inf = rg.boundary_faces()[0];
            let trees = build_region_trees(&set, rg, &cp, f_inf)?;
            timings.push(("region_trees", t0.elapsed()));

            let t0 = Instant::now();
            let mut engine = SupportEngine::new(rg.cycle_space_dim());
            let mut picked: Vec<Vec<EdgeId>> = Vec::new();
            engine.run(Recursion::Balanced, &mut |_, s| {
                let sel = select_min_cycle(s, &trees, &cp).map_err(|e| match e {
                    McbError::NoOddCycle => SupportError::NotOdd,
                    other => panic!("unexpected selection failure: {other}"),
                })?;
                picked.push(sel.edges.clone());
                Ok(sel.signature)
            })?;
            timings.push(("recursion", t0.elapsed()));

            for edges in picked {
                let mapped: Vec<EdgeId> =
                    edges.iter().map(|&e| res.edge_map[e as usize]).collect();
                cycles.push(mapped);
            }
        }
    }

    // Signatures and weights in the normalized input graph.
    let t0 = Instant::now();
    let d_out = tree_coforest(&gn)?;
    let cp_out = copaths(&gn, &d_out);
    let mut basis = Vec::with_capacity(cycles.len());
    let mut total_weight = 0.0;
    for mut edges in cycles {
        edges.sort_unstable();
        let weight: f64 = edges.iter().map(|&e| gn.weight(e)).sum();
        total_weight += weight;
        let signature = cp_out.cycle_signature(edges.iter().copied());
        basis.push(BasisCycle { edges, weight, signature });
    }
    timings.push(("signatures", t0.elapsed()));
    debug_assert_eq!(basis.len(), gn.cycle_space_dim());
    debug_assert_eq!(
        BitMatrix::from_rows(basis.iter().map(|c| c.signature.clone()).collect()).rank(),
        gn.cycle_space_dim(),
        "output signatures must have full rank"
    );

    Ok(CycleBasis {
        cycles: basis,
        total_weight,
        dim: gn.cycle_space_dim(),
        timings,
        normalization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracle;

    fn k4_machinery() -> (EmbeddedGraph, crate::decompose::TreeCoforest, CoPathSystem, AllPairsShortest) {
        let g = gen::k4_sphere().unwrap();
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        let apsp = all_pairs_shortest(&g);
        (g, d, cp, apsp)
    }

    #[test]
    fn k4_has_twelve_simple_horton_candidates() {
        let (g, _, _, apsp) = k4_machinery();
        let cands = horton_candidates(&g, &apsp);
        assert_eq!(cands.len(), 12, "4 roots x 3 non-tree edges");
        for c in &cands {
            assert!(c.edges.len() == 3 || c.edges.len() == 4);
        }
    }

    #[test]
    fn tree_graph_has_no_candidates() {
        let g = gen::random_embedding(&gen::RandomOptions::new(6, 0, 1)).unwrap();
        let apsp = all_pairs_shortest(&g);
        assert!(horton_candidates(&g, &apsp).is_empty());
    }

    #[test]
    fn torus_candidates_are_the_two_loops() {
        let g = gen::torus1().unwrap().puncture(0);
        let apsp = all_pairs_shortest(&g);
        let cands = horton_candidates(&g, &apsp);
        let mut sets: Vec<Vec<EdgeId>> = cands.iter().map(|c| c.edges.clone()).collect();
        sets.sort();
        assert_eq!(sets, vec![vec![0], vec![1]]);
    }

    #[test]
    fn k4_isometric_cycles_are_the_triangles() {
        let (g, _, cp, apsp) = k4_machinery();
        let cands = horton_candidates(&g, &apsp);
        let set = isometric_cycles(&g, &cands, &apsp, &cp);
        assert_eq!(set.classes.len(), 1, "planar: only the trivial class");
        let class = &set.classes[0];
        assert!(class.hsig.is_zero() || class.hsig.is_empty());
        assert_eq!(class.cycles.len(), 4, "the four triangles");
        assert!(class.cycles.iter().all(|c| c.edges.len() == 3));
    }

    #[test]
    fn torus_classes_split_by_homology() {
        let g = gen::torus1().unwrap().puncture(0);
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        let apsp = all_pairs_shortest(&g);
        let set = isometric_cycles(&g, &horton_candidates(&g, &apsp), &apsp, &cp);
        assert_eq!(set.classes.len(), 2);
        assert_eq!(set.total_cycles(), 2);
        for class in &set.classes {
            assert!(!class.hsig.is_zero());
        }
    }

    #[test]
    fn duplicate_horton_realizations_are_merged() {
        let (g, _, cp, apsp) = k4_machinery();
        let cands = horton_candidates(&g, &apsp);
        let set = isometric_cycles(&g, &cands, &apsp, &cp);
        // 12 candidates collapse to at most 7 distinct cycles; only the 4
        // triangles survive the isometry filter.
        assert_eq!(set.total_cycles(), 4);
    }

    #[test]
    fn k4_region_tree_structure() {
        let (g, _, cp, apsp) = k4_machinery();
        let set = isometric_cycles(&g, &horton_candidates(&g, &apsp), &apsp, &cp);
        let f_inf = g.boundary_faces()[0];
        let trees = build_region_trees(&set, &g, &cp, f_inf).unwrap();
        assert_eq!(trees.len(), 1);
        let t = &trees[0];
        assert_eq!(t.edges.len(), 4);
        // Faces partition across nodes: each interior face bit exactly once.
        let mut bits: Vec<usize> = t.nodes.iter().flat_map(|n| n.face_bits.clone()).collect();
        bits.sort_unstable();
        assert_eq!(bits, (cp.beta..cp.dim).collect::<Vec<_>>());
    }

    #[test]
    fn single_cycle_class_tree_is_one_node() {
        let g = gen::torus1().unwrap().puncture(0);
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        let apsp = all_pairs_shortest(&g);
        let set = isometric_cycles(&g, &horton_candidates(&g, &apsp), &apsp, &cp);
        let trees = build_region_trees(&set, &g, &cp, 0).unwrap();
        for t in &trees {
            assert_eq!(t.nodes.len(), 1);
            assert!(t.edges.is_empty());
            assert!(t.rep.is_some());
        }
    }

    #[test]
    fn grid_nontrivial_class_tree_is_a_path() {
        // The three rows of the 3x3 torus grid are homologous isometric
        // cycles; their class tree is a path of three nodes.
        let g = gen::torus_grid(3).unwrap().puncture(8);
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        let apsp = all_pairs_shortest(&g);
        let set = isometric_cycles(&g, &horton_candidates(&g, &apsp), &apsp, &cp);
        let trees = build_region_trees(&set, &g, &cp, g.boundary_faces()[0]).unwrap();
        let row_class = trees
            .iter()
            .find(|t| !t.hsig.is_zero() && t.cycles.iter().any(|c| c.edges == vec![0, 1, 2]))
            .expect("row cycles form a class");
        assert_eq!(row_class.cycles.len(), 3);
        assert_eq!(row_class.nodes.len(), 3, "path-shaped tree of 3 nodes");
        assert_eq!(row_class.edges.len(), 2);
        assert!(row_class.rep.is_some());
        // Every node has at most one child: a path.
        assert!(row_class.nodes.iter().all(|n| n.child_edges.len() <= 1));
    }

    #[test]
    fn selection_picks_the_cheapest_face_boundary() {
        let (g, _, cp, apsp) = k4_machinery();
        let set = isometric_cycles(&g, &horton_candidates(&g, &apsp), &apsp, &cp);
        let trees = build_region_trees(&set, &g, &cp, g.boundary_faces()[0]).unwrap();
        let f = cp.faces_ordered[0];
        let target = g.face(f).boundary_edges();
        let s = cp.cycle_signature(target.iter().copied());
        let sel = select_min_cycle(&s, &trees, &cp).unwrap();
        assert_eq!(sel.key.weight(), 3.0);
        assert!(s.dot(&sel.signature), "selected cycle must be odd against S");
    }

    #[test]
    fn selection_satisfies_odd_product_postcondition() {
        let g = gen::torus_grid(3).unwrap().puncture(8);
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        let apsp = all_pairs_shortest(&g);
        let set = isometric_cycles(&g, &horton_candidates(&g, &apsp), &apsp, &cp);
        let trees = build_region_trees(&set, &g, &cp, g.boundary_faces()[0]).unwrap();
        for bit in 0..cp.dim {
            let s = BitVec::unit(cp.dim, bit);
            let sel = select_min_cycle(&s, &trees, &cp).unwrap();
            assert!(s.dot(&sel.signature), "bit {bit}");
        }
    }

    #[test]
    fn torus_selection_by_homology_bit() {
        let g = gen::torus1().unwrap().puncture(0);
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        let apsp = all_pairs_shortest(&g);
        let set = isometric_cycles(&g, &horton_candidates(&g, &apsp), &apsp, &cp);
        let trees = build_region_trees(&set, &g, &cp, 0).unwrap();
        let s = BitVec::unit(cp.dim, 0);
        let sel = select_min_cycle(&s, &trees, &cp).unwrap();
        assert_eq!(sel.key.weight(), 1.0);
        assert!(s.dot(&sel.signature));
    }

    #[test]
    fn mcb_fixture_weights() {
        assert_eq!(minimum_cycle_basis(&gen::theta().unwrap()).unwrap().total_weight, 7.0);
        assert_eq!(minimum_cycle_basis(&gen::k4_sphere().unwrap()).unwrap().total_weight, 9.0);
        assert_eq!(minimum_cycle_basis(&gen::torus1().unwrap()).unwrap().total_weight, 2.0);
    }

    #[test]
    fn mcb_rejects_non_orientable_embeddings() {
        let err = minimum_cycle_basis(&gen::projective_loop().unwrap()).unwrap_err();
        assert!(matches!(err, McbError::NonOrientable));
        let err = minimum_cycle_basis(&gen::klein_bottle().unwrap()).unwrap_err();
        assert!(matches!(err, McbError::NonOrientable));
    }

    #[test]
    fn mcb_matches_oracle_on_random_instances() {
        for seed in 0..25 {
            let g = gen::random_embedding(&gen::RandomOptions::new(7, 6, seed)).unwrap();
            let mine = minimum_cycle_basis(&g).unwrap();
            let oracle_basis = oracle::greedy_mcb(&g).unwrap();
            assert_eq!(mine.total_weight, oracle_basis.total_weight, "seed {seed}");
            assert_eq!(mine.cycles.len(), g.cycle_space_dim());
        }
    }

    #[test]
    fn mcb_output_cycles_are_simple_and_isometric() {
        let g = gen::torus_grid(3).unwrap();
        let basis = minimum_cycle_basis(&g).unwrap();
        let apsp = all_pairs_shortest(&g);
        for c in &basis.cycles {
            let (vertices, walk) = cycle_walk(&g, &c.edges);
            assert_eq!(vertices.len(), walk.len(), "simple cycle");
            assert!(is_isometric(&g, &apsp, &vertices, &walk));
        }
    }

    #[test]
    fn region_tree_cycles_pairwise_intersect_in_paths() {
        // Within one class, any two cycles share a (possibly empty) set of
        // edges forming a single shortest path.
        let g = gen::torus_grid(3).unwrap().puncture(8);
        let d = tree_coforest(&g).unwrap();
        let cp = copaths(&g, &d);
        let apsp = all_pairs_shortest(&g);
        let set = isometric_cycles(&g, &horton_candidates(&g, &apsp), &apsp, &cp);
        for class in &set.classes {
            for a in 0..class.cycles.len() {
                for b in a + 1..class.cycles.len() {
                    let ea = &class.cycles[a].edges;
                    let eb = &class.cycles[b].edges;
                    let shared: Vec<EdgeId> =
                        ea.iter().copied().filter(|e| eb.binary_search(e).is_ok()).collect();
                    if shared.is_empty() {
                        continue;
                    }
                    // Shared edges must form a path realizing the unique
                    // shortest path between its endpoints.
                    let mut deg: HashMap<Vertex, usize> = HashMap::new();
                    for &e in &shared {
                        *deg.entry(g.edge(e).u).or_insert(0) += 1;
                        *deg.entry(g.edge(e).v).or_insert(0) += 1;
                    }
                    let ends: Vec<Vertex> =
                        deg.iter().filter(|(_, &d)| d == 1).map(|(&v, _)| v).collect();
                    assert_eq!(ends.len(), 2, "shared edges form one path");
                    let mut sp = apsp.path_edges(ends[0], ends[1]);
                    sp.sort_unstable();
                    let mut shared_sorted = shared.clone();
                    shared_sorted.sort_unstable();
                    assert_eq!(sp, shared_sorted, "shared path is the shortest path");
                }
            }
        }
    }
}
