//! Brute-force reference implementations.
//!
//! The oracle works on the unsparsified input graph and stays independent
//! of the production pipeline: independence bookkeeping runs on raw edge
//! incidence vectors (plus interior-face boundary rows for homology), never
//! on co-path signatures, so it can validate the signature machinery rather
//! than assume it.
//!
//! Ground sets come in two tiers. Small graphs enumerate the whole cycle
//! space (`2^(m-n+1)` elements). Larger ones fall back to the deduplicated
//! simple Horton cycles — two shortest paths from a common root plus one
//! edge — which contain every greedy-selectable minimum cycle under unique
//! shortest paths.

use thiserror::Error;

use crate::embed::{EdgeId, EmbeddedGraph, Vertex};
use crate::gf2::{BitVec, RowSpace};
use crate::shortest::{all_pairs_shortest, PathKey};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("cycle space dimension {0} exceeds the enumeration limit {1}")]
    DimensionTooLarge(usize, usize),
}

pub const ENUM_DIM_LIMIT: usize = 20;

/// All `2^(m-n+1)` cycle-space elements of a small graph.
pub struct CycleSpaceEnumeration {
    pub dim: usize,
    /// Element edge sets as m-bit vectors; index `mask` is the XOR of the
    /// fundamental cycles selected by the bits of `mask`.
    pub elements: Vec<BitVec>,
}

impl CycleSpaceEnumeration {
    pub fn edge_list(&self, idx: usize) -> Vec<EdgeId> {
        self.elements[idx].iter_ones().map(|e| e as EdgeId).collect()
    }
}

/// Fundamental cycles of a BFS spanning tree, one per non-tree edge.
fn fundamental_cycles(g: &EmbeddedGraph) -> Vec<BitVec> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let adj = g.adjacency();
    let mut parent: Vec<Option<(EdgeId, Vertex)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut in_tree = vec![false; m];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &(e, v) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some((e, u));
                in_tree[e as usize] = true;
                queue.push_back(v);
            }
        }
    }
    let root_path = |mut v: Vertex, bits: &mut BitVec| {
        while let Some((e, up)) = parent[v] {
            bits.flip(e as usize);
            v = up;
        }
    };
    (0..m as u32)
        .filter(|&e| !in_tree[e as usize])
        .map(|e| {
            let mut bits = BitVec::zeros(m);
            bits.flip(e as usize);
            let rec = g.edge(e);
            root_path(rec.u, &mut bits);
            root_path(rec.v, &mut bits);
            bits
        })
        .collect()
}

pub fn enumerate_cycle_space(g: &EmbeddedGraph) -> Result<CycleSpaceEnumeration, OracleError> {
    let dim = g.cycle_space_dim();
    if dim > ENUM_DIM_LIMIT {
        return Err(OracleError::DimensionTooLarge(dim, ENUM_DIM_LIMIT));
    }
    let fundamentals = fundamental_cycles(g);
    let mut elements = Vec::with_capacity(1 << dim);
    elements.push(BitVec::zeros(g.edge_count()));
    for mask in 1usize..(1 << dim) {
        let bit = mask.trailing_zeros() as usize;
        let mut el = elements[mask ^ (1 << bit)].clone();
        el.xor_assign(&fundamentals[bit]);
        elements.push(el);
    }
    Ok(CycleSpaceEnumeration { dim, elements })
}

/// Tests whether an edge set bounds a subset of interior faces, by parity
/// labeling of the dual graph. Independent of co-path signatures.
pub fn is_null_homologous(g: &EmbeddedGraph, edges: &[EdgeId]) -> bool {
    let mut in_set = vec![false; g.edge_count()];
    for &e in edges {
        in_set[e as usize] = true;
    }
    let dual = g.dual();
    let faces = dual.vertex_count;
    let mut label: Vec<Option<bool>> = vec![None; faces];
    let mut adj: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); faces];
    for e in 0..g.edge_count() as u32 {
        let (a, b) = dual.ends[e as usize];
        adj[a].push((e, b));
        adj[b].push((e, a));
    }
    label[0] = Some(false);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let lf = label[f].unwrap();
        for &(e, to) in &adj[f] {
            let crossing = in_set[e as usize] && {
                let (a, b) = dual.ends[e as usize];
                a != b
            };
            // A dual self-loop edge in the set crosses no cut consistently
            // only if the set is not a boundary at all.
            if in_set[e as usize] && dual.ends[e as usize].0 == dual.ends[e as usize].1 {
                return false;
            }
            let lt = lf ^ crossing;
            match label[to] {
                None => {
                    label[to] = Some(lt);
                    queue.push_back(to);
                }
                Some(existing) if existing != lt => return false,
                _ => {}
            }
        }
    }
    // A valid face subset may not include boundary faces; either the 1-side
    // or the 0-side must avoid them all.
    let boundary_labels: Vec<bool> =
        g.boundary_faces().iter().map(|&f| label[f].unwrap()).collect();
    boundary_labels.iter().all(|&l| !l) || boundary_labels.iter().all(|&l| l)
}

#[derive(Clone, Debug)]
pub struct OracleBasis {
    pub cycles: Vec<Vec<EdgeId>>,
    pub weights: Vec<f64>,
    pub total_weight: f64,
}

fn weight_of(g: &EmbeddedGraph) -> impl Fn(EdgeId) -> f64 + '_ {
    |e| g.weight(e)
}

/// Deduplicated simple Horton cycles sorted by the deterministic key.
/// Built from scratch here so the oracle shares nothing with the
/// production candidate generator.
fn horton_ground_set(g: &EmbeddedGraph) -> Vec<(PathKey, Vec<EdgeId>)> {
    let apsp = all_pairs_shortest(g);
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut seen = std::collections::HashSet::new();
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
                if rec.u != root {
                    continue;
                }
                let cycle = vec![e];
                if seen.insert(cycle.clone()) {
                    out.push((PathKey::of_edge_set(&cycle, weight_of(g)), cycle));
                }
                continue;
            }
            let pu = tree.path_vertices(rec.u);
            let pv = tree.path_vertices(rec.v);
            // Simple only if the two root paths share exactly the root.
            let shared = pu.iter().filter(|x| pv.contains(x)).count();
            if shared != 1 {
                continue;
            }
            let mut cycle = tree.path_edges(rec.u);
            cycle.extend(tree.path_edges(rec.v));
            cycle.push(e);
            cycle.sort_unstable();
            if seen.insert(cycle.clone()) {
                out.push((PathKey::of_edge_set(&cycle, weight_of(g)), cycle));
            }
        }
    }
    out.sort();
    out
}

fn enum_ground_set(g: &EmbeddedGraph) -> Result<Vec<(PathKey, Vec<EdgeId>)>, OracleError> {
    let enm = enumerate_cycle_space(g)?;
    let mut out: Vec<(PathKey, Vec<EdgeId>)> = (1..enm.elements.len())
        .map(|i| {
            let edges = enm.edge_list(i);
            (PathKey::of_edge_set(&edges, weight_of(g)), edges)
        })
        .collect();
    out.sort();
    Ok(out)
}

fn edge_bits(m: usize, edges: &[EdgeId]) -> BitVec {
    let mut bits = BitVec::zeros(m);
    for &e in edges {
        bits.flip(e as usize);
    }
    bits
}

fn greedy(
    g: &EmbeddedGraph,
    ground: Vec<(PathKey, Vec<EdgeId>)>,
    mut space: RowSpace,
    want: usize,
) -> OracleBasis {
    let m = g.edge_count();
    let mut basis = OracleBasis { cycles: Vec::new(), weights: Vec::new(), total_weight: 0.0 };
    for (key, cycle) in ground {
        if basis.cycles.len() == want {
            break;
        }
        if space.insert(&edge_bits(m, &cycle)) {
            basis.total_weight += key.weight();
            basis.weights.push(key.weight());
            basis.cycles.push(cycle);
        }
    }
    assert_eq!(basis.cycles.len(), want, "ground set must span the target space");
    basis
}

/// Greedy minimum cycle basis over the full cycle-space enumeration.
pub fn greedy_mcb(g: &EmbeddedGraph) -> Result<OracleBasis, OracleError> {
    let ground = enum_ground_set(g)?;
    Ok(greedy(g, ground, RowSpace::new(g.edge_count()), g.cycle_space_dim()))
}

/// Greedy minimum cycle basis over Horton cycles; sound for any size under
/// unique shortest paths, used when enumeration is infeasible.
pub fn greedy_mcb_horton(g: &EmbeddedGraph) -> OracleBasis {
    let ground = horton_ground_set(g);
    greedy(g, ground, RowSpace::new(g.edge_count()), g.cycle_space_dim())
}

/// Row space pre-seeded with all interior face boundaries: the quotient by
/// it is the homology space, so rank growth means homology independence.
fn face_boundary_space(g: &EmbeddedGraph) -> RowSpace {
    let mut space = RowSpace::new(g.edge_count());
    for f in g.interior_faces() {
        space.insert(&edge_bits(g.edge_count(), &g.face(f).boundary_edges()));
    }
    space
}

fn homology_rank_target(g: &EmbeddedGraph) -> usize {
    let boundary_rank = face_boundary_space(g).rank();
    let beta = g.cycle_space_dim() - boundary_rank;
    debug_assert_eq!(beta, g.stats().beta, "face-boundary rank must agree with the genus formula");
    beta
}

/// Greedy minimum homology basis over the full cycle-space enumeration.
pub fn greedy_mhb(g: &EmbeddedGraph) -> Result<OracleBasis, OracleError> {
    let want = homology_rank_target(g);
    let ground = enum_ground_set(g)?;
    Ok(greedy(g, ground, face_boundary_space(g), want))
}

/// Greedy minimum homology basis over Horton cycles.
pub fn greedy_mhb_horton(g: &EmbeddedGraph) -> OracleBasis {
    let want = homology_rank_target(g);
    let ground = horton_ground_set(g);
    greedy(g, ground, face_boundary_space(g), want)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn tree_enumerates_only_the_empty_set() {
        let g = gen::random_embedding(&gen::RandomOptions::new(5, 0, 3)).unwrap();
        let enm = enumerate_cycle_space(&g).unwrap();
        assert_eq!(enm.elements.len(), 1);
        assert!(enm.elements[0].is_zero());
    }

    #[test]
    fn theta_enumeration() {
        let g = gen::theta().unwrap();
        let enm = enumerate_cycle_space(&g).unwrap();
        assert_eq!(enm.elements.len(), 4);
        let mut lists: Vec<Vec<EdgeId>> = (0..4).map(|i| enm.edge_list(i)).collect();
        lists.sort();
        assert_eq!(lists, vec![vec![], vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn k4_enumeration_has_eight_elements() {
        let g = gen::k4_sphere().unwrap();
        let enm = enumerate_cycle_space(&g).unwrap();
        assert_eq!(enm.elements.len(), 8);
        // Closed under XOR: all pairwise XORs stay in the set.
        let set: std::collections::HashSet<Vec<EdgeId>> =
            (0..8).map(|i| enm.edge_list(i)).collect();
        for i in 0..8 {
            for j in 0..8 {
                let x = enm.elements[i].xor(&enm.elements[j]);
                assert!(set.contains(&x.iter_ones().map(|e| e as u32).collect::<Vec<_>>()));
            }
        }
    }

    #[test]
    fn greedy_mcb_fixture_weights() {
        assert_eq!(greedy_mcb(&gen::theta().unwrap()).unwrap().total_weight, 7.0);
        assert_eq!(greedy_mcb(&gen::k4_sphere().unwrap()).unwrap().total_weight, 9.0);
        assert_eq!(greedy_mcb(&gen::torus1().unwrap()).unwrap().total_weight, 2.0);
    }

    #[test]
    fn greedy_mhb_fixture_weights() {
        let k4 = greedy_mhb(&gen::k4_sphere().unwrap()).unwrap();
        assert!(k4.cycles.is_empty());
        assert_eq!(k4.total_weight, 0.0);
        assert_eq!(greedy_mhb(&gen::torus1().unwrap()).unwrap().total_weight, 2.0);
        assert_eq!(greedy_mhb(&gen::projective_loop().unwrap()).unwrap().total_weight, 1.0);
        // Annulus: the interior bigon {0,1} bounds, so the lightest cycle in
        // the core class is {0,2} of weight 4.
        assert_eq!(greedy_mhb(&gen::annulus_theta().unwrap()).unwrap().total_weight, 4.0);
    }

    #[test]
    fn horton_tier_agrees_with_enumeration_on_fixtures() {
        for g in gen::all_fixtures() {
            let full = greedy_mcb(&g).unwrap();
            let horton = greedy_mcb_horton(&g);
            assert_eq!(full.total_weight, horton.total_weight);
            let full_h = greedy_mhb(&g).unwrap();
            let horton_h = greedy_mhb_horton(&g);
            assert_eq!(full_h.total_weight, horton_h.total_weight);
        }
    }

    #[test]
    fn horton_tier_agrees_on_random_instances() {
        for seed in 0..30 {
            let g = gen::random_embedding(&gen::RandomOptions::new(6, 5, seed)).unwrap();
            assert_eq!(
                greedy_mcb(&g).unwrap().total_weight,
                greedy_mcb_horton(&g).total_weight,
                "seed {seed}"
            );
            assert_eq!(
                greedy_mhb(&g).unwrap().total_weight,
                greedy_mhb_horton(&g).total_weight,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn null_homology_test_on_fixtures() {
        let g = gen::torus1().unwrap();
        assert!(!is_null_homologous(&g, &[0]));
        assert!(!is_null_homologous(&g, &[1]));
        assert!(is_null_homologous(&g, &[]));

        let g = gen::k4_sphere().unwrap();
        for f in 0..4 {
            assert!(is_null_homologous(&g, &g.face(f).boundary_edges()));
        }

        // Annulus: the two-edge cycle through the interior face bounds it;
        // cycles through both boundary faces do not bound.
        let g = gen::annulus_theta().unwrap();
        let interior = g.interior_faces()[0];
        assert!(is_null_homologous(&g, &g.face(interior).boundary_edges()));
        let all: Vec<Vec<EdgeId>> = vec![vec![0, 1], vec![0, 2], vec![1, 2]];
        let null_count = all.iter().filter(|c| is_null_homologous(&g, c)).count();
        assert_eq!(null_count, 1, "exactly one nonzero class bounds in the annulus");
    }

    #[test]
    fn mcb_weight_is_invariant_under_edge_relabeling() {
        for seed in 0..10 {
            let g = gen::random_embedding(&gen::RandomOptions::new(6, 4, seed)).unwrap();
            let base = greedy_mcb(&g).unwrap().total_weight;
            let mut spec = g.to_spec();
            // Rotate edge ids by one.
            let m = spec.edges.len();
            spec.edges.rotate_left(1);
            let remap = |e: u32| (e + m as u32 - 1) % m as u32;
            for rot in &mut spec.rotations {
                for d in rot.iter_mut() {
                    *d = crate::embed::Dart::new(remap(d.edge()), d.is_head());
                }
            }
            for d in &mut spec.boundary_darts {
                *d = crate::embed::Dart::new(remap(d.edge()), d.is_head());
            }
            let h = EmbeddedGraph::build(spec).unwrap();
            assert_eq!(greedy_mcb(&h).unwrap().total_weight, base, "seed {seed}");
        }
    }
}
