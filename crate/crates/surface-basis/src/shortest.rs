//! Deterministic shortest paths with unique tie-breaking.
//!
//! Paths and cycles are compared by `(total weight, hop count, sorted edge-id
//! multiset)`. The order is symmetric in the path direction, strictly
//! monotone under extension, and assigns distinct keys to distinct edge
//! multisets, so shortest paths are unique and subpaths of shortest paths
//! are shortest. Everything downstream (Horton cycles, isometry tests,
//! region-tree nesting, double-cover selection) leans on that uniqueness.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::embed::{EdgeId, EmbeddedGraph, Vertex};

/// Comparison key of a walk. Distinct edge multisets get distinct keys.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathKey {
    weight_bits: u64,
    pub hops: u32,
    /// Sorted, with multiplicity. Ids are the *tie-break* ids: base-graph
    /// edge ids, so lifted walks in a covering graph compare coherently
    /// with their projections.
    pub edges: Vec<EdgeId>,
}

impl PathKey {
    pub fn empty() -> PathKey {
        PathKey { weight_bits: 0f64.to_bits(), hops: 0, edges: Vec::new() }
    }

    pub fn single(edge: EdgeId, weight: f64) -> PathKey {
        PathKey { weight_bits: weight.to_bits(), hops: 1, edges: vec![edge] }
    }

    pub fn weight(&self) -> f64 {
        f64::from_bits(self.weight_bits)
    }

    /// The key of this walk extended by one edge.
    pub fn extended(&self, edge: EdgeId, weight: f64) -> PathKey {
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        let pos = self.edges.partition_point(|&e| e <= edge);
        edges.extend_from_slice(&self.edges[..pos]);
        edges.push(edge);
        edges.extend_from_slice(&self.edges[pos..]);
        PathKey {
            weight_bits: (self.weight() + weight).to_bits(),
            hops: self.hops + 1,
            edges,
        }
    }

    pub fn concat(&self, other: &PathKey) -> PathKey {
        let mut edges = Vec::with_capacity(self.edges.len() + other.edges.len());
        let (mut i, mut j) = (0, 0);
        while i < self.edges.len() && j < other.edges.len() {
            if self.edges[i] <= other.edges[j] {
                edges.push(self.edges[i]);
                i += 1;
            } else {
                edges.push(other.edges[j]);
                j += 1;
            }
        }
        edges.extend_from_slice(&self.edges[i..]);
        edges.extend_from_slice(&other.edges[j..]);
        PathKey {
            weight_bits: (self.weight() + other.weight()).to_bits(),
            hops: self.hops + other.hops,
            edges,
        }
    }

    /// Key of an edge set taken as a cycle-space element.
    pub fn of_edge_set(edges: &[EdgeId], weight_of: impl Fn(EdgeId) -> f64) -> PathKey {
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        let weight = sorted.iter().map(|&e| weight_of(e)).sum::<f64>();
        PathKey { weight_bits: weight.to_bits(), hops: sorted.len() as u32, edges: sorted }
    }
}

impl Ord for PathKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .total_cmp(&other.weight())
            .then_with(|| self.hops.cmp(&other.hops))
            .then_with(|| self.edges.cmp(&other.edges))
    }
}

impl PartialOrd for PathKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A weighted multigraph view for Dijkstra runs. `tie_id` maps each edge to
/// the id used in path keys; for plain graphs it is the identity, for the
/// cyclic double cover it is the projected base edge.
#[derive(Clone, Debug)]
pub struct WeightedAdj {
    pub n: usize,
    pub adj: Vec<Vec<(EdgeId, Vertex)>>,
    pub weight: Vec<f64>,
    pub tie_id: Vec<EdgeId>,
}

impl WeightedAdj {
    pub fn from_graph(g: &EmbeddedGraph) -> WeightedAdj {
        WeightedAdj {
            n: g.vertex_count(),
            adj: g.adjacency(),
            weight: g.edges().iter().map(|e| e.weight).collect(),
            tie_id: (0..g.edge_count() as EdgeId).collect(),
        }
    }
}

/// Dijkstra tree from one source (or a set of seeded starts).
#[derive(Clone, Debug)]
pub struct SpTree {
    pub source: Vertex,
    pub dist: Vec<Option<PathKey>>,
    /// `(edge, previous vertex)` pairs; `None` at seeds.
    pub parent: Vec<Option<(EdgeId, Vertex)>>,
}

impl SpTree {
    /// Edge ids of the tree path from the seed to `v`, seed end first.
    pub fn path_edges(&self, v: Vertex) -> Vec<EdgeId> {
        let mut edges = Vec::new();
        let mut cur = v;
        while let Some((e, from)) = self.parent[cur] {
            edges.push(e);
            cur = from;
        }
        edges.reverse();
        edges
    }

    /// Vertices of the tree path from the seed to `v`, seed first.
    pub fn path_vertices(&self, v: Vertex) -> Vec<Vertex> {
        let mut verts = vec![v];
        let mut cur = v;
        while let Some((_, from)) = self.parent[cur] {
            cur = from;
            verts.push(cur);
        }
        verts.reverse();
        verts
    }

    pub fn key(&self, v: Vertex) -> &PathKey {
        self.dist[v].as_ref().expect("graph is connected")
    }

    /// True when `e` is one of the tree edges.
    pub fn uses_edge(&self, e: EdgeId) -> bool {
        self.parent.iter().flatten().any(|&(pe, _)| pe == e)
    }
}

#[derive(Clone)]
struct HeapEntry {
    key: PathKey,
    vertex: Vertex,
    parent: Option<(EdgeId, Vertex)>,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.vertex == other.vertex
    }
}
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed for the max-heap, vertex index as the final tie.
        other.key.cmp(&self.key).then_with(|| other.vertex.cmp(&self.vertex))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra with the unique-path key. `seeds` carry exact start keys:
/// a plain single-source run seeds `(source, PathKey::empty())`; the
/// double-cover selection seeds every vertex of a lifted shortest path
/// with its exact subpath key.
pub fn dijkstra_seeded(adj: &WeightedAdj, seeds: &[(Vertex, PathKey)]) -> SpTree {
    let mut dist: Vec<Option<PathKey>> = vec![None; adj.n];
    let mut parent: Vec<Option<(EdgeId, Vertex)>> = vec![None; adj.n];
    let mut done = vec![false; adj.n];
    let mut heap = BinaryHeap::new();
    for (v, key) in seeds {
        let better = match &dist[*v] {
            None => true,
            Some(existing) => key < existing,
        };
        if better {
            dist[*v] = Some(key.clone());
            heap.push(HeapEntry { key: key.clone(), vertex: *v, parent: None });
        }
    }
    while let Some(HeapEntry { key, vertex, parent: par }) = heap.pop() {
        if done[vertex] {
            continue;
        }
        if dist[vertex].as_ref().is_some_and(|existing| *existing < key) {
            continue; // stale entry
        }
        done[vertex] = true;
        dist[vertex] = Some(key.clone());
        parent[vertex] = par;
        for &(e, to) in &adj.adj[vertex] {
            if done[to] {
                continue;
            }
            let cand = key.extended(adj.tie_id[e as usize], adj.weight[e as usize]);
            let better = match &dist[to] {
                None => true,
                Some(existing) => cand < *existing,
            };
            if better {
                dist[to] = Some(cand.clone());
                heap.push(HeapEntry { key: cand, vertex: to, parent: Some((e, vertex)) });
            }
        }
    }
    SpTree { source: seeds.first().map_or(0, |s| s.0), dist, parent }
}

/// Single-source shortest path tree on an embedded graph.
pub fn dijkstra(g: &EmbeddedGraph, source: Vertex) -> SpTree {
    let adj = WeightedAdj::from_graph(g);
    dijkstra_seeded(&adj, &[(source, PathKey::empty())])
}

/// All-pairs shortest paths by repeated Dijkstra, with the deterministic
/// unique tie-break. Paths are reconstructible from the per-source trees.
/// Sources run in parallel on the ambient rayon pool; the result is
/// independent of the thread count.
pub struct AllPairsShortest {
    pub trees: Vec<SpTree>,
}

pub fn all_pairs_shortest(g: &EmbeddedGraph) -> AllPairsShortest {
    use rayon::prelude::*;
    let adj = WeightedAdj::from_graph(g);
    let trees = (0..g.vertex_count())
        .into_par_iter()
        .map(|s| dijkstra_seeded(&adj, &[(s, PathKey::empty())]))
        .collect();
    AllPairsShortest { trees }
}

impl AllPairsShortest {
    pub fn dist(&self, u: Vertex, v: Vertex) -> f64 {
        self.key(u, v).weight()
    }

    pub fn key(&self, u: Vertex, v: Vertex) -> &PathKey {
        self.trees[u].dist[v].as_ref().expect("graph is connected")
    }

    /// Edge ids of the unique shortest u,v-path.
    pub fn path_edges(&self, u: Vertex, v: Vertex) -> Vec<EdgeId> {
        self.trees[u].path_edges(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn key_order_is_weight_then_hops_then_edges() {
        let a = PathKey::single(3, 1.0);
        let b = PathKey::single(1, 2.0);
        assert!(a < b);
        let c = PathKey::empty().extended(5, 1.0).extended(4, 0.0);
        assert!(a < c, "equal weight, fewer hops wins");
        let d = PathKey::single(2, 1.0);
        assert!(d < a, "equal weight and hops, smaller edge id wins");
        assert_eq!(c.edges, vec![4, 5], "edge multiset kept sorted");
    }

    #[test]
    fn key_extension_is_monotone() {
        let base = PathKey::single(7, 2.0);
        let ext = base.extended(1, 0.0);
        assert!(base < ext);
    }

    #[test]
    fn concat_matches_repeated_extension() {
        let a = PathKey::empty().extended(4, 1.0).extended(2, 2.0);
        let b = PathKey::empty().extended(3, 0.5).extended(2, 1.0);
        let c = a.concat(&b);
        let d = a.extended(3, 0.5).extended(2, 1.0);
        assert_eq!(c, d);
    }

    #[test]
    fn theta_distances() {
        let g = gen::theta().unwrap();
        let apsp = all_pairs_shortest(&g);
        assert_eq!(apsp.dist(0, 1), 1.0);
        assert_eq!(apsp.path_edges(0, 1), vec![0]);
        assert_eq!(apsp.dist(1, 1), 0.0);
    }

    #[test]
    fn grid_wraparound_distance() {
        let g = gen::torus_grid(3).unwrap();
        let apsp = all_pairs_shortest(&g);
        // Opposite corners of the 3x3 torus grid wrap around in two steps.
        assert_eq!(apsp.dist(0, 8), 2.0);
    }

    #[test]
    fn shortest_paths_are_symmetric() {
        let g = gen::torus_grid(4).unwrap();
        let apsp = all_pairs_shortest(&g);
        for u in 0..g.vertex_count() {
            for v in 0..g.vertex_count() {
                let mut a = apsp.path_edges(u, v);
                let b = apsp.path_edges(v, u);
                a.reverse();
                assert_eq!(a, b, "unique shortest paths must be direction independent");
            }
        }
    }

    #[test]
    fn subpaths_of_shortest_paths_are_shortest() {
        let g = gen::torus_grid(4).unwrap();
        let apsp = all_pairs_shortest(&g);
        for u in 0..g.vertex_count() {
            let tree = &apsp.trees[u];
            for v in 0..g.vertex_count() {
                let verts = tree.path_vertices(v);
                let edges = tree.path_edges(v);
                // Every prefix of the tree path is the unique shortest path
                // to its endpoint.
                for k in 0..verts.len() {
                    let sub = &edges[..k];
                    let expect = apsp.path_edges(u, verts[k]);
                    assert_eq!(sub, &expect[..]);
                }
            }
        }
    }
}
