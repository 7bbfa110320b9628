//! Minimum homology basis via the cyclic double cover, for orientable and
//! non-orientable embeddings.
//!
//! For a support vector `S`, the cyclic double cover has vertices `(v, z)`
//! and edges `(uv, z) = (u, z)(v, z xor <S, [uv]_h>)`: walking an edge
//! flips sheets exactly when the edge has odd product with `S`. A cycle
//! lifts to a closed walk iff its homology signature is orthogonal to `S`,
//! so the minimum-weight odd cycle is the shortest `(s,0) -> (s,1)` path,
//! minimized over the vertices `s` of a small system of shortest paths that
//! every non-null-homologous cycle must touch.
//!
//! The multiple-source shortest path structure the asymptotic bound relies
//! on is replaced by one seeded Dijkstra per path vertex; distances along
//! the lifted path are seeded exactly since lifts of shortest paths stay
//! shortest.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::decompose::{copaths, tree_coforest, CoPathSystem, DecomposeError, TreeCoforest};
use crate::embed::{Dart, EdgeId, EmbeddedGraph, EmbeddingSpec, Vertex};
use crate::gf2::{BitMatrix, BitVec};
use crate::mcb::BasisCycle;
use crate::shortest::{dijkstra_seeded, PathKey, WeightedAdj};
use crate::sparsify::sparsify;
use crate::support::{Recursion, SupportEngine, SupportError};

#[derive(Debug, Error)]
pub enum MhbError {
    #[error("support vector must be nonzero")]
    ZeroSupport,
    #[error("no path system vertex reaches an odd cycle; internal state corrupted")]
    NoOddCycle,
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Support(#[from] SupportError),
}

/// The cyclic double cover `G^2_S`, embedded.
pub struct DoubleCover {
    /// Raw combinatorial description; always present.
    pub spec: EmbeddingSpec,
    /// The built embedding. `None` exactly when the cover is disconnected,
    /// which happens iff no cycle has odd product with `S` (in particular
    /// for `S = 0`, which the selection never queries).
    pub graph: Option<EmbeddedGraph>,
    pub base_n: usize,
    pub base_m: usize,
    pub weight: Vec<f64>,
    /// Per base edge: `<S, [e]_h>`; traversing the edge flips sheets iff set.
    pub edge_parity: Vec<bool>,
}

impl DoubleCover {
    /// Cover vertex `(v, z)`.
    pub fn lift_vertex(&self, v: Vertex, z: bool) -> Vertex {
        v + if z { self.base_n } else { 0 }
    }

    pub fn project_vertex(&self, x: Vertex) -> (Vertex, bool) {
        (x % self.base_n, x >= self.base_n)
    }

    /// Cover edge `(e, z)`: the copy whose tail-end sits on sheet `z`.
    pub fn lift_edge(&self, e: EdgeId, z: bool) -> EdgeId {
        2 * e + z as u32
    }

    pub fn project_edge(&self, e: EdgeId) -> EdgeId {
        e / 2
    }
}

/// Builds the cover as a full embedded graph: rotations are copied with
/// sheet assignments following the edge parities, signatures are inherited,
/// and each base boundary face marks the one or two cover faces over it.
pub fn build_double_cover(g: &EmbeddedGraph, s: &BitVec, cp: &CoPathSystem) -> DoubleCover {
    let n = g.vertex_count();
    let m = g.edge_count();
    assert_eq!(s.len(), cp.beta, "support vectors are beta-bit");
    let edge_parity: Vec<bool> =
        (0..m as u32).map(|e| s.dot(&cp.edge_homology_signature(e))).collect();

    let mut edges = Vec::with_capacity(2 * m);
    for e in 0..m {
        let rec = g.edge(e as u32);
        for z in [false, true] {
            let flip = edge_parity[e];
            edges.push(crate::embed::EdgeRecord {
                u: rec.u + if z { n } else { 0 },
                v: rec.v + if z != flip { n } else { 0 },
                weight: rec.weight,
                sig: rec.sig,
            });
        }
    }
    // Lift of a dart at (v, z): a tail dart keeps the sheet, a head dart
    // belongs to the copy arriving on this sheet.
    let lift_dart = |d: Dart, z: bool| -> Dart {
        let e = d.edge();
        if d.is_head() {
            let copy = z ^ edge_parity[e as usize];
            Dart::new(2 * e + copy as u32, true)
        } else {
            Dart::new(2 * e + z as u32, false)
        }
    };
    let mut rotations = vec![Vec::new(); 2 * n];
    for v in 0..n {
        for z in [false, true] {
            rotations[v + if z { n } else { 0 }] =
                g.rotations()[v].iter().map(|&d| lift_dart(d, z)).collect();
        }
    }
    let mut spec = EmbeddingSpec { vertex_count: 2 * n, edges, rotations, boundary_darts: vec![] };
    let weight = spec.edges.iter().map(|e| e.weight).collect();
    // Trace once to find the distinct lifted boundary faces; a cover with
    // no sheet-crossing cycle stays two disjoint copies and is returned raw.
    let graph = match EmbeddedGraph::build(spec.clone()) {
        Err(crate::embed::BuildError::Disconnected) => None,
        Err(other) => panic!("cover of a valid embedding is valid: {other}"),
        Ok(unmarked) => {
            let mut marked = unmarked;
            let mut seen_faces = Vec::new();
            for f in g.boundary_faces() {
                // The (dart, side) state the base face owns; tracing
                // commutes with the covering projection at equal sides.
                let (d, z) = g
                    .face(f)
                    .walk
                    .iter()
                    .flat_map(|&d| [(d, false), (d, true)])
                    .find(|&(d, z)| g.face_of_dart_side(d, z) == f)
                    .expect("face walk darts carry the face's states");
                for sheet in [false, true] {
                    let cover_face = marked.face_of_dart_side(lift_dart(d, sheet), z);
                    if !seen_faces.contains(&cover_face) {
                        seen_faces.push(cover_face);
                        marked = marked.puncture(cover_face);
                    }
                }
            }
            spec.boundary_darts = marked.to_spec().boundary_darts;
            Some(marked)
        }
    };
    DoubleCover { spec, graph, base_n: n, base_m: m, weight, edge_parity }
}

/// A system of shortest paths met by every non-null-homologous cycle:
/// the root paths to the endpoints of the leftover edges of a greedy
/// tree-coforest decomposition (whose tree is the shortest-path tree).
#[derive(Clone, Debug)]
pub struct ShortestPathSystem {
    /// Root paths; a path may be trivial (a single vertex).
    pub paths: Vec<PiPath>,
}

#[derive(Clone, Debug)]
pub struct PiPath {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

pub fn shortest_path_system(g: &EmbeddedGraph, d: &TreeCoforest) -> ShortestPathSystem {
    let mut paths = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for &e in &d.leftover_edges {
        let rec = g.edge(e);
        for v in [rec.u, rec.v] {
            let vertices = d.tree.path_vertices(v);
            if seen.insert(vertices.clone()) {
                let edges = d.tree.path_edges(v);
                paths.push(PiPath { vertices, edges });
            }
        }
    }
    ShortestPathSystem { paths }
}

/// Minimum-weight cycle with odd homology product against `S`, found as a
/// shortest sheet-crossing path in the cyclic double cover.
pub fn select_min_homology_cycle(
    g: &EmbeddedGraph,
    d: &TreeCoforest,
    cp: &CoPathSystem,
    s: &BitVec,
) -> Result<SelectedHomologyCycle, MhbError> {
    let pi = shortest_path_system(g, d);
    select_with_system(g, cp, &pi, s)
}

#[derive(Clone, Debug)]
pub struct SelectedHomologyCycle {
    pub edges: Vec<EdgeId>,
    pub key: PathKey,
    pub hsig: BitVec,
}

pub(crate) fn select_with_system(
    g: &EmbeddedGraph,
    cp: &CoPathSystem,
    pi: &ShortestPathSystem,
    s: &BitVec,
) -> Result<SelectedHomologyCycle, MhbError> {
    if s.is_zero() {
        return Err(MhbError::ZeroSupport);
    }
    let cover = build_double_cover(g, s, cp);
    let adj = cover_adjacency(&cover);

    // For each path and each of its vertices, the shortest (s,0)->(s,1)
    // path, with the lift of the path seeded at exact subpath keys.
    let jobs: Vec<(usize, usize)> = pi
        .paths
        .iter()
        .enumerate()
        .flat_map(|(pidx, p)| (0..p.vertices.len()).map(move |vi| (pidx, vi)))
        .collect();
    let best = jobs
        .par_iter()
        .map(|&(pidx, vi)| {
            let path = &pi.paths[pidx];
            let (key, parent_info) = cross_sheet_shortest(&cover, &adj, path, vi);
            (key, parent_info, pidx, vi)
        })
        .min_by(|a, b| {
            let ka = (&a.0, a.2, a.3);
            let kb = (&b.0, b.2, b.3);
            match (&ka.0, &kb.0) {
                (None, None) => std::cmp::Ordering::Equal,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (Some(_), None) => std::cmp::Ordering::Less,
                (Some(x), Some(y)) => x.cmp(y).then(ka.1.cmp(&kb.1)).then(ka.2.cmp(&kb.2)),
            }
        })
        .ok_or(MhbError::NoOddCycle)?;

    let (Some(key), edges, _, _) = best else {
        return Err(MhbError::NoOddCycle);
    };
    debug_assert_eq!(key.edges.len() as u32, key.hops, "odd walk projects to a simple cycle");
    let hsig = cp.homology_signature(edges.iter().copied());
    debug_assert!(s.dot(&hsig), "selected cycle must have odd product");
    Ok(SelectedHomologyCycle { edges, key, hsig })
}

fn cover_adjacency(cover: &DoubleCover) -> WeightedAdj {
    let mut adj = vec![Vec::new(); cover.spec.vertex_count];
    for (e, rec) in cover.spec.edges.iter().enumerate() {
        adj[rec.u].push((e as u32, rec.v));
        adj[rec.v].push((e as u32, rec.u));
    }
    WeightedAdj {
        n: cover.spec.vertex_count,
        adj,
        weight: cover.weight.clone(),
        // Tie-break ids project to the base so lifted walks compare
        // coherently with base walks.
        tie_id: (0..cover.spec.edges.len() as u32).map(|e| cover.project_edge(e)).collect(),
    }
}

/// Shortest path from `(s,0)` to `(s,1)` where `s = path.vertices[vi]`,
/// seeding exact distances along the lift of `path` through `(s,0)`.
/// Returns the key and the projected edge set.
fn cross_sheet_shortest(
    cover: &DoubleCover,
    adj: &WeightedAdj,
    path: &PiPath,
    vi: usize,
) -> (Option<PathKey>, Vec<EdgeId>) {
    let s = path.vertices[vi];
    // Walk left and right from vi, accumulating exact subpath keys and the
    // sheet parities of the lift through (s, 0).
    let mut seeds = Vec::with_capacity(path.vertices.len());
    for dir in [-1i32, 1] {
        let mut z = false;
        let mut key = PathKey::empty();
        let mut pos = vi as i32;
        loop {
            if pos != vi as i32 || dir < 0 {
                let lifted = cover.lift_vertex(path.vertices[pos as usize], z);
                seeds.push((lifted, key.clone()));
            }
            let next = pos + dir;
            if next < 0 || next as usize >= path.vertices.len() {
                break;
            }
            let e = path.edges[if dir < 0 { next as usize } else { pos as usize }];
            key = key.extended(e, cover.weight[cover.lift_edge(e, false) as usize]);
            z ^= cover.edge_parity[e as usize];
            pos = next;
        }
    }
    let tree = dijkstra_seeded(adj, &seeds);
    let target = cover.lift_vertex(s, true);
    let Some(key) = tree.dist[target].clone() else {
        return (None, Vec::new());
    };
    // The key's tie-break ids are base ids: for the optimal selection the
    // multiset is exactly the simple cycle's edge set. Reconstruct the
    // projected edges from the key itself.
    (Some(key.clone()), key.edges.clone())
}

/// Tracks how the basis was assembled, mirroring the cycle-basis result.
#[derive(Debug)]
pub struct HomologyBasis {
    pub cycles: Vec<BasisCycle>,
    pub total_weight: f64,
    pub beta: usize,
    pub timings: Vec<(&'static str, Duration)>,
    pub normalization: Vec<String>,
}

pub fn minimum_homology_basis(g: &EmbeddedGraph) -> Result<HomologyBasis, MhbError> {
    minimum_homology_basis_with(g, Recursion::Balanced)
}

pub fn minimum_homology_basis_with(
    g: &EmbeddedGraph,
    recursion: Recursion,
) -> Result<HomologyBasis, MhbError> {
    let mut timings = Vec::new();
    let mut normalization = Vec::new();
    let t0 = Instant::now();
    let mut gn = g.clone();
    if gn.boundary_faces().is_empty() {
        let f = gn.faces().len() - 1;
        gn = gn.puncture(f);
        normalization.push(format!("punctured face {f}"));
    }
    timings.push(("normalize", t0.elapsed()));

    let t0 = Instant::now();
    let outcome = sparsify(&gn);
    timings.push(("sparsify", t0.elapsed()));

    let mut cycles: Vec<Vec<EdgeId>> = outcome.forced_mhb.clone();

    if let Some(res) = &outcome.residual {
        let rg = &res.graph;
        let beta = rg.stats().beta;
        debug_assert_eq!(beta, gn.stats().beta, "sparsification preserves homology rank");
        if beta > 0 {
            let t0 = Instant::now();
            let d = tree_coforest(rg)?;
            let cp = copaths(rg, &d);
            let pi = shortest_path_system(rg, &d);
            timings.push(("decompose", t0.elapsed()));

            let t0 = Instant::now();
            let mut engine = SupportEngine::new(beta);
            let mut picked: Vec<Vec<EdgeId>> = Vec::new();
            engine.run(recursion, &mut |_, s| {
                let sel = select_with_system(rg, &cp, &pi, s).map_err(|e| match e {
                    MhbError::NoOddCycle | MhbError::ZeroSupport => SupportError::NotOdd,
                    other => panic!("unexpected selection failure: {other}"),
                })?;
                picked.push(sel.edges.clone());
                Ok(sel.hsig)
            })?;
            timings.push(("recursion", t0.elapsed()));

            for edges in picked {
                cycles.push(edges.iter().map(|&e| res.edge_map[e as usize]).collect());
            }
        }
    }

    let t0 = Instant::now();
    let d_out = tree_coforest(&gn)?;
    let cp_out = copaths(&gn, &d_out);
    let mut basis = Vec::with_capacity(cycles.len());
    let mut total_weight = 0.0;
    for mut edges in cycles {
        edges.sort_unstable();
        let weight: f64 = edges.iter().map(|&e| gn.weight(e)).sum();
        total_weight += weight;
        let signature = cp_out.homology_signature(edges.iter().copied());
        basis.push(BasisCycle { edges, weight, signature });
    }
    timings.push(("signatures", t0.elapsed()));
    let beta = gn.stats().beta;
    debug_assert_eq!(basis.len(), beta);
    debug_assert_eq!(
        BitMatrix::from_rows(basis.iter().map(|c| c.signature.clone()).collect()).rank(),
        beta,
        "homology signatures of the output must have rank beta"
    );

    Ok(HomologyBasis { cycles: basis, total_weight, beta, timings, normalization })
}
