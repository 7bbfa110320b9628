//! Degree-1/2 face elimination.
//!
//! Interior faces of degree 1 or 2 are removed one at a time, each emitting
//! at most one forced basis cycle: a monogon's loop joins the minimum cycle
//! basis (never the homology basis — it bounds a disk), and for a bigon on
//! distinct edges the heavier edge `e'` joins as `σ·e'` with `σ` the
//! shortest path between its endpoints, recomputed on the current residual
//! graph. The loop ends when every interior face has degree 3 or more, or
//! the graph has collapsed to one of the terminal shapes: a single edge on
//! the sphere, a bare two-sided loop, or a one-sided loop on the projective
//! plane (which joins both bases).
//!
//! Boundary faces are never eliminated: removing them would change the
//! homology carried by the remaining cycles.

use crate::embed::{Dart, EdgeId, EdgeRecord, EmbeddedGraph, EmbeddingSpec};
use crate::shortest::{dijkstra, PathKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// A single non-loop edge on the sphere; nothing more to add.
    SpherePath,
    /// A single two-sided loop; it joined the cycle basis only.
    BareLoop,
    /// A single one-sided loop on the projective plane; it joined both bases.
    ProjectiveLoop,
}

#[derive(Debug)]
pub struct Residual {
    pub graph: EmbeddedGraph,
    /// Residual edge id -> original edge id.
    pub edge_map: Vec<EdgeId>,
}

#[derive(Debug)]
pub struct SparsifyOutcome {
    /// Cycles forced into the minimum cycle basis, as original edge sets,
    /// in extraction order.
    pub forced_mcb: Vec<Vec<EdgeId>>,
    /// Cycles forced into the minimum homology basis (terminal projective
    /// loop only).
    pub forced_mhb: Vec<Vec<EdgeId>>,
    pub residual: Option<Residual>,
    pub terminal: Option<Terminal>,
}

impl SparsifyOutcome {
    pub fn forced_mcb_weight(&self, g: &EmbeddedGraph) -> f64 {
        self.forced_mcb
            .iter()
            .flat_map(|c| c.iter())
            .map(|&e| g.weight(e))
            .sum()
    }
}

/// Mutable working copy keeping original edge ids.
struct Working {
    vertex_count: usize,
    edges: Vec<Option<EdgeRecord>>,
    rotations: Vec<Vec<Dart>>,
    /// Boundary anchors as (dart, side) states; re-anchored before their
    /// edge disappears.
    boundary: Vec<(Dart, bool)>,
}

impl Working {
    /// Dense build plus the dense->original edge map. Boundary faces are
    /// re-flagged from the tracked (dart, side) anchors, so the marking is
    /// exact regardless of which mirror orbit the tracer kept.
    fn build(&self) -> (EmbeddedGraph, Vec<EdgeId>) {
        let mut dense_of = vec![u32::MAX; self.edges.len()];
        let mut edge_map = Vec::new();
        let mut edges = Vec::new();
        for (id, rec) in self.edges.iter().enumerate() {
            if let Some(rec) = rec {
                dense_of[id] = edge_map.len() as u32;
                edge_map.push(id as EdgeId);
                edges.push(rec.clone());
            }
        }
        let rotations = self
            .rotations
            .iter()
            .map(|rot| {
                rot.iter()
                    .filter(|d| self.edges[d.edge() as usize].is_some())
                    .map(|d| Dart::new(dense_of[d.edge() as usize], d.is_head()))
                    .collect()
            })
            .collect();
        let spec = EmbeddingSpec {
            vertex_count: self.vertex_count,
            edges,
            rotations,
            boundary_darts: Vec::new(),
        };
        let mut g = EmbeddedGraph::build(spec).expect("edge removal keeps the embedding valid");
        let mut marked = Vec::new();
        for &(d, z) in &self.boundary {
            let local = Dart::new(dense_of[d.edge() as usize], d.is_head());
            let f = g.face_of_dart_side(local, z);
            if !marked.contains(&f) {
                marked.push(f);
                g = g.puncture(f);
            }
        }
        (g, edge_map)
    }
}

/// Comparison key used to pick the lighter edge of a bigon.
fn edge_key(g: &EmbeddedGraph, e: EdgeId) -> PathKey {
    PathKey::single(e, g.weight(e))
}

pub fn sparsify(g0: &EmbeddedGraph) -> SparsifyOutcome {
    let spec = g0.to_spec();
    let mut work = Working {
        vertex_count: spec.vertex_count,
        edges: spec.edges.iter().cloned().map(Some).collect(),
        rotations: spec.rotations,
        boundary: Vec::new(),
    };
    let mut out = SparsifyOutcome {
        forced_mcb: Vec::new(),
        forced_mhb: Vec::new(),
        residual: None,
        terminal: None,
    };

    // Anchor existing boundary faces by a surviving (dart, side) state.
    for f in g0.boundary_faces() {
        let d = g0.face(f).walk[0];
        let z = !(g0.face_of_dart_side(d, false) == f);
        work.boundary.push((d, z));
    }

    loop {
        let (g, edge_map) = work.build();
        let to_orig = |dense: EdgeId| edge_map[dense as usize];

        // Terminal shapes: a single edge left.
        if g.edge_count() <= 1 {
            if g.edge_count() == 0 {
                out.residual = Some(Residual { graph: g, edge_map });
                return out;
            }
            let rec = g.edge(0);
            if !rec.is_loop() {
                out.terminal = Some(Terminal::SpherePath);
            } else if rec.sig {
                // One-sided loop on the projective plane: both bases.
                out.forced_mcb.push(vec![to_orig(0)]);
                out.forced_mhb.push(vec![to_orig(0)]);
                out.terminal = Some(Terminal::ProjectiveLoop);
            } else if g.stats().beta == 0 {
                out.forced_mcb.push(vec![to_orig(0)]);
                out.terminal = Some(Terminal::BareLoop);
            } else {
                // A two-sided loop between two boundary components carries
                // homology; leave it to the main selection.
                out.residual = Some(Residual { graph: g, edge_map });
            }
            return out;
        }

        // Smallest interior face of degree <= 2, scanning faces in order.
        let victim = (0..g.faces().len())
            .filter(|&f| !g.face(f).is_boundary && g.face(f).degree() <= 2)
            .min_by_key(|&f| g.face(f).degree());
        let Some(f) = victim else {
            out.residual = Some(Residual { graph: g, edge_map });
            return out;
        };

        let walk = g.face(f).walk.clone();
        if walk.len() == 1 {
            // Monogon: a null-homologous loop, cheapest cycle through itself.
            let loop_dense = walk[0].edge();
            out.forced_mcb.push(vec![to_orig(loop_dense)]);
            remove_edge(&mut work, &g, &edge_map, loop_dense);
            continue;
        }

        let (da, db) = (walk[0], walk[1]);
        debug_assert_ne!(da.edge(), db.edge(), "single-edge shapes are terminal");

        // Bigon on distinct edges: keep the lighter, force sigma * heavier.
        let (a, b) = (da.edge(), db.edge());
        let (light, heavy) = if edge_key(&g, a) <= edge_key(&g, b) { (a, b) } else { (b, a) };
        let _ = light;
        let rec = g.edge(heavy);
        let mut cycle: Vec<EdgeId> = if rec.u == rec.v {
            Vec::new()
        } else {
            let tree = dijkstra(&g, rec.u);
            tree.path_edges(rec.v)
        };
        debug_assert!(!cycle.contains(&heavy), "the shortest path cannot be the heavy edge");
        cycle.push(heavy);
        let mut orig_cycle: Vec<EdgeId> = cycle.into_iter().map(to_orig).collect();
        orig_cycle.sort_unstable();
        out.forced_mcb.push(orig_cycle);
        remove_edge(&mut work, &g, &edge_map, heavy);
    }
}

/// Drops a dense edge from the working copy, re-anchoring any boundary
/// state that sat on it.
fn remove_edge(work: &mut Working, g: &EmbeddedGraph, edge_map: &[EdgeId], dense: EdgeId) {
    for (d, z) in work.boundary.iter_mut() {
        if d.edge() == edge_map[dense as usize] {
            let f = g.face_of_dart_side(Dart::new(dense, d.is_head()), *z);
            let (nd, nz) = g
                .face(f)
                .walk
                .iter()
                .flat_map(|&w| [(w, false), (w, true)])
                .find(|&(w, wz)| w.edge() != dense && g.face_of_dart_side(w, wz) == f)
                .expect("boundary face keeps at least one off-cut edge");
            *d = Dart::new(edge_map[nd.edge() as usize], nd.is_head());
            *z = nz;
        }
    }
    work.edges[edge_map[dense as usize] as usize] = None;
}
