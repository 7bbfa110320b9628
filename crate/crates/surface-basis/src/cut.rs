//! Cutting an embedded graph along a simple closed path or a simple open
//! path.
//!
//! Cutting duplicates the cut edges and splits the interior vertices; each
//! copy keeps the original cyclic order restricted to the darts on its side
//! of the cut. A two-sided closed path leaves two scar faces (new boundary
//! components), a one-sided one leaves a single scar of doubled length, and
//! an open path leaves one scar around the slit. Scars are flagged as
//! boundary faces of the resulting pieces, which may be disconnected.
//!
//! Only vertex-simple paths and cycles are supported; those can never cross
//! themselves under the rotation-alternation crossing test.

use thiserror::Error;

use crate::embed::{BuildError, Dart, EdgeId, EmbeddedGraph, EmbeddingSpec, FaceId, Vertex};
use crate::embed::{EdgeRecord, UnionFind};

#[derive(Debug, Error, PartialEq)]
pub enum CutError {
    #[error("edge {0} is not in the graph")]
    NotInGraph(EdgeId),
    #[error("cut edges must form one vertex-simple cycle or path")]
    NotSimple,
    #[error("a boundary face lies entirely on the cut")]
    BoundaryOnCut,
    #[error("cut produced an invalid embedding: {0}")]
    Rebuild(#[from] BuildError),
}

/// One connected component of the cut-open graph.
#[derive(Debug)]
pub struct CutPiece {
    pub graph: EmbeddedGraph,
    /// Piece vertex -> original vertex (copies map to the vertex they split).
    pub vertex_map: Vec<Vertex>,
    /// Piece edge -> original edge (both copies map to the cut edge).
    pub edge_map: Vec<EdgeId>,
    /// Faces created by the cut, flagged as boundary.
    pub scar_faces: Vec<FaceId>,
}

#[derive(Debug)]
pub struct CutResult {
    pub pieces: Vec<CutPiece>,
    /// One for a one-sided closed path or an open path, two otherwise.
    pub new_boundary_count: usize,
    pub closed: bool,
    pub one_sided: bool,
}

struct Position {
    vertex: Vertex,
    /// Dart of the departing cut edge at this vertex.
    delta: Dart,
    /// Dart of the arriving cut edge at this vertex.
    alpha: Dart,
    /// Orientation parity accumulated along the walk.
    z: bool,
}

/// Derives the walk `v_0 -e_0-> v_1 -e_1-> ...` from a simple cycle or path
/// edge set. Returns `(positions' vertices, edges in walk order, closed)`.
fn derive_walk(g: &EmbeddedGraph, edges: &[EdgeId]) -> Result<(Vec<Vertex>, Vec<EdgeId>, bool), CutError> {
    if edges.is_empty() {
        return Err(CutError::NotSimple);
    }
    for &e in edges {
        if e as usize >= g.edge_count() {
            return Err(CutError::NotInGraph(e));
        }
    }
    let mut set = edges.to_vec();
    set.sort_unstable();
    if set.windows(2).any(|w| w[0] == w[1]) {
        return Err(CutError::NotSimple);
    }
    // Vertex degrees within the cut subgraph; loops count twice.
    let mut deg: std::collections::BTreeMap<Vertex, usize> = std::collections::BTreeMap::new();
    for &e in &set {
        let rec = g.edge(e);
        *deg.entry(rec.u).or_insert(0) += 1;
        *deg.entry(rec.v).or_insert(0) += 1;
    }
    let odd: Vec<Vertex> = deg.iter().filter(|(_, &d)| d % 2 == 1).map(|(&v, _)| v).collect();
    let closed = match odd.len() {
        0 => true,
        2 => false,
        _ => return Err(CutError::NotSimple),
    };
    if deg.values().any(|&d| d > 2) {
        return Err(CutError::NotSimple);
    }
    // Walk from the start vertex, consuming edges.
    let start = if closed { *deg.keys().next().unwrap() } else { odd[0] };
    let mut incident: std::collections::BTreeMap<Vertex, Vec<EdgeId>> = std::collections::BTreeMap::new();
    for &e in &set {
        let rec = g.edge(e);
        incident.entry(rec.u).or_default().push(e);
        if !rec.is_loop() {
            incident.entry(rec.v).or_default().push(e);
        }
    }
    for v in incident.values_mut() {
        v.sort_unstable();
    }
    let mut used = std::collections::BTreeSet::new();
    let mut verts = vec![start];
    let mut walk_edges = Vec::new();
    let mut cur = start;
    loop {
        let next_edge = incident
            .get(&cur)
            .and_then(|es| es.iter().find(|e| !used.contains(*e)).copied());
        let Some(e) = next_edge else { break };
        used.insert(e);
        walk_edges.push(e);
        cur = g.edge(e).other(cur);
        verts.push(cur);
    }
    if walk_edges.len() != set.len() {
        return Err(CutError::NotSimple); // disconnected cut set
    }
    if closed {
        if cur != start || verts.len() != set.len() + 1 {
            return Err(CutError::NotSimple);
        }
        verts.pop();
    } else if verts.len() != set.len() + 1 || cur == start {
        return Err(CutError::NotSimple);
    }
    // Vertex-simple check.
    let mut sorted = verts.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(CutError::NotSimple);
    }
    Ok((verts, walk_edges, closed))
}

/// The dart of `e` at `v`, preferring the tail end; `skip` forces the other
/// dart when both ends sit at `v` (loops).
fn dart_at(g: &EmbeddedGraph, e: EdgeId, v: Vertex, skip: Option<Dart>) -> Dart {
    let rec = g.edge(e);
    let candidates = [Dart::tail_of(e), Dart::head_of(e)];
    for d in candidates {
        if rec.endpoint(d.is_head()) == v && Some(d) != skip {
            return d;
        }
    }
    unreachable!("edge {e} does not touch vertex {v}");
}

pub fn cut_along(g: &EmbeddedGraph, edges: &[EdgeId]) -> Result<CutResult, CutError> {
    let (verts, walk, closed) = derive_walk(g, edges)?;
    let k = walk.len();
    let m = g.edge_count();
    let n = g.vertex_count();
    let one_sided = closed && walk.iter().filter(|&&e| g.edge(e).sig).count() % 2 == 1;

    // Per-position darts and orientation parities.
    let mut positions = Vec::with_capacity(verts.len());
    let mut z = false;
    for i in 0..verts.len() {
        let v = verts[i];
        let delta = if closed || i < k { Some(walk[i % k]) } else { None };
        let alpha = if closed || i > 0 { Some(walk[(i + k - 1) % k]) } else { None };
        let (delta_dart, alpha_dart) = match (delta, alpha) {
            (Some(de), Some(ae)) => {
                let dd = dart_at(g, de, v, None);
                let ad = if ae == de { dd.reversed() } else { dart_at(g, ae, v, None) };
                // A loop supplies both darts at the same vertex: keep them apart.
                let dd = if ad == dd { dd.reversed() } else { dd };
                (dd, ad)
            }
            (Some(de), None) => {
                let dd = dart_at(g, de, v, None);
                (dd, dd)
            }
            (None, Some(ae)) => {
                let ad = dart_at(g, ae, v, None);
                (ad, ad)
            }
            (None, None) => unreachable!(),
        };
        positions.push(Position { vertex: v, delta: delta_dart, alpha: alpha_dart, z });
        if i < k {
            z ^= g.edge(walk[i]).sig;
        }
    }
    // Copy slots: copy c of edge e_i departs position i with slot c and
    // arrives at position i+1 with slot c ^ sig(e_i).
    // Copy ids: slot-0 copy reuses the original id, slot-1 copy gets m + idx.
    let copy_id = |idx: usize, slot: bool| -> EdgeId {
        if slot {
            (m + idx) as EdgeId
        } else {
            walk[idx]
        }
    };

    // New edge table: original edges plus one extra copy per cut edge.
    // Copies keep the original signature; local orientations at the split
    // vertices are inherited, so the agreement bit is unchanged.
    let mut new_edges: Vec<EdgeRecord> = g.edges().to_vec();
    let mut edge_map: Vec<EdgeId> = (0..m as EdgeId).collect();
    for &e in &walk {
        new_edges.push(g.edge(e).clone());
        edge_map.push(e);
    }

    // Vertex copies: interior (split) positions add one fresh vertex; the
    // slot-A copy reuses the original id. Open-path endpoints stay whole.
    let split_lo = usize::from(!closed);
    let split_hi = if closed { positions.len() } else { positions.len() - 1 };
    let mut vertex_map: Vec<Vertex> = (0..n).collect();
    let mut b_copy: Vec<Option<Vertex>> = vec![None; positions.len()];
    for (i, pos) in positions.iter().enumerate() {
        if i >= split_lo && i < split_hi {
            b_copy[i] = Some(vertex_map.len());
            vertex_map.push(pos.vertex);
        }
    }

    // Rebuild rotations.
    let mut rotations: Vec<Vec<Dart>> = g.rotations().to_vec();
    rotations.resize(vertex_map.len(), Vec::new());

    // Replaces the darts of cut edges at split positions.
    for (i, pos) in positions.iter().enumerate() {
        let rot = &g.rotations()[pos.vertex];
        let at = |d: Dart| rot.iter().position(|&x| x == d).unwrap();
        if i >= split_lo && i < split_hi {
            let di = at(pos.delta);
            let ai = at(pos.alpha);
            let mut arc_a = Vec::new();
            let mut j = (di + 1) % rot.len();
            while j != ai {
                arc_a.push(rot[j]);
                j = (j + 1) % rot.len();
            }
            let mut arc_b = Vec::new();
            let mut j = (ai + 1) % rot.len();
            while j != di {
                arc_b.push(rot[j]);
                j = (j + 1) % rot.len();
            }
            // Departing copy with slot == z_i and arriving copy with arrival
            // slot == z_i join the A-side; the other two the B-side.
            let dep_idx = i % k;
            let arr_idx = (i + k - 1) % k;
            let arr_sig = g.edge(walk[arr_idx]).sig;
            let dep_a = Dart::new(copy_id(dep_idx, pos.z), pos.delta.is_head());
            let dep_b = Dart::new(copy_id(dep_idx, !pos.z), pos.delta.is_head());
            // Arrival slot s satisfies s ^ sig = z_i  =>  s = z_i ^ sig.
            let arr_a = Dart::new(copy_id(arr_idx, pos.z ^ arr_sig), pos.alpha.is_head());
            let arr_b = Dart::new(copy_id(arr_idx, !(pos.z ^ arr_sig)), pos.alpha.is_head());
            let mut rot_a = vec![dep_a];
            rot_a.extend_from_slice(&arc_a);
            rot_a.push(arr_a);
            let mut rot_b = vec![arr_b];
            rot_b.extend_from_slice(&arc_b);
            rot_b.push(dep_b);
            rotations[pos.vertex] = rot_a;
            rotations[b_copy[i].unwrap()] = rot_b;
        } else if i == 0 {
            // Open-path start: replace the departing dart by both copies,
            // B-chain first so the scar wraps around the slit end.
            let di = at(pos.delta);
            let mut new_rot = rot.clone();
            new_rot.splice(
                di..=di,
                [
                    Dart::new(copy_id(0, true), pos.delta.is_head()),
                    Dart::new(copy_id(0, false), pos.delta.is_head()),
                ],
            );
            rotations[pos.vertex] = new_rot;
        } else {
            // Open-path tip: chain-A head first, then chain-B head.
            let ai = at(pos.alpha);
            let arr_idx = k - 1;
            let z_dep = positions[k - 1].z;
            let mut new_rot = rot.clone();
            new_rot.splice(
                ai..=ai,
                [
                    Dart::new(copy_id(arr_idx, z_dep), pos.alpha.is_head()),
                    Dart::new(copy_id(arr_idx, !z_dep), pos.alpha.is_head()),
                ],
            );
            rotations[pos.vertex] = new_rot;
        }
    }

    // Endpoints follow the darts: rotation membership determines them.
    for (v, rot) in rotations.iter().enumerate() {
        for &d in rot {
            let rec = &mut new_edges[d.edge() as usize];
            if d.is_head() {
                rec.v = v;
            } else {
                rec.u = v;
            }
        }
    }

    // Re-anchor original boundary faces to dart-side states off the cut;
    // the orientation side of a surviving dart is preserved by the surgery,
    // so the same (dart, z) state identifies the face image in the piece.
    let mut on_cut = vec![false; m];
    for &e in &walk {
        on_cut[e as usize] = true;
    }
    let mut boundary_anchors: Vec<(Dart, bool)> = Vec::new();
    for f in g.boundary_faces() {
        let anchor = g
            .face(f)
            .walk
            .iter()
            .flat_map(|&d| [(d, false), (d, true)])
            .find(|&(d, z)| !on_cut[d.edge() as usize] && g.face_of_dart_side(d, z) == f)
            .ok_or(CutError::BoundaryOnCut)?;
        boundary_anchors.push(anchor);
    }

    // Scar anchors. The A-side scar walk leaves position 0 along the slot-0
    // copy; the B-side scar threads copies backward and is anchored at the
    // slot-1 copy's arrival dart. One-sided cuts weave both threads into a
    // single scar, caught by the A anchor alone.
    let mut scar_anchors = vec![Dart::new(copy_id(0, false), positions[0].delta.is_head())];
    if closed && !one_sided {
        scar_anchors.push(Dart::new(copy_id(0, true), positions[1 % k].alpha.is_head()));
    }

    // Split into connected components and rebuild each piece.
    let nv = vertex_map.len();
    let mut uf = UnionFind::new(nv);
    for rec in &new_edges {
        uf.union(rec.u, rec.v);
    }
    let mut comp_of = vec![usize::MAX; nv];
    let mut n_comps = 0;
    for v in 0..nv {
        let r = uf.find(v);
        if comp_of[r] == usize::MAX {
            comp_of[r] = n_comps;
            n_comps += 1;
        }
        comp_of[v] = comp_of[r];
    }

    let mut pieces = Vec::new();
    let mut total_scars = 0;
    for c in 0..n_comps {
        let verts_in: Vec<Vertex> = (0..nv).filter(|&v| comp_of[v] == c).collect();
        let mut v_local = vec![usize::MAX; nv];
        for (i, &v) in verts_in.iter().enumerate() {
            v_local[v] = i;
        }
        let edges_in: Vec<usize> =
            (0..new_edges.len()).filter(|&e| comp_of[new_edges[e].u] == c).collect();
        let mut e_local = vec![u32::MAX; new_edges.len()];
        for (i, &e) in edges_in.iter().enumerate() {
            e_local[e] = i as u32;
        }
        let spec = EmbeddingSpec {
            vertex_count: verts_in.len(),
            edges: edges_in
                .iter()
                .map(|&e| EdgeRecord {
                    u: v_local[new_edges[e].u],
                    v: v_local[new_edges[e].v],
                    ..new_edges[e]
                })
                .collect(),
            rotations: verts_in
                .iter()
                .map(|&v| {
                    rotations[v]
                        .iter()
                        .map(|d| Dart::new(e_local[d.edge() as usize], d.is_head()))
                        .collect()
                })
                .collect(),
            boundary_darts: Vec::new(),
        };
        let mut graph = EmbeddedGraph::build(spec)?;
        // Flag scars and surviving original boundaries.
        let mut marked = Vec::new();
        let mut scar_faces = Vec::new();
        for &anchor in &scar_anchors {
            if e_local[anchor.edge() as usize] == u32::MAX {
                continue;
            }
            let local = Dart::new(e_local[anchor.edge() as usize], anchor.is_head());
            let f = graph.face_of_dart(local);
            if !marked.contains(&f) {
                marked.push(f);
                scar_faces.push(f);
                graph = graph.puncture(f);
            }
        }
        total_scars += scar_faces.len();
        for &(anchor, z) in &boundary_anchors {
            if e_local[anchor.edge() as usize] == u32::MAX {
                continue;
            }
            let local = Dart::new(e_local[anchor.edge() as usize], anchor.is_head());
            let f = graph.face_of_dart_side(local, z);
            if !marked.contains(&f) {
                marked.push(f);
                graph = graph.puncture(f);
            }
        }
        pieces.push(CutPiece {
            graph,
            vertex_map: verts_in.iter().map(|&v| vertex_map[v]).collect(),
            edge_map: edges_in.iter().map(|&e| edge_map[e]).collect(),
            scar_faces,
        });
    }

    Ok(CutResult { pieces, new_boundary_count: total_scars, closed, one_sided })
}
