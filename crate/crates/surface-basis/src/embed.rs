//! Cellular embeddings of undirected multigraphs on surfaces, described
//! combinatorially by a rotation system and a per-edge orientation signature.
//!
//! Every edge carries two darts (edge-ends). Faces are traced by walking
//! dart states `(dart, z)` where `z` is a local orientation bit flipped by
//! the signature of each traversed edge:
//!
//! ```text
//! step(d, z):  z' = z xor sig(edge(d))
//!              next = rotation_next(rev(d))   if z' = 0
//!                     rotation_prev(rev(d))   if z' = 1
//! ```
//!
//! The 4m states split into orbits; an orbit and its mirror image describe
//! the same face traversed in opposite directions, so faces are orbit pairs.
//! Boundary components are ordinary faces flagged as boundary, which keeps
//! one uniform tracing pass for closed and bordered surfaces.

use std::fmt;

use thiserror::Error;

pub type Vertex = usize;
pub type EdgeId = u32;
pub type FaceId = usize;

/// One end of an edge. Dart `e-` sits at the edge's tail vertex `u`,
/// dart `e+` at its head vertex `v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart(pub u32);

impl Dart {
    pub fn new(edge: EdgeId, head_end: bool) -> Dart {
        Dart(edge * 2 + head_end as u32)
    }

    pub fn tail_of(edge: EdgeId) -> Dart {
        Dart::new(edge, false)
    }

    pub fn head_of(edge: EdgeId) -> Dart {
        Dart::new(edge, true)
    }

    pub fn edge(self) -> EdgeId {
        self.0 / 2
    }

    pub fn is_head(self) -> bool {
        self.0 & 1 == 1
    }

    /// The other dart of the same edge.
    pub fn reversed(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.edge(), if self.is_head() { '+' } else { '-' })
    }
}

impl fmt::Debug for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dart({self})")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeRecord {
    pub u: Vertex,
    pub v: Vertex,
    pub weight: f64,
    /// Orientation signature bit: 1 when the rotations at the two endpoints
    /// disagree across this edge; cycles with odd signature sum are one-sided.
    pub sig: bool,
}

impl EdgeRecord {
    pub fn endpoint(&self, head_end: bool) -> Vertex {
        if head_end {
            self.v
        } else {
            self.u
        }
    }

    pub fn other(&self, w: Vertex) -> Vertex {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// Raw combinatorial description of an embedding, as parsed from an
/// instance file or produced by a generator.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSpec {
    pub vertex_count: usize,
    pub edges: Vec<EdgeRecord>,
    /// Cyclic dart order per vertex. Vertices of degree zero get an empty list.
    pub rotations: Vec<Vec<Dart>>,
    /// One representative dart per boundary component; the face traced from
    /// `(dart, 0)` is flagged as that boundary.
    pub boundary_darts: Vec<Dart>,
}

#[derive(Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("edge {0} has endpoint {1} out of range")]
    EndpointOutOfRange(EdgeId, Vertex),
    #[error("edge {0} has negative or non-finite weight {1}")]
    BadWeight(EdgeId, f64),
    #[error("dart {0} appears in more than one rotation")]
    DartRepeated(Dart),
    #[error("dart {0} is missing from the rotation system")]
    DartMissing(Dart),
    #[error("dart {0} does not exist")]
    DartUnknown(Dart),
    #[error("dart {0} listed at vertex {1} but belongs to vertex {2}")]
    DartAtWrongVertex(Dart, Vertex, Vertex),
    #[error("rotation listed for vertex {0} which is out of range")]
    VertexOutOfRange(Vertex),
    #[error("boundary markers {0} and {1} trace to the same face")]
    DuplicateBoundary(Dart, Dart),
}

/// Topological invariants of an embedding.
///
/// `faces` counts every traced face including the ones flagged as boundary,
/// so `chi = n - m + faces` is the Euler characteristic of the closed
/// surface obtained by capping each boundary component with a disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TopoStats {
    pub n: usize,
    pub m: usize,
    pub faces: usize,
    pub boundary: usize,
    pub chi: i64,
    pub genus: usize,
    pub orientable: bool,
    /// First Z2-homology rank of the bordered surface:
    /// `2g + max(b-1, 0)` orientable, `g + max(b-1, 0)` otherwise.
    pub beta: usize,
}

#[derive(Clone, Debug)]
pub struct Face {
    /// Dart sequence of the representative orbit; the walk traverses
    /// `edge(walk[i])` at step `i`. Its length is the face degree.
    pub walk: Vec<Dart>,
    pub is_boundary: bool,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.walk.len()
    }

    /// Edge ids that appear an odd number of times in the walk: the
    /// boundary of this face as a cycle-space element.
    pub fn boundary_edges(&self) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self.walk.iter().map(|d| d.edge()).collect();
        ids.sort_unstable();
        let mut out = Vec::new();
        let mut i = 0;
        while i < ids.len() {
            let mut j = i;
            while j < ids.len() && ids[j] == ids[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                out.push(ids[i]);
            }
            i = j;
        }
        out
    }
}

/// Dual of an embedding: one vertex per face (including boundary faces),
/// and dual edges in bijection with primal edges by shared id.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub vertex_count: usize,
    /// `ends[e] = (f, g)`: primal edge `e` separates faces `f` and `g`
    /// (equal for an edge with the same face on both sides).
    pub ends: Vec<(FaceId, FaceId)>,
    pub boundary_vertices: Vec<FaceId>,
}

impl DualGraph {
    pub fn other_face(&self, e: EdgeId, f: FaceId) -> FaceId {
        let (a, b) = self.ends[e as usize];
        if f == a {
            b
        } else {
            a
        }
    }
}

/// An immutable cellular embedding with traced faces and cached invariants.
#[derive(Clone, Debug)]
pub struct EmbeddedGraph {
    vertex_count: usize,
    edges: Vec<EdgeRecord>,
    rotations: Vec<Vec<Dart>>,
    rot_next: Vec<Dart>,
    rot_prev: Vec<Dart>,
    faces: Vec<Face>,
    /// For each state `dart*2 + z`, the face owning it.
    face_of_state: Vec<FaceId>,
    stats: TopoStats,
}

impl EmbeddedGraph {
    pub fn build(spec: EmbeddingSpec) -> Result<EmbeddedGraph, BuildError> {
        let n = spec.vertex_count;
        if n == 0 {
            return Err(BuildError::NoVertices);
        }
        let m = spec.edges.len();
        for (e, rec) in spec.edges.iter().enumerate() {
            let e = e as EdgeId;
            if rec.u >= n {
                return Err(BuildError::EndpointOutOfRange(e, rec.u));
            }
            if rec.v >= n {
                return Err(BuildError::EndpointOutOfRange(e, rec.v));
            }
            if !rec.weight.is_finite() || rec.weight < 0.0 {
                return Err(BuildError::BadWeight(e, rec.weight));
            }
        }
        if spec.rotations.len() > n {
            return Err(BuildError::VertexOutOfRange(spec.rotations.len() - 1));
        }

        // Validate the rotation system: every dart exactly once, at the
        // vertex it is incident to.
        let mut seen = vec![false; 2 * m];
        let mut rotations = spec.rotations.clone();
        rotations.resize(n, Vec::new());
        for (v, rot) in rotations.iter().enumerate() {
            for &d in rot {
                if d.edge() as usize >= m {
                    return Err(BuildError::DartUnknown(d));
                }
                let home = spec.edges[d.edge() as usize].endpoint(d.is_head());
                if home != v {
                    return Err(BuildError::DartAtWrongVertex(d, v, home));
                }
                if seen[d.index()] {
                    return Err(BuildError::DartRepeated(d));
                }
                seen[d.index()] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(BuildError::DartMissing(Dart(i as u32)));
        }

        // Connectivity.
        let mut uf = UnionFind::new(n);
        for rec in &spec.edges {
            uf.union(rec.u, rec.v);
        }
        let root = uf.find(0);
        if (0..n).any(|v| uf.find(v) != root) {
            return Err(BuildError::Disconnected);
        }

        // Rotation permutation over darts.
        let mut rot_next = vec![Dart(0); 2 * m];
        let mut rot_prev = vec![Dart(0); 2 * m];
        for rot in &rotations {
            let k = rot.len();
            for i in 0..k {
                rot_next[rot[i].index()] = rot[(i + 1) % k];
                rot_prev[rot[i].index()] = rot[(i + k - 1) % k];
            }
        }

        let mut g = EmbeddedGraph {
            vertex_count: n,
            edges: spec.edges,
            rotations,
            rot_next,
            rot_prev,
            faces: Vec::new(),
            face_of_state: Vec::new(),
            stats: TopoStats {
                n,
                m,
                faces: 0,
                boundary: 0,
                chi: 0,
                genus: 0,
                orientable: true,
                beta: 0,
            },
        };
        g.trace_faces();

        // Boundary designation.
        for (i, &d) in spec.boundary_darts.iter().enumerate() {
            if d.edge() as usize >= m {
                return Err(BuildError::DartUnknown(d));
            }
            let f = g.face_of_state[d.index() * 2];
            if g.faces[f].is_boundary {
                let prev = spec.boundary_darts[..i]
                    .iter()
                    .copied()
                    .find(|&p| g.face_of_state[p.index() * 2] == f)
                    .unwrap_or(d);
                return Err(BuildError::DuplicateBoundary(prev, d));
            }
            g.faces[f].is_boundary = true;
        }

        g.compute_stats();
        Ok(g)
    }

    /// Face-walk transition on states `(dart, z)`.
    fn step(&self, d: Dart, z: bool) -> (Dart, bool) {
        let z2 = z ^ self.edges[d.edge() as usize].sig;
        let r = d.reversed();
        let next = if z2 { self.rot_prev[r.index()] } else { self.rot_next[r.index()] };
        (next, z2)
    }

    /// Mirror state: the same edge traversal seen from the reversed walk.
    fn mirror(&self, d: Dart, z: bool) -> (Dart, bool) {
        (d.reversed(), !(z ^ self.edges[d.edge() as usize].sig))
    }

    fn trace_faces(&mut self) {
        let m = self.edges.len();
        if m == 0 {
            // A lone vertex is the sphere with one (empty) face.
            self.faces = vec![Face { walk: Vec::new(), is_boundary: false }];
            self.face_of_state = Vec::new();
            return;
        }
        let n_states = 4 * m;
        let mut face_of_state = vec![usize::MAX; n_states];
        let mut faces = Vec::new();
        for s0 in 0..n_states {
            if face_of_state[s0] != usize::MAX {
                continue;
            }
            let face_id = faces.len();
            // Walk the orbit of s0.
            let mut walk = Vec::new();
            let (mut d, mut z) = (Dart((s0 / 2) as u32), s0 % 2 == 1);
            loop {
                face_of_state[d.index() * 2 + z as usize] = face_id;
                walk.push(d);
                let (nd, nz) = self.step(d, z);
                (d, z) = (nd, nz);
                if d.index() * 2 + z as usize == s0 {
                    break;
                }
            }
            // Mark the mirror orbit as the same face.
            let s_mirror = {
                let (md, mz) = self.mirror(Dart((s0 / 2) as u32), s0 % 2 == 1);
                md.index() * 2 + mz as usize
            };
            debug_assert_eq!(face_of_state[s_mirror], usize::MAX, "orbit equals its own mirror");
            let (mut d, mut z) = (Dart((s_mirror / 2) as u32), s_mirror % 2 == 1);
            loop {
                face_of_state[d.index() * 2 + z as usize] = face_id;
                let (nd, nz) = self.step(d, z);
                (d, z) = (nd, nz);
                if d.index() * 2 + z as usize == s_mirror {
                    break;
                }
            }
            faces.push(Face { walk, is_boundary: false });
        }
        debug_assert_eq!(
            faces.iter().map(Face::degree).sum::<usize>() * 2,
            n_states,
            "face walks must cover each dart state exactly once"
        );
        self.faces = faces;
        self.face_of_state = face_of_state;
    }

    fn compute_stats(&mut self) {
        let n = self.vertex_count;
        let m = self.edges.len();
        let faces = self.faces.len();
        let boundary = self.faces.iter().filter(|f| f.is_boundary).count();
        let chi = n as i64 - m as i64 + faces as i64;
        let orientable = self.check_orientable();
        let genus = if orientable {
            debug_assert!(chi % 2 == 0 && chi <= 2, "orientable capped surface has even chi <= 2");
            ((2 - chi) / 2) as usize
        } else {
            (2 - chi) as usize
        };
        let base = if orientable { 2 * genus } else { genus };
        let beta = base + boundary.saturating_sub(1);
        self.stats = TopoStats { n, m, faces, boundary, chi, genus, orientable, beta };
    }

    /// Two-colors a spanning tree by signature parity; the embedding is
    /// orientable iff every non-tree edge closes an even-signature cycle.
    fn check_orientable(&self) -> bool {
        let n = self.vertex_count;
        let mut color = vec![None; n];
        color[0] = Some(false);
        let mut queue = std::collections::VecDeque::from([0usize]);
        let adj = self.adjacency();
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &(e, v) in &adj[u] {
                let cv = cu ^ self.edges[e as usize].sig;
                match color[v] {
                    None => {
                        color[v] = Some(cv);
                        queue.push_back(v);
                    }
                    Some(existing) => {
                        if existing != cv {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeRecord {
        &self.edges[e as usize]
    }

    pub fn weight(&self, e: EdgeId) -> f64 {
        self.edges[e as usize].weight
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotations
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f]
    }

    pub fn stats(&self) -> TopoStats {
        self.stats
    }

    /// Dimension of the cycle space, `m - n + 1`.
    pub fn cycle_space_dim(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    pub fn vertex_of_dart(&self, d: Dart) -> Vertex {
        self.edges[d.edge() as usize].endpoint(d.is_head())
    }

    /// The two faces incident to an edge (equal when the edge has the same
    /// face on both sides).
    pub fn faces_of_edge(&self, e: EdgeId) -> (FaceId, FaceId) {
        let d = Dart::tail_of(e);
        (self.face_of_state[d.index() * 2], self.face_of_state[d.index() * 2 + 1])
    }

    pub fn face_of_dart(&self, d: Dart) -> FaceId {
        self.face_of_state[d.index() * 2]
    }

    /// Face owning the traversal of `d` with local orientation `z`; the two
    /// sides of an edge are the `z = false` and `z = true` states of a dart.
    pub fn face_of_dart_side(&self, d: Dart, z: bool) -> FaceId {
        self.face_of_state[d.index() * 2 + z as usize]
    }

    pub fn boundary_faces(&self) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&f| self.faces[f].is_boundary).collect()
    }

    pub fn interior_faces(&self) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&f| !self.faces[f].is_boundary).collect()
    }

    /// `(edge, neighbor)` lists; a loop contributes two entries at its vertex.
    pub fn adjacency(&self) -> Vec<Vec<(EdgeId, Vertex)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, rec) in self.edges.iter().enumerate() {
            adj[rec.u].push((e as EdgeId, rec.v));
            adj[rec.v].push((e as EdgeId, rec.u));
        }
        adj
    }

    pub fn dual(&self) -> DualGraph {
        let ends = (0..self.edges.len() as EdgeId).map(|e| self.faces_of_edge(e)).collect();
        DualGraph {
            vertex_count: self.faces.len(),
            ends,
            boundary_vertices: self.boundary_faces(),
        }
    }

    /// Flags `face` as a boundary component (punching out an open disk).
    /// Capped invariants are unchanged; `b` grows by one.
    pub fn puncture(&self, face: FaceId) -> EmbeddedGraph {
        assert!(!self.faces[face].is_boundary, "face {face} is already a boundary");
        let mut g = self.clone();
        g.faces[face].is_boundary = true;
        g.compute_stats();
        g
    }

    /// Clears the boundary flag of `face`, filling the hole back with a disk.
    pub fn refill(&self, face: FaceId) -> EmbeddedGraph {
        assert!(self.faces[face].is_boundary, "face {face} is not a boundary");
        let mut g = self.clone();
        g.faces[face].is_boundary = false;
        g.compute_stats();
        g
    }

    /// The embedding spec this graph was built from. Boundary markers are
    /// normalized to a dart whose `z = 0` state lies on the face, matching
    /// the `bnd` directive's tracing convention (every face owns such a
    /// state: a z=1 state followed through a one-sided edge, or mirrored
    /// across a two-sided one, lands at z=0).
    pub fn to_spec(&self) -> EmbeddingSpec {
        let boundary_darts = (0..self.faces.len())
            .filter(|&f| self.faces[f].is_boundary)
            .map(|f| {
                self.faces[f]
                    .walk
                    .iter()
                    .flat_map(|&d| [d, d.reversed()])
                    .find(|&d| self.face_of_state[d.index() * 2] == f)
                    .expect("every face owns a z=0 state")
            })
            .collect();
        EmbeddingSpec {
            vertex_count: self.vertex_count,
            edges: self.edges.clone(),
            rotations: self.rotations.clone(),
            boundary_darts,
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
