//! Instance generators: the canonical fixtures, torus grids, and
//! seed-deterministic random rotation systems.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embed::{BuildError, Dart, EdgeRecord, EmbeddedGraph, EmbeddingSpec};

/// Theta graph on the sphere: two vertices joined by three parallel edges of
/// weights 1, 2, 3; the face bounded by edges 0 and 2 is the boundary.
pub fn theta_spec() -> EmbeddingSpec {
    EmbeddingSpec {
        vertex_count: 2,
        edges: vec![
            EdgeRecord { u: 0, v: 1, weight: 1.0, sig: false },
            EdgeRecord { u: 0, v: 1, weight: 2.0, sig: false },
            EdgeRecord { u: 0, v: 1, weight: 3.0, sig: false },
        ],
        rotations: vec![
            vec![Dart::tail_of(0), Dart::tail_of(1), Dart::tail_of(2)],
            vec![Dart::head_of(2), Dart::head_of(1), Dart::head_of(0)],
        ],
        boundary_darts: vec![Dart::tail_of(0)],
    }
}

pub fn theta() -> Result<EmbeddedGraph, BuildError> {
    EmbeddedGraph::build(theta_spec())
}

/// Theta graph with two of its three faces flagged as boundary: an annulus.
pub fn annulus_theta_spec() -> EmbeddingSpec {
    let mut spec = theta_spec();
    spec.boundary_darts = vec![Dart::tail_of(0), Dart::tail_of(2)];
    spec
}

pub fn annulus_theta() -> Result<EmbeddedGraph, BuildError> {
    EmbeddedGraph::build(annulus_theta_spec())
}

/// One vertex with two loops in alternating rotation order: the square
/// torus. Closed (no boundary); pipelines puncture the single face.
pub fn torus1_spec() -> EmbeddingSpec {
    EmbeddingSpec {
        vertex_count: 1,
        edges: vec![
            EdgeRecord { u: 0, v: 0, weight: 1.0, sig: false },
            EdgeRecord { u: 0, v: 0, weight: 1.0, sig: false },
        ],
        rotations: vec![vec![
            Dart::tail_of(0),
            Dart::tail_of(1),
            Dart::head_of(0),
            Dart::head_of(1),
        ]],
        boundary_darts: Vec::new(),
    }
}

pub fn torus1() -> Result<EmbeddedGraph, BuildError> {
    EmbeddedGraph::build(torus1_spec())
}

/// A single one-sided loop: the projective plane with one disk face.
pub fn projective_loop_spec() -> EmbeddingSpec {
    EmbeddingSpec {
        vertex_count: 1,
        edges: vec![EdgeRecord { u: 0, v: 0, weight: 1.0, sig: true }],
        rotations: vec![vec![Dart::tail_of(0), Dart::head_of(0)]],
        boundary_darts: Vec::new(),
    }
}

pub fn projective_loop() -> Result<EmbeddedGraph, BuildError> {
    EmbeddedGraph::build(projective_loop_spec())
}

/// K4 embedded on the sphere with unit weights; one triangle is the boundary.
pub fn k4_sphere_spec() -> EmbeddingSpec {
    // Edge ids: 0=01, 1=02, 2=03, 3=12, 4=13, 5=23. All rotations
    // counterclockwise for vertex 0 at the center of triangle 1-2-3.
    EmbeddingSpec {
        vertex_count: 4,
        edges: vec![
            EdgeRecord { u: 0, v: 1, weight: 1.0, sig: false },
            EdgeRecord { u: 0, v: 2, weight: 1.0, sig: false },
            EdgeRecord { u: 0, v: 3, weight: 1.0, sig: false },
            EdgeRecord { u: 1, v: 2, weight: 1.0, sig: false },
            EdgeRecord { u: 1, v: 3, weight: 1.0, sig: false },
            EdgeRecord { u: 2, v: 3, weight: 1.0, sig: false },
        ],
        rotations: vec![
            vec![Dart::tail_of(0), Dart::tail_of(1), Dart::tail_of(2)],
            vec![Dart::tail_of(3), Dart::head_of(0), Dart::tail_of(4)],
            vec![Dart::tail_of(5), Dart::head_of(1), Dart::head_of(3)],
            vec![Dart::head_of(4), Dart::head_of(2), Dart::head_of(5)],
        ],
        boundary_darts: vec![Dart::tail_of(0)],
    }
}

pub fn k4_sphere() -> Result<EmbeddedGraph, BuildError> {
    EmbeddedGraph::build(k4_sphere_spec())
}

/// One vertex, two loops, one of them one-sided: the Klein bottle.
pub fn klein_bottle_spec() -> EmbeddingSpec {
    EmbeddingSpec {
        vertex_count: 1,
        edges: vec![
            EdgeRecord { u: 0, v: 0, weight: 1.0, sig: true },
            EdgeRecord { u: 0, v: 0, weight: 1.0, sig: false },
        ],
        rotations: vec![vec![
            Dart::tail_of(0),
            Dart::tail_of(1),
            Dart::head_of(0),
            Dart::head_of(1),
        ]],
        boundary_darts: Vec::new(),
    }
}

pub fn klein_bottle() -> Result<EmbeddedGraph, BuildError> {
    EmbeddedGraph::build(klein_bottle_spec())
}

/// One vertex, four loops in octagon order: the closed genus-2 surface.
pub fn double_torus_spec() -> EmbeddingSpec {
    let loops = 4;
    EmbeddingSpec {
        vertex_count: 1,
        edges: (0..loops)
            .map(|_| EdgeRecord { u: 0, v: 0, weight: 1.0, sig: false })
            .collect(),
        rotations: vec![vec![
            Dart::tail_of(0),
            Dart::tail_of(1),
            Dart::head_of(0),
            Dart::head_of(1),
            Dart::tail_of(2),
            Dart::tail_of(3),
            Dart::head_of(2),
            Dart::head_of(3),
        ]],
        boundary_darts: Vec::new(),
    }
}

pub fn double_torus() -> Result<EmbeddedGraph, BuildError> {
    EmbeddedGraph::build(double_torus_spec())
}

/// N x N unit-weight grid on the torus, closed. Vertex `(i, j)` has id
/// `i*N + j`; its rightward edge has id `i*N + j` and its downward edge
/// `N*N + i*N + j`. Rotations run east, north, west, south.
pub fn torus_grid_spec(n: usize) -> EmbeddingSpec {
    assert!(n >= 1, "grid size must be positive");
    let vid = |i: usize, j: usize| (i % n) * n + (j % n);
    let nn = n * n;
    let mut edges = Vec::with_capacity(2 * nn);
    for i in 0..n {
        for j in 0..n {
            edges.push(EdgeRecord { u: vid(i, j), v: vid(i, j + 1), weight: 1.0, sig: false });
        }
    }
    for i in 0..n {
        for j in 0..n {
            edges.push(EdgeRecord { u: vid(i, j), v: vid(i + 1, j), weight: 1.0, sig: false });
        }
    }
    let mut rotations = vec![Vec::new(); nn];
    for i in 0..n {
        for j in 0..n {
            let v = vid(i, j);
            let up = vid(i + n - 1, j);
            let left = vid(i, j + n - 1);
            rotations[v] = vec![
                Dart::tail_of(v as u32),             // east: own right edge
                Dart::head_of((nn + up) as u32),     // north: down edge arriving from above
                Dart::head_of(left as u32),          // west: right edge arriving from the left
                Dart::tail_of((nn + v) as u32),      // south: own down edge
            ];
        }
    }
    EmbeddingSpec { vertex_count: nn, edges, rotations, boundary_darts: Vec::new() }
}

pub fn torus_grid(n: usize) -> Result<EmbeddedGraph, BuildError> {
    EmbeddedGraph::build(torus_grid_spec(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryMode {
    Closed,
    /// Mark the face traced from the first dart of edge 0.
    MarkFirstFace,
}

#[derive(Clone, Debug)]
pub struct RandomOptions {
    pub vertices: usize,
    /// Cycle-space dimension: the number of edges beyond a spanning tree.
    pub extra_edges: usize,
    pub seed: u64,
    pub weight_range: (u64, u64),
    /// All-zero signatures when true; uniformly random bits otherwise.
    pub orientable: bool,
    pub boundary: BoundaryMode,
}

impl RandomOptions {
    pub fn new(vertices: usize, extra_edges: usize, seed: u64) -> Self {
        RandomOptions {
            vertices,
            extra_edges,
            seed,
            weight_range: (1, 9),
            orientable: true,
            boundary: BoundaryMode::MarkFirstFace,
        }
    }
}

/// A connected random multigraph (loops and parallel edges allowed) with a
/// random rotation system. Any rotation system on a connected graph is a
/// valid cellular embedding, so this never fails. Deterministic per seed.
pub fn random_embedding(opts: &RandomOptions) -> Result<EmbeddedGraph, BuildError> {
    let n = opts.vertices.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v));
    }
    for _ in 0..opts.extra_edges {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        edges.push((u, v));
    }
    let (lo, hi) = opts.weight_range;
    let edges: Vec<EdgeRecord> = edges
        .into_iter()
        .map(|(u, v)| EdgeRecord {
            u,
            v,
            weight: rng.random_range(lo..=hi) as f64,
            sig: if opts.orientable { false } else { rng.random_range(0..2) == 1 },
        })
        .collect();
    let mut rotations: Vec<Vec<Dart>> = vec![Vec::new(); n];
    for (e, rec) in edges.iter().enumerate() {
        rotations[rec.u].push(Dart::tail_of(e as u32));
        rotations[rec.v].push(Dart::head_of(e as u32));
    }
    for rot in &mut rotations {
        rot.shuffle(&mut rng);
    }
    let mut spec = EmbeddingSpec { vertex_count: n, edges, rotations, boundary_darts: Vec::new() };
    match opts.boundary {
        BoundaryMode::Closed => EmbeddedGraph::build(spec),
        BoundaryMode::MarkFirstFace => {
            let g = EmbeddedGraph::build(spec.clone())?;
            if g.edge_count() > 0 {
                spec.boundary_darts = vec![g.faces()[0].walk[0]];
            }
            EmbeddedGraph::build(spec)
        }
    }
}

/// Random instance salted with degree-1 and degree-2 faces: parallel twins
/// (a duplicated edge adjacent in both rotations makes a bigon) and stacked
/// loops (a loop with adjacent darts makes a monogon).
pub fn random_with_degenerate_faces(opts: &RandomOptions, twins: usize, monogons: usize) -> Result<EmbeddedGraph, BuildError> {
    let base = random_embedding(opts)?;
    let mut spec = base.to_spec();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e3779b97f4a7c15);
    let (lo, hi) = opts.weight_range;
    for _ in 0..twins {
        if spec.edges.is_empty() {
            break;
        }
        let e = rng.random_range(0..spec.edges.len());
        let rec = spec.edges[e].clone();
        let id = spec.edges.len() as u32;
        spec.edges.push(EdgeRecord {
            weight: rng.random_range(lo..=hi) as f64,
            ..rec.clone()
        });
        // Insert the twin's darts right after the original's darts.
        let old_tail = Dart::tail_of(e as u32);
        let old_head = Dart::head_of(e as u32);
        let ru = &mut spec.rotations[rec.u];
        let pos = ru.iter().position(|&d| d == old_tail).unwrap();
        ru.insert(pos + 1, Dart::tail_of(id));
        let rv = &mut spec.rotations[rec.v];
        let pos = rv.iter().position(|&d| d == old_head).unwrap();
        rv.insert(pos + 1, Dart::head_of(id));
    }
    for _ in 0..monogons {
        let v = rng.random_range(0..spec.vertex_count);
        let id = spec.edges.len() as u32;
        spec.edges.push(EdgeRecord {
            u: v,
            v,
            weight: rng.random_range(lo..=hi) as f64,
            sig: false,
        });
        let rot = &mut spec.rotations[v];
        let pos = if rot.is_empty() { 0 } else { rng.random_range(0..=rot.len()) };
        rot.insert(pos, Dart::head_of(id));
        rot.insert(pos, Dart::tail_of(id));
    }
    EmbeddedGraph::build(spec)
}

/// The fixture set exercised by the cross-cutting invariant tests.
pub fn all_fixtures() -> Vec<EmbeddedGraph> {
    vec![
        theta().unwrap(),
        annulus_theta().unwrap(),
        torus1().unwrap(),
        projective_loop().unwrap(),
        k4_sphere().unwrap(),
        klein_bottle().unwrap(),
        double_torus().unwrap(),
        torus_grid(3).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_grid_counts() {
        let g = torus_grid(3).unwrap();
        let s = g.stats();
        assert_eq!((s.n, s.m, s.faces, s.boundary), (9, 18, 9, 0));
        assert_eq!((s.chi, s.genus), (0, 1));
        assert!(s.orientable);
        assert!(g.faces().iter().all(|f| f.degree() == 4));
    }

    #[test]
    fn random_embedding_is_seed_deterministic() {
        let a = random_embedding(&RandomOptions::new(6, 7, 42)).unwrap();
        let b = random_embedding(&RandomOptions::new(6, 7, 42)).unwrap();
        assert_eq!(a.to_spec(), b.to_spec());
        let c = random_embedding(&RandomOptions::new(6, 7, 43)).unwrap();
        assert_ne!(a.to_spec(), c.to_spec());
    }

    #[test]
    fn degenerate_seeding_creates_small_faces() {
        let g = random_with_degenerate_faces(&RandomOptions::new(5, 3, 7), 2, 2).unwrap();
        let smallest = g.faces().iter().map(|f| f.degree()).min().unwrap();
        assert!(smallest <= 2, "expected a face of degree 1 or 2");
    }
}
